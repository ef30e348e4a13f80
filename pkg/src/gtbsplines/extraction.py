"""Knot vectors, smoothness constraints, and the extraction operator.

The smooth B-spline-like basis of a mixed-degree spline space is obtained
from the piecewise (discontinuous) global Bernstein basis by annihilating
one smoothness constraint at a time.  Each constraint contributes a jump
vector ``a`` whose explicit nullspace factor is a two-band matrix of
nonnegative coefficients that sum to one column-wise; the product of all
factors is the extraction operator ``C`` with ``B(x) = C b(x)``.

Instead of testing floating-point entries of ``a`` against zero, the
implementation tracks the knot vectors of each intermediate space and derives
the nonzero band of every constraint structurally; out-of-band entries are
only ever rounding noise and are checked against a relative tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bernstein import BernsteinBasis
from .errors import BasisNonexistenceError, ConfigError, GTBError
from .sections import Partition, SectionSpace

__all__ = [
    "KnotVectors",
    "build_knot_vectors",
    "supersmoothness",
    "SmoothnessConstraints",
    "build_constraints",
    "constraint_band",
    "nullspace_step",
    "ExtractionMatrix",
    "extraction_operator",
]

# Relative degeneracy threshold for cascade divisors, and the ceiling for
# numerically-zero entries outside the structural band.
_DEGENERACY_RTOL = 1e-12
_OUT_OF_BAND_RTOL = 1e-10


def validate_smoothness(degrees, smoothness, breakpoints=None) -> None:
    """Check the admissibility bounds ``-1 <= r_i <= min(p_i, p_{i+1})`` with
    ``r_0 = r_m = -1``."""
    m = len(degrees)
    if len(smoothness) != m + 1:
        raise ConfigError(
            f"smoothness vector must have length {m + 1} (got {len(smoothness)})"
        )
    if smoothness[0] != -1 or smoothness[m] != -1:
        raise ConfigError("end smoothness entries must be -1")
    for i in range(1, m):
        lim = min(degrees[i - 1], degrees[i])
        if not (-1 <= smoothness[i] <= lim):
            where = f"x_{i}" if breakpoints is None else f"x_{i}={breakpoints[i]!r}"
            raise ConfigError(
                f"smoothness r={smoothness[i]} at {where} outside [-1, {lim}]"
            )


@dataclass(eq=False)
class KnotVectors:
    """Support descriptors of the basis functions.

    ``u[k]`` and ``v[k]`` (0-based here) are the endpoints of the support of
    basis function ``k``; together they generalize the classical open knot
    vector.  ``u_index``/``v_index`` store the breakpoint index of each knot,
    so multiplicity counting never compares floats.  ``sigma``/``mu`` are the
    running multiplicity sums

    ``sigma[i] = sum_{j<i} (p_{j+1} - r_j)``,  ``mu[i] = sum_{j<=i} (p_j - r_j)``.
    """

    u: np.ndarray
    v: np.ndarray
    u_index: np.ndarray
    v_index: np.ndarray
    sigma: np.ndarray
    mu: np.ndarray
    degrees: tuple[int, ...]
    smoothness: tuple[int, ...]

    @property
    def n_basis(self) -> int:
        return len(self.u)


def build_knot_vectors(partition: Partition, degrees, smoothness) -> KnotVectors:
    """Build the two knot vectors of a spline space.

    Parameters
    ----------
    partition : Partition
    degrees : sequence of int, length m
        Per-interval section dimensions minus one.
    smoothness : sequence of int, length m + 1
        Full smoothness vector including the ``-1`` end entries.

    The left vector repeats ``x_i`` with multiplicity ``p_{i+1} - r_i`` for
    ``i = 0 .. m-1``; the right vector repeats ``x_i`` with multiplicity
    ``p_i - r_i`` for ``i = 1 .. m``.  Both have length
    ``N = p_1 + 1 + sum_i (p_{i+1} - r_i)``, the space dimension.
    """
    degrees = tuple(int(p) for p in degrees)
    smoothness = tuple(int(r) for r in smoothness)
    m = partition.num_intervals
    if len(degrees) != m:
        raise ConfigError(f"need {m} degrees, got {len(degrees)}")
    validate_smoothness(degrees, smoothness, partition.breakpoints)

    bp = partition.breakpoints
    u_vals, u_idx = [], []
    for i in range(m):
        mult = degrees[i] - smoothness[i]
        u_vals.extend([bp[i]] * mult)
        u_idx.extend([i] * mult)
    v_vals, v_idx = [], []
    for i in range(1, m + 1):
        mult = degrees[i - 1] - smoothness[i]
        v_vals.extend([bp[i]] * mult)
        v_idx.extend([i] * mult)

    sigma = np.zeros(m + 1, dtype=int)
    mu = np.zeros(m + 1, dtype=int)
    for i in range(1, m + 1):
        sigma[i] = sigma[i - 1] + degrees[i - 1] - smoothness[i - 1]
        mu[i] = mu[i - 1] + degrees[i - 1] - smoothness[i]

    kv = KnotVectors(
        u=np.array(u_vals),
        v=np.array(v_vals),
        u_index=np.array(u_idx, dtype=int),
        v_index=np.array(v_idx, dtype=int),
        sigma=sigma,
        mu=mu,
        degrees=degrees,
        smoothness=smoothness,
    )
    if len(u_vals) != len(v_vals):
        raise GTBError("internal: knot vectors of unequal length")
    # u_k <= v_{k-1} and u_k < v_k for all k
    if not np.all(kv.u < kv.v):
        raise GTBError("internal: knot vector ordering violated (u_k < v_k)")
    if not np.all(kv.u[1:] <= kv.v[:-1]):
        raise GTBError("internal: knot vector ordering violated (u_k <= v_{k-1})")
    return kv


def supersmoothness(kv: KnotVectors, degrees, smoothness, k: int) -> tuple[int, int]:
    """Exact smoothness orders of basis function ``k`` (1-based) at the two
    ends of its support.

    With ``u_k = x_i`` and ``v_k = x_j``,

    ``r_u(k) = p_{i+1} - 1 - max{l >= 0 : u_k = u_{k+l}}`` and
    ``r_v(k) = p_j - 1 - max{l >= 0 : v_k = v_{k-l}}``.

    These can exceed the smoothness the space requires at that breakpoint.
    """
    n = kv.n_basis
    if not (1 <= k <= n):
        raise ConfigError(f"basis index {k} outside [1, {n}]")
    k0 = k - 1
    i = kv.u_index[k0]
    run = 0
    while k0 + run + 1 < n and kv.u_index[k0 + run + 1] == i:
        run += 1
    r_u = degrees[i] - 1 - run

    j = kv.v_index[k0]
    run = 0
    while k0 - run - 1 >= 0 and kv.v_index[k0 - run - 1] == j:
        run += 1
    r_v = degrees[j - 1] - 1 - run
    return int(r_u), int(r_v)


@dataclass(eq=False)
class SmoothnessConstraints:
    """Jump conditions of the global Bernstein basis, one column per
    constraint.

    Column ``rho(i, j) = sum_{k<i} (r_k + 1) + j`` (0-based) holds the jump of
    the ``j``-th derivative at breakpoint ``x_i`` for every global Bernstein
    function: the left-limit derivatives in the rows of interval ``i`` and the
    negated right-limit derivatives in the rows of interval ``i + 1``, exact
    zeros elsewhere.

    ``bands[rho]`` is the 1-based inclusive index range of the entries that
    are structurally nonzero once the preceding ``rho`` constraints have been
    applied.
    """

    matrix: np.ndarray
    columns: list[tuple[int, int]]
    bands: list[tuple[int, int]]
    degrees: tuple[int, ...]
    smoothness: tuple[int, ...]

    @property
    def n_constraints(self) -> int:
        return self.matrix.shape[1]

    @property
    def n_bernstein(self) -> int:
        return self.matrix.shape[0]


def constraint_band(degrees, smoothness, i: int, j: int) -> tuple[int, int]:
    """Structural nonzero band of the constraint ``(x_i, order j)``.

    Constraints are applied breakpoint by breakpoint, order by order.  When
    the ``j``-th-derivative constraint at ``x_i`` is reached, the running
    space is smooth to order ``r`` at breakpoints left of ``x_i``, to order
    ``j - 1`` at ``x_i``, and discontinuous to the right.  In that space
    exactly the functions ``mu .. sigma + 1`` (1-based) jump at ``x_i``:

    ``mu = sum_{l<i} (p_l - r_l) + p_i - j + 1``,
    ``sigma = p_1 + 1 + sum_{l<i} (p_{l+1} - r_l)``.
    """
    mu = sum(degrees[l - 1] - smoothness[l] for l in range(1, i)) + degrees[i - 1] - j + 1
    sigma = degrees[0] + 1 + sum(degrees[l] - smoothness[l] for l in range(1, i))
    return mu, sigma + 1


def build_constraints(
    sections: list[SectionSpace],
    bases: list[BernsteinBasis],
    partition: Partition,
    smoothness,
) -> SmoothnessConstraints:
    """Assemble the smoothness-constraint matrix from Bernstein endpoint tables."""
    m = partition.num_intervals
    degrees = tuple(s.degree for s in sections)
    smoothness = tuple(int(r) for r in smoothness)
    validate_smoothness(degrees, smoothness, partition.breakpoints)
    if len(bases) != m:
        raise ConfigError(f"need {m} Bernstein bases, got {len(bases)}")

    block_start = np.concatenate([[0], np.cumsum([p + 1 for p in degrees])])
    total = int(block_start[-1])
    n_constraints = sum(r + 1 for r in smoothness[1:m])

    matrix = np.zeros((total, n_constraints))
    columns: list[tuple[int, int]] = []
    bands: list[tuple[int, int]] = []
    col = 0
    for i in range(1, m):
        for j in range(smoothness[i] + 1):
            left = bases[i - 1].right_table[:, j]
            right = bases[i].left_table[:, j]
            matrix[block_start[i - 1] : block_start[i], col] = left
            matrix[block_start[i] : block_start[i + 1], col] = -right
            columns.append((i, j))
            bands.append(constraint_band(degrees, smoothness, i, j))
            col += 1
    return SmoothnessConstraints(matrix, columns, bands, degrees, smoothness)


def _infer_band(a: np.ndarray) -> tuple[int, int]:
    scale = np.max(np.abs(a))
    if scale == 0.0:
        raise BasisNonexistenceError("constraint vector is identically zero")
    nz = np.nonzero(np.abs(a) > _OUT_OF_BAND_RTOL * scale)[0]
    return int(nz[0]) + 1, int(nz[-1]) + 1


def nullspace_step(a: np.ndarray, band: tuple[int, int] | None = None) -> np.ndarray:
    """Explicit nullspace factor of one smoothness constraint.

    Given the jump vector ``a`` of the current basis (length ``n``), returns
    the ``(n-1) x n`` matrix ``C`` with ``C a = 0`` whose rows combine
    adjacent basis functions:

    * identity rows left of the band,
    * within the band (1-based ``lo .. hi``) the cascade
      ``alpha_lo = 1``, ``beta_{k+1} = -alpha_k a_k / a_{k+1}``,
      ``alpha_{k+1} = 1 - beta_{k+1}``, placing ``alpha_k`` on the diagonal
      and ``beta_{k+1}`` on the superdiagonal,
    * shifted identity rows right of the band.

    All band coefficients are strictly positive when the smooth basis exists;
    a divisor below ``1e-12 * max|a|`` or a nonpositive coefficient aborts
    with :class:`~gtbsplines.errors.BasisNonexistenceError`.

    Parameters
    ----------
    a : array
        Constraint vector.
    band : (lo, hi), optional
        1-based inclusive range of structurally nonzero entries.  When
        omitted it is inferred from the numerically nonzero entries, which is
        only reliable for well-scaled stand-alone inputs; the extraction loop
        always passes the band explicitly.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n < 2:
        raise BasisNonexistenceError("constraint vector too short")
    lo, hi = _infer_band(a) if band is None else band
    if not (1 <= lo < hi <= n):
        raise BasisNonexistenceError(f"invalid constraint band [{lo}, {hi}] for length {n}")
    scale = np.max(np.abs(a))
    out_of_band = np.abs(np.concatenate([a[: lo - 1], a[hi:]]))
    if out_of_band.size and np.max(out_of_band) > _OUT_OF_BAND_RTOL * scale:
        raise GTBError(
            f"constraint entries outside the structural band [{lo}, {hi}] are "
            f"not numerically zero (max {np.max(out_of_band):.3g} vs scale {scale:.3g})"
        )

    c = np.zeros((n - 1, n))
    for k in range(lo - 1):
        c[k, k] = 1.0
    c[lo - 1, lo - 1] = 1.0
    beta = 1.0
    for k in range(lo, hi):  # 0-based positions k-1 -> k of the cascade
        denom = a[k]
        if abs(denom) <= _DEGENERACY_RTOL * scale:
            raise BasisNonexistenceError(
                f"degenerate jump at band position {k + 1}: the smooth basis "
                "does not exist for this space"
            )
        beta = -c[k - 1, k - 1] * a[k - 1] / denom
        if beta <= 0.0:
            raise BasisNonexistenceError(
                f"nonpositive combination coefficient at band position {k + 1}: "
                "the smooth basis does not exist for this space"
            )
        c[k - 1, k] = beta
        if k < hi - 1:
            alpha = 1.0 - beta
            if alpha <= 0.0:
                raise BasisNonexistenceError(
                    f"nonpositive combination coefficient at band position {k + 1}: "
                    "the smooth basis does not exist for this space"
                )
            c[k, k] = alpha
    # Column sums force the band-end coefficient to exactly one and its
    # complement to exactly zero; the computed ratio only ever differs from
    # one by the rounding noise of the input vector.  Snapping keeps every
    # factor (and hence every product) nonnegative with exact unit column
    # sums.
    if abs(beta - 1.0) > 1e-6:
        raise GTBError(
            f"inconsistent constraint vector: band-end coefficient {beta!r} "
            "deviates from one far beyond rounding"
        )
    c[hi - 2, hi - 1] = 1.0
    for k in range(hi - 1, n - 1):
        c[k, k + 1] = 1.0
    return c


@dataclass(eq=False)
class ExtractionMatrix:
    """Dense extraction operator together with its rank-one-update factors.

    ``operator`` maps the global Bernstein vector to the smooth basis vector.
    ``factors[rho]`` is the two-band nullspace factor applied at step ``rho``;
    keeping them allows coefficient transfer under knot insertion without
    refactoring.
    """

    operator: np.ndarray
    factors: list[np.ndarray] = field(repr=False)
    columns: list[tuple[int, int]]
    bands: list[tuple[int, int]]

    @property
    def n_basis(self) -> int:
        return self.operator.shape[0]

    @property
    def n_bernstein(self) -> int:
        return self.operator.shape[1]


def extraction_operator(constraints: SmoothnessConstraints) -> ExtractionMatrix:
    """Run the constraint cascade and return the extraction operator.

    Starting from the identity, each constraint column is annihilated by its
    nullspace factor; the factor also updates the remaining constraint
    columns so that later constraints are expressed in the running basis.
    The result has nonnegative entries and unit column sums and annihilates
    every original constraint column.
    """
    total = constraints.n_bernstein
    c = np.eye(total)
    a = constraints.matrix.copy()
    factors: list[np.ndarray] = []
    for rho in range(constraints.n_constraints):
        band = constraints.bands[rho]
        try:
            factor = nullspace_step(a[:, rho], band)
        except BasisNonexistenceError as exc:
            i, j = constraints.columns[rho]
            raise BasisNonexistenceError(
                f"constraint (breakpoint {i}, order {j}): {exc}",
                breakpoint_index=i,
                order=j,
            ) from exc
        factors.append(factor)
        c = factor @ c
        a = factor @ a

    result = ExtractionMatrix(c, factors, list(constraints.columns), list(constraints.bands))
    _validate_extraction(result)
    return result


def _validate_extraction(ext: ExtractionMatrix) -> None:
    c = ext.operator
    if c.size == 0:
        return
    if c.min() < -1e-14 or c.max() > 1.0 + 1e-14:
        raise GTBError(
            f"extraction operator entries outside [0, 1]: min {c.min():.3g}, "
            f"max {c.max():.3g}"
        )
    col_sums = c.sum(axis=0)
    if np.max(np.abs(col_sums - 1.0)) > 1e-12:
        raise GTBError("extraction operator column sums deviate from one")
