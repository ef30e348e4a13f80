"""Gauss-Legendre quadrature rules on intervals and panel subdivisions."""

from __future__ import annotations

import math

import numpy as np

from .sections import (
    ExponentialFamily,
    GeneralizedPolynomialFamily,
    SectionSpace,
    TrigonometricFamily,
)

__all__ = ["gauss_legendre", "panel_rule", "section_rule"]


def gauss_legendre(n: int, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """n-point Gauss-Legendre nodes and weights on [lo, hi]."""
    x, w = np.polynomial.legendre.leggauss(n)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    return mid + half * x, half * w


def panel_rule(lo: float, hi: float, n: int, panels: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite n-point Gauss-Legendre rule on ``panels`` equal panels."""
    edges = np.linspace(lo, hi, panels + 1)
    nodes, weights = [], []
    for p_lo, p_hi in zip(edges[:-1], edges[1:]):
        x, w = gauss_legendre(n, p_lo, p_hi)
        nodes.append(x)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def section_panels(section: SectionSpace) -> int:
    """Panel count that keeps the fixed-order rule near machine accuracy.

    Polynomial sections integrate exactly on one panel; oscillatory or stiff
    sections are subdivided so that each panel sees an effective frequency
    of at most ~2.
    """
    fam = section.family
    if isinstance(fam, (TrigonometricFamily, ExponentialFamily)):
        return max(1, math.ceil(fam.omega * section.length / 2.0))
    if isinstance(fam, GeneralizedPolynomialFamily):
        return 8
    return 1


def section_rule(section: SectionSpace, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule on a section, sized by the section's stiffness."""
    return panel_rule(section.x_lo, section.x_hi, n, section_panels(section))
