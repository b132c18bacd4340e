"""Panel Gauss-Legendre rules shared by the singular quadrature paths."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=16)
def _gauss_unit(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w  # on [0, 1]


def panel_rule(boundaries: np.ndarray, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes/weights over consecutive panels."""
    b = np.asarray(boundaries, dtype=float)
    x0, w0 = _gauss_unit(order)
    lo = b[:-1, None]
    width = np.diff(b)[:, None]
    nodes = (lo + width * x0[None, :]).reshape(-1)
    weights = (width * w0[None, :]).reshape(-1)
    return nodes, weights


def dyadic_log_panels(tau_max: float, max_panels: int = 40) -> np.ndarray:
    """Panel boundaries 0, ln2, 2 ln2, ... covering [0, tau_max].

    In the radial variable t = e^(-tau) each panel is one dyadic decade
    [2^-(k+1), 2^-k], so geometric refinement toward the singularity.
    """
    ln2 = np.log(2.0)
    k = min(int(np.ceil(tau_max / ln2)), max_panels)
    b = ln2 * np.arange(k + 1)
    b[-1] = tau_max
    return b


def uniform_panels(a: float, b: float, n: int) -> np.ndarray:
    return np.linspace(a, b, n + 1)
