"""Uniformly sampled compactly supported functions on a box.

A GridFunction stores node values on a uniform grid in dimension 1 or 2 and
is treated as identically zero outside its box.  Off-node samples come from
cubic interpolation; the declared Holder data (exponent alpha, constant C)
must dominate the interpolant's modulus of continuity, which keeps the
analytic truncation bounds of the singular quadrature honest.  Validation
samples random short-distance pairs and rejects declarations the data
violates.

The node lattice is origin + i*spacing, i = 0..shape-1 per axis.  For
Fourier work the box is treated as periodic with period shape*spacing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline, RegularGridInterpolator

from .errors import PreconditionError


@dataclass(frozen=True)
class GridFunction:
    dim: int
    origin: tuple[float, ...]
    spacing: tuple[float, ...]
    shape: tuple[int, ...]
    values: np.ndarray
    holder_exponent: float
    holder_constant: float

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise PreconditionError("grid functions support dimension 1 or 2")
        if len(self.origin) != self.dim or len(self.spacing) != self.dim or len(self.shape) != self.dim:
            raise PreconditionError("origin/spacing/shape must all have dim entries")
        if any(h <= 0 for h in self.spacing) or any(n < 2 for n in self.shape):
            raise PreconditionError("spacing must be positive and shape >= 2 per axis")
        vals = np.asarray(self.values, dtype=float)
        if vals.size != int(np.prod(self.shape)):
            raise PreconditionError("value count must match the grid shape")
        if not np.all(np.isfinite(vals)):
            raise PreconditionError("grid values must be finite")
        if not 0.0 < self.holder_exponent <= 1.0:
            raise PreconditionError("Holder exponent must lie in (0, 1]")
        if self.holder_constant < 0.0:
            raise PreconditionError("Holder constant must be nonnegative")
        object.__setattr__(self, "values", vals.reshape(self.shape))
        object.__setattr__(self, "origin", tuple(float(x) for x in self.origin))
        object.__setattr__(self, "spacing", tuple(float(x) for x in self.spacing))
        object.__setattr__(self, "shape", tuple(int(n) for n in self.shape))

    # -- geometry -----------------------------------------------------------

    @property
    def box_lo(self) -> np.ndarray:
        return np.array(self.origin)

    @property
    def box_hi(self) -> np.ndarray:
        """Last node per axis (the interpolation domain's far corner)."""
        return np.array([o + (n - 1) * h for o, h, n in zip(self.origin, self.spacing, self.shape)])

    @property
    def periods(self) -> np.ndarray:
        """Periodic box lengths shape*spacing used by the Fourier transform."""
        return np.array([n * h for n, h in zip(self.shape, self.spacing)])

    def axes(self) -> tuple[np.ndarray, ...]:
        return tuple(
            o + h * np.arange(n) for o, h, n in zip(self.origin, self.spacing, self.shape)
        )

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    # -- evaluation ----------------------------------------------------------

    @cached_property
    def _interpolator(self):
        axes = self.axes()
        if self.dim == 1:
            if self.shape[0] >= 4:
                return CubicSpline(axes[0], self.values, bc_type="natural", extrapolate=False)
            return lambda x: np.interp(x, axes[0], self.values)
        method = "cubic" if min(self.shape) >= 4 else "linear"
        return RegularGridInterpolator(
            axes, self.values, method=method, bounds_error=False, fill_value=0.0
        )

    def __call__(self, points) -> np.ndarray:
        """Evaluate at points (shape (..., dim) or (...,) in 1D); zero outside the box."""
        pts = np.asarray(points, dtype=float)
        if self.dim == 1:
            x = pts
            inside = (x >= self.origin[0]) & (x <= self.box_hi[0])
            out = np.zeros_like(np.asarray(x, dtype=float))
            if np.any(inside):
                vals = self._interpolator(np.asarray(x)[inside])
                out[inside] = np.nan_to_num(vals, nan=0.0)
            return out
        flat = pts.reshape(-1, 2)
        vals = self._interpolator(flat)
        return vals.reshape(pts.shape[:-1])

    def contains(self, point) -> bool:
        p = np.atleast_1d(np.asarray(point, dtype=float))
        return bool(np.all(p >= self.box_lo) and np.all(p <= self.box_hi))

    # -- norms on the lattice -------------------------------------------------

    def integral(self) -> float:
        return float(np.sum(self.values) * self.cell_volume)

    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.values)) * self.cell_volume)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(self.values ** 2) * self.cell_volume))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    # -- derivation ------------------------------------------------------------

    def with_values(self, values, alpha: float | None = None, const: float | None = None) -> "GridFunction":
        """Same geometry, new samples; Holder constant re-estimated if not given."""
        vals = np.asarray(values, dtype=float).reshape(self.shape)
        a = self.holder_exponent if alpha is None else alpha
        c = estimate_holder_constant(vals, self.spacing, a) if const is None else const
        return GridFunction(self.dim, self.origin, self.spacing, self.shape, vals, a, c)

    def validate_holder(self, n_samples: int = 4000, seed: int = 0) -> None:
        """Check the declared (alpha, C) dominates the interpolant by sampling.

        Raises PreconditionError on violation; meant for load time.
        """
        rng = np.random.default_rng(seed)
        lo, hi = self.box_lo, self.box_hi
        a = rng.uniform(lo, hi, size=(n_samples, self.dim))
        dist = np.exp(rng.uniform(np.log(1e-3 * min(self.spacing)), np.log(1.0), n_samples))
        direction = rng.normal(size=(n_samples, self.dim))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        b = a + direction * dist[:, None]
        ua = self(a if self.dim == 2 else a[:, 0])
        ub = self(b if self.dim == 2 else b[:, 0])
        gap = np.abs(ua - ub) - self.holder_constant * dist ** self.holder_exponent
        tol = 1e-9 * max(1.0, float(np.max(np.abs(self.values))))
        worst = float(np.max(gap))
        if worst > tol:
            raise PreconditionError(
                f"declared Holder data violated by sampled modulus (excess {worst:.3e})"
            )


def estimate_holder_constant(values: np.ndarray, spacing, alpha: float, margin: float = 1.5) -> float:
    """Upper estimate of the C^alpha seminorm of the interpolant from grid differences."""
    vals = np.asarray(values, dtype=float)
    worst = 0.0
    for ax, h in enumerate(spacing):
        d = np.abs(np.diff(vals, axis=ax))
        if d.size:
            worst = max(worst, float(np.max(d)) / h ** alpha)
    # also guard the drop to zero at the box edge
    edge = 0.0
    for ax, h in enumerate(spacing):
        edge = max(
            edge,
            float(np.max(np.abs(np.take(vals, 0, axis=ax)))) / h ** alpha,
            float(np.max(np.abs(np.take(vals, -1, axis=ax)))) / h ** alpha,
        )
    return margin * max(worst, edge, 1e-300)


# -- canonical test bumps ------------------------------------------------------


def _standard_axes(dim: int, halfwidth: float, nodes: int):
    h = 2.0 * halfwidth / nodes
    origin = (-halfwidth,) * dim
    spacing = (h,) * dim
    shape = (nodes,) * dim
    axes = [np.arange(n) * h - halfwidth for n in shape]
    return origin, spacing, shape, axes


def gaussian_bump(dim: int = 1, halfwidth: float = 20.0, nodes: int | None = None, width: float = 1.0) -> GridFunction:
    """exp(-|x|^2 / width^2) sampled on the default periodic box."""
    nodes = nodes or (4096 if dim == 1 else 512)
    origin, spacing, shape, axes = _standard_axes(dim, halfwidth, nodes)
    if dim == 1:
        r2 = axes[0] ** 2
    else:
        r2 = axes[0][:, None] ** 2 + axes[1][None, :] ** 2
    vals = np.exp(-r2 / width ** 2)
    c = estimate_holder_constant(vals, spacing, 1.0)
    return GridFunction(dim, origin, spacing, shape, vals, 1.0, c)


def gaussian_derivative_bump(dim: int = 1, halfwidth: float = 20.0, nodes: int | None = None, width: float = 0.25) -> GridFunction:
    """Mean-zero odd bump x_1 exp(-|x|^2 / width^2), the default spectral test function.

    The default width keeps the slowly decaying operator tails small against
    the periodic box, so quadrature and spectral paths agree to 1e-3.
    """
    nodes = nodes or (4096 if dim == 1 else 512)
    origin, spacing, shape, axes = _standard_axes(dim, halfwidth, nodes)
    if dim == 1:
        vals = axes[0] * np.exp(-(axes[0] ** 2) / width ** 2)
    else:
        r2 = axes[0][:, None] ** 2 + axes[1][None, :] ** 2
        vals = axes[0][:, None] * np.exp(-r2 / width ** 2)
    c = estimate_holder_constant(vals, spacing, 1.0)
    return GridFunction(dim, origin, spacing, shape, vals, 1.0, c)


def box_indicator(lo: float, hi: float, halfwidth: float = 20.0, nodes: int = 4096) -> GridFunction:
    """1D indicator of [lo, hi] sampled on the default box (alpha = 1 away from jumps)."""
    origin, spacing, shape, axes = _standard_axes(1, halfwidth, nodes)
    vals = ((axes[0] >= lo) & (axes[0] <= hi)).astype(float)
    return GridFunction(1, origin, spacing, shape, vals, 1.0, 0.0)


# -- JSON round trip ------------------------------------------------------------


def grid_to_dict(u: GridFunction) -> dict:
    return {
        "dim": u.dim,
        "origin": list(u.origin),
        "spacing": list(u.spacing),
        "shape": list(u.shape),
        "holder": {"alpha": u.holder_exponent, "const": u.holder_constant},
        "values": u.values.reshape(-1).tolist(),
    }


def grid_from_dict(data: dict, validate: bool = False) -> GridFunction:
    try:
        u = GridFunction(
            dim=int(data["dim"]),
            origin=tuple(data["origin"]),
            spacing=tuple(data["spacing"]),
            shape=tuple(data["shape"]),
            values=np.asarray(data["values"], dtype=float),
            holder_exponent=float(data["holder"]["alpha"]),
            holder_constant=float(data["holder"]["const"]),
        )
    except (KeyError, TypeError) as exc:
        raise PreconditionError(f"malformed grid file: {exc}") from exc
    if validate:
        u.validate_holder()
    return u


def save_grid(u: GridFunction, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(grid_to_dict(u), fh)


def load_grid(path, validate: bool = True) -> GridFunction:
    with open(path, "r", encoding="utf-8") as fh:
        return grid_from_dict(json.load(fh), validate=validate)
