"""Pointwise evaluation of the kernel operators by singular quadrature.

All operators here share one radial-angular decomposition around the
evaluation point x.  Inside the unit ball the substitution t = e^(-tau)
turns the singular radial integrals into smooth ones:

    K_n u(x):   int (u(x) - u(x + t theta)) (2 tau)^(n-1) dtau
    (-Delta)^s: c_{N,s} * int (u(x) - u(x + t theta)) e^(2 s tau) dtau + kappa2(-s) u(x)
    Phi_s * u:  kappa_{N,s} * int (u(x + t theta) - u(x)) e^(-2 s tau) dtau + kappa2(s) u(x)

with Gauss-Legendre panels per dyadic decade of t, truncated at an inner
radius delta whose remainder is bounded analytically from the declared
Holder data.  Outside the unit ball the substitution t = e^(sigma) with
per-direction upper limits at the support-box exit makes the tail integrals
exact up to panel error (the integrand is smooth inside the box and
identically zero beyond it).

Antipodal directions are summed together, which realizes the principal-value
symmetrization without a separate code path.  Evaluation of discontinuous
data (indicators) is refused within the inner cut of any grid jump, since
the pointwise theory needs a Dini modulus at x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from .coeffs import (
    CoeffLedger,
    alpha_coeffs,
    c_ns,
    kappa2_frac,
    kappa2_riesz,
    kappa_ns,
    omega,
)
from .domains import DomainSpec
from .errors import PreconditionError
from .grid import GridFunction
from .kernels import radial_antiderivative
from .quadrature import dyadic_log_panels, panel_rule, uniform_panels

INNER_CUT = 1e-8
PANEL_ORDER = 16
MAX_DECADES = 40
OUTER_PANELS = 48  # resolves support-scale features crossed by the tail rays
N_ANGLES = 64


@dataclass(frozen=True)
class EvalReport:
    """Value with its analytic near-singularity remainder bound."""

    value: float
    truncation_bound: float
    quadrature_panels: int


def _directions(dim: int, n_angles: int) -> tuple[np.ndarray, np.ndarray]:
    if dim == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    phi = 2.0 * math.pi * (np.arange(n_angles) + 0.5) / n_angles
    thetas = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    weights = np.full(n_angles, 2.0 * math.pi / n_angles)
    return thetas, weights


def _box_exit(u: GridFunction, xs: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Distance from each x along each direction to the support-box boundary."""
    lo, hi = u.box_lo, u.box_hi
    out = np.full((xs.shape[0], thetas.shape[0]), np.inf)
    for ax in range(u.dim):
        th = thetas[:, ax][None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            t_pos = (hi[ax] - xs[:, ax][:, None]) / th
            t_neg = (lo[ax] - xs[:, ax][:, None]) / th
        cand = np.where(th > 0, t_pos, np.where(th < 0, t_neg, np.inf))
        out = np.minimum(out, cand)
    return np.maximum(out, 0.0)


def _jump_positions(u: GridFunction) -> tuple[np.ndarray, list[tuple[int, float]]]:
    """Discontinuities the declared modulus cannot cover.

    Returns interior jump midpoints (points) and box-face planes carrying a
    nonzero boundary value (the drop to the zero extension).
    """
    positions = []
    planes: list[tuple[int, float]] = []
    axes = u.axes()
    scale = max(u.sup_norm(), 1e-300)
    for ax in range(u.dim):
        h = u.spacing[ax]
        thresh = 4.0 * u.holder_constant * h ** u.holder_exponent + 1e-10 * scale
        d = np.abs(np.diff(u.values, axis=ax))
        idx = np.nonzero(d > thresh)
        if idx[0].size:
            if u.dim == 1:
                positions.append(np.stack([axes[0][idx[0]] + 0.5 * h], axis=1))
            else:
                px = axes[0][idx[0]] + (0.5 * h if ax == 0 else 0.0)
                py = axes[1][idx[1]] + (0.5 * h if ax == 1 else 0.0)
                positions.append(np.stack([px, py], axis=1))
        if float(np.max(np.abs(np.take(u.values, 0, axis=ax)))) > thresh:
            planes.append((ax, u.origin[ax]))
        if float(np.max(np.abs(np.take(u.values, -1, axis=ax)))) > thresh:
            planes.append((ax, float(u.box_hi[ax])))
    pts = np.concatenate(positions, axis=0) if positions else np.empty((0, u.dim))
    return pts, planes


def _check_dini_clearance(u: GridFunction, xs: np.ndarray, cut: float) -> None:
    jumps, planes = _jump_positions(u)
    dist = np.full(xs.shape[0], np.inf)
    if jumps.size:
        d2 = np.min(np.sum((xs[:, None, :] - jumps[None, :, :]) ** 2, axis=2), axis=1)
        dist = np.minimum(dist, np.sqrt(d2))
    for ax, coord in planes:
        dist = np.minimum(dist, np.abs(xs[:, ax] - coord))
    if np.any(dist <= cut):
        raise PreconditionError(
            "evaluation point within the inner cut of a declared-modulus violation "
            "(discontinuity); the pointwise theory needs a Dini modulus at x"
        )


class _RadialContext:
    """Shared u-samples and quadrature weights around a batch of points."""

    def __init__(self, u: GridFunction, xs: np.ndarray, inner_cut: float = INNER_CUT,
                 panel_order: int = PANEL_ORDER, n_angles: int = N_ANGLES,
                 outer_panels: int = OUTER_PANELS):
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        if xs.shape[1] != u.dim:
            raise PreconditionError("evaluation points must match the grid dimension")
        for x in xs:
            if not u.contains(x):
                raise PreconditionError("evaluation point outside the grid box")
        _check_dini_clearance(u, xs, inner_cut)
        self.u = u
        self.xs = xs
        self.inner_cut = inner_cut
        self.tau_max = -math.log(inner_cut)
        thetas, th_w = _directions(u.dim, n_angles)
        self.thetas, self.th_w = thetas, th_w

        bounds = dyadic_log_panels(self.tau_max, MAX_DECADES)
        self.tau, self.tau_w = panel_rule(bounds, panel_order)
        self.n_inner_panels = len(bounds) - 1
        t_in = np.exp(-self.tau)
        # y[x, theta, q] = x + t_q * theta
        y_in = xs[:, None, None, :] + t_in[None, None, :, None] * thetas[None, :, None, :]
        self.u0 = u(xs if u.dim == 2 else xs[:, 0])
        u_in = u(y_in if u.dim == 2 else y_in[..., 0])
        self.diff_in = self.u0[:, None, None] - u_in

        # outer: per-(x, theta) panels in sigma = ln t up to the box exit
        exit_t = _box_exit(u, xs, thetas)
        self.sigma_max = np.log(np.maximum(exit_t, 1.0))
        unit = uniform_panels(0.0, 1.0, outer_panels)
        un, uw = panel_rule(unit, panel_order)
        self.sigma = self.sigma_max[:, :, None] * un[None, None, :]
        self.sigma_w = self.sigma_max[:, :, None] * uw[None, None, :]
        t_out = np.exp(self.sigma)
        y_out = xs[:, None, None, :] + t_out[..., None] * thetas[None, :, None, :]
        self.u_out = u(y_out if u.dim == 2 else y_out[..., 0])
        self.n_outer_panels = outer_panels
        self.panels = self.n_inner_panels + outer_panels

    def inner(self, weight_of_tau) -> np.ndarray:
        w = weight_of_tau(self.tau) * self.tau_w
        return np.einsum("xtq,q,t->x", self.diff_in, w, self.th_w)

    def outer(self, weight_of_sigma) -> np.ndarray:
        integ = weight_of_sigma(self.sigma) * self.sigma_w * self.u_out
        return np.einsum("xtq,t->x", integ, self.th_w)


def _holder_bound_log(u: GridFunction, n: int, cut: float) -> float:
    """omega_N C int_0^delta r^(alpha-1) (-2 ln r)^(n-1) dr, via incomplete Gamma."""
    a = u.holder_exponent
    tail = 2.0 ** (n - 1) * a ** (-n) * math.gamma(n) * float(gammaincc(n, a * (-math.log(cut))))
    return omega(u.dim) * u.holder_constant * tail


def _holder_bound_power(u: GridFunction, rate: float, cut: float) -> float:
    """omega_N C delta^rate / rate for the power-kernel inner remainder."""
    return omega(u.dim) * u.holder_constant * cut ** rate / rate


# ---------------------------------------------------------------------------
# public operators


def k_values_batch(orders, u: GridFunction, xs, **quad_opts):
    """K_n u at many points for several orders n at once (shared samples)."""
    ctx = _RadialContext(u, xs, **quad_opts)
    values = {}
    bounds = {}
    for n in orders:
        if n < 1:
            raise PreconditionError("kernel order must be >= 1")
        inner = ctx.inner(lambda tau: (2.0 * tau) ** (n - 1))
        outer = ctx.outer(lambda sig: (-2.0 * sig) ** (n - 1))
        values[n] = inner - outer
        bounds[n] = _holder_bound_log(u, n, ctx.inner_cut)
    return values, bounds, ctx


def apply_K(n: int, u: GridFunction, x, **quad_opts) -> EvalReport:
    """K_n u(x) = int_{B1} (u(x)-u(y)) q_n dy - int_{|y-x|>1} u(y) q_n dy."""
    values, bounds, ctx = k_values_batch([n], u, np.atleast_2d(x), **quad_opts)
    return EvalReport(float(values[n][0]), bounds[n], ctx.panels)


def apply_L_batch(m: int, u: GridFunction, xs, ledger: CoeffLedger | None = None, **quad_opts):
    """Ledger combination sum_j alpha_j K_j u (with K_0 u = u) at many points."""
    led = ledger if ledger is not None else alpha_coeffs(m, u.dim)
    if led.m != m or led.dim != u.dim:
        raise PreconditionError("ledger order/dimension mismatch")
    values, bounds, ctx = k_values_batch(range(1, m + 1), u, xs, **quad_opts)
    total = led.alpha[0] * ctx.u0
    bound = 0.0
    for j in range(1, m + 1):
        total = total + led.alpha[j] * values[j]
        bound += abs(led.alpha[j]) * bounds[j]
    return total, bound, ctx.panels


def apply_L(m: int, u: GridFunction, x, ledger: CoeffLedger | None = None, **quad_opts) -> EvalReport:
    total, bound, panels = apply_L_batch(m, u, np.atleast_2d(x), ledger=ledger, **quad_opts)
    return EvalReport(float(total[0]), bound, panels)


def frac_lap_batch(s: float, u: GridFunction, xs, **quad_opts):
    """(-Delta)^s via the split c_{N,s} J-integral + kappa2(-s) u(x)."""
    if not 0.0 < s < 1.0:
        raise PreconditionError("fractional order must lie in (0, 1)")
    if u.holder_exponent <= 2.0 * s:
        raise PreconditionError(
            "declared Holder exponent must exceed 2s for the split singular integral"
        )
    ctx = _RadialContext(u, xs, **quad_opts)
    c = c_ns(s, u.dim)
    inner = ctx.inner(lambda tau: np.exp(2.0 * s * tau))
    outer = ctx.outer(lambda sig: np.exp(-2.0 * s * sig))
    values = c * (inner - outer) + kappa2_frac(s, u.dim) * ctx.u0
    bound = abs(c) * _holder_bound_power(u, u.holder_exponent - 2.0 * s, ctx.inner_cut)
    return values, bound, ctx.panels


def frac_lap(s: float, u: GridFunction, x, **quad_opts) -> EvalReport:
    values, bound, panels = frac_lap_batch(s, u, np.atleast_2d(x), **quad_opts)
    return EvalReport(float(values[0]), bound, panels)


def riesz_batch(s: float, u: GridFunction, xs, **quad_opts):
    """Phi_s * u via the compensated split kappa_{N,s} I-integral + kappa2(s) u(x)."""
    if not 0.0 < s < u.dim / 2.0:
        raise PreconditionError("Riesz order must lie in (0, N/2)")
    ctx = _RadialContext(u, xs, **quad_opts)
    kap = kappa_ns(s, u.dim)
    # I[u](x, y) = u(y) - u(x) inside B_1: sign-flipped inner difference
    inner = -ctx.inner(lambda tau: np.exp(-2.0 * s * tau))
    outer = ctx.outer(lambda sig: np.exp(2.0 * s * sig))
    values = kap * (inner + outer) + kappa2_riesz(s, u.dim) * ctx.u0
    bound = kap * _holder_bound_power(u, u.holder_exponent + 2.0 * s, ctx.inner_cut)
    return values, bound, ctx.panels


def riesz(s: float, u: GridFunction, x, **quad_opts) -> EvalReport:
    values, bound, panels = riesz_batch(s, u, np.atleast_2d(x), **quad_opts)
    return EvalReport(float(values[0]), bound, panels)


# ---------------------------------------------------------------------------
# regional representation


def _segment_panels(a: float, b: float, per_unit_log: int = 6, order: int = PANEL_ORDER):
    """Log-coordinate panels on a radial segment [a, b], a > 0."""
    la, lb = math.log(a), math.log(b)
    n = max(2, int(math.ceil((lb - la) * per_unit_log)))
    return panel_rule(uniform_panels(la, lb, n), order)


def regional_repr(m: int, u: GridFunction, x, domain: DomainSpec, **quad_opts) -> EvalReport:
    """K_m u(x) through the domain-split form with the h_{m,Omega} correction.

    T1 = int_Omega (u(x)-u(y)) q_m dy,  T2 = -int_{R^N \\ Omega} u(y) q_m dy,
    h term = [int_{B1(x)\\Omega} q_m - int_{Omega\\B1(x)} q_m] u(x);
    rays from x handle all three with exact segment geometry.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if domain.dim != u.dim:
        raise PreconditionError("domain/grid dimension mismatch")
    if not domain.contains(x):
        raise PreconditionError("evaluation point must lie inside the domain")
    if not u.contains(x):
        raise PreconditionError("evaluation point outside the grid box")
    inner_cut = quad_opts.pop("inner_cut", INNER_CUT)
    order = quad_opts.pop("panel_order", PANEL_ORDER)
    n_angles = quad_opts.pop("n_angles", N_ANGLES)
    if quad_opts:
        raise TypeError(f"unknown quadrature options {sorted(quad_opts)}")
    _check_dini_clearance(u, x[None, :], inner_cut)

    thetas, th_w = _directions(u.dim, n_angles)
    exit_t = _box_exit(u, x[None, :], thetas)[0]
    u0 = float(u(x if u.dim == 2 else x[0]))
    tau_max = -math.log(inner_cut)

    total = 0.0
    h_term = 0.0
    panels = 0
    for it, theta in enumerate(thetas):
        segs = domain.ray_segments(x, theta)
        if not segs or segs[0][0] > 1e-14:
            raise PreconditionError("evaluation point sits on the domain boundary")
        if segs[0][1] <= inner_cut:
            raise PreconditionError("domain boundary within the inner cut of x")
        # cover the grid box and every domain segment: u(x) q_m contributes on
        # all of Omega even past the support box
        t_stop = max(exit_t[it], 1.0, max(tb for _, tb in segs))

        # difference integral over Omega, outer -u integral over the complement;
        # radial pieces break at domain crossings and at the unit radius
        marks = {0.0, 1.0, t_stop}
        for (ta, tb) in segs:
            marks.add(min(ta, t_stop))
            marks.add(min(tb, t_stop))
        marks = sorted(marks)
        for lo, hi in zip(marks[:-1], marks[1:]):
            if hi - lo <= 1e-15:
                continue
            mid = 0.5 * (lo + hi)
            inside = any(ta - 1e-14 <= mid <= tb + 1e-14 for ta, tb in segs)
            if lo < 1e-13:
                # piece containing x: log substitution t = e^-tau, dyadic panels
                if not inside:
                    raise PreconditionError("x must be interior to the domain")
                tau_lo = -math.log(min(hi, 1.0))
                bnds = dyadic_log_panels(tau_max, MAX_DECADES)
                bnds = np.unique(np.concatenate([[tau_lo], bnds[bnds > tau_lo + 1e-15], [tau_max]]))
                nodes, wts = panel_rule(bnds, order)
                t_nodes = np.exp(-nodes)
                vals = u(x[None, :] + t_nodes[:, None] * theta[None, :]) if u.dim == 2 else u(x[0] + t_nodes * theta[0])
                total += th_w[it] * float(np.sum((u0 - vals) * (2.0 * nodes) ** (m - 1) * wts))
                panels += len(bnds) - 1
            else:
                nodes, wts = _segment_panels(lo, hi, order=order)
                t_nodes = np.exp(nodes)
                vals = u(x[None, :] + t_nodes[:, None] * theta[None, :]) if u.dim == 2 else u(x[0] + t_nodes * theta[0])
                f = (u0 - vals) if inside else (-vals)
                total += th_w[it] * float(np.sum(f * (-2.0 * nodes) ** (m - 1) * wts))
                panels += len(wts) // order

        # h_{m,Omega} ray share: closed-form radial antiderivatives
        ray_h = 0.0
        # B1 \ Omega: complement segments within (0, 1)
        prev = 0.0
        for (ta, tb) in segs + [(math.inf, math.inf)]:
            lo, hi = prev, min(ta, 1.0)
            if hi > lo and lo < 1.0:
                ray_h += radial_antiderivative(m, hi) - radial_antiderivative(m, max(lo, 1e-300))
            prev = max(prev, tb)
            if prev >= 1.0:
                break
        # Omega \ B1: domain segments beyond 1
        for (ta, tb) in segs:
            lo, hi = max(ta, 1.0), tb
            if hi > lo:
                ray_h -= radial_antiderivative(m, hi) - radial_antiderivative(m, lo)
        h_term += th_w[it] * ray_h

    value = total + h_term * u0
    bound = _holder_bound_log(u, m, inner_cut)
    return EvalReport(float(value), bound, panels)


def h_regional(m: int, x, domain: DomainSpec, dim: int, n_angles: int = N_ANGLES) -> float:
    """h_{m,Omega}(x) alone (closed-form radial parts, angular quadrature in 2D)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    thetas, th_w = _directions(dim, n_angles)
    total = 0.0
    for it, theta in enumerate(thetas):
        segs = domain.ray_segments(x, theta)
        ray_h = 0.0
        prev = 0.0
        for (ta, tb) in segs + [(math.inf, math.inf)]:
            lo, hi = prev, min(ta, 1.0)
            if hi > lo and lo < 1.0:
                if lo <= 0.0:
                    raise PreconditionError("h_{m,Omega} diverges for x outside the open domain")
                ray_h += radial_antiderivative(m, hi) - radial_antiderivative(m, lo)
            prev = max(prev, tb)
            if prev >= 1.0:
                break
        for (ta, tb) in segs:
            lo, hi = max(ta, 1.0), tb
            if hi > lo:
                ray_h -= radial_antiderivative(m, hi) - radial_antiderivative(m, lo)
        total += th_w[it] * ray_h
    return float(total)


# ---------------------------------------------------------------------------
# weighted norms


def weighted_l1_norm(u: GridFunction, s: float, t: float) -> float:
    """Grid trapezoid of int |u(x)| (1+|x|)^(-N-2s) (ln(e+|x|))^(t-1) dx."""
    axes = u.axes()
    if u.dim == 1:
        r = np.abs(axes[0])
    else:
        r = np.hypot(axes[0][:, None], axes[1][None, :])
    w = (1.0 + r) ** (-u.dim - 2.0 * s) * np.log(math.e + r) ** (t - 1.0)
    integrand = np.abs(u.values) * w
    for ax in range(u.dim):
        tw = np.ones(u.shape[ax])
        tw[0] = tw[-1] = 0.5
        shape = [1] * u.dim
        shape[ax] = -1
        integrand = integrand * tw.reshape(shape)
    return float(np.sum(integrand) * u.cell_volume)
