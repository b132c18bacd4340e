"""Radial kernels: closed forms vs adaptive quadrature, radii vs root structure."""

import math

import numpy as np
import pytest
from scipy import integrate

from loglap import PreconditionError
from loglap.coeffs import EULER_GAMMA, alpha_coeffs, omega
from loglap.kernels import (
    KernelSpec,
    cell_pair_integral_1d,
    cell_self_energy_1d,
    combined_kernel,
    incomplete_log_integral,
    outer_integral,
    q_eval,
    radial_antiderivative,
    tail_integral,
)


def _pair_quadrature_oracle(n, A, B, lo=0.0, hi=1.0):
    """2D adaptive quadrature of the cell pair integral, split at the cutoff."""

    def inner(x):
        def f(y):
            t = abs(x - y)
            if not lo < t < hi:
                return 0.0
            return t ** -1.0 * (-2.0 * math.log(t)) ** (n - 1)

        # integration limits intersected with the kernel support around x
        pieces = []
        left = (max(B[0], x - hi), min(B[1], x - lo))
        right = (max(B[0], x + lo), min(B[1], x + hi))
        for piece in (left, right):
            if piece[1] > piece[0]:
                pieces.append(piece)
        return sum(integrate.quad(f, p0, p1, epsabs=1e-13, epsrel=1e-12, limit=200)[0] for p0, p1 in pieces)

    val, _ = integrate.quad(inner, A[0], A[1], epsabs=1e-12, epsrel=1e-11, limit=200)
    return val


# ---------------------------------------------------------------------------
# q_n pointwise


def test_q_values():
    assert q_eval(KernelSpec(1, 1), 0.5) == pytest.approx(2.0)
    assert q_eval(KernelSpec(1, 3), 0.5) == pytest.approx(8.0)
    assert q_eval(KernelSpec(2, 1), math.exp(-0.5)) == pytest.approx(math.exp(0.5), rel=1e-14)
    assert q_eval(KernelSpec(2, 2), 1.0) == 0.0


def test_q_sign_past_one():
    for n in range(1, 5):
        val = q_eval(KernelSpec(n, 1), 1.5)
        assert math.copysign(1.0, val) == (-1.0) ** (n - 1)


def test_q_rejects_nonpositive():
    with pytest.raises(PreconditionError):
        q_eval(KernelSpec(1, 1), 0.0)


# ---------------------------------------------------------------------------
# radial integrals


def test_tail_integral_closed_values():
    assert tail_integral(KernelSpec(1, 1), math.exp(-1)) == pytest.approx(2.0, rel=1e-14)
    assert tail_integral(KernelSpec(2, 2), math.exp(-1)) == pytest.approx(2 * math.pi, rel=1e-14)
    assert tail_integral(KernelSpec(2, 1), 1 - 1e-12) == pytest.approx(0.0, abs=1e-20)


def test_outer_integral_closed_values():
    assert outer_integral(KernelSpec(1, 1), math.e) == pytest.approx(2.0, rel=1e-14)
    assert outer_integral(KernelSpec(2, 1), math.e) == pytest.approx(-2.0, rel=1e-14)
    assert outer_integral(KernelSpec(3, 1), 1 + 1e-14) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_radial_integrals_match_quadrature(seed):
    rng = np.random.default_rng(seed)
    for _ in range(10):
        n = int(rng.integers(1, 5))
        N = int(rng.integers(1, 4))
        spec = KernelSpec(n, N)
        a = float(rng.uniform(0.02, 0.95))
        R = float(rng.uniform(1.05, 6.0))
        f = lambda t: t ** (N - 1.0) * t ** (-float(N)) * (-2.0 * math.log(t)) ** (n - 1)
        ref_in = omega(N) * integrate.quad(f, a, 1.0, epsabs=1e-14, epsrel=1e-13)[0]
        ref_out = omega(N) * integrate.quad(f, 1.0, R, epsabs=1e-14, epsrel=1e-13)[0]
        assert tail_integral(spec, a) == pytest.approx(ref_in, rel=1e-10)
        assert outer_integral(spec, R) == pytest.approx(ref_out, rel=1e-10, abs=1e-13)


def test_radial_antiderivative_differentiates_back():
    ts = np.linspace(0.1, 2.5, 40)
    h = 1e-6
    for n in (1, 2, 3):
        num = (radial_antiderivative(n, ts + h) - radial_antiderivative(n, ts - h)) / (2 * h)
        assert np.allclose(num, (-2 * np.log(ts)) ** (n - 1) / ts, rtol=1e-7, atol=1e-7)


def test_incomplete_log_integral_oracle():
    for k in (0, 1, 2, 3):
        for h in (0.05, 0.3, 0.9, 1.0, 1.7):
            ref = integrate.quad(lambda r: (-math.log(r)) ** k, 0, h, epsabs=1e-14)[0]
            assert incomplete_log_integral(k, h) == pytest.approx(ref, rel=1e-11, abs=1e-14)
    assert incomplete_log_integral(3, 0.0) == 0.0


# ---------------------------------------------------------------------------
# combined kernel radii


def test_radii_first_order_constant_kernel():
    ck = combined_kernel(alpha_coeffs(1, 1))
    assert ck.r0 == 1.0 and ck.rm == 1.0
    ck2 = combined_kernel(alpha_coeffs(1, 2))
    assert ck2.r0 == 1.0 and ck2.rm == 1.0


def test_radii_second_order_dim_one():
    ck = combined_kernel(alpha_coeffs(2, 1))
    assert ck.r0 == pytest.approx(math.exp(-EULER_GAMMA), rel=1e-12)
    assert ck.rm == pytest.approx(ck.r0)


def test_radii_second_order_dim_two_no_root():
    ck = combined_kernel(alpha_coeffs(2, 2))
    assert ck.r0 == 1.0 and ck.rm == 1.0


@pytest.mark.parametrize("m,N", [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (4, 2)])
def test_kernel_positive_and_monotone_inside_radii(m, N):
    ck = combined_kernel(alpha_coeffs(m, N))
    ts = np.linspace(1e-9, ck.r0 * (1 - 1e-6), 1000)
    vals = ck(ts)
    assert np.all(vals > 0.0)
    tm = np.linspace(1e-9, ck.rm * (1 - 1e-6), 1000)
    vm = ck(tm)
    assert np.all(np.diff(vm) <= 1e-12 * np.max(np.abs(vm)))
    if ck.r0 < 1.0:
        scale = max(1.0, float(np.max(np.abs(ck.ledger.alpha))))
        assert abs(float(ck(ck.r0))) <= 1e-8 * scale


# ---------------------------------------------------------------------------
# 1D cell pair integrals


def test_adjacent_cells_log_two():
    val = cell_pair_integral_1d(KernelSpec(1, 1), (0.0, 0.25), (-0.25, 0.0))
    assert val == pytest.approx(math.log(2) / 2, rel=1e-13)


def test_far_cells_vanish():
    assert cell_pair_integral_1d(KernelSpec(2, 1), (1.5, 1.8), (0.0, 0.4)) == 0.0


def test_pair_symmetry_and_sign():
    rng = np.random.default_rng(3)
    for _ in range(20):
        w1, w2 = rng.uniform(0.05, 0.4, 2)
        gap = rng.uniform(0.0, 1.5)
        A = (gap, gap + w1)
        B = (-w2, 0.0)
        for n in (1, 3):
            spec = KernelSpec(n, 1)
            ab = cell_pair_integral_1d(spec, A, B)
            ba = cell_pair_integral_1d(spec, B, A)
            assert ab == pytest.approx(ba, rel=1e-13, abs=1e-300)
            assert ab >= 0.0  # odd n: kernel nonnegative


@pytest.mark.parametrize("seed", range(4))
def test_pair_integral_matches_2d_quadrature(seed):
    rng = np.random.default_rng(100 + seed)
    for _ in range(6):
        n = int(rng.integers(1, 5))
        w1, w2 = rng.uniform(0.05, 0.45, 2)
        gap = rng.uniform(0.0, 2.0)
        A = (gap, gap + w1)
        B = (-w2, 0.0)
        val = cell_pair_integral_1d(KernelSpec(n, 1), A, B)
        ref = _pair_quadrature_oracle(n, A, B)
        if abs(ref) > 1e-12:
            assert val == pytest.approx(ref, rel=1e-8)
        else:
            assert val == pytest.approx(ref, abs=1e-11)


def test_self_energy_matches_quadrature():
    for n in (1, 2, 3):
        for h in (0.1, 0.3):
            def inner(x):
                f = lambda t: t ** -1.0 * (-2.0 * math.log(t)) ** (n - 1)
                return (
                    integrate.quad(f, x, 1.0, epsabs=1e-13)[0]
                    + integrate.quad(f, h - x, 1.0, epsabs=1e-13)[0]
                )

            ref = integrate.quad(inner, 0.0, h, epsabs=1e-12, limit=200)[0]
            assert cell_self_energy_1d(n, h) == pytest.approx(ref, rel=1e-9)


def test_self_energy_with_smaller_cutoff():
    n, h, r0 = 2, 0.1, 0.5

    def inner(x):
        f = lambda t: t ** -1.0 * (-2.0 * math.log(t)) ** (n - 1)
        return (
            integrate.quad(f, x, r0, epsabs=1e-13)[0]
            + integrate.quad(f, h - x, r0, epsabs=1e-13)[0]
        )

    ref = integrate.quad(inner, 0.0, h, epsabs=1e-12, limit=200)[0]
    assert cell_self_energy_1d(n, h, cutoff=r0) == pytest.approx(ref, rel=1e-9)


def test_incomplete_log_t_integral_oracle():
    from loglap.kernels import incomplete_log_t_integral

    for k in (0, 1, 2, 3):
        for h in (0.05, 0.3, 0.9, 1.3):
            ref = integrate.quad(lambda r: r * (-math.log(r)) ** k, 0, h, epsabs=1e-14)[0]
            assert incomplete_log_t_integral(k, h) == pytest.approx(ref, rel=1e-12, abs=1e-15)


def test_cell_self_energy_2d_matches_adaptive_oracle():
    from loglap.kernels import cell_self_energy_2d

    def oracle(n, a, b, cutoff):
        # int over the quarter difference plane of q_n against the overlap deficit
        def fr(t, phi):
            c, s = math.cos(phi), math.sin(phi)
            w = a * b - max(a - t * c, 0.0) * max(b - t * s, 0.0)
            return t ** -1.0 * (-2.0 * math.log(t)) ** (n - 1) * w

        def inner(phi):
            return integrate.quad(fr, 1e-14, cutoff, args=(phi,), epsabs=1e-13, limit=200)[0]

        return 4.0 * integrate.quad(inner, 0.0, math.pi / 2.0, epsabs=1e-11, limit=200)[0]

    for n, a, b, cutoff in ((1, 0.05, 0.05, 1.0), (2, 0.05, 0.03, 1.0), (1, 0.04, 0.07, 0.5)):
        got = cell_self_energy_2d(n, a, b, cutoff)
        assert got == pytest.approx(oracle(n, a, b, cutoff), rel=1e-8)


def test_identical_cells_return_self_energy():
    spec = KernelSpec(2, 1)
    assert cell_pair_integral_1d(spec, (0.0, 0.2), (0.0, 0.2)) == pytest.approx(
        float(cell_self_energy_1d(2, 0.2)), rel=0.0
    )


def test_partial_overlap_rejected():
    with pytest.raises(PreconditionError):
        cell_pair_integral_1d(KernelSpec(1, 1), (0.0, 0.3), (0.2, 0.5))
