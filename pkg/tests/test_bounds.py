from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prymcount import bounds as B
from prymcount.zeta import WeilPolynomial, num_points, ruck_admissible

QS = [3, 5, 7, 9]
GS = [1, 2, 3, 5]


def test_weil_interval_examples():
    assert B.weil_interval(9, 1) == (4, 16)
    lo, hi = B.weil_interval(3, 2)
    # (4 -+ 2 sqrt 3)^2 = 28 -+ 16 sqrt 3
    assert lo == pytest.approx(28 - 16 * math.sqrt(3), rel=1e-12)
    assert hi == pytest.approx(28 + 16 * math.sqrt(3), rel=1e-12)
    assert lo == pytest.approx(0.28719, abs=1e-5) and hi == pytest.approx(55.71281, abs=1e-5)
    assert B.weil_interval(9, 2) == (16, 256)


def test_M_and_m_examples():
    assert B.upper_M(9, 2, 0) == 100
    assert B.upper_M(3, 2, 3) == pytest.approx(30.25)
    assert B.lower_m(9, 1, -6) == pytest.approx(4)
    assert B.lower_m(9, 2, 0) == pytest.approx(64)
    for q in QS:
        for g in GS:
            w = 2 * g * math.sqrt(q)
            assert B.lower_m(q, g, -w) == pytest.approx((q + 1 - 2 * math.sqrt(q)) ** g, rel=1e-9)
            assert B.upper_M(q, g, w) == pytest.approx((q + 1 + 2 * math.sqrt(q)) ** g, rel=1e-9)


def test_window_errors():
    with pytest.raises(B.WindowError):
        B.upper_M(3, 1, 4)
    with pytest.raises(B.WindowError):
        B.lower_m(9, 1, -7)


def test_perret_examples():
    assert B.perret_upper(3, 1, 4, 8) == 8
    for q in QS:
        assert B.perret_upper(q, 2, 10, 10) == (q + 1) ** 2
    assert B.perret_delta(9, 2, 0) == 0 and B.perret_lower(9, 2, 0) == pytest.approx(64)
    assert B.perret_delta(9, 1, 0) == 1 and B.perret_lower(9, 1, 0) == pytest.approx(2)


@given(st.sampled_from(QS), st.sampled_from(GS), st.integers(0, 60), st.integers(-40, 40))
def test_perret_upper_is_M(q, g, NX, tau):
    if not B.in_window(q, g, tau):
        return
    assert B.perret_upper(q, g, NX, NX + tau) == pytest.approx(B.upper_M(q, g, tau), rel=1e-12)


def test_trace_windows():
    w = B.trace_window_nx(0)
    assert (w.lo, w.hi) == (0, 0)
    w = B.trace_window_nx(4, 3, 1)
    assert w.hi == pytest.approx(2 * math.sqrt(3)) and w.provenance == ("weil", "weil")
    w = B.trace_window_nx(10**6, 5, 2)
    assert w.hi == pytest.approx(4 * math.sqrt(5))


def test_phi_examples():
    assert B.phi(3, 1, 4) == pytest.approx(math.sqrt(20))
    for q in QS:
        for g in (1, 2):
            vals = {n: B.phi_radicand(q, g, n) for n in range(0, 4 * q)}
            assert max(vals, key=vals.get) == q + 1 - (g + 1)


def test_psi_window_examples():
    p = B.psi_window(3, 3)
    assert p.bound == pytest.approx(9.0711, abs=1e-4) and p.sharper_than_weil
    assert p.bound < 6 * math.sqrt(3)
    assert not B.psi_window(9, 1).sharper_than_weil
    for q in QS:
        for g in range(1, 12):
            t = B.psi(q, g)
            res = -(2 * g + 1) * t * t - 2 * g * (g - q) * t + g * g * (4 * g * q + q * q + 6 * q + 1)
            assert abs(res) / max(1.0, g * g * (4 * g * q + q * q)) < 1e-9


def test_psi_interval():
    lo, hi = B.psi_interval(3, 3)
    psi = B.psi(3, 3)
    assert lo == pytest.approx(B.lower_m(3, 3, -psi)) and hi == pytest.approx(B.upper_M(3, 3, psi))
    assert B.psi_interval(9, 2) is None


@given(st.sampled_from([3, 5, 7, 9, 11, 13, 25, 27]), st.integers(0, 30))
def test_psi_interval_sandwich(q, extra):
    g = q + extra
    lo, hi = B.psi_interval(q, g)
    wlo, whi = B.weil_interval(q, g)
    assert wlo * (1 - 1e-9) <= lo <= hi <= whi * (1 + 1e-9)


def test_ihara():
    assert B.ihara_bound(3, 1) == pytest.approx(7)
    for q in (3, 5, 9):
        vals = [B.ihara_bound(q, G) for G in range(1, 30)]
        assert all(a < b for a, b in zip(vals, vals[1:]))


def test_nx_intervals():
    first, second = B.nx_intervals(5, 2, 0)
    assert first == (pytest.approx(B.lower_m(5, 2, 0)), pytest.approx(B.upper_M(5, 2, 0)))
    for q in QS:
        for g in (1, 2, 3):
            wlo, whi = B.weil_interval(q, g)
            for NX in range(0, 3 * q):
                first, second = B.nx_intervals(q, g, NX)
                assert wlo - 1e-9 <= first[0] <= first[1] <= whi + 1e-9
                if second is not None:
                    assert wlo - 1e-9 <= second[0] <= second[1] <= whi + 1e-9


@given(st.sampled_from(QS), st.sampled_from(GS), st.floats(-1, 1), st.floats(-1, 1))
def test_monotone(q, g, u, v):
    w = 2 * g * math.sqrt(q)
    a, b = sorted((u * w, v * w))
    assert B.lower_m(q, g, a) <= B.lower_m(q, g, b) * (1 + 1e-12) + 1e-12
    assert B.upper_M(q, g, a) <= B.upper_M(q, g, b) * (1 + 1e-12) + 1e-12


@given(st.sampled_from(QS), st.sampled_from(GS), st.data())
def test_lower_dominates_perret(q, g, data):
    m = math.isqrt(4 * g * g * q)
    tau = data.draw(st.integers(-m, m))
    assert B.perret_lower(q, g, tau) <= B.lower_m(q, g, tau) * (1 + 1e-9) + 1e-9


def test_floor_ratio_exact_near_breakpoints():
    for q in (4 * 9, 9, 25, 49):
        # 2 sqrt(q) integral: tau at the breakpoint belongs to the upper piece
        s = 2 * math.isqrt(q)
        for n in range(-3, 4):
            assert B.floor_ratio(n * s, q) == n
            assert B.floor_ratio(n * s - 1, q) == n - 1
    for q in (3, 5, 7, 11):
        for tau in range(-40, 41):
            n = B.floor_ratio(tau, q)
            assert 4 * n * n * q <= tau * tau if n >= 0 else True
            assert tau >= 0 or n < 0


@pytest.mark.parametrize("q", QS)
def test_sandwich_on_admissible_surfaces(q):
    m = math.isqrt(4 * q)
    for a1 in range(-2 * m, 2 * m + 1):
        for a2 in range(-4 * m * m, a1 * a1 // 4 + 2 * q + 1):
            if not ruck_admissible(q, a1, a2):
                continue
            n = num_points(WeilPolynomial(q, 2, (a1, a2)))
            assert B.lower_m(q, 2, a1) - 1e-9 <= n <= B.upper_M(q, 2, a1) + 1e-9


def test_report_round_trip():
    rep = B.bound_report(9, 2, 0)
    assert rep.get("M").value == 100
    again = B.BoundReport.from_dict(rep.to_dict())
    assert again.to_json() == rep.to_json()
    rep = B.bound_report(3, 3)
    assert rep.get("psi-interval", "upper").applicable
    rep = B.bound_report(3, 1, 4, 4)
    assert not rep.get("M").applicable
