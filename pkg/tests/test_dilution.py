import math

import numpy as np
import pytest

from entmono import (
    DilutionTarget,
    discontinuity_report,
    entropy_curves,
    fidelity_curve,
    log_binom,
    m_of_r,
    renyi_entropy,
    tail_mass,
    truncation_index,
    x_star,
    x_star_finite,
)

PI6 = DilutionTarget(math.pi / 6)
THETAS = (math.pi / 8, math.pi / 6, math.pi / 5)


def brute_curves(theta, n, x, alphas):
    """Full-spectrum reference: exact integer binomials, plain float powers.

    Enumerates every coefficient level of the truncated power state without
    logs, gammaln, or log-sum-exp, so it is independent of the library path.
    """
    a, b = math.cos(theta) ** 2, math.sin(theta) ** 2
    r = min(max(math.floor(x * n), 0), n)
    counts = [math.comb(n, l) for l in range(r + 1)]
    weights = [a ** (n - l) * b**l for l in range(r + 1)]
    t = math.fsum(c * w for c, w in zip(counts, weights))
    m = math.log2(sum(counts))
    e1 = -math.fsum(c * (w / t) * math.log2(w / t) for c, w in zip(counts, weights)) / n
    out = {}
    for alpha in alphas:
        if alpha == 1.0:
            out[alpha] = e1
        else:
            s = math.fsum(c * (w / t) ** alpha for c, w in zip(counts, weights))
            out[alpha] = math.log2(s) / (n * (1.0 - alpha))
    return r, t, m, e1, out


def literal_spectrum(theta, n, x):
    """The truncated coefficient list written out entry by entry."""
    a, b = math.cos(theta) ** 2, math.sin(theta) ** 2
    r = min(max(math.floor(x * n), 0), n)
    levels = [np.full(math.comb(n, l), a ** (n - l) * b**l) for l in range(r + 1)]
    flat = np.concatenate(levels)
    return flat / flat.sum()


class TestDilutionTarget:
    def test_weights(self):
        assert PI6.a == pytest.approx(0.75, abs=1e-12)
        assert PI6.b == pytest.approx(0.25, abs=1e-12)
        assert PI6.a + PI6.b == pytest.approx(1.0, abs=1e-12)

    def test_guard_boundaries(self):
        for theta in (0.0, math.pi / 4, -0.1, 1.0):
            with pytest.raises(ValueError, match="theta"):
                DilutionTarget(theta)

    def test_single_copy_entropies(self):
        assert PI6.entanglement(1.0) == pytest.approx(0.811278, abs=1e-6)
        assert PI6.entanglement(0.5) == pytest.approx(
            2 * math.log2(math.sqrt(0.75) + math.sqrt(0.25)), abs=1e-12
        )


class TestLogBinom:
    def test_small_value(self):
        assert log_binom(4, 1) == pytest.approx(math.log(4), abs=1e-12)

    def test_integer_oracle_up_to_thirty(self):
        for n in range(1, 31):
            for l in range(n + 1):
                exact = math.log(math.comb(n, l))
                got = log_binom(n, l)
                assert abs(got - exact) <= 1e-12 * max(1.0, abs(exact))

    def test_huge_arguments_stay_finite(self):
        val = log_binom(10**6, 5 * 10**5)
        assert math.isfinite(val)
        # Stirling: ln C(2m, m) ~ 2m ln 2 - 0.5 ln(pi m)
        m = 5 * 10**5
        stirling = 2 * m * math.log(2) - 0.5 * math.log(math.pi * m)
        assert val == pytest.approx(stirling, rel=1e-6)

    def test_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            log_binom(4, 5)
        with pytest.raises(ValueError, match="out of range"):
            log_binom(4, -1)


class TestTruncationIndex:
    def test_floor_with_inclusive_boundary(self):
        assert truncation_index(0.25, 4) == 1
        assert truncation_index(0.5, 4) == 2
        assert truncation_index(0.49, 4) == 1

    def test_clamped_to_range(self):
        assert truncation_index(0.0, 10) == 0
        assert truncation_index(1.0, 10) == 10


class TestTailMass:
    def test_five_term_reference(self):
        # exact dyadic arithmetic: (81 + 4*27) / 256
        assert tail_mass(PI6, 4, 1) == pytest.approx(189 / 256, abs=1e-9)

    def test_full_range_is_one(self):
        for n in (4, 30, 1000):
            assert tail_mass(PI6, n, n) == pytest.approx(1.0, abs=1e-12)

    def test_single_term(self):
        for n in (1, 5, 20):
            assert tail_mass(PI6, n, 0) == pytest.approx(0.75**n, rel=1e-12)

    def test_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            tail_mass(PI6, 4, 5)


class TestFidelityCurve:
    def test_both_conventions_at_quarter(self):
        paper, normalized = fidelity_curve(PI6, 4, [0.25])
        assert normalized[0] == pytest.approx(0.738281, abs=1e-6)
        assert paper[0] == pytest.approx(0.545059, abs=1e-6)
        assert paper[0] == pytest.approx(normalized[0] ** 2, abs=1e-12)

    def test_endpoint(self):
        paper, normalized = fidelity_curve(PI6, 7, [1.0])
        assert paper[0] == pytest.approx(1.0, abs=1e-12)
        assert normalized[0] == pytest.approx(1.0, abs=1e-12)

    def test_monotone_in_x(self):
        xs = np.linspace(0, 1, 21)
        paper, normalized = fidelity_curve(PI6, 50, xs)
        assert np.all(np.diff(paper) >= -1e-15)
        assert np.all(np.diff(normalized) >= -1e-15)

    def test_large_n_concentration(self):
        paper, normalized = fidelity_curve(PI6, 5000, [0.20, 0.30])
        assert paper[0] < 0.01 and normalized[0] < 0.01
        assert paper[1] > 0.99 and normalized[1] > 0.99

    def test_rejects_out_of_range_samples(self):
        with pytest.raises(ValueError, match="samples"):
            fidelity_curve(PI6, 4, [1.5])


class TestXStar:
    def test_asymptotic_matches_b(self):
        assert x_star(PI6) == pytest.approx(0.25, abs=1e-12)

    def test_approaches_half_for_balanced_target(self):
        nearly = DilutionTarget(math.pi / 4 - 1e-6)
        assert x_star(nearly) == pytest.approx(0.5, abs=1e-5)

    def test_finite_solver_close_to_asymptotic(self):
        assert x_star_finite(PI6, 1000) == pytest.approx(0.25, abs=0.02)

    def test_finite_solver_crossing(self):
        n = 200
        goal = n * PI6.entanglement(1.0)
        r = round(x_star_finite(PI6, n) * n)
        assert m_of_r(n, r) >= goal
        assert m_of_r(n, r - 1) < goal


class TestEntropyCurves:
    def test_full_truncation_recovers_single_copy_values(self):
        curve = entropy_curves(PI6, 12, [1.0], alphas=[0.0, 0.25, 0.5, 1.0])
        assert curve.e1_per_copy[0] == pytest.approx(PI6.entanglement(1.0), abs=1e-9)
        assert curve.e1_per_copy[0] == pytest.approx(0.811278, abs=1e-6)
        for alpha in (0.25, 0.5):
            assert curve.e_alpha_per_copy[alpha][0] == pytest.approx(
                PI6.entanglement(alpha), abs=1e-9
            )

    @pytest.mark.parametrize("theta", THETAS)
    def test_matches_brute_force_small_n(self, theta):
        target = DilutionTarget(theta)
        alphas = [0.0, 0.25, 0.5, 0.75, 1.0]
        xs = [0.0, 0.15, 0.3, 0.5, 0.75, 1.0]
        for n in (1, 2, 5, 11, 24, 30):
            curve = entropy_curves(target, n, xs, alphas=alphas)
            for i, x in enumerate(xs):
                r, t, m, e1, per_alpha = brute_curves(theta, n, x, alphas)
                assert curve.r_values[i] == r
                assert curve.tail[i] == pytest.approx(t, abs=1e-10)
                assert curve.m_of_r[i] == pytest.approx(m, abs=1e-10)
                assert curve.e1_per_copy[i] == pytest.approx(e1, abs=1e-10)
                for alpha in alphas:
                    assert curve.e_alpha_per_copy[alpha][i] == pytest.approx(
                        per_alpha[alpha], abs=1e-10
                    )

    def test_matches_literal_coefficient_list(self):
        # the spelled-out 2^N spectrum fed through the generic entropy code
        for n in (4, 9, 14):
            for x in (0.3, 0.6, 1.0):
                spectrum = literal_spectrum(math.pi / 6, n, x)
                curve = entropy_curves(PI6, n, [x], alphas=[0.5])
                assert curve.e1_per_copy[0] == pytest.approx(
                    renyi_entropy(spectrum, 1.0) / n, abs=1e-10
                )
                assert curve.e_alpha_per_copy[0.5][0] == pytest.approx(
                    renyi_entropy(spectrum, 0.5) / n, abs=1e-10
                )

    def test_renyi_ordering_along_curve(self):
        xs = np.linspace(0.05, 1.0, 12)
        curve = entropy_curves(PI6, 400, xs, alphas=[0.25, 0.5, 0.75])
        for alpha in (0.25, 0.5, 0.75):
            assert np.all(curve.e_alpha_per_copy[alpha] >= curve.e1_per_copy - 1e-9)

    def test_m_of_r_boundary(self):
        for n in (10, 200, 5000):
            curve = entropy_curves(PI6, n, [1.0], alphas=[0.5])
            assert curve.m_of_r[0] == pytest.approx(n, abs=1e-9)

    def test_step_function_convergence(self):
        lo, hi = [], []
        for n in (100, 500, 1000, 5000):
            _, normalized = fidelity_curve(PI6, n, [0.20, 0.30])
            lo.append(normalized[0])
            hi.append(normalized[1])
        assert all(np.diff(lo) <= 0), "below the step the fidelity must sink toward 0"
        assert all(np.diff(hi) >= 0), "above the step the fidelity must climb toward 1"

    def test_rejects_bad_alpha(self):
        with pytest.raises(ValueError, match="alpha"):
            entropy_curves(PI6, 10, [0.5], alphas=[1.5])


class TestDiscontinuityReport:
    def test_alpha_one_rejected(self):
        with pytest.raises(ValueError, match="alpha"):
            discontinuity_report(PI6, [100], 1.0, 0.05)

    def test_delta_guard(self):
        with pytest.raises(ValueError, match="delta"):
            discontinuity_report(PI6, [100], 0.5, 0.0)

    def test_gap_persists_while_fidelity_saturates(self):
        rows = discontinuity_report(PI6, [100, 500, 1000, 5000], 0.5, 0.05)
        infidelity = [1.0 - row.fidelity_normalized for row in rows]
        assert all(np.diff(infidelity) < 0)
        assert rows[-1].fidelity_normalized >= 0.99
        assert rows[-1].fidelity_paper >= 0.99
        assert all(row.gap > 0.02 for row in rows)
        reference = PI6.entanglement(0.5)
        for row in rows:
            assert row.gap == pytest.approx(reference - row.e_alpha, abs=1e-12)
