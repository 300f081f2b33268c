"""Truncated many-copy states from entanglement dilution, at large copy counts.

The target of the dilution is a two-term state with squared coefficients
(a, b) = (cos^2 theta, sin^2 theta), a > b > 0.  The Schmidt coefficients of
its N-fold tensor power group into N+1 levels: level l holds C(N, l) equal
squared coefficients p_l = a^(N-l) b^l.  Truncating to levels l <= x*N and
renormalizing yields the state whose fidelity with the full power and whose
per-copy order-alpha entropies this module evaluates.

Every sum over levels runs in the natural-log domain through log-sum-exp
(binomials at N ~ 10^6 overflow any fixed-width float); conversion to base-2
happens only at output.  The fidelity is reported in two conventions that
agree on all step-function conclusions: the squared tail mass T^2 and the
normalized-state overlap T (see ``fidelity_curve``).  Entropies use the
standard non-negative sign convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .monotones import renyi_entropy

LN2 = math.log(2.0)


@dataclass(frozen=True)
class DilutionTarget:
    """Two-term dilution target parametrized by theta in (0, pi/4)."""

    theta: float

    def __post_init__(self):
        if not 0.0 < self.theta < math.pi / 4:
            raise ValueError(
                f"theta must lie strictly inside (0, pi/4), got {self.theta!r}; "
                "the target must be entangled but not maximally so"
            )

    @property
    def a(self) -> float:
        return math.cos(self.theta) ** 2

    @property
    def b(self) -> float:
        return math.sin(self.theta) ** 2

    def entanglement(self, alpha: float) -> float:
        """E_alpha of a single copy, from the closed two-point spectrum."""
        return renyi_entropy([self.a, self.b], alpha)


@dataclass(frozen=True)
class DiscontinuityRow:
    """One schedule entry of the fixed-offset truncation diagnostics."""

    n_tilde: int
    x: float
    fidelity_paper: float
    fidelity_normalized: float
    e1: float
    e_alpha: float
    gap: float


@dataclass(frozen=True)
class DilutionCurve:
    """Sampled truncation curves for one (theta, N) pair.

    ``e_alpha_per_copy`` maps each requested alpha to its sampled vector;
    ``x_star`` is the asymptotic step location b = sin^2 theta.
    """

    n_tilde: int
    x_samples: np.ndarray
    r_values: np.ndarray
    m_of_r: np.ndarray
    tail: np.ndarray
    fidelity_paper: np.ndarray
    fidelity_normalized: np.ndarray
    e1_per_copy: np.ndarray
    e_alpha_per_copy: dict
    x_star: float


def log_binom(n: int, l: int) -> float:
    """Natural log of the binomial coefficient C(n, l), via log-gamma."""
    if l < 0 or l > n or n < 0:
        raise ValueError(f"binomial index out of range: C({n}, {l})")
    return float(gammaln(n + 1) - gammaln(l + 1) - gammaln(n - l + 1))


def truncation_index(x: float, n_tilde: int) -> int:
    """Largest retained level r = floor(x * N), clamped into [0, N]."""
    return int(min(max(math.floor(x * n_tilde), 0), n_tilde))


def _log_level_weights(target: DilutionTarget, n_tilde: int, r: int) -> np.ndarray:
    """ln of C(N, l) a^(N-l) b^l for l = 0..r."""
    l = np.arange(r + 1)
    log_c = gammaln(n_tilde + 1) - gammaln(l + 1) - gammaln(n_tilde - l + 1)
    return log_c + (n_tilde - l) * math.log(target.a) + l * math.log(target.b)


def tail_mass(target: DilutionTarget, n_tilde: int, r: int) -> float:
    """T = sum_{l<=r} C(N,l) a^(N-l) b^l, in (0, 1], by log-sum-exp."""
    if r < 0 or r > n_tilde:
        raise ValueError(f"level cutoff out of range: r={r}, N={n_tilde}")
    return float(min(math.exp(logsumexp(_log_level_weights(target, n_tilde, r))), 1.0))


def m_of_r(n_tilde: int, r: int) -> float:
    """Base-2 log of the retained coefficient count: the teleportation cost in ebits."""
    if r < 0 or r > n_tilde:
        raise ValueError(f"level cutoff out of range: r={r}, N={n_tilde}")
    l = np.arange(r + 1)
    log_c = gammaln(n_tilde + 1) - gammaln(l + 1) - gammaln(n_tilde - l + 1)
    return float(logsumexp(log_c) / LN2)


def fidelity_curve(target: DilutionTarget, n_tilde: int, x_samples):
    """Fidelity of the truncation with the full tensor power, both conventions.

    Returns two sampled vectors: the squared tail mass T^2 (the raw projection
    amplitude squared, emitted as the F_paper column) and the overlap of the
    renormalized truncation with the power, |<xi|psi^N>|^2 = T (the
    F_normalized column).  The conventions agree at T = 1 and on every
    step-function conclusion.
    """
    xs = np.asarray(x_samples, dtype=float)
    if xs.size and (xs.min() < 0.0 or xs.max() > 1.0):
        raise ValueError("x samples must lie in [0, 1]")
    t = np.array([tail_mass(target, n_tilde, truncation_index(x, n_tilde)) for x in xs])
    return t * t, t


def x_star(target: DilutionTarget) -> float:
    """Asymptotic step location of the fidelity curve.

    Per copy, the log of the retained count tends to the binary entropy
    H(x) for x <= 1/2, and the matching condition H(x*) = H(b) with
    x* <= 1/2 forces x* = b.
    """
    return target.b


def x_star_finite(target: DilutionTarget, n_tilde: int) -> float:
    """Finite-N step location: smallest r with m_of_r(r) >= N H(b), as a fraction.

    Bisection over the integer level cutoff; m_of_r is strictly increasing
    in r, so this brackets the exact crossing of the asymptotic identity.
    """
    goal = n_tilde * target.entanglement(1.0)
    lo, hi = 0, n_tilde
    if m_of_r(n_tilde, lo) >= goal:
        return 0.0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if m_of_r(n_tilde, mid) >= goal:
            hi = mid
        else:
            lo = mid
    return hi / n_tilde


def entropy_curves(target: DilutionTarget, n_tilde: int, x_samples, alphas=(0.5,)) -> DilutionCurve:
    """Per-copy entropies and fidelities of the truncation along x samples.

    For cutoff r the normalized squared coefficients are lambda_l = p_l / T
    with multiplicity C(N, l); the per-copy Shannon entropy is
    -(1/N) sum C(N,l) lambda_l log2 lambda_l and the order-alpha value is
    log2(sum C(N,l) lambda_l^alpha) / (N (1 - alpha)).
    """
    xs = np.asarray(x_samples, dtype=float)
    alphas = [float(a) for a in alphas]
    for alpha in alphas:
        if not 0.0 <= alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")
    r_values = np.array([truncation_index(x, n_tilde) for x in xs], dtype=int)

    tails = np.empty(xs.size)
    ms = np.empty(xs.size)
    e1 = np.empty(xs.size)
    per_alpha = {alpha: np.empty(xs.size) for alpha in alphas}

    for i, r in enumerate(r_values):
        logw = _log_level_weights(target, n_tilde, int(r))
        log_t = float(logsumexp(logw))
        tails[i] = min(math.exp(log_t), 1.0)

        l = np.arange(r + 1)
        log_c = gammaln(n_tilde + 1) - gammaln(l + 1) - gammaln(n_tilde - l + 1)
        ms[i] = float(logsumexp(log_c) / LN2)

        log_lam = logw - log_c - log_t
        # weights C(N,l) lambda_l = exp(logw - log_t) sum to one; each term of
        # the Shannon sum is then safely formed in the linear domain.
        w = np.exp(logw - log_t)
        e1[i] = float(-(w * log_lam).sum() / (LN2 * n_tilde)) + 0.0

        for alpha in alphas:
            if alpha == 1.0:
                per_alpha[alpha][i] = e1[i]
            elif alpha == 0.0:
                per_alpha[alpha][i] = ms[i] / n_tilde
            else:
                log_s = float(logsumexp(log_c + alpha * log_lam))
                per_alpha[alpha][i] = log_s / (LN2 * n_tilde * (1.0 - alpha)) + 0.0

    return DilutionCurve(
        n_tilde=n_tilde,
        x_samples=xs,
        r_values=r_values,
        m_of_r=ms,
        tail=tails,
        fidelity_paper=tails * tails,
        fidelity_normalized=tails.copy(),
        e1_per_copy=e1,
        e_alpha_per_copy=per_alpha,
        x_star=x_star(target),
    )


def discontinuity_report(target: DilutionTarget, n_tilde_schedule, alpha: float,
                         delta: float):
    """Fixed-offset diagnostics just past the step, across a copy-count schedule.

    At x = x* + delta the fidelity climbs toward one with growing N, while the
    per-copy order-alpha entropy (alpha < 1) stays measurably below the
    single-copy value E_alpha: the per-copy entropy is discontinuous as a
    function of fidelity.  Rows report both fidelity conventions, e1, e_alpha,
    and the gap E_alpha - e_alpha; no claim is made about the limit of
    e_alpha itself.
    """
    if not 0.0 <= alpha < 1.0:
        raise ValueError(
            f"alpha must lie in [0, 1); got {alpha!r} (order 1 is the continuous case)"
        )
    if delta <= 0.0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    x = min(x_star(target) + delta, 1.0)
    reference = target.entanglement(alpha)
    rows = []
    for n_tilde in n_tilde_schedule:
        n_tilde = int(n_tilde)
        curve = entropy_curves(target, n_tilde, [x], alphas=[alpha])
        e_a = float(curve.e_alpha_per_copy[alpha][0])
        rows.append(
            DiscontinuityRow(
                n_tilde=n_tilde,
                x=x,
                fidelity_paper=float(curve.fidelity_paper[0]),
                fidelity_normalized=float(curve.fidelity_normalized[0]),
                e1=float(curve.e1_per_copy[0]),
                e_alpha=e_a,
                gap=reference - e_a,
            )
        )
    return rows
