"""Limit regimes and limiting spectral measures of growing parameter families.

As the diameter grows with base b and alpha eventually constant, the scaled
spectral data is governed by two scalars: gamma = lim t sqrt(k) and the
accumulation behavior of beta/sqrt(k).  Three regimes occur:

* ``case_i_rho``            alpha != 0 (or alpha = 0 with a positive limit),
                            beta/sqrt(k) -> rho > 0;
* ``case_i_alpha_over_rho`` alpha != 0, beta/sqrt(k) -> alpha/rho (the other
                            root; for b < 0 one has rho = sqrt(-alpha));
* ``case_ii``               alpha = 0, beta/sqrt(k) -> rho >= 0, with the
                            rho = 0 subcase parameterized by a lattice scale
                            eta (b > 0 there).

Each regime yields an explicit discrete limit measure; this module builds
those measures, the specialized closed forms for the concrete families, and
a classifier that recovers the regime from a parameter schedule.  Internal
arithmetic uses mpmath so that pointwise comparisons at atom magnitudes
~ b^j keep many digits of headroom; results are returned as floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import mpmath
from mpmath import mp

from . import families as fam
from .gibbs import DiscreteMeasure, gibbs_distribution
from .params import ClassicalParams, intersection_array, spectral_table
from .qseries import as_fraction, gauss_bracket, infinite_product, poch_inf

CASE_I_RHO = "case_i_rho"
CASE_I_ALPHA_OVER_RHO = "case_i_alpha_over_rho"
CASE_II = "case_ii"
_KINDS = (CASE_I_RHO, CASE_I_ALPHA_OVER_RHO, CASE_II)

_DPS = 40
_POSITIVITY_SLACK = 1e-11


@dataclass(frozen=True)
class LimitRegime:
    """Scaling-limit data (b, alpha, gamma, rho, eta) for one subnet.

    gamma, rho, and eta may be floats or mpmath values; keeping them in high
    precision matters when atoms ~ b^j are compared pointwise at 1e-10.
    """

    kind: str
    b: int
    alpha: Fraction
    gamma: object
    rho: object
    eta: object | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown regime kind {self.kind!r}")
        if abs(self.b) < 2:
            raise ValueError("regime base must satisfy |b| >= 2")
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        rho = float(self.rho)
        if self.kind == CASE_II:
            if self.alpha != 0:
                raise ValueError("case_ii requires alpha = 0")
            if rho < 0:
                raise ValueError("case_ii requires rho >= 0")
            if rho == 0:
                if self.eta is None or float(self.eta) <= 0:
                    raise ValueError("case_ii with rho = 0 requires a positive eta")
                if self.b < 0:
                    raise ValueError("case_ii with rho = 0 requires b > 0")
        else:
            if self.alpha == 0:
                raise ValueError(f"{self.kind} requires alpha != 0")
            if rho <= 0:
                raise ValueError(f"{self.kind} requires rho > 0")
            if self.b < 0:
                expected = math.sqrt(-float(self.alpha))
                if abs(rho - expected) > 1e-9 * (1 + expected):
                    raise ValueError(
                        f"b < 0 requires rho = sqrt(-alpha) = {expected}, got {rho}"
                    )
        if 1 + float(self.gamma) * self.sigma <= 0:
            raise ValueError(
                f"normalizer 1 + gamma (rho + alpha/rho) = "
                f"{1 + float(self.gamma) * self.sigma} must be positive"
            )

    @property
    def sigma(self) -> float:
        """rho + alpha/rho, with 0/0 := 0 in the rho = 0 case."""
        rho = float(self.rho)
        if rho == 0:
            return 0.0
        return rho + float(self.alpha) / rho


@dataclass(frozen=True)
class RegimeReport:
    """Classifier output: one regime per subnet plus the observed sequences."""

    regimes: tuple[tuple[str, LimitRegime], ...]
    diagnostics: Mapping[str, tuple]

    @property
    def regime(self) -> LimitRegime:
        if len(self.regimes) != 1:
            tags = [tag for tag, _ in self.regimes]
            raise ValueError(f"multiple subnet regimes present: {tags}")
        return self.regimes[0][1]

    def subnet(self, tag: str) -> LimitRegime:
        for t, reg in self.regimes:
            if t == tag:
                return reg
        raise KeyError(tag)


# ---------------------------------------------------------------------------
# numeric q-series helpers (mpf arithmetic)


def _poch_n(a, q, h: int):
    out = mp.mpf(1)
    aql = a
    for _ in range(h):
        out *= 1 - aql
        aql *= q
    return out


def _gen_poch_n(x, y, q, h: int):
    out = mp.mpf(1)
    yql = y
    for _ in range(h):
        out *= x - yql
        yql *= q
    return out


def _bracket_n(j: int, b):
    if j == 0:
        return mp.mpf(0)
    return (b**j - 1) / (b - 1)


def _phi_n(uppers, lowers, q, z, n_terms: int, excess: int):
    """Terminating basic hypergeometric sum over h = 0..n_terms, numerically."""
    total = mp.mpf(0)
    term = mp.mpf(1)
    qh = mp.mpf(1)
    for h in range(n_terms + 1):
        total += term
        if h == n_terms:
            break
        num = mp.mpf(1)
        for a in uppers:
            num *= 1 - a * qh
        den = 1 - q * qh
        for bb in lowers:
            den *= 1 - bb * qh
        term = term * num * z / den
        if excess:
            term *= (-1) ** excess / q ** (excess * h)
        qh *= q
    return total


def _to_measure(atoms, masses, extra_err: float) -> DiscreteMeasure:
    # the mass deficit is measured before rounding the masses to floats
    total = sum(masses, mp.mpf(0))
    atoms_f = tuple(float(x) for x in atoms)
    masses_f = tuple(float(w) for w in masses)
    scale = max([1.0] + [abs(w) for w in masses_f])
    return DiscreteMeasure(
        atoms=atoms_f,
        masses=masses_f,
        truncated=True,
        tail_bound=float(abs(1 - total)) + extra_err,
        positivity=min(masses_f) >= -_POSITIVITY_SLACK * scale,
    )


def _measure_case_i(b, alpha, gamma, rho_eff, sigma, j_max, eps):
    """Common body of the two alpha != 0 measures (rho_eff is rho or alpha/rho).

    The spectral-weight factor is evaluated in the peeled form
    (x; 1/b)_oo = (1-x) (x/b; 1/b)_oo so that the removable 0/0 at
    x = (alpha+1-b)/(rho_eff^2 b^j) = 1 (which occurs at j = 0 for some
    families) cancels algebraically.
    """
    cc = alpha + 1 - b
    norm = mp.sqrt(1 + gamma * sigma)
    qinv = 1 / b
    atoms, masses = [], []
    err_total = mp.mpf(0)
    for j in range(j_max + 1):
        bj = b**j
        atom = (
            _bracket_n(j, b) * (rho_eff - alpha / (rho_eff * bj))
            - 1 / (rho_eff * bj)
            - gamma
        ) / norm

        num_inf, e1 = infinite_product(alpha / (rho_eff**2 * bj * b), qinv, eps)
        den_inf, e2 = infinite_product(cc / (rho_eff**2 * bj * b), qinv, eps)
        if j == 0:
            ratio = mp.mpf(1)  # both factors are 1 - cc/rho^2; exact cancellation
        else:
            ratio_den = 1 - cc / (rho_eff**2 * bj)
            if abs(ratio_den) < mp.mpf(10) ** (-mp.dps + 5):
                raise ZeroDivisionError(
                    f"spectral weight denominator vanishes at j = {j}"
                )
            ratio = (1 - cc / (rho_eff**2 * bj * bj)) / ratio_den
        part1 = (
            num_inf
            * _gen_poch_n(cc, alpha, b, j)
            * ratio
            / (den_inf * _poch_n(b, b, j) * rho_eff ** (2 * j) * b ** (j * j - j))
        )

        gibbs_inf, e3 = infinite_product(
            gamma * (b - 1) / (rho_eff * bj * b), qinv, eps
        )
        ssum = mp.mpf(0)
        term = mp.mpf(1)
        z = gamma * rho_eff * bj * (b - 1)
        qh = mp.mpf(1)
        for ell in range(j + 1):
            ssum += term
            if ell == j:
                break
            term *= (1 - qh / bj) * (1 - (alpha / (rho_eff**2 * bj)) * qh) * z
            term /= (cc - alpha * qh) * (1 - b * qh)
            qh *= b
        mass = part1 * gibbs_inf * ssum
        err_total += abs(e1) + abs(e2) + abs(e3)
        atoms.append(atom)
        masses.append(mass)
    return _to_measure(atoms, masses, float(err_total))


def _sigma_mp(alpha, rho):
    return rho + alpha / rho if rho != 0 else mp.mpf(0)


def measure_case_rho_pos(
    regime: LimitRegime, j_max: int = 40, eps: float = 1e-14, dps: int = _DPS
) -> DiscreteMeasure:
    """Limit measure when beta/sqrt(k) -> rho > 0 (atom j is the limit of
    the normalized eigenvalue of index d - j)."""
    if regime.kind == CASE_I_ALPHA_OVER_RHO:
        raise ValueError("use measure_case_alpha_over_rho for this regime")
    if float(regime.rho) <= 0:
        raise ValueError("this case requires rho > 0")
    with mp.workdps(dps):
        alpha = mp.mpf(regime.alpha.numerator) / regime.alpha.denominator
        rho = mp.mpf(regime.rho)
        return _measure_case_i(
            mp.mpf(regime.b),
            alpha,
            mp.mpf(regime.gamma),
            rho,
            _sigma_mp(alpha, rho),
            j_max,
            mp.mpf(eps),
        )


def measure_case_alpha_over_rho(
    regime: LimitRegime, j_max: int = 40, eps: float = 1e-14, dps: int = _DPS
) -> DiscreteMeasure:
    """Limit measure on the subnet with beta/sqrt(k) -> alpha/rho (alpha != 0)."""
    if regime.kind != CASE_I_ALPHA_OVER_RHO:
        raise ValueError("regime is not the alpha/rho accumulation branch")
    with mp.workdps(dps):
        alpha = mp.mpf(regime.alpha.numerator) / regime.alpha.denominator
        rho = mp.mpf(regime.rho)
        return _measure_case_i(
            mp.mpf(regime.b),
            alpha,
            mp.mpf(regime.gamma),
            alpha / rho,
            _sigma_mp(alpha, rho),
            j_max,
            mp.mpf(eps),
        )


def measure_case_rho_zero(
    regime: LimitRegime,
    j_min: int = -12,
    j_max: int = 40,
    eps: float = 1e-14,
    dps: int = _DPS,
) -> DiscreteMeasure:
    """Limit measure when alpha = 0 and beta/sqrt(k) -> 0 (b > 0).

    Atoms are indexed by j over a two-sided lattice; atom j is the limit of
    the normalized eigenvalue of index c - j with c = floor(log_b sqrt(k)).
    """
    if regime.kind != CASE_II or float(regime.rho) != 0:
        raise ValueError("this case requires the alpha = 0, rho = 0 regime")
    if j_min > j_max:
        raise ValueError("j_min must not exceed j_max")
    b_int = regime.b
    with mp.workdps(dps):
        b = mp.mpf(b_int)
        eta = mp.mpf(regime.eta)
        gamma = mp.mpf(regime.gamma)
        epsm = mp.mpf(eps)
        qinv = 1 / b
        sq = mp.sqrt(b - 1)
        base0, e0a = infinite_product(qinv, qinv, epsm)
        base1, e0b = infinite_product(-1 / eta**2, qinv, epsm)
        base2, e0c = infinite_product(-(eta**2) / b, qinv, epsm)
        denom0 = base0 * base1 * base2
        atoms, masses = [], []
        err_total = abs(e0a) + abs(e0b) + abs(e0c)
        for j in range(j_min, j_max + 1):
            x = eta * b**j
            atom = (x - 1 / x) / sq - gamma
            g1, e1 = infinite_product(gamma * sq / (x * b), qinv, epsm)
            g2, e2 = infinite_product(-gamma * x * sq / b, qinv, epsm)
            mass = (
                (1 + 1 / x**2)
                * b ** (-2 * j * j + j)
                / (denom0 * eta ** (4 * j))
                * g1
                * g2
            )
            err_total += abs(e1) + abs(e2)
            atoms.append(atom)
            masses.append(mass)
        return _to_measure(atoms, masses, float(err_total))


def limit_measure(
    regime: LimitRegime,
    j_max: int = 40,
    j_min: int = -12,
    eps: float = 1e-14,
    dps: int = _DPS,
) -> DiscreteMeasure:
    """Dispatch to the measure construction matching the regime."""
    if regime.kind == CASE_I_ALPHA_OVER_RHO:
        return measure_case_alpha_over_rho(regime, j_max, eps, dps)
    if regime.kind == CASE_II and float(regime.rho) == 0:
        return measure_case_rho_zero(regime, j_min, j_max, eps, dps)
    return measure_case_rho_pos(regime, j_max, eps, dps)


# ---------------------------------------------------------------------------
# family-specialized closed forms


@dataclass(frozen=True)
class ClosedFormPreset:
    """One of the five specialized limit-measure formulas.

    ``family`` is grassmann, half_dual_polar, second_dual_polar, bilinear,
    or hermitian_forms; ``base`` is q or r; ``delta`` the half-integer
    growth offset (grassmann, bilinear), ``epsilon`` in {0, 1} the subnet
    selector for half_dual_polar, and ``sign`` +-1 the accumulation branch
    (+1 for beta/sqrt(k) -> +sqrt(-alpha), i.e. odd diameters) for the
    negative-base families.
    """

    family: str
    base: int
    delta: Fraction | None = None
    epsilon: int | None = None
    sign: int | None = None

    def __post_init__(self) -> None:
        if self.family not in (
            "grassmann",
            "half_dual_polar",
            "second_dual_polar",
            "bilinear",
            "hermitian_forms",
        ):
            raise ValueError(f"no closed form for family {self.family!r}")
        if self.delta is not None:
            object.__setattr__(self, "delta", as_fraction(self.delta))
        if self.family in ("grassmann", "bilinear") and self.delta is None:
            raise ValueError(f"{self.family} preset requires delta")
        if self.family == "half_dual_polar" and self.epsilon not in (0, 1):
            raise ValueError("half_dual_polar preset requires epsilon in {0, 1}")
        if self.family in ("second_dual_polar", "hermitian_forms") and self.sign not in (
            -1,
            1,
        ):
            raise ValueError(f"{self.family} preset requires sign in {{-1, +1}}")


def _closed_form_grassmann(q, delta, gamma, j_max, eps):
    atoms, masses = [], []
    err = mp.mpf(0)
    qinv = 1 / q
    norm = (q - 1) * mp.sqrt(1 + gamma * (q**delta + q ** (1 - delta)))
    for j in range(j_max + 1):
        atom = (
            q ** (delta + j) + q ** (-delta - j) - q**delta - q ** (1 - delta)
            - gamma * (q - 1)
        ) / norm
        spectral = q ** (-(j * (2 * delta + j - 1))) - q ** (
            -((j + 1) * (2 * delta + j))
        )
        ginf, e1 = infinite_product(gamma * (q - 1) / q ** (delta + j + 1), qinv, eps)
        series = _phi_n(
            [q ** (-j), q ** (1 - 2 * delta - j)],
            [q],
            q,
            gamma * (q - 1) * q ** (delta + j),
            j,
            0,
        )
        atoms.append(atom)
        masses.append(spectral * ginf * series)
        err += abs(e1)
    return _to_measure(atoms, masses, float(err))


def _closed_form_half_dual_polar(r, epsilon, gamma, j_max, eps):
    atoms, masses = [], []
    err = mp.mpf(0)
    sq = mp.sqrt(r + 1)
    norm = (r - 1) * mp.sqrt(r + 1 + gamma * (r + 1) ** mp.mpf(2.5))
    c1, e1 = infinite_product(1 / r, 1 / r**2, eps)
    c2, e2 = infinite_product(1 / r**2, 1 / r**2, eps)
    err += abs(e1) + abs(e2)
    for j in range(j_max + 1):
        atom = (
            r ** (epsilon + 2 * j)
            + r ** (-epsilon - 2 * j)
            - r
            - 1
            - gamma * (r - 1) * sq
        ) / norm
        if epsilon == 0 and j == 0:
            head = mp.mpf(1)
        else:
            head = (r ** (2 * epsilon + 4 * j) - 1) / (r ** (epsilon + 2 * j) - 1)
        ginf, e3 = infinite_product(
            gamma * (r - 1) * sq / r ** (epsilon + 2 * j + 2), 1 / r**2, eps
        )
        series = _phi_n(
            [r ** (-2 * j), r ** (1 - 2 * epsilon - 2 * j)],
            [r],
            r**2,
            gamma * r ** (epsilon + 2 * j) * (r - 1) * sq,
            j,
            0,
        )
        mass = head * c1 / (r ** ((epsilon + j) * (2 * j + 1)) * c2) * ginf * series
        err += abs(e3)
        atoms.append(atom)
        masses.append(mass)
    return _to_measure(atoms, masses, float(err))


def _closed_form_second_dual_polar(r, sign, gamma, j_max, eps):
    # sign = +1: beta/sqrt(k) -> +sqrt(-alpha) (odd d); the displayed upper
    # signs correspond to sign = +1, so "-+x" reads -sign*x and "+-x" +sign*x.
    atoms, masses = [], []
    err = mp.mpf(0)
    mr = mp.mpf(-r)
    sqr = mp.sqrt(r)
    w = mp.sqrt((r**2 - 1) / r)
    c1, e1 = infinite_product(1 / r, -1 / r, eps)
    c2, e2 = infinite_product(-1 / r, -1 / r, eps)
    err += abs(e1) + abs(e2)
    for j in range(j_max + 1):
        atom = (-sign * sqr * mr**j + sign / sqr * mr ** (-j)) / mp.sqrt(
            r**2 - 1
        ) - gamma
        ginf, e3 = infinite_product(-sign * gamma * mr ** (-j - 1) * w, -1 / r, eps)
        fin = _poch_n(-sign * gamma * mr ** (j - 1) * w, 1 / r**2, j)
        mass = (r ** (2 * j + 1) + 1) * c1 / (r ** ((j + 1) ** 2) * c2) * ginf * fin
        err += abs(e3)
        atoms.append(atom)
        masses.append(mass)
    return _to_measure(atoms, masses, float(err))


def _closed_form_bilinear(q, delta, gamma, j_max, eps):
    atoms, masses = [], []
    err = mp.mpf(0)
    sq = mp.sqrt(q - 1)
    norm = mp.sqrt(q - 1 + gamma * (q**delta + q**-delta) * (q - 1) ** mp.mpf(1.5))
    for j in range(j_max + 1):
        atom = (q ** (delta + j) - q**delta - q**-delta - gamma * sq) / norm
        inf1, e1 = infinite_product(q ** (-2 * delta - j - 1), 1 / q, eps)
        spectral = (
            (-1) ** j
            * inf1
            / (_poch_n(q, q, j) * q ** (2 * delta * j + mp.mpf(j * (j - 1)) / 2))
        )
        ginf, e2 = infinite_product(gamma * sq / q ** (delta + j + 1), 1 / q, eps)
        series = _phi_n(
            [q ** (-j), q ** (-2 * delta - j)],
            [],
            q,
            gamma * q ** (delta + j) * sq,
            j,
            1,
        )
        err += abs(e1) + abs(e2)
        atoms.append(atom)
        masses.append(spectral * ginf * series)
    return _to_measure(atoms, masses, float(err))


def _closed_form_hermitian(r, sign, gamma, j_max, eps):
    atoms, masses = [], []
    err = mp.mpf(0)
    mr = mp.mpf(-r)
    sq = mp.sqrt(r + 1)
    for j in range(j_max + 1):
        atom = -sign * mr**j / sq - gamma
        inf1, e1 = infinite_product(-(mr ** (-j - 1)), -1 / r, eps)
        spectral = inf1 / (_poch_n(mr, mr, j) * mr ** (j * (j - 1) // 2))
        ginf, e2 = infinite_product(-sign * gamma * sq / mr ** (j + 1), -1 / r, eps)
        series = _phi_n(
            [mr ** (-j), -(mr ** (-j))],
            [],
            mr,
            sign * gamma * mr**j * sq,
            j,
            1,
        )
        err += abs(e1) + abs(e2)
        atoms.append(atom)
        masses.append(spectral * ginf * series)
    return _to_measure(atoms, masses, float(err))


def family_closed_form(
    preset: ClosedFormPreset,
    gamma: float = 0.0,
    j_max: int = 40,
    eps: float = 1e-14,
    dps: int = _DPS,
) -> DiscreteMeasure:
    """Specialized limit measure for a concrete family preset."""
    with mp.workdps(dps):
        g = mp.mpf(gamma)
        e = mp.mpf(eps)
        if preset.family == "grassmann":
            delta = mp.mpf(preset.delta.numerator) / preset.delta.denominator
            return _closed_form_grassmann(mp.mpf(preset.base), delta, g, j_max, e)
        if preset.family == "half_dual_polar":
            return _closed_form_half_dual_polar(
                mp.mpf(preset.base), preset.epsilon, g, j_max, e
            )
        if preset.family == "second_dual_polar":
            return _closed_form_second_dual_polar(
                mp.mpf(preset.base), preset.sign, g, j_max, e
            )
        if preset.family == "bilinear":
            delta = mp.mpf(preset.delta.numerator) / preset.delta.denominator
            return _closed_form_bilinear(mp.mpf(preset.base), delta, g, j_max, e)
        return _closed_form_hermitian(mp.mpf(preset.base), preset.sign, g, j_max, e)


def lebesgue_check(r: int, tol: float = 1e-12) -> bool:
    """Numeric check of (1/r; -1/r)_oo (-1/r; 1/r^2)_oo = 1."""
    if r < 2:
        raise ValueError("r must be at least 2")
    if tol <= 0:
        raise ValueError("tol must be positive")
    with mp.workdps(30):
        p1, e1 = infinite_product(mp.mpf(1) / r, mp.mpf(-1) / r, mp.mpf(1e-25))
        p2, e2 = infinite_product(mp.mpf(-1) / r, mp.mpf(1) / r**2, mp.mpf(1e-25))
        return abs(p1 * p2 - 1) + abs(e1) + abs(e2) < tol


# ---------------------------------------------------------------------------
# classification of parameter schedules


def exact_c(k: Fraction, b: int) -> int:
    """floor(log_b sqrt(k)) for integer k >= 1, computed exactly."""
    if b < 2:
        raise ValueError("lattice base must satisfy b >= 2")
    if k < 1:
        raise ValueError("k must be at least 1")
    c = 0
    power = b * b
    while power <= k:
        c += 1
        power *= b * b
    return c


def _extrapolate(values: Sequence[float]) -> float:
    """Aitken delta-squared on the last three terms (falls back to the last)."""
    if len(values) >= 3:
        x0, x1, x2 = values[-3], values[-2], values[-1]
        denom = (x2 - x1) - (x1 - x0)
        if abs(denom) > 1e-14 * (1 + abs(x2)):
            acc = x2 - (x2 - x1) ** 2 / denom
            # Aitken can misfire on non-geometric tails; accept only nearby fixes.
            if abs(acc - x2) < 1.0 + abs(x2):
                return acc
    return values[-1]


def _schedule_stats(samples):
    rows = []
    for cp, t in samples:
        t = as_fraction(t)
        ia = intersection_array(cp)
        variance = ia.k * (1 - t) * (1 + t + t * ia.a_seq[1])
        if variance <= 0:
            raise ValueError(f"variance {variance} <= 0 at d = {cp.d}, t = {t}")
        sqrt_k = math.sqrt(float(ia.k))
        rows.append(
            {
                "cp": cp,
                "d": cp.d,
                "t": t,
                "k": ia.k,
                "t_sqrt_k": float(t) * sqrt_k,
                "beta_over_sqrt_k": float(cp.beta) / sqrt_k,
                "sqrt_k": sqrt_k,
            }
        )
    return rows


def _subnet_regime(rows, rho_zero_threshold: float) -> LimitRegime:
    tail = rows[-max(2, len(rows) // 2) :]
    bases = {r["cp"].b for r in tail}
    alphas = {r["cp"].alpha for r in tail}
    if len(bases) != 1 or len(alphas) != 1:
        raise ValueError("b and alpha are not eventually constant on the subnet")
    b = tail[0]["cp"].b
    alpha = tail[0]["cp"].alpha
    gamma = _extrapolate([r["t_sqrt_k"] for r in rows])
    v_hat = _extrapolate([r["beta_over_sqrt_k"] for r in rows])
    if alpha == 0:
        if b < 0:
            raise ValueError("alpha = 0 regime requires b > 0")
        rho = v_hat
        if abs(rho) < rho_zero_threshold:
            cs = [exact_c(Fraction(r["k"]), b) for r in rows]
            ratios = [r["sqrt_k"] / b**c for r, c in zip(rows, cs)]
            eta = _extrapolate(ratios) * math.sqrt(b - 1)
            return LimitRegime(CASE_II, b, alpha, gamma, 0.0, eta)
        return LimitRegime(CASE_II, b, alpha, gamma, rho)
    if b < 0:
        rho = math.sqrt(-float(alpha))
        kind = CASE_I_RHO if v_hat > 0 else CASE_I_ALPHA_OVER_RHO
        return LimitRegime(kind, b, alpha, gamma, rho)
    return LimitRegime(CASE_I_RHO, b, alpha, gamma, v_hat)


def classify(
    samples: Sequence[tuple[ClassicalParams, Fraction]],
    rho_zero_threshold: float = 1e-3,
) -> RegimeReport:
    """Recover the limit regime(s) from a schedule of (parameters, t) pairs.

    Samples must be ordered by nondecreasing diameter.  When beta/sqrt(k)
    (or t sqrt(k)) has two accumulation points, the schedule splits into the
    even-d and odd-d subnets and one regime is reported per subnet.
    """
    if len(samples) < 2:
        raise ValueError("need at least two samples to classify")
    rows = _schedule_stats(samples)
    if any(r2["d"] < r1["d"] for r1, r2 in zip(rows, rows[1:])):
        raise ValueError("samples must be ordered by nondecreasing diameter")

    even = [r for r in rows if r["d"] % 2 == 0]
    odd = [r for r in rows if r["d"] % 2 == 1]
    split = False
    if len(even) >= 2 and len(odd) >= 2:
        for key in ("beta_over_sqrt_k", "t_sqrt_k"):
            le = _extrapolate([r[key] for r in even])
            lo = _extrapolate([r[key] for r in odd])
            if abs(le - lo) > 1e-3 * (1 + max(abs(le), abs(lo))):
                split = True
    lattice = []
    for r in rows:
        b = r["cp"].b
        if b >= 2 and Fraction(r["k"]).denominator == 1 and r["k"] >= 1:
            lattice.append(r["sqrt_k"] / b ** exact_c(Fraction(r["k"]), b))
        else:
            lattice.append(None)
    diagnostics = {
        "d": tuple(r["d"] for r in rows),
        "t_sqrt_k": tuple(r["t_sqrt_k"] for r in rows),
        "beta_over_sqrt_k": tuple(r["beta_over_sqrt_k"] for r in rows),
        "sqrt_k_over_b_c": tuple(lattice),
    }
    if split:
        regimes = (
            ("even", _subnet_regime(even, rho_zero_threshold)),
            ("odd", _subnet_regime(odd, rho_zero_threshold)),
        )
    else:
        regimes = (("all", _subnet_regime(rows, rho_zero_threshold)),)
    return RegimeReport(regimes, diagnostics)


# ---------------------------------------------------------------------------
# known regimes of the catalog families and finite-vs-limit comparison


_REGIME_DPS = 60


def regime_for_family(
    fd: fam.FamilyDescriptor, gamma: float, parity: str | None = None
) -> LimitRegime:
    """The exact limit regime of a family, with gamma supplied by the caller.

    ``parity`` selects the subnet for the families split by the parity of d
    (negative-base families and the dual-polar types); n-parity families
    carry their subnet in the descriptor.  rho and eta are carried at high
    precision, so measures built from the regime are not limited by a
    double-precision square root.
    """
    b = fd.base
    name = fd.name
    with mp.workdps(_REGIME_DPS):
        if name in ("grassmann", "twisted_grassmann"):
            delta = (
                fd.delta if (name == "grassmann" and fd.delta is not None) else Fraction(1)
            )
            rho = mp.mpf(b) ** (mp.mpf(delta.numerator) / delta.denominator)
            return LimitRegime(CASE_I_RHO, b, Fraction(b), gamma, rho)
        if name == "bilinear":
            delta = fd.delta if fd.delta is not None else Fraction(1, 2)
            rho = mp.mpf(b) ** (mp.mpf(delta.numerator) / delta.denominator) * mp.sqrt(
                b - 1
            )
            return LimitRegime(CASE_I_RHO, b, Fraction(b - 1), gamma, rho)
        if name in ("alternating", "quadratic"):
            r = b
            delta = Fraction(-1, 4) if fd.parity == "even" else Fraction(1, 4)
            rho = mp.mpf(r * r) ** (mp.mpf(delta.numerator) / delta.denominator)
            rho *= mp.sqrt(r * r - 1)
            return LimitRegime(CASE_I_RHO, r * r, Fraction(r * r - 1), gamma, rho)
        if name in ("half_dual_polar", "ustimenko"):
            r = b
            rho = mp.sqrt(r + 1)
            kind = CASE_I_RHO if fd.parity == "even" else CASE_I_ALPHA_OVER_RHO
            return LimitRegime(kind, r * r, Fraction(r * (r + 1)), gamma, rho)
        if name == "second_hermitian_dual_polar":
            if parity not in ("even", "odd"):
                raise ValueError(f"{name} needs parity 'even' or 'odd'")
            r = b
            alpha = Fraction(r * (r + 1), 1 - r)
            rho = mp.sqrt(mp.mpf(-alpha.numerator) / alpha.denominator)
            kind = CASE_I_RHO if parity == "odd" else CASE_I_ALPHA_OVER_RHO
            return LimitRegime(kind, -r, alpha, gamma, rho)
        if name == "hermitian_forms":
            if parity not in ("even", "odd"):
                raise ValueError(f"{name} needs parity 'even' or 'odd'")
            r = b
            kind = CASE_I_RHO if parity == "odd" else CASE_I_ALPHA_OVER_RHO
            return LimitRegime(kind, -r, Fraction(-r - 1), gamma, mp.sqrt(r + 1))
        if name in fam.DUAL_POLAR_E:
            if parity not in ("even", "odd"):
                raise ValueError(f"{name} needs parity 'even' or 'odd'")
            entry = fam.eta_table(fd, parity)
            expo = entry.eta_exponent
            eta = mp.mpf(b) ** (mp.mpf(expo.numerator) / expo.denominator)
            eta /= b**entry.shift
            return LimitRegime(CASE_II, b, Fraction(0), gamma, 0.0, eta)
    raise ValueError(f"no known regime for family {name!r}")


def estimate_gamma(
    fd: fam.FamilyDescriptor,
    t_rule: fam.TRule,
    d_anchor: int,
    parity: str | None = None,
    depth: int = 40,
) -> float:
    """lim t sqrt(k) along the schedule, extrapolated from large diameters.

    When ``parity`` is given the extrapolation stays on diameters of that
    parity (the limit depends on it for lattice and negative-base families).
    """
    step = 1
    d0 = d_anchor + depth
    if parity is not None:
        step = 2
        if (d0 % 2 == 0) != (parity == "even"):
            d0 += 1
    vals = []
    for d in (d0, d0 + step, d0 + 2 * step, d0 + 3 * step):
        cp = fam.member(fd, d).cp
        t = t_rule(cp)
        ia = intersection_array(cp)
        vals.append(float(t) * math.sqrt(float(ia.k)))
    return _extrapolate(vals)


def _finite_index(regime: LimitRegime, cp, j: int, eta_shift: int) -> int:
    if regime.kind == CASE_II and float(regime.rho) == 0:
        ia = intersection_array(cp)
        c = exact_c(Fraction(ia.k), regime.b) + eta_shift
        return c - j
    return cp.d - j


def convergence_table(
    fd: fam.FamilyDescriptor,
    d_list: Sequence[int],
    t_rule: fam.TRule,
    j_list: Sequence[int] | None = None,
    gamma: float | None = None,
    parity: str | None = None,
    eps: float = 1e-14,
) -> dict:
    """Per-diameter discrepancy between the finite measure and its limit.

    Finite atom j corresponds to eigenvalue index d - j (growth regimes) or
    c - j with c = floor(log_b sqrt(k)) (lattice regime), following the
    limit indexing.  Rows report the max |atom difference| and
    |mass difference| over j.
    """
    if parity is None and fd.name in fam.DUAL_POLAR_E:
        parity = "even" if d_list[0] % 2 == 0 else "odd"
    if parity is None and fd.name in fam.D_PARITY_FAMILIES:
        parity = "even" if d_list[0] % 2 == 0 else "odd"
    if gamma is None:
        gamma = estimate_gamma(fd, t_rule, max(d_list), parity=parity)
    regime = regime_for_family(fd, gamma, parity=parity)
    lattice = regime.kind == CASE_II and float(regime.rho) == 0
    eta_shift = fam.eta_table(fd, parity).shift if lattice else 0

    if j_list is None:
        j_list = (-2, -1, 0, 1, 2) if lattice else (0, 1, 2, 3)
    j_lo, j_hi = min(j_list), max(j_list)
    mu_inf = limit_measure(regime, j_max=max(j_hi, 2), j_min=min(j_lo, 0), eps=eps)
    inf_index = {j: idx for idx, j in enumerate(range(min(j_lo, 0), max(j_hi, 2) + 1))}

    rows = []
    for d in d_list:
        cp = fam.member(fd, d).cp
        t = t_rule(cp)
        mu_d = gibbs_distribution(cp, spectral_table(cp), t)
        atom_diff = 0.0
        mass_diff = 0.0
        for j in j_list:
            idx = _finite_index(regime, cp, j, eta_shift)
            if not 0 <= idx <= cp.d:
                raise ValueError(
                    f"limit index j = {j} maps outside the spectrum at d = {d}"
                )
            pos = inf_index[j]
            atom_diff = max(atom_diff, abs(mu_d.atoms[idx] - mu_inf.atoms[pos]))
            mass_diff = max(
                mass_diff, abs(float(mu_d.masses[idx]) - float(mu_inf.masses[pos]))
            )
        rows.append(
            {
                "d": d,
                "max_atom_diff": atom_diff,
                "max_mass_diff": mass_diff,
                "max_diff": max(atom_diff, mass_diff),
            }
        )
    return {"regime": regime, "gamma": gamma, "j_list": tuple(j_list), "rows": rows}
