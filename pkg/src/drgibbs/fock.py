"""Quantum decomposition on the primary module and its Fock-space limit.

The adjacency matrix splits as A = A^+ + A^- + A^o by distance change
relative to a base vertex; on the (d+1)-dimensional primary module the
normalized components act tridiagonally,

    Atilde^+ Phi_i = sqrt(w_{i+1}) Phi_{i+1},
    Atilde^- Phi_i = sqrt(w_i) Phi_{i-1},
    Atilde^o Phi_i = abar_{i+1} Phi_i,

with w_i = c_i b_{i-1} / sigma^2 and abar_i = (a_{i-1} - t k)/sigma, and the
Gibbs functional contracts against the weights gbar_i = t^i sqrt(k_i).
Mixed moments of words in {+, -, o} are therefore finite tridiagonal
computations; their scaling limits live on an interacting Fock space with
Jacobi sequence w_i -> c_i / (1 + gamma sigma_lim).

Mixed moments have an exact rational core: tracking the coefficient of
sqrt(c_1 b_0 ... c_i b_{i-1}) at each level keeps every intermediate value
rational, and a word of length m evaluates to (rational) / sigma^m.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import families as fam
from . import limits as lim
from .gibbs import gibbs_point
from .params import ClassicalParams, SpectralTable, intersection_array, spectral_table
from .qseries import as_fraction, gauss_bracket

PLUS, MINUS, CIRCLE = "+", "-", "o"
LETTERS = (PLUS, MINUS, CIRCLE)


def parse_word(word) -> tuple[str, ...]:
    """Normalize a word over {+, -, o} given as a string or iterable."""
    letters = tuple(word)
    if not letters:
        raise ValueError("word must have length at least 1")
    for ch in letters:
        if ch not in LETTERS:
            raise ValueError(f"word letters must be in {LETTERS}, got {ch!r}")
    return letters


def all_words(length: int) -> Iterable[tuple[str, ...]]:
    """All 3^length words of the given length."""
    if length < 1:
        raise ValueError("word length must be at least 1")
    return itertools.product(LETTERS, repeat=length)


@dataclass(frozen=True)
class FockCoefficients:
    """Ladder data: omega[i] = w_{i+1}, alpha_diag[i] = a_{i+1} (the diagonal
    entry at level i), gamma_w[i] = g_i; length is the number of levels."""

    omega: tuple[float, ...]
    alpha_diag: tuple[float, ...]
    gamma_w: tuple[float, ...]
    length: int

    def __post_init__(self) -> None:
        if len(self.omega) != self.length - 1:
            raise ValueError("omega must hold length-1 entries")
        if len(self.alpha_diag) != self.length or len(self.gamma_w) != self.length:
            raise ValueError("alpha_diag and gamma_w must hold one entry per level")
        if any(w <= 0 for w in self.omega):
            raise ValueError("Jacobi sequence entries must be positive")
        if self.gamma_w[0] != 1.0:
            raise ValueError("gamma_w[0] must be 1")


def finite_coefficients(cp: ClassicalParams, st: SpectralTable, t) -> FockCoefficients:
    """Scaled finite-diameter coefficients w_i, abar_i, gbar_i at the point t."""
    gp = gibbs_point(cp, st, t)
    if gp.variance <= 0:
        raise ValueError(f"variance {gp.variance} must be positive at t = {gp.t}")
    ia = intersection_array(cp)
    d = cp.d
    sigma = math.sqrt(float(gp.variance))
    omega = tuple(
        float(ia.c_seq[i] * ia.b_seq[i - 1] / gp.variance) for i in range(1, d + 1)
    )
    alpha_diag = tuple(
        float(ia.a_seq[i] - gp.mean) / sigma for i in range(d + 1)
    )
    t_f = float(gp.t)
    gamma_w = tuple(
        (t_f**i if i else 1.0) * math.sqrt(float(ia.k_seq[i])) for i in range(d + 1)
    )
    return FockCoefficients(omega, alpha_diag, gamma_w, d + 1)


def limit_coefficients(regime: lim.LimitRegime, n_levels: int) -> FockCoefficients:
    """Limit Fock data of a regime, truncated to n_levels ladder levels.

    Uses the diameter-free part of the intersection numbers,
    c_i = [i](1 + alpha [i-1]), with w_i = c_i / (1 + gamma sigma),
    a_i = ([i-1] sigma - gamma)/sqrt(1 + gamma sigma), and
    g_i = gamma^i / sqrt(c_i ... c_1), under 0/0 := 0 and 0^0 := 1.
    """
    if n_levels < 1:
        raise ValueError("need at least one level")
    b, alpha = regime.b, regime.alpha
    gamma = float(regime.gamma)
    norm = 1 + gamma * regime.sigma
    if norm <= 0:
        raise ValueError("normalizer 1 + gamma sigma must be positive")
    c = [
        gauss_bracket(i, b) * (1 + alpha * gauss_bracket(i - 1, b))
        for i in range(1, n_levels)
    ]
    if any(ci <= 0 for ci in c):
        raise ValueError("limit Jacobi sequence is not positive for this regime")
    omega = tuple(float(ci) / norm for ci in c)
    sqrt_norm = math.sqrt(norm)
    alpha_diag = tuple(
        (float(gauss_bracket(i, b)) * regime.sigma - gamma) / sqrt_norm
        for i in range(n_levels)
    )
    gamma_w = [1.0]
    prod_c = Fraction(1)
    for i in range(1, n_levels):
        prod_c *= c[i - 1]
        gamma_w.append(gamma**i / math.sqrt(float(prod_c)) if gamma else 0.0)
    return FockCoefficients(omega, alpha_diag, tuple(gamma_w), n_levels)


def mixed_moment_finite_exact(cp: ClassicalParams, t, word) -> tuple[Fraction, int]:
    """Exact core of a finite mixed moment.

    Returns (Q, m) with moment = Q / sigma^m, m = len(word).  Levels carry
    coefficients relative to sqrt(pi_i), pi_i = (c_1..c_i)(b_0..b_{i-1}):
    raising copies the coefficient, lowering multiplies by c_i b_{i-1}, and
    the contraction against t^i sqrt(k_i) collapses to the rational weight
    t^i k_i (c_1..c_i).  Valid whenever all c_i b_{i-1} >= 0.
    """
    letters = parse_word(word)
    t = as_fraction(t)
    ia = intersection_array(cp)
    d = cp.d
    mean = t * ia.k
    state = [Fraction(0)] * (d + 1)
    state[0] = Fraction(1)
    for ch in letters:
        nxt = [Fraction(0)] * (d + 1)
        if ch == PLUS:
            for i in range(d):
                if state[i]:
                    nxt[i + 1] = state[i]
        elif ch == MINUS:
            for i in range(1, d + 1):
                if state[i]:
                    nxt[i - 1] = ia.c_seq[i] * ia.b_seq[i - 1] * state[i]
        else:
            for i in range(d + 1):
                if state[i]:
                    nxt[i] = (ia.a_seq[i] - mean) * state[i]
        state = nxt
    total = Fraction(0)
    weight = Fraction(1)  # t^i k_i / k_i-free part: holds t^i (c_1 .. c_i)
    for i in range(d + 1):
        if state[i]:
            total += weight * ia.k_seq[i] * state[i]
        if i < d:
            weight *= t * ia.c_seq[i + 1]
    return total, len(letters)


def mixed_moment_finite(cp: ClassicalParams, st: SpectralTable, t, word) -> float:
    """Gibbs expectation of Atilde^{e_m} ... Atilde^{e_1} (e_1 acts first)."""
    gp = gibbs_point(cp, st, t)
    if gp.variance <= 0:
        raise ValueError(f"variance {gp.variance} must be positive at t = {gp.t}")
    q, m = mixed_moment_finite_exact(cp, t, word)
    half, rem = divmod(m, 2)
    scaled = q / gp.variance**half  # exact; keeps magnitudes of order one
    out = float(scaled)
    if rem:
        out /= math.sqrt(float(gp.variance))
    return out


def _apply_letter(fc: FockCoefficients, state: list[float], ch: str) -> list[float]:
    n = fc.length
    nxt = [0.0] * n
    if ch == PLUS:
        for i in range(n - 1):
            if state[i]:
                nxt[i + 1] = math.sqrt(fc.omega[i]) * state[i]
    elif ch == MINUS:
        for i in range(1, n):
            if state[i]:
                nxt[i - 1] = math.sqrt(fc.omega[i - 1]) * state[i]
    else:
        for i in range(n):
            if state[i]:
                nxt[i] = fc.alpha_diag[i] * state[i]
    return nxt


def mixed_moment_limit(fc: FockCoefficients, word) -> float:
    """Fock-side mixed moment sum_i g_i <Psi_i, B^{e_m} ... B^{e_1} Psi_0>.

    A word of length m never leaves levels 0..m, so fc.length > len(word)
    makes the truncated computation exact.
    """
    letters = parse_word(word)
    if fc.length <= len(letters):
        raise ValueError(
            f"need at least {len(letters) + 1} levels, fc has {fc.length}"
        )
    state = [0.0] * fc.length
    state[0] = 1.0
    for ch in letters:
        state = _apply_letter(fc, state, ch)
    return sum(g * x for g, x in zip(fc.gamma_w, state))


def limit_moment(fc: FockCoefficients, m: int, n_levels: int | None = None) -> float:
    """m-th moment sum_i g_i <Psi_i, (B^+ + B^- + B^o)^m Psi_0> of the limit."""
    if m < 0:
        raise ValueError("moment order must be nonnegative")
    n = fc.length if n_levels is None else n_levels
    if n > fc.length:
        raise ValueError("n_levels exceeds the truncation of fc")
    if n < m + 1:
        raise ValueError(f"need at least m + 1 = {m + 1} levels for exactness")
    state = [0.0] * n
    state[0] = 1.0
    for _ in range(m):
        nxt = [0.0] * n
        for i in range(n):
            x = state[i]
            if not x:
                continue
            if i + 1 < n:
                nxt[i + 1] += math.sqrt(fc.omega[i]) * x
            if i >= 1:
                nxt[i - 1] += math.sqrt(fc.omega[i - 1]) * x
            nxt[i] += fc.alpha_diag[i] * x
        state = nxt
    return sum(g * x for g, x in zip(fc.gamma_w[:n], state))


def qclt_table(
    fd: fam.FamilyDescriptor,
    d_list: Sequence[int],
    t_rule: fam.TRule,
    words: Sequence,
    gamma: float | None = None,
    parity: str | None = None,
) -> dict:
    """Finite vs limit mixed moments along a schedule, word by word."""
    words = [parse_word(w) for w in words]
    if parity is None and (
        fd.name in fam.DUAL_POLAR_E or fd.name in fam.D_PARITY_FAMILIES
    ):
        parity = "even" if d_list[0] % 2 == 0 else "odd"
    if gamma is None:
        gamma = lim.estimate_gamma(fd, t_rule, max(d_list), parity=parity)
    regime = lim.regime_for_family(fd, gamma, parity=parity)
    fc = limit_coefficients(regime, max(len(w) for w in words) + 1)
    limits_by_word = {w: mixed_moment_limit(fc, w) for w in words}

    finite: dict[tuple[str, ...], list[tuple[int, float]]] = {w: [] for w in words}
    for d in d_list:
        cp = fam.member(fd, d).cp
        st = spectral_table(cp)
        t = t_rule(cp)
        for w in words:
            finite[w].append((d, mixed_moment_finite(cp, st, t, w)))
    rows = []
    for w in words:
        lim_value = limits_by_word[w]
        entries = [
            {"d": d, "finite": v, "limit": lim_value, "abs_diff": abs(v - lim_value)}
            for d, v in finite[w]
        ]
        rows.append({"word": "".join(w), "entries": entries})
    return {"regime": regime, "gamma": gamma, "rows": rows}
