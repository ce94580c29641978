"""Spectral data of distance-regular graphs with classical parameters.

A parameter tuple (d, b, alpha, beta) determines, in closed form, the
intersection numbers

    b_i = ([d] - [i]) (beta - alpha [i]),   c_i = [i] (1 + alpha [i-1]),

the valencies k_i, the d+1 distinct eigenvalues

    theta_i = [d-i] (beta - alpha [i]) - [i],

their multiplicities m_i, the vertex count |X|, and the matrix of
distance-polynomial values v_i(theta_j), where [i] is the base-b bracket.
Everything is exact rational arithmetic.  The v-matrix is computed twice,
from the closed-form double sum and from the defining three-term recurrence

    theta_j v_i = b_{i-1} v_{i-1} + a_i v_i + c_{i+1} v_{i+1},

and any disagreement raises :class:`InternalConsistencyError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .qseries import as_fraction, gauss_bracket, gen_poch, poch


class InfeasibleParameters(ValueError):
    """The parameter tuple cannot belong to a distance-regular graph."""


class InternalConsistencyError(RuntimeError):
    """Two independent evaluations of the same quantity disagreed."""


@dataclass(frozen=True)
class ClassicalParams:
    """Classical parameters (d, b, alpha, beta); b is the integer base."""

    d: int
    b: int
    alpha: Fraction
    beta: Fraction

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("diameter d must be at least 1")
        if not isinstance(self.b, int):
            b = as_fraction(self.b)
            if b.denominator != 1:
                raise ValueError("base b must be an integer")
            object.__setattr__(self, "b", int(b))
        if self.b in (0, -1):
            raise ValueError("base b must lie outside {0, -1}")
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "beta", as_fraction(self.beta))


@dataclass(frozen=True)
class IntersectionArray:
    b_seq: tuple[Fraction, ...]
    c_seq: tuple[Fraction, ...]
    a_seq: tuple[Fraction, ...]
    k_seq: tuple[Fraction, ...]
    k: Fraction

    @property
    def d(self) -> int:
        return len(self.b_seq) - 1


@dataclass(frozen=True)
class SpectralTable:
    """Eigenvalues theta_j (indexed as in the closed form, not sorted),
    multiplicities, vertex count, and the (d+1) x (d+1) matrix v_i(theta_j)."""

    theta: tuple[Fraction, ...]
    mult: tuple[Fraction, ...]
    vertex_count: Fraction
    v_matrix: tuple[tuple[Fraction, ...], ...]

    @property
    def d(self) -> int:
        return len(self.theta) - 1

    def u(self, i: int, j: int) -> Fraction:
        """Normalized value u_i(theta_j) = v_i(theta_j) / k_i (uses k_i = v_i(theta_0))."""
        return self.v_matrix[i][j] / self.v_matrix[i][0]


@lru_cache(maxsize=None)
def intersection_array(cp: ClassicalParams) -> IntersectionArray:
    d, alpha, beta = cp.d, cp.alpha, cp.beta
    br = [gauss_bracket(i, cp.b) for i in range(d + 1)]
    b_seq = tuple((br[d] - br[i]) * (beta - alpha * br[i]) for i in range(d + 1))
    c_seq = tuple(
        Fraction(0) if i == 0 else br[i] * (1 + alpha * br[i - 1])
        for i in range(d + 1)
    )
    k = b_seq[0]
    a_seq = tuple(k - b_seq[i] - c_seq[i] for i in range(d + 1))
    k_seq = [Fraction(1)]
    for i in range(1, d + 1):
        if c_seq[i] == 0:
            raise InfeasibleParameters(
                f"c_{i} = 0: valency k_{i} is undefined for {cp}"
            )
        k_seq.append(k_seq[-1] * b_seq[i - 1] / c_seq[i])
    return IntersectionArray(b_seq, c_seq, a_seq, tuple(k_seq), k)


def _multiplicity(cp: ClassicalParams, i: int) -> Fraction:
    """Closed-form multiplicity m_i.

    The factor (aa - cc b^(2i-d)) appears both as the numerator tail and,
    when 1 <= 2i-d <= i, inside the denominator product (aa; cc b; b)_i;
    realizable parameters can make exactly that common factor vanish, and
    the identical pair is cancelled symbolically.  A vanishing i-independent
    tail denominator aa - cc b^-d is reported as infeasible: no limit value
    is assigned there.
    """
    d = cp.d
    fb = Fraction(cp.b)
    aa = cp.alpha - cp.beta + cp.beta * fb
    cc = cp.alpha + 1 - fb
    tail_den = aa - cc * fb**-d
    if tail_den == 0:
        raise InfeasibleParameters(
            f"multiplicity tail denominator aa - cc b^-d vanishes for {cp}"
        )
    tail_num = aa - cc * fb ** (2 * i - d)
    den_exponents = list(range(1, i + 1))  # (aa; cc b; b)_i has factors aa - cc b^e
    cancelled = False
    if tail_num == 0 and d < 2 * i <= d + i:
        den_exponents.remove(2 * i - d)
        cancelled = True
    num = (
        poch(fb**-d, fb, i)
        * gen_poch(aa, cp.alpha, fb, i)
        * gen_poch(aa, cc * fb**-d, fb, i)
    )
    den = poch(fb, fb, i) * gen_poch(cc, cp.alpha * fb ** (d - i), fb, i)
    for e in den_exponents:
        den *= aa - cc * fb**e
    if den == 0:
        raise InfeasibleParameters(
            f"multiplicity denominator vanishes at index {i} for {cp}"
        )
    out = num / den * fb ** (2 * d * i - i * i) / tail_den
    if not cancelled:
        out *= tail_num
    return out


def _vertex_count(cp: ClassicalParams) -> Fraction:
    d = cp.d
    fb = Fraction(cp.b)
    aa = cp.alpha - cp.beta + cp.beta * fb
    cc = cp.alpha + 1 - fb
    den = gen_poch(cc, cp.alpha, fb, d)
    if den == 0:
        raise InfeasibleParameters(f"vertex-count denominator vanishes for {cp}")
    sign = Fraction(-1) ** d
    return sign * gen_poch(aa, cc * fb ** (1 - d), fb, d) * fb ** (d * (d - 1) // 2) / den


def _v_closed(cp: ClassicalParams, i: int, j: int) -> Fraction:
    d = cp.d
    fb = Fraction(cp.b)
    aa = cp.alpha - cp.beta + cp.beta * fb
    cc = cp.alpha + 1 - fb
    total = Fraction(0)
    for h in range(i + 1):
        den = (
            poch(fb, fb, h)
            * gen_poch(cc, cp.alpha, fb, i - h)
            * poch(fb, fb, i - h)
        )
        if den == 0:
            raise InfeasibleParameters(
                f"v-matrix denominator vanishes at (i={i}, j={j}) for {cp}"
            )
        total += (
            poch(fb**-j, fb, h)
            * poch(fb ** (j - d), fb, i - h)
            * gen_poch(aa, cp.alpha * fb**j, fb, i - h)
            * fb ** ((i - h) * (d - j) + j * h)
            / den
        )
    return total


@lru_cache(maxsize=None)
def spectral_table(cp: ClassicalParams) -> SpectralTable:
    d = cp.d
    ia = intersection_array(cp)
    br = [gauss_bracket(i, cp.b) for i in range(d + 1)]
    theta = tuple(
        br[d - i] * (cp.beta - cp.alpha * br[i]) - br[i] for i in range(d + 1)
    )
    if len(set(theta)) != d + 1:
        raise InfeasibleParameters(f"eigenvalues are not pairwise distinct for {cp}")

    if any(k == 0 for k in ia.k_seq):
        raise InfeasibleParameters(
            f"some valency k_i vanishes (a b_i is zero before i = d) for {cp}"
        )
    mult = tuple(_multiplicity(cp, i) for i in range(d + 1))
    vertex_count = _vertex_count(cp)

    closed = [[_v_closed(cp, i, j) for j in range(d + 1)] for i in range(d + 1)]
    recur = [[Fraction(1)] * (d + 1), list(theta)]
    for i in range(1, d):
        recur.append(
            [
                ((theta[j] - ia.a_seq[i]) * recur[i][j] - ia.b_seq[i - 1] * recur[i - 1][j])
                / ia.c_seq[i + 1]
                for j in range(d + 1)
            ]
        )
    for i in range(d + 1):
        for j in range(d + 1):
            if closed[i][j] != recur[i][j]:
                raise InternalConsistencyError(
                    f"v_{i}(theta_{j}) mismatch for {cp}: "
                    f"closed form {closed[i][j]} vs recurrence {recur[i][j]}"
                )

    # independent multiplicity route: m_j sum_i v_i(theta_j)^2 / k_i = |X|
    for j in range(d + 1):
        total = sum(closed[i][j] ** 2 / ia.k_seq[i] for i in range(d + 1))
        if mult[j] * total != vertex_count:
            raise InternalConsistencyError(
                f"multiplicity m_{j} = {mult[j]} inconsistent with the "
                f"orthogonality identity for {cp}"
            )
    return SpectralTable(theta, mult, vertex_count, tuple(tuple(row) for row in closed))


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple[str, ...]
    notes: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _is_nonneg_integer(x: Fraction) -> bool:
    return x.denominator == 1 and x >= 0


def feasibility_check(d, b=None, alpha=None, beta=None) -> FeasibilityReport:
    """Check every structural condition a realizable parameter set must satisfy.

    Accepts either a ClassicalParams or the four raw values; returns a report
    rather than raising, so that rejected inputs (e.g. base 0) are described.
    """
    violations: list[str] = []
    notes: list[str] = []

    if isinstance(d, ClassicalParams):
        cp = d
    else:
        bf = as_fraction(b)
        if bf.denominator != 1 or bf in (0, -1):
            return FeasibilityReport(
                (f"base b = {b} must be an integer outside {{0, -1}}",), ()
            )
        if d < 1:
            return FeasibilityReport((f"diameter d = {d} must be at least 1",), ())
        cp = ClassicalParams(d, int(bf), as_fraction(alpha), as_fraction(beta))

    if cp.d < 3:
        notes.append(
            f"d = {cp.d} < 3: outside the scope of the base-integrality theory; "
            "formulas evaluated anyway"
        )

    try:
        ia = intersection_array(cp)
    except InfeasibleParameters as exc:
        violations.append(str(exc))
        return FeasibilityReport(tuple(violations), tuple(notes))

    for name, seq in (("b", ia.b_seq), ("c", ia.c_seq), ("a", ia.a_seq), ("k", ia.k_seq)):
        for i, value in enumerate(seq):
            if not _is_nonneg_integer(value):
                violations.append(f"{name}_{i} = {value} is not a nonnegative integer")
    for i in range(1, cp.d + 1):
        if ia.b_seq[i - 1] * ia.c_seq[i] == 0:
            violations.append(f"b_{i - 1} c_{i} = 0")

    alpha_from_c2 = (
        ia.c_seq[2] / (cp.b + 1) - 1 if cp.d >= 2 else None
    )
    if alpha_from_c2 is not None and alpha_from_c2 != cp.alpha:
        violations.append(
            f"alpha = {cp.alpha} differs from c_2/(b+1) - 1 = {alpha_from_c2}"
        )

    try:
        st = spectral_table(cp)
    except InfeasibleParameters as exc:
        violations.append(str(exc))
        return FeasibilityReport(tuple(violations), tuple(notes))
    except InternalConsistencyError as exc:
        violations.append(f"internal consistency failure: {exc}")
        return FeasibilityReport(tuple(violations), tuple(notes))

    if not _is_nonneg_integer(st.vertex_count):
        violations.append(f"|X| = {st.vertex_count} is not a nonnegative integer")
    for j, m in enumerate(st.mult):
        if not _is_nonneg_integer(m):
            violations.append(f"m_{j} = {m} is not a nonnegative integer")
    if sum(st.mult) != st.vertex_count:
        violations.append(
            f"sum of multiplicities {sum(st.mult)} != |X| = {st.vertex_count}"
        )
    if sum(ia.k_seq) != st.vertex_count:
        violations.append(
            f"sum of valencies {sum(ia.k_seq)} != |X| = {st.vertex_count}"
        )
    return FeasibilityReport(tuple(violations), tuple(notes))
