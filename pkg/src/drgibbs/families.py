"""Catalog of the known unbounded-diameter parameter families with base != 1.

Each family is a generator of classical parameters (d, b, alpha, beta) per
diameter, together with the data needed to realize scaling regimes:
t-schedules, the growth offsets (delta for Grassmann/bilinear-type families),
and the eta/c tables for the families whose beta/sqrt(k) tends to zero.

Only parameters are produced here; no graphs are constructed (the oracle
module builds two families explicitly for cross-validation).  Prime-power
constraints on q and r are documented but not enforced: the formulas are
polynomial in the base and remain useful for feasibility exploration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .params import ClassicalParams, intersection_array
from .qseries import as_fraction, gauss_bracket

FAMILY_NAMES = (
    "grassmann",
    "twisted_grassmann",
    "dual_polar_C",
    "dual_polar_B",
    "dual_polar_D",
    "dual_polar_2D",
    "dual_polar_2A_even",
    "dual_polar_2A_odd",
    "hemmeter",
    "half_dual_polar",
    "ustimenko",
    "second_hermitian_dual_polar",
    "bilinear",
    "alternating",
    "quadratic",
    "hermitian_forms",
)

# beta = b^e for the dual-polar-type families (rho = 0 regime).
DUAL_POLAR_E = {
    "dual_polar_C": Fraction(1),
    "dual_polar_B": Fraction(1),
    "dual_polar_D": Fraction(0),
    "dual_polar_2D": Fraction(2),
    "dual_polar_2A_even": Fraction(3, 2),
    "dual_polar_2A_odd": Fraction(1, 2),
    "hemmeter": Fraction(0),
}

# Families whose subnet is selected by the parity of the ambient dimension n.
N_PARITY_FAMILIES = ("half_dual_polar", "ustimenko", "alternating", "quadratic")
# Families whose subnet is the parity of d itself.
D_PARITY_FAMILIES = ("second_hermitian_dual_polar", "hermitian_forms")


@dataclass(frozen=True)
class FamilyDescriptor:
    """A family name plus the data fixing one concrete member sequence.

    ``base`` is q or r as the family demands.  ``n`` pins the ambient
    dimension for Grassmann (otherwise n = 2d + 2 delta - 1), ``delta`` is
    the half-integer growth offset for Grassmann/bilinear, and ``parity``
    ("even"/"odd") selects the subnet for n-parity families.
    """

    name: str
    base: int
    n: int | None = None
    delta: Fraction | None = None
    parity: str | None = None

    def __post_init__(self) -> None:
        if self.name not in FAMILY_NAMES:
            raise ValueError(f"unknown family {self.name!r}")
        if self.base < 2:
            raise ValueError("family base must be at least 2")
        if self.delta is not None:
            object.__setattr__(self, "delta", as_fraction(self.delta))
        if self.parity is not None and self.parity not in ("even", "odd"):
            raise ValueError("parity must be 'even' or 'odd'")
        if self.name in N_PARITY_FAMILIES and self.parity is None:
            object.__setattr__(self, "parity", "even")


@dataclass(frozen=True)
class FamilyMember:
    descriptor: FamilyDescriptor
    d: int
    cp: ClassicalParams
    subnet_tag: str | None = None


def _grassmann_cp(q: int, n: int, d: int) -> ClassicalParams:
    if n < 2 * d:
        raise ValueError(f"Grassmann family requires n >= 2d, got n={n}, d={d}")
    return ClassicalParams(d, q, Fraction(q), q * gauss_bracket(n - d, q))


def _forms_m(n: int) -> int:
    return 2 * math.ceil(n / 2) - 1


def member(fd: FamilyDescriptor, d: int) -> FamilyMember:
    """The diameter-d member of the family, with its parameter tuple."""
    if d < 1:
        raise ValueError("diameter must be at least 1")
    q = fd.base
    tag = fd.parity
    if fd.name == "grassmann":
        if fd.n is not None:
            n = fd.n
        else:
            delta = fd.delta if fd.delta is not None else Fraction(1)
            nf = 2 * d + 2 * delta - 1
            if nf.denominator != 1:
                raise ValueError("grassmann delta must make n = 2d + 2*delta - 1 integral")
            n = int(nf)
        cp = _grassmann_cp(q, n, d)
    elif fd.name == "twisted_grassmann":
        cp = _grassmann_cp(q, 2 * d + 1, d)
    elif fd.name in DUAL_POLAR_E:
        e = DUAL_POLAR_E[fd.name]
        if e.denominator == 1:
            beta = Fraction(q**e.numerator)
        else:
            root = math.isqrt(q)
            if root * root != q:
                raise ValueError(f"{fd.name} requires base {q} to be a perfect square")
            beta = Fraction(root**e.numerator)
        cp = ClassicalParams(d, q, Fraction(0), beta)
    elif fd.name in ("half_dual_polar", "ustimenko"):
        n = 2 * d if fd.parity == "even" else 2 * d + 1
        m = _forms_m(n)
        r = q
        cp = ClassicalParams(
            d, r * r, Fraction(r * (r + 1)), Fraction(r * (r**m - 1), r - 1)
        )
    elif fd.name == "second_hermitian_dual_polar":
        r = q
        cp = ClassicalParams(
            d,
            -r,
            Fraction(r * (r + 1), 1 - r),
            Fraction(r * (1 + (-r) ** d), 1 - r),
        )
        tag = "even" if d % 2 == 0 else "odd"
    elif fd.name == "bilinear":
        delta = fd.delta if fd.delta is not None else Fraction(1, 2)
        e = d + 2 * delta
        if e.denominator != 1:
            raise ValueError("bilinear delta must be an integer or half-integer")
        e = int(e)
        if e < d:
            raise ValueError(f"bilinear family requires e >= d, got e={e}, d={d}")
        cp = ClassicalParams(d, q, Fraction(q - 1), Fraction(q**e - 1))
    elif fd.name == "alternating":
        n = 2 * d if fd.parity == "even" else 2 * d + 1
        m = _forms_m(n)
        r = q
        cp = ClassicalParams(d, r * r, Fraction(r * r - 1), Fraction(r**m - 1))
    elif fd.name == "quadratic":
        # Qua(m, r) on forms in m variables matches Alt(m+1, r); given d and
        # the parity of n = m+1 this reproduces the alternating parameters.
        n = 2 * d if fd.parity == "even" else 2 * d + 1
        m_vars = n - 1
        mm = _forms_m(m_vars + 1)
        r = q
        cp = ClassicalParams(d, r * r, Fraction(r * r - 1), Fraction(r**mm - 1))
    elif fd.name == "hermitian_forms":
        r = q
        cp = ClassicalParams(d, -r, Fraction(-r - 1), Fraction(-((-r) ** d) - 1))
        tag = "even" if d % 2 == 0 else "odd"
    else:  # pragma: no cover
        raise ValueError(f"unknown family {fd.name!r}")
    return FamilyMember(fd, d, cp, tag)


TRule = Callable[[ClassicalParams], Fraction]


def t_rule_zero() -> TRule:
    """The vacuum schedule t = 0."""

    def rule(cp: ClassicalParams) -> Fraction:
        return Fraction(0)

    rule.label = "0"  # type: ignore[attr-defined]
    return rule


def t_rule_power(num: int = 1, offset: int = 0, den: int = 1) -> TRule:
    """Schedule t = b^(-e(d)) with e(d) = ceil((num*d + offset)/den).

    These are exactly the positive-semidefinite points b^-i, so the Gibbs
    functional stays a state along the schedule.
    """
    if den <= 0:
        raise ValueError("den must be positive")

    def rule(cp: ClassicalParams) -> Fraction:
        e = -((-(num * cp.d + offset)) // den)  # ceil division
        if e < 0:
            raise ValueError("t-rule exponent must be nonnegative")
        return Fraction(1, cp.b**e)

    rule.label = f"b^-ceil(({num}*d+{offset})/{den})"  # type: ignore[attr-defined]
    return rule


def parse_t_rule(text: str) -> TRule:
    """Parse '0' or 'NUM,OFFSET,DEN' (meaning t = b^-ceil((NUM*d+OFFSET)/DEN))."""
    text = text.strip()
    if text == "0":
        return t_rule_zero()
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(
            "t-rule must be '0' or 'NUM,OFFSET,DEN' for t = b^-ceil((NUM*d+OFFSET)/DEN)"
        )
    num, offset, den = (int(p) for p in parts)
    return t_rule_power(num, offset, den)


def schedule(
    fd: FamilyDescriptor, d_list: Sequence[int], t_rule: TRule
) -> list[tuple[ClassicalParams, Fraction]]:
    """Members along d_list paired with t values; variance must stay positive."""
    samples = []
    for d in d_list:
        cp = member(fd, d).cp
        t = t_rule(cp)
        ia = intersection_array(cp)
        variance = ia.k * (1 - t) * (1 + t + t * ia.a_seq[1])
        if variance <= 0:
            raise ValueError(f"variance {variance} <= 0 at d = {d}, t = {t}")
        samples.append((cp, t))
    return samples


# eta (as the exponent of b; eta/sqrt(b-1) lies in [1, b]) and
# c = floor(log_b sqrt(k)) per dual-polar exponent e and parity of d,
# valid for sufficiently large d.
_ETA_TABLE = {
    (Fraction(1), "even"): Fraction(1, 2),
    (Fraction(1), "odd"): Fraction(1),
    (Fraction(0), "even"): Fraction(1),
    (Fraction(0), "odd"): Fraction(1, 2),
    (Fraction(2), "even"): Fraction(1),
    (Fraction(2), "odd"): Fraction(1, 2),
    (Fraction(3, 2), "even"): Fraction(3, 4),
    (Fraction(3, 2), "odd"): Fraction(5, 4),
    (Fraction(1, 2), "even"): Fraction(5, 4),
    (Fraction(1, 2), "odd"): Fraction(3, 4),
}

_C_TABLE = {
    (Fraction(1), "even"): (Fraction(1, 2), 0),
    (Fraction(1), "odd"): (Fraction(1, 2), -Fraction(1, 2)),
    (Fraction(0), "even"): (Fraction(1, 2), -1),
    (Fraction(0), "odd"): (Fraction(1, 2), -Fraction(1, 2)),
    (Fraction(2), "even"): (Fraction(1, 2), 0),
    (Fraction(2), "odd"): (Fraction(1, 2), Fraction(1, 2)),
    (Fraction(3, 2), "even"): (Fraction(1, 2), 0),
    (Fraction(3, 2), "odd"): (Fraction(1, 2), -Fraction(1, 2)),
    (Fraction(1, 2), "even"): (Fraction(1, 2), -1),
    (Fraction(1, 2), "odd"): (Fraction(1, 2), -Fraction(1, 2)),
}


@dataclass(frozen=True)
class EtaEntry:
    """Lattice scale eta for a rho = 0 family, normalized so that
    eta/sqrt(b-1) lies in [1, b), plus the matching atom-index base."""

    eta: float
    shift: int  # eta_table_value = eta * b^shift
    eta_exponent: Fraction  # table value: eta_raw = b^eta_exponent

    def index_base(self, fd: FamilyDescriptor, d: int) -> int:
        """c + shift for diameter d, where c = floor(log_b sqrt(k))."""
        e = DUAL_POLAR_E[fd.name]
        slope, off = _C_TABLE[(e, "even" if d % 2 == 0 else "odd")]
        c = slope * d + off
        if c.denominator != 1:
            raise ValueError(f"c-table produced non-integer for d = {d}")
        return int(c) + self.shift


def eta_table(fd: FamilyDescriptor, parity: str) -> EtaEntry:
    """Asymptotic eta and index offset for a beta/sqrt(k) -> 0 family."""
    if fd.name not in DUAL_POLAR_E:
        raise ValueError(f"{fd.name} is not a rho = 0 family")
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    e = DUAL_POLAR_E[fd.name]
    expo = _ETA_TABLE[(e, parity)]
    b = fd.base
    eta_raw = float(b) ** float(expo)
    # Normalize eta/sqrt(b-1) into [1, b); the table value can sit on the
    # right boundary (only for b = 2), which relabels the lattice by one step.
    w = eta_raw / math.sqrt(b - 1)
    shift = 0
    while w >= b - 1e-9:
        w /= b
        shift += 1
    while w < 1 - 1e-9:
        w *= b
        shift -= 1
    return EtaEntry(eta=eta_raw / b**shift, shift=shift, eta_exponent=expo)


def catalog(bases: Iterable[int] = (2, 3, 4)) -> list[FamilyDescriptor]:
    """One descriptor per family and base (both parities where relevant).

    Bases for which beta = b^e is not integral (the Hermitian dual-polar
    types need a square base) pair each family with base r, squaring
    internally, so every listed base is usable for every family.
    """
    out = []
    for q in bases:
        out.append(FamilyDescriptor("grassmann", q, delta=Fraction(1)))
        out.append(FamilyDescriptor("twisted_grassmann", q))
        for name in ("dual_polar_C", "dual_polar_B", "dual_polar_D", "dual_polar_2D"):
            out.append(FamilyDescriptor(name, q))
        for name in ("dual_polar_2A_even", "dual_polar_2A_odd"):
            out.append(FamilyDescriptor(name, q * q))
        out.append(FamilyDescriptor("hemmeter", q))
        for parity in ("even", "odd"):
            out.append(FamilyDescriptor("half_dual_polar", q, parity=parity))
            out.append(FamilyDescriptor("ustimenko", q, parity=parity))
            out.append(FamilyDescriptor("alternating", q, parity=parity))
            out.append(FamilyDescriptor("quadratic", q, parity=parity))
        out.append(FamilyDescriptor("second_hermitian_dual_polar", q))
        out.append(FamilyDescriptor("bilinear", q, delta=Fraction(1)))
        out.append(FamilyDescriptor("hermitian_forms", q))
    return out
