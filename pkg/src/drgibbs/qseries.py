"""Exact and floating q-series kernel.

Gaussian brackets, finite q-shifted factorials, the two-parameter shifted
factorial ``(x; y; q)_h = (x - y)(x - yq)...(x - y q^(h-1))``, terminating
basic hypergeometric series, and infinite products ``(a; q)_oo`` for
``|q| < 1`` truncated under a rigorous geometric tail bound.

The exact layer works over :class:`fractions.Fraction` throughout, so every
finite quantity downstream (intersection numbers, eigenvalues,
multiplicities, Gibbs weights) is computed without rounding.  Infinite
products are the only approximate objects and carry an explicit absolute
error bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

Rational = Union[int, Fraction]

_MAX_PRODUCT_TERMS = 1_000_000
_TERMINATION_SCAN_CAP = 4096


@dataclass(frozen=True)
class ApproxScalar:
    """Floating value together with a bound on its absolute truncation error."""

    value: float
    abs_err: float = 0.0

    def __post_init__(self) -> None:
        if self.abs_err < 0:
            raise ValueError("abs_err must be nonnegative")


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions, and 'p/q' strings to Fraction (floats rejected)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def gauss_bracket(i: int, b: Rational) -> Fraction:
    """Base-b bracket [i] = 1 + b + b^2 + ... + b^(i-1), with [0] = 0."""
    if i < 0:
        raise ValueError("bracket index must be nonnegative")
    b = as_fraction(b)
    if b == 0:
        raise ValueError("bracket base must be nonzero")
    if b == 1:
        return Fraction(i)
    return (b**i - 1) / (b - 1)


def poch(a: Rational, q: Rational, h: int) -> Fraction:
    """Finite q-shifted factorial (a; q)_h = prod_{l<h} (1 - a q^l); 1 for h = 0."""
    if h < 0:
        raise ValueError("pochhammer length must be nonnegative")
    a = as_fraction(a)
    q = as_fraction(q)
    out = Fraction(1)
    aql = a
    for _ in range(h):
        out *= 1 - aql
        aql *= q
    return out


def gen_poch(x: Rational, y: Rational, q: Rational, h: int) -> Fraction:
    """Two-parameter shifted factorial (x; y; q)_h = prod_{l<h} (x - y q^l)."""
    if h < 0:
        raise ValueError("pochhammer length must be nonnegative")
    x = as_fraction(x)
    y = as_fraction(y)
    q = as_fraction(q)
    out = Fraction(1)
    yql = y
    for _ in range(h):
        out *= x - yql
        yql *= q
    return out


def _power_match(a: Fraction, q: Fraction, cap: int = _TERMINATION_SCAN_CAP):
    """Smallest n >= 0 with a * q^n == 1 (i.e. a == q^-n), or None."""
    if a == 0 or q == 0:
        return None
    absq = abs(q)
    p = a
    for n in range(cap + 1):
        if p == 1:
            return n
        # |p q^j| is monotone in j, so once it has passed 1 it never returns.
        if absq > 1 and abs(p) > 1:
            return None
        if absq < 1 and abs(p) < 1:
            return None
        if absq == 1 and n >= 1:
            return None
        p *= q
    return None


def phi_terminating(
    uppers: Sequence[Rational],
    lowers: Sequence[Rational],
    q: Rational,
    z: Rational,
) -> Fraction:
    """Terminating basic hypergeometric series, exactly.

    Evaluates sum_{h=0}^{n} of

        prod_i (a_i; q)_h / prod_j (b_j; q)_h
            * (-1)^((m-n-1) h) z^h / ((q; q)_h q^((m-n-1) binom(h,2)))

    where n is the least nonnegative integer with q^-n among the upper
    parameters.  Raises if no upper parameter terminates the series, or if a
    lower-parameter factor vanishes at or before term n.
    """
    uppers = [as_fraction(a) for a in uppers]
    lowers = [as_fraction(b) for b in lowers]
    q = as_fraction(q)
    z = as_fraction(z)
    orders = [m for m in (_power_match(a, q) for a in uppers) if m is not None]
    if not orders:
        raise ValueError("series does not terminate: no upper parameter is q^-n")
    n = min(orders)
    excess = len(uppers) - len(lowers) - 1

    total = Fraction(0)
    term = Fraction(1)
    qh = Fraction(1)  # q^h
    for h in range(n + 1):
        total += term
        if h == n:
            break
        for bj in lowers:
            factor = 1 - bj * qh
            if factor == 0:
                raise ValueError(
                    f"lower parameter {bj} vanishes at term {h + 1} before termination"
                )
        base_factor = 1 - q * qh  # (q; q) factor for h+1
        if base_factor == 0:
            raise ValueError("base pochhammer vanished before termination")
        num = Fraction(1)
        for ai in uppers:
            num *= 1 - ai * qh
        den = base_factor
        for bj in lowers:
            den *= 1 - bj * qh
        term = term * num * z / den
        if excess:
            term *= Fraction(-1) ** excess / q ** (excess * h)
        qh *= q
    return total


def infinite_product(a, q, eps):
    """Truncated (a; q)_oo with a rigorous tail bound, for |q| < 1.

    Works over any numeric type closed under +, *, abs (float, mpmath.mpf).
    Returns ``(value, bound)`` with |value - (a; q)_oo| <= bound < eps.
    The tail estimate uses |log(1-x)| <= 2|x| for |x| <= 1/2 and
    e^s - 1 <= 2 s for s <= 1, hence bound = 4 |P_L| sum_{l>=L} |a q^l|.
    """
    if not abs(q) < 1:
        raise ValueError("infinite product requires |q| < 1")
    if eps <= 0:
        raise ValueError("eps must be positive")
    one = 1 + a * 0
    p = one
    aql = a * one
    geom = one / (1 - abs(q))
    for _ in range(_MAX_PRODUCT_TERMS):
        tail = abs(aql) * geom
        if 2 * tail <= 1:
            bound = 4 * abs(p) * tail
            if bound < eps:
                return p, bound
        factor = 1 - aql
        if factor == 0:
            return factor * 0, factor * 0
        p *= factor
        aql *= q
    raise RuntimeError("infinite product tail bound did not reach eps")


def poch_inf(a: float, q: float, eps: float = 1e-14) -> ApproxScalar:
    """Infinite q-shifted factorial (a; q)_oo for |q| < 1, as value +- bound."""
    value, bound = infinite_product(float(a), float(q), float(eps))
    return ApproxScalar(float(value), float(bound))
