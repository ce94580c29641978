"""Gibbs (deformed vacuum) functional on the adjacency algebra.

For a distance-regular graph, K_t = sum_i t^i A_i acts on the j-th
eigenspace by the scalar sum_i t^i v_i(theta_j); the functional
B -> tr(K_t B)/|X| is a state exactly when K_t is positive semidefinite.
At the adjacency matrix it has mean t k and variance k(1-t)(1+t+t a_1).

The K_t eigenvalues are evaluated both as the direct polynomial sum and via
the closed form

    sum_i t^i v_i(theta_j)
        = (t; b)_j * sum_{l=0}^{d-j} ([j-d-bracket factors]) t^l ...,

and the two must agree exactly.  All finite quantities are exact rationals;
only atom positions of the normalized spectral measure (which involve the
square root of the variance) are floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .params import (
    ClassicalParams,
    InternalConsistencyError,
    SpectralTable,
    intersection_array,
)
from .qseries import as_fraction, gen_poch, poch


@dataclass(frozen=True)
class GibbsPoint:
    """K_t spectrum and the first two moments of the adjacency matrix at t."""

    t: Fraction
    mean: Fraction
    variance: Fraction
    kt_spectrum: tuple[Fraction, ...]


@dataclass(frozen=True)
class DiscreteMeasure:
    """Atoms and masses of a (possibly signed) discrete probability measure.

    Masses are exact rationals for finite-graph measures and floats for
    truncated limit measures; ``tail_bound`` bounds the mass missing from a
    truncation, and ``positivity`` records whether all masses are
    nonnegative (the measure is signed otherwise).
    """

    atoms: tuple[float, ...]
    masses: tuple[Union[Fraction, float], ...]
    truncated: bool = False
    tail_bound: float = 0.0
    positivity: bool = True

    def __post_init__(self) -> None:
        if len(self.atoms) != len(self.masses):
            raise ValueError("atoms and masses must have equal length")
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be nonnegative")
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("atoms must be pairwise distinct")


def kt_closed_form(cp: ClassicalParams, t: Fraction, j: int) -> Fraction:
    """Closed form of sum_i t^i v_i(theta_j) via the q-binomial theorem."""
    d = cp.d
    fb = Fraction(cp.b)
    aa = cp.alpha - cp.beta + cp.beta * fb
    cc = cp.alpha + 1 - fb
    total = Fraction(0)
    for ell in range(d - j + 1):
        den = gen_poch(cc, cp.alpha, fb, ell) * poch(fb, fb, ell)
        total += (
            poch(fb ** (j - d), fb, ell)
            * gen_poch(aa, cp.alpha * fb**j, fb, ell)
            * fb ** (ell * (d - j))
            * t**ell
            / den
        )
    return poch(t, fb, j) * total


def gibbs_point(cp: ClassicalParams, st: SpectralTable, t) -> GibbsPoint:
    """Evaluate K_t spectrum (two independent routes, compared exactly)."""
    t = as_fraction(t)
    ia = intersection_array(cp)
    d = cp.d
    direct = tuple(
        sum(t**i * st.v_matrix[i][j] for i in range(d + 1)) for j in range(d + 1)
    )
    closed = tuple(kt_closed_form(cp, t, j) for j in range(d + 1))
    if direct != closed:
        raise InternalConsistencyError(
            f"K_t spectrum mismatch at t={t}: direct {direct} vs closed {closed}"
        )
    mean = t * ia.k
    variance = ia.k * (1 - t) * (1 + t + t * ia.a_seq[1])
    return GibbsPoint(t, mean, variance, direct)


def in_pi(gp: GibbsPoint) -> bool:
    """True iff K_t is positive semidefinite (exact eigenvalue comparison)."""
    return min(gp.kt_spectrum) >= 0


@dataclass(frozen=True)
class PsdCheckEntry:
    i: int
    t: Fraction
    min_eigenvalue: Fraction
    psd: bool


@dataclass(frozen=True)
class PsdCheckReport:
    entries: tuple[PsdCheckEntry, ...]

    @property
    def violations(self) -> tuple[PsdCheckEntry, ...]:
        return tuple(e for e in self.entries if not e.psd)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_negative_powers(cp: ClassicalParams, i_max: int) -> PsdCheckReport:
    """Check K_t >= 0 at t = b^-i for i = 0..i_max.

    A failure falsifies feasibility of the parameters, not the underlying
    positivity statement, so the result is a report rather than an error.
    """
    if abs(cp.b) < 2:
        raise ValueError("negative-power check requires |b| >= 2")
    from .params import spectral_table

    st = spectral_table(cp)
    entries = []
    for i in range(i_max + 1):
        t = Fraction(1, cp.b**i) if i else Fraction(1)
        gp = gibbs_point(cp, st, t)
        lo = min(gp.kt_spectrum)
        entries.append(PsdCheckEntry(i, t, lo, lo >= 0))
    return PsdCheckReport(tuple(entries))


def gibbs_distribution(cp: ClassicalParams, st: SpectralTable, t) -> DiscreteMeasure:
    """Normalized spectral measure of (A - t k)/sigma_t under the Gibbs functional.

    Atom j sits at (theta_j - t k)/sigma_t(A); its mass is the exact rational
    (m_j/|X|) sum_i t^i v_i(theta_j).  The measure is signed when t is outside
    the positive-semidefinite set, flagged via ``positivity``.
    """
    gp = gibbs_point(cp, st, t)
    if gp.variance <= 0:
        raise ValueError(f"variance {gp.variance} must be positive at t = {gp.t}")
    masses = tuple(
        st.mult[j] / st.vertex_count * gp.kt_spectrum[j] for j in range(cp.d + 1)
    )
    if sum(masses) != 1:
        raise InternalConsistencyError(
            f"Gibbs masses sum to {sum(masses)} instead of 1 at t = {gp.t}"
        )
    sigma = math.sqrt(float(gp.variance))
    atoms = tuple(float(st.theta[j] - gp.mean) / sigma for j in range(cp.d + 1))
    return DiscreteMeasure(
        atoms=atoms,
        masses=masses,
        truncated=False,
        tail_bound=0.0,
        positivity=in_pi(gp),
    )


def measure_moment(mu: DiscreteMeasure, m: int) -> float:
    """m-th raw moment sum_j mass_j atom_j^m of a discrete measure."""
    if m < 0:
        raise ValueError("moment order must be nonnegative")
    return float(sum(float(w) * x**m for x, w in zip(mu.atoms, mu.masses)))
