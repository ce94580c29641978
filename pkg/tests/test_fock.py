import math
from fractions import Fraction

import pytest

from drgibbs import families as fam
from drgibbs import limits
from drgibbs.fock import (
    all_words,
    finite_coefficients,
    limit_coefficients,
    limit_moment,
    mixed_moment_finite,
    mixed_moment_finite_exact,
    mixed_moment_limit,
    parse_word,
    qclt_table,
)
from drgibbs.gibbs import gibbs_point, gibbs_distribution
from drgibbs.params import ClassicalParams, spectral_table

J2_4_2 = ClassicalParams(2, 2, 2, 6)
HALF = Fraction(1, 2)


def test_parse_word():
    assert parse_word("+-o") == ("+", "-", "o")
    with pytest.raises(ValueError):
        parse_word("")
    with pytest.raises(ValueError):
        parse_word("+x")


def test_finite_coefficients_values():
    st = spectral_table(J2_4_2)
    fc = finite_coefficients(J2_4_2, st, HALF)
    assert fc.length == 3
    assert abs(fc.omega[0] - 1 / 3) < 1e-15
    assert abs(fc.omega[1] - 4 / 3) < 1e-15
    # diagonal entry at level 0 is always -t k / sigma
    assert abs(fc.alpha_diag[0] + float(9 / math.sqrt(54))) < 1e-15
    fc0 = finite_coefficients(J2_4_2, st, 0)
    assert fc0.gamma_w == (1.0, 0.0, 0.0)


def test_mixed_moment_examples():
    st = spectral_table(J2_4_2)
    assert mixed_moment_finite(J2_4_2, st, 0, "o") == 0.0
    assert abs(mixed_moment_finite(J2_4_2, st, HALF, "+-") - 1 / 3) < 1e-15
    # lowering first annihilates the vacuum on both sides
    assert mixed_moment_finite(J2_4_2, st, HALF, "-") == 0.0


def test_sum_rule_exact():
    st = spectral_table(J2_4_2)
    for t in (HALF, Fraction(3, 4)):
        gp = gibbs_point(J2_4_2, st, t)
        mu = gibbs_distribution(J2_4_2, st, t)
        for m in range(1, 7):
            total = Fraction(0)
            for w in all_words(m):
                q, _ = mixed_moment_finite_exact(J2_4_2, t, w)
                total += q
            central = sum(
                w * (st.theta[j] - gp.mean) ** m for j, w in enumerate(mu.masses)
            )
            assert total == central


def test_limit_coefficients_dual_polar_regime():
    reg = limits.LimitRegime("case_ii", 2, Fraction(0), 0.7, 0.0, eta=math.sqrt(2))
    fc = limit_coefficients(reg, 6)
    # alpha = 0, rho = 0: w_i = [i], diagonal = -gamma, g_i = gamma^i/sqrt(c_i..c_1)
    assert fc.omega == (1.0, 3.0, 7.0, 15.0, 31.0)
    assert all(abs(a + 0.7) < 1e-15 for a in fc.alpha_diag)
    assert abs(fc.gamma_w[2] - 0.7**2 / math.sqrt(3)) < 1e-15


def test_limit_coefficients_gamma_zero():
    reg = limits.LimitRegime("case_i_rho", 2, Fraction(2), 0.0, 2.0)
    fc = limit_coefficients(reg, 5)
    assert fc.gamma_w == (1.0, 0.0, 0.0, 0.0, 0.0)
    sigma = 2 + 1  # rho + alpha/rho
    for i in range(5):
        bracket = 2**i - 1
        assert abs(fc.alpha_diag[i] - bracket * sigma) < 1e-12


def test_limit_coefficients_grassmann_normalizer():
    reg = limits.LimitRegime("case_i_rho", 2, Fraction(2), 2.0, 2.0)
    fc = limit_coefficients(reg, 4)
    assert abs(fc.omega[0] - 1 / 7) < 1e-15


def test_mixed_moment_limit_ladder_steps():
    reg = limits.LimitRegime("case_i_rho", 2, Fraction(2), 2.0, 2.0)
    fc = limit_coefficients(reg, 5)
    assert mixed_moment_limit(fc, "-") == 0.0
    g1, w1 = fc.gamma_w[1], fc.omega[0]
    assert abs(mixed_moment_limit(fc, "+") - g1 * math.sqrt(w1)) < 1e-15
    g2, w2 = fc.gamma_w[2], fc.omega[1]
    assert abs(mixed_moment_limit(fc, "++") - g2 * math.sqrt(w1 * w2)) < 1e-15
    with pytest.raises(ValueError):
        mixed_moment_limit(fc, "+" * 5)


def test_limit_moment_normalization():
    regimes = [
        limits.LimitRegime("case_i_rho", 2, Fraction(2), 2.0, 2.0),
        limits.LimitRegime("case_i_rho", 3, Fraction(2), 0.4, 1.5),
        limits.LimitRegime("case_ii", 2, Fraction(0), 0.7, 0.0, eta=math.sqrt(2)),
        limits.LimitRegime(
            "case_i_alpha_over_rho", -2, Fraction(-3), 0.5, math.sqrt(3)
        ),
    ]
    for reg in regimes:
        fc = limit_coefficients(reg, 8)
        assert limit_moment(fc, 0) == 1.0
        assert abs(limit_moment(fc, 1)) < 1e-12
        assert abs(limit_moment(fc, 2) - 1.0) < 1e-12
    with pytest.raises(ValueError):
        limit_moment(limit_coefficients(regimes[0], 3), 4)


def test_word_order_convention():
    # first letter acts first: "+o" applies the raising step, then the
    # diagonal at level 1, giving gbar_1 sqrt(w_1) abar_2 + contraction terms
    st = spectral_table(J2_4_2)
    fc = finite_coefficients(J2_4_2, st, HALF)
    got = mixed_moment_finite(J2_4_2, st, HALF, "+o")
    expect = fc.gamma_w[1] * math.sqrt(fc.omega[0]) * fc.alpha_diag[1]
    assert abs(got - expect) < 1e-14


def test_trend_grassmann_and_dual_polar():
    words = ["".join(w) for m in range(1, 5) for w in all_words(m)]
    cases = [
        (fam.FamilyDescriptor("grassmann", 2, delta=1), fam.t_rule_power(1, 0, 1)),
        (fam.FamilyDescriptor("dual_polar_C", 2), fam.t_rule_zero()),
        (fam.FamilyDescriptor("dual_polar_C", 2), fam.t_rule_power(1, 0, 2)),
    ]
    for fd, rule in cases:
        res = qclt_table(fd, [4, 6, 8, 10, 12], rule, words)
        maxes = [0.0] * 5
        for row in res["rows"]:
            diffs = [e["abs_diff"] for e in row["entries"]]
            maxes = [max(a, b) for a, b in zip(maxes, diffs)]
            if all(x <= 1e-13 for x in diffs):
                continue
            assert diffs[-1] < max(diffs[0], 1e-13), (fd.name, row["word"], diffs)
        assert all(a > b for a, b in zip(maxes, maxes[1:])), (fd.name, maxes)
