import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from treegibbs import (
    build_ball,
    classify,
    commensurability_exact,
    commensurability_float,
    commensurability_multiplicative,
    difference_set,
    finite_volume_spectrum,
    generic_model,
    markov_model,
    potts_model,
    potts_theta,
    spectrum_lattice_check,
)

from conftest import random_rational_model, relabeled, shifted

GOLDEN = (math.sqrt(5) - 1) / 2


def divisor_search_gcd(mags, max_mult=20_000):
    """Brute-force oracle: largest g = m/den dividing every magnitude."""
    best = None
    smallest = min(mags)
    for den in range(1, max_mult + 1):
        g = smallest / den
        if all((x / g).denominator == 1 for x in mags):
            return g
    return best


def test_difference_set_potts_q2():
    ds = difference_set(potts_model(2, 1, 1, 2))
    assert ds.kind == "exact-rational"
    assert ds.deltas == (Fraction(-1), Fraction(0), Fraction(1))


def test_difference_set_potts_q3():
    ds = difference_set(potts_model(3, 1, 1, 2))
    assert ds.deltas == (Fraction(-1), Fraction(0), Fraction(1))


def test_difference_set_constant_table():
    ds = difference_set(generic_model([[Fraction(2)] * 2] * 2, 2, 1))
    assert ds.deltas == (Fraction(0),)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 4))
def test_difference_set_symmetric_and_contains_zero(seed, q):
    rng = np.random.default_rng(seed)
    ds = difference_set(random_rational_model(rng, q, 2))
    assert Fraction(0) in ds.deltas
    assert set(ds.deltas) == {-d for d in ds.deltas}
    assert len(ds.deltas) <= q**4


def test_gcd_of_rationals():
    assert commensurability_exact([Fraction(0), Fraction(1), Fraction(-1)]) == 1
    got = commensurability_exact([Fraction(0), Fraction(1, 2), Fraction(3, 4), Fraction(-3, 4)])
    assert got == Fraction(1, 4)
    assert got == divisor_search_gcd([Fraction(1, 2), Fraction(3, 4)])
    assert commensurability_exact([Fraction(0)]) is None


def test_gcd_matches_divisor_search_oracle():
    rng = np.random.default_rng(1)
    for _ in range(30):
        mags = [Fraction(int(rng.integers(1, 17)), int(rng.integers(1, 9))) for _ in range(4)]
        assert commensurability_exact(mags) == divisor_search_gcd(mags)


def test_multiplicative_uniform_matrix_is_degenerate():
    P = [[Fraction(1, 2)] * 2] * 2
    w = commensurability_multiplicative(P)
    assert w is not None and w.alpha is None
    assert all(m == 0 for row in w.exponents for m in row)


def test_multiplicative_rank_two_cases():
    # ratios {1, 2, 2/3}: exponent vectors independent
    assert commensurability_multiplicative(
        [[Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 4), Fraction(3, 4)]]
    ) is None
    # ratios {1, 4, 4/7}
    assert commensurability_multiplicative(
        [[Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 8), Fraction(7, 8)]]
    ) is None


def test_multiplicative_lattice_found():
    # p00/pij in {1, 1/3, 3} -> powers of alpha = 1/3
    P = [[Fraction(1, 4), Fraction(3, 4)], [Fraction(3, 4), Fraction(1, 4)]]
    w = commensurability_multiplicative(P)
    assert w is not None and w.alpha == Fraction(1, 3)
    # p00/p01 = 1/3 = alpha^1, p00/p00 = alpha^0
    assert w.exponents[0][1] == 1 and w.exponents[0][0] == 0
    for i in range(2):
        for j in range(2):
            assert P[0][0] / P[i][j] == w.alpha ** w.exponents[i][j]


def test_float_lattice_recovers_log_multiples():
    g = -math.log(GOLDEN)
    found = commensurability_float([0.0, g, -g, 2 * g, -2 * g])
    assert found is not None
    assert found.generator == pytest.approx(g, abs=1e-12)


def test_float_lattice_rejects_log2_log3():
    assert commensurability_float([0.0, math.log(2), -math.log(2), math.log(3), -math.log(3)]) is None


def test_float_lattice_exact_multiples():
    found = commensurability_float([0.0, 0.7, -0.7, 1.4, 2.1, -2.1])
    assert found is not None
    assert found.generator == pytest.approx(0.7, abs=1e-12)


def test_float_lattice_empty_and_validation():
    assert commensurability_float([0.0]) is None
    with pytest.raises(ValueError):
        commensurability_float([1.0], tol=-1.0)


def test_classify_potts_q3():
    c = classify(potts_model(3, 1, 1, 2))
    assert c.verdict == "III_family"
    assert c.generator == Fraction(1)
    assert c.gamma == pytest.approx(math.exp(-1), abs=1e-15)
    assert c.confidence == "exact"
    assert set(c.multipliers.values()) == {-1, 0, 1}


def test_classify_trace_cases():
    assert classify(markov_model([[Fraction(1, 2)] * 2] * 2, 2)).verdict == "II1"
    assert classify(generic_model([[Fraction(3, 7)] * 3] * 3, 2, 1)).verdict == "II1"
    assert classify(potts_model(2, 0, 1, 2)).verdict == "II1"


def test_classify_markov_incommensurable():
    c = classify(markov_model([[Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 3), Fraction(2, 3)]], 2))
    assert c.verdict == "incommensurable"
    assert c.confidence == "exact"
    assert c.generator is None


def test_classify_markov_lattice():
    P = [[Fraction(1, 4), Fraction(3, 4)], [Fraction(3, 4), Fraction(1, 4)]]
    c = classify(markov_model(P, 2))
    assert c.verdict == "III_family"
    assert c.generator == pytest.approx(math.log(3), abs=1e-12)
    # every coupling difference is a multiple of the generator
    for (i, j, k, l), m in c.multipliers.items():
        delta = math.log(float(P[k][l])) - math.log(float(P[i][j]))
        assert delta == pytest.approx(m * c.generator, abs=1e-12)


def test_classify_golden_mean_float():
    P = [[GOLDEN, GOLDEN**2], [GOLDEN**2, GOLDEN]]
    c = classify(markov_model(P, 2))
    assert c.verdict == "III_family"
    assert c.confidence == "float"
    assert c.generator == pytest.approx(-math.log(GOLDEN), abs=1e-9)
    assert c.gamma == pytest.approx(GOLDEN, abs=1e-9)


def test_classify_shift_beta_and_relabel_invariance():
    rng = np.random.default_rng(23)
    m = random_rational_model(rng, 3, 2)
    base = classify(m)
    assert classify(shifted(m, Fraction(5, 8))).generator == base.generator
    beta = Fraction(3, 4)
    mb = generic_model(m.lam, m.k, beta)
    scaled = generic_model([[beta * v for v in row] for row in m.lam], m.k, Fraction(1))
    assert classify(mb).generator == classify(scaled).generator
    perm = [2, 0, 1]
    assert classify(relabeled(m, perm)).generator == base.generator


def test_generator_maximality_exact():
    rng = np.random.default_rng(29)
    for _ in range(10):
        m = random_rational_model(rng, 2, 2)
        c = classify(m)
        if c.verdict != "III_family":
            continue
        deltas = difference_set(m).deltas
        for mult in (2, 3, 5):
            bigger = c.generator * mult
            assert any((d / bigger).denominator != 1 for d in deltas if d != 0)


def test_potts_theta_values():
    assert potts_theta(3, Fraction(3, 2), 1) == pytest.approx(math.exp(-1.5), abs=1e-15)
    assert potts_theta(3, 1, 1) == pytest.approx(math.exp(-1), abs=1e-15)
    assert potts_theta(2, Fraction(7, 3), 2) == pytest.approx(math.exp(-2 * 7 / 3))
    assert potts_theta(5, 0, 1) == 1.0
    # matches the classifier's gamma for the Potts model
    c = classify(potts_model(3, 1, 1, 2))
    assert potts_theta(3, 1, 1) == pytest.approx(c.gamma, abs=1e-15)


def test_spectrum_free_model():
    m = potts_model(2, 0, 1, 2)
    b = build_ball(2, 1)
    spec = finite_volume_spectrum(m, b)
    assert np.all(spec == 0.0) and len(spec) == 2**4


def test_spectrum_two_edge_levels():
    m = potts_model(2, 1, 1, 1)
    b = build_ball(1, 1)  # two edges, 8 configurations
    spec = finite_volume_spectrum(m, b)
    levels, counts = np.unique(spec, return_counts=True)
    assert np.allclose(levels, [-1.0, 0.0, 1.0])
    assert list(counts) == [2, 4, 2]


def test_spectrum_lattice_containment():
    m = potts_model(2, 1, 1, 2)
    b = build_ball(2, 2)
    ok, g, dev = spectrum_lattice_check(m, b, tol=1e-9)
    assert ok and g == pytest.approx(1.0) and dev < 1e-9
