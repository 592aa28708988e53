import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolfour.fourier import (
    FourierSpectrum,
    SpectrumError,
    all_tables,
    characters,
    classical_bounds,
    flip_influence,
    flip_influence_exact,
    influence,
    influence_exact,
    influence_group,
    influences,
    inverse_transform,
    noise_sensitivity,
    noise_sensitivity_direct,
    stability,
    stability_direct,
    total_influence,
    total_influence_exact,
    transform,
    transform_batch,
    transform_direct,
    transform_exact,
    transform_integer,
    variance,
)
from boolfour.gate import (
    UNIFORM,
    InputMeasure,
    TruthTable,
    classify,
    enumerate_gates,
    make_gate,
    point_probabilities,
    sensitivity_at,
)

import oracles

P_GRID = (0.1, 0.25, 0.5, 0.75, 0.9)
tables = st.integers(min_value=1, max_value=4).flatmap(
    lambda n: st.lists(st.sampled_from((1, -1)), min_size=1 << n, max_size=1 << n).map(
        lambda outs: TruthTable(n, tuple(outs))))
measures = st.sampled_from([UNIFORM] + [InputMeasure.pbiased(p) for p in P_GRID])


def test_xor_spectrum():
    assert transform(make_gate("XOR")).coeffs == pytest.approx((0, 0, 0, 1))


def test_and_spectrum():
    assert transform(make_gate("AND")).coeffs == pytest.approx((0.5, 0.5, 0.5, -0.5))


def test_half_biased_equals_uniform_bit_for_bit():
    for g in enumerate_gates(3):
        assert transform(g, InputMeasure.pbiased(0.5)).coeffs == transform(g).coeffs


@pytest.mark.parametrize("p", P_GRID)
def test_transform_matches_oracle(p):
    m = InputMeasure.pbiased(p)
    for g in enumerate_gates(3):
        assert transform(g, m).coeffs == pytest.approx(oracles.spectrum(g.outputs, 3, p), abs=1e-12)


def test_transform_direct_matches_fast_path():
    m = InputMeasure.pbiased(0.3)
    for g in enumerate_gates(2):
        assert transform_direct(g, m) == pytest.approx(transform(g, m).array, abs=1e-12)


def test_characters_are_orthonormal():
    for m in (UNIFORM, InputMeasure.pbiased(0.2)):
        c = characters(3, m)
        gram = c.T @ np.diag(point_probabilities(3, m)) @ c
        assert gram == pytest.approx(np.eye(8), abs=1e-12)


def test_exact_rational_path():
    assert transform_exact(make_gate("AND")) == [Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2)]
    for g in enumerate_gates(3):
        assert [float(c) for c in transform_exact(g)] == pytest.approx(transform(g).coeffs, abs=1e-15)


def test_integer_and_batched_transforms():
    t = all_tables(3)
    ints = transform_integer(t)
    ref = np.array([transform(g).coeffs for g in enumerate_gates(3)])
    assert np.array_equal(ints, np.rint(ref * 8).astype(np.int64))
    m = InputMeasure.pbiased(0.7)
    ref = np.array([transform(g, m).coeffs for g in enumerate_gates(3)])
    assert transform_batch(t, m) == pytest.approx(ref, abs=1e-12)


@settings(max_examples=60)
@given(tables, measures)
def test_parseval_and_mean(tt, m):
    sp = transform(tt, m)
    assert (sp.squared().sum()) == pytest.approx(1.0, abs=1e-12)
    assert sp[0] == pytest.approx(float(sum(oracles.prob(x, m.p) * f for f, x in zip(tt.outputs, oracles.points(tt.n)))), abs=1e-12)


@settings(max_examples=60)
@given(tables, measures)
def test_inverse_round_trip(tt, m):
    assert inverse_transform(transform(tt, m)) == tt


def test_inverse_rejects_non_boolean():
    with pytest.raises(SpectrumError):
        inverse_transform(FourierSpectrum(2, UNIFORM, (0.0, 0.0, 0.0, 0.0)))


def test_spectrum_json_round_trip():
    sp = transform(make_gate("MAJ3"), InputMeasure.pbiased(0.3))
    obj = sp.to_json()
    assert obj["basis"] == {"p": 0.3}
    assert FourierSpectrum.from_json(obj) == sp
    assert transform(make_gate("AND")).to_json()["basis"] == "uniform"


def test_variance_examples():
    assert variance(transform(make_gate("XOR"))) == pytest.approx(1.0)
    assert variance(transform(make_gate("AND"))) == pytest.approx(0.75)
    assert variance(transform(make_gate("CONST_1"))) == pytest.approx(0.0)


def test_influence_examples():
    assert influence(transform(make_gate("XOR")), 0) == pytest.approx(1.0)
    assert influence(transform(make_gate("AND")), 0) == pytest.approx(0.5)
    assert influence(transform(make_gate("MAJ3")), 0) == pytest.approx(0.5)
    with pytest.raises(IndexError):
        influence(transform(make_gate("AND")), 2)


def test_group_and_total_influence():
    and_sp = transform(make_gate("AND"))
    assert influence_group(and_sp, 0b11) == pytest.approx(1.0)
    assert influence_group(transform(make_gate("XOR")), 0b01) == pytest.approx(1.0)
    assert total_influence(transform(make_gate("XOR"))) == pytest.approx(2.0)
    assert total_influence(and_sp) == pytest.approx(1.0)
    assert total_influence(transform(make_gate("MAJ3"))) == pytest.approx(1.5)


@pytest.mark.parametrize("p", P_GRID)
def test_influence_is_flip_probability(p):
    m = InputMeasure.pbiased(p)
    for g in enumerate_gates(3):
        sp = transform(g, m)
        for i in range(3):
            assert influence(sp, i) == pytest.approx(oracles.flip_probability(g.outputs, 3, i, p), abs=1e-12)
            assert flip_influence(g, i, m) == pytest.approx(oracles.flip_probability(g.outputs, 3, i, p), abs=1e-12)


def test_influence_exact_equals_flip_probability():
    for g in enumerate_gates(3):
        for i in range(3):
            assert influence_exact(g, i) == flip_influence_exact(g, i)
        avg = Fraction(sum(sensitivity_at(g, x) for x in range(8)), 8)
        assert total_influence_exact(g) == avg


def test_monotone_and_unate_first_order_coefficients():
    for p in (0.5, 0.2, 0.8):
        m = InputMeasure.pbiased(p)
        for g in enumerate_gates(3):
            c = classify(g)
            if not c.is_unate:
                continue
            sp = transform(g, m)
            for i in range(3):
                expected = c.unate_parameters[i] * m.sigma * influence(sp, i)
                assert sp[1 << i] == pytest.approx(expected, abs=1e-12)


def test_stability_examples():
    xor = transform(make_gate("XOR"))
    and_sp = transform(make_gate("AND"))
    for rho in (-1.0, -0.3, 0.0, 0.4, 1.0):
        assert stability(xor, rho) == pytest.approx(rho ** 2)
        assert stability(and_sp, rho) == pytest.approx(0.25 + rho / 2 + rho ** 2 / 4)
    # rho = 0 keeps the constant term
    assert stability(transform(make_gate("CONST_1")), 0.0) == pytest.approx(1.0)
    for g in enumerate_gates(2):
        assert stability(transform(g), 1.0) == pytest.approx(1.0)


def test_stability_minus_one_is_antipodal_correlation():
    for g in enumerate_gates(3):
        antipodal = sum(g.outputs[x] * g.outputs[x ^ 0b111] for x in range(8)) / 8
        assert stability(transform(g), -1.0) == pytest.approx(antipodal, abs=1e-12)


def test_stability_rejects_bad_input():
    with pytest.raises(ValueError):
        stability(transform(make_gate("AND")), 1.5)
    with pytest.raises(SpectrumError):
        stability(transform(make_gate("AND"), InputMeasure.pbiased(0.3)), 0.5)


@pytest.mark.parametrize("delta", [0.0, 0.1, 0.25, 0.5, 0.8, 1.0])
def test_noise_sensitivity_matches_enumeration(delta):
    xor = transform(make_gate("XOR"))
    assert noise_sensitivity(xor, delta) == pytest.approx(2 * delta * (1 - delta))
    assert noise_sensitivity(transform(make_gate("CONST_1")), delta) == pytest.approx(0.0)
    for g in enumerate_gates(3):
        assert noise_sensitivity(transform(g), delta) == pytest.approx(noise_sensitivity_direct(g, delta), abs=1e-12)
        rho = 1 - 2 * delta
        assert stability(transform(g), rho) == pytest.approx(stability_direct(g, rho), abs=1e-12)


def test_noise_sensitivity_range():
    with pytest.raises(ValueError):
        noise_sensitivity(transform(make_gate("AND")), -0.1)


def test_classical_bounds_examples():
    and_gate = make_gate("AND")
    b = classical_bounds(transform(and_gate), and_gate)
    assert b["edge_isoperimetric"].lhs == pytest.approx(1.0)
    assert b["edge_isoperimetric"].rhs == pytest.approx(1.0)
    assert b["edge_isoperimetric"].holds
    xor = make_gate("XOR")
    b = classical_bounds(transform(xor), xor)
    assert b["poincare"].lhs == pytest.approx(1.0) and b["poincare"].rhs == pytest.approx(2.0)
    assert "transitive_symmetric" not in b  # parity is not monotone
    maj = make_gate("MAJ3")
    b = classical_bounds(transform(maj), maj)
    assert b["transitive_symmetric"].lhs == pytest.approx(0.5)
    assert b["transitive_symmetric"].rhs == pytest.approx(1 / math.sqrt(3))
    assert b["transitive_symmetric"].holds


def test_bounds_hold_for_all_gates():
    for n in (2, 3):
        for g in enumerate_gates(n):
            for m in (UNIFORM, InputMeasure.pbiased(0.3)):
                assert all(b.holds for b in classical_bounds(transform(g, m), g).values())


def test_edge_bound_is_uniform_only():
    g = make_gate("AND")
    assert "edge_isoperimetric" not in classical_bounds(transform(g, InputMeasure.pbiased(0.3)), g)


def test_influences_list():
    assert influences(transform(make_gate("DICT_2_3"))) == pytest.approx([0.0, 1.0, 0.0])
