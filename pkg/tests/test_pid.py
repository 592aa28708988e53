import math

import pytest

from boolfour.gate import InputMeasure, TruthTable, enumerate_gates, make_gate
from boolfour.info import conditional_mi, joint_from_gate, mi_direct, target_entropy
from boolfour.pid import (
    D_NODES,
    PIDError,
    down_sum,
    imin,
    lattice,
    mobius,
    node_key,
    node_label,
    node_leq,
    pid_bivariate,
    pid_json,
    pid_lattice,
    pid_trivariate,
    psi_sums,
    specific_information,
)

import oracles

H_QUARTER = 0.8112781244591328
SI_AND = H_QUARTER - 0.5


def test_lattice_sizes():
    assert len(lattice(2)) == 4
    assert len(lattice(3)) == 18
    with pytest.raises(ValueError):
        lattice(4)


def test_lattice_order_is_bottom_up():
    nodes = lattice(3)
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            assert not (node_leq(b, a) and b != a)
    assert nodes[0] == (0b001, 0b010, 0b100)
    assert nodes[-1] == (0b111,)


def test_node_serialization():
    assert node_key((0b011, 0b101)) == "[[0,1],[0,2]]"
    assert node_label((0b011, 0b101)) == "{XY}{XZ}"
    assert len({node_key(a) for a in lattice(3)}) == 18


def test_mobius_round_trip():
    jd = joint_from_gate(make_gate("AND3"))
    cumulative = {node: imin(jd, node) for node in lattice(3)}
    back = down_sum(3, mobius(3, cumulative))
    for node in lattice(3):
        assert back[node] == pytest.approx(cumulative[node], abs=1e-15)


def test_specific_information_examples():
    xor = joint_from_gate(make_gate("XOR"))
    assert specific_information(xor, 1, 0b01) == pytest.approx(0.0, abs=1e-12)
    and_jd = joint_from_gate(make_gate("AND"))
    assert specific_information(and_jd, -1, 0b01) == pytest.approx(1.0)
    for g in enumerate_gates(2):
        jd = joint_from_gate(g)
        for t, row in ((1, 0), (-1, 1)):
            pt = jd.p_target[row]
            if pt > 0:
                assert specific_information(jd, t, 0b11) == pytest.approx(-math.log2(pt))


def test_specific_information_rejects_impossible_target():
    with pytest.raises(PIDError):
        specific_information(joint_from_gate(make_gate("CONST_1")), -1, 0b01)


def test_imin_examples():
    assert imin(joint_from_gate(make_gate("XOR")), (0b01, 0b10)) == pytest.approx(0.0, abs=1e-12)
    assert imin(joint_from_gate(make_gate("AND")), (0b01, 0b10)) == pytest.approx(SI_AND)
    jd = joint_from_gate(make_gate("MAJ3"))
    assert imin(jd, (0b111,)) == pytest.approx(target_entropy(jd))
    with pytest.raises(ValueError):
        imin(jd, ())


def test_imin_matches_oracle():
    for p in (0.5, 0.25):
        for g in enumerate_gates(3):
            jd = joint_from_gate(g, InputMeasure.pbiased(p))
            dist = oracles.joint(g.outputs, 3, p)
            for node in ((0b001, 0b010), (0b011, 0b101, 0b110), (0b001, 0b110)):
                src = [tuple(j for j in range(3) if s >> j & 1) for s in node]
                assert imin(jd, node) == pytest.approx(oracles.imin(dist, src), abs=1e-12)


def test_bivariate_examples():
    pid = pid_bivariate(joint_from_gate(make_gate("XOR")))
    assert (pid.SI, pid.UI_X, pid.UI_Y, pid.CI) == pytest.approx((0, 0, 0, 1), abs=1e-12)
    pid = pid_bivariate(joint_from_gate(make_gate("AND")))
    assert (pid.SI, pid.UI_X, pid.UI_Y, pid.CI) == pytest.approx((SI_AND, 0, 0, 0.5), abs=1e-12)
    pid = pid_bivariate(joint_from_gate(make_gate("DICT_1")))
    assert (pid.SI, pid.UI_X, pid.UI_Y, pid.CI) == pytest.approx((0, 1, 0, 0), abs=1e-12)
    assert pid.to_json()["measure"] == "imin"
    with pytest.raises(ValueError):
        pid_bivariate(joint_from_gate(make_gate("MAJ3")))


@pytest.mark.parametrize("p", [0.5, 0.1, 0.75])
def test_bivariate_against_oracle_and_identities(p):
    for g in enumerate_gates(2):
        jd = joint_from_gate(g, InputMeasure.pbiased(p))
        pid = pid_bivariate(jd)
        assert (pid.SI, pid.UI_X, pid.UI_Y, pid.CI) == pytest.approx(oracles.pid2(g.outputs, p), abs=1e-12)
        assert min(pid.SI, pid.UI_X, pid.UI_Y, pid.CI) >= 0
        assert pid.total == pytest.approx(mi_direct(jd, 0b11), abs=1e-12)
        assert pid.SI + pid.UI_X == pytest.approx(mi_direct(jd, 0b01), abs=1e-12)
        assert pid.SI + pid.UI_Y == pytest.approx(mi_direct(jd, 0b10), abs=1e-12)


def test_bivariate_lattice_agrees_with_bivariate_pid():
    for g in enumerate_gates(2):
        jd = joint_from_gate(g)
        atoms = pid_lattice(jd)
        pid = pid_bivariate(jd)
        assert atoms[(0b01, 0b10)] == pytest.approx(pid.SI, abs=1e-12)
        assert atoms[(0b01,)] == pytest.approx(pid.UI_X, abs=1e-12)
        assert atoms[(0b11,)] == pytest.approx(pid.CI, abs=1e-12)


def test_trivariate_examples():
    atoms = pid_trivariate(joint_from_gate(make_gate("XOR3"))).atoms
    assert atoms[(0b111,)] == pytest.approx(1.0)
    assert sum(v for k, v in atoms.items() if k != (0b111,)) == pytest.approx(0.0, abs=1e-12)
    atoms = pid_trivariate(joint_from_gate(make_gate("DICT_1_3"))).atoms
    assert atoms[(0b001,)] == pytest.approx(1.0)
    assert sum(v for k, v in atoms.items() if k != (0b001,)) == pytest.approx(0.0, abs=1e-12)


def test_maj3_atoms():
    pid3 = pid_trivariate(joint_from_gate(make_gate("MAJ3")))
    # I(T; X) = 1 - H(T | X) = 1 - h2(1/4)
    single = 1 - H_QUARTER
    assert pid3.atoms[(0b001, 0b010, 0b100)] == pytest.approx(single)
    for i in range(3):
        assert pid3.above_complement(i) == pytest.approx(0.5)


@pytest.mark.parametrize("p", [0.5, 0.1, 0.9])
def test_trivariate_identities(p):
    for g in enumerate_gates(3):
        jd = joint_from_gate(g, InputMeasure.pbiased(p))
        pid3 = pid_trivariate(jd)
        psi = psi_sums(jd)
        assert min(pid3.atoms.values()) >= 0
        assert sum(pid3.atoms.values()) == pytest.approx(mi_direct(jd, 0b111), abs=1e-12)
        for i in range(3):
            assert psi[i] == pytest.approx(pid3.above_complement(i), abs=1e-9)
            below = sum(v for node, v in pid3.atoms.items() if node_leq(node, (1 << i,)))
            assert below == pytest.approx(mi_direct(jd, 1 << i), abs=1e-12)


def test_d_vector_reads_named_nodes():
    pid3 = pid_trivariate(joint_from_gate(make_gate("MAJ3")))
    assert pid3.d_vector == tuple(pid3.atoms[n] for n in D_NODES)
    d = pid3.d_vector
    # psi_0 = CI(XYZ) + CI(XY) + CI(XZ) + CI(XY,XZ) + UI(X)
    assert d[0] + d[1] + d[2] + d[4] + d[7] == pytest.approx(0.5)


def test_psi_examples():
    assert tuple(psi_sums(joint_from_gate(make_gate("MAJ3")))) == pytest.approx((0.5, 0.5, 0.5))
    assert tuple(psi_sums(joint_from_gate(make_gate("XOR3")))) == pytest.approx((1, 1, 1))
    # AND3: X is pivotal only when Y = Z = -1, where T is then a fair coin
    assert tuple(psi_sums(joint_from_gate(make_gate("AND3")))) == pytest.approx((0.25, 0.25, 0.25))
    jd = joint_from_gate(make_gate("AND3"), InputMeasure.pbiased(0.3))
    assert psi_sums(jd)[1] == pytest.approx(conditional_mi(jd, 1))
    assert psi_sums(jd).scaled(2.0)[0] == pytest.approx(2 * conditional_mi(jd, 0))


def test_and3_atoms_against_oracle():
    g = make_gate("AND3")
    atoms = pid_trivariate(joint_from_gate(g)).atoms
    dist = oracles.joint(g.outputs, 3)
    bottom = oracles.imin(dist, [(0,), (1,), (2,)])
    assert atoms[(0b001, 0b010, 0b100)] == pytest.approx(bottom)
    assert atoms[(0b001, 0b010, 0b100)] == pytest.approx(0.137925, abs=1e-6)
    assert atoms[(0b111,)] == pytest.approx(0.25, abs=1e-12)


def test_pid_json():
    jd = joint_from_gate(make_gate("MAJ3"))
    out = pid_json(pid_trivariate(jd), psi_sums(jd))
    assert out["measure"] == "imin"
    assert len(out["atoms"]) == 18
    assert out["labels"]["[[0,1],[0,2]]"] == "{XY}{XZ}"
    assert out["psi"] == pytest.approx([0.5, 0.5, 0.5])
    assert list(out["d_vector"])[0] == "CI(T;X:Y:Z)"


def test_trivariate_rejects_wrong_arity():
    with pytest.raises(ValueError):
        pid_trivariate(joint_from_gate(make_gate("AND")))


def test_negation_leaves_pid_unchanged():
    for g in list(enumerate_gates(3))[::17]:
        a = pid_trivariate(joint_from_gate(g)).atom_vector()
        b = pid_trivariate(joint_from_gate(-g)).atom_vector()
        assert a == pytest.approx(b, abs=1e-12)
    assert isinstance(-make_gate("AND"), TruthTable)
