from fractions import Fraction

import numpy as np
import pytest

from iqgates.gates3 import (
    CNOT_TOPOLOGIES,
    INFLATIONARY_GENERATOR_PAIR,
    Gate3,
    branching_entropy,
    classify,
    closure_under_composition,
    gate_census,
    gates_from_text,
    gates_to_text,
    inflationary_from_topologies,
    inflationary_gates,
    set_average_recursions,
    string_transform,
    supernonlinear_gates,
    topology_gate_sets,
    walsh_profile,
)

IDENT = Gate3.identity()
INFL_EXAMPLE = Gate3((0, 3, 5, 6, 7, 4, 2, 1))


def test_gate3_validation_and_ops():
    with pytest.raises(ValueError):
        Gate3((0, 0, 1, 2, 3, 4, 5, 6))
    g = INFL_EXAMPLE
    assert g(1) == 3
    assert g.inverse().compose(g) == IDENT
    assert g.compose(IDENT) == g


def test_walsh_profile_identity_examples():
    prof = walsh_profile(IDENT)
    # flipping input 0 always flips output 0
    assert prof.f[0][1] == Fraction(-1)
    assert prof.C[0][1] == Fraction(0)
    # an untouched input never flips output 0
    assert prof.f[0][2] == Fraction(1)
    assert prof.C[0][2] == Fraction(1)
    # Ctilde concentrates on a = 0 and a = e_i
    for i in range(3):
        for a in range(8):
            expected = Fraction(1, 2) if a in (0, 1 << i) else Fraction(0)
            assert prof.Ctilde[i][a] == expected


def test_walsh_profile_normalization_all_sampled():
    rng = np.random.default_rng(1)
    for _ in range(25):
        g = Gate3(rng.permutation(8))
        prof = walsh_profile(g)
        for i in range(3):
            assert prof.f[i][0] == 1
            assert prof.C[i][0] == 1
            assert sum(prof.Ctilde[i]) == 1


def test_string_transform_parseval():
    rng = np.random.default_rng(2)
    for _ in range(25):
        w = string_transform(Gate3(rng.permutation(8)))
        assert np.allclose((w**2).sum(axis=1), 1.0)
        assert np.allclose((w**2).sum(axis=0), 1.0)


def test_classify_examples():
    assert classify(IDENT) == "linear"
    assert classify(INFL_EXAMPLE) == "inflationary"
    assert classify(INFLATIONARY_GENERATOR_PAIR[1]) == "inflationary"


def test_census_counts():
    census = gate_census()
    assert census.linear == 1344
    assert census.inflationary == 144
    assert census.supernonlinear == 10752
    assert census.other == 40320 - 1344 - 10752


def test_branching_entropy():
    assert branching_entropy(IDENT) == 0.0
    assert branching_entropy(INFL_EXAMPLE) == 0.0
    smax = max(branching_entropy(g) for g in supernonlinear_gates()[:5])
    assert smax == pytest.approx(np.log(4.0))


def test_topologies_reproduce_the_144():
    sets = topology_gate_sets()
    assert {name: len(s) for name, s in sets.items()} == {"A": 24, "B": 24, "C": 48, "D": 48}
    union = inflationary_from_topologies()
    assert len(union) == 144
    brute = frozenset(inflationary_gates())
    assert union == brute
    assert all(classify(g) == "inflationary" for g in list(union)[:10])


def test_topology_constant_is_four_networks():
    assert set(CNOT_TOPOLOGIES) == {"A", "B", "C", "D"}


def test_closure_of_generator_pair():
    group = closure_under_composition(INFLATIONARY_GENERATOR_PAIR)
    assert len(group) == 1344
    assert closure_under_composition([IDENT]) == frozenset([IDENT])


def test_closure_of_144_is_linear_group():
    group = closure_under_composition(inflationary_gates())
    assert len(group) == 1344


def test_144_closed_under_bitline_relabeling():
    infl = frozenset(inflationary_gates())
    import itertools

    for perm in itertools.permutations(range(3)):
        def relabel(x, p=perm):
            return sum(((x >> i) & 1) << p[i] for i in range(3))

        for g in list(infl)[::12]:
            conj = Gate3(tuple(relabel(g(relabel_inv(x, perm))) for x in range(8)))
            assert conj in infl


def relabel_inv(x, perm):
    return sum(((x >> perm[i]) & 1) << i for i in range(3))


def test_recursions_inflationary_set():
    poly = set_average_recursions(inflationary_gates())
    assert poly.s_constant == 0
    assert poly.s_coeffs == (Fraction(0), Fraction(2, 3), Fraction(1, 3))
    assert poly.q_coeffs == {(0, 2): Fraction(2, 3), (0, 3): Fraction(1, 3)}


def test_recursions_supernonlinear_set():
    poly = set_average_recursions(supernonlinear_gates())
    assert poly.s_constant == 0
    assert poly.s_coeffs == (Fraction(3, 7), Fraction(3, 7), Fraction(1, 7))
    assert poly.q_coeffs == {
        (2, 0): Fraction(3, 28),
        (3, 0): Fraction(3, 28),
        (0, 1): Fraction(3, 28),
        (1, 1): Fraction(3, 14),
        (2, 1): Fraction(3, 14),
        (0, 2): Fraction(3, 28),
        (1, 2): Fraction(3, 28),
        (0, 3): Fraction(1, 28),
    }


def test_recursions_identity_set():
    poly = set_average_recursions([IDENT])
    assert poly.s_coeffs == (Fraction(1), Fraction(0), Fraction(0))
    assert poly.q_coeffs == {(0, 1): Fraction(1)}
    assert poly.step_s(Fraction(1, 3)) == Fraction(1, 3)


def test_recursions_probability_conservation_random_sets():
    rng = np.random.default_rng(9)
    for _ in range(5):
        gates = [Gate3(rng.permutation(8)) for _ in range(7)]
        poly = set_average_recursions(gates)
        assert poly.s_constant + sum(poly.s_coeffs) == 1
        assert sum(poly.q_coeffs.values()) == 1


def test_recursions_empty_set_rejected():
    with pytest.raises(ValueError):
        set_average_recursions([])


def test_gates_text_round_trip():
    gates = inflationary_gates()[:5]
    assert gates_from_text(gates_to_text(gates)) == gates
