import math

import numpy as np
import pytest

from iqgates.circuits import (
    ClassicalCircuit,
    Wiring,
    brickwork_wiring,
    build_three_stage_cipher,
    permute_wiring,
    random_tree_circuit,
    random_wiring,
    tree_wiring,
)
from iqgates.gates3 import Gate3, inflationary_gates, supernonlinear_gates


def test_tree_wiring_binary_layer1():
    w = tree_wiring(8, 2, 1)
    assert w.layers[0] == ((0, 1), (2, 3), (4, 5), (6, 7))


def test_tree_wiring_ternary_paper_layers():
    w = tree_wiring(27, 3, 3)
    assert w.layers[0][:3] == ((0, 1, 2), (3, 4, 5), (6, 7, 8))
    assert w.layers[1][:3] == ((0, 3, 6), (1, 4, 7), (2, 5, 8))
    assert w.layers[2][0] == (0, 9, 18)


def test_tree_wiring_recycles():
    w = tree_wiring(9, 3, 5)
    assert w.layers[2] == w.layers[0]
    assert w.layers[3] == w.layers[1]  # layer 2q recycles layer q
    assert w.layers[4] == w.layers[0]


def test_tree_wiring_same_tuple_differs_in_one_digit():
    w = tree_wiring(27, 3, 3)
    for l, layer in enumerate(w.layers):
        for tup in layer:
            digits = [[(x // 3**p) % 3 for p in range(3)] for x in tup]
            diffs = [p for p in range(3) if len({d[p] for d in digits}) > 1]
            assert diffs == [l]


def test_tree_wiring_rejects_non_power():
    with pytest.raises(ValueError):
        tree_wiring(10, 3, 1)


def test_permute_wiring():
    w = tree_wiring(8, 2, 1)
    assert permute_wiring(w, range(8)) == w
    rev = permute_wiring(w, list(reversed(range(8))))
    assert rev.layers[0] == ((7, 6), (5, 4), (3, 2), (1, 0))
    with pytest.raises(ValueError):
        permute_wiring(w, [0] * 8)


def test_permute_wiring_keeps_partition_property():
    rng = np.random.default_rng(0)
    w = tree_wiring(27, 3, 4)
    pw = permute_wiring(w, [int(x) for x in rng.permutation(27)])
    for layer in pw.layers:
        flat = [i for tup in layer for i in tup]
        assert sorted(flat) == list(range(27))


def test_brickwork_wiring():
    w = brickwork_wiring(6, 2)
    assert w.layers[0] == ((0, 1), (2, 3), (4, 5))
    assert w.layers[1] == ((1, 2), (3, 4))
    with pytest.raises(ValueError):
        brickwork_wiring(5, 1)


def test_random_wiring_disjoint():
    rng = np.random.default_rng(3)
    w = random_wiring(16, 3, 4, rng)
    for layer in w.layers:
        flat = [i for tup in layer for i in tup]
        assert len(flat) == len(set(flat)) == 15


def test_wiring_validation():
    with pytest.raises(ValueError):
        Wiring(4, 2, (((0, 1), (1, 2)),))       # overlap
    with pytest.raises(ValueError):
        Wiring(4, 2, (((0, 7),),))              # out of range
    with pytest.raises(ValueError):
        Wiring(4, 2, (((0, 1, 2),),))           # arity mismatch


def test_evaluate_single_gate_example():
    w = Wiring(3, 3, (((0, 1, 2),),))
    circ = ClassicalCircuit(w, ((Gate3((0, 3, 5, 6, 7, 4, 2, 1)),),))
    assert circ.evaluate(1) == 3
    # all-identity circuit is the identity map
    ident = ClassicalCircuit(w, ((Gate3.identity(),),))
    assert all(ident.evaluate(x) == x for x in range(8))


def test_evaluate_round_trip_and_bits_agree():
    circ = random_tree_circuit(27, 5, supernonlinear_gates(), seed=5)
    inv = circ.inverse()
    rng = np.random.default_rng(7)
    xs = rng.integers(0, 1 << 27, 20)
    for x in xs:
        y = circ.evaluate(int(x))
        assert inv.evaluate(y) == int(x)
    bits = ((xs[:, None] >> np.arange(27)[None, :]) & 1).astype(np.uint8)
    out_bits = circ.evaluate_bits(bits)
    out_ints = (out_bits.astype(np.int64) << np.arange(27)[None, :]).sum(axis=1)
    assert [circ.evaluate(int(x)) for x in xs] == out_ints.tolist()


def test_evaluate_prefix_consistency():
    circ = random_tree_circuit(9, 4, inflationary_gates(), seed=11)
    x = 137
    for l in range(circ.n_layers):
        partial = circ.evaluate(x, upto_layer=l)
        one_more = ClassicalCircuit(
            Wiring(9, 3, (circ.wiring.layers[l],)), (circ.gates[l],)
        ).evaluate(partial)
        assert one_more == circ.evaluate(x, upto_layer=l + 1)


def test_evaluate_range_errors():
    circ = random_tree_circuit(9, 1, inflationary_gates(), seed=1)
    with pytest.raises(ValueError):
        circ.evaluate(1 << 9)
    with pytest.raises(ValueError):
        circ.evaluate(0, upto_layer=5)


def test_cipher_structure():
    circ = build_three_stage_cipher(27, seed=42)
    depth_l = math.ceil(math.log2(27))
    assert circ.stages.count("N") == 3
    assert circ.stages.count("L_l") == depth_l == 5
    assert circ.stages.count("L_r") == depth_l
    infl = set(inflationary_gates())
    sup = set(supernonlinear_gates())
    for label, row in zip(circ.stages, circ.gates):
        family = sup if label == "N" else infl
        assert all(g in family for g in row)


def test_cipher_determinism_and_seed_sensitivity():
    a = build_three_stage_cipher(27, seed=42)
    b = build_three_stage_cipher(27, seed=42)
    c = build_three_stage_cipher(27, seed=43)
    assert a == b
    assert a != c
    assert a.to_json() == b.to_json()


def test_cipher_rejects_bad_n():
    with pytest.raises(ValueError):
        build_three_stage_cipher(16, seed=0)


def test_cipher_bijective_small():
    circ = build_three_stage_cipher(9, seed=3)
    outs = {circ.evaluate(x) for x in range(1 << 9)}
    assert len(outs) == 1 << 9


def test_tree_inputs_from_disjoint_branches():
    # for l <= log3 n, the inputs feeding a layer-(l+1) gate trace back to
    # disjoint sets of circuit inputs
    n = 27
    circ = random_tree_circuit(n, 3, supernonlinear_gates(), seed=9)
    reach = [{i} for i in range(n)]
    for layer in circ.wiring.layers:
        new = [set(s) for s in reach]
        for tup in layer:
            merged = set().union(*(reach[i] for i in tup))
            for i in tup:
                new[i] = merged
            assert sum(len(reach[i]) for i in tup) == len(merged)
        reach = new


def test_circuit_json_round_trip():
    circ = build_three_stage_cipher(9, seed=8)
    again = ClassicalCircuit.from_json(circ.to_json())
    assert again == circ
    x = 400
    assert again.evaluate(x) == circ.evaluate(x)
