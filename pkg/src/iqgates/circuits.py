"""
Circuit wirings and classical reversible circuits.

A Wiring is a list of layers; each layer is a list of disjoint k-tuples of
line indices.  Tree wirings group lines that differ in a single base-k digit
(digit position cycling with depth), which makes consecutive layers pull in
lines from disjoint branches; brickwork wirings are the 1-d staircase with
open boundaries.

A ClassicalCircuit binds a k=3 wiring to one 3-bit gate per slot.  Gate
inputs map lsb-first onto the slot tuple: for slot (i, j, k) the gate sees
x_i + 2 x_j + 4 x_k.  Line 0 is the least significant bit of an integer
input.  Circuits evaluate on Python ints (any n) or on uint8 bit matrices
(vectorized over a batch), and invert exactly.

The three-stage cipher stacks ceil(log2 n) layers of inflationary gates, a
log3 n supernonlinear core, and another inflationary stage, each on its own
independently permuted ternary tree, with all gate draws and permutations
derived deterministically from one master seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .gates3 import Gate3, inflationary_gates, supernonlinear_gates

__all__ = [
    "Wiring",
    "ClassicalCircuit",
    "tree_wiring",
    "permute_wiring",
    "brickwork_wiring",
    "random_wiring",
    "build_three_stage_cipher",
    "random_tree_circuit",
]

Layer = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class Wiring:
    """Layered grouping of lines into disjoint k-tuples."""

    n: int
    k: int
    layers: Tuple[Layer, ...]

    def __post_init__(self):
        for li, layer in enumerate(self.layers):
            flat = [i for tup in layer for i in tup]
            if len(set(flat)) != len(flat):
                raise ValueError(f"layer {li} has overlapping tuples")
            if flat and (min(flat) < 0 or max(flat) >= self.n):
                raise ValueError(f"layer {li} has line indices outside [0, {self.n})")
            if any(len(tup) != self.k for tup in layer):
                raise ValueError(f"layer {li} has a tuple of arity != {self.k}")

    @property
    def n_layers(self) -> int:
        return len(self.layers)


def tree_wiring(n: int, k: int, layers: int) -> Wiring:
    """
    Hierarchical tree wiring: layer l groups indices differing only in
    base-k digit (l-1); past q = log_k n layers the digit position recycles.
    """
    if k < 2:
        raise ValueError("tree degree k must be >= 2")
    q = round(math.log(n, k))
    if k**q != n:
        raise ValueError(f"n={n} is not a power of k={k}")
    out = []
    for layer in range(1, layers + 1):
        digit = (layer - 1) % q
        step = k**digit
        tuples = []
        for base in range(n):
            if (base // step) % k == 0:
                tuples.append(tuple(base + j * step for j in range(k)))
        out.append(tuple(tuples))
    return Wiring(n=n, k=k, layers=tuple(out))


def permute_wiring(w: Wiring, pi: Sequence[int]) -> Wiring:
    """Relabel every line index i as pi[i]."""
    pi = list(pi)
    if sorted(pi) != list(range(w.n)):
        raise ValueError("pi is not a permutation of the line indices")
    layers = tuple(
        tuple(tuple(pi[i] for i in tup) for tup in layer) for layer in w.layers
    )
    return Wiring(n=w.n, k=w.k, layers=layers)


def brickwork_wiring(n: int, layers: int) -> Wiring:
    """1-d staircase of 2-site gates with open boundaries."""
    if n % 2:
        raise ValueError("brickwork wiring needs even n")
    odd = tuple((i, i + 1) for i in range(0, n - 1, 2))
    even = tuple((i, i + 1) for i in range(1, n - 1, 2))
    return Wiring(n=n, k=2, layers=tuple(odd if l % 2 == 0 else even for l in range(layers)))


def random_wiring(n: int, k: int, layers: int, rng: np.random.Generator) -> Wiring:
    """Random disjoint k-tuples per layer (floor(n/k) of them)."""
    out = []
    for _ in range(layers):
        perm = rng.permutation(n)
        m = (n // k) * k
        out.append(tuple(tuple(int(x) for x in perm[i : i + k]) for i in range(0, m, k)))
    return Wiring(n=n, k=k, layers=tuple(out))


class ClassicalCircuit:
    """A k=3 wiring with one Gate3 per slot, evaluating a bijection on n bits."""

    def __init__(self, wiring: Wiring, gates: Sequence[Sequence[Gate3]],
                 stages: Optional[Sequence[str]] = None):
        if wiring.k != 3:
            raise ValueError("classical circuits use 3-bit gates (wiring arity 3)")
        if len(gates) != wiring.n_layers:
            raise ValueError("need one gate row per wiring layer")
        for layer, row in zip(wiring.layers, gates):
            if len(row) != len(layer):
                raise ValueError("gate count must match slot count in every layer")
        self.wiring = wiring
        self.gates = tuple(tuple(row) for row in gates)
        self.stages = tuple(stages) if stages is not None else None
        self.n = wiring.n
        # per-layer arrays for the vectorized evaluator
        self._lines = [np.array(layer, dtype=np.int64) for layer in wiring.layers]
        self._tables = [np.array([g.table for g in row], dtype=np.uint8) for row in self.gates]

    @property
    def n_layers(self) -> int:
        return self.wiring.n_layers

    def evaluate(self, x: int, upto_layer: Optional[int] = None) -> int:
        """Apply gate layers 1..upto_layer (default all) to an integer input."""
        if not 0 <= x < (1 << self.n):
            raise ValueError(f"input {x} out of range for n={self.n}")
        upto = self.n_layers if upto_layer is None else upto_layer
        if not 0 <= upto <= self.n_layers:
            raise ValueError(f"layer count {upto} out of range")
        for layer, row in zip(self.wiring.layers[:upto], self.gates[:upto]):
            for (i, j, k), gate in zip(layer, row):
                idx = ((x >> i) & 1) | (((x >> j) & 1) << 1) | (((x >> k) & 1) << 2)
                out = gate.table[idx]
                x &= ~((1 << i) | (1 << j) | (1 << k))
                x |= (out & 1) << i | ((out >> 1) & 1) << j | ((out >> 2) & 1) << k
        return x

    def evaluate_bits(self, bits: np.ndarray, upto_layer: Optional[int] = None) -> np.ndarray:
        """Vectorized evaluation on a (batch, n) uint8 bit matrix (lsb at column 0)."""
        upto = self.n_layers if upto_layer is None else upto_layer
        out = np.array(bits, dtype=np.uint8, copy=True)
        for l in range(upto):
            self._apply_layer(out, l)
        return out

    def _apply_layer(self, bits: np.ndarray, l: int) -> None:
        lines = self._lines[l]
        if lines.size == 0:
            return
        tables = self._tables[l]
        idx = (
            bits[:, lines[:, 0]].astype(np.int64)
            | (bits[:, lines[:, 1]].astype(np.int64) << 1)
            | (bits[:, lines[:, 2]].astype(np.int64) << 2)
        )
        out = tables[np.arange(len(lines))[None, :], idx]
        bits[:, lines[:, 0]] = out & 1
        bits[:, lines[:, 1]] = (out >> 1) & 1
        bits[:, lines[:, 2]] = (out >> 2) & 1

    def inverse(self) -> "ClassicalCircuit":
        """Layers reversed, every gate table inverted."""
        layers = tuple(reversed(self.wiring.layers))
        gates = tuple(tuple(g.inverse() for g in row) for row in reversed(self.gates))
        stages = tuple(reversed(self.stages)) if self.stages is not None else None
        return ClassicalCircuit(Wiring(self.n, 3, layers), gates, stages)

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "stages": list(self.stages) if self.stages is not None else None,
            "layers": [
                [[list(tup), list(g.table)] for tup, g in zip(layer, row)]
                for layer, row in zip(self.wiring.layers, self.gates)
            ],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "ClassicalCircuit":
        payload = json.loads(text)
        layers = tuple(tuple(tuple(slot[0]) for slot in layer) for layer in payload["layers"])
        gates = tuple(tuple(Gate3(slot[1]) for slot in layer) for layer in payload["layers"])
        stages = payload.get("stages")
        return cls(Wiring(payload["n"], 3, layers), gates, stages)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ClassicalCircuit)
            and self.wiring == other.wiring
            and self.gates == other.gates
            and self.stages == other.stages
        )


def _stage_rng(seed, stage: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stage,)))


def _slot_gate(seed, stage: int, layer: int, slot: int, family: Sequence[Gate3]) -> Gate3:
    # one derived stream per slot keeps construction order-independent
    state = np.random.SeedSequence(seed, spawn_key=(stage, layer, slot)).generate_state(2)
    idx = int((int(state[0]) << 32 | int(state[1])) % len(family))
    return family[idx]


def random_tree_circuit(n: int, n_layers: int, family: Sequence[Gate3], seed,
                        stage: int = 0, label: str = "N") -> ClassicalCircuit:
    """Ternary tree stage: permuted tree wiring, uniform per-slot gate draws."""
    base = tree_wiring(n, 3, n_layers)
    pi = _stage_rng(seed, stage).permutation(n)
    wiring = permute_wiring(base, [int(x) for x in pi])
    gates = tuple(
        tuple(_slot_gate(seed, stage, l, s, family) for s in range(len(layer)))
        for l, layer in enumerate(wiring.layers)
    )
    return ClassicalCircuit(wiring, gates, stages=(label,) * n_layers)


def build_three_stage_cipher(n: int, seed) -> ClassicalCircuit:
    """
    The log-depth cipher L_l -> N -> L_r on n = 3^q lines: inflationary
    bookends of ceil(log2 n) layers around a log3 n supernonlinear core,
    each stage on an independently permuted ternary tree.
    """
    q = round(math.log(n, 3))
    if 3**q != n:
        raise ValueError(f"cipher needs n to be a power of 3, got {n}")
    depth_l = math.ceil(math.log2(n))
    infl = inflationary_gates()
    sup = supernonlinear_gates()
    stages = [
        random_tree_circuit(n, depth_l, infl, seed, stage=0, label="L_l"),
        random_tree_circuit(n, q, sup, seed, stage=1, label="N"),
        random_tree_circuit(n, depth_l, infl, seed, stage=2, label="L_r"),
    ]
    layers = tuple(l for st in stages for l in st.wiring.layers)
    gates = tuple(r for st in stages for r in st.gates)
    labels = tuple(s for st in stages for s in st.stages)
    return ClassicalCircuit(Wiring(n, 3, layers), gates, stages=labels)
