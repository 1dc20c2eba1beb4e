"""
The 3-bit reversible gate universe and its scrambling taxonomy.

A gate is a permutation g of {0..7}, acting on inputs encoded as
x = x0 + 2*x1 + 4*x2.  For each output bit i and input-difference pattern
c, the flip spectrum

    f[i][c] = (1/8) sum_x (-1)^{g_i(x) xor g_i(x xor c)}

measures how often output i survives flipping the input bits in c; its
rescaling C = (f+1)/2 is the no-flip fraction and Ctilde is the Walsh
transform of C.  All spectra are exact rationals.

Three families matter for string dynamics:

- linear:        g(x xor y) = g(x) xor g(y) xor g(0); there are 1344.
- inflationary:  linear gates flipping >= 2 output bits for any single
                 input-bit flip; there are 144, and all arise from four
                 CNOT-network topologies under bitline permutations and
                 control polarities (24 + 24 + 48 + 48).
- supernonlinear: maximizers of string-entropy production, i.e. of the mean
                 Shannon entropy of the squared string-transform rows
                 W_{ab} = (1/8) sum_x (-1)^{a.g(x) xor b.x}; there are 10752,
                 each nonzero row spreading uniformly over four strings.

Averaging the Walsh data over a gate family (uniform over gates and output
bits) yields closed one-layer recursions for the mean s and second moment q
of the avalanche variable; the inflationary family gives
s' = (2/3)s^2 + (1/3)s^3 (and the same polynomial in q), the supernonlinear
family gives s' = (3/7)s + (3/7)s^2 + (1/7)s^3 together with its coupled
q recursion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np

__all__ = [
    "Gate3",
    "WalshProfile",
    "RecursionPolynomials",
    "GateCensus",
    "walsh_profile",
    "classify",
    "gate_census",
    "inflationary_gates",
    "supernonlinear_gates",
    "inflationary_from_topologies",
    "closure_under_composition",
    "branching_entropy",
    "string_transform",
    "set_average_recursions",
    "gates_to_text",
    "gates_from_text",
    "CNOT_TOPOLOGIES",
    "INFLATIONARY_GENERATOR_PAIR",
]

_POP = np.array([bin(i).count("1") for i in range(8)], dtype=np.int64)
_SIGN = (-1) ** _POP[np.arange(8)[:, None] & np.arange(8)[None, :]]  # (-1)^{a.c}


class Gate3:
    """A 3-bit reversible gate: a permutation table of {0..7}."""

    __slots__ = ("table",)

    def __init__(self, table: Sequence[int]):
        t = tuple(int(x) for x in table)
        if sorted(t) != list(range(8)):
            raise ValueError(f"table {t} is not a permutation of 0..7")
        self.table = t

    def __call__(self, x: int) -> int:
        return self.table[x]

    def inverse(self) -> "Gate3":
        inv = [0] * 8
        for x, y in enumerate(self.table):
            inv[y] = x
        return Gate3(inv)

    def compose(self, other: "Gate3") -> "Gate3":
        """(self . other)(x) = self(other(x))."""
        return Gate3(tuple(self.table[other.table[x]] for x in range(8)))

    @classmethod
    def identity(cls) -> "Gate3":
        return cls(range(8))

    def __eq__(self, other) -> bool:
        return isinstance(other, Gate3) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"Gate3({' '.join(map(str, self.table))})"


def gates_to_text(gates: Iterable[Gate3]) -> str:
    """Newline-delimited 8-number permutation rows."""
    return "\n".join(" ".join(map(str, g.table)) for g in gates) + "\n"


def gates_from_text(text: str) -> Tuple[Gate3, ...]:
    return tuple(Gate3([int(x) for x in line.split()]) for line in text.splitlines() if line.strip())


# The two permutations whose composition closure is the full linear group.
INFLATIONARY_GENERATOR_PAIR = (
    Gate3((0, 3, 5, 6, 7, 4, 2, 1)),
    Gate3((1, 4, 6, 3, 2, 7, 5, 0)),
)


# ---------------------------------------------------------------------------
# Walsh spectra


def _noflip_counts(table: Sequence[int]) -> np.ndarray:
    """counts[i, c] = #{x : g_i(x) == g_i(x xor c)}, integers in 0..8."""
    g = np.asarray(table, dtype=np.int64)
    out = np.empty((3, 8), dtype=np.int64)
    for c in range(8):
        diff = g ^ g[np.arange(8) ^ c]
        for i in range(3):
            out[i, c] = 8 - int(((diff >> i) & 1).sum())
    return out


@dataclass(frozen=True)
class WalshProfile:
    """Exact flip spectra of a 3-bit gate: f, C = (f+1)/2 and its transform."""

    f: Tuple[Tuple[Fraction, ...], ...]       # 3 x 8
    C: Tuple[Tuple[Fraction, ...], ...]       # 3 x 8
    Ctilde: Tuple[Tuple[Fraction, ...], ...]  # 3 x 8


def walsh_profile(g: Gate3) -> WalshProfile:
    counts = _noflip_counts(g.table)
    f = tuple(tuple(Fraction(2 * int(n) - 8, 8) for n in row) for row in counts)
    C = tuple(tuple(Fraction(int(n), 8) for n in row) for row in counts)
    ct = counts @ _SIGN  # (3,8): sum_c (-1)^{a.c} * 8 C_c
    Ctilde = tuple(tuple(Fraction(int(x), 64) for x in row) for row in ct)
    return WalshProfile(f=f, C=C, Ctilde=Ctilde)


def string_transform(g: Gate3) -> np.ndarray:
    """W_{ab} = (1/8) sum_x (-1)^{a.g(x) xor b.x}, an orthogonal 8x8 matrix."""
    t = np.asarray(g.table)
    return _SIGN[:, t] @ _SIGN / 8.0


def branching_entropy(g: Gate3) -> float:
    """Mean Shannon entropy (nats) of the squared string-transform rows a != 0."""
    p64 = np.rint((string_transform(g) * 8) ** 2).astype(np.int64)
    h = np.zeros(8)
    nz = p64 > 0
    h = -np.where(nz, p64 * (np.log(np.where(nz, p64, 1)) - np.log(64)), 0.0).sum(axis=1) / 64.0
    return float(h[1:].mean())


# ---------------------------------------------------------------------------
# Census over all 40320 gates (vectorized; cached)


@lru_cache(maxsize=1)
def _all_tables() -> np.ndarray:
    return np.array(list(itertools.permutations(range(8))), dtype=np.int64)


def _linear_mask(tables: np.ndarray) -> np.ndarray:
    xor = np.arange(8)[:, None] ^ np.arange(8)[None, :]
    lhs = tables[:, xor]
    rhs = tables[:, :, None] ^ tables[:, None, :] ^ tables[:, 0, None, None]
    return (lhs == rhs).all(axis=(1, 2))


def _inflationary_mask(tables: np.ndarray, linear: np.ndarray) -> np.ndarray:
    mask = linear.copy()
    for c in (1, 2, 4):
        diff = tables ^ tables[:, np.arange(8) ^ c]
        mask &= (_POP[diff] >= 2).all(axis=1)
    return mask


def _max_entropy_mask(tables: np.ndarray) -> np.ndarray:
    """Gates whose every nonzero string-transform row has four (+-1/2)^2 entries."""
    a = _SIGN[:, tables]                          # (8, N, 8)
    w8 = np.einsum("anx,xb->nab", a, _SIGN)       # 8 * W
    p64 = w8.astype(np.int64) ** 2
    return ((p64[:, 1:, :] == 16).sum(axis=2) == 4).all(axis=1)


@dataclass(frozen=True)
class GateCensus:
    """Exhaustive classification of S_8 (counts overlap: inflationary <= linear)."""

    linear: int
    inflationary: int
    supernonlinear: int
    other: int
    criterion: str

    def to_dict(self) -> dict:
        return {
            "linear": self.linear,
            "inflationary": self.inflationary,
            "supernonlinear": self.supernonlinear,
            "other": self.other,
            "criterion": self.criterion,
        }


@lru_cache(maxsize=1)
def _census_masks() -> tuple:
    tables = _all_tables()
    linear = _linear_mask(tables)
    infl = _inflationary_mask(tables, linear)
    sup = _max_entropy_mask(tables)
    return tables, linear, infl, sup


def gate_census() -> GateCensus:
    tables, linear, infl, sup = _census_masks()
    n_lin, n_inf, n_sup = int(linear.sum()), int(infl.sum()), int(sup.sum())
    return GateCensus(
        linear=n_lin,
        inflationary=n_inf,
        supernonlinear=n_sup,
        other=len(tables) - n_lin - n_sup,
        criterion="max mean row entropy of the squared string transform",
    )


@lru_cache(maxsize=1)
def inflationary_gates() -> Tuple[Gate3, ...]:
    tables, _, infl, _ = _census_masks()
    return tuple(Gate3(t) for t in tables[infl].tolist())


@lru_cache(maxsize=1)
def supernonlinear_gates() -> Tuple[Gate3, ...]:
    tables, _, _, sup = _census_masks()
    return tuple(Gate3(t) for t in tables[sup].tolist())


def classify(g: Gate3) -> str:
    """One of 'inflationary', 'linear', 'supernonlinear_candidate', 'other'.

    'inflationary' implies linear; census totals count it under both.
    """
    t = np.asarray(g.table, dtype=np.int64)[None, :]
    if _linear_mask(t)[0]:
        return "inflationary" if _inflationary_mask(t, np.array([True]))[0] else "linear"
    if _max_entropy_mask(t)[0]:
        return "supernonlinear_candidate"
    return "other"


# ---------------------------------------------------------------------------
# CNOT-network generation of the 144 inflationary gates
#
# Each topology is a sequence of (control, target) wire pairs.  Varying the
# bitline labels (6 permutations) and the control polarity of each CNOT
# produces 24 gates from A and B and 48 from C and D; the union is exactly
# the inflationary family.

CNOT_TOPOLOGIES: Dict[str, Tuple[Tuple[int, int], ...]] = {
    "A": ((0, 1), (0, 2), (1, 0), (2, 0)),
    "B": ((0, 1), (1, 2), (2, 0), (0, 1)),
    "C": ((0, 1), (1, 2), (2, 0)),
    "D": ((0, 1), (2, 0), (1, 2)),
}


def _network_gate(seq, wires, polarity) -> Gate3:
    table = []
    for x in range(8):
        y = x
        for (c, t), p in zip(seq, polarity):
            if ((y >> wires[c]) & 1) ^ p:
                y ^= 1 << wires[t]
        table.append(y)
    return Gate3(table)


def topology_gate_sets() -> Dict[str, frozenset]:
    """Deduplicated gate set generated by each topology."""
    out = {}
    for name, seq in CNOT_TOPOLOGIES.items():
        gates = set()
        for wires in itertools.permutations(range(3)):
            for pol in itertools.product((0, 1), repeat=len(seq)):
                gates.add(_network_gate(seq, wires, pol))
        out[name] = frozenset(gates)
    return out


def inflationary_from_topologies() -> frozenset:
    """Union of the four topology orbits; set-equal to the brute-force 144."""
    sets = topology_gate_sets()
    return frozenset().union(*sets.values())


def closure_under_composition(generators: Iterable[Gate3]) -> frozenset:
    """Group closure of the generators under (g . h)(x) = g(h(x))."""
    gens = list(generators)
    if not gens:
        return frozenset()
    seen = set(gens)
    frontier = list(gens)
    while frontier:
        e = frontier.pop()
        for g in gens:
            for h in (e.compose(g), g.compose(e)):
                if h not in seen:
                    seen.add(h)
                    frontier.append(h)
    return frozenset(seen)


# ---------------------------------------------------------------------------
# Set-averaged one-layer recursions for the avalanche moments
#
# The one-layer map for the no-flip variable s = 2p - 1 of an output bit is
#   s' = sum_a Ft_a prod_k s_k^{a_k},   Ft_a = (1/8) sum_c (-1)^{a.c} f_c,
# the Walsh transform of f (equal to 2*Ctilde_a for a != 0).  Averaging over
# a gate family and over the three output bits, with the three inputs drawn
# independently, closes the map on the moments (s, q) = (mean, second moment):
#   s' = sum_a <Ft_a> s^{|a|}
#   q' = sum_{a,b} <Ft_a Ft_b> s^{|a xor b|} q^{|a and b|}.


@dataclass(frozen=True)
class RecursionPolynomials:
    """Exact one-layer moment maps: s' in powers of s; q' in monomials s^j q^k."""

    s_coeffs: Tuple[Fraction, Fraction, Fraction]       # coefficients of s, s^2, s^3
    q_coeffs: Dict[Tuple[int, int], Fraction]           # (j, k) -> coeff of s^j q^k
    s_constant: Fraction = Fraction(0)

    def __post_init__(self):
        if self.s_constant + sum(self.s_coeffs) != 1:
            raise ValueError("s-map must fix s = 1")
        if sum(self.q_coeffs.values()) != 1:
            raise ValueError("q-map must fix s = q = 1")

    def step_s(self, s):
        c1, c2, c3 = self.s_coeffs
        return self.s_constant + c1 * s + c2 * s * s + c3 * s * s * s

    def step_q(self, s, q):
        tot = 0
        for (j, k), coeff in self.q_coeffs.items():
            tot += coeff * s**j * q**k
        return tot

    def step(self, s, q):
        return self.step_s(s), self.step_q(s, q)


def _f_walsh64(tables: np.ndarray) -> np.ndarray:
    """64 * Ft[g, i, a], the integer Walsh transform of the flip spectrum."""
    n = len(tables)
    f8 = np.empty((n, 3, 8), dtype=np.int64)
    for c in range(8):
        diff = tables ^ tables[:, np.arange(8) ^ c]
        for i in range(3):
            f8[:, i, c] = 8 - 2 * ((diff >> i) & 1).sum(axis=1)
    return np.einsum("gic,ca->gia", f8, _SIGN)


def set_average_recursions(gates: Iterable[Gate3]) -> RecursionPolynomials:
    """Average the Walsh data uniformly over the gates and the 3 output bits."""
    gate_list = list(gates)
    if not gate_list:
        raise ValueError("gate set is empty")
    tables = np.array([g.table for g in gate_list], dtype=np.int64)
    ft = _f_walsh64(tables)
    den_s = len(gate_list) * 3 * 64

    per_a = ft.sum(axis=(0, 1))  # (8,)
    s_terms = [Fraction(0)] * 4
    for a in range(8):
        s_terms[int(_POP[a])] += Fraction(int(per_a[a]), den_s)

    flat = ft.reshape(-1, 8)
    cross = flat.T @ flat        # (8,8): sum over (g,i) of Ft_a Ft_b (x 64^2)
    den_q = len(gate_list) * 3 * 64 * 64
    q_coeffs: Dict[Tuple[int, int], Fraction] = {}
    for a in range(8):
        for b in range(8):
            key = (int(_POP[a ^ b]), int(_POP[a & b]))
            q_coeffs[key] = q_coeffs.get(key, Fraction(0)) + Fraction(int(cross[a, b]), den_q)
    q_coeffs = {k: v for k, v in q_coeffs.items() if v != 0}

    return RecursionPolynomials(
        s_coeffs=(s_terms[1], s_terms[2], s_terms[3]),
        q_coeffs=q_coeffs,
        s_constant=s_terms[0],
    )
