"""
Two-qudit Clifford gates as 4x4 symplectic matrices over F_d.

A gate is the matrix M of its conjugation action on symplectic vectors,
g -> g.M (row vector times matrix, mod d), in the basis order
(Z_1, Z_2, X_1, X_2).  M preserves the block form Lambda = [[0,1],[-1,0]],
equivalently it preserves all commutation relations.

An *inflationary* gate sends every nontrivial single-site string to a
weight-2 string.  No such gate exists for d = 2 (verified here by exhaustive
search over all 720 elements of Sp(4,2)); for every prime d >= 3 one is
constructed explicitly from four generator images solving the commutation
constraints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .pauli import PauliString, SymplecticForm, _check_prime

__all__ = [
    "SymplecticGate",
    "NoQubitInflationaryError",
    "NoGoReport",
    "conjugate",
    "is_inflationary",
    "construct_inflationary",
    "enumerate_symplectic",
    "qubit_no_go_report",
    "swap_gate",
    "identity_gate",
]


class NoQubitInflationaryError(ValueError):
    """Raised when an inflationary gate is requested for d = 2."""


class SymplecticGate:
    """A 2-qudit Clifford gate in its symplectic representation."""

    __slots__ = ("d", "m", "matrix")

    def __init__(self, matrix, d: int, m: int = 2):
        self.d = _check_prime(d)
        self.m = int(m)
        mat = np.asarray(matrix, dtype=np.int64) % self.d
        if mat.shape != (2 * self.m, 2 * self.m):
            raise ValueError(f"expected a {2 * self.m}x{2 * self.m} matrix, got {mat.shape}")
        lam = SymplecticForm(self.d, self.m).matrix
        if not np.array_equal(mat.T @ lam @ mat % self.d, lam % self.d):
            raise ValueError("matrix does not preserve the symplectic form mod d")
        mat.setflags(write=False)
        self.matrix = mat

    def conjugate(self, g: PauliString) -> PauliString:
        return conjugate(self, g)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymplecticGate)
            and self.d == other.d
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.d, self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"SymplecticGate(d={self.d}, rows={self.matrix.tolist()})"

    def to_text(self) -> str:
        """Serialize as 'd=<d> <16 field elements, row-major>'."""
        body = ",".join(str(int(x)) for x in self.matrix.ravel())
        return f"d={self.d} {body}"

    @classmethod
    def from_text(cls, text: str) -> "SymplecticGate":
        try:
            dpart, body = text.split()
            d = int(dpart.removeprefix("d="))
            vals = [int(x) for x in body.split(",")]
        except (ValueError, AttributeError) as exc:
            raise ValueError(f"malformed gate text {text!r}") from exc
        side = int(round(len(vals) ** 0.5))
        if side * side != len(vals) or side % 2:
            raise ValueError(f"gate text body has {len(vals)} entries, expected a square count")
        return cls(np.array(vals).reshape(side, side), d, m=side // 2)


def identity_gate(d: int) -> SymplecticGate:
    return SymplecticGate(np.eye(4, dtype=np.int64), d)


def swap_gate(d: int) -> SymplecticGate:
    """Exchange the two sites: swaps (u1,u2) and (v1,v2) blocks."""
    m = np.zeros((4, 4), dtype=np.int64)
    m[0, 1] = m[1, 0] = m[2, 3] = m[3, 2] = 1
    return SymplecticGate(m, d)


def conjugate(gate: SymplecticGate, g: PauliString) -> PauliString:
    """Heisenberg action on a 2-site string: (u|v) -> (u|v) . M mod d."""
    if g.d != gate.d:
        raise ValueError(f"field mismatch: gate d={gate.d}, string d={g.d}")
    if g.n != gate.m:
        raise ValueError(f"string must live on the gate's {gate.m} sites, got n={g.n}")
    out = g.vector @ gate.matrix % gate.d
    return PauliString(out[: gate.m], out[gate.m :], gate.d)


def _single_site_vectors(d: int, m: int = 2) -> np.ndarray:
    """All 2m(d^2-1) nontrivial single-site (u|v) vectors, as rows."""
    vecs = []
    for site in range(m):
        for uz in range(d):
            for vx in range(d):
                if uz == 0 and vx == 0:
                    continue
                row = np.zeros(2 * m, dtype=np.int64)
                row[site] = uz
                row[m + site] = vx
                vecs.append(row)
    return np.array(vecs)


def is_inflationary(gate: SymplecticGate) -> bool:
    """True iff every nontrivial weight-1 string maps to a weight-2 string."""
    d, m = gate.d, gate.m
    imgs = _single_site_vectors(d, m) @ gate.matrix % d
    nontrivial = (imgs[:, :m] != 0) | (imgs[:, m:] != 0)
    return bool((nontrivial.sum(axis=1) == 2).all())


def _inverse_mod(a: int, d: int) -> int:
    return pow(int(a) % d, -1, d)


def construct_inflationary(d: int) -> SymplecticGate:
    """
    Build an inflationary 2-qudit Clifford gate for prime d >= 3.

    The four generator images are fixed by solving the commutation
    constraints in three steps: (1) split 1 = a + b symmetrically, giving
    the X_1 image (0,0 | x,x) with x = 2^{-1} mod d; (2) pick the X_2 image
    (0,0 | 1, d-1); (3) the Z_2 image then follows from the two remaining
    linear equations.  The images are the rows of the symplectic matrix in
    basis order (Z_1, Z_2, X_1, X_2).
    """
    d = _check_prime(d)
    if d == 2:
        raise NoQubitInflationaryError(
            "no 2-qubit gate can map every weight-1 string to weight 2"
        )
    x = _inverse_mod(2, d)          # solves 2x = 1 mod d
    g1 = (1, 1, 0, 0)               # image of Z_1
    g2 = (0, 0, x, x)               # image of X_1
    g3 = (x, (d - x) % d, 0, 0)     # image of Z_2
    g4 = (0, 0, 1, d - 1)           # image of X_2
    mat = np.array([g1, g3, g2, g4], dtype=np.int64)
    gate = SymplecticGate(mat, d)   # constructor re-verifies M^T Lambda M = Lambda
    if not is_inflationary(gate):
        raise AssertionError(f"constructed d={d} gate failed the inflationary check")
    return gate


@lru_cache(maxsize=None)
def _symplectic_matrices(d: int) -> np.ndarray:
    """All 4x4 symplectic matrices over F_d, stacked (count, 4, 4)."""
    d = _check_prime(d)
    if d > 3:
        raise ValueError(
            f"exhaustive Sp(4,{d}) enumeration is not supported (group too large); "
            "supported d: 2, 3"
        )
    vecs = np.array(list(itertools.product(range(d), repeat=4)), dtype=np.int64)
    lam = SymplecticForm(d, 2).matrix
    prod = vecs @ lam @ vecs.T % d          # pairwise symplectic products
    nonzero = vecs.any(axis=1)
    mats = []
    for i1 in np.nonzero(nonzero)[0]:
        for j1 in np.nonzero(prod[i1] == 1)[0]:
            comp = np.nonzero((prod[i1] == 0) & (prod[j1] == 0) & nonzero)[0]
            sub = prod[np.ix_(comp, comp)]
            for a, b in zip(*np.nonzero(sub == 1)):
                mats.append((i1, comp[a], j1, comp[b]))   # rows Z1, Z2, X1, X2
    rows = np.array(mats)
    out = vecs[rows]                        # (count, 4, 4)
    out.setflags(write=False)
    return out


def enumerate_symplectic(d: int) -> Iterator[SymplecticGate]:
    """Yield every 4x4 symplectic matrix over F_d exactly once (d in {2, 3})."""
    for mat in _symplectic_matrices(d):
        yield SymplecticGate(mat, d)


def _inflationary_mask(d: int) -> np.ndarray:
    mats = _symplectic_matrices(d)
    singles = _single_site_vectors(d)
    imgs = np.einsum("sv,gvw->gsw", singles, mats) % d
    nontrivial = (imgs[:, :, :2] != 0) | (imgs[:, :, 2:] != 0)
    return (nontrivial.sum(axis=2) == 2).all(axis=1)


@dataclass
class NoGoReport:
    """Result of the exhaustive inflationary search over Sp(4,d)."""

    d: int
    total_gates: int
    inflationary_count: int
    witness: Optional[SymplecticGate] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "total_gates": self.total_gates,
            "inflationary_count": self.inflationary_count,
            "witness": self.witness.to_text() if self.witness is not None else None,
        }


def qubit_no_go_report(d: int = 2) -> NoGoReport:
    """
    Exhaustively test every 4x4 symplectic gate over F_d for the inflationary
    property.  For d = 2 the count is zero (no 2-qubit inflationary Clifford
    gate exists); for d = 3 the report carries a witness.
    """
    mats = _symplectic_matrices(d)
    mask = _inflationary_mask(d)
    count = int(mask.sum())
    witness = None
    if count:
        witness = SymplecticGate(mats[int(np.nonzero(mask)[0][0])], d)
    return NoGoReport(d=d, total_gates=len(mats), inflationary_count=count, witness=witness)
