"""
Generalized Pauli strings on n qudits in the phase-free symplectic encoding.

A string on n qudits of prime local dimension d is stored as a pair of
length-n exponent vectors over F_d,

    g = (u_1, ..., u_n | v_1, ..., v_n),

where u holds the Z exponents and v the X exponents of each site.  Products
of strings are component-wise vector sums mod d, and the commutation phase
omega^r between two strings is recovered from the symplectic form

    r = g1 . Lambda . g2^T = u1.v2 - v1.u2  (mod d).

Global phases are deliberately not tracked: every quantity computed in this
package (weights, supports, crossing relations) is phase-free.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "is_prime",
    "PauliString",
    "SymplecticForm",
    "symplectic_product",
    "multiply",
    "weight",
]

_PRIME_BOUND = 2**31


def is_prime(d: int) -> bool:
    """Trial-division primality test for 2 <= d < 2**31."""
    if d < 2 or d >= _PRIME_BOUND:
        return False
    if d < 4:
        return True
    if d % 2 == 0:
        return False
    f = 3
    while f * f <= d:
        if d % f == 0:
            return False
        f += 2
    return True


def _check_prime(d: int) -> int:
    d = int(d)
    if not is_prime(d):
        raise ValueError(f"local dimension d={d} is not a prime in [2, 2**31)")
    return d


class PauliString:
    """A phase-free Pauli string: exponent vectors (u | v) over F_d on n sites."""

    __slots__ = ("n", "d", "u", "v")

    def __init__(self, u, v, d: int):
        self.d = _check_prime(d)
        u = np.asarray(u, dtype=np.int64) % self.d
        v = np.asarray(v, dtype=np.int64) % self.d
        if u.ndim != 1 or v.ndim != 1 or u.shape != v.shape:
            raise ValueError("u and v must be equal-length 1-d vectors")
        self.n = int(u.shape[0])
        u.setflags(write=False)
        v.setflags(write=False)
        self.u = u
        self.v = v

    @classmethod
    def identity(cls, n: int, d: int) -> "PauliString":
        return cls(np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64), d)

    @classmethod
    def single_site(cls, n: int, d: int, site: int, z_exp: int, x_exp: int) -> "PauliString":
        """The string Z_site^z_exp X_site^x_exp, identity elsewhere."""
        if not 0 <= site < n:
            raise ValueError(f"site {site} out of range for n={n}")
        u = np.zeros(n, dtype=np.int64)
        v = np.zeros(n, dtype=np.int64)
        u[site] = z_exp
        v[site] = x_exp
        return cls(u, v, d)

    @classmethod
    def z_string(cls, mask, n: int, d: int = 2) -> "PauliString":
        """Pure-Z string from an integer bitmask or an exponent vector."""
        if isinstance(mask, (int, np.integer)):
            u = np.array([(int(mask) >> i) & 1 for i in range(n)], dtype=np.int64)
        else:
            u = np.asarray(mask, dtype=np.int64)
        return cls(u, np.zeros(n, dtype=np.int64), d)

    @classmethod
    def x_string(cls, mask, n: int, d: int = 2) -> "PauliString":
        """Pure-X string from an integer bitmask or an exponent vector."""
        if isinstance(mask, (int, np.integer)):
            v = np.array([(int(mask) >> i) & 1 for i in range(n)], dtype=np.int64)
        else:
            v = np.asarray(mask, dtype=np.int64)
        return cls(np.zeros(n, dtype=np.int64), v, d)

    @property
    def vector(self) -> np.ndarray:
        """The length-2n symplectic vector (u | v)."""
        return np.concatenate([self.u, self.v])

    def is_identity(self) -> bool:
        return not (self.u.any() or self.v.any())

    def weight(self) -> int:
        return int(((self.u != 0) | (self.v != 0)).sum())

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliString)
            and self.d == other.d
            and self.n == other.n
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
        )

    def __hash__(self) -> int:
        return hash((self.d, self.n, self.u.tobytes(), self.v.tobytes()))

    def __repr__(self) -> str:
        return f"PauliString({self.to_text()!r})"

    def to_text(self) -> str:
        """Canonical text form, e.g. 'd=3 n=2 1,1|0,0'."""
        us = ",".join(str(int(x)) for x in self.u)
        vs = ",".join(str(int(x)) for x in self.v)
        return f"d={self.d} n={self.n} {us}|{vs}"

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        try:
            dpart, npart, body = text.split()
            d = int(dpart.removeprefix("d="))
            n = int(npart.removeprefix("n="))
            us, vs = body.split("|")
            u = [int(x) for x in us.split(",")] if us else []
            v = [int(x) for x in vs.split(",")] if vs else []
        except (ValueError, AttributeError) as exc:
            raise ValueError(f"malformed Pauli string text {text!r}") from exc
        if len(u) != n or len(v) != n:
            raise ValueError(f"header says n={n} but body has {len(u)}|{len(v)} entries")
        return cls(u, v, d)


class SymplecticForm:
    """The 2m x 2m block form [[0, 1], [-1, 0]] over F_d guiding commutation."""

    def __init__(self, d: int, m: int):
        self.d = _check_prime(d)
        self.m = int(m)
        eye = np.eye(self.m, dtype=np.int64)
        zero = np.zeros((self.m, self.m), dtype=np.int64)
        mat = np.block([[zero, eye], [(-eye) % self.d, zero]])
        mat.setflags(write=False)
        self.matrix = mat

    def product(self, g1: np.ndarray, g2: np.ndarray) -> int:
        """g1 Lambda g2^T mod d for raw length-2m vectors."""
        return int(g1 @ self.matrix @ g2 % self.d)


def _check_compatible(g1: PauliString, g2: PauliString) -> None:
    if g1.d != g2.d:
        raise ValueError(f"field mismatch: d={g1.d} vs d={g2.d}")
    if g1.n != g2.n:
        raise ValueError(f"site-count mismatch: n={g1.n} vs n={g2.n}")


def symplectic_product(g1: PauliString, g2: PauliString) -> int:
    """r in S1 S2 = omega^r S2 S1: bilinear, antisymmetric mod d."""
    _check_compatible(g1, g2)
    return int((g1.u @ g2.v - g1.v @ g2.u) % g1.d)


def multiply(g1: PauliString, g2: PauliString) -> PauliString:
    """Phase-free product: component-wise exponent sum mod d."""
    _check_compatible(g1, g2)
    return PauliString(g1.u + g2.u, g1.v + g2.v, g1.d)


def weight(g: PauliString) -> int:
    """Number of sites carrying a nontrivial local operator."""
    return g.weight()
