"""Exact linear algebra: over tower fields (raw values), over Q, and over Z."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

__all__ = [
    "field_det",
    "field_nullspace",
    "rational_nullspace",
    "integer_kernel",
    "hnf",
    "primitive",
    "ZLattice",
    "relation_lattice_from_coords",
]


# --- over a tower field ---------------------------------------------------------

def field_det(F, rows):
    n = len(rows)
    if n == 0:
        return F.one
    a = [list(r) for r in rows]
    det = F.one
    for col in range(n):
        piv = next((i for i in range(col, n) if not F.is_zero(a[i][col])), None)
        if piv is None:
            return F.zero
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = F.neg(det)
        p = a[col][col]
        det = F.mul(det, p)
        inv = F.inv(p)
        for i in range(col + 1, n):
            if F.is_zero(a[i][col]):
                continue
            f = F.mul(a[i][col], inv)
            for j in range(col, n):
                a[i][j] = F.sub(a[i][j], F.mul(f, a[col][j]))
    return det


def field_rref(F, rows, ncols):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if not F.is_zero(a[i][col])), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = F.inv(a[r][col])
        a[r] = [F.mul(v, inv) for v in a[r]]
        for i in range(len(a)):
            if i != r and not F.is_zero(a[i][col]):
                f = a[i][col]
                a[i] = [F.sub(v, F.mul(f, w)) for v, w in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def field_nullspace(F, rows, ncols):
    """Basis of {v : M v = 0} for an m x ncols matrix of raws."""
    red, pivots = field_rref(F, rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [F.zero] * ncols
        v[fc] = F.one
        for row, pc in zip(red, pivots):
            v[pc] = F.neg(row[fc])
        basis.append(v)
    return basis


# --- over Q -----------------------------------------------------------------------

def rational_nullspace(rows, ncols):
    """Basis of {v in Q^ncols : M v = 0}; entries are Fractions."""
    a = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        a[r] = [v / p for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    basis = []
    for fc in range(ncols):
        if fc in pivots:
            continue
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(a[:r], pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def primitive(v):
    """Scale a rational vector to a primitive integer vector."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints


# --- over Z -----------------------------------------------------------------------

def _echelon(a, u=None):
    """Integer row echelon by unimodular row operations (in place).

    Returns the number of nonzero rows; ``u`` receives the same operations.
    """
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        while True:
            nz = [i for i in range(r, nrows) if a[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i][col]))
            a[r], a[i0] = a[i0], a[r]
            if u is not None:
                u[r], u[i0] = u[i0], u[r]
            clean = True
            for i in range(r + 1, nrows):
                if a[i][col]:
                    q = a[i][col] // a[r][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if u is not None:
                        u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if a[i][col]:
                        clean = False
            if clean:
                r += 1
                break
    return r


def hnf(rows):
    """Row Hermite normal form of the lattice spanned by ``rows`` (zero rows dropped)."""
    a = [list(map(int, r)) for r in rows if any(r)]
    if not a:
        return []
    rank = _echelon(a)
    a = a[:rank]
    pivots = []
    for i, row in enumerate(a):
        c = next(j for j, v in enumerate(row) if v)
        if row[c] < 0:
            a[i] = [-v for v in row]
        pivots.append(c)
    for i in range(len(a)):
        c, p = pivots[i], a[i][pivots[i]]
        for k in range(i):
            q = a[k][c] // p
            if q:
                a[k] = [x - q * y for x, y in zip(a[k], a[i])]
    return a


def integer_kernel(rows, ncols):
    """Z-basis (in HNF) of {v in Z^ncols : M v = 0} for an integer matrix M."""
    if ncols == 0:
        return []
    # columns of M become rows; track the transform
    at = [[int(rows[i][j]) for i in range(len(rows))] for j in range(ncols)]
    if not rows:
        return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    u = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    rank = _echelon(at, u)
    return hnf(u[rank:])


@dataclass(frozen=True)
class ZLattice:
    """A sublattice of Z^dim given by an HNF basis."""

    basis: tuple
    dim: int

    @classmethod
    def from_rows(cls, rows, dim) -> "ZLattice":
        return cls(tuple(tuple(r) for r in hnf(rows)), dim)

    @classmethod
    def zero(cls, dim) -> "ZLattice":
        return cls((), dim)

    @classmethod
    def full(cls, dim) -> "ZLattice":
        return cls.from_rows([[1 if i == j else 0 for j in range(dim)] for i in range(dim)], dim)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def contains(self, v) -> bool:
        if not any(v):
            return True
        return [tuple(r) for r in hnf(list(self.basis) + [list(v)])] == list(self.basis)

    def same_span(self, other: "ZLattice") -> bool:
        """Equality of the Q-spans."""
        return len(hnf(list(self.basis) + list(other.basis))) == self.rank == other.rank

    def __str__(self):
        if not self.basis:
            return "0"
        return "span{" + ", ".join("(" + ", ".join(map(str, r)) + ")" for r in self.basis) + "}"


def relation_lattice_from_coords(coords) -> ZLattice:
    """Integer relations among vectors given as {key: Fraction} dictionaries."""
    n = len(coords)
    keys = sorted({k for d in coords for k in d}, key=repr)
    rows = []
    for k in keys:
        row = [Fraction(d.get(k, 0)) for d in coords]
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        rows.append([int(x * den) for x in row])
    if not rows:
        return ZLattice.full(n)
    return ZLattice(tuple(tuple(r) for r in integer_kernel(rows, n)), n)
