"""Finite associative unital Z_n-algebras presented by structure-constant tables.

An algebra of rank r over Z_n stores an r x r table whose (i, j) entry is the
coordinate vector of the product of basis elements i and j.  Elements are
plain tuples of r residues mod n; all arithmetic is exact.  Every algebra in
this package is built through validate_algebra, which certifies associativity
and the unit laws on basis triples (bilinearity extends both to all elements).
"""

from __future__ import annotations

from itertools import product

from .errors import BadShape, BadUnit, CapExceeded, ModulusMismatch, NonAssociative

# Refusal threshold for exhaustive element scans; operations that enumerate
# n**rank elements raise CapExceeded above this unless the caller overrides.
DEFAULT_CAP = 2 ** 20

Coords = tuple  # element of an algebra: tuple of rank residues mod n


class FiniteAlgebra:
    """A finite associative unital algebra over Z_n, given by its table.

    Construct through validate_algebra (or the helper constructors below);
    the constructor itself only normalizes and stores.
    """

    def __init__(self, modulus, rank, table, unit, name=""):
        self.n = int(modulus)
        self.rank = int(rank)
        self.table = tuple(
            tuple(tuple(v % self.n for v in cell) for cell in row) for row in table
        )
        self.unit = tuple(v % self.n for v in unit)
        self.name = name or f"algebra(n={self.n},r={self.rank})"

    def __repr__(self):
        return f"FiniteAlgebra({self.name!r}, n={self.n}, rank={self.rank})"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteAlgebra)
            and self.n == other.n
            and self.rank == other.rank
            and self.table == other.table
            and self.unit == other.unit
        )

    def __hash__(self):
        return hash((self.n, self.rank, self.table, self.unit))

    @property
    def size(self):
        return self.n ** self.rank

    def zero(self):
        return (0,) * self.rank

    def one(self):
        return self.unit

    def basis(self, i):
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def coerce(self, x):
        """Normalize an iterable of ints into a valid element tuple."""
        t = tuple(int(v) % self.n for v in x)
        if len(t) != self.rank:
            raise BadShape(f"element of length {len(t)}, expected {self.rank}")
        return t

    def add(self, x, y):
        n = self.n
        return tuple((a + b) % n for a, b in zip(x, y))

    def sub(self, x, y):
        n = self.n
        return tuple((a - b) % n for a, b in zip(x, y))

    def neg(self, x):
        n = self.n
        return tuple((-a) % n for a in x)

    def smul(self, c, x):
        n = self.n
        c = c % n
        return tuple((c * a) % n for a in x)

    def mul(self, x, y):
        n = self.n
        table = self.table
        acc = [0] * self.rank
        for i, xi in enumerate(x):
            if xi:
                row = table[i]
                for j, yj in enumerate(y):
                    if yj:
                        c = xi * yj
                        cell = row[j]
                        for k, v in enumerate(cell):
                            if v:
                                acc[k] = (acc[k] + c * v) % n
        return tuple(acc)

    def power(self, x, k):
        acc = self.unit
        for _ in range(k):
            acc = self.mul(acc, x)
        return acc

    def elements(self, cap=None):
        """All elements in lexicographic coordinate order; refuses above the cap."""
        self.require_within_cap(cap)
        return product(range(self.n), repeat=self.rank)

    def require_within_cap(self, cap=None):
        limit = DEFAULT_CAP if cap is None else cap
        if self.size > limit:
            raise CapExceeded(
                f"{self.name}: {self.size} elements exceeds cap {limit}")


def validate_algebra(spec, name=None) -> FiniteAlgebra:
    """Certify a raw algebra description and return a FiniteAlgebra.

    spec is a mapping with keys modulus, rank, structure (r x r array of
    length-r integer arrays), unit (length-r array), and optionally name;
    a FiniteAlgebra instance is re-certified as is.
    """
    if isinstance(spec, FiniteAlgebra):
        alg = spec
    else:
        try:
            modulus = int(spec["modulus"])
            rank = int(spec["rank"])
            structure = spec["structure"]
            unit = spec["unit"]
        except (KeyError, TypeError, ValueError) as exc:
            raise BadShape(f"algebra spec missing or malformed field: {exc}")
        label = name or spec.get("name") or ""
        alg = _shape_checked(modulus, rank, structure, unit, label)
    _certify(alg)
    return alg


def _shape_checked(modulus, rank, structure, unit, name):
    if modulus < 2:
        raise BadShape(f"modulus must be >= 2, got {modulus}")
    if rank < 1:
        raise BadShape(f"rank must be >= 1, got {rank}")
    if len(structure) != rank or any(len(row) != rank for row in structure):
        raise BadShape("structure table is not rank x rank")
    for row in structure:
        for cell in row:
            if len(cell) != rank:
                raise BadShape("structure entry has wrong length")
    if len(unit) != rank:
        raise BadShape("unit vector has wrong length")
    return FiniteAlgebra(modulus, rank, structure, unit, name)


def _certify(alg):
    """Associativity on all basis triples plus two-sided unit laws."""
    r = alg.rank
    for i in range(r):
        ei = alg.basis(i)
        if alg.mul(alg.unit, ei) != ei or alg.mul(ei, alg.unit) != ei:
            raise BadUnit(f"{alg.name}: unit law fails on basis element {i}")
    for i in range(r):
        ei = alg.basis(i)
        for j in range(r):
            ej = alg.basis(j)
            ij = alg.table[i][j]
            for k in range(r):
                ek = alg.basis(k)
                lhs = alg.mul(ij, ek)
                rhs = alg.mul(ei, alg.mul(ej, ek))
                if lhs != rhs:
                    raise NonAssociative((i, j, k), lhs, rhs)


# helper constructors (tables spelled out in code; there is no parser)

def zn(n) -> FiniteAlgebra:
    """The ring Z_n as a rank-1 algebra over itself."""
    return validate_algebra(
        {"modulus": n, "rank": 1, "structure": [[[1]]], "unit": [1]},
        name=f"Z{n}")


def zn_poly_x2(n) -> FiniteAlgebra:
    """Z_n[X]/(X^2) with basis {1, x}."""
    structure = [
        [[1, 0], [0, 1]],
        [[0, 1], [0, 0]],
    ]
    return validate_algebra(
        {"modulus": n, "rank": 2, "structure": structure, "unit": [1, 0]},
        name=f"Z{n}[X]/(X^2)")


def matrix_algebra(n, size) -> FiniteAlgebra:
    """Full matrix algebra M_size(Z_n); basis e_ab ordered by (a, b)."""
    pairs = [(a, b) for a in range(size) for b in range(size)]
    return _matrix_units_algebra(n, pairs, f"M{size}(Z{n})")


def triangular_algebra(n, size) -> FiniteAlgebra:
    """Upper triangular matrices T_size(Z_n); basis e_ab with a <= b."""
    pairs = [(a, b) for a in range(size) for b in range(a, size)]
    return _matrix_units_algebra(n, pairs, f"T{size}(Z{n})")


def _matrix_units_algebra(n, pairs, name):
    index = {p: i for i, p in enumerate(pairs)}
    rank = len(pairs)
    structure = [[[0] * rank for _ in range(rank)] for _ in range(rank)]
    for (a, b), i in index.items():
        for (c, d), j in index.items():
            if b == c and (a, d) in index:
                structure[i][j][index[(a, d)]] = 1
    unit = [0] * rank
    for a, b in pairs:
        if a == b:
            unit[index[(a, b)]] = 1
    return validate_algebra(
        {"modulus": n, "rank": rank, "structure": structure, "unit": unit},
        name=name)


def matrix_unit(alg_size, a, b, size):
    """Coordinates of e_ab inside matrix_algebra(n, size)."""
    pairs = [(x, y) for x in range(size) for y in range(size)]
    return tuple(1 if p == (a, b) else 0 for p in pairs)


def triangular_unit(a, b, size):
    """Coordinates of e_ab inside triangular_algebra(n, size)."""
    pairs = [(x, y) for x in range(size) for y in range(x, size)]
    return tuple(1 if p == (a, b) else 0 for p in pairs)


def direct_product(factors) -> FiniteAlgebra:
    """Block-diagonal product of algebras sharing one modulus."""
    factors = list(factors)
    if not factors:
        raise BadShape("direct product needs at least one factor")
    n = factors[0].n
    for f in factors:
        if f.n != n:
            raise ModulusMismatch(
                f"moduli differ: {f.n} vs {n} (products are same-modulus only)")
    if len(factors) == 1:
        return factors[0]
    rank = sum(f.rank for f in factors)
    offsets = []
    pos = 0
    for f in factors:
        offsets.append(pos)
        pos += f.rank
    structure = [[[0] * rank for _ in range(rank)] for _ in range(rank)]
    unit = [0] * rank
    for f, off in zip(factors, offsets):
        for i in range(f.rank):
            for j in range(f.rank):
                cell = f.table[i][j]
                for k, v in enumerate(cell):
                    structure[off + i][off + j][off + k] = v
        for k, v in enumerate(f.unit):
            unit[off + k] = v
    name = " x ".join(f.name for f in factors)
    return validate_algebra(
        {"modulus": n, "rank": rank, "structure": structure, "unit": unit},
        name=name)


def embed_factor(factors, which, x):
    """Coordinates of x (element of factors[which]) inside the direct product."""
    coords = []
    for idx, f in enumerate(factors):
        coords.extend(x if idx == which else f.zero())
    return tuple(coords)


def algebra_to_doc(alg) -> dict:
    """Structured-document form of an algebra (inverse of validate_algebra)."""
    return {
        "modulus": alg.n,
        "rank": alg.rank,
        "structure": [[list(cell) for cell in row] for row in alg.table],
        "unit": list(alg.unit),
        "name": alg.name,
    }
