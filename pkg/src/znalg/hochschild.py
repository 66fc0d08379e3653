"""Bimodules, cochains, coboundaries, and low-degree cohomology dimensions.

Cochains are dense tables on basis tuples; multilinearity makes the table a
lossless representation and turns cocycle/coboundary questions into exact
linear algebra over Z_p.  The coboundary of a table is evaluated directly
from the alternating-sum formula; for rank computations the same map is
materialized as a sparse matrix over the cochain coordinate spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .algebra import FiniteAlgebra
from .errors import (
    ActionNotAssociative,
    BadShape,
    LinAlgCapExceeded,
    NonPrimeModulus,
    NotACocycle,
    SelfCheckFailed,
    UnitActsBadly,
)
from . import linal

# Ceiling on the dimension of the target cochain space in rank computations.
# Sized so the sphere-poset degree-2 computation fits and degree 3 does not.
DEFAULT_LINALG_CAP = 150_000

# Odd primes use dense coefficient lists instead of bitsets; cap the total
# cell count so the dense path refuses what only the packed path can afford.
DENSE_CELL_CAP = 2 ** 25

# Idempotent sweeps inside derived-identity checks stay below this element
# count; is_cocycle2 declares no errors, so it narrows instead of refusing.
DERIVED_CHECK_CAP = 2 ** 12


class Bimodule:
    """A finite bimodule over a FiniteAlgebra, with basis action tables.

    left[i][j] is basis element i of the algebra acting on module basis
    element j; right[j][i] is module basis j acted on by algebra basis i.
    """

    def __init__(self, algebra: FiniteAlgebra, rank, left, right, name=""):
        self.algebra = algebra
        self.rank = int(rank)
        n = algebra.n
        self.left = tuple(
            tuple(tuple(v % n for v in cell) for cell in row) for row in left)
        self.right = tuple(
            tuple(tuple(v % n for v in cell) for cell in row) for row in right)
        self.name = name or f"bimodule(s={self.rank}) over {algebra.name}"

    def __repr__(self):
        return f"Bimodule({self.name!r})"

    @property
    def n(self):
        return self.algebra.n

    def zero(self):
        return (0,) * self.rank

    def basis(self, j):
        return tuple(1 if i == j else 0 for i in range(self.rank))

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

    def lact(self, a, m):
        """Left action of algebra element a on module element m."""
        n = self.n
        acc = [0] * self.rank
        for i, ai in enumerate(a):
            if ai:
                row = self.left[i]
                for j, mj in enumerate(m):
                    if mj:
                        c = ai * mj
                        for k, v in enumerate(row[j]):
                            if v:
                                acc[k] = (acc[k] + c * v) % n
        return tuple(acc)

    def ract(self, m, a):
        """Right action of algebra element a on module element m."""
        n = self.n
        acc = [0] * self.rank
        for j, mj in enumerate(m):
            if mj:
                row = self.right[j]
                for i, ai in enumerate(a):
                    if ai:
                        c = mj * ai
                        for k, v in enumerate(row[i]):
                            if v:
                                acc[k] = (acc[k] + c * v) % n
        return tuple(acc)


def validate_bimodule(spec, algebra=None, name=None) -> Bimodule:
    """Certify the bimodule axioms on basis triples and return the Bimodule."""
    if isinstance(spec, Bimodule):
        M = spec
    else:
        if algebra is None:
            raise BadShape("validate_bimodule needs the underlying algebra")
        try:
            rank = int(spec["rank"])
            left = spec["left_action"]
            right = spec["right_action"]
        except (KeyError, TypeError, ValueError) as exc:
            raise BadShape(f"bimodule spec missing or malformed field: {exc}")
        if len(left) != algebra.rank or any(len(row) != rank for row in left):
            raise BadShape("left action table is not r x s")
        if len(right) != rank or any(len(row) != algebra.rank for row in right):
            raise BadShape("right action table is not s x r")
        M = Bimodule(algebra, rank, left, right, name=name or spec.get("name", ""))
    _certify_bimodule(M)
    return M


def _certify_bimodule(M):
    A = M.algebra
    r, s = A.rank, M.rank
    one = A.one()
    for j in range(s):
        m = M.basis(j)
        if M.lact(one, m) != m:
            raise UnitActsBadly(f"{M.name}: 1*m != m on module basis {j}")
        if M.ract(m, one) != m:
            raise UnitActsBadly(f"{M.name}: m*1 != m on module basis {j}")
    for i in range(r):
        a = A.basis(i)
        for j in range(r):
            b = A.basis(j)
            ab = A.table[i][j]
            for k in range(s):
                m = M.basis(k)
                if M.lact(ab, m) != M.lact(a, M.lact(b, m)):
                    raise ActionNotAssociative("(ab)m = a(bm)", (i, j, k))
                if M.ract(m, ab) != M.ract(M.ract(m, a), b):
                    raise ActionNotAssociative("m(ab) = (ma)b", (i, j, k))
                if M.ract(M.lact(a, m), b) != M.lact(a, M.ract(m, b)):
                    raise ActionNotAssociative("(am)b = a(mb)", (i, j, k))
    # base-ring symmetry: scalars act the same on both sides (scalar
    # multiples of 1 must commute with the module)
    for c in range(A.n):
        ca = A.smul(c, one)
        for j in range(s):
            m = M.basis(j)
            if M.lact(ca, m) != M.ract(m, ca):
                raise ActionNotAssociative("scalar symmetry", (c, j))


def regular_bimodule(A: FiniteAlgebra) -> Bimodule:
    """A acting on itself by multiplication on both sides."""
    left = A.table
    right = tuple(tuple(A.table[j][i] for i in range(A.rank))
                  for j in range(A.rank))
    return validate_bimodule(
        Bimodule(A, A.rank, left, right, name=f"{A.name} (regular)"))


@dataclass
class Cochain:
    """A multilinear map A^degree -> M, stored as its basis-tuple table."""
    degree: int
    module: Bimodule
    values: tuple

    def evaluate(self, *args):
        if len(args) != self.degree:
            raise BadShape(
                f"cochain of degree {self.degree} applied to {len(args)} arguments")
        M = self.module
        n = M.n
        if self.degree == 0:
            return self.values
        acc = [0] * M.rank
        r = M.algebra.rank
        for T in product(range(r), repeat=self.degree):
            c = 1
            for arg, idx in zip(args, T):
                c = (c * arg[idx]) % n
                if not c:
                    break
            if not c:
                continue
            cell = self.values
            for idx in T:
                cell = cell[idx]
            for k, v in enumerate(cell):
                if v:
                    acc[k] = (acc[k] + c * v) % n
        return tuple(acc)

    def is_zero(self):
        def flat(v):
            if isinstance(v, tuple) and v and isinstance(v[0], tuple):
                return all(flat(c) for c in v)
            return not any(v)
        return flat(self.values)

    def __eq__(self, other):
        return (isinstance(other, Cochain) and self.degree == other.degree
                and self.values == other.values)


def cochain_from_table(M, degree, values) -> Cochain:
    """Normalize a nested table into a Cochain, checking its shape."""
    n = M.n
    s = M.rank
    r = M.algebra.rank

    def norm(v, depth):
        if depth == 0:
            t = tuple(int(c) % n for c in v)
            if len(t) != s:
                raise BadShape("cochain value has wrong module length")
            return t
        if len(v) != r:
            raise BadShape("cochain table has wrong arity")
        return tuple(norm(c, depth - 1) for c in v)

    return Cochain(degree, M, norm(values, degree))


def zero_cochain(M, degree) -> Cochain:
    def build(depth):
        if depth == 0:
            return M.zero()
        return tuple(build(depth - 1) for _ in range(M.algebra.rank))
    return Cochain(degree, M, build(degree))


def coboundary(g: Cochain) -> Cochain:
    """The alternating-sum coboundary, tabulated on basis tuples."""
    M = g.module
    A = M.algebra
    r = A.rank
    nu = g.degree
    if nu > 3:
        raise BadShape("coboundary evaluation is supported through degree 3")

    def value(T):
        args = [A.basis(i) for i in T]
        acc = M.lact(args[0], g.evaluate(*args[1:]))
        sign = 1
        for i in range(1, nu + 1):
            sign = -sign
            merged = args[:i - 1] + [A.table[T[i - 1]][T[i]]] + args[i + 1:]
            acc = M.add(acc, M.smul(sign, g.evaluate(*merged)))
        sign = -sign
        acc = M.add(acc, M.smul(sign, M.ract(g.evaluate(*args[:-1]), args[-1])))
        return acc

    def build(depth, prefix):
        if depth == 0:
            return value(prefix)
        return tuple(build(depth - 1, prefix + (i,)) for i in range(r))

    return Cochain(nu + 1, M, build(nu + 1, ()))


def is_cocycle2(f: Cochain, idempotent_cap=DERIVED_CHECK_CAP):
    """Check the degree-2 cocycle identity on all basis triples.

    Returns (verdict, violations).  When the verdict is true the derived
    identities (idempotent commutation and the unit-argument reductions) are
    re-checked; those are consequences, so a failure raises SelfCheckFailed.
    """
    if f.degree != 2:
        raise BadShape("cocycle check expects a degree-2 cochain")
    M = f.module
    A = M.algebra
    r = A.rank
    violations = []
    for i in range(r):
        a = A.basis(i)
        for j in range(r):
            b = A.basis(j)
            ab = A.table[i][j]
            for k in range(r):
                c = A.basis(k)
                bc = A.table[j][k]
                total = M.lact(a, f.evaluate(b, c))
                total = M.sub(total, f.evaluate(ab, c))
                total = M.add(total, f.evaluate(a, bc))
                total = M.sub(total, M.ract(f.evaluate(a, b), c))
                if any(total):
                    violations.append(((i, j, k), total))
    if violations:
        return False, violations

    one = A.one()
    f11 = f.evaluate(one, one)
    for i in range(r):
        d = A.basis(i)
        if f.evaluate(d, one) != M.lact(d, f11):
            raise SelfCheckFailed("cocycle consequence f(d,1) = d f(1,1) failed")
        if f.evaluate(one, d) != M.ract(f11, d):
            raise SelfCheckFailed("cocycle consequence f(1,d) = f(1,1) d failed")
    if A.size <= idempotent_cap:
        idems = (x for x in A.elements(idempotent_cap) if A.mul(x, x) == x)
    else:
        idems = (A.zero(), one)
    for e in idems:
        fee = f.evaluate(e, e)
        if M.lact(e, fee) != M.ract(fee, e):
            raise SelfCheckFailed(
                "cocycle consequence e f(e,e) = f(e,e) e failed")
    return True, []


def delta_matrix(M: Bimodule, degree):
    """Sparse matrix of the degree -> degree+1 coboundary map.

    Rows are indexed by the unit cochains of the source space in (tuple, module
    coordinate) order; each row maps flat target positions to coefficients.
    Returns (rows, source_dim, target_dim).
    """
    A = M.algebra
    r, s = A.rank, M.rank
    n = A.n
    nu = degree
    src_tuples = list(product(range(r), repeat=nu))
    dst_dim = s * r ** (nu + 1)

    def flat(T, coord):
        idx = 0
        for t in T:
            idx = idx * r + t
        return idx * s + coord

    rows = []
    for T in src_tuples:
        for m0 in range(s):
            row = {}
            for l in range(r):
                vec = M.left[l][m0]
                T2 = (l,) + T
                for k, v in enumerate(vec):
                    if v:
                        pos = flat(T2, k)
                        row[pos] = (row.get(pos, 0) + v) % n
            sign = 1
            for i in range(1, nu + 1):
                sign = -sign
                ti = T[i - 1]
                for u in range(r):
                    for v in range(r):
                        coeff = A.table[u][v][ti]
                        if coeff:
                            T2 = T[:i - 1] + (u, v) + T[i:]
                            pos = flat(T2, m0)
                            row[pos] = (row.get(pos, 0) + sign * coeff) % n
            sign = -sign
            for k in range(r):
                vec = M.right[m0][k]
                T2 = T + (k,)
                for c2, v in enumerate(vec):
                    if v:
                        pos = flat(T2, c2)
                        row[pos] = (row.get(pos, 0) + sign * v) % n
            rows.append({p: c for p, c in row.items() if c})
    return rows, len(src_tuples) * s, dst_dim


def cochain_to_vec(f: Cochain):
    """Flat coefficient tuple in the same order delta_matrix uses."""
    M = f.module
    r = M.algebra.rank
    out = []
    if f.degree == 0:
        return tuple(f.values)
    for T in product(range(r), repeat=f.degree):
        cell = f.values
        for idx in T:
            cell = cell[idx]
        out.extend(cell)
    return tuple(out)


def vec_to_cochain(M, degree, vec) -> Cochain:
    r = M.algebra.rank
    s = M.rank
    if degree == 0:
        return Cochain(0, M, tuple(v % M.n for v in vec))

    def build(depth, base):
        if depth == 0:
            return tuple(v % M.n for v in vec[base:base + s])
        step = s * r ** (depth - 1)
        return tuple(build(depth - 1, base + i * step) for i in range(r))

    return Cochain(degree, M, build(degree, 0))


def _rows_to_bits(rows):
    out = []
    for row in rows:
        v = 0
        for pos, c in row.items():
            if c % 2:
                v |= 1 << pos
        out.append(v)
    return out


def _rows_to_dense(rows, width, p):
    out = []
    for row in rows:
        v = [0] * width
        for pos, c in row.items():
            v[pos] = c % p
        out.append(v)
    return out


@dataclass
class CohomologyDims:
    degree: int
    dim_cocycles: int
    dim_coboundaries: int
    dim_h: int


def cohomology_dims(A: FiniteAlgebra, M: Bimodule, degree,
                    linalg_cap=DEFAULT_LINALG_CAP) -> CohomologyDims:
    """Exact dimensions of Z, B, and H in the requested degree over Z_p."""
    p = A.n
    if not linal.is_prime(p):
        raise NonPrimeModulus(
            f"cohomology dimensions need a prime modulus, got {p}")
    if degree < 1 or degree > 3:
        raise BadShape("cohomology degree must be 1, 2, or 3")
    r, s = A.rank, M.rank
    dim_src = s * r ** degree
    dim_dst = s * r ** (degree + 1)
    if dim_dst > linalg_cap or dim_src > linalg_cap:
        raise LinAlgCapExceeded(
            f"degree {degree}: cochain space of dimension {dim_dst} exceeds "
            f"the cap {linalg_cap}")

    rank_out = _delta_rank(M, degree, p)
    rank_in = _delta_rank(M, degree - 1, p)
    dim_z = dim_src - rank_out
    dim_b = rank_in
    dims = CohomologyDims(degree, dim_z, dim_b, dim_z - dim_b)
    if dims.dim_h < 0:
        raise SelfCheckFailed("negative cohomology dimension")
    return dims


def _delta_rank(M, degree, p):
    rows, src, dst = delta_matrix(M, degree)
    if p == 2:
        rank, _, _ = linal.eliminate_gf2(_rows_to_bits(rows))
    else:
        _require_dense_budget(src, dst)
        rank, _, _ = linal.eliminate_modp(_rows_to_dense(rows, dst, p), p)
    return rank


def _require_dense_budget(src, dst):
    if src * dst > DENSE_CELL_CAP:
        raise LinAlgCapExceeded(
            f"dense elimination over an odd prime needs {src * dst} cells, "
            f"above the budget {DENSE_CELL_CAP}")


def cocycle_space(A: FiniteAlgebra, M: Bimodule, degree=2,
                  linalg_cap=DEFAULT_LINALG_CAP):
    """Basis of the cocycle space in the given degree, as Cochains."""
    p = A.n
    if not linal.is_prime(p):
        raise NonPrimeModulus(f"cocycle space needs a prime modulus, got {p}")
    rows, src, dst = delta_matrix(M, degree)
    if dst > linalg_cap:
        raise LinAlgCapExceeded(f"target dimension {dst} exceeds {linalg_cap}")
    basis = []
    if p == 2:
        _, kernel, _ = linal.eliminate_gf2(_rows_to_bits(rows))
        for combo in kernel:
            vec = [0] * src
            w = combo
            while w:
                low = (w & -w).bit_length() - 1
                vec[low] = 1
                w &= w - 1
            basis.append(vec_to_cochain(M, degree, vec))
    else:
        _require_dense_budget(src, dst)
        _, kernel, _ = linal.eliminate_modp(_rows_to_dense(rows, dst, p), p)
        for combo in kernel:
            basis.append(vec_to_cochain(M, degree, combo))
    return basis


def is_coboundary2(f: Cochain, linalg_cap=DEFAULT_LINALG_CAP):
    """Solve the degree-1 coboundary equation for f; returns the witness
    cochain or None when f is not a coboundary.  Prime modulus only."""
    M = f.module
    A = M.algebra
    p = A.n
    if not linal.is_prime(p):
        raise NonPrimeModulus(
            f"coboundary solving needs a prime modulus, got {p}")
    ok, violations = is_cocycle2(f)
    if not ok:
        raise NotACocycle(f"not a cocycle; first violation {violations[0]}")
    rows, src, dst = delta_matrix(M, 1)
    if dst > linalg_cap:
        raise LinAlgCapExceeded(f"target dimension {dst} exceeds {linalg_cap}")
    target = cochain_to_vec(f)
    if p == 2:
        tbits = 0
        for pos, c in enumerate(target):
            if c % 2:
                tbits |= 1 << pos
        combo = linal.solve_in_rowspan_gf2(_rows_to_bits(rows), tbits)
        if combo is None:
            return None
        vec = [0] * src
        w = combo
        while w:
            low = (w & -w).bit_length() - 1
            vec[low] = 1
            w &= w - 1
    else:
        _require_dense_budget(src, dst)
        combo = linal.solve_in_rowspan_modp(_rows_to_dense(rows, dst, p),
                                            list(target), p)
        if combo is None:
            return None
        vec = combo
    g = vec_to_cochain(M, 1, vec)
    if cochain_to_vec(coboundary(g)) != tuple(c % p for c in target):
        raise SelfCheckFailed("coboundary witness failed to re-verify")
    return g


def nontrivial_cocycle2(A: FiniteAlgebra, M: Bimodule,
                        linalg_cap=DEFAULT_LINALG_CAP):
    """A degree-2 cocycle that is not a coboundary, or None if H^2 = 0."""
    p = A.n
    rows1, src1, dst1 = delta_matrix(M, 1)
    if p == 2:
        _, _, pivots = linal.eliminate_gf2(_rows_to_bits(rows1))
        for f in cocycle_space(A, M, 2, linalg_cap):
            vec = cochain_to_vec(f)
            tbits = 0
            for pos, c in enumerate(vec):
                if c % 2:
                    tbits |= 1 << pos
            residue, _ = linal.reduce_against_gf2(pivots, tbits)
            if residue:
                return f
    else:
        _require_dense_budget(src1, dst1)
        dense = _rows_to_dense(rows1, dst1, p)
        _, _, pivots = linal.eliminate_modp(dense, p)
        for f in cocycle_space(A, M, 2, linalg_cap):
            residue, _ = linal.reduce_against_modp(
                pivots, list(cochain_to_vec(f)), p)
            if any(residue):
                return f
    return None
