"""Finitely generated abelian groups in Smith normal form.

Groups are presented as Z^n / (column span of a relation matrix).  All
arithmetic is exact arbitrary-precision integer arithmetic; the Smith
reduction never touches floats.  The lattice helpers at the bottom
(`lattice_basis`, `solve_in_lattice`, `quotient_structure`) are shared by
the Witt-ring and filtered-module code.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class InvariantError(ValueError):
    """A structural invariant of a group presentation is violated."""


# ---------------------------------------------------------------------------
# integer matrices (lists of rows)
# ---------------------------------------------------------------------------

def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    if not a:
        return []
    if not b:
        return [[] for _ in a]
    cols = len(b[0])
    return [
        [sum(ra[k] * b[k][j] for k in range(len(b))) for j in range(cols)]
        for ra in a
    ]


def mat_vec(a: list[list[int]], v: list[int]) -> list[int]:
    return [sum(row[k] * v[k] for k in range(len(v))) for row in a]


def det_sign(mat: list[list[int]]) -> int:
    """Determinant of a small integer matrix (used only for +/-1 checks)."""
    n = len(mat)
    m = [row[:] for row in mat]
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        # fraction-free elimination: track the accumulated divisor
        for r in range(col + 1, n):
            while m[r][col] != 0:
                if abs(m[r][col]) < abs(m[col][col]):
                    m[col], m[r] = m[r], m[col]
                    det = -det
                q = m[r][col] // m[col][col]
                for j in range(col, n):
                    m[r][j] -= q * m[col][j]
        det *= m[col][col]
    return det


def smith_normal_form(
    matrix: list[list[int]],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (U, D, V) with D = U * matrix * V diagonal and d_i | d_{i+1}.

    U and V are unimodular.  Total on integer matrices; the empty matrix is
    handled (D empty, U/V identity of the right size).
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    d = [row[:] for row in matrix]
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row_dst += q * row_src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while True:
        # find a pivot of minimal absolute value in the remaining block
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if d[i][j] != 0 and (best is None or abs(d[i][j]) < best):
                    best = abs(d[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t] != 0:
                    q = d[i][t] // d[t][t]
                    add_row(t, i, -q)
                    if d[i][t] != 0:  # remainder smaller than pivot: swap up
                        swap_rows(t, i)
                        dirty = True
            # clear row t
            for j in range(t + 1, cols):
                if d[t][j] != 0:
                    q = d[t][j] // d[t][t]
                    add_col(t, j, -q)
                    if d[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if not dirty and all(d[i][t] == 0 for i in range(t + 1, rows)) \
                    and all(d[t][j] == 0 for j in range(t + 1, cols)):
                break
        # pivot must divide the rest of the block
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if d[i][j] % d[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue  # redo this pivot
        if d[t][t] < 0:
            negate_row(t)
        t += 1
        if t == rows or t == cols:
            break

    return u, d, v


def snf_diagonal(matrix: list[list[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith form (the invariant chain)."""
    _, d, _ = smith_normal_form(matrix)
    out = []
    for i in range(min(len(d), len(d[0]) if d else 0)):
        if d[i][i] != 0:
            out.append(d[i][i])
    return out


# ---------------------------------------------------------------------------
# lattices: sublattices of Z^n given by generating column vectors
# ---------------------------------------------------------------------------

def lattice_basis(ambient_dim: int, generators: list[list[int]]) -> list[list[int]]:
    """Basis (as columns) of the sublattice of Z^n spanned by the generators."""
    if not generators:
        return []
    mat = [[g[i] for g in generators] for i in range(ambient_dim)]
    u, d, _ = smith_normal_form(mat)
    # lattice = U^{-1} * im(D); basis vectors are the nonzero columns of U^{-1}D.
    uinv = invert_unimodular(u)
    basis = []
    for k in range(min(ambient_dim, len(generators))):
        if d[k][k] != 0:
            basis.append([uinv[i][k] * d[k][k] for i in range(ambient_dim)])
    return basis


def invert_unimodular(u: list[list[int]]) -> list[list[int]]:
    """Exact inverse of a unimodular integer matrix."""
    n = len(u)
    aug = [row[:] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(u)]
    # integer Gauss-Jordan; pivots are +/-1 after full reduction because det = +/-1
    for col in range(n):
        piv = None
        for r in range(col, n):
            if aug[r][col] != 0:
                if piv is None or abs(aug[r][col]) < abs(aug[piv][col]):
                    piv = r
        aug[col], aug[piv] = aug[piv], aug[col]
        while True:
            done = True
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    q = aug[r][col] // aug[col][col]
                    aug[r] = [x - q * y for x, y in zip(aug[r], aug[col])]
                    if aug[r][col] != 0:
                        aug[col], aug[r] = aug[r], aug[col]
                        done = False
            if done:
                break
        if aug[col][col] < 0:
            aug[col] = [-x for x in aug[col]]
    return [row[n:] for row in aug]


def solve_in_lattice(
    ambient_dim: int, generators: list[list[int]], target: list[int]
) -> list[int] | None:
    """Integer coefficients c with sum c_k * generators[k] = target, or None."""
    if all(x == 0 for x in target):
        return [0] * len(generators)
    if not generators:
        return None
    mat = [[g[i] for g in generators] for i in range(ambient_dim)]
    u, d, v = smith_normal_form(mat)
    rhs = mat_vec(u, target)
    ncols = len(generators)
    y = [0] * ncols
    rank = 0
    for k in range(min(ambient_dim, ncols)):
        if d[k][k] != 0:
            rank = k + 1
    for i in range(ambient_dim):
        if i < rank and d[i][i] != 0:
            if rhs[i] % d[i][i] != 0:
                return None
            y[i] = rhs[i] // d[i][i]
        elif rhs[i] != 0:
            return None
    return mat_vec(v, y)


def lattice_contains(ambient_dim: int, generators: list[list[int]], vec: list[int]) -> bool:
    return solve_in_lattice(ambient_dim, generators, vec) is not None


def lattices_equal(ambient_dim: int, gens_a: list[list[int]], gens_b: list[list[int]]) -> bool:
    return all(lattice_contains(ambient_dim, gens_a, v) for v in gens_b) and all(
        lattice_contains(ambient_dim, gens_b, v) for v in gens_a
    )


def lattice_intersection(
    ambient_dim: int, gens_a: list[list[int]], gens_b: list[list[int]]
) -> list[list[int]]:
    """Generators of the intersection of two sublattices of Z^n."""
    if not gens_a or not gens_b:
        return []
    stacked = [
        [g[i] for g in gens_a] + [-g[i] for g in gens_b] for i in range(ambient_dim)
    ]
    out = []
    for col in _integer_kernel(stacked):
        u = col[: len(gens_a)]
        vec = [sum(gens_a[k][i] * u[k] for k in range(len(gens_a))) for i in range(ambient_dim)]
        if any(vec):
            out.append(vec)
    return out


def quotient_structure(
    ambient_dim: int,
    big_generators: list[list[int]],
    small_generators: list[list[int]],
) -> tuple["FinAbGroup", list[list[int]]]:
    """Structure of L/L' for sublattices L' <= L of Z^n.

    Returns the group in normal form together with ambient coordinates of a
    generator for each listed invariant factor / free summand (torsion
    generators first, in the order of `invariant_factors`, then free ones).
    """
    basis = lattice_basis(ambient_dim, big_generators)
    if not basis:
        if small_generators and any(any(x) for x in small_generators):
            raise InvariantError("small lattice not contained in big lattice")
        return FinAbGroup(0, []), []
    t = len(basis)
    rel_cols = []
    for s in small_generators:
        c = solve_in_lattice(ambient_dim, basis, s)
        if c is None:
            raise InvariantError("small lattice not contained in big lattice")
        rel_cols.append(c)
    if not rel_cols:
        return FinAbGroup(t, []), basis
    mat = [[c[i] for c in rel_cols] for i in range(t)]
    u, d, _ = smith_normal_form(mat)
    uinv = invert_unimodular(u)
    # new basis of L adapted to the relations: columns of  B * U^{-1}
    ncols = len(rel_cols)
    diag = [d[i][i] if i < min(t, ncols) else 0 for i in range(t)]
    torsion = []
    torsion_gens = []
    free_gens = []
    for i in range(t):
        e = diag[i]
        newgen = [
            sum(basis[k][j] * uinv[k][i] for k in range(t)) for j in range(ambient_dim)
        ]
        if e == 0:
            free_gens.append(newgen)
        elif e > 1:
            torsion.append(e)
            torsion_gens.append(newgen)
    return FinAbGroup(len(free_gens), sorted(torsion)), (
        [g for _, g in sorted(zip(torsion, torsion_gens))] + free_gens
    )


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinAbGroup:
    """Z^free_rank + Z/d_1 + ... + Z/d_k with d_1 | d_2 | ... and d_i >= 2."""

    free_rank: int
    invariant_factors: tuple[int, ...]

    def __init__(self, free_rank: int, invariant_factors):
        factors = [int(d) for d in invariant_factors]
        if free_rank < 0:
            raise InvariantError("free rank must be non-negative")
        for d in factors:
            if d in (0, 1):
                raise InvariantError("invariant factors 0 and 1 are not allowed")
            if d < 0:
                raise InvariantError("invariant factors must be positive")
        for a, b in zip(factors, factors[1:]):
            if b % a != 0:
                raise InvariantError(f"divisibility chain broken: {a} does not divide {b}")
        object.__setattr__(self, "free_rank", free_rank)
        object.__setattr__(self, "invariant_factors", tuple(factors))

    # -- presentation data ---------------------------------------------------
    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.invariant_factors)

    def relation_columns(self) -> list[list[int]]:
        """Columns spanning the relation lattice in generator coordinates."""
        n = self.ngens
        cols = []
        for i, d in enumerate(self.invariant_factors):
            col = [0] * n
            col[self.free_rank + i] = d
            cols.append(col)
        return cols

    def reduce(self, coords: list[int]) -> tuple[int, ...]:
        out = list(coords)
        for i, d in enumerate(self.invariant_factors):
            out[self.free_rank + i] %= d
        return tuple(out)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def order(self) -> int | None:
        """Number of elements, or None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def elements(self):
        """Iterate all elements of a finite group as coordinate tuples."""
        if self.free_rank:
            raise InvariantError("cannot enumerate an infinite group")
        def rec(i):
            if i == len(self.invariant_factors):
                yield ()
                return
            for rest in rec(i + 1):
                for a in range(self.invariant_factors[i]):
                    yield (a,) + rest
        return rec(0)

    @classmethod
    def from_divisors(cls, free_rank: int, divisors: list[int]) -> "FinAbGroup":
        """Normalize an arbitrary direct sum of cyclic groups Z/d (d >= 1)."""
        primary: dict[int, list[int]] = {}
        for d in divisors:
            d = abs(int(d))
            if d == 0:
                free_rank += 1
                continue
            if d == 1:
                continue
            for p, e in _factorize(d).items():
                primary.setdefault(p, []).append(e)
        # the k-th largest exponents of every prime multiply together
        slots = max((len(v) for v in primary.values()), default=0)
        factors = []
        for k in range(slots):
            f = 1
            for p, exps in primary.items():
                exps_sorted = sorted(exps, reverse=True)
                if k < len(exps_sorted):
                    f *= p ** exps_sorted[k]
            factors.append(f)
        factors.reverse()  # ascending, d_i | d_{i+1}
        return cls(free_rank, factors)

    def primary_part(self, p: int) -> "FinAbGroup":
        parts = []
        for d in self.invariant_factors:
            e = 0
            while d % p == 0:
                d //= p
                e += 1
            if e:
                parts.append(p ** e)
        return FinAbGroup(0, sorted(parts))

    def odd_part(self) -> "FinAbGroup":
        parts = []
        for d in self.invariant_factors:
            while d % 2 == 0:
                d //= 2
            if d > 1:
                parts.append(d)
        return FinAbGroup(0, sorted(parts))

    def two_local_shadow(self) -> "FinAbGroup":
        """Z_(2)-localization modelled as free part + 2-primary torsion."""
        return FinAbGroup(self.free_rank, self.primary_part(2).invariant_factors)

    def direct_sum(self, other: "FinAbGroup") -> "FinAbGroup":
        return FinAbGroup.from_divisors(
            self.free_rank + other.free_rank,
            list(self.invariant_factors) + list(other.invariant_factors),
        )

    def describe(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.invariant_factors)}

    @classmethod
    def from_json(cls, obj: dict) -> "FinAbGroup":
        return cls(int(obj["free_rank"]), [int(x) for x in obj.get("torsion", [])])


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass
class GroupHom:
    """Homomorphism between presented groups, as a matrix on generators."""

    source: FinAbGroup
    target: FinAbGroup
    matrix: list[list[int]]  # target.ngens x source.ngens

    def __post_init__(self):
        n, m = self.target.ngens, self.source.ngens
        if len(self.matrix) != n or any(len(r) != m for r in self.matrix):
            raise InvariantError("hom matrix has wrong shape")
        rel = self.target.relation_columns()
        for col in self.source.relation_columns():
            img = mat_vec(self.matrix, col)
            if not lattice_contains(n, rel, img):
                raise InvariantError("matrix does not respect source relations")

    def __call__(self, coords) -> tuple[int, ...]:
        return self.target.reduce(mat_vec(self.matrix, list(coords)))

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise InvariantError("composition mismatch")
        return GroupHom(other.source, self.target, mat_mul(self.matrix, other.matrix))

    def cokernel(self) -> FinAbGroup:
        n = self.target.ngens
        cols = [mat_vec(self.matrix, e) for e in _unit_vectors(self.source.ngens)]
        gens = cols + self.target.relation_columns()
        ambient = _unit_vectors(n)
        group, _ = quotient_structure(n, ambient, gens)
        return group

    def kernel(self) -> tuple[FinAbGroup, list[list[int]]]:
        """Kernel with generator coordinates in the source presentation."""
        n, m = self.target.ngens, self.source.ngens
        rel_t = self.target.relation_columns()
        # solve M x + R y = 0: kernel lattice of the stacked matrix
        stacked = [self.matrix[i][:] + [c[i] for c in rel_t] for i in range(n)]
        ker_cols = _integer_kernel(stacked)
        pre = [c[:m] for c in ker_cols]  # preimage lattice {x : Mx in relations}
        pre += self.source.relation_columns()
        group, gens = quotient_structure(m, pre, self.source.relation_columns())
        return group, gens


def _unit_vectors(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for i in range(n)] for j in range(n)]


def _integer_kernel(matrix: list[list[int]]) -> list[list[int]]:
    """Basis of the integer kernel lattice of a matrix (as column vectors)."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if cols == 0:
        return []
    if rows == 0:
        return _unit_vectors(cols)
    u, d, v = smith_normal_form(matrix)
    rank = 0
    for i in range(min(rows, cols)):
        if d[i][i] != 0:
            rank = i + 1
    return [[v[i][j] for i in range(cols)] for j in range(rank, cols)]


# ---------------------------------------------------------------------------
# the three spec operations
# ---------------------------------------------------------------------------

def mul_hom(group: FinAbGroup, n: int) -> GroupHom:
    m = group.ngens
    return GroupHom(group, group, [[n if i == j else 0 for j in range(m)] for i in range(m)])


def ker_coker_of_mul(group: FinAbGroup, n: int) -> tuple[FinAbGroup, FinAbGroup]:
    h = mul_hom(group, n)
    ker, _ = h.kernel()
    return ker, h.cokernel()


@dataclass(frozen=True)
class CompletedGroup:
    """Z_p^rank + p-primary torsion; the Z_p factors stay symbolic.

    `lim1` and `pi1` are both zero for finitely generated input: the
    p-torsion has bounded order, so the tower of p^n-torsion subgroups is
    pro-zero and the derived completion collapses onto the classical one.
    """

    p: int
    padic_free_rank: int
    torsion: tuple[int, ...]
    lim1: int = 0
    pi1: int = 0

    def describe(self) -> str:
        parts = [f"Z_{self.p}^{self.padic_free_rank}"] if self.padic_free_rank else []
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def derived_p_completion(group: FinAbGroup, p: int) -> CompletedGroup:
    if p < 2 or any(p % d == 0 for d in range(2, min(p, 1000)) if d * d <= p):
        raise InvariantError(f"{p} is not prime")
    torsion = group.primary_part(p).invariant_factors
    return CompletedGroup(p, group.free_rank, torsion)


def completion_of_hom(h: GroupHom, p: int) -> list[list[int]]:
    """Matrix of the completed map in completed-generator coordinates.

    Completed coordinates are: the free generators of source/target followed
    by the torsion generators whose order has a p-part, with entries read
    modulo that p-part.  Torsion generators with order prime to p die.
    """
    def kept(group: FinAbGroup) -> list[tuple[int, int]]:
        out = [(i, 0) for i in range(group.free_rank)]
        for j, d in enumerate(group.invariant_factors):
            e = 1
            while d % p == 0:
                d //= p
                e *= p
            if e > 1:
                out.append((group.free_rank + j, e))
        return out

    src, tgt = kept(h.source), kept(h.target)
    out = []
    for (ti, te) in tgt:
        row = []
        for (sj, _) in src:
            entry = h.matrix[ti][sj]
            if te:
                entry %= te
            row.append(entry)
        out.append(row)
    return out


def brute_force_ker_coker(group: FinAbGroup, n: int) -> tuple[dict[int, int], dict[int, int]]:
    """Counting oracle for ker/coker of multiplication by n on a finite group.

    Returns, for kernel and cokernel, the map m -> number of elements x with
    m*x = 0, for every divisor m of the group exponent.  Two finite abelian
    groups are isomorphic iff these counting functions agree.
    """
    if group.free_rank:
        raise InvariantError("oracle only enumerates finite groups")
    elements = list(group.elements())
    factors = group.invariant_factors
    exponent = factors[-1] if factors else 1

    def add(x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, factors))

    def smul(m, x):
        return tuple((m * a) % d for a, d in zip(x, factors))

    zero = tuple(0 for _ in factors)
    kernel = [x for x in elements if smul(n, x) == zero]
    image = {smul(n, x) for x in elements}

    divisors = [m for m in range(1, exponent + 1) if exponent % m == 0]
    ker_counts = {m: sum(1 for x in kernel if smul(m, x) == zero) for m in divisors}
    # elements of order dividing m in G/image: cosets c with m*c in image
    coker_counts = {
        m: sum(1 for x in elements if smul(m, x) in image) // len(image)
        for m in divisors
    }
    return ker_counts, coker_counts


def counting_function(group: FinAbGroup, divisors) -> dict[int, int]:
    """Number of elements killed by m, for each m, from the normal form."""
    out = {}
    for m in divisors:
        count = 1
        for d in group.invariant_factors:
            count *= gcd(m, d)
        out[m] = count
    return out
