"""Integer-lattice analysis of torus actions on products of 3-spheres.

A subtorus T^k acts on S^3 x ... x S^3 (coordinates u_i, v_i of the i-th
sphere) by characters: coordinate c is multiplied by prod_j z_j^{W[c, j]}.
The stabilizer of a point only depends on which coordinates vanish, so the
whole freeness analysis reduces to kernels of integer matrices.

All arithmetic is on Python ints and Fractions.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

IntMatrix = list[list[int]]

U_VANISHES = "u"
V_VANISHES = "v"
GENERIC = "g"
STRATUM_TAGS = (U_VANISHES, V_VANISHES, GENERIC)


# ---------------------------------------------------------------------------
# exact integer matrices


def as_int_matrix(M: Iterable[Iterable[int]]) -> IntMatrix:
    rows = [[int(v) for v in row] for row in M]
    if not rows or not rows[0]:
        raise ValueError("matrix must be nonempty")
    if any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def transpose(A: IntMatrix) -> IntMatrix:
    return [list(col) for col in zip(*A)]


def det(M: IntMatrix) -> int:
    """Exact determinant (fraction-free Bareiss elimination)."""
    A = [row[:] for row in M]
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def rational_rank(M: IntMatrix) -> int:
    """Rank over Q by Gaussian elimination on Fractions."""
    A = [[Fraction(v) for v in row] for row in M]
    rank, col, rows, cols = 0, 0, len(A), len(A[0])
    while rank < rows and col < cols:
        piv = next((i for i in range(rank, rows) if A[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for i in range(rank + 1, rows):
            f = A[i][col] / A[rank][col]
            A[i] = [a - f * b for a, b in zip(A[i], A[rank])]
        rank += 1
        col += 1
    return rank


@dataclass(frozen=True)
class SmithDecomposition:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0])))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(M: Iterable[Iterable[int]]) -> SmithDecomposition:
    """Unimodular U, V with U @ M @ V = D diagonal and d_1 | d_2 | ...

    Pivots on the entry of smallest absolute value in the remaining block.
    """
    A = as_int_matrix(M)
    m, n = len(A), len(A[0])
    U, V = identity(m), identity(n)

    def swap_rows(X, i, j):
        X[i], X[j] = X[j], X[i]

    def swap_cols(X, i, j):
        for row in X:
            row[i], row[j] = row[j], row[i]

    def add_row(X, src, dst, q):  # row_dst -= q * row_src
        X[dst] = [a - q * b for a, b in zip(X[dst], X[src])]

    def add_col(X, src, dst, q):  # col_dst -= q * col_src
        for row in X:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            nonzero = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j] != 0]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            swap_rows(A, t, pi)
            swap_rows(U, t, pi)
            swap_cols(A, t, pj)
            swap_cols(V, t, pj)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    add_row(A, t, i, q)
                    add_row(U, t, i, q)
                dirty |= A[i][t] != 0
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    add_col(A, t, j, q)
                    add_col(V, t, j, q)
                dirty |= A[t][j] != 0
            if dirty:
                continue
            # pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            i, _ = bad
            add_row(A, i, t, -1)
            add_row(U, i, t, -1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return SmithDecomposition(U=U, D=A, V=V)


# ---------------------------------------------------------------------------
# finite abelian groups


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z_{d_1} x ... x Z_{d_s} x T^r with d_i >= 2 and d_1 | d_2 | ...

    ``elements``, when known, lists the torsion elements as angle vectors
    theta in [0, 1)^k (the torus element is exp(2 pi i theta)).
    """

    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()
    elements: tuple[tuple[Fraction, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        f = tuple(int(d) for d in self.invariant_factors)
        if any(d < 2 for d in f):
            raise ValueError("invariant factors must be >= 2")
        if any(b % a for a, b in zip(f, f[1:])):
            raise ValueError("invariant factors must form a divisibility chain")
        object.__setattr__(self, "invariant_factors", f)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        return math.prod(self.invariant_factors) if self.is_finite else None

    def __str__(self) -> str:
        return format_group(self)


def format_group(G: FiniteAbelianGroup) -> str:
    parts = [f"Z_{d}" for d in G.invariant_factors]
    if G.free_rank:
        parts.append(f"T^{G.free_rank}")
    return " × ".join(parts) if parts else "1"


def parse_group(text: str) -> FiniteAbelianGroup:
    text = text.strip()
    if text in ("1", "0", "trivial"):
        return FiniteAbelianGroup()
    factors, rank = [], 0
    for part in text.replace("x", "×").split("×"):
        part = part.strip()
        if part.startswith("Z_"):
            factors.append(int(part[2:]))
        elif part.startswith("T^"):
            rank += int(part[2:])
        else:
            raise ValueError(f"cannot parse group component {part!r}")
    return FiniteAbelianGroup(rank, tuple(factors))


def torus_kernel(A: Iterable[Iterable[int]]) -> FiniteAbelianGroup:
    """Kernel of T^k -> T^l, z -> (prod_j z_j^{A_ij})_i, for an l x k matrix A.

    With U A V = D, theta is in the kernel iff D (V^{-1} theta) is integral,
    so the kernel is prod Z_{d_i} x T^{k - rank}.  Generators are V e_i / d_i.
    """
    A = as_int_matrix(A)
    k = len(A[0])
    snf = smith_normal_form(A)
    diag = snf.diagonal
    r = snf.rank
    factors = tuple(d for d in diag[:r] if d > 1)
    elements = None
    if r == k:
        gens = []
        for i, d in enumerate(diag):
            if d > 1:
                gens.append((d, tuple(Fraction(snf.V[row][i], d) % 1 for row in range(k))))
        elements = _span(gens, k)
    return FiniteAbelianGroup(k - r, factors, elements)


def _span(gens, k) -> tuple[tuple[Fraction, ...], ...]:
    elems = {tuple(Fraction(0) for _ in range(k))}
    for order, g in gens:
        elems = {tuple((e + m * gi) % 1 for e, gi in zip(el, g)) for el in elems for m in range(order)}
    return tuple(sorted(elems))


def group_from_elements(elements: Iterable[Sequence[Fraction]]) -> FiniteAbelianGroup:
    """Structure of a finite subgroup of (Q/Z)^k given by all its elements.

    Uses only element orders: for each prime p the number of cyclic factors
    of order >= p^j is log_p |G[p^j]| - log_p |G[p^(j-1)]|.
    """
    elems = {tuple(Fraction(v) % 1 for v in e) for e in elements}
    order_of = {e: math.lcm(*(v.denominator for v in e)) if e else 1 for e in elems}
    size = len(elems)
    if size == 1:
        return FiniteAbelianGroup(elements=tuple(sorted(elems)))
    primes = _prime_factors(size)
    per_prime: dict[int, list[int]] = {}
    for p in primes:
        counts, j = [1], 1
        while True:
            c = sum(1 for o in order_of.values() if (p**j) % o == 0)
            counts.append(c)
            if c == counts[-2] and j > 1:
                break
            j += 1
        logs = [round(math.log(c, p)) for c in counts]
        exps = []
        for jj in range(1, len(logs)):
            at_least = logs[jj] - logs[jj - 1]
            exps.append(at_least)
        # exps[j-1] = number of cyclic p-factors of order >= p^j
        mult = [exps[j] - (exps[j + 1] if j + 1 < len(exps) else 0) for j in range(len(exps))]
        powers = []
        for j, cnt in enumerate(mult):
            powers += [p ** (j + 1)] * cnt
        per_prime[p] = sorted(powers, reverse=True)
    width = max(len(v) for v in per_prime.values())
    factors = []
    for i in range(width):
        factors.append(math.prod(v[i] for v in per_prime.values() if i < len(v)))
    return FiniteAbelianGroup(0, tuple(sorted(factors)), tuple(sorted(elems)))


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# weight systems and strata


@dataclass(frozen=True)
class TorusWeightSystem:
    """Weights of a T^k action on the coordinates u_1, v_1, ..., u_s, v_s."""

    weights: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        W = tuple(tuple(int(v) for v in row) for row in self.weights)
        if not W or len(W) % 2:
            raise ValueError("need exactly two coordinates (u, v) per sphere")
        if any(len(r) != len(W[0]) for r in W) or not W[0]:
            raise ValueError("every coordinate needs a weight row of length k")
        object.__setattr__(self, "weights", W)

    @property
    def torus_rank(self) -> int:
        return len(self.weights[0])

    @property
    def n_spheres(self) -> int:
        return len(self.weights) // 2

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(f"{c}{i + 1}" for i in range(self.n_spheres) for c in "uv")

    def row(self, label: str) -> tuple[int, ...]:
        return self.weights[self.labels.index(label)]

    def columns(self) -> IntMatrix:
        """Killing-field coefficients: column j lists the weight of z_j on each coordinate."""
        return transpose([list(r) for r in self.weights])

    @classmethod
    def from_rows(cls, rows: dict[str, Sequence[int]], name: str = "") -> "TorusWeightSystem":
        s = len(rows) // 2
        order = [f"{c}{i + 1}" for i in range(s) for c in "uv"]
        missing = [lab for lab in order if lab not in rows]
        if missing or len(rows) != 2 * s:
            raise ValueError(f"weight rows missing for {missing or 'some coordinates'}")
        return cls(tuple(tuple(rows[lab]) for lab in order), name)


@dataclass(frozen=True)
class VanishingStratum:
    """Per sphere: 'u' (u vanishes), 'v' (v vanishes) or 'g' (generic)."""

    tags: tuple[str, ...]

    def __post_init__(self):
        tags = tuple(self.tags)
        if any(t not in STRATUM_TAGS for t in tags):
            raise ValueError(f"stratum tags must be in {STRATUM_TAGS}")
        object.__setattr__(self, "tags", tags)

    @classmethod
    def parse(cls, text: str) -> "VanishingStratum":
        return cls(tuple(text.replace(",", "").replace(" ", "")))

    def __str__(self) -> str:
        return "".join(self.tags)

    def nonvanishing(self) -> list[int]:
        """Indices (into u1, v1, u2, ...) of coordinates that are nonzero."""
        out = []
        for i, t in enumerate(self.tags):
            if t != U_VANISHES:
                out.append(2 * i)
            if t != V_VANISHES:
                out.append(2 * i + 1)
        return out

    def describe(self) -> str:
        zero = []
        for i, t in enumerate(self.tags):
            if t in (U_VANISHES, V_VANISHES):
                zero.append(f"{t}{i + 1}")
        return ("=".join(zero) + "=0") if zero else "generic"


def all_strata(n_spheres: int) -> list[VanishingStratum]:
    return [VanishingStratum(t) for t in itertools.product(STRATUM_TAGS, repeat=n_spheres)]


def _check_stratum(action: TorusWeightSystem, s: VanishingStratum) -> None:
    if len(s.tags) != action.n_spheres:
        raise ValueError(f"stratum {s} does not match {action.n_spheres} spheres")


def restricted_weights(action: TorusWeightSystem, s: VanishingStratum) -> IntMatrix:
    _check_stratum(action, s)
    return [list(action.weights[i]) for i in s.nonvanishing()]


def stratum_stabilizer(action: TorusWeightSystem, s: VanishingStratum) -> FiniteAbelianGroup:
    return torus_kernel(restricted_weights(action, s))


def freeness_scan(action: TorusWeightSystem) -> list[tuple[VanishingStratum, FiniteAbelianGroup]]:
    """Strata with nontrivial stabilizer, in lexicographic order of tags."""
    out = []
    for s in all_strata(action.n_spheres):
        G = stratum_stabilizer(action, s)
        if not G.is_trivial:
            out.append((s, G))
    return out


def brute_force_stabilizer(
    action: TorusWeightSystem, s: VanishingStratum, N_max: int
) -> FiniteAbelianGroup | None:
    """Stabilizer by enumerating N-th roots of unity, N = 1..N_max.

    Returns ``None`` (indeterminate) when the restricted weight matrix is rank
    deficient, i.e. a whole circle fixes the stratum.
    """
    if N_max < 2:
        raise ValueError("N_max must be >= 2")
    rows = restricted_weights(action, s)
    k = action.torus_rank
    if not rows or rational_rank(rows) < k:
        return None
    found = set()
    for N in range(1, N_max + 1):
        for a in itertools.product(range(N), repeat=k):
            if all(sum(w * aj for w, aj in zip(row, a)) % N == 0 for row in rows):
                found.add(tuple(Fraction(aj, N) for aj in a))
    return group_from_elements(found)


def format_element(theta: Sequence[Fraction]) -> str:
    """Torus element as roots of unity, e.g. (1, -1, w3^2)."""
    parts = []
    for v in theta:
        v = Fraction(v) % 1
        if v == 0:
            parts.append("1")
        elif v == Fraction(1, 2):
            parts.append("-1")
        else:
            parts.append(f"e^(2πi·{v})")
    return "(" + ", ".join(parts) + ")"


# ---------------------------------------------------------------------------
# named actions


def example2_action() -> TorusWeightSystem:
    """z1 z2^2 u1, conj(z1) v1, z2 z3^2 u2, conj(z2) v2, conj(z1) z3 u3, conj(z3) v3."""
    return TorusWeightSystem(
        ((1, 2, 0), (-1, 0, 0), (0, 1, 2), (0, -1, 0), (-1, 0, 1), (0, 0, -1)),
        name="example2",
    )


def example3_action() -> TorusWeightSystem:
    """z1 u1, z1 z2 conj(z3) v1, z2 conj(z3) u2, conj(z1) z2 v2, conj(z1) z2 z3 u3, z3 v3."""
    return TorusWeightSystem(
        ((1, 0, 0), (1, 1, -1), (0, 1, -1), (-1, 1, 0), (-1, 1, 1), (0, 0, 1)),
        name="example3",
    )


def diagonal_action(n_spheres: int = 3) -> TorusWeightSystem:
    """Each circle acts diagonally on its own sphere."""
    rows = []
    for i in range(n_spheres):
        e = tuple(int(i == j) for j in range(n_spheres))
        rows += [e, e]
    return TorusWeightSystem(tuple(rows), name="diagonal")


NAMED_ACTIONS = {
    "example2": example2_action,
    "example3": example3_action,
    "diagonal": diagonal_action,
}


# ---------------------------------------------------------------------------
# simple polytopes, combinatorially


@dataclass(frozen=True)
class SimplePolytopeCombinatorics:
    """A simple n-polytope as facet labels plus the facet sets of its vertices."""

    dim: int
    facets: tuple[str, ...]
    vertices: frozenset[frozenset[int]]

    def __post_init__(self):
        verts = frozenset(frozenset(v) for v in self.vertices)
        if any(len(v) != self.dim for v in verts):
            raise ValueError("not simple: a vertex does not lie in exactly n facets")
        if any(i < 0 or i >= len(self.facets) for v in verts for i in v):
            raise ValueError("vertex refers to an unknown facet")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "facets", tuple(self.facets))

    @property
    def m(self) -> int:
        return len(self.facets)

    def index(self, label: str) -> int:
        return self.facets.index(label)

    def face_set(self, face) -> frozenset[int]:
        """Normalize a face given by facet labels or indices."""
        return frozenset(self.index(f) if isinstance(f, str) else int(f) for f in face)

    def is_face(self, face) -> bool:
        S = self.face_set(face)
        return any(S <= v for v in self.vertices)

    def edges(self) -> list[frozenset[int]]:
        counts = Counter(v - {i} for v in self.vertices for i in v)
        return sorted((e for e, c in counts.items() if c == 2), key=sorted)

    def faces(self) -> set[frozenset[int]]:
        out = set()
        for v in self.vertices:
            for r in range(self.dim + 1):
                out.update(frozenset(c) for c in itertools.combinations(sorted(v), r))
        return out

    def is_simple(self) -> bool:
        if any(len(v) != self.dim for v in self.vertices):
            return False
        # each vertex must have exactly n neighbours along edges
        edges = set(self.edges())
        return all(sum(1 for i in v if v - {i} in edges) == self.dim for v in self.vertices)


def cube() -> SimplePolytopeCombinatorics:
    facets = ("x0", "x1", "y0", "y1", "z0", "z1")
    verts = frozenset(frozenset({a, 2 + b, 4 + c}) for a in (0, 1) for b in (0, 1) for c in (0, 1))
    return SimplePolytopeCombinatorics(3, facets, verts)


def cut_face(P: SimplePolytopeCombinatorics, face, label: str | None = None) -> SimplePolytopeCombinatorics:
    """Truncate a vertex or an edge; the new facet is appended last."""
    S = P.face_set(face)
    if not P.is_face(S) or len(S) not in (P.dim, P.dim - 1):
        raise ValueError(f"{sorted(S)} is not a vertex or edge of the polytope")
    new = P.m
    removed = [v for v in P.vertices if S <= v]
    added = {(v - {x}) | {new} for v in removed for x in S}
    verts = (P.vertices - frozenset(removed)) | frozenset(added)
    name = label or f"F{new + 1}"
    return SimplePolytopeCombinatorics(P.dim, P.facets + (name,), verts)


def moment_angle_dims(P: SimplePolytopeCombinatorics) -> tuple[int, int]:
    """(dim Z_P, rank of the complementary torus) = (m + n, m - n)."""
    if not P.is_simple():
        raise ValueError("polytope is not simple")
    return P.m + P.dim, P.m - P.dim


def face_stabilizer_subtorus(P: SimplePolytopeCombinatorics, face) -> list[int]:
    """Indices i with G contained in F_i; the empty face set means P itself."""
    S = P.face_set(face)
    if S and not P.is_face(S):
        raise ValueError(f"{sorted(S)} is not a face")
    return sorted(S)


def polytope_q1() -> SimplePolytopeCombinatorics:
    P = cube()
    for v in sorted(cube().vertices, key=sorted):
        P = cut_face(P, v)
    return P


def polytope_q2() -> SimplePolytopeCombinatorics:
    return cut_face(cube(), ("x0", "y0", "z0"))


def polytope_q3() -> SimplePolytopeCombinatorics:
    # the edges {x=0, y=0} and {x=1, z=1} lie on skew lines
    return cut_face(cut_face(cube(), ("x0", "y0")), ("x1", "z1"))


NAMED_POLYTOPES = {
    "cube": cube,
    "Q1": polytope_q1,
    "Q2": polytope_q2,
    "Q3": polytope_q3,
}
