"""Finite groups as Cayley tables and Lie algebras as Hermitian generator bases.

Composition convention for permutations: ``(sigma * tau)(i) = sigma(tau(i))``,
i.e. the right factor acts first.  This matches matrix multiplication of the
corresponding permutation matrices and keeps the index-permutation action
associative (naive index substitution without the inverse is not).

Lie algebra elements are stored as Hermitian matrices H in the physicist
convention: group elements are products of ``exp(-i theta H)``.  The
skew-Hermitian mathematician convention enters only through the factor -i at
exponentiation time.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import InvalidParameterError, NotHermitianError
from .linalg import DEFAULT_TOL, Tolerance

__all__ = [
    "FiniteGroup", "GroupAxiomReport", "LieAlgebraBasis",
    "make_cyclic", "make_symmetric", "make_dihedral", "group_from_table",
    "group_from_unitaries", "verify_group_axioms", "identify_small_group",
    "lie_closure", "sample_lie_group_element",
]

MAX_TABLE_ORDER = 512  # exhaustive axiom checks are cubic in the order


@dataclass
class FiniteGroup:
    """A finite group given by its composition table.

    ``mul[a, b]`` is the index of ``a * b``.  ``generators`` index a set whose
    closure is the whole group; ``element_labels`` are display strings only.
    """

    order: int
    mul: np.ndarray
    identity: int
    inverses: np.ndarray
    generators: list[int]
    element_labels: list[str]
    name: str = "group"

    def multiply(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inverses[a])

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.multiply(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def power(self, a: int, k: int) -> int:
        x = self.identity
        for _ in range(k):
            x = self.multiply(x, a)
        return x

    def element_words(self) -> list[list[int]]:
        """Shortest word in ``generators`` for every element, by BFS.

        Deterministic: generators are tried in listed order, elements are
        visited in breadth-first order from the identity.
        """
        words: list[list[int] | None] = [None] * self.order
        words[self.identity] = []
        frontier = [self.identity]
        while frontier:
            nxt = []
            for e in frontier:
                for gi, g in enumerate(self.generators):
                    f = self.multiply(e, g)
                    if words[f] is None:
                        words[f] = words[e] + [gi]
                        nxt.append(f)
            frontier = nxt
        if any(w is None for w in words):
            raise InvalidParameterError("generators do not generate the group")
        return words  # type: ignore[return-value]

    def conjugate(self, g: int, h: int) -> int:
        """g * h * g^-1."""
        return self.multiply(self.multiply(g, h), self.inverse(g))


@dataclass
class GroupAxiomReport:
    associativity_violations: list[tuple[int, int, int]]
    identity_ok: bool
    inverses_ok: bool

    @property
    def ok(self) -> bool:
        return (not self.associativity_violations) and self.identity_ok and self.inverses_ok


def _find_identity(mul: np.ndarray) -> int:
    n = mul.shape[0]
    idx = np.arange(n)
    for e in range(n):
        if np.array_equal(mul[e], idx) and np.array_equal(mul[:, e], idx):
            return e
    raise InvalidParameterError("table has no identity element")


def _find_inverses(mul: np.ndarray, identity: int) -> np.ndarray:
    n = mul.shape[0]
    inv = np.full(n, -1, dtype=np.int64)
    for a in range(n):
        hits = np.flatnonzero(mul[a] == identity)
        for b in hits:
            if mul[b, a] == identity:
                inv[a] = b
                break
        if inv[a] < 0:
            raise InvalidParameterError(f"element {a} has no two-sided inverse")
    return inv


def _closure(mul: np.ndarray, gens: list[int], identity: int) -> set[int]:
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                f = int(mul[e, g])
                if f not in seen:
                    seen.add(f)
                    nxt.append(f)
        frontier = nxt
    return seen


def group_from_table(mul, generators=None, element_labels=None, name="group") -> FiniteGroup:
    """Build a group from an explicit table, deriving identity and inverses.

    The table is trusted to be associative here; run
    :func:`verify_group_axioms` for the exhaustive check (order <= 512).
    """
    mul = np.asarray(mul, dtype=np.int64)
    n = mul.shape[0]
    if mul.shape != (n, n) or n == 0:
        raise InvalidParameterError("table must be square and non-empty")
    if mul.min() < 0 or mul.max() >= n:
        raise InvalidParameterError("table entries must be element indices")
    identity = _find_identity(mul)
    inverses = _find_inverses(mul, identity)
    if generators is None:
        generators = list(range(n))
    generators = [int(g) for g in generators]
    if len(_closure(mul, generators, identity)) != n:
        raise InvalidParameterError("generators do not generate the group")
    if element_labels is None:
        element_labels = [f"g{i}" for i in range(n)]
    return FiniteGroup(n, mul, identity, inverses, generators, list(element_labels), name)


def verify_group_axioms(g: FiniteGroup) -> GroupAxiomReport:
    """Exhaustive axiom check; order capped at 512 (cubic associativity scan)."""
    if g.order > MAX_TABLE_ORDER:
        raise InvalidParameterError(f"exhaustive check capped at order {MAX_TABLE_ORDER}")
    mul = g.mul
    violations: list[tuple[int, int, int]] = []
    for a in range(g.order):
        left = mul[mul[a, :], :]        # (b, c) -> (a*b)*c
        right = mul[a, mul]             # (b, c) -> a*(b*c)
        bad = np.argwhere(left != right)
        violations.extend((a, int(b), int(c)) for b, c in bad)
    idx = np.arange(g.order)
    identity_ok = bool(
        np.array_equal(mul[g.identity], idx) and np.array_equal(mul[:, g.identity], idx))
    inverses_ok = all(
        mul[a, g.inverses[a]] == g.identity and mul[g.inverses[a], a] == g.identity
        for a in range(g.order))
    return GroupAxiomReport(violations, identity_ok, inverses_ok)


def make_cyclic(n: int) -> FiniteGroup:
    """Cyclic group of integers modulo n; element i is g^i."""
    if n < 1:
        raise InvalidParameterError("cyclic group needs n >= 1")
    idx = np.arange(n)
    mul = (idx[:, None] + idx[None, :]) % n
    labels = ["e"] + [f"g^{i}" if i > 1 else "g" for i in range(1, n)]
    gens = [1 % n] if n > 1 else [0]
    return group_from_table(mul, gens, labels, f"Z_{n}")


def make_symmetric(n: int) -> FiniteGroup:
    """Symmetric group on n letters, elements in lexicographic one-line order.

    Generators are the adjacent transpositions.  Order capped at 6! = 720.
    """
    if not (1 <= n <= 6):
        raise InvalidParameterError("symmetric group supported for 1 <= n <= 6")
    elems = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(elems)}
    arr = np.array(elems, dtype=np.int64)
    order = len(elems)
    mul = np.empty((order, order), dtype=np.int64)
    for i in range(order):
        composed = arr[i][arr]          # (sigma*tau)(x) = sigma(tau(x))
        for j in range(order):
            mul[i, j] = index[tuple(composed[j])]
    gens = []
    for k in range(n - 1):
        t = list(range(n))
        t[k], t[k + 1] = t[k + 1], t[k]
        gens.append(index[tuple(t)])
    if n == 1:
        gens = [0]
    labels = ["(" + ",".join(str(x + 1) for x in p) + ")" for p in elems]
    return group_from_table(mul, gens, labels, f"S_{n}")


def make_dihedral(n: int) -> FiniteGroup:
    """Dihedral group of the regular n-gon: 2n elements s^f r^k, s r s = r^-1."""
    if n < 3:
        raise InvalidParameterError("dihedral group needs n >= 3")
    # element index = f*n + k  for  s^f r^k
    order = 2 * n
    mul = np.empty((order, order), dtype=np.int64)
    for f1 in range(2):
        for k1 in range(n):
            for f2 in range(2):
                for k2 in range(n):
                    f = (f1 + f2) % 2
                    k = ((-k1 if f2 else k1) + k2) % n
                    mul[f1 * n + k1, f2 * n + k2] = f * n + k
    labels = [f"r^{k}" if k else "e" for k in range(n)]
    labels += [f"s·r^{k}" if k else "s" for k in range(n)]
    return group_from_table(mul, [1, n], labels, f"D_{n}")


def group_from_unitaries(mats, tol: Tolerance = DEFAULT_TOL, name="matrix-group") -> FiniteGroup:
    """Abstractify a finite closed set of unitaries into its Cayley table.

    Entries are matched by Frobenius distance; the set must be closed under
    multiplication and contain the identity.
    """
    mats = [np.asarray(m, dtype=complex) for m in mats]
    n = len(mats)

    def find(m):
        for i, c in enumerate(mats):
            if linalg.frob(m - c) <= tol.threshold(max(linalg.frob(c), 1.0)) * 10:
                return i
        raise InvalidParameterError("set of matrices is not closed under multiplication")

    mul = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            mul[i, j] = find(mats[i] @ mats[j])
    return group_from_table(mul, None, None, name)


# ---------------------------------------------------------------------------
# small-order identification

def _element_order_profile(g: FiniteGroup) -> tuple:
    return tuple(sorted(g.element_order(a) for a in range(g.order)))


def _is_isomorphic(g: FiniteGroup, h: FiniteGroup) -> bool:
    """Backtracking search for an isomorphism h -> g over generator images."""
    if g.order != h.order:
        return False
    if g.is_abelian() != h.is_abelian():
        return False
    if _element_order_profile(g) != _element_order_profile(h):
        return False

    h_words = h.element_words()
    g_orders = [g.element_order(a) for a in range(g.order)]
    h_gen_orders = [h.element_order(a) for a in h.generators]

    def image_of(words, gen_images):
        out = []
        for w in words:
            x = g.identity
            for gi in w:
                x = g.multiply(x, gen_images[gi])
            out.append(x)
        return out

    candidates = [
        [a for a in range(g.order) if g_orders[a] == h_gen_orders[i]]
        for i in range(len(h.generators))
    ]

    for gen_images in itertools.product(*candidates):
        phi = image_of(h_words, gen_images)
        if len(set(phi)) != g.order:
            continue
        ok = True
        for a in range(h.order):
            pa = phi[a]
            row = g.mul[pa, :]
            for b in range(h.order):
                if row[phi[b]] != phi[h.mul[a, b]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def identify_small_group(g: FiniteGroup) -> str:
    """Canonical name for small groups (order <= 24), or "unknown".

    Candidates are tried in a fixed preference order: Z_n, S_n (n <= 4),
    D_n (3 <= n <= 12), Z_a x Z_b (gcd(a, b) > 1).  The answer depends only
    on the isomorphism class of the table, never on its labeling.
    """
    n = g.order
    if n > 24:
        return "unknown"
    if n == 1:
        return "Z_1"
    candidates: list[tuple[str, FiniteGroup]] = [(f"Z_{n}", make_cyclic(n))]
    for k in (3, 4):
        if math.factorial(k) == n:
            candidates.append((f"S_{k}", make_symmetric(k)))
    if n % 2 == 0 and 3 <= n // 2 <= 12:
        candidates.append((f"D_{n // 2}", make_dihedral(n // 2)))
    for a in range(2, int(math.isqrt(n)) + 1):
        if n % a == 0:
            b = n // a
            if a <= b and math.gcd(a, b) > 1:
                prod = _direct_product(make_cyclic(a), make_cyclic(b))
                candidates.append((f"Z_{a}xZ_{b}", prod))
    for label, ref in candidates:
        if _is_isomorphic(g, ref):
            return label
    return "unknown"


def _direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    n, m = g.order, h.order
    mul = np.empty((n * m, n * m), dtype=np.int64)
    for a1 in range(n):
        for b1 in range(m):
            i = a1 * m + b1
            mul[i, :] = (g.mul[a1][:, None] * m + h.mul[b1][None, :]).reshape(-1)
    gens = [a * m + h.identity for a in g.generators] + [g.identity * m + b for b in h.generators]
    return group_from_table(mul, gens, None, f"{g.name}x{h.name}")


# ---------------------------------------------------------------------------
# Lie algebras

@dataclass
class LieAlgebraBasis:
    """Real basis of Hermitian generators with group elements exp(-i theta H)."""

    generators: list[np.ndarray]
    name: str = "lie-algebra"
    _structure: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for h in self.generators:
            if not linalg.is_hermitian(h):
                raise NotHermitianError("Lie algebra generators must be Hermitian")

    @property
    def dim(self) -> int:
        return len(self.generators)

    @property
    def carrier_dim(self) -> int:
        return self.generators[0].shape[0]

    def structure_constants(self, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
        """Real f with [X_i, X_j] = i sum_k f[i,j,k] X_k (least squares).

        A large residual means the basis is not closed; run
        :func:`lie_closure` first.
        """
        if self._structure is not None:
            return self._structure
        n = self.dim
        cols = np.array([linalg.hvec(h) for h in self.generators]).T
        f = np.zeros((n, n, n))
        for i in range(n):
            for j in range(n):
                target = linalg.hvec(-1j * linalg.comm(self.generators[i], self.generators[j]))
                sol, *_ = np.linalg.lstsq(cols, target, rcond=None)
                f[i, j] = sol
        self._structure = f
        return f

    def closure_residual(self, tol: Tolerance = DEFAULT_TOL) -> float:
        """Max Frobenius distance of i[X_i, X_j] from the real span of the basis."""
        f = self.structure_constants(tol)
        res = 0.0
        for i in range(self.dim):
            for j in range(self.dim):
                lhs = -1j * linalg.comm(self.generators[i], self.generators[j])
                rhs = sum(f[i, j, k] * self.generators[k] for k in range(self.dim))
                res = max(res, linalg.frob(lhs - rhs))
        return res


def lie_closure(seed, tol: Tolerance = DEFAULT_TOL, max_dim: int | None = None) -> LieAlgebraBasis:
    """Smallest real Lie algebra of Hermitian matrices containing the seeds.

    Repeatedly adjoins i[A, B] (Hermitian for Hermitian A, B) and
    re-orthonormalizes until the dimension stops growing.  The returned basis
    is orthonormal under Tr[A^dag B].
    """
    seed = [np.asarray(s, dtype=complex) for s in seed]
    if not seed:
        raise InvalidParameterError("need at least one seed generator")
    dims = {s.shape for s in seed}
    if len(dims) != 1 or any(s.shape[0] != s.shape[1] for s in seed):
        raise InvalidParameterError("seeds must be square matrices of equal size")
    for s in seed:
        if not linalg.is_hermitian(s, tol):
            raise NotHermitianError("seed generators must be Hermitian")

    d = seed[0].shape[0]
    cap = max_dim if max_dim is not None else d * d
    basis = linalg.orthonormalize_hermitian(seed, tol)
    while True:
        candidates = list(basis)
        for a, b in itertools.combinations(basis, 2):
            candidates.append(1j * linalg.comm(a, b))
        new_basis = linalg.orthonormalize_hermitian(candidates, tol)
        if len(new_basis) == len(basis) or len(new_basis) >= cap:
            basis = new_basis
            break
        basis = new_basis
    return LieAlgebraBasis(basis, name=f"lie({len(basis)})")


def sample_lie_group_element(alg: LieAlgebraBasis, rng_seed: int, depth: int = 3) -> np.ndarray:
    """Product of ``depth`` one-parameter exponentials, deterministic per seed.

    Each factor is exp(-i theta H) with theta uniform in [0, 2 pi) and H drawn
    uniformly from the basis.
    """
    if depth < 1:
        raise InvalidParameterError("depth must be >= 1")
    rng = np.random.default_rng(rng_seed)
    d = alg.carrier_dim
    out = np.eye(d, dtype=complex)
    for _ in range(depth):
        k = int(rng.integers(alg.dim))
        theta = float(rng.uniform(0.0, 2.0 * np.pi))
        out = out @ linalg.exp_unitary(alg.generators[k], theta)
    return out
