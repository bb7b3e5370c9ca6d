"""Permutation modules over F_ell and their commutants, irreducibility and lattices.

Action convention: [g] e_i = e_{g(i)}, i.e. [g]phi(t) = phi(g^-1 t).  Matrices
act on column vectors.  Bases (0-based points, n = degree):

* Full      e_0, ..., e_{n-1}
* ZeroSum   f_j = e_j - e_{n-1}, j < n-1
* Heart     images of f_j, j < n-2, in ZeroSum / F_ell*1   (needs ell | n)
* Quotient  images of e_j, j < n-1, in F_ell^n / F_ell*1
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from .fpoly import charpoly, degree, eval_at_matrix, irreducible_factors
from .linalg import EchelonBasis, FpMatrix, is_prime, nullspace_mod, rref_mod
from .permgrp import DEFAULT_ENUM_BUDGET, BudgetExceeded, PermGroup, conjugacy_classes

DEFAULT_LATTICE_BUDGET = 2 * 10**5
DEFAULT_SEED = 20240229


class Kind(str, Enum):
    FULL = "Full"
    ZERO_SUM = "ZeroSum"
    HEART = "Heart"
    QUOTIENT = "Quotient"

    @classmethod
    def parse(cls, text: str) -> "Kind":
        key = text.replace("-", "").replace("_", "").lower()
        for k in cls:
            if k.value.lower() == key:
                return k
        raise ValueError(f"unknown module kind {text!r}")


class KindUnavailable(ValueError):
    pass


def _module_dim(kind: Kind, n: int) -> int:
    return {Kind.FULL: n, Kind.ZERO_SUM: n - 1, Kind.HEART: n - 2, Kind.QUOTIENT: n - 1}[kind]


def _embed(kind: Kind, n: int, j: int) -> list:
    """Full-space representative of basis vector j."""
    v = [0] * n
    v[j] = 1
    if kind in (Kind.ZERO_SUM, Kind.HEART):
        v[n - 1] -= 1
    return v


def _coords(kind: Kind, n: int, x, ell: int) -> list:
    """Coordinates of a full-space vector (zero-sum for ZeroSum/Heart)."""
    if kind is Kind.FULL:
        return [c % ell for c in x]
    if kind is Kind.ZERO_SUM:
        return [c % ell for c in x[:n - 1]]
    if kind is Kind.HEART:
        return [(x[j] - x[n - 2]) % ell for j in range(n - 2)]
    return [(x[j] - x[n - 1]) % ell for j in range(n - 1)]


@dataclass(frozen=True)
class PermModule:
    group: PermGroup
    ell: int
    kind: Kind
    dim: int
    action: tuple       # FpMatrix per generator of group

    @property
    def n(self) -> int:
        return self.group.degree

    def matrix_of(self, g) -> FpMatrix:
        n = self.n
        cols = []
        for j in range(self.dim):
            v = _embed(self.kind, n, j)
            w = [0] * n
            for i, c in enumerate(v):
                if c:
                    w[g[i]] += c
            cols.append(_coords(self.kind, n, w, self.ell))
        return FpMatrix(self.ell, [list(r) for r in zip(*cols)])

    def spin(self, vectors, transpose: bool = False) -> EchelonBasis:
        """Smallest invariant subspace containing ``vectors``."""
        mats = [a.transpose() for a in self.action] if transpose else self.action
        basis = EchelonBasis(self.ell, self.dim)
        queue = []
        for v in vectors:
            if basis.add(v):
                queue.append(tuple(v))
        for v in queue:
            for a in mats:
                w = a.apply(v)
                if basis.add(w):
                    queue.append(w)
        return basis


def build_module(G: PermGroup, ell: int, kind) -> PermModule:
    if isinstance(kind, str) and not isinstance(kind, Kind):
        kind = Kind.parse(kind)
    if not is_prime(ell):
        raise ValueError(f"ell = {ell} is not prime")
    n = G.degree
    if n < 3:
        raise ValueError("permutation modules need n >= 3")
    if kind is Kind.HEART and n % ell:
        raise KindUnavailable(f"the heart needs ell | n (ell={ell}, n={n})")
    dim = _module_dim(kind, n)
    proto = PermModule(G, ell, kind, dim, ())
    action = tuple(proto.matrix_of(g) for g in G.generators)
    return PermModule(G, ell, kind, dim, action)


# ---------------------------------------------------------------------------
# commutant
# ---------------------------------------------------------------------------

def _flat(M: FpMatrix) -> list:
    return [x for row in M.rows for x in row]


class _Coordinates:
    """Express flattened matrices in a fixed independent basis."""

    def __init__(self, basis, p: int):
        self.p = p
        k = len(basis)
        rows = [_flat(b) + [1 if i == j else 0 for j in range(k)] for i, b in enumerate(basis)]
        width = len(rows[0]) - k if rows else 0
        red, piv = rref_mod(rows, p, width)
        self.width = width
        self.rows = red
        self.pivots = piv
        self.k = k

    def __call__(self, M: FpMatrix):
        p = self.p
        v = _flat(M)
        coeff = [0] * self.k
        for row, c in zip(self.rows, self.pivots):
            f = v[c]
            if f:
                v = [(x - f * y) % p for x, y in zip(v, row[:self.width])]
                coeff = [(a + f * b) % p for a, b in zip(coeff, row[self.width:])]
        if any(v):
            return None
        return coeff


@dataclass(frozen=True)
class CommutantAlgebra:
    ell: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_scalars_only(self) -> bool:
        return self.dim == 1

    @cached_property
    def is_commutative(self) -> bool:
        b = self.basis
        return all((b[i] @ b[j]).rows == (b[j] @ b[i]).rows
                   for i in range(len(b)) for j in range(i + 1, len(b)))

    @cached_property
    def coordinates(self) -> _Coordinates:
        return _Coordinates(list(self.basis), self.ell)

    def structure_constants(self) -> list:
        """c[i][j] = coordinates of basis[i] @ basis[j]."""
        co = self.coordinates
        return [[co(x @ y) for y in self.basis] for x in self.basis]

    @cached_property
    def is_field(self) -> bool:
        """Commutative, reduced and connected.

        For commutative A over F_ell the Frobenius x -> x^ell is F_ell-linear;
        A is reduced iff it is injective, and then A is a product of fields
        whose number is dim ker(Frobenius - 1).
        """
        if self.dim == 1:
            return True
        if not self.is_commutative:
            return False
        p = self.ell
        co = self.coordinates
        frob_cols = [co(_mat_pow(b, p)) for b in self.basis]
        frob = [list(r) for r in zip(*frob_cols)]
        if len(nullspace_mod(frob, self.dim, p)) != 0:
            return False
        shifted = [[(frob[i][j] - (1 if i == j else 0)) % p for j in range(self.dim)]
                   for i in range(self.dim)]
        return len(nullspace_mod(shifted, self.dim, p)) == 1


def _mat_pow(M: FpMatrix, e: int) -> FpMatrix:
    result = FpMatrix.identity(M.nrows, M.modulus)
    base = M
    while e:
        if e & 1:
            result = result @ base
        base = base @ base
        e >>= 1
    return result


def commutant(M: PermModule) -> CommutantAlgebra:
    d = M.dim
    p = M.ell
    rows = []
    for A in M.action:
        a = A.rows
        for i in range(d):
            for j in range(d):
                row = [0] * (d * d)
                for k in range(d):
                    if a[k][j]:
                        row[i * d + k] = (row[i * d + k] + a[k][j]) % p
                    if a[i][k]:
                        row[k * d + j] = (row[k * d + j] - a[i][k]) % p
                if any(row):
                    rows.append(row)
    if not rows:
        kernel = [tuple(1 if t == s else 0 for t in range(d * d)) for s in range(d * d)]
    else:
        kernel = nullspace_mod(rows, d * d, p)
    basis = [FpMatrix(p, [list(v[i * d:(i + 1) * d]) for i in range(d)]) for v in kernel]
    # put the identity first so that scalars are visibly present
    ident = FpMatrix.identity(d, p)
    ordered = [ident]
    ech = EchelonBasis(p, d * d)
    ech.add(_flat(ident))
    for b in basis:
        if ech.add(_flat(b)):
            ordered.append(b)
    return CommutantAlgebra(p, tuple(ordered))


# ---------------------------------------------------------------------------
# faithfulness
# ---------------------------------------------------------------------------

def is_faithful(M: PermModule, budget: int = DEFAULT_ENUM_BUDGET) -> bool:
    """Trivial kernel: no nontrivial conjugacy class acts as the identity."""
    ident = FpMatrix.identity(M.dim, M.ell).rows
    for cls in conjugacy_classes(M.group, budget)[1:]:
        if M.matrix_of(cls[0]).rows == ident:
            return False
    return True


# ---------------------------------------------------------------------------
# irreducibility
# ---------------------------------------------------------------------------

def _random_algebra_element(pool, rng, p, dim):
    a, b = rng.randrange(len(pool)), rng.randrange(len(pool))
    pool.append(pool[a] @ pool[b])
    if len(pool) > 12:
        del pool[rng.randrange(len(pool) - 1)]
    acc = [[0] * dim for _ in range(dim)]
    for m in rng.sample(pool, min(3, len(pool))):
        c = rng.randrange(1, p) if p > 2 else 1
        acc = [[(x + c * y) % p for x, y in zip(ra, rb)] for ra, rb in zip(acc, m.rows)]
    return FpMatrix(p, acc)


def find_submodule(M: PermModule, seed: int = DEFAULT_SEED, attempts: int = 200,
                   exhaustive_budget: int = DEFAULT_LATTICE_BUDGET):
    """A proper nonzero invariant subspace (as an EchelonBasis), or None if irreducible.

    Norton's test on random group-algebra elements; if no usable element shows
    up within ``attempts``, every line is spun (when ell^dim is within budget).
    """
    d, p = M.dim, M.ell
    if d <= 1:
        return None
    rng = random.Random(seed)
    pool = list(M.action)
    for _ in range(attempts):
        theta = _random_algebra_element(pool, rng, p, d)
        cp = charpoly(theta)
        for f in irreducible_factors(cp, p, seed=rng.randrange(2**31)):
            N = eval_at_matrix(f, theta)
            ker = nullspace_mod(N.rows, d, p)
            if len(ker) != degree(f):
                continue
            sub = M.spin([ker[0]])
            if len(sub) < d:
                return sub
            dual_ker = nullspace_mod(N.transpose().rows, d, p)
            dual = M.spin([dual_ker[0]], transpose=True)
            if len(dual) < d:
                # annihilator of an invariant subspace of the dual
                ann = nullspace_mod(dual.rows, d, p)
                return M.spin(ann)
            return None
    if p ** d > exhaustive_budget:
        raise BudgetExceeded(f"irreducibility undecided and {p}^{d} exceeds budget {exhaustive_budget}")
    for v in _lines(d, p):
        sub = M.spin([v])
        if len(sub) < d:
            return sub
    return None


def is_irreducible(M: PermModule, seed: int = DEFAULT_SEED) -> bool:
    return find_submodule(M, seed) is None


def is_absolutely_irreducible(M: PermModule, seed: int = DEFAULT_SEED) -> bool:
    return is_irreducible(M, seed) and commutant(M).is_scalars_only


def _lines(d: int, p: int):
    """One normalized representative (leading entry 1) of each line of F_p^d."""
    for lead in range(d):
        for tail in _vectors(d - lead - 1, p):
            yield tuple([0] * lead + [1] + list(tail))


def _vectors(k: int, p: int):
    if k == 0:
        yield ()
        return
    for head in range(p):
        for rest in _vectors(k - 1, p):
            yield (head,) + rest


def _normalize(v, p):
    for x in v:
        if x:
            inv = pow(x, p - 2, p)
            return tuple(y * inv % p for y in v)
    return tuple(v)


def submodule_lattice(M: PermModule, budget: int = DEFAULT_LATTICE_BUDGET) -> list:
    """All invariant subspaces, each as a reduced row echelon basis, sorted by dimension.

    Every submodule is a sum of cyclic ones.  The cyclic submodules come from
    spinning one line per G-orbit on lines (spin(gv) = g spin(v) = spin(v)).
    """
    d, p = M.dim, M.ell
    if p ** d > budget:
        raise BudgetExceeded(f"{p}^{d} exceeds lattice budget {budget}")
    seen = set()
    cyclic = {}
    for v in _lines(d, p):
        if v in seen:
            continue
        seen.add(v)
        orbit = [v]
        for w in orbit:
            for a in M.action:
                u = _normalize(a.apply(w), p)
                if u not in seen:
                    seen.add(u)
                    orbit.append(u)
        sub = M.spin([v])
        cyclic[sub.canonical()] = sub
    found = {(): None}
    found.update(cyclic)
    frontier = list(cyclic)
    cyc_keys = list(cyclic)
    while frontier:
        new = []
        for key in frontier:
            for ck in cyc_keys:
                s = _sum_key(key, ck, p, d)
                if s not in found:
                    found[s] = None
                    new.append(s)
        frontier = new
    return sorted(found, key=lambda k: (len(k), k))


def _sum_key(a, b, p, d) -> tuple:
    rows = [list(r) for r in a] + [list(r) for r in b]
    red, _ = rref_mod(rows, p, d)
    return tuple(tuple(r) for r in red)
