"""Finite-dimensional associative Q-algebras given by structure constants.

Products are stored sparsely: ``table[i][j]`` is a tuple of (k, c) pairs
with e_i e_j = sum c e_k.  All arithmetic is exact (ints and Fractions).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import isqrt

from .linalg import QEchelon, mat_mul_q, nullspace_q, rank_q


class NotSimple(ValueError):
    pass


class NotAField(ValueError):
    pass


def _vec_add(acc: dict, k: int, c):
    v = acc.get(k, 0) + c
    if v:
        acc[k] = v
    else:
        acc.pop(k, None)


@dataclass(frozen=True)
class SCAlgebra:
    dim: int
    table: tuple
    unit: tuple

    def mul(self, x, y) -> list:
        acc: dict = {}
        ys = [(j, b) for j, b in enumerate(y) if b]
        for i, a in enumerate(x):
            if not a:
                continue
            row = self.table[i]
            for j, b in ys:
                ab = a * b
                for k, c in row[j]:
                    _vec_add(acc, k, ab * c)
        out = [0] * self.dim
        for k, c in acc.items():
            out[k] = c
        return out

    def basis_vector(self, i: int) -> list:
        v = [0] * self.dim
        v[i] = 1
        return v

    def left_matrix(self, x) -> list:
        cols = [self.mul(x, self.basis_vector(j)) for j in range(self.dim)]
        return [list(r) for r in zip(*cols)]

    def right_matrix(self, x) -> list:
        cols = [self.mul(self.basis_vector(j), x) for j in range(self.dim)]
        return [list(r) for r in zip(*cols)]

    def is_associative(self) -> bool:
        e = [self.basis_vector(i) for i in range(self.dim)]
        for i, j, k in product(range(self.dim), repeat=3):
            if self.mul(self.mul(e[i], e[j]), e[k]) != self.mul(e[i], self.mul(e[j], e[k])):
                return False
        return True

    def unit_laws_hold(self) -> bool:
        for i in range(self.dim):
            e = self.basis_vector(i)
            if self.mul(self.unit, e) != e or self.mul(e, self.unit) != e:
                return False
        return True

    def whole(self) -> "Subalgebra":
        return Subalgebra(self, tuple(tuple(self.basis_vector(i)) for i in range(self.dim)))

    @cached_property
    def traces(self) -> list:
        """trace(L_{e_k}) for each basis element."""
        out = []
        for k in range(self.dim):
            t = 0
            for l in range(self.dim):
                for kk, c in self.table[k][l]:
                    if kk == l:
                        t += c
            out.append(t)
        return out

    def trace_form(self) -> list:
        """Gram matrix of T(x, y) = trace(L_{xy})."""
        t = self.traces
        return [[sum(c * t[k] for k, c in self.table[i][j]) for j in range(self.dim)]
                for i in range(self.dim)]

    # -- constructors -------------------------------------------------------

    @classmethod
    def matrix_algebra(cls, d: int) -> "SCAlgebra":
        """M_d(Q) on the basis E_ab, index a*d + b."""
        table = []
        for a in range(d):
            for b in range(d):
                row = []
                for c in range(d):
                    for e in range(d):
                        row.append(((a * d + e, 1),) if b == c else ())
                table.append(tuple(row))
        unit = tuple(1 if i % (d + 1) == 0 else 0 for i in range(d * d))
        return cls(d * d, tuple(table), unit)

    @classmethod
    def from_matrices(cls, mats, coords=None) -> "SCAlgebra":
        """Algebra spanned by independent square matrices closed under products."""
        coords = coords or _MatrixCoordinates(mats)
        table = []
        for x in mats:
            row = []
            for y in mats:
                v = coords(mat_mul_q(x, y))
                row.append(tuple((k, c) for k, c in enumerate(v) if c))
            table.append(tuple(row))
        d = len(mats[0])
        ident = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
        return cls(len(mats), tuple(table), tuple(coords(ident)))

    @classmethod
    def from_matrices_with_coords(cls, mats):
        """Like from_matrices, also returning the coordinate map for matrices in the span."""
        coords = _MatrixCoordinates(mats)
        return cls.from_matrices(mats, coords), coords

    @classmethod
    def direct_sum(cls, A: "SCAlgebra", B: "SCAlgebra") -> "SCAlgebra":
        n = A.dim
        table = []
        for i in range(A.dim + B.dim):
            row = []
            for j in range(A.dim + B.dim):
                if i < n and j < n:
                    row.append(A.table[i][j])
                elif i >= n and j >= n:
                    row.append(tuple((k + n, c) for k, c in B.table[i - n][j - n]))
                else:
                    row.append(())
            table.append(tuple(row))
        return cls(A.dim + B.dim, tuple(table), tuple(A.unit) + tuple(B.unit))

    @classmethod
    def quotient_poly(cls, f) -> "SCAlgebra":
        """Q[x]/(f) on the basis 1, x, ..., x^(deg-1); f monic, ascending coefficients."""
        return cls.from_matrices(_power_basis(companion(f)))


class _MatrixCoordinates:
    """Coordinates of a matrix in a fixed independent matrix basis."""

    def __init__(self, mats):
        flat = [[Fraction(x) for row in m for x in row] for m in mats]
        ech = QEchelon(len(flat[0]))
        positions = []
        for v in flat:
            ech.add(v)
        # positions where the basis restricted is invertible
        positions = sorted(ech.pivots)
        self.positions = positions
        R = [[v[p] for p in positions] for v in flat]      # basis x positions
        self.inv = _inverse_q(R)
        self.k = len(mats)

    def __call__(self, M) -> list:
        flat = [Fraction(x) for row in M for x in row]
        sample = [flat[p] for p in self.positions]
        return [sum((sample[i] * self.inv[i][j] for i in range(self.k)), Fraction(0))
                for j in range(self.k)]


def _inverse_q(M) -> list:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next(r for r in range(c, n) if A[r][c])
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


# ---------------------------------------------------------------------------
# subalgebras
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subalgebra:
    ambient: SCAlgebra
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def _echelon(self) -> QEchelon:
        ech = QEchelon(self.ambient.dim)
        for v in self.basis:
            ech.add(list(v))
        return ech

    def contains(self, x) -> bool:
        return self._echelon.contains(list(x))

    def contains_space(self, other: "Subalgebra") -> bool:
        return all(self.contains(v) for v in other.basis)

    def same_space(self, other: "Subalgebra") -> bool:
        return self.dim == other.dim and self.contains_space(other)

    def is_closed(self) -> bool:
        return all(self.contains(self.ambient.mul(x, y)) for x in self.basis for y in self.basis)

    def contains_unit(self) -> bool:
        return self.contains(self.ambient.unit)

    def is_commutative(self) -> bool:
        A = self.ambient
        return all(A.mul(x, y) == A.mul(y, x) for i, x in enumerate(self.basis) for y in self.basis[i + 1:])

    def induced(self) -> SCAlgebra:
        """Structure constants of the subalgebra on its own basis."""
        A = self.ambient
        k = len(self.basis)
        positions = sorted(self._echelon.pivots)
        R = [[Fraction(v[p]) for p in positions] for v in self.basis]
        inv = _inverse_q(R)

        def coords(x):
            s = [Fraction(x[p]) for p in positions]
            return [sum((s[i] * inv[i][j] for i in range(k)), Fraction(0)) for j in range(k)]

        table = []
        for x in self.basis:
            row = []
            for y in self.basis:
                c = coords(A.mul(x, y))
                row.append(tuple((t, a) for t, a in enumerate(c) if a))
            table.append(tuple(row))
        return SCAlgebra(k, tuple(table), tuple(coords(A.unit)))

    def lift(self, coords) -> list:
        """Ambient vector from coordinates in this basis."""
        out = [Fraction(0)] * self.ambient.dim
        for c, v in zip(coords, self.basis):
            if c:
                out = [a + c * b for a, b in zip(out, v)]
        return out


def subalgebra_from_vectors(A: SCAlgebra, vectors) -> Subalgebra:
    """Subalgebra generated by ``vectors`` and the unit."""
    ech = QEchelon(A.dim)
    basis = []
    queue = [list(A.unit)] + [list(v) for v in vectors]
    for v in queue:
        if ech.add(v):
            basis.append(v)
    k = 0
    while k < len(basis):
        for j in range(k + 1):
            for w in (A.mul(basis[k], basis[j]), A.mul(basis[j], basis[k])):
                if ech.add(w):
                    basis.append(w)
        k += 1
    return Subalgebra(A, tuple(tuple(v) for v in basis))


def centralizer(A: SCAlgebra, B) -> Subalgebra:
    """{z in A : z b = b z for every b in B}."""
    vecs = B.basis if isinstance(B, Subalgebra) else B
    rows = []
    cols_cache = [A.basis_vector(i) for i in range(A.dim)]
    for b in vecs:
        left = [A.mul(e, b) for e in cols_cache]       # e_i b
        right = [A.mul(b, e) for e in cols_cache]      # b e_i
        for k in range(A.dim):
            row = [left[i][k] - right[i][k] for i in range(A.dim)]
            if any(row):
                rows.append(row)
    if not rows:
        return A.whole()
    basis = nullspace_q(rows, A.dim)
    return Subalgebra(A, tuple(tuple(v) for v in basis))


def center(A: SCAlgebra) -> Subalgebra:
    return centralizer(A, [A.basis_vector(i) for i in range(A.dim)])


def is_semisimple(A: SCAlgebra) -> bool:
    """Dickson: in characteristic 0, semisimple iff the trace form is nondegenerate."""
    return rank_q(A.trace_form(), A.dim) == A.dim


# ---------------------------------------------------------------------------
# rational polynomials (only what field tests need)
# ---------------------------------------------------------------------------

def _primitive_int(f) -> list:
    f = [Fraction(c) for c in f]
    while f and f[-1] == 0:
        f.pop()
    den = 1
    for c in f:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in f]
    g = 0
    for c in ints:
        g = _gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _eval(f, x):
    v = 0
    for c in reversed(f):
        v = v * x + c
    return v


def _divisors(n: int) -> list:
    n = abs(n)
    out = []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
    return sorted(out)


def _poly_divmod_q(f, g):
    f = [Fraction(c) for c in f]
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 1)
    while len(f) >= len(g) and any(f):
        c = f[-1] / g[-1]
        shift = len(f) - len(g)
        q[shift] = c
        for i, gc in enumerate(g):
            f[shift + i] -= c * gc
        f.pop()
        while f and f[-1] == 0:
            f.pop()
    return q, f


def _interpolate(xs, ys) -> list:
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        for k in range(n):
            coeffs[k] += ys[i] * basis[k] / denom
    return coeffs


def _irreducible_mod_some_prime(f) -> bool:
    from .fpoly import is_irreducible
    from .linalg import is_prime
    for p in range(3, 200, 2):
        if not is_prime(p) or f[-1] % p == 0:
            continue
        if is_irreducible([c % p for c in f], p):
            return True
    return False


def rational_factor(f):
    """A nontrivial factor of f over Q (ascending coefficients), or None if irreducible.

    Kronecker's method: a factor of degree e is pinned down by its values at
    e + 1 integers, each of which divides the corresponding value of f.
    """
    f = _primitive_int(f)
    d = len(f) - 1
    if d <= 1:
        return None
    if _irreducible_mod_some_prime(f):
        return None
    points = []
    x = 0
    while len(points) < d // 2 + 1:
        v = _eval(f, x)
        if v == 0:
            return [-x, 1]
        points.append((x, v))
        x = -x if x > 0 else -x + 1
    for e in range(1, d // 2 + 1):
        xs = [Fraction(px) for px, _ in points[:e + 1]]
        choices = [_divisors(v) for _, v in points[:e + 1]]
        for signs in product((1, -1), repeat=e):
            for vals in product(*choices):
                ys = [Fraction(vals[0])] + [Fraction(s * v) for s, v in zip(signs, vals[1:])]
                g = _interpolate(xs, ys)
                while g and g[-1] == 0:
                    g.pop()
                if len(g) - 1 != e or any(c.denominator != 1 for c in g):
                    continue
                _, r = _poly_divmod_q(f, g)
                if not r:
                    return [int(c) for c in g]
    return None


def minimal_polynomial(A: SCAlgebra, x) -> list:
    """Monic minimal polynomial of x over Q, ascending coefficients."""
    powers = [list(A.unit)]
    ech = QEchelon(A.dim)
    ech.add(powers[0])
    while True:
        nxt = A.mul(powers[-1], x)
        if not ech.add(nxt):
            powers.append(nxt)
            k = len(powers)
            rows = [[powers[j][i] for j in range(k)] for i in range(A.dim)]
            v = nullspace_q(rows, k)[0]
            lead = v[-1]
            return [Fraction(c) / lead for c in v]
        powers.append(nxt)


def field_status(S: Subalgebra, tries: int = 60, seed: int = 0) -> bool:
    """Decide whether a commutative subalgebra containing 1 is a field.

    A commutative Q-algebra of dimension k is a field iff some element has an
    irreducible minimal polynomial of degree k.  A reducible minimal
    polynomial g h (coprime) yields zero divisors g(x), h(x), so the sweep
    stops at the first decisive element.
    """
    A = S.ambient
    if not S.is_commutative():
        return False
    if not is_semisimple(S.induced()):
        return False
    k = S.dim
    rng = random.Random(seed)
    candidates = [list(v) for v in S.basis]
    for i in range(1, k):
        for j in range(i + 1, k):
            candidates.append([a + b for a, b in zip(S.basis[i], S.basis[j])])
    for _ in range(tries):
        coeffs = [rng.randint(-3, 3) for _ in S.basis]
        candidates.append(S.lift(coeffs))
    for x in candidates:
        mp = minimal_polynomial(A, x)
        if rational_factor(mp) is not None:
            return False
        if len(mp) - 1 == k:
            return True
    raise NotAField("field test inconclusive: no primitive element found")


# ---------------------------------------------------------------------------
# instance construction: matrix algebras with companion-embedded subfields
# ---------------------------------------------------------------------------

FIELD_POLYS = {
    "x^2-2": (-2, 0, 1),
    "x^2+1": (1, 0, 1),
    "x^3-2": (-2, 0, 0, 1),
    "x^4+1": (1, 0, 0, 0, 1),
    "Phi_5": (1, 1, 1, 1, 1),
}


def companion(f) -> list:
    """Companion matrix of monic f (ascending coefficients)."""
    d = len(f) - 1
    C = [[Fraction(0)] * d for _ in range(d)]
    for i in range(1, d):
        C[i][i - 1] = Fraction(1)
    for i in range(d):
        C[i][d - 1] = Fraction(-f[i])
    return C


def _power_basis(C) -> list:
    d = len(C)
    out = [[[Fraction(int(i == j)) for j in range(d)] for i in range(d)]]
    for _ in range(d - 1):
        out.append(mat_mul_q(out[-1], C))
    return out


def kron(X, Y) -> list:
    return [[x * y for x in rx for y in ry] for rx in X for ry in Y]


def identity_q(d: int) -> list:
    return [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]


def elementary(a: int, i: int, j: int) -> list:
    E = [[Fraction(0)] * a for _ in range(a)]
    E[i][j] = Fraction(1)
    return E


def matrix_field_basis(a: int, f) -> list:
    """Basis of M_a(K), K = Q[x]/(f), realized inside M_{a deg f}(Q)."""
    powers = _power_basis(companion(f))
    return [kron(elementary(a, i, j), P) for i in range(a) for j in range(a) for P in powers]


def random_unimodular(d: int, rng: random.Random, steps: int = None) -> tuple:
    """(P, P^-1) for a random product of elementary integer matrices."""
    P = identity_q(d)
    Pinv = identity_q(d)
    for _ in range(steps if steps is not None else 2 * d):
        i, j = rng.sample(range(d), 2) if d > 1 else (0, 0)
        if i == j:
            continue
        c = rng.choice((-2, -1, 1, 2))
        # P <- P (I + c E_ij), P^-1 <- (I - c E_ij) P^-1
        for row in P:
            row[j] += c * row[i]
        Pinv[i] = [x - c * y for x, y in zip(Pinv[i], Pinv[j])]
    return P, Pinv


def conjugate(P, X, Pinv) -> list:
    return mat_mul_q(mat_mul_q(Pinv, X), P)


def flatten(M) -> tuple:
    return tuple(x for row in M for x in row)


@dataclass(frozen=True)
class CentralizerInstance:
    label: str
    d: int
    B_matrices: tuple


def centralizer_instance(seed: int, max_d: int = 6) -> CentralizerInstance:
    """Simple subalgebra B = M_a(K) (x) I_b inside M_d(Q), conjugated by a unimodular matrix."""
    rng = random.Random(seed)
    while True:
        name = rng.choice(["Q"] + sorted(FIELD_POLYS))
        f = (0, 1) if name == "Q" else FIELD_POLYS[name]
        e = len(f) - 1
        a = rng.randint(1, 3)
        b = rng.randint(1, 3)
        d = a * e * b
        if d <= max_d and d >= 2:
            break
    mats = [kron(m, identity_q(b)) for m in matrix_field_basis(a, f)]
    P, Pinv = random_unimodular(d, rng)
    mats = tuple(tuple(map(tuple, conjugate(P, m, Pinv))) for m in mats)
    return CentralizerInstance(f"M_{a}({name}) (x) I_{b} in M_{d}(Q)", d, mats)


def embed_in_matrix_algebra(A: SCAlgebra, d: int, mats) -> Subalgebra:
    """Coordinates of matrices in M_d(Q)'s E_ab basis are just their entries."""
    return Subalgebra(A, tuple(flatten(m) for m in mats))


# ---------------------------------------------------------------------------
# dimension bound for centralizers of subfields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CentralizerBoundReport:
    lhs: Fraction          # dim_E Z_A(E)
    rhs: Fraction          # (d_A [k:Q] / [E:Q])^2
    equality: bool
    e_contains_k: bool
    degree_divides: bool   # [E:Q] divides d_A [k:Q]
    center_is_kE: bool     # center of Z_A(E) equals the compositum kE

    @property
    def bound_holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def biconditional_holds(self) -> bool:
        return self.equality == self.e_contains_k


def verify_centralizer_bound(A: SCAlgebra, E: Subalgebra) -> CentralizerBoundReport:
    if not is_semisimple(A):
        raise NotSimple("algebra is not semisimple")
    k = center(A)
    try:
        if not field_status(k):
            raise NotSimple("center is not a field")
    except NotAField as exc:
        raise NotSimple(str(exc)) from exc
    if not (E.contains_unit() and E.is_closed()):
        raise NotAField("E is not a unital subalgebra")
    if not field_status(E):
        raise NotAField("E is not a field")
    kdeg, edeg = k.dim, E.dim
    dA = isqrt(A.dim // kdeg)
    if dA * dA * kdeg != A.dim:
        raise NotSimple("dimension over the center is not a square")
    Z = centralizer(A, E)
    lhs = Fraction(Z.dim, edeg)
    rhs = Fraction(dA * kdeg, edeg) ** 2
    kE = subalgebra_from_vectors(A, [A.mul(x, y) for x in k.basis for y in E.basis])
    zc = center(Z.induced())
    zc_amb = Subalgebra(A, tuple(tuple(Z.lift(v)) for v in zc.basis))
    return CentralizerBoundReport(
        lhs=lhs,
        rhs=rhs,
        equality=lhs == rhs,
        e_contains_k=E.contains_space(k),
        degree_divides=(dA * kdeg) % edeg == 0,
        center_is_kE=zc_amb.same_space(kE),
    )


@dataclass(frozen=True)
class CentralizerBoundInstance:
    label: str
    A: SCAlgebra
    E: Subalgebra


def centralizer_bound_instances() -> list:
    """A = M_a(K) realized in M_{a deg K}(Q), with several subfields E.

    E ranges over Q, the center K, a field L embedded in M_a(Q) by companion
    blocks, and the compositum KL, so both the strict and the equality case
    of the bound occur.
    """
    base = {"Q": (0, 1), "Q(sqrt2)": (-2, 0, 1), "Q(i)": (1, 0, 1), "Q(cbrt2)": (-2, 0, 0, 1)}
    inner = {"sqrt2": (-2, 0, 1), "i": (1, 0, 1), "cbrt2": (-2, 0, 0, 1)}
    out = []
    for kname, kf in base.items():
        e = len(kf) - 1
        for a in (1, 2, 3):
            if a * a * e > 36:
                continue
            mats = matrix_field_basis(a, kf)
            A, coords = SCAlgebra.from_matrices_with_coords(mats)
            size = a * e

            def sub(matrices):
                return subalgebra_from_vectors(A, [coords(m) for m in matrices])

            out.append(CentralizerBoundInstance(f"M_{a}({kname}), E=Q", A, Subalgebra(A, (A.unit,))))
            if e > 1:
                out.append(CentralizerBoundInstance(f"M_{a}({kname}), E=center", A, center(A)))
            for lname, lf in inner.items():
                deg = len(lf) - 1
                if a % deg or lf == kf:
                    continue
                block = kron(kron(identity_q(a // deg), companion(lf)), identity_q(e))
                assert len(block) == size
                out.append(CentralizerBoundInstance(f"M_{a}({kname}), E=Q({lname})", A, sub([block])))
                if e > 1:
                    kgen = kron(identity_q(a), companion(kf))
                    out.append(CentralizerBoundInstance(f"M_{a}({kname}), E={kname}({lname})", A,
                                               sub([block, kgen])))
    return out
