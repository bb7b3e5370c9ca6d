"""Exact linear algebra over prime fields, the integers and the rationals.

Matrices are plain lists of rows.  Nothing here uses floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence


class NoSolution(ValueError):
    """Raised by :func:`solve_linear_q` when the system is inconsistent."""

    def __init__(self, rank_a: int, rank_ab: int):
        super().__init__(f"inconsistent system: rank(A)={rank_a} < rank(A|b)={rank_ab}")
        self.rank_a = rank_a
        self.rank_ab = rank_ab


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# F_ell
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FpMatrix:
    modulus: int
    rows: tuple

    def __post_init__(self):
        if not is_prime(self.modulus) or self.modulus >= 2**31:
            raise ValueError(f"modulus must be a prime below 2^31, got {self.modulus}")
        p = self.modulus
        rows = tuple(tuple(int(x) % p for x in r) for r in self.rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        return cls(p, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        return FpMatrix(self.modulus, mat_mul_mod(self.rows, other.rows, self.modulus))

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.modulus, tuple(zip(*self.rows)))

    def apply(self, v: Sequence[int]) -> tuple:
        p = self.modulus
        return tuple(sum(a * b for a, b in zip(r, v)) % p for r in self.rows)

    def rank_kernel(self):
        return rank_kernel(self)


def mat_mul_mod(a, b, p: int) -> list:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) % p for c in bt] for r in a]


def rref_mod(rows, p: int, ncols: int | None = None):
    """Reduced row echelon form over F_p.  Returns (rows, pivot_columns)."""
    m = [[x % p for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [x * inv % p for x in m[r]]
        pr = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace_mod(rows, ncols: int, p: int) -> list:
    """Basis of {v : rows . v = 0} over F_p, as tuples."""
    red, pivots = rref_mod(rows, p, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-row[f]) % p
        basis.append(tuple(v))
    return basis


def rank_mod(rows, p: int) -> int:
    return len(rref_mod(rows, p)[1]) if rows else 0


def rank_kernel(M: FpMatrix):
    """Rank and a kernel basis of M (column-vector convention M.v = 0)."""
    kernel = nullspace_mod(M.rows, M.ncols, M.modulus)
    return M.ncols - len(kernel), kernel


def inverse_mod(a, p: int) -> list:
    n = len(a)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(a)]
    red, piv = rref_mod(aug, p, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in red]


def det_mod(a, p: int) -> int:
    m = [[x % p for x in r] for r in a]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % p
        inv = pow(m[c][c], p - 2, p)
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv % p
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[c])]
    return det % p


class EchelonBasis:
    """Incrementally maintained echelon basis of a subspace of F_p^dim.

    Used for spinning vectors under a group action, where vectors arrive one
    at a time and only membership plus the final basis matter.
    """

    __slots__ = ("p", "dim", "rows", "pivots")

    def __init__(self, p: int, dim: int):
        self.p = p
        self.dim = dim
        self.rows = []      # normalised: pivot entry 1
        self.pivots = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, v) -> list:
        p = self.p
        w = list(v)
        for row, c in zip(self.rows, self.pivots):
            f = w[c]
            if f:
                w = [(x - f * y) % p for x, y in zip(w, row)]
        return w

    def add(self, v) -> bool:
        """Insert v; returns True when v was not already in the span."""
        w = self.reduce(v)
        c = next((i for i, x in enumerate(w) if x), None)
        if c is None:
            return False
        inv = pow(w[c], self.p - 2, self.p)
        self.rows.append([x * inv % self.p for x in w])
        self.pivots.append(c)
        return True

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def canonical(self) -> tuple:
        """Reduced row echelon basis as a hashable key."""
        red, _ = rref_mod(self.rows, self.p, self.dim)
        return tuple(tuple(r) for r in red)


# ---------------------------------------------------------------------------
# Integers
# ---------------------------------------------------------------------------

def det_int(a) -> int:
    """Bareiss fraction-free determinant."""
    m = [list(r) for r in a]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if m[i][k]), None)
            if sw is None:
                return 0
            m[k], m[sw] = m[sw], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def mat_mul(a, b) -> list:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]


@dataclass(frozen=True)
class SmithForm:
    """U . M . V = D with D diagonal and d_1 | d_2 | ...

    ``invariant_factors`` has length min(rows, cols); trailing zeros mark
    free rank.
    """

    invariant_factors: tuple
    U: tuple
    V: tuple
    D: tuple


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M) -> SmithForm:
    """Smith normal form by elimination with smallest-pivot selection."""
    A = [list(map(int, r)) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):      # row_dst += f * row_src
        A[dst] = [x + f * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):      # col_dst += f * col_src
        for row in A:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        done = False
            if not done:
                # bring the smallest remaining entry of row/column t to the pivot
                cands = [(abs(A[i][t]), i, "r") for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), j, "c") for j in range(t, n) if A[t][j]]
                _, k, kind = min(cands)
                if kind == "r":
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            # divisibility: pivot must divide every remaining entry
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    diag = tuple(A[i][i] for i in range(min(m, n)))
    return SmithForm(diag, tuple(map(tuple, U)), tuple(map(tuple, V)), tuple(map(tuple, A)))


# ---------------------------------------------------------------------------
# Rationals
# ---------------------------------------------------------------------------

def _integral_row(row) -> list:
    den = 1
    for x in row:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return [int(Fraction(x) * den) for x in row]


def _primitive(row):
    g = 0
    for x in row:
        g = gcd(g, x)
        if g == 1:
            break
    if g > 1:
        row = [x // g for x in row]
    lead = next((x for x in row if x), 0)
    if lead < 0:
        row = [-x for x in row]
    return row


class QEchelon:
    """Incremental fraction-free echelon form of a rational row space.

    Rows are stored as primitive integer vectors; pivots are kept unique per
    column so that reduction is exact without ever forming fractions.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows = []
        self.pivots = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, row) -> list:
        w = _integral_row(row) if any(isinstance(x, Fraction) for x in row) else list(row)
        for r, c in zip(self.rows, self.pivots):
            if w[c]:
                a, b = r[c], w[c]
                g = gcd(a, b)
                fa, fb = a // g, b // g
                w = [fa * x - fb * y for x, y in zip(w, r)]
                w = _primitive(w)
        return w

    def add(self, row) -> bool:
        w = self.reduce(row)
        c = next((i for i, x in enumerate(w) if x), None)
        if c is None:
            return False
        w = _primitive(w)
        # keep earlier rows free of the new pivot column
        for k, (r, pc) in enumerate(zip(self.rows, self.pivots)):
            if r[c]:
                a, b = w[c], r[c]
                g = gcd(a, b)
                self.rows[k] = _primitive([(a // g) * x - (b // g) * y for x, y in zip(r, w)])
        self.rows.append(w)
        self.pivots.append(c)
        return True

    def contains(self, row) -> bool:
        return not any(self.reduce(row))

    def nullspace(self) -> list:
        """Basis (Fractions) of the orthogonal complement {x : r.x = 0 for all rows}."""
        piv = dict(zip(self.pivots, self.rows))
        free = [c for c in range(self.ncols) if c not in piv]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for c, r in piv.items():
                v[c] = Fraction(-r[f], r[c])
            basis.append(v)
        return basis

    def basis(self) -> list:
        """Reduced echelon basis with Fraction entries (pivot entries 1)."""
        out = []
        for r, c in sorted(zip(self.rows, self.pivots), key=lambda t: t[1]):
            out.append([Fraction(x, r[c]) for x in r])
        return out


def nullspace_q(rows, ncols: int) -> list:
    ech = QEchelon(ncols)
    for r in rows:
        ech.add(r)
        if len(ech) == ncols:
            return []
    return ech.nullspace()


def rank_q(rows, ncols: int | None = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    ech = QEchelon(ncols if ncols is not None else len(rows[0]))
    for r in rows:
        ech.add(r)
    return len(ech)


def solve_linear_q(A, b) -> list:
    """Return one exact solution x of A.x = b, or raise NoSolution."""
    A = [[Fraction(x) for x in r] for r in A]
    b = [Fraction(x) for x in b]
    if len(A) != len(b):
        raise ValueError(f"dimension mismatch: {len(A)} equations, {len(b)} right-hand sides")
    ncols = len(A[0]) if A else 0
    ech = QEchelon(ncols + 1)
    for r, rhs in zip(A, b):
        ech.add(r + [rhs])
    rank_ab = len(ech)
    if ncols in ech.pivots:
        raise NoSolution(rank_ab - 1, rank_ab)
    x = [Fraction(0)] * ncols
    for r, c in zip(ech.rows, ech.pivots):
        x[c] = Fraction(r[ncols], r[c])
    return x


def mat_mul_q(a, b) -> list:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in bt] for r in a]
