"""Divisors supported on the branch points of y^q = f(x) when q | n.

Branch points are indexed 0..n-1.  Principal divisors supported there are
exactly D = sum (j + q b_P)(P) with sum b_P = -j m, which unwinds to the
closed test: deg D = 0 and all a_P congruent modulo q.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .linalg import is_prime, smith_normal_form


class NonzeroDegree(ValueError):
    pass


class ZeroSumViolated(ValueError):
    pass


@dataclass(frozen=True)
class CurveParams:
    n: int
    p: int
    r: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.n < 3:
            raise ValueError("n must be >= 3")
        if self.n % self.q:
            raise ValueError(f"q = {self.q} does not divide n = {self.n}")

    @property
    def q(self) -> int:
        return self.p ** self.r

    @property
    def m(self) -> int:
        return self.n // self.q

    @classmethod
    def from_q(cls, n: int, q: int) -> "CurveParams":
        for p in range(2, q + 1):
            if q % p == 0:
                r = 0
                x = q
                while x % p == 0:
                    x //= p
                    r += 1
                if x != 1:
                    raise ValueError(f"q = {q} is not a prime power")
                return cls(n, p, r)
        raise ValueError(f"q = {q} is not a prime power")


@dataclass(frozen=True)
class BranchDivisor:
    params: CurveParams
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(a) for a in self.coeffs))
        if len(self.coeffs) != self.params.n:
            raise ValueError(f"expected {self.params.n} coefficients, got {len(self.coeffs)}")

    @property
    def degree(self) -> int:
        return sum(self.coeffs)

    def scale(self, k: int) -> "BranchDivisor":
        return BranchDivisor(self.params, tuple(k * a for a in self.coeffs))

    def permute(self, sigma) -> "BranchDivisor":
        """sigma . D, moving the coefficient at P to sigma(P)."""
        out = [0] * self.params.n
        for i, a in enumerate(self.coeffs):
            out[sigma[i]] = a
        return BranchDivisor(self.params, tuple(out))


@dataclass(frozen=True)
class PrincipalWitness:
    D0: tuple
    j: int
    Q: int          # 0-based index of the fixed point Q


@dataclass(frozen=True)
class Principality:
    principal: bool
    witness: PrincipalWitness | None = None


def is_principal(D: BranchDivisor) -> Principality:
    """Closed-form test, with a witness D = q D_0 + j(sum(P) - n(Q)), Q the last point."""
    q, n = D.params.q, D.params.n
    a = D.coeffs
    if D.degree != 0 or any((x - a[0]) % q for x in a):
        return Principality(False)
    Q = n - 1
    j = a[Q] % q
    shifted = [x - j for x in a]
    shifted[Q] += j * n
    D0 = tuple(x // q for x in shifted)
    return Principality(True, PrincipalWitness(D0, j, Q))


def check_witness(D: BranchDivisor, w: PrincipalWitness) -> bool:
    q, n = D.params.q, D.params.n
    if sum(w.D0) != 0:
        return False
    rebuilt = [q * b + w.j for b in w.D0]
    rebuilt[w.Q] -= w.j * n
    return tuple(rebuilt) == D.coeffs


def scaled_class_is_zero(D: BranchDivisor) -> bool:
    """Is the class of p^(r-1) D zero?  Equivalent to all a_P congruent mod p."""
    if D.degree != 0:
        raise NonzeroDegree(f"divisor has degree {D.degree}")
    p = D.params.p
    return all((x - D.coeffs[0]) % p == 0 for x in D.coeffs)


# ---------------------------------------------------------------------------
# class group of degree-zero divisors on B modulo principal ones
# ---------------------------------------------------------------------------

def relation_matrix(params: CurveParams) -> list:
    """Principal relations in the coordinates of the basis (e_i - e_Q), i < n-1.

    Rows: q(e_i - e_Q) for each i, and sum_P e_P - n e_Q = sum_i (e_i - e_Q).
    """
    k = params.n - 1
    rows = [[params.q if i == j else 0 for j in range(k)] for i in range(k)]
    rows.append([1] * k)
    return rows


@dataclass(frozen=True)
class ClassGroupStructure:
    invariant_factors: tuple      # nontrivial factors only, divisibility chain
    lambda_torsion_dim: int


@lru_cache(maxsize=None)
def _snf(params: CurveParams):
    return smith_normal_form(relation_matrix(params))


def class_group(params: CurveParams) -> ClassGroupStructure:
    snf = _snf(params)
    factors = tuple(d for d in snf.invariant_factors if d != 1)
    # a free part would show up as zero factors; the relation lattice has full rank
    p, r = params.p, params.r
    shift = p ** (r - 1)
    rank = 0
    for d in factors:
        if d == 0:
            rank += 1
            continue
        if (d // gcd(d, shift)) % p == 0:
            rank += 1
    return ClassGroupStructure(factors, rank)


def _degree_zero_coords(D: BranchDivisor) -> list:
    if D.degree != 0:
        raise NonzeroDegree(f"divisor has degree {D.degree}")
    return list(D.coeffs[:-1])


def class_key(D: BranchDivisor) -> tuple:
    """Canonical invariant of the class of a degree-zero D, via the SNF transform."""
    snf = _snf(D.params)
    x = _degree_zero_coords(D)
    V = snf.V
    y = [sum(x[i] * V[i][j] for i in range(len(x))) for j in range(len(V[0]))]
    key = []
    for yj, d in zip(y, snf.invariant_factors):
        if d == 1:
            continue
        key.append(yj % d if d else yj)
    return tuple(key)


def reduced_representative(D: BranchDivisor) -> BranchDivisor:
    """Representative with coordinates in [0, q) on the first n-2 points, 0 on point n-2."""
    n, q = D.params.n, D.params.q
    x = _degree_zero_coords(D)
    c = x[n - 2]
    head = [(xi - c) % q for xi in x[:n - 2]]
    coeffs = head + [0, -sum(head)]
    return BranchDivisor(D.params, tuple(coeffs))


@dataclass(frozen=True)
class ClassRep:
    key: tuple
    representative: BranchDivisor

    @property
    def is_zero(self) -> bool:
        return not any(self.key)


def divisor_class(D: BranchDivisor) -> ClassRep:
    return ClassRep(class_key(D), reduced_representative(D))


def lift(phi, params: CurveParams) -> BranchDivisor:
    """Integer degree-zero lift of a zero-sum function phi: B -> F_p."""
    p = params.p
    if len(phi) != params.n:
        raise ValueError(f"expected {params.n} values, got {len(phi)}")
    a = [int(x) % p for x in phi]
    s = sum(a)
    if s % p:
        raise ZeroSumViolated(f"sum of phi is {s % p} mod {p}, not 0")
    a[-1] -= s
    return BranchDivisor(params, tuple(a))


def psi(phi, params: CurveParams) -> ClassRep:
    """Class of p^(r-1) D for a degree-zero lift D of phi."""
    D = lift(phi, params)
    return divisor_class(D.scale(params.p ** (params.r - 1)))


def _act_on_function(sigma, phi):
    out = [0] * len(phi)
    for i, x in enumerate(phi):
        out[sigma[i]] = x
    return out


def equivariance_check(sigma, params: CurveParams) -> bool:
    """Psi(sigma phi) == sigma Psi(phi) for phi = e_i - e_{n-1}, which span the zero-sum space."""
    n, p = params.n, params.p
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(n)):
        raise ValueError("sigma is not a permutation of the branch points")
    shift = p ** (params.r - 1)
    for i in range(n - 1):
        phi = [0] * n
        phi[i] = 1
        phi[n - 1] = p - 1
        left = psi(_act_on_function(sigma, phi), params)
        D = lift(phi, params).scale(shift)
        right = class_key(D.permute(sigma))
        if left.key != right:
            return False
    return True
