"""Closed-form invariants of the abelian variety J^(f,q) attached to y^q = f(x)."""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import is_prime
from .permmod import Kind


class CharMismatch(ValueError):
    pass


class ExceptionalPair(ValueError):
    pass


@dataclass(frozen=True)
class JacContext:
    n: int
    p: int
    r: int = 1
    char_K: int | None = 0        # 0, a prime, or None for unknown
    has_zeta_q: bool = False

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("n must be >= 3")
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.char_K is not None and self.char_K != 0:
            if not is_prime(self.char_K):
                raise ValueError(f"characteristic {self.char_K} is neither 0 nor prime")
            if self.char_K == self.p:
                raise ValueError("char K must differ from p")

    @property
    def q(self) -> int:
        return self.p ** self.r

    @property
    def k(self) -> int:
        return self.n // self.q

    @property
    def c(self) -> int:
        return self.n % self.q

    @property
    def cyclotomic_degree(self) -> int:
        """[Q(zeta_q):Q] = (p - 1) p^(r-1)."""
        return (self.p - 1) * self.p ** (self.r - 1)

    @property
    def case(self) -> str:
        """'i' (p does not divide n), 'ii' (q | n) or 'iii' (p | n, q does not)."""
        if self.n % self.p:
            return "i"
        if self.n % self.q == 0:
            return "ii"
        return "iii"


@dataclass(frozen=True)
class JacobianDim:
    two_dim: int
    d_value: int

    @property
    def dim(self) -> int:
        return self.two_dim // 2


def jacobian_dim(ctx: JacContext) -> JacobianDim:
    d = ctx.n - 2 if ctx.case == "ii" else ctx.n - 1
    return JacobianDim(d * ctx.cyclotomic_degree, d)


@dataclass(frozen=True)
class Multiplicity:
    values: frozenset

    @classmethod
    def exactly(cls, v: int) -> "Multiplicity":
        return cls(frozenset([v]))

    @classmethod
    def one_of(cls, *vs: int) -> "Multiplicity":
        return cls(frozenset(vs))

    @property
    def is_exact(self) -> bool:
        return len(self.values) == 1

    @property
    def exact_value(self) -> int | None:
        return next(iter(self.values)) if self.is_exact else None

    def __str__(self):
        if self.is_exact:
            return f"Exactly({self.exact_value})"
        return "OneOf{" + ",".join(map(str, sorted(self.values))) + "}"


def _coprime_case(p: int, q: int, k: int, c: int) -> Multiplicity:
    if c == 1:
        return Multiplicity.exactly(k)
    if p % 2:
        return Multiplicity.exactly(1)
    # p = 2 < q here, since q = 2 forces c = 1
    if k % 2 == 1 or 2 * c < q:
        return Multiplicity.exactly(1)
    return Multiplicity.one_of(1, 2)


def multiplicity_gcd(ctx: JacContext) -> Multiplicity:
    if ctx.char_K != 0:
        raise CharMismatch("the multiplicity formulas assume characteristic 0")
    p, q, k, c = ctx.p, ctx.q, ctx.k, ctx.c
    case = ctx.case
    if case == "i":
        return _coprime_case(p, q, k, c)
    if case == "ii":
        # n - 1 = (k - 1) q + (q - 1): the coprime case with shifted data
        return _coprime_case(p, q, k - 1, q - 1)
    if ctx.n < 5:
        raise ExceptionalPair(f"p | n, q does not divide n needs n >= 5 (n={ctx.n})")
    return Multiplicity.exactly(1)


def galois_module_kind(ctx: JacContext) -> Kind:
    if (ctx.n, ctx.p) in ((3, 3), (4, 2)):
        raise ExceptionalPair(f"(n, p) = ({ctx.n}, {ctx.p}) is exceptional")
    return {"i": Kind.ZERO_SUM, "ii": Kind.HEART, "iii": Kind.QUOTIENT}[ctx.case]
