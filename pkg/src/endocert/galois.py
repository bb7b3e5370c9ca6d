"""Heuristic evidence about Gal(f) for integer polynomials.

Frobenius cycle types come from degree patterns of f mod good primes
(Dedekind).  Nothing here certifies a Galois group: the classification is a
hint, and the verdict engine never promotes it to a hypothesis.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from . import fpoly
from .linalg import det_int, is_prime


class NotSquarefree(ValueError):
    pass


class PolynomialSyntaxError(ValueError):
    def __init__(self, msg: str, text: str, column: int):
        super().__init__(f"{msg} at column {column + 1}: {text!r}")
        self.column = column + 1


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple       # ascending degree, primitive content, positive leading coefficient

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        if len(c) < 2:
            raise ValueError("polynomial must have degree >= 1")
        g = 0
        for x in c:
            g = gcd(g, x)
        c = [x // g for x in c]
        if c[-1] < 0:
            c = [-x for x in c]
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1]

    def derivative(self) -> list:
        return [i * a for i, a in enumerate(self.coeffs)][1:]

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            a = self.coeffs[i]
            if not a:
                continue
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            if i == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("x" if i == 1 else f"x^{i}")
            terms.append((sign, body))
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


_TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*(\*?\s*x(?:\s*\^\s*(\d+))?)?\s*")


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse ``"x^5 - x - 1"`` or an ascending coefficient list ``"-1, -1, 0, 0, 0, 1"``."""
    if "x" not in text:
        coeffs = []
        pos = 0
        for part in text.split(","):
            tok = part.strip()
            if not re.fullmatch(r"[+-]?\d+", tok):
                raise PolynomialSyntaxError(f"bad coefficient {tok!r}", text, pos + (len(part) - len(part.lstrip())))
            coeffs.append(int(tok))
            pos += len(part) + 1
        return _checked(coeffs, text)
    coeffs: dict = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise PolynomialSyntaxError("unexpected character", text, pos)
        sign, num, xpart, exp = m.groups()
        if sign is None and not first:
            raise PolynomialSyntaxError("missing '+' or '-'", text, pos)
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        e = (int(exp) if exp else 1) if xpart else 0
        coeffs[e] = coeffs.get(e, 0) + c
        pos = m.end()
        first = False
    top = max(coeffs)
    return _checked([coeffs.get(i, 0) for i in range(top + 1)], text)


def _checked(coeffs, text) -> IntPolynomial:
    try:
        return IntPolynomial(tuple(coeffs))
    except ValueError as exc:
        raise PolynomialSyntaxError(str(exc), text, 0) from exc


def _qgcd(f, g) -> list:
    f = [Fraction(x) for x in f]
    g = [Fraction(x) for x in g]
    while any(g):
        while g and g[-1] == 0:
            g.pop()
        r = f[:]
        while len(r) >= len(g) and any(r):
            c = r[-1] / g[-1]
            s = len(r) - len(g)
            for i, gc in enumerate(g):
                r[s + i] -= c * gc
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        f, g = g, r
    return f


def is_squarefree(f: IntPolynomial) -> bool:
    return len(_qgcd(list(f.coeffs), f.derivative())) == 1


def sylvester(f, g) -> list:
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [0] * size
        for j, a in enumerate(reversed(f)):
            row[i + j] = a
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for j, a in enumerate(reversed(g)):
            row[i + j] = a
        rows.append(row)
    return rows


def resultant(f, g) -> int:
    return det_int(sylvester(list(f), list(g)))


def discriminant(f: IntPolynomial) -> int:
    """(-1)^(n(n-1)/2) Res(f, f') / lc(f)."""
    n = f.degree
    res = resultant(f.coeffs, f.derivative())
    if res == 0:
        raise NotSquarefree(f"{f} has a repeated root")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    disc, rem = divmod(sign * res, f.lead)
    assert rem == 0
    return disc


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


@dataclass(frozen=True)
class PrimeRecord:
    prime: int
    status: str              # "good" | "Ramified" | "BadLeading"
    pattern: tuple = ()


@dataclass(frozen=True)
class CycleTypeEvidence:
    degree: int
    records: tuple

    @property
    def observed(self) -> tuple:
        return tuple(sorted({r.pattern for r in self.records if r.status == "good"}, reverse=True))


def cycle_types(f: IntPolynomial, primes) -> CycleTypeEvidence:
    if not is_squarefree(f):
        raise NotSquarefree(f"{f} is not squarefree over Q")
    records = []
    for ell in primes:
        if not is_prime(ell):
            raise ValueError(f"{ell} is not prime")
        if f.lead % ell == 0:
            records.append(PrimeRecord(ell, "BadLeading"))
            continue
        fb = fpoly.reduce_poly(f.coeffs, ell)
        if not fpoly.is_squarefree(fb, ell):
            records.append(PrimeRecord(ell, "Ramified"))
            continue
        records.append(PrimeRecord(ell, "good", fpoly.degree_pattern(fb, ell)))
    return CycleTypeEvidence(f.degree, tuple(records))


def primes_up_to(bound: int) -> list:
    return [p for p in range(2, bound + 1) if is_prime(p)]


def _jordan_prime(pattern, n: int) -> int | None:
    """A prime part p0 that certifies A_n inside a primitive group: n/2 < p0 <= n - 3.

    p0 = n - 2 is also accepted for n in {5, 7}, where no primitive group
    other than A_n, S_n has order divisible by p0.
    """
    for part in pattern:
        if not is_prime(part) or 2 * part <= n:
            continue
        if part <= n - 3 or (part == n - 2 and n in (5, 7)):
            return part
    return None


@dataclass(frozen=True)
class Hint:
    label: str               # LikelySn | LikelyAn | Transitive | Inconclusive
    reasons: tuple = field(default_factory=tuple)
    certified: bool = False


def classify_heuristic(ev: CycleTypeEvidence, disc_is_square: bool) -> Hint:
    n = ev.degree
    obs = ev.observed
    reasons = []
    transitive = (n,) in obs
    if not transitive:
        return Hint("Inconclusive", ("no n-cycle observed",))
    reasons.append(f"{n}-cycle observed")
    p0 = None
    for pat in obs:
        p0 = _jordan_prime(pat, n)
        if p0:
            reasons.append(f"pattern {pat} contains a {p0}-cycle part")
            break
    if p0 is None:
        return Hint("Transitive", tuple(reasons))
    reasons.append("discriminant is a square" if disc_is_square else "discriminant is not a square")
    return Hint("LikelyAn" if disc_is_square else "LikelySn", tuple(reasons))
