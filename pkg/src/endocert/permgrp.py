"""Permutation groups on {0..n-1} backed by a base and strong generating set.

Permutations are tuples of images, 0-based.  Products compose left to right:
``perm_mul(a, b)`` applies ``a`` first, then ``b``.  Cycle notation at the
I/O boundary is 1-based, e.g. ``"(1 2 3)(4 5)"``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from math import factorial
from typing import Iterable, Sequence

DEFAULT_ENUM_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    pass


class CycleSyntaxError(ValueError):
    def __init__(self, msg: str, text: str, column: int):
        super().__init__(f"{msg} at column {column + 1}: {text!r}")
        self.text = text
        self.column = column + 1


# ---------------------------------------------------------------------------
# permutation primitives
# ---------------------------------------------------------------------------

def identity_perm(n: int) -> tuple:
    return tuple(range(n))


def perm_mul(a, b) -> tuple:
    return tuple(b[x] for x in a)


def perm_inv(a) -> tuple:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def is_identity(a) -> bool:
    return all(i == x for i, x in enumerate(a))


def perm_order(a) -> int:
    from math import lcm
    seen = set()
    o = 1
    for i in range(len(a)):
        if i in seen:
            continue
        length = 0
        j = i
        while j not in seen:
            seen.add(j)
            j = a[j]
            length += 1
        o = lcm(o, length)
    return o


def perm_pow(a, k: int) -> tuple:
    if k < 0:
        a, k = perm_inv(a), -k
    result = identity_perm(len(a))
    while k:
        if k & 1:
            result = perm_mul(result, a)
        a = perm_mul(a, a)
        k >>= 1
    return result


def cycle_type(a) -> tuple:
    """Cycle lengths (including fixed points), sorted descending."""
    seen = set()
    lengths = []
    for i in range(len(a)):
        if i in seen:
            continue
        length = 0
        j = i
        while j not in seen:
            seen.add(j)
            j = a[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def extend_perm(a, n: int) -> tuple:
    return tuple(a) + tuple(range(len(a), n))


def format_cycles(a) -> str:
    out = []
    seen = set()
    for i in range(len(a)):
        if i in seen or a[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = a[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = a[j]
        out.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(out) or "()"


def _parse_one(text: str, offset: int, full: str) -> list:
    """Parse a product of disjoint-or-not cycles into a list of 0-based cycles."""
    cycles = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch != "(":
            raise CycleSyntaxError("expected '('", full, offset + i)
        j = text.find(")", i)
        if j < 0:
            raise CycleSyntaxError("unclosed cycle", full, offset + i)
        body = text[i + 1:j]
        if "(" in body:
            raise CycleSyntaxError("nested '('", full, offset + i + 1 + body.index("("))
        pts = []
        for tok_start, tok in _tokens(body.replace(",", " ")):
            if not tok.isdigit() or int(tok) < 1:
                raise CycleSyntaxError(f"bad point {tok!r}", full, offset + i + 1 + tok_start)
            pts.append(int(tok) - 1)
        if len(set(pts)) != len(pts):
            raise CycleSyntaxError("repeated point in cycle", full, offset + i)
        cycles.append(pts)
        i = j + 1
    return cycles


def _tokens(s: str):
    i = 0
    while i < len(s):
        if s[i].isspace():
            i += 1
            continue
        j = i
        while j < len(s) and not s[j].isspace():
            j += 1
        yield i, s[i:j]
        i = j


def _split_generators(text: str):
    """Split on commas/semicolons that are outside parentheses."""
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise CycleSyntaxError("unbalanced ')'", text, i)
        elif ch in ",;" and depth == 0:
            yield start, text[start:i]
            start = i + 1
    if depth > 0:
        raise CycleSyntaxError("unclosed cycle", text, text.rfind("("))
    yield start, text[start:]


def _cycles_to_perm(cycles, n: int) -> tuple:
    # cycles compose left to right, matching perm_mul
    result = identity_perm(n)
    for cyc in cycles:
        img = list(range(n))
        for k, x in enumerate(cyc):
            img[x] = cyc[(k + 1) % len(cyc)]
        result = perm_mul(result, tuple(img))
    return result


def parse_perm(text: str, n: int | None = None) -> tuple:
    cycles = _parse_one(text, 0, text)
    top = max((x for c in cycles for x in c), default=-1) + 1
    if n is None:
        n = top
    elif top > n:
        raise CycleSyntaxError(f"point {top} exceeds degree {n}", text, 0)
    return _cycles_to_perm(cycles, n)


def parse_generators(text: str, n: int | None = None):
    """Parse ``"(1 2),(1 2 3 4 5)"`` into (list of perms, degree)."""
    parsed = []
    for off, chunk in _split_generators(text):
        if not chunk.strip():
            raise CycleSyntaxError("empty generator", text, off)
        parsed.append(_parse_one(chunk, off, text))
    top = max((x for cycles in parsed for c in cycles for x in c), default=-1) + 1
    if n is None:
        n = max(top, 1)
    elif top > n:
        raise CycleSyntaxError(f"point {top} exceeds degree {n}", text, 0)
    return [_cycles_to_perm(c, n) for c in parsed], n


# ---------------------------------------------------------------------------
# Schreier-Sims
# ---------------------------------------------------------------------------

def _orbit_transversal(point: int, gens) -> dict:
    trans = {point: identity_perm(len(gens[0])) if gens else None}
    if not gens:
        return trans
    queue = [point]
    for b in queue:
        u = trans[b]
        for s in gens:
            c = s[b]
            if c not in trans:
                trans[c] = perm_mul(u, s)
                queue.append(c)
    return trans


@dataclass
class BSGS:
    degree: int
    base: list
    strong_gens: list
    transversals: list = field(default_factory=list)

    def gens_at(self, level: int) -> list:
        base = self.base[:level]
        return [g for g in self.strong_gens if all(g[b] == b for b in base)]

    def sift(self, g, start: int = 0):
        for i in range(start, len(self.base)):
            b = g[self.base[i]]
            t = self.transversals[i]
            if b not in t:
                return g, i
            g = perm_mul(g, perm_inv(t[b]))
        return g, len(self.base)

    def order(self) -> int:
        o = 1
        for t in self.transversals:
            o *= len(t)
        return o


def schreier_sims(gens, degree: int, base_prefix: Sequence[int] = ()) -> BSGS:
    """Deterministic incremental Schreier-Sims."""
    ident = identity_perm(degree)
    strong = [tuple(g) for g in gens if not is_identity(g)]
    base = list(base_prefix)
    for g in strong:
        if all(g[b] == b for b in base):
            base.append(next(i for i in range(degree) if g[i] != i))
    bs = BSGS(degree, base, strong)

    def rebuild(level):
        gl = bs.gens_at(level)
        t = _orbit_transversal(bs.base[level], gl) if gl else {bs.base[level]: ident}
        if level < len(bs.transversals):
            bs.transversals[level] = t
        else:
            bs.transversals.append(t)

    for lev in range(len(base)):
        rebuild(lev)

    i = len(bs.base) - 1
    while i >= 0:
        restart = False
        gi = bs.gens_at(i)
        trans = bs.transversals[i]
        for beta, u in list(trans.items()):
            for s in gi:
                img = s[beta]
                sch = perm_mul(perm_mul(u, s), perm_inv(trans[img]))
                if is_identity(sch):
                    continue
                h, j = bs.sift(sch, i + 1)
                if j < len(bs.base) or not is_identity(h):
                    if j == len(bs.base):
                        bs.base.append(next(x for x in range(degree) if h[x] != x))
                    bs.strong_gens.append(h)
                    for lev in range(i + 1, j + 1):
                        rebuild(lev)
                    i = j
                    restart = True
                    break
            if restart:
                break
        if not restart:
            i -= 1
    return bs


# ---------------------------------------------------------------------------
# PermGroup
# ---------------------------------------------------------------------------

class PermGroup:
    """A permutation group given by generators; immutable after construction."""

    def __init__(self, generators: Iterable, degree: int | None = None, name: str | None = None):
        gens = [tuple(g) for g in generators]
        if degree is None:
            degree = max((len(g) for g in gens), default=1)
        gens = [extend_perm(g, degree) for g in gens]
        for g in gens:
            if sorted(g) != list(range(degree)):
                raise ValueError(f"not a permutation of {degree} points: {g}")
        self.degree = degree
        self.generators = tuple(gens)
        self.name = name

    @classmethod
    def from_cycles(cls, text: str, degree: int | None = None, name: str | None = None):
        gens, n = parse_generators(text, degree)
        return cls(gens, n, name)

    def __repr__(self):
        label = self.name or ", ".join(format_cycles(g) for g in self.generators)
        return f"PermGroup({label!r}, degree={self.degree})"

    @cached_property
    def bsgs(self) -> BSGS:
        return schreier_sims(self.generators, self.degree)

    def order(self) -> int:
        return self.bsgs.order()

    def contains(self, g) -> bool:
        g = extend_perm(g, self.degree)
        h, j = self.bsgs.sift(g)
        return j == len(self.bsgs.base) and is_identity(h)

    def identity(self) -> tuple:
        return identity_perm(self.degree)

    def orbit(self, point: int) -> list:
        seen = {point}
        queue = [point]
        for b in queue:
            for g in self.generators:
                c = g[b]
                if c not in seen:
                    seen.add(c)
                    queue.append(c)
        return sorted(seen)

    def orbits(self) -> list:
        out = []
        done = set()
        for x in range(self.degree):
            if x not in done:
                o = self.orbit(x)
                done.update(o)
                out.append(o)
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree

    def stabilizer(self, point: int) -> "PermGroup":
        bs = schreier_sims(self.generators, self.degree, base_prefix=[point])
        return PermGroup(bs.gens_at(1), self.degree)

    def transitivity_degree(self) -> int:
        """Largest k with G transitive on ordered k-tuples of distinct points."""
        pts = list(range(self.degree))
        gens = list(self.generators)
        k = 0
        while pts:
            orb = {pts[0]}
            queue = [pts[0]]
            for b in queue:
                for g in gens:
                    if g[b] not in orb:
                        orb.add(g[b])
                        queue.append(g[b])
            if len(orb) != len(pts):
                break
            k += 1
            x = pts.pop(0)
            if not pts:
                break
            gens = schreier_sims(gens, self.degree, base_prefix=[x]).gens_at(1) if gens else []
        return k

    def elements(self, budget: int = DEFAULT_ENUM_BUDGET) -> list:
        """All elements, in a deterministic order (identity first)."""
        o = self.order()
        if o > budget:
            raise BudgetExceeded(f"|G| = {o} exceeds enumeration budget {budget}")
        return list(self._elements)

    @cached_property
    def _elements(self) -> tuple:
        bs = self.bsgs
        elems = [self.identity()]
        for t in reversed(bs.transversals):
            reps = sorted(t.values())
            elems = [perm_mul(e, u) for u in reps for e in elems] if reps else elems
        elems.sort()
        ident = self.identity()
        elems.remove(ident)
        return tuple([ident] + elems)

    def random_element(self, rng: random.Random) -> tuple:
        g = self.identity()
        for t in reversed(self.bsgs.transversals):
            keys = sorted(t)
            g = perm_mul(g, t[rng.choice(keys)])
        return g

    def is_symmetric(self) -> bool:
        return self.order() == factorial(self.degree)

    def is_alternating(self) -> bool:
        return self.degree >= 2 and self.order() * 2 == factorial(self.degree) and all(
            _is_even(g) for g in self.generators)

    def subgroup(self, gens, name=None) -> "PermGroup":
        return PermGroup(list(gens) or [self.identity()], self.degree, name)


def _is_even(g) -> bool:
    return sum(c - 1 for c in cycle_type(g)) % 2 == 0


def generate_subgroup(gens, degree: int, start: "PermGroup | None" = None) -> PermGroup:
    """Subgroup generated by ``gens`` (plus ``start``), adding only gens that enlarge it."""
    current = start.generators if start is not None else ()
    grp = PermGroup(current or [identity_perm(degree)], degree)
    for g in gens:
        if not grp.contains(g):
            current = tuple(current) + (tuple(g),)
            grp = PermGroup(current, degree)
    return grp


# ---------------------------------------------------------------------------
# conjugacy classes and normal subgroups
# ---------------------------------------------------------------------------

def conjugacy_classes(G: PermGroup, budget: int = DEFAULT_ENUM_BUDGET) -> list:
    """Conjugacy classes as lists of elements; the identity class comes first."""
    elems = G.elements(budget)
    cached = G.__dict__.get("_classes")
    if cached is not None:
        return [list(c) for c in cached]
    seen = set()
    classes = []
    invs = [perm_inv(g) for g in G.generators]
    for x in elems:
        if x in seen:
            continue
        cls = [x]
        seen.add(x)
        for y in cls:
            for g, gi in zip(G.generators, invs):
                z = perm_mul(perm_mul(gi, y), g)
                if z not in seen:
                    seen.add(z)
                    cls.append(z)
        classes.append(sorted(cls))
    G.__dict__["_classes"] = tuple(tuple(c) for c in classes)
    return classes


@dataclass(frozen=True)
class OracleWitness:
    index: int
    action: tuple        # images of G's generators on the m cosets (0-based tuples)
    subgroup_generators: tuple = ()


@dataclass(frozen=True)
class SubgroupOracleAnswer:
    status: str          # "Yes" | "No" | "Unknown"
    witness: OracleWitness | None = None
    note: str = ""

    def __bool__(self):
        raise TypeError("use .status; Unknown is neither true nor false")


def coset_action(G: PermGroup, H: PermGroup) -> tuple:
    """Right-multiplication action of G's generators on the right cosets of H."""
    reps = [G.identity()]
    images = [dict() for _ in G.generators]
    inv_reps = [G.identity()]
    k = 0
    while k < len(reps):
        x = reps[k]
        for si, s in enumerate(G.generators):
            y = perm_mul(x, s)
            j = next((j for j, xi in enumerate(inv_reps) if H.contains(perm_mul(y, xi))), None)
            if j is None:
                reps.append(y)
                inv_reps.append(perm_inv(y))
                j = len(reps) - 1
            images[si][k] = j
        k += 1
    m = len(reps)
    return tuple(tuple(img[i] for i in range(m)) for img in images)


@dataclass
class NormalSubgroupData:
    classes: list
    subgroups: list      # list of (frozenset of class indices, PermGroup)


def normal_subgroups(G: PermGroup, budget: int = DEFAULT_ENUM_BUDGET) -> NormalSubgroupData:
    """All normal subgroups, as joins of normal closures of conjugacy classes."""
    classes = conjugacy_classes(G, budget)
    reps = [c[0] for c in classes]

    def class_set(N):
        return frozenset(i for i, r in enumerate(reps) if N.contains(r))

    found = {}
    trivial = PermGroup([G.identity()], G.degree)
    found[frozenset([0])] = trivial
    closures = []
    for i in range(1, len(classes)):
        N = generate_subgroup(classes[i], G.degree)
        key = class_set(N)
        if key not in found:
            found[key] = N
        closures.append(key)
    changed = True
    while changed:
        changed = False
        for key in list(found):
            for ck in set(closures):
                if ck <= key:
                    continue
                N = generate_subgroup(classes_of(ck, classes), G.degree, start=found[key])
                nk = class_set(N)
                if nk not in found:
                    found[nk] = N
                    changed = True
    subs = sorted(found.items(), key=lambda kv: (sum(len(classes[i]) for i in kv[0]), sorted(kv[0])))
    return NormalSubgroupData(classes, subs)


def classes_of(keys, classes):
    out = []
    for i in sorted(keys):
        out.extend(classes[i])
    return out


def has_proper_normal_subgroup_of_index_dividing(G: PermGroup, d: int,
                                                 budget: int = DEFAULT_ENUM_BUDGET) -> SubgroupOracleAnswer:
    """Is there a normal N with 1 < [G:N] and [G:N] | d ?  Exhaustive within budget."""
    if d < 1:
        raise ValueError("d must be positive")
    order = G.order()
    if all(d % m for m in range(2, d + 1) if order % m == 0):
        return SubgroupOracleAnswer("No", note="no divisor m > 1 of d divides |G|")
    try:
        data = normal_subgroups(G, budget)
    except BudgetExceeded as exc:
        return SubgroupOracleAnswer("Unknown", note=str(exc))
    best = None
    for keys, N in data.subgroups:
        size = sum(len(data.classes[i]) for i in keys)
        idx = order // size
        if idx > 1 and d % idx == 0 and (best is None or idx < best[0]):
            best = (idx, N)
    if best is None:
        return SubgroupOracleAnswer("No", note=f"{len(data.subgroups)} normal subgroups checked")
    idx, N = best
    action = coset_action(G, N)
    return SubgroupOracleAnswer("Yes", OracleWitness(idx, action, N.generators),
                                note=f"normal subgroup of order {order // idx}")
