"""Search for subgroups of small index via coset-table backtracking.

Every subgroup of index m in G pulls back to an index-m subgroup of any
finitely presented group mapping onto G.  We take a presentation whose
relators are a subset of those read off the Cayley graph, enumerate all
coset tables of size <= M for it (Sims' low-index procedure), and accept a
table only after checking that it really is a G-action (the graph group on
n + m points must have order |G|).  A missing relator can only add spurious
tables, which the check rejects, so an exhausted search is a proof of "No".
"""

from __future__ import annotations

from .permgrp import (
    DEFAULT_ENUM_BUDGET,
    OracleWitness,
    PermGroup,
    SubgroupOracleAnswer,
    perm_inv,
    perm_mul,
    perm_order,
)

DEFAULT_NODE_BUDGET = 10**8
MAX_RELATORS = 120


class _NodeBudget(Exception):
    pass


def _inv_letter(x: int) -> int:
    return x ^ 1


def _free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == _inv_letter(x):
            out.pop()
        else:
            out.append(x)
    while len(out) >= 2 and out[0] == _inv_letter(out[-1]):
        out = out[1:-1]
    return out


def _canonical(word):
    inv = [_inv_letter(x) for x in reversed(word)]
    cands = []
    for w in (word, inv):
        for i in range(len(w)):
            cands.append(tuple(w[i:] + w[:i]))
    return min(cands)


def cayley_relators(G: PermGroup, budget: int = DEFAULT_ENUM_BUDGET,
                    limit: int = MAX_RELATORS) -> list:
    """Short relators of G in the letters 2i (g_i) and 2i+1 (g_i^-1).

    Read off non-tree edges of a breadth-first Cayley graph, explored up to
    ``budget`` vertices.  Generator powers are always included.
    """
    letters = []
    for g in G.generators:
        letters.append(g)
        letters.append(perm_inv(g))
    rels = set()
    for i, g in enumerate(G.generators):
        o = perm_order(g)
        if o > 1:
            rels.add(_canonical([2 * i] * o))
    ident = G.identity()
    word = {ident: []}
    queue = [ident]
    for x in queue:
        for a, s in enumerate(letters):
            y = perm_mul(x, s)
            if y in word:
                w = _free_reduce(word[x] + [a] + [_inv_letter(b) for b in reversed(word[y])])
                if w:
                    rels.add(_canonical(w))
            elif len(word) < budget:
                word[y] = word[x] + [a]
                queue.append(y)
    ordered = sorted(rels, key=lambda r: (len(r), r))
    return [list(r) for r in ordered[:limit]]


class _LowIndex:
    def __init__(self, ngens: int, relators, max_index: int, node_budget: int):
        self.k = 2 * ngens
        self.max_index = max_index
        self.node_budget = node_budget
        self.nodes = 0
        self.table = [[None] * self.k for _ in range(max_index)]
        self.ncos = 1
        rot = [[] for _ in range(self.k)]
        for r in relators:
            inv = [_inv_letter(x) for x in reversed(r)]
            for w in (r, inv):
                for i in range(len(w)):
                    rr = tuple(w[i:] + w[:i])
                    if rr not in rot[rr[0]]:
                        rot[rr[0]].append(rr)
        self.rotations = rot

    def _define(self, a, x, b, trail, stack):
        t = self.table
        t[a][x] = b
        t[b][_inv_letter(x)] = a
        trail.append((a, x))
        trail.append((b, _inv_letter(x)))
        stack.append((a, x))

    def _scan(self, a, w, trail, stack) -> bool:
        t = self.table
        f = a
        i = 0
        n = len(w)
        while i < n:
            nxt = t[f][w[i]]
            if nxt is None:
                break
            f = nxt
            i += 1
        if i == n:
            return f == a
        b = a
        j = n - 1
        while j >= i:
            nxt = t[b][_inv_letter(w[j])]
            if nxt is None:
                break
            b = nxt
            j -= 1
        if j < i:
            return f == b
        if j == i:
            if t[b][_inv_letter(w[i])] is not None or t[f][w[i]] is not None:
                return False
            self._define(f, w[i], b, trail, stack)
        return True

    def _process(self, trail, stack) -> bool:
        while stack:
            a, x = stack.pop()
            b = self.table[a][x]
            for w in self.rotations[x]:
                if not self._scan(a, w, trail, stack):
                    return False
            for w in self.rotations[_inv_letter(x)]:
                if not self._scan(b, w, trail, stack):
                    return False
        return True

    def _undo(self, trail, mark, ncos):
        t = self.table
        while len(trail) > mark:
            a, x = trail.pop()
            t[a][x] = None
        for c in range(ncos, self.ncos):
            t[c] = [None] * self.k
        self.ncos = ncos

    def _first_gap(self):
        for a in range(self.ncos):
            row = self.table[a]
            for x in range(self.k):
                if row[x] is None:
                    return a, x
        return None

    def search(self, accept):
        """Depth-first search; ``accept(table, m)`` returns a result or None."""
        trail: list = []
        return self._search(trail, accept)

    def _search(self, trail, accept):
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise _NodeBudget
        gap = self._first_gap()
        if gap is None:
            return accept(self.table, self.ncos)
        a, x = gap
        xi = _inv_letter(x)
        targets = [b for b in range(self.ncos) if self.table[b][xi] is None]
        if self.ncos < self.max_index:
            targets.append(self.ncos)
        for b in targets:
            mark = len(trail)
            ncos = self.ncos
            if b == self.ncos:
                self.ncos += 1
            stack: list = []
            self._define(a, x, b, trail, stack)
            if self._process(trail, stack):
                res = self._search(trail, accept)
                if res is not None:
                    return res
            self._undo(trail, mark, ncos)
        return None


def action_from_table(table, m: int, ngens: int) -> tuple:
    return tuple(tuple(table[c][2 * i] for c in range(m)) for i in range(ngens))


def is_valid_witness(G: PermGroup, witness: OracleWitness) -> bool:
    """Check that ``witness.action`` is a transitive G-action of degree ``index``.

    Homomorphism check: the subgroup of G x Sym(m) generated by the pairs
    (g_i, pi_i) has order |G|.  Transitivity makes the point stabilizer a
    subgroup of index exactly m, proper because m >= 2.
    """
    m = witness.index
    if m < 2 or len(witness.action) != len(G.generators):
        return False
    for img in witness.action:
        if sorted(img) != list(range(m)):
            return False
    seen = {0}
    queue = [0]
    for c in queue:
        for img in witness.action:
            if img[c] not in seen:
                seen.add(img[c])
                queue.append(img[c])
    if len(seen) != m:
        return False
    n = G.degree
    paired = [tuple(g) + tuple(n + x for x in img) for g, img in zip(G.generators, witness.action)]
    return PermGroup(paired, n + m).order() == G.order()


def _orbit_witness(G: PermGroup, orbit) -> OracleWitness:
    pos = {x: i for i, x in enumerate(orbit)}
    action = tuple(tuple(pos[g[x]] for x in orbit) for g in G.generators)
    return OracleWitness(len(orbit), action)


def has_proper_subgroup_of_index_dividing(G: PermGroup, d: int,
                                          enum_budget: int = DEFAULT_ENUM_BUDGET,
                                          node_budget: int = DEFAULT_NODE_BUDGET) -> SubgroupOracleAnswer:
    """Is there a subgroup H < G with [G:H] | d ?  Yes (with witness), No, or Unknown."""
    if d < 1:
        raise ValueError("d must be positive")
    order = G.order()
    targets = [m for m in range(2, d + 1) if d % m == 0 and order % m == 0]
    if not targets:
        return SubgroupOracleAnswer("No", note="no divisor m > 1 of d divides |G|")
    for orb in G.orbits():
        if len(orb) in targets:
            return SubgroupOracleAnswer("Yes", _orbit_witness(G, orb),
                                        note=f"point stabilizer in an orbit of length {len(orb)}")
    ngens = len(G.generators)
    relators = cayley_relators(G, enum_budget)
    search = _LowIndex(ngens, relators, max(targets), node_budget)

    def accept(table, m):
        if m not in targets:
            return None
        w = OracleWitness(m, action_from_table(table, m, ngens))
        return w if is_valid_witness(G, w) else None

    try:
        found = search.search(accept)
    except _NodeBudget:
        return SubgroupOracleAnswer("Unknown", note=f"backtrack budget {node_budget} exceeded")
    if found is None:
        return SubgroupOracleAnswer("No", note=f"low-index search exhausted ({search.nodes} nodes)")
    return SubgroupOracleAnswer("Yes", found, note=f"coset table of index {found.index}")
