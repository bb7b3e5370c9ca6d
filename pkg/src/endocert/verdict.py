"""Rule engine: evaluates endomorphism criteria on (JacContext, PermGroup).

Every rule is a conjunction of hypotheses, each recorded in the trace with a
three-valued status.  Disjunctive clauses are folded into a single entry whose
evidence lists the alternatives.  A rule fires when every entry is "true".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from . import permmod
from .galois import Hint
from .jacinv import JacContext, multiplicity_gcd
from .lowindex import DEFAULT_NODE_BUDGET, has_proper_subgroup_of_index_dividing
from .permgrp import (DEFAULT_ENUM_BUDGET, BudgetExceeded, PermGroup, format_cycles,
                      has_proper_normal_subgroup_of_index_dividing)
from .permmod import Kind

FORMAT_VERSION = 1

TRUE, FALSE, UNKNOWN = "true", "false", "unknown"

END_IS_Z = "EndIsZ"
END_IS_Z_ZETA_Q = "EndIsZZetaQ"
SIMPLE_CENTRALIZER_CS = "End0SimpleCentralizerCentralSimple"
CENTRAL_SIMPLE_OVER_Q = "End0CentralSimpleOverQ"
NO_RULE = "NoRuleApplies"

STRENGTH = {END_IS_Z: 3, END_IS_Z_ZETA_Q: 3, CENTRAL_SIMPLE_OVER_Q: 2,
            SIMPLE_CENTRALIZER_CS: 1, NO_RULE: 0}

CONCLUSION_TEXT = {
    END_IS_Z: "End(J) = Z",
    END_IS_Z_ZETA_Q: "End(J^(f,q)) = Z[delta_q], isomorphic to Z[zeta_q]",
    SIMPLE_CENTRALIZER_CS: ("End^0(J^(f,q)) is a simple Q-algebra and the centralizer "
                            "of Q[delta_q] in it is central simple over Q[delta_q]"),
    CENTRAL_SIMPLE_OVER_Q: "End^0(J(C_{f,2})) is a central simple Q-algebra",
    NO_RULE: "no rule applies",
}

RULE_TITLES = {
    "R1": "cyclotomic endomorphism ring criterion (q > 2)",
    "R2": "central simple centralizer criterion",
    "R3": "hyperelliptic central simple criterion (q = 2)",
    "R4": "hyperelliptic S_n / A_n / Mathieu criterion (q = 2)",
    "R5a": "superelliptic S_n / A_n criterion (q = p odd)",
    "R5b": "superelliptic doubly transitive criterion (q = p odd)",
}

RULE_ORDER = ("R1", "R2", "R3", "R4", "R5a", "R5b")

MATHIEU = {11: (7920, 4), 12: (95040, 5), 22: (443520, 3), 23: (10200960, 4), 24: (244823040, 5)}


class SpecInvalid(ValueError):
    pass


def _st(b: bool) -> str:
    return TRUE if b else FALSE


def all3(*xs) -> str:
    if FALSE in xs:
        return FALSE
    return UNKNOWN if UNKNOWN in xs else TRUE


def any3(*xs) -> str:
    if TRUE in xs:
        return TRUE
    return UNKNOWN if UNKNOWN in xs else FALSE


@dataclass(frozen=True)
class Budgets:
    enum: int = DEFAULT_ENUM_BUDGET
    backtrack: int = DEFAULT_NODE_BUDGET
    seed: int = permmod.DEFAULT_SEED

    def __post_init__(self):
        if self.enum < 1 or self.backtrack < 1:
            raise ValueError("budgets must be positive")


@dataclass
class ProblemSpec:
    ctx: JacContext
    group: PermGroup | None = None
    hint: Hint | None = None
    budgets: Budgets = field(default_factory=Budgets)

    def __post_init__(self):
        if self.group is not None and self.group.degree != self.ctx.n:
            raise SpecInvalid(f"group has degree {self.group.degree}, expected n = {self.ctx.n}")


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    hypothesis: str
    status: str
    evidence: str
    check: tuple = ()        # (name, *args) naming the predicate, for independent re-evaluation

    def to_dict(self) -> dict:
        return {"rule": self.rule, "hypothesis": self.hypothesis, "status": self.status,
                "evidence": self.evidence, "check": list(self.check)}


@dataclass(frozen=True)
class RuleOutcome:
    rule: str
    conclusion: str
    entries: tuple

    @property
    def status(self) -> str:
        return all3(*(e.status for e in self.entries))

    @property
    def first_failure(self) -> TraceEntry | None:
        return next((e for e in self.entries if e.status == FALSE), None)


@dataclass(frozen=True)
class Certificate:
    conclusion: str
    rule: str | None
    trace: tuple
    outcomes: tuple
    assumptions: dict
    hint: Hint | None = None

    @property
    def unknown_blocked(self) -> bool:
        return self.conclusion == NO_RULE and any(o.status == UNKNOWN for o in self.outcomes)

    def to_dict(self) -> dict:
        d = {
            "version": FORMAT_VERSION,
            "conclusion": self.conclusion,
            "statement": CONCLUSION_TEXT[self.conclusion],
            "rule": self.rule,
            "assumptions": dict(self.assumptions),
            "trace": [e.to_dict() for e in self.trace],
            "rules": [{"rule": o.rule, "conclusion": o.conclusion, "status": o.status,
                       "first_failure": o.first_failure.hypothesis if o.first_failure else None}
                      for o in self.outcomes],
            "unknown_blocked": self.unknown_blocked,
        }
        if self.hint is not None:
            d["hint"] = {"label": self.hint.label, "reasons": list(self.hint.reasons),
                         "certified": self.hint.certified}
        return d


# ---------------------------------------------------------------------------
# cached oracles
# ---------------------------------------------------------------------------

class Oracles:
    """Group and module predicates for one evaluation, each computed at most once."""

    def __init__(self, G: PermGroup, budgets: Budgets):
        self.G = G
        self.budgets = budgets
        self._cache = {}

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def transitivity_degree(self) -> int:
        return self._memo("tdeg", self.G.transitivity_degree)

    def k_transitive(self, k: int) -> tuple:
        t = self.transitivity_degree()
        return _st(t >= k), f"transitivity degree {t}"

    def normal(self, d: int) -> tuple:
        """(status of 'no proper normal subgroup of index dividing d', evidence)."""
        ans = self._memo(("normal", d), lambda: has_proper_normal_subgroup_of_index_dividing(
            self.G, d, self.budgets.enum))
        return _negate(ans)

    def subgroup(self, d: int) -> tuple:
        ans = self._memo(("sub", d), lambda: has_proper_subgroup_of_index_dividing(
            self.G, d, self.budgets.enum, self.budgets.backtrack))
        return _negate(ans)

    def commutant(self, ell: int, kind: Kind):
        return self._memo(("comm", ell, kind), lambda: permmod.commutant(
            permmod.build_module(self.G, ell, kind)))

    def scalars_only(self, ell: int, kind: Kind) -> tuple:
        C = self.commutant(ell, kind)
        return _st(C.is_scalars_only), f"commutant of {kind.value} over F_{ell} has dimension {C.dim}"

    def absolutely_irreducible(self, ell: int, kind: Kind) -> tuple:
        def run():
            M = permmod.build_module(self.G, ell, kind)
            try:
                sub = permmod.find_submodule(M, self.budgets.seed,
                                             exhaustive_budget=self.budgets.enum)
            except BudgetExceeded as exc:
                return UNKNOWN, f"irreducibility undecided: {exc}"
            if sub is not None:
                return FALSE, f"invariant subspace of dimension {len(sub)} found"
            C = self.commutant(ell, kind)
            return _st(C.is_scalars_only), f"irreducible; commutant dimension {C.dim}"
        return self._memo(("absirr", ell, kind), run)


def _negate(ans) -> tuple:
    if ans.status == "Unknown":
        return UNKNOWN, f"oracle Unknown ({ans.note}); rerun with a larger budget"
    if ans.status == "No":
        return TRUE, f"No: {ans.note}"
    w = ans.witness
    action = " ; ".join(format_cycles(a) for a in w.action)
    return FALSE, f"Yes: index {w.index} ({ans.note}); coset action of generators {action}"


# ---------------------------------------------------------------------------
# rule construction
# ---------------------------------------------------------------------------

class _Rule:
    def __init__(self, rule: str, conclusion: str):
        self.rule = rule
        self.conclusion = conclusion
        self.entries = []

    def add(self, hypothesis: str, status: str, evidence: str, check=()):
        self.entries.append(TraceEntry(self.rule, hypothesis, status, evidence, tuple(check)))
        return status

    def done(self) -> RuleOutcome:
        return RuleOutcome(self.rule, self.conclusion, tuple(self.entries))


def _char(ctx: JacContext) -> str:
    return "unknown" if ctx.char_K is None else str(ctx.char_K)


def _char_is_zero(R: _Rule, ctx: JacContext):
    st = UNKNOWN if ctx.char_K is None else _st(ctx.char_K == 0)
    R.add("char K = 0", st, f"asserted char K = {_char(ctx)}", ("char_zero",))


def _char_not(R: _Rule, ctx: JacContext, ell: int):
    st = UNKNOWN if ctx.char_K is None else _st(ctx.char_K != ell)
    R.add(f"char K != {ell}", st, f"asserted char K = {_char(ctx)}", ("char_not", ell))


def _zeta(R: _Rule, ctx: JacContext, m: int):
    # listed last: unlike the other hypotheses it can always be met after a base change
    R.add(f"K contains a primitive root of unity of order {m}", _st(ctx.has_zeta_q or m == 2),
          "automatic for m = 2" if m == 2 else f"asserted: {ctx.has_zeta_q}", ("zeta",))


def _arith(R: _Rule, text: str, value: bool, evidence: str):
    R.add(text, _st(value), evidence, ("arith", text))


def _two_transitive_screen(R: _Rule, orc: Oracles, ell: int, n: int):
    """A field commutant on the heart forces 2-transitivity for transitive G (outside ell = 2, n = 2 mod 4)."""
    if not orc.G.is_transitive() or n < 4 or (ell == 2 and n % 4 == 2):
        return
    st, ev = orc.k_transitive(2)
    R.add("G is 2-transitive (necessary for the heart condition, G being transitive)",
          st, ev, ("k_transitive", 2))


def _heart_clause(R: _Rule, orc: Oracles, ell: int, n: int, label: str):
    _two_transitive_screen(R, orc, ell, n)
    t3, ev3 = orc.k_transitive(3)
    sc, evs = orc.scalars_only(ell, Kind.HEART)
    R.add(f"{label}: G is 3-transitive or End_G(heart over F_{ell}) = F_{ell}",
          any3(t3, sc), f"3-transitive: {t3} ({ev3}); heart scalars: {sc} ({evs})",
          ("heart_clause", ell))


def _quotient_clause(R: _Rule, orc: Oracles, ell: int):
    a3, ev_a = orc.absolutely_irreducible(ell, Kind.HEART)
    tr = _st(orc.G.is_transitive())
    b3, ev_b = orc.scalars_only(ell, Kind.QUOTIENT)
    R.add(f"(A3) G transitive with absolutely simple heart, or (B3) End_G(quotient over F_{ell}) = F_{ell}",
          any3(all3(tr, a3), b3),
          f"A3: transitive {tr}, heart absolutely simple {a3} ({ev_a}); B3: {b3} ({ev_b})",
          ("quotient_clause", ell))


def _multiplicity_note(ctx: JacContext) -> str:
    try:
        return f"multiplicity {multiplicity_gcd(ctx)}"
    except ValueError as exc:
        return f"multiplicity unavailable ({exc})"


def _rule_r1(ctx: JacContext, orc: Oracles) -> RuleOutcome:
    R = _Rule("R1", END_IS_Z_ZETA_Q)
    n, p, q, k, c = ctx.n, ctx.p, ctx.q, ctx.k, ctx.c
    _char_is_zero(R, ctx)
    _arith(R, "q > 2", q > 2, f"q = {q}")
    need = 5 if n % p == 0 else 4
    _arith(R, f"n >= {need}", n >= need, f"n = {n}")
    case = ctx.case
    if case == "i":
        _arith(R, "branch (i): p does not divide n", True, f"n = {k}*{q} + {c}")
        a1 = n == q + 1
        b1 = p % 2 == 1 and c > 1
        c1 = p == 2 < q and c > 1 and (k % 2 == 1 or 2 * c < q)
        R.add("(A1) n = q + 1, or (B1) p odd and c > 1, or (C1) p = 2 < q, c > 1, k odd or c < q/2",
              _st(a1 or b1 or c1), f"A1 {a1}, B1 {b1}, C1 {c1}; {_multiplicity_note(ctx)}",
              ("arith", "R1(i) A1/B1/C1"))
        st, ev = orc.k_transitive(2)
        R.add("G is 2-transitive", st, ev, ("k_transitive", 2))
        st, ev = orc.normal(n - 1)
        R.add(f"G has no proper normal subgroup of index dividing {n - 1}", st, ev, ("no_normal", n - 1))
    elif case == "ii":
        _arith(R, "branch (ii): q divides n", True, f"n = {k}*{q}")
        a2 = p % 2 == 1
        b2 = p == 2 < q and k % 2 == 0
        R.add("(A2) p odd, or (B2) p = 2 < q and k even", _st(a2 or b2),
              f"A2 {a2}, B2 {b2}; {_multiplicity_note(ctx)}", ("arith", "R1(ii) A2/B2"))
        _heart_clause(R, orc, p, n, "(C2)")
        st, ev = orc.normal(n - 2)
        R.add(f"G has no proper normal subgroup of index dividing {n - 2}", st, ev, ("no_normal", n - 2))
    else:
        _arith(R, "branch (iii): p divides n, q does not", True, f"n = {n}, q = {q}")
        _quotient_clause(R, orc, p)
        st, ev = orc.normal(n - 1)
        R.add(f"G has no proper normal subgroup of index dividing {n - 1}", st, ev, ("no_normal", n - 1))
    _zeta(R, ctx, q)
    return R.done()


def _rule_r2(ctx: JacContext, orc: Oracles) -> RuleOutcome:
    R = _Rule("R2", SIMPLE_CENTRALIZER_CS)
    n, p, q = ctx.n, ctx.p, ctx.q
    _char_not(R, ctx, p)
    _arith(R, "n >= 4 and (n, p) != (4, 2)", n >= 4 and (n, p) != (4, 2), f"(n, p) = ({n}, {p})")
    case = ctx.case
    if case == "i":
        _arith(R, "branch (i): p does not divide n", True, f"n = {n}, p = {p}")
        st, ev = orc.k_transitive(2)
        R.add("G is 2-transitive", st, ev, ("k_transitive", 2))
        d = n - 1
    elif case == "ii":
        _arith(R, "branch (ii): q divides n", True, f"n = {n}, q = {q}")
        _heart_clause(R, orc, p, n, "heart condition")
        d = n - 2
    else:
        _arith(R, "branch (iii): p divides n, q does not", True, f"n = {n}, q = {q}")
        R.add("G is transitive", _st(orc.G.is_transitive()), f"{len(orc.G.orbits())} orbit(s)",
              ("k_transitive", 1))
        _quotient_clause(R, orc, p)
        d = n - 1
    st, ev = orc.subgroup(d)
    R.add(f"G has no proper subgroup of index dividing {d}", st, ev, ("no_subgroup", d))
    _zeta(R, ctx, q)
    return R.done()


def _rule_r3(ctx: JacContext, orc: Oracles) -> RuleOutcome:
    R = _Rule("R3", CENTRAL_SIMPLE_OVER_Q)
    n = ctx.n
    _arith(R, "q = 2", ctx.q == 2, f"q = {ctx.q}")
    _char_not(R, ctx, 2)
    _arith(R, "n >= 5", n >= 5, f"n = {n}")
    if n % 2:
        st, ev = orc.k_transitive(2)
        R.add("n odd and G is 2-transitive", st, ev, ("k_transitive", 2))
    else:
        _heart_clause(R, orc, 2, n, "n even")
    st, ev = orc.normal(2)
    R.add("G has no normal subgroup of index 2", st, ev, ("no_normal", 2))
    d = (n - 1) // 2
    st, ev = orc.subgroup(d)
    R.add(f"G has no proper subgroup of index dividing {d}", st, ev, ("no_subgroup", d))
    return R.done()


def _is_sym_or_alt(G: PermGroup) -> tuple:
    if G.is_symmetric():
        return TRUE, f"|G| = {G.order()} = n!"
    if G.is_alternating():
        return TRUE, f"|G| = {G.order()} = n!/2 with even generators"
    return FALSE, f"|G| = {G.order()}"


def _is_mathieu(G: PermGroup, orc: Oracles) -> tuple:
    n = G.degree
    if n not in MATHIEU:
        return FALSE, f"n = {n} is not a Mathieu degree"
    order, t = MATHIEU[n]
    if G.order() != order:
        return FALSE, f"|G| = {G.order()} != {order}"
    st, ev = orc.k_transitive(t)
    return st, f"|G| = {order}, {ev}"


def _rule_r4(ctx: JacContext, orc: Oracles) -> RuleOutcome:
    R = _Rule("R4", END_IS_Z)
    n = ctx.n
    _arith(R, "q = 2", ctx.q == 2, f"q = {ctx.q}")
    _char_not(R, ctx, 2)
    _arith(R, "n >= 5", n >= 5, f"n = {n}")
    sa, ev_sa = _is_sym_or_alt(orc.G)
    c3 = UNKNOWN if ctx.char_K is None else _st(ctx.char_K != 3)
    mt, ev_m = _is_mathieu(orc.G, orc)
    R.add("G is S_n or A_n and char K != 3, or G is the Mathieu group M_n",
          any3(all3(sa, c3), mt),
          f"S_n/A_n: {sa} ({ev_sa}); char K != 3: {c3}; Mathieu: {mt} ({ev_m})",
          ("sym_alt_or_mathieu",))
    return R.done()


def _rule_r5a(ctx: JacContext, orc: Oracles) -> RuleOutcome:
    R = _Rule("R5a", END_IS_Z_ZETA_Q)
    _char_is_zero(R, ctx)
    _arith(R, "q = p is an odd prime", ctx.r == 1 and ctx.p % 2 == 1, f"q = {ctx.q}")
    _arith(R, "n >= 5", ctx.n >= 5, f"n = {ctx.n}")
    st, ev = _is_sym_or_alt(orc.G)
    R.add("G is S_n or A_n", st, ev, ("sym_alt",))
    return R.done()


def _rule_r5b(ctx: JacContext, orc: Oracles) -> RuleOutcome:
    R = _Rule("R5b", END_IS_Z_ZETA_Q)
    n, p = ctx.n, ctx.p
    _char_is_zero(R, ctx)
    _arith(R, "q = p is an odd prime", ctx.r == 1 and p % 2 == 1, f"q = {ctx.q}")
    _arith(R, "n >= 4", n >= 4, f"n = {n}")
    _arith(R, "p does not divide n", n % p != 0, f"n = {n}, p = {p}")
    _arith(R, "n = p + 1 or p does not divide n - 1", n == p + 1 or (n - 1) % p != 0,
           f"n - 1 = {n - 1}, gcd with p = {gcd(n - 1, p)}")
    st, ev = orc.k_transitive(2)
    R.add("G is 2-transitive", st, ev, ("k_transitive", 2))
    st, ev = orc.normal(n - 1)
    R.add(f"G has no proper normal subgroup of index dividing {n - 1}", st, ev, ("no_normal", n - 1))
    _zeta(R, ctx, ctx.q)
    return R.done()


_RULES = {"R1": _rule_r1, "R2": _rule_r2, "R3": _rule_r3, "R4": _rule_r4,
          "R5a": _rule_r5a, "R5b": _rule_r5b}


def _assumptions(spec: ProblemSpec) -> dict:
    ctx = spec.ctx
    return {"n": ctx.n, "p": ctx.p, "r": ctx.r, "q": ctx.q, "char": ctx.char_K,
            "zeta": ctx.has_zeta_q,
            "group": None if spec.group is None else
            ",".join(format_cycles(g) for g in spec.group.generators),
            "budget_enum": spec.budgets.enum, "budget_backtrack": spec.budgets.backtrack,
            "seed": spec.budgets.seed}


def evaluate_rules(spec: ProblemSpec) -> tuple:
    orc = Oracles(spec.group, spec.budgets)
    return tuple(_RULES[r](spec.ctx, orc) for r in RULE_ORDER)


def evaluate(spec: ProblemSpec) -> Certificate:
    """Evaluate every rule; report the strongest one that fires (rule order breaks ties)."""
    if spec.group is None:
        label = spec.hint.label if spec.hint else "none"
        entry = TraceEntry("input", "a certified Galois group is supplied", FALSE,
                           f"only heuristic evidence ({label}); supply --assume-group", ("group",))
        return Certificate(NO_RULE, None, (entry,), (), _assumptions(spec), spec.hint)
    outcomes = evaluate_rules(spec)
    fired = [o for o in outcomes if o.status == TRUE]
    if not fired:
        trace = tuple(e for o in outcomes for e in o.entries)
        return Certificate(NO_RULE, None, trace, outcomes, _assumptions(spec), spec.hint)
    best = max(fired, key=lambda o: (STRENGTH[o.conclusion], -RULE_ORDER.index(o.rule)))
    return Certificate(best.conclusion, best.rule, best.entries, outcomes,
                       _assumptions(spec), spec.hint)


def explain(cert: Certificate) -> str:
    a = cert.assumptions
    lines = [f"conclusion: {cert.conclusion}  ({CONCLUSION_TEXT[cert.conclusion]})",
             f"input: n={a['n']} p={a['p']} r={a['r']} q={a['q']} char={a['char']} "
             f"zeta={a['zeta']} group={a['group']}"]
    if cert.hint is not None:
        lines.append(f"hint (uncertified): {cert.hint.label}; " + "; ".join(cert.hint.reasons))
    if cert.rule is not None:
        lines.append(f"rule {cert.rule}: {RULE_TITLES[cert.rule]}")
        for e in cert.trace:
            lines.append(f"  [{e.status}] {e.hypothesis} -- {e.evidence}")
    elif not cert.outcomes:
        for e in cert.trace:
            lines.append(f"  [{e.status}] {e.hypothesis} -- {e.evidence}")
    for o in cert.outcomes:
        if o.rule == cert.rule:
            continue
        ff = o.first_failure
        if o.status == TRUE:
            lines.append(f"rule {o.rule} also holds ({o.conclusion})")
        elif ff is not None:
            lines.append(f"rule {o.rule} fails at: {ff.hypothesis} -- {ff.evidence}")
        else:
            unk = [e for e in o.entries if e.status == UNKNOWN]
            lines.append(f"rule {o.rule} blocked: {unk[0].hypothesis} -- budget exceeded; "
                         f"rerun with --budget-enum / --budget-backtrack")
    return "\n".join(lines)
