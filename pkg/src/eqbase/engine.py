"""Given-clause saturation for unit equations.

The loop derives consequences by paramodulation (primary inference) and
simplifies with demodulation (secondary inference).  Selection follows
the ratio scheme: 1 oldest clause, then 4 lightest semantically false
clauses, then 4 lightest true clauses, cycling; clauses matching hints
are selected ahead of the ratio pattern.  Without interpretations, false
means negated and true means positive; with interpretations, false means
false in all of them.
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

from .index import DiscTree
from .models import FiniteAlgebra, evaluate
from .terms import (
    Binary,
    Const,
    Equation,
    Order,
    Term,
    Unary,
    Var,
    apply_substitution,
    apply_substitution_eq,
    canonical_rename,
    iter_positions,
    kbo_compare,
    match_term,
    rename_vars,
    replace_at,
    sym_key,
    term_to_str,
    unify,
)

REWRITE_CAP = 10_000

PROOF_TRAILER = (
    "============================== end of proof =========================="
)


class RewriteCapExceeded(RuntimeError):
    """A demodulation pass did not reach a normal form within the cap,
    which usually means a non-terminating (badly oriented) rule set."""


# ---------------------------------------------------------------------------
# justifications


@dataclass(frozen=True)
class Input:
    def parents(self) -> tuple:
        return ()


@dataclass(frozen=True)
class GoalDenial:
    source: int

    def parents(self) -> tuple:
        return (self.source,)


@dataclass(frozen=True)
class Para:
    from_id: int
    into_id: int
    rewrites: tuple = ()

    def parents(self) -> tuple:
        return (self.from_id, self.into_id) + self.rewrites


@dataclass(frozen=True)
class RewriteChain:
    base: int
    rewrites: tuple

    def parents(self) -> tuple:
        return (self.base,) + self.rewrites


@dataclass(frozen=True)
class Contradiction:
    positive: int
    denial: int

    def parents(self) -> tuple:
        return (self.positive, self.denial)


Justification = object


class Clause:
    """A unit equation with identity, derivation and selection metadata."""

    __slots__ = (
        "id",
        "eq",
        "weight",
        "justification",
        "label",
        "sem_false",
        "is_hint",
        "enabled",
        "selected",
        "is_contradiction",
        "_renamed",
    )

    def __init__(self, cid, eq, justification, label=None, sem_false=False,
                 is_hint=False, is_contradiction=False):
        self.id = cid
        self.eq = eq
        self.weight = 0 if eq is None else eq.weight
        self.justification = justification
        self.label = label
        self.sem_false = sem_false
        self.is_hint = is_hint
        self.enabled = True
        self.selected = False
        self.is_contradiction = is_contradiction
        self._renamed = None

    @property
    def renamed(self) -> Equation:
        """The clause equation with variables moved to a reserved namespace,
        for use as the into-partner of a paramodulation."""
        if self._renamed is None:
            self._renamed = rename_apart(self.eq)
        return self._renamed

    def parents(self) -> tuple:
        return self.justification.parents()

    def listing_line(self) -> str:
        body = "$F" if self.is_contradiction else str(self.eq)
        label = f" # label({self.label})" if self.label else ""
        parents = self.parents()
        if parents:
            refs = ",".join(str(p) for p in parents)
            return f"{self.id} {body}{label}.  [{refs}]."
        return f"{self.id} {body}{label}."

    def __repr__(self):
        return f"<Clause {self.listing_line()}>"


# ---------------------------------------------------------------------------
# search parameters


@dataclass
class SearchParams:
    """Limits and strategy knobs for one saturation run.

    max_given is the reproducible limit; max_seconds only truncates and
    makes runs nondeterministic in where they stop.
    """

    max_weight: Optional[int] = None
    max_seconds: Optional[float] = None
    max_given: Optional[int] = None
    selection_ratio: tuple = (1, 4, 4)
    hints: tuple = ()
    hint_exempt_from_limits: bool = False
    interpretations: tuple = ()
    rewrite_cap: int = REWRITE_CAP

    def __post_init__(self):
        self.hints = tuple(self.hints)
        self.interpretations = tuple(self.interpretations)


# ---------------------------------------------------------------------------
# demodulation


def demodulate(
    t: Term,
    rules: Sequence[Equation],
    *,
    cap: int = REWRITE_CAP,
) -> tuple:
    """Rewrite the leftmost-outermost redex with the first applicable rule
    until no rule matches.  Rules are used left-to-right as given and must
    be oriented (or deliberately supplied pre-oriented).  Returns the
    normal form and the list of rule indexes in application order."""
    used: list = []
    steps = 0
    changed = True
    while changed:
        changed = False
        for path, sub in iter_positions(t):
            if type(sub) is Var:
                continue
            for idx, rule in enumerate(rules):
                binding = match_term(rule.lhs, sub)
                if binding is None:
                    continue
                t = replace_at(t, path, apply_substitution(binding, rule.rhs))
                used.append(idx)
                steps += 1
                if steps > cap:
                    raise RewriteCapExceeded(
                        f"more than {cap} rewrites in one normalization"
                    )
                changed = True
                break
            if changed:
                break
    return t, used


class _DemodIndex:
    """Kept demodulators with discrimination-tree lookup."""

    __slots__ = ("tree",)

    def __init__(self):
        self.tree = DiscTree()

    def add(self, rule_id: int, lhs: Term, rhs: Term) -> None:
        self.tree.insert(lhs, (rule_id, lhs, rhs))

    def _rewrite_leftmost_outermost(self, t: Term, used: list, skip_id: int):
        # returns the rewritten term or None; lowest rule id wins at a redex
        if type(t) is not Var:
            best = None
            for rule_id, lhs, rhs in self.tree.retrieve(t):
                if rule_id == skip_id:
                    continue
                if best is not None and rule_id >= best[0]:
                    continue
                binding = match_term(lhs, t)
                if binding is not None:
                    best = (rule_id, binding, rhs)
            if best is not None:
                used.append(best[0])
                return apply_substitution(best[1], best[2])
        tt = type(t)
        if tt is Unary:
            inner = self._rewrite_leftmost_outermost(t.arg, used, skip_id)
            return None if inner is None else Unary(inner)
        if tt is Binary:
            left = self._rewrite_leftmost_outermost(t.left, used, skip_id)
            if left is not None:
                return Binary(left, t.right)
            right = self._rewrite_leftmost_outermost(t.right, used, skip_id)
            if right is not None:
                return Binary(t.left, right)
        return None

    def normalize(
        self, t: Term, *, cap: int = REWRITE_CAP, skip_id: int = 0
    ) -> tuple:
        used: list = []
        steps = 0
        while True:
            rewritten = self._rewrite_leftmost_outermost(t, used, skip_id)
            if rewritten is None:
                return t, used
            t = rewritten
            steps += 1
            if steps > cap:
                raise RewriteCapExceeded(
                    f"more than {cap} rewrites in one normalization"
                )


# ---------------------------------------------------------------------------
# paramodulation


@dataclass(frozen=True)
class Paramodulant:
    result: Equation
    from_side: int  # 0 = from lhs, 1 = from rhs of the from-equation
    into_side: int  # 0 = into lhs, 1 = into rhs
    path: tuple


def _from_sides(eq: Equation, both: bool) -> list:
    order = kbo_compare(eq.lhs, eq.rhs)
    if order is Order.EQUAL:
        return []
    if both:
        sides = [(0, eq.lhs, eq.rhs), (1, eq.rhs, eq.lhs)]
    elif order is Order.GREATER:
        sides = [(0, eq.lhs, eq.rhs)]
    elif order is Order.LESS:
        sides = [(1, eq.rhs, eq.lhs)]
    else:
        sides = [(0, eq.lhs, eq.rhs), (1, eq.rhs, eq.lhs)]
    return [(tag, frm, to) for tag, frm, to in sides if type(frm) is not Var]


def paramodulants(
    from_eq: Equation,
    into_eq: Equation,
    *,
    from_both_sides: bool = False,
) -> list:
    """All paramodulants of from_eq into into_eq.

    Callers must rename the equations apart.  The from-equation
    contributes its KBO-greater side (both sides when unorientable, or
    always with from_both_sides); replaced positions are the non-variable
    subterm positions of both sides of into_eq.  Never from or into a
    variable position.
    """
    out: list = []
    for from_tag, frm, to in _from_sides(from_eq, from_both_sides):
        for into_tag, into_side in ((0, into_eq.lhs), (1, into_eq.rhs)):
            other = into_eq.rhs if into_tag == 0 else into_eq.lhs
            for path, sub in iter_positions(into_side):
                if type(sub) is Var:
                    continue
                sigma = unify(frm, sub)
                if sigma is None:
                    continue
                new_side = apply_substitution(
                    sigma, replace_at(into_side, path, to)
                )
                new_other = apply_substitution(sigma, other)
                if into_tag == 0:
                    eq = Equation(new_side, new_other, into_eq.positive)
                else:
                    eq = Equation(new_other, new_side, into_eq.positive)
                out.append(Paramodulant(eq, from_tag, into_tag, path))
    return out


_RENAME_PREFIX = "v9"


def rename_apart(eq: Equation) -> Equation:
    """Move an equation's variables into a reserved namespace so it shares
    none with a canonically named partner."""
    mapping = {}
    for i, name in enumerate(sorted(eq.lhs.vars | eq.rhs.vars)):
        mapping[name] = f"{_RENAME_PREFIX}{i}"
    return Equation(
        rename_vars(eq.lhs, mapping), rename_vars(eq.rhs, mapping), eq.positive
    )


# ---------------------------------------------------------------------------
# hints


def hint_keys(hints: Iterable[Equation]) -> frozenset:
    return frozenset(sym_key(h) for h in hints)


def hint_match(c, hints) -> bool:
    """True iff the clause (or equation) is a variant, up to renaming and
    symmetry, of one of the hints."""
    eq = c.eq if isinstance(c, Clause) else c
    if isinstance(hints, frozenset):
        return sym_key(eq) in hints
    return sym_key(eq) in hint_keys(hints)


# ---------------------------------------------------------------------------
# semantic labels


def clause_is_false(eq: Equation, interpretations: Sequence[FiniteAlgebra]) -> bool:
    """False in all interpretations; with none supplied, false = negated."""
    if not interpretations:
        return not eq.positive
    return all(not evaluate(a, eq) for a in interpretations)


# ---------------------------------------------------------------------------
# given-clause selection


class GivenSelector:
    """Cycles through the selection pattern (1 oldest, 4 lightest false,
    4 lightest true by default), skipping empty categories; clauses that
    match hints are drained first, oldest first."""

    def __init__(self, ratio: tuple = (1, 4, 4)):
        oldest, false_n, true_n = ratio
        self.pattern = ["age"] * oldest + ["false"] * false_n + ["true"] * true_n
        if not self.pattern:
            self.pattern = ["age"]
        self.cursor = 0
        self.age: list = []
        self.age_ptr = 0
        self.false_heap: list = []
        self.true_heap: list = []
        self.hint_queue: list = []
        self.hint_ptr = 0

    def add(self, c: Clause) -> None:
        self.age.append(c)
        if c.is_hint:
            self.hint_queue.append(c)
        heap = self.false_heap if c.sem_false else self.true_heap
        heapq.heappush(heap, (c.weight, c.id, c))

    @staticmethod
    def _pop_heap(heap) -> Optional[Clause]:
        while heap:
            _, _, c = heapq.heappop(heap)
            if not c.selected and c.enabled:
                return c
        return None

    def _pop_age(self) -> Optional[Clause]:
        while self.age_ptr < len(self.age):
            c = self.age[self.age_ptr]
            self.age_ptr += 1
            if not c.selected and c.enabled:
                return c
        return None

    def _pop_hint(self) -> Optional[Clause]:
        while self.hint_ptr < len(self.hint_queue):
            c = self.hint_queue[self.hint_ptr]
            self.hint_ptr += 1
            if not c.selected and c.enabled:
                return c
        return None

    def select(self) -> Optional[Clause]:
        c = self._pop_hint()
        if c is not None:
            c.selected = True
            return c
        for _ in range(len(self.pattern)):
            category = self.pattern[self.cursor]
            self.cursor = (self.cursor + 1) % len(self.pattern)
            if category == "age":
                c = self._pop_age()
            elif category == "false":
                c = self._pop_heap(self.false_heap)
            else:
                c = self._pop_heap(self.true_heap)
            if c is not None:
                c.selected = True
                return c
        return None


def select_given(selector: GivenSelector) -> Optional[Clause]:
    return selector.select()


# ---------------------------------------------------------------------------
# results


class Outcome(Enum):
    PROVED = "proved"
    SATURATED = "saturated"
    LIMIT = "limit-exceeded"


@dataclass
class ProveResult:
    outcome: Outcome
    proof: Optional[list]  # clauses of the extracted proof, id order
    kept: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def proved(self) -> bool:
        return self.outcome is Outcome.PROVED

    def listing(self) -> str:
        if self.proof is None:
            raise ValueError("no proof to print")
        lines = [c.listing_line() for c in self.proof]
        lines.append(PROOF_TRAILER)
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# the prover


class _ProofFound(Exception):
    def __init__(self, clause: Clause):
        self.clause = clause


class Prover:
    def __init__(
        self,
        axioms: Sequence[Equation],
        goal: Optional[Equation],
        params: Optional[SearchParams] = None,
    ):
        self.params = params or SearchParams()
        self.clauses: list = [None]  # 1-based ids
        self.selector = GivenSelector(self.params.selection_ratio)
        self.active: list = []
        self.demods = _DemodIndex()
        self.n_rules = 0
        self.subsume = DiscTree()
        self.kept_keys: dict = {}
        self.raw_seen: set = set()
        self.raw_weight_skip: dict = {}
        self.denials: list = []
        self.positives: list = []
        self.hkeys = hint_keys(self.params.hints)
        self.stats = {"given": 0, "generated": 0, "kept": 0, "discarded": 0}
        self.contradiction: Optional[Clause] = None

        if goal is not None and not goal.positive:
            raise ValueError("goals must be positive equations")
        self.goal = goal
        self._init_inputs(axioms, goal)

    # -- input processing

    def _next_id(self) -> int:
        return len(self.clauses)

    def _init_inputs(self, axioms, goal) -> None:
        try:
            goal_id = None
            if goal is not None:
                record = Clause(self._next_id(), goal, Input(), label="goal")
                record.enabled = False  # the positive goal never infers
                self.clauses.append(record)
                goal_id = record.id
            for ax in axioms:
                if not ax.positive:
                    raise ValueError("axioms must be positive equations")
                self._process(ax, Input(), as_input=True)
            if goal is not None:
                denial = deny(goal)
                self._process(denial, GoalDenial(goal_id), as_input=True)
        except _ProofFound as found:
            self.contradiction = found.clause

    # -- clause pipeline

    def _process(self, eq: Equation, justification, *, as_input: bool = False):
        self.stats["generated"] += 1
        raw = None
        if not as_input:
            # cheap duplicate filter on the raw (pre-normalization) form; a
            # repeat normalizes to an already-seen clause unless new rules
            # arrived after a weight discard, in which case we retry
            raw = hash(sym_key(eq))
            if raw in self.raw_seen:
                self.stats["discarded"] += 1
                return None
            if self.raw_weight_skip.get(raw) == self.n_rules:
                self.stats["discarded"] += 1
                return None
        cap = self.params.rewrite_cap
        lhs, used_l = self.demods.normalize(eq.lhs, cap=cap)
        rhs, used_r = self.demods.normalize(eq.rhs, cap=cap)
        rewrites = tuple(used_l + used_r)
        eq2 = Equation(lhs, rhs, eq.positive) if rewrites else eq

        if rewrites:
            if as_input:
                # record the original input, then derive its simplification
                original = self._keep(eq, justification, disable=True)
                justification = RewriteChain(original.id, rewrites)
            elif isinstance(justification, Para):
                justification = Para(
                    justification.from_id, justification.into_id, rewrites
                )

        if raw is not None:
            self.raw_seen.add(raw)
        if eq2.positive and lhs == rhs:
            self.stats["discarded"] += 1
            return None
        if not eq2.positive and lhs == rhs:
            # the denial collapsed to s != s: keep it, then close the proof
            collapsed = self._keep(eq2, justification)
            if rewrites:
                witness = rewrites[-1]
            elif isinstance(justification, Para):
                witness = justification.from_id
            elif isinstance(justification, RewriteChain) and justification.rewrites:
                witness = justification.rewrites[-1]
            else:
                witness = collapsed.id  # degenerate reflexive goal
            self._contradiction(witness, collapsed.id)

        oriented = eq2
        if eq2.positive and kbo_compare(eq2.lhs, eq2.rhs) is Order.LESS:
            oriented = eq2.flipped()
        final = canonical_rename(oriented)

        key = sym_key(final)
        if key in self.kept_keys:
            self.stats["discarded"] += 1
            return None
        is_hint = key in self.hkeys
        maxw = self.params.max_weight
        if (
            not as_input
            and maxw is not None
            and final.weight > maxw
            and not (is_hint and self.params.hint_exempt_from_limits)
        ):
            # a weight discard is provisional: new demodulators may reduce
            # this clause below the limit, so allow a later retry
            if raw is not None:
                self.raw_seen.discard(raw)
                self.raw_weight_skip[raw] = self.n_rules
            self.stats["discarded"] += 1
            return None
        if not as_input and self._subsumed(final):
            self.stats["discarded"] += 1
            return None

        clause = self._keep(final, justification, key=key, is_hint=is_hint)
        self._post_keep(clause)
        return clause

    def _keep(self, eq, justification, *, key=None, is_hint=False, disable=False):
        cid = self._next_id()
        clause = Clause(
            cid,
            eq,
            justification,
            sem_false=clause_is_false(eq, self.params.interpretations),
            is_hint=is_hint,
        )
        self.clauses.append(clause)
        self.stats["kept"] += 1
        if disable:
            clause.enabled = False
            return clause
        if key is not None:
            self.kept_keys[key] = cid
        return clause

    def _post_keep(self, clause: Clause) -> None:
        eq = clause.eq
        self.selector.add(clause)
        self.subsume.insert(eq.lhs, (eq.lhs, eq.rhs, clause.id))
        self.subsume.insert(eq.rhs, (eq.rhs, eq.lhs, clause.id))
        if eq.positive:
            self.positives.append(clause)
            if kbo_compare(eq.lhs, eq.rhs) is Order.GREATER:
                self.demods.add(clause.id, eq.lhs, eq.rhs)
                self.n_rules += 1
            for denial in self.denials:
                if denial.enabled:
                    self._try_conflict(clause, denial)
        else:
            self.denials.append(clause)
            for pos in self.positives:
                self._try_conflict(pos, clause)

    def _subsumed(self, eq: Equation) -> bool:
        for lhs, rhs, cid in self.subsume.retrieve(eq.lhs):
            clause = self.clauses[cid]
            if not clause.enabled or clause.eq.positive != eq.positive:
                continue
            binding = match_term(lhs, eq.lhs)
            if binding is not None and match_term(rhs, eq.rhs, binding) is not None:
                return True
        return False

    def _try_conflict(self, pos: Clause, denial: Clause) -> None:
        sigma = _conflict_unifier(pos.eq, denial.eq)
        if sigma is not None:
            self._contradiction(pos.id, denial.id)

    def _contradiction(self, pos_id: int, denial_id: int) -> None:
        clause = Clause(
            self._next_id(),
            None,
            Contradiction(pos_id, denial_id),
            is_contradiction=True,
        )
        self.clauses.append(clause)
        raise _ProofFound(clause)

    def _resimplify(self, given: Clause) -> bool:
        """Rules kept after this clause may reduce it; if so, replace it by
        its normal form (a cheap stand-in for backward demodulation)."""
        cap = self.params.rewrite_cap
        lhs, used_l = self.demods.normalize(given.eq.lhs, cap=cap, skip_id=given.id)
        rhs, used_r = self.demods.normalize(given.eq.rhs, cap=cap, skip_id=given.id)
        if not used_l and not used_r:
            return False
        given.enabled = False
        self._process(
            Equation(lhs, rhs, given.eq.positive),
            RewriteChain(given.id, tuple(used_l + used_r)),
        )
        return True

    # -- inference

    def _infer(self, given: Clause) -> None:
        for partner in self.active:
            pairs = [(given, partner)]
            if partner is not given:
                pairs.append((partner, given))
            for frm, into in pairs:
                if not frm.eq.positive:
                    continue
                for pm in paramodulants(frm.eq, into.renamed):
                    self._process(pm.result, Para(frm.id, into.id))

    # -- main loop

    def run(self) -> ProveResult:
        params = self.params
        deadline = (
            time.monotonic() + params.max_seconds
            if params.max_seconds is not None
            else None
        )
        outcome = Outcome.SATURATED
        if self.contradiction is None:
            try:
                while True:
                    if (
                        params.max_given is not None
                        and self.stats["given"] >= params.max_given
                    ):
                        outcome = Outcome.LIMIT
                        break
                    if deadline is not None and time.monotonic() > deadline:
                        outcome = Outcome.LIMIT
                        break
                    given = self.selector.select()
                    if given is None:
                        break
                    if self._resimplify(given):
                        continue
                    self.stats["given"] += 1
                    self.active.append(given)
                    self._infer(given)
            except _ProofFound as found:
                self.contradiction = found.clause
        if self.contradiction is not None:
            return ProveResult(
                Outcome.PROVED,
                self._extract_proof(self.contradiction),
                kept=self._kept_clauses(),
                stats=dict(self.stats),
            )
        return ProveResult(
            outcome, None, kept=self._kept_clauses(), stats=dict(self.stats)
        )

    def _kept_clauses(self) -> list:
        return [c for c in self.clauses[1:] if c is not None and not c.is_contradiction]

    def _extract_proof(self, final: Clause) -> list:
        needed = set()
        stack = [final.id]
        while stack:
            cid = stack.pop()
            if cid in needed or cid == 0:
                continue
            needed.add(cid)
            stack.extend(self.clauses[cid].parents())
        return [self.clauses[cid] for cid in sorted(needed)]


def deny(goal: Equation) -> Equation:
    """Deny a positive universally quantified goal: replace its variables
    with fresh constants c1, c2, ... in order of first appearance, negate,
    and put the KBO-greater side first when orientable."""
    mapping: dict = {}

    def walk(t: Term):
        tt = type(t)
        if tt is Var:
            if t.name not in mapping:
                mapping[t.name] = f"c{len(mapping) + 1}"
        elif tt is Unary:
            walk(t.arg)
        elif tt is Binary:
            walk(t.left)
            walk(t.right)

    walk(goal.lhs)
    walk(goal.rhs)

    def ground(t: Term) -> Term:
        tt = type(t)
        if tt is Var:
            return Const(mapping[t.name])
        if tt is Unary:
            return Unary(ground(t.arg))
        if tt is Binary:
            return Binary(ground(t.left), ground(t.right))
        return t

    denial = Equation(ground(goal.lhs), ground(goal.rhs), positive=False)
    if kbo_compare(denial.lhs, denial.rhs) is Order.LESS:
        denial = denial.flipped()
    return denial


def _conflict_unifier(pos: Equation, neg: Equation):
    """Simultaneous unifier proving a unit conflict, if any."""
    pos_r = rename_apart(pos)
    for lhs, rhs in ((neg.lhs, neg.rhs), (neg.rhs, neg.lhs)):
        first = unify(pos_r.lhs, lhs)
        if first is None:
            continue
        second = unify(
            apply_substitution(first, pos_r.rhs), apply_substitution(first, rhs)
        )
        if second is not None:
            return (first, second)
    return None


# ---------------------------------------------------------------------------
# public operations


def paramodulate_pair(from_clause, into_clause) -> list:
    """All equations obtainable by paramodulating one positive unit into
    another; both inputs may be Clause or Equation."""
    from_eq = from_clause.eq if isinstance(from_clause, Clause) else from_clause
    into_eq = into_clause.eq if isinstance(into_clause, Clause) else into_clause
    if not from_eq.positive or not into_eq.positive:
        raise ValueError("paramodulate_pair expects positive units")
    return [pm.result for pm in paramodulants(from_eq, rename_apart(into_eq))]


def prove(
    axioms: Sequence[Equation],
    goal: Equation,
    params: Optional[SearchParams] = None,
) -> ProveResult:
    """Saturate until the denied goal produces a contradiction, the usable
    set empties (Saturated; under a weight limit this is not a disproof),
    or a limit is hit."""
    return Prover(axioms, goal, params).run()


def derive_consequences(
    axioms: Sequence[Equation],
    params: Optional[SearchParams] = None,
) -> list:
    """Run the loop with no goal until a limit; returns kept clauses with
    semantic labels relative to params.interpretations."""
    prover = Prover(axioms, None, params)
    result = prover.run()
    return result.kept
