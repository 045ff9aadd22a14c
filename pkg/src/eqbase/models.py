"""Finite algebras with one binary and one unary operation table.

Supports identity evaluation, exhaustive enumeration at small sizes,
backtracking model/countermodel search with constraint propagation, and
classification of tables up to "inverse semigroup with natural inversion".
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence

from .terms import Binary, Const, Equation, Term, Unary, Var

DEFAULT_NODE_BUDGET = 100_000_000


class BudgetExceeded(RuntimeError):
    """Raised when a search exceeds its node budget."""


@dataclass(frozen=True)
class FiniteAlgebra:
    """Operation tables over the domain {0, ..., size-1}."""

    size: int
    binary: tuple
    unary: tuple

    def __post_init__(self):
        object.__setattr__(self, "binary", tuple(tuple(row) for row in self.binary))
        object.__setattr__(self, "unary", tuple(self.unary))
        n = self.size
        if n < 1:
            raise ValueError("size must be >= 1")
        if len(self.binary) != n or any(len(row) != n for row in self.binary):
            raise ValueError("binary table must be n x n")
        if len(self.unary) != n:
            raise ValueError("unary table must have n entries")
        entries = [v for row in self.binary for v in row] + list(self.unary)
        if any(not (0 <= v < n) for v in entries):
            raise ValueError("table entries must lie in [0, size)")

    def mul(self, a: int, b: int) -> int:
        return self.binary[a][b]

    def inv(self, a: int) -> int:
        return self.unary[a]

    def format_block(self) -> str:
        lines = [f"size {self.size}"]
        for row in self.binary:
            lines.append(" ".join(str(v) for v in row))
        lines.append(" ".join(str(v) for v in self.unary))
        return "\n".join(lines) + "\n"


def parse_algebra_block(text: str) -> FiniteAlgebra:
    """Parse the block format emitted by FiniteAlgebra.format_block."""
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows or rows[0][0] != "size":
        raise ValueError("expected a 'size <n>' header line")
    n = int(rows[0][1])
    numeric = [[int(v) for v in row] for row in rows[1:]]
    if len(numeric) != n + 1:
        raise ValueError(f"expected {n} binary rows plus one unary row")
    return FiniteAlgebra(n, numeric[:n], numeric[n])


def parse_algebra_blocks(text: str) -> list:
    """Parse several blocks separated by 'size' headers."""
    blocks: list = []
    current: list = []
    for line in text.splitlines():
        if line.strip().startswith("size") and current:
            blocks.append("\n".join(current))
            current = [line]
        elif line.strip():
            current.append(line)
    if current:
        blocks.append("\n".join(current))
    return [parse_algebra_block(b) for b in blocks]


# ---------------------------------------------------------------------------
# identity evaluation
#
# Terms compile to postfix programs over a value stack.  Constants in an
# equation have no table interpretation, so they are treated as extra
# universally quantified variables; this also gives ground goal denials
# the evaluation the selection semantics needs (a denial is true in an
# algebra iff every assignment separates its sides).

_OP_UNARY = -1
_OP_BINARY = -2

_compile_cache: dict = {}


def _compile_side(t: Term, names: dict, code: list):
    tt = type(t)
    if tt is Var or tt is Const:
        key = ("v", t.name) if tt is Var else ("c", t.name)
        code.append(names.setdefault(key, len(names)))
    elif tt is Unary:
        _compile_side(t.arg, names, code)
        code.append(_OP_UNARY)
    else:
        _compile_side(t.left, names, code)
        _compile_side(t.right, names, code)
        code.append(_OP_BINARY)


def compile_equation(e: Equation) -> tuple:
    """Return (lhs_code, rhs_code, nvars) with shared variable slots."""
    cached = _compile_cache.get(e)
    if cached is None:
        names: dict = {}
        left: list = []
        right: list = []
        _compile_side(e.lhs, names, left)
        _compile_side(e.rhs, names, right)
        cached = (tuple(left), tuple(right), len(names))
        _compile_cache[e] = cached
    return cached


def _run(code: tuple, env, binary, unary) -> int:
    stack: list = []
    push = stack.append
    for op in code:
        if op >= 0:
            push(env[op])
        elif op == _OP_UNARY:
            stack[-1] = unary[stack[-1]]
        else:
            r = stack.pop()
            stack[-1] = binary[stack[-1]][r]
    return stack[0]


def evaluate(a: FiniteAlgebra, e: Equation) -> bool:
    """For a positive equation: true iff both sides agree under every
    assignment.  For a negated equation: true iff every assignment
    separates the sides."""
    left, right, nvars = compile_equation(e)
    binary, unary = a.binary, a.unary
    want = e.positive
    for env in itertools.product(range(a.size), repeat=nvars):
        same = _run(left, env, binary, unary) == _run(right, env, binary, unary)
        if same != want:
            return False
    return True


def holds_all(a: FiniteAlgebra, eqs: Iterable[Equation]) -> bool:
    return all(evaluate(a, e) for e in eqs)


# ---------------------------------------------------------------------------
# inverses and classification


def inverses_of(a: FiniteAlgebra, elem: int) -> set:
    """Elements b with aba = a and bab = b under both parenthesizations,
    so the notion is robust on non-associative tables."""
    mul = a.binary
    out = set()
    x = elem
    for b in range(a.size):
        if (
            mul[mul[x][b]][x] == x
            and mul[x][mul[b][x]] == x
            and mul[mul[b][x]][b] == b
            and mul[b][mul[x][b]] == b
        ):
            out.add(b)
    return out


class Classification(Enum):
    NOT_SEMIGROUP = "not-semigroup"
    NOT_REGULAR = "not-regular"
    REGULAR_NOT_INVERSE = "regular-not-inverse"
    INVERSE_WRONG_UNARY = "inverse-wrong-unary"
    INVERSE_NATURAL = "inverse-with-natural-inversion"


def is_associative(binary: Sequence) -> bool:
    n = len(binary)
    rng = range(n)
    for i in rng:
        row_i = binary[i]
        for j in rng:
            ij = row_i[j]
            row_ij = binary[ij]
            row_j = binary[j]
            for k in rng:
                if row_ij[k] != row_i[row_j[k]]:
                    return False
    return True


def idempotents(a: FiniteAlgebra) -> list:
    return [e for e in range(a.size) if a.binary[e][e] == e]


def classify(a: FiniteAlgebra) -> Classification:
    """Stages: associativity, regularity, uniqueness of inverses (checked
    against commuting idempotents, which must agree), natural unary."""
    if not is_associative(a.binary):
        return Classification.NOT_SEMIGROUP
    inv_sets = [inverses_of(a, x) for x in range(a.size)]
    if any(not s for s in inv_sets):
        return Classification.NOT_REGULAR
    unique = all(len(s) == 1 for s in inv_sets)
    idem = idempotents(a)
    mul = a.binary
    commuting = all(
        mul[e][f] == mul[f][e] for e in idem for f in idem
    )
    if unique != commuting:
        raise AssertionError(
            "uniqueness of inverses and commuting idempotents disagree on an "
            "associative regular table; classification is ill-defined"
        )
    if not unique:
        return Classification.REGULAR_NOT_INVERSE
    natural = tuple(next(iter(s)) for s in inv_sets)
    if natural != a.unary:
        return Classification.INVERSE_WRONG_UNARY
    return Classification.INVERSE_NATURAL


# ---------------------------------------------------------------------------
# exhaustive enumeration


@dataclass
class EnumStats:
    visited: int
    tallies: Counter


def enumerate_all(
    n: int,
    visitor: Callable[[FiniteAlgebra], object],
    *,
    sample: Optional[int] = None,
    seed: int = 0,
) -> EnumStats:
    """Visit algebras of size n in lexicographic table order (binary rows
    first, then the unary row) and tally non-None visitor results.

    Full enumeration is limited to n <= 3 (n = 3 already means 531441
    tables); larger sizes require a sample count.
    """
    if n < 1:
        raise ValueError("size must be >= 1")
    if sample is None and n >= 4:
        raise BudgetExceeded(
            f"full enumeration at size {n} exceeds the enumeration budget; "
            "pass a sample count for sampled visits"
        )
    rng = range(n)
    tallies: Counter = Counter()
    visited = 0
    if sample is None:
        cells = n * n
        for flat in itertools.product(rng, repeat=cells + n):
            binary = tuple(flat[i * n : (i + 1) * n] for i in range(n))
            a = FiniteAlgebra(n, binary, flat[cells:])
            visited += 1
            result = visitor(a)
            if result is not None:
                tallies[result] += 1
    else:
        rand = random.Random(seed)
        for _ in range(sample):
            binary = tuple(
                tuple(rand.randrange(n) for _ in rng) for _ in rng
            )
            unary = tuple(rand.randrange(n) for _ in rng)
            a = FiniteAlgebra(n, binary, unary)
            visited += 1
            result = visitor(a)
            if result is not None:
                tallies[result] += 1
    return EnumStats(visited, tallies)


# ---------------------------------------------------------------------------
# backtracking model search


@dataclass(frozen=True)
class ModelQuery:
    """Find an algebra satisfying every must_hold identity while falsifying
    every must_fail one (falsify = some assignment breaks it)."""

    must_hold: tuple
    must_fail: tuple = ()
    min_size: int = 1
    max_size: int = 4

    def __post_init__(self):
        object.__setattr__(self, "must_hold", tuple(self.must_hold))
        object.__setattr__(self, "must_fail", tuple(self.must_fail))
        if self.min_size < 1 or self.max_size < self.min_size:
            raise ValueError("need 1 <= min_size <= max_size")


class _Searcher:
    """DFS over table cells in row-major order (binary first, then unary),
    value order 0..n-1, pruning with watched ground instances of the
    must_hold identities."""

    BLOCKED, OK, VIOLATED = 0, 1, 2

    def __init__(self, n: int, query: ModelQuery, budget: list, symmetry_break: bool):
        self.n = n
        self.query = query
        self.budget = budget
        self.symmetry_break = symmetry_break
        self.ncells = n * n + n
        self.cells = [None] * self.ncells
        # watch[cell] lists instance indexes blocked on that cell
        self.watch = [[] for _ in range(self.ncells)]
        self.instances: list = []
        n_sq = n * n
        for eq in query.must_hold:
            left, right, nvars = compile_equation(eq)
            for env in itertools.product(range(n), repeat=nvars):
                self.instances.append((left, right, env))
        self.trail: list = []

    def _eval_code(self, code, env):
        # returns (value, None) or (None, blocking_cell)
        n = self.n
        cells = self.cells
        stack: list = []
        push = stack.append
        for op in code:
            if op >= 0:
                push(env[op])
            elif op == _OP_UNARY:
                v = cells[n * n + stack[-1]]
                if v is None:
                    return None, n * n + stack[-1]
                stack[-1] = v
            else:
                r = stack.pop()
                cell = stack[-1] * n + r
                v = cells[cell]
                if v is None:
                    return None, cell
                stack[-1] = v
        return stack[0], None

    def _check_instance(self, idx: int):
        left, right, env = self.instances[idx]
        lv, lcell = self._eval_code(left, env)
        if lv is None:
            return self.BLOCKED, lcell
        rv, rcell = self._eval_code(right, env)
        if rv is None:
            return self.BLOCKED, rcell
        return (self.OK, None) if lv == rv else (self.VIOLATED, None)

    def _assign(self, cell: int, value: int) -> bool:
        self.budget[0] -= 1
        if self.budget[0] < 0:
            raise BudgetExceeded("model search exceeded its node budget")
        self.cells[cell] = value
        self.trail.append(("cell", cell, None))
        pending = self.watch[cell]
        self.watch[cell] = []
        self.trail.append(("watchlist", cell, pending))
        for idx in pending:
            status, block = self._check_instance(idx)
            if status == self.VIOLATED:
                return False
            if status == self.BLOCKED:
                self.watch[block].append(idx)
                self.trail.append(("appended", block, None))
        return True

    def _undo(self, mark: int):
        while len(self.trail) > mark:
            kind, cell, payload = self.trail.pop()
            if kind == "cell":
                self.cells[cell] = None
            elif kind == "watchlist":
                self.watch[cell] = payload
            else:  # appended
                self.watch[cell].pop()

    def _leaf_algebra(self) -> FiniteAlgebra:
        n = self.n
        binary = tuple(tuple(self.cells[i * n : (i + 1) * n]) for i in range(n))
        return FiniteAlgebra(n, binary, tuple(self.cells[n * n :]))

    def run(self) -> Optional[FiniteAlgebra]:
        # seed watches: every instance checked once against the empty table
        for idx in range(len(self.instances)):
            status, block = self._check_instance(idx)
            if status == self.VIOLATED:
                return None
            if status == self.BLOCKED:
                self.watch[block].append(idx)
        return self._dfs(0)

    def _dfs(self, depth: int) -> Optional[FiniteAlgebra]:
        if depth == self.ncells:
            a = self._leaf_algebra()
            if all(evaluate(a, eq) for eq in self.query.must_hold) and all(
                not evaluate(a, eq) for eq in self.query.must_fail
            ):
                return a
            return None
        values = range(self.n)
        if depth == 0 and self.symmetry_break and self.n > 1:
            values = range(2)
        for v in values:
            mark = len(self.trail)
            if self._assign(depth, v):
                found = self._dfs(depth + 1)
                if found is not None:
                    return found
            self._undo(mark)
        return None


def find_model(
    q: ModelQuery,
    *,
    budget: int = DEFAULT_NODE_BUDGET,
    symmetry_break: bool = False,
) -> Optional[FiniteAlgebra]:
    """First algebra (deterministic search order, smallest size first)
    satisfying the query, or None when the size range is exhausted.

    With symmetry_break the first binary cell is limited to {0, 1}, which
    speeds up pure existence queries but changes which model is "first".
    """
    shared = [budget]
    for n in range(q.min_size, q.max_size + 1):
        searcher = _Searcher(n, q, shared, symmetry_break)
        found = searcher.run()
        if found is not None:
            return found
    return None
