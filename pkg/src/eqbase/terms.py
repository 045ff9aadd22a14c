"""Terms and equations over one binary operation `*` and one postfix unary `'`.

Concrete syntax (shared by axiom files, hints files and proof listings):

    x * (x' * x) = x.
    c1'' != c1.

Identifiers whose first letter is one of u, v, w, x, y, z are variables;
all other identifiers (c1, c2, a, ...) are constants.  `*` is left
associative when parentheses are omitted, `'` binds tighter than `*`.
A statement may end with `.` and may be followed by a `#` comment or a
`[...]` justification, both of which are ignored by the parser.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional

VARIABLE_INITIALS = frozenset("uvwxyz")

# canonical variable names, in the order derived clauses are renamed
_CANON = ("x", "y", "z", "u", "w")


def canonical_var(i: int) -> str:
    return _CANON[i] if i < len(_CANON) else f"v{i}"


def is_variable_name(name: str) -> bool:
    return name[0] in VARIABLE_INITIALS


# ---------------------------------------------------------------------------
# terms


class Term:
    """Base class; concrete terms are Var, Const, Unary, Binary."""

    __slots__ = ()

    size: int
    depth: int
    vars: frozenset

    def __str__(self) -> str:
        return term_to_str(self)


class Var(Term):
    __slots__ = ("name", "size", "depth", "vars", "_hash")

    def __init__(self, name: str):
        self.name = name
        self.size = 1
        self.depth = 0
        self.vars = frozenset((name,))
        self._hash = hash(("v", name))

    def __eq__(self, other):
        return self is other or (type(other) is Var and other.name == self.name)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Var({self.name!r})"


class Const(Term):
    __slots__ = ("name", "size", "depth", "vars", "_hash")

    def __init__(self, name: str):
        self.name = name
        self.size = 1
        self.depth = 0
        self.vars = frozenset()
        self._hash = hash(("c", name))

    def __eq__(self, other):
        return self is other or (type(other) is Const and other.name == self.name)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Const({self.name!r})"


class Unary(Term):
    __slots__ = ("arg", "size", "depth", "vars", "_hash")

    def __init__(self, arg: Term):
        self.arg = arg
        self.size = arg.size + 1
        self.depth = arg.depth + 1
        self.vars = arg.vars
        self._hash = hash(("u", arg._hash))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is Unary
            and other._hash == self._hash
            and other.arg == self.arg
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Unary({self.arg!r})"


class Binary(Term):
    __slots__ = ("left", "right", "size", "depth", "vars", "_hash")

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right
        self.size = left.size + right.size + 1
        self.depth = max(left.depth, right.depth) + 1
        self.vars = left.vars | right.vars
        self._hash = hash(("b", left._hash, right._hash))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is Binary
            and other._hash == self._hash
            and other.left == self.left
            and other.right == self.right
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Binary({self.left!r}, {self.right!r})"


def term_to_str(t: Term) -> str:
    if type(t) is Var or type(t) is Const:
        return t.name
    if type(t) is Unary:
        inner = term_to_str(t.arg)
        if type(t.arg) is Binary:
            inner = f"({inner})"
        return inner + "'"
    left = term_to_str(t.left)
    if type(t.left) is Binary:
        left = f"({left})"
    right = term_to_str(t.right)
    if type(t.right) is Binary:
        right = f"({right})"
    return f"{left} * {right}"


# ---------------------------------------------------------------------------
# equations


class Equation:
    """An ordered pair of terms, either an equality or a negated equality.

    Negated equalities only appear in goals and their denials, never in
    axioms or derived positive units.
    """

    __slots__ = ("lhs", "rhs", "positive", "weight", "_hash")

    def __init__(self, lhs: Term, rhs: Term, positive: bool = True):
        self.lhs = lhs
        self.rhs = rhs
        self.positive = positive
        self.weight = lhs.size + rhs.size
        self._hash = hash(("e", lhs._hash, rhs._hash, positive))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is Equation
            and other._hash == self._hash
            and other.positive == self.positive
            and other.lhs == self.lhs
            and other.rhs == self.rhs
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Equation({self.lhs!r}, {self.rhs!r}, {self.positive!r})"

    def __str__(self) -> str:
        op = "=" if self.positive else "!="
        return f"{term_to_str(self.lhs)} {op} {term_to_str(self.rhs)}"

    def flipped(self) -> "Equation":
        return Equation(self.rhs, self.lhs, self.positive)

    @property
    def uniform(self) -> bool:
        return self.lhs.vars == self.rhs.vars


@dataclass(frozen=True)
class Measures:
    weight: int
    vars_lhs: frozenset
    vars_rhs: frozenset
    uniform: bool
    depth: int


def measures(e: Equation) -> Measures:
    """Weight counts every node of both term trees (variables, constants
    and operators all count 1); uniform means both sides use the same
    variable set."""
    return Measures(
        weight=e.weight,
        vars_lhs=e.lhs.vars,
        vars_rhs=e.rhs.vars,
        uniform=e.uniform,
        depth=max(e.lhs.depth, e.rhs.depth),
    )


# ---------------------------------------------------------------------------
# parsing


class EqSyntaxError(ValueError):
    """Syntax error with the offending position in the source line."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at column {position + 1})")
        self.position = position


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "!" and i + 1 < n and text[i + 1] == "=":
            tokens.append(("NEQ", "!=", i))
            i += 2
        elif c == "=":
            tokens.append(("EQ", "=", i))
            i += 1
        elif c == "*":
            tokens.append(("STAR", "*", i))
            i += 1
        elif c == "'":
            tokens.append(("PRIME", "'", i))
            i += 1
        elif c == "(":
            tokens.append(("LP", "(", i))
            i += 1
        elif c == ")":
            tokens.append(("RP", ")", i))
            i += 1
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("IDENT", text[i:j], i))
            i = j
        else:
            raise EqSyntaxError(f"illegal token {c!r}", i)
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is not None:
            self.pos += 1
        return tok

    def here(self) -> int:
        tok = self.peek()
        return tok[2] if tok is not None else len(self.text)

    def parse_primary(self) -> Term:
        tok = self.next()
        if tok is None:
            raise EqSyntaxError("empty side or missing term", len(self.text))
        kind, value, at = tok
        if kind == "IDENT":
            t: Term = Var(value) if is_variable_name(value) else Const(value)
        elif kind == "LP":
            t = self.parse_term()
            closing = self.next()
            if closing is None or closing[0] != "RP":
                raise EqSyntaxError("unbalanced parenthesis", at)
        else:
            raise EqSyntaxError(f"unexpected {value!r}", at)
        while self.peek() is not None and self.peek()[0] == "PRIME":
            self.next()
            t = Unary(t)
        return t

    def parse_term(self) -> Term:
        t = self.parse_primary()
        while self.peek() is not None and self.peek()[0] == "STAR":
            self.next()
            t = Binary(t, self.parse_primary())
        return t


def _strip_trailers(text: str) -> str:
    # comments and justifications never occur inside a term
    for mark in ("#", "["):
        cut = text.find(mark)
        if cut >= 0:
            text = text[:cut]
    text = text.rstrip()
    if text.endswith("."):
        text = text[:-1].rstrip()
    return text


def parse_term(text: str) -> Term:
    p = _Parser(_strip_trailers(text))
    t = p.parse_term()
    tok = p.peek()
    if tok is not None:
        raise EqSyntaxError(f"unexpected {tok[1]!r} after term", tok[2])
    return t


def parse_equation(text: str) -> Equation:
    """Parse one statement `<term> = <term>` or `<term> != <term>`."""
    p = _Parser(_strip_trailers(text))
    lhs = p.parse_term()
    tok = p.next()
    if tok is None:
        raise EqSyntaxError("missing '=' or '!='", len(p.text))
    if tok[0] not in ("EQ", "NEQ"):
        raise EqSyntaxError(f"expected '=' or '!=', found {tok[1]!r}", tok[2])
    rhs = p.parse_term()
    rest = p.peek()
    if rest is not None:
        raise EqSyntaxError(f"unexpected {rest[1]!r} after equation", rest[2])
    return Equation(lhs, rhs, positive=(tok[0] == "EQ"))


def parse_equations(text: str) -> list:
    """Parse a file body: one equation per line, `#` comments, blank lines."""
    eqs = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        eqs.append(parse_equation(line))
    return eqs


# ---------------------------------------------------------------------------
# substitution, matching, unification

# A substitution is a plain dict mapping variable names to Terms.  unify
# returns substitutions in triangle-solved (idempotent) form: no binding
# image contains a bound variable.


def apply_substitution(sub: dict, t: Term) -> Term:
    if not sub or not t.vars:
        return t
    tt = type(t)
    if tt is Var:
        return sub.get(t.name, t)
    if tt is Unary:
        return Unary(apply_substitution(sub, t.arg))
    if tt is Binary:
        return Binary(
            apply_substitution(sub, t.left), apply_substitution(sub, t.right)
        )
    return t


def apply_substitution_eq(sub: dict, e: Equation) -> Equation:
    return Equation(
        apply_substitution(sub, e.lhs),
        apply_substitution(sub, e.rhs),
        e.positive,
    )


def _occurs(name: str, t: Term, sub: dict) -> bool:
    stack = [t]
    while stack:
        s = stack.pop()
        if not s.vars:
            continue
        ts = type(s)
        if ts is Var:
            if s.name == name:
                return True
            bound = sub.get(s.name)
            if bound is not None:
                stack.append(bound)
        elif ts is Unary:
            stack.append(s.arg)
        elif ts is Binary:
            stack.append(s.left)
            stack.append(s.right)
    return False


def unify(s: Term, t: Term) -> Optional[dict]:
    """Most general unifier with occurs-check, or None on failure."""
    sub: dict = {}
    stack = [(s, t)]
    while stack:
        a, b = stack.pop()
        while type(a) is Var and a.name in sub:
            a = sub[a.name]
        while type(b) is Var and b.name in sub:
            b = sub[b.name]
        if a is b or a == b:
            continue
        ta, tb = type(a), type(b)
        if ta is Var:
            if _occurs(a.name, b, sub):
                return None
            sub[a.name] = b
        elif tb is Var:
            if _occurs(b.name, a, sub):
                return None
            sub[b.name] = a
        elif ta is Unary and tb is Unary:
            stack.append((a.arg, b.arg))
        elif ta is Binary and tb is Binary:
            stack.append((a.left, b.left))
            stack.append((a.right, b.right))
        elif ta is Const and tb is Const and a.name == b.name:
            continue
        else:
            return None
    # resolve chains so the result is idempotent
    resolved: dict = {}

    def walk(term: Term) -> Term:
        if not term.vars:
            return term
        tt = type(term)
        if tt is Var:
            bound = sub.get(term.name)
            return term if bound is None else walk(bound)
        if tt is Unary:
            return Unary(walk(term.arg))
        return Binary(walk(term.left), walk(term.right))

    for name in sub:
        resolved[name] = walk(sub[name])
    return resolved


def match_term(pattern: Term, target: Term, bindings: Optional[dict] = None) -> Optional[dict]:
    """One-way match: sub with sub(pattern) == target, or None.

    Variables of the target are treated as constants: they can appear
    inside binding images but a non-variable pattern never matches them.
    """
    sub = {} if bindings is None else dict(bindings)
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        tp = type(p)
        if tp is Var:
            bound = sub.get(p.name)
            if bound is None:
                sub[p.name] = t
            elif bound != t:
                return None
        elif tp is Unary:
            if type(t) is not Unary:
                return None
            stack.append((p.arg, t.arg))
        elif tp is Binary:
            if type(t) is not Binary:
                return None
            stack.append((p.left, t.left))
            stack.append((p.right, t.right))
        else:  # Const
            if type(t) is not Const or t.name != p.name:
                return None
    return sub


# ---------------------------------------------------------------------------
# Knuth-Bendix order


class Order(Enum):
    GREATER = "greater"
    LESS = "less"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def _var_counts(t: Term) -> dict:
    counts: dict = {}
    stack = [t]
    while stack:
        s = stack.pop()
        ts = type(s)
        if ts is Var:
            counts[s.name] = counts.get(s.name, 0) + 1
        elif ts is Unary:
            stack.append(s.arg)
        elif ts is Binary:
            stack.append(s.left)
            stack.append(s.right)
    return counts


def _prec(t: Term):
    # precedence: ' > * > constants (constants ordered by name); variables
    # have no precedence and are handled before this is consulted
    tt = type(t)
    if tt is Unary:
        return (3,)
    if tt is Binary:
        return (2,)
    if tt is Const:
        return (1, t.name)
    return (0,)


def kbo_compare(s: Term, t: Term) -> Order:
    """Knuth-Bendix order, all symbol and variable weights 1.

    Total on ground terms; s GREATER t implies every instance of s is
    greater than the corresponding instance of t.
    """
    if s == t:
        return Order.EQUAL
    cs, ct = _var_counts(s), _var_counts(t)
    s_covers_t = all(cs.get(v, 0) >= c for v, c in ct.items())
    t_covers_s = all(ct.get(v, 0) >= c for v, c in cs.items())
    if not s_covers_t and not t_covers_s:
        return Order.INCOMPARABLE
    if s.size > t.size:
        return Order.GREATER if s_covers_t else Order.INCOMPARABLE
    if t.size > s.size:
        return Order.LESS if t_covers_s else Order.INCOMPARABLE

    # equal weight: precedence on head symbols, then lexicographic arguments
    ts, tt = type(s), type(t)
    if ts is Var or tt is Var:
        # equal weight 1 with distinct terms: var vs var or var vs const
        return Order.INCOMPARABLE
    ps, pt = _prec(s), _prec(t)
    if ps > pt:
        return Order.GREATER if s_covers_t else Order.INCOMPARABLE
    if pt > ps:
        return Order.LESS if t_covers_s else Order.INCOMPARABLE
    if ts is Const:
        return Order.EQUAL  # same name handled by s == t above; unreachable
    if ts is Unary:
        sub = kbo_compare(s.arg, t.arg)
    else:
        sub = kbo_compare(s.left, t.left)
        if sub is Order.EQUAL:
            sub = kbo_compare(s.right, t.right)
    if sub is Order.GREATER:
        return Order.GREATER if s_covers_t else Order.INCOMPARABLE
    if sub is Order.LESS:
        return Order.LESS if t_covers_s else Order.INCOMPARABLE
    return Order.INCOMPARABLE if sub is Order.INCOMPARABLE else Order.EQUAL


def orient(e: Equation) -> Equation:
    """Return e with its KBO-greater side on the left when orientable."""
    if kbo_compare(e.lhs, e.rhs) is Order.LESS:
        return e.flipped()
    return e


# ---------------------------------------------------------------------------
# positions and rewriting support


def iter_positions(t: Term, path: tuple = ()) -> Iterator[tuple]:
    """Yield (path, subterm) pairs in leftmost-outermost (preorder) order."""
    yield path, t
    tt = type(t)
    if tt is Unary:
        yield from iter_positions(t.arg, path + (0,))
    elif tt is Binary:
        yield from iter_positions(t.left, path + (0,))
        yield from iter_positions(t.right, path + (1,))


def subterm_at(t: Term, path: tuple) -> Term:
    for step in path:
        t = t.arg if type(t) is Unary else (t.left if step == 0 else t.right)
    return t


def replace_at(t: Term, path: tuple, new: Term) -> Term:
    if not path:
        return new
    step, rest = path[0], path[1:]
    if type(t) is Unary:
        return Unary(replace_at(t.arg, rest, new))
    if step == 0:
        return Binary(replace_at(t.left, rest, new), t.right)
    return Binary(t.left, replace_at(t.right, rest, new))


# ---------------------------------------------------------------------------
# renaming, canonical forms, variants


def rename_vars(t: Term, mapping: dict) -> Term:
    if not t.vars:
        return t
    tt = type(t)
    if tt is Var:
        name = mapping.get(t.name)
        return t if name is None else Var(name)
    if tt is Unary:
        return Unary(rename_vars(t.arg, mapping))
    return Binary(rename_vars(t.left, mapping), rename_vars(t.right, mapping))


def _first_occurrence_map(*terms: Term) -> dict:
    mapping: dict = {}

    def walk(t: Term):
        tt = type(t)
        if tt is Var:
            if t.name not in mapping:
                mapping[t.name] = canonical_var(len(mapping))
        elif tt is Unary:
            walk(t.arg)
        elif tt is Binary:
            walk(t.left)
            walk(t.right)

    for t in terms:
        walk(t)
    return mapping


def canonical_rename(e: Equation) -> Equation:
    """Rename variables to x, y, z, u, w, v5, ... by first occurrence."""
    mapping = _first_occurrence_map(e.lhs, e.rhs)
    if all(old == new for old, new in mapping.items()):
        return e
    return Equation(
        rename_vars(e.lhs, mapping), rename_vars(e.rhs, mapping), e.positive
    )


def flatterm(t: Term, varmap: Optional[dict] = None) -> tuple:
    """Preorder symbol string encoding; variables numbered by first
    occurrence when varmap is shared across calls."""
    out: list = []
    stack = [t]
    while stack:
        s = stack.pop()
        ts = type(s)
        if ts is Var:
            if varmap is None:
                out.append("?" + s.name)
            else:
                idx = varmap.setdefault(s.name, len(varmap))
                out.append(f"?{idx}")
        elif ts is Const:
            out.append("!" + s.name)
        elif ts is Unary:
            out.append("U")
            stack.append(s.arg)
        else:
            out.append("B")
            stack.append(s.right)
            stack.append(s.left)
    return tuple(out)


def sym_key(e: Equation) -> tuple:
    """Dedup key: equal for equations that differ only by variable renaming
    or by swapping the two sides."""
    m1: dict = {}
    k1 = flatterm(e.lhs, m1) + ("=",) + flatterm(e.rhs, m1)
    m2: dict = {}
    k2 = flatterm(e.rhs, m2) + ("=",) + flatterm(e.lhs, m2)
    best = k1 if k1 <= k2 else k2
    return (e.positive,) + best


def is_variant(e1: Equation, e2: Equation) -> bool:
    """Equal up to variable renaming and equation symmetry."""
    return sym_key(e1) == sym_key(e2)
