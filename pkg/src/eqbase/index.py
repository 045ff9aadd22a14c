"""Imperfect discrimination tree for fast generalization retrieval.

Patterns are stored along their preorder symbol string with variables
collapsed to a wildcard; retrieval walks a concrete term and yields the
stored entries whose pattern could match.  Callers confirm candidates
with a real one-way match (nonlinear patterns over-retrieve here).
"""

from __future__ import annotations

from typing import Iterator

from .terms import Binary, Const, Term, Unary, Var

_WILD = "*"


def _symbols(t: Term) -> list:
    out: list = []
    stack = [t]
    while stack:
        s = stack.pop()
        ts = type(s)
        if ts is Var:
            out.append(_WILD)
        elif ts is Const:
            out.append("!" + s.name)
        elif ts is Unary:
            out.append("U")
            stack.append(s.arg)
        else:
            out.append("B")
            stack.append(s.right)
            stack.append(s.left)
    return out


class DiscTree:
    __slots__ = ("root", "count")

    def __init__(self):
        self.root: dict = {}
        self.count = 0

    def insert(self, pattern: Term, value) -> None:
        node = self.root
        for sym in _symbols(pattern):
            node = node.setdefault(sym, {})
        node.setdefault(None, []).append(value)
        self.count += 1

    def retrieve(self, term: Term) -> list:
        """Values whose pattern generalizes term (over-approximate).

        Walks the term in preorder against the tree; a pattern wildcard
        skips one whole subterm.  The pending-subterm stack is a shared
        cons list so branching costs nothing."""
        root = self.root
        tt = type(term)
        if tt is Unary:
            first = root.get("U")
            start = None if first is None else (first, (term.arg, None))
        elif tt is Binary:
            first = root.get("B")
            start = None if first is None else (
                first, (term.left, (term.right, None))
            )
        elif tt is Const:
            first = root.get("!" + term.name)
            start = None if first is None else (first, None)
        else:
            start = None
        wild = root.get(_WILD)
        work = []
        if start is not None:
            work.append(start)
        if wild is not None:
            work.append((wild, None))
        out: list = []
        while work:
            node, pending = work.pop()
            if pending is None:
                hits = node.get(None)
                if hits:
                    out.extend(hits)
                continue
            t, rest = pending
            wild = node.get(_WILD)
            if wild is not None:
                work.append((wild, rest))
            tt = type(t)
            if tt is Var:
                continue  # only a wildcard matches a variable
            if tt is Unary:
                child = node.get("U")
                if child is not None:
                    work.append((child, (t.arg, rest)))
            elif tt is Binary:
                child = node.get("B")
                if child is not None:
                    work.append((child, (t.left, (t.right, rest))))
            else:
                child = node.get("!" + t.name)
                if child is not None:
                    work.append((child, rest))
        return out
