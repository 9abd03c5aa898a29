"""Concrete data terms, the bottom value, and their text syntax.

Text syntax is constructor-term notation, e.g.
``Cons (Rule (F A B (V X)) (V X)) Nil``; bottom prints as ``⊥`` and
``_|_`` is accepted on input.
"""

import re
from dataclasses import dataclass

from .errors import ValueSyntaxError


class _Bottom:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "⊥"

    __str__ = __repr__

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()


@dataclass(frozen=True, eq=False)
class Value:
    con: str
    args: tuple = ()

    # equality and hashing walk the term without recursion, so very deep
    # values (long lists, big naturals) are safe to compare and put in sets
    def __eq__(self, other):
        if not isinstance(other, Value):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if not isinstance(a, Value) or not isinstance(b, Value):
                if a != b:
                    return False
                continue
            if a.con != b.con or len(a.args) != len(b.args):
                return False
            stack.extend(zip(a.args, b.args))
        return True

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is not None:
            return h
        # post-order so children's hashes are cached before the parent's
        stack = [(self, False)]
        while stack:
            x, ready = stack.pop()
            if not isinstance(x, Value) or "_hash" in x.__dict__:
                continue
            if ready:
                object.__setattr__(x, "_hash", hash((x.con, tuple(hash(a) for a in x.args))))
            else:
                stack.append((x, True))
                stack.extend((a, False) for a in x.args)
        return self.__dict__["_hash"]

    def __str__(self):
        return show(self)

    def __repr__(self):
        return f"Value({show(self)!r})"


@dataclass(frozen=True)
class FunRefValue:
    """A top-level function passed as an argument (concrete evaluation only)."""

    name: str


def is_total(v):
    """True iff ``v`` contains no bottom anywhere."""
    stack = [v]
    while stack:
        x = stack.pop()
        if x is BOTTOM:
            return False
        stack.extend(x.args)
    return True


def show(v):
    out = []
    # (value, needs_parens) frames, strings are emitted verbatim
    stack = [(v, False)]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        x, paren = item
        if x is BOTTOM:
            out.append("⊥")
            continue
        if isinstance(x, FunRefValue):
            out.append(x.name)
            continue
        if not x.args:
            out.append(x.con)
            continue
        frames = []
        if paren:
            frames.append("(")
        frames.append(x.con)
        for a in x.args:
            frames.append(" ")
            frames.append((a, True))
        if paren:
            frames.append(")")
        stack.extend(reversed(frames))
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\()|(\))|(⊥|_\|_)|([A-Z][A-Za-z0-9_']*)|(\S))")


def parse_value(text):
    """Parse constructor-term text into a :class:`Value` tree."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(5):
            raise ValueSyntaxError(f"unexpected character {m.group(5)!r} at offset {m.start(5)}")
        if m.group(1):
            tokens.append("(")
        elif m.group(2):
            tokens.append(")")
        elif m.group(3):
            tokens.append(BOTTOM)
        else:
            tokens.append(m.group(4))
        pos = m.end()
    if not tokens:
        raise ValueSyntaxError("empty value")

    i = 0

    def atom():
        nonlocal i
        if i >= len(tokens):
            raise ValueSyntaxError("unexpected end of value")
        t = tokens[i]
        if t == "(":
            i += 1
            v = term()
            if i >= len(tokens) or tokens[i] != ")":
                raise ValueSyntaxError("missing ')'")
            i += 1
            return v
        if t == ")":
            raise ValueSyntaxError("unexpected ')'")
        i += 1
        return t if t is BOTTOM else Value(t)

    def term():
        nonlocal i
        head = atom()
        if head is BOTTOM or head.args:
            return head
        args = []
        while i < len(tokens) and tokens[i] != ")":
            args.append(atom())
        return Value(head.con, tuple(args)) if args else head

    v = term()
    if i != len(tokens):
        raise ValueSyntaxError(f"trailing input after value: {tokens[i]!r}")
    return v
