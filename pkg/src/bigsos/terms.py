"""Signatures, first-order terms, substitution, and universe enumeration.

Terms are immutable and structurally hashable.  Operators may carry natural
number parameters (a parameterized family like ``otimes[3]`` is one signature
entry with param_count 1), kept separate from the argument list.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping, Union

from .errors import ArityError, ParseError, UnboundVariableError, UnknownOperatorError


@dataclass(frozen=True)
class Operator:
    name: str
    arity: int
    param_count: int = 0


class Signature:
    """Finite set of operators with unique names. Immutable after construction."""

    def __init__(self, operators: Iterable):
        ops = {}
        for entry in operators:
            op = entry if isinstance(entry, Operator) else Operator(*entry)
            if op.name in ops:
                raise ValueError(f"duplicate operator {op.name!r}")
            if op.arity < 0 or op.param_count < 0:
                raise ValueError(f"negative arity or param count for {op.name!r}")
            ops[op.name] = op
        self._ops = ops

    def __contains__(self, name: str) -> bool:
        return name in self._ops

    def __getitem__(self, name: str) -> Operator:
        try:
            return self._ops[name]
        except KeyError:
            raise KeyError(f"unknown operator {name!r}") from None

    def operators(self) -> tuple[Operator, ...]:
        return tuple(sorted(self._ops.values(), key=lambda o: o.name))

    def constants(self) -> tuple[str, ...]:
        """Names of parameterless nullary operators, sorted."""
        return tuple(o.name for o in self.operators() if o.arity == 0 and o.param_count == 0)

    def __eq__(self, other):
        return isinstance(other, Signature) and self._ops == other._ops

    def __repr__(self):
        body = ", ".join(f"{o.name}/{o.arity}" + (f"[{o.param_count}]" if o.param_count else "")
                         for o in self.operators())
        return f"Signature({body})"


@dataclass(frozen=True)
class Var:
    name: str

    def sort_key(self):
        return ("var", self.name)

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True)
class App:
    op: str
    params: tuple[int, ...] = ()
    args: tuple["Term", ...] = ()

    def sort_key(self):
        return ("app", self.op, self.params, tuple(a.sort_key() for a in self.args))

    def __repr__(self):
        return f"App({print_term(self)!r})"


Term = Union[Var, App]


def term_size(t: Term) -> int:
    """Node count; a variable counts as one node."""
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def term_key(t: Term):
    """Total order key: compare by size first, then structurally."""
    return (term_size(t), t.sort_key())


def variables(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    out: set[str] = set()
    for a in t.args:
        out |= variables(a)
    return frozenset(out)


def is_closed(t: Term) -> bool:
    return not variables(t)


def subterms(t: Term) -> Iterator[Term]:
    """All subterms including t itself, parents first."""
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


def check_term(t: Term, sig: Signature) -> None:
    """Raise if an operator is unknown or used with the wrong arity/params."""
    for s in subterms(t):
        if isinstance(s, Var):
            continue
        if s.op not in sig:
            raise UnknownOperatorError(f"unknown operator {s.op!r}")
        op = sig[s.op]
        if len(s.args) != op.arity or len(s.params) != op.param_count:
            raise ArityError(
                f"operator {s.op!r} expects arity {op.arity} and "
                f"{op.param_count} parameter(s), got {len(s.args)}/{len(s.params)}")


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    out = t.op
    if t.params:
        out += "[" + ",".join(str(p) for p in t.params) + "]"
    if t.args:
        out += "(" + ", ".join(print_term(a) for a in t.args) + ")"
    return out


def substitute(t: Term, binding: Mapping[str, Term]) -> Term:
    """Replace every variable of t via binding; the binding must cover them all."""
    if isinstance(t, Var):
        try:
            return binding[t.name]
        except KeyError:
            raise UnboundVariableError(f"no binding for variable {t.name!r}") from None
    if not t.args:
        return t
    return App(t.op, t.params, tuple(substitute(a, binding) for a in t.args))


# --- tokenizer, shared with the rule language ---------------------------------

_SYMBOLS = ("-/->", "|-", "->", "(", ")", "[", "]", ",", ":", "/", "+", "*", "-")


@dataclass(frozen=True)
class Token:
    kind: str  # ident | nat | sym | eof
    value: str
    line: int
    col: int


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    # primes allowed so premise targets can be written x', x''
    return ch.isalnum() or ch in "_'"


def tokenize(text: str, line: int = 1) -> list[Token]:
    toks: list[Token] = []
    i, col = 0, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "#":
            break
        if ch in " \t\r\n":
            i += 1
            col += 1
            continue
        if _is_ident_start(ch):
            j = i + 1
            while j < n and _is_ident_char(text[j]):
                j += 1
            toks.append(Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("nat", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token("sym", sym, line, col))
                col += len(sym)
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


class TokenCursor:
    """Minimal LL(1) helper over a token list."""

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at_sym(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "sym" and tok.value == value

    def eat_sym(self, value: str) -> bool:
        if self.at_sym(value):
            self.next()
            return True
        return False

    def expect_sym(self, value: str) -> Token:
        tok = self.peek()
        if tok.kind != "sym" or tok.value != value:
            raise ParseError(f"expected {value!r}, got {tok.value!r}" if tok.kind != "eof"
                             else f"expected {value!r}, got end of input", tok.line, tok.col)
        return self.next()

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            what = tok.value if tok.kind != "eof" else "end of input"
            raise ParseError(f"expected {kind}, got {what!r}", tok.line, tok.col)
        return self.next()


def _parse_nat_list(cur: TokenCursor) -> tuple[int, ...]:
    cur.expect_sym("[")
    vals = [int(cur.expect("nat").value)]
    while cur.eat_sym(","):
        vals.append(int(cur.expect("nat").value))
    cur.expect_sym("]")
    return tuple(vals)


def parse_term_tokens(cur: TokenCursor, sig: Signature) -> Term:
    tok = cur.expect("ident")
    params: tuple[int, ...] = ()
    if cur.at_sym("["):
        params = _parse_nat_list(cur)
    args: list[Term] = []
    has_args = False
    if cur.eat_sym("("):
        has_args = True
        args.append(parse_term_tokens(cur, sig))
        while cur.eat_sym(","):
            args.append(parse_term_tokens(cur, sig))
        cur.expect_sym(")")
    name = tok.value
    if name in sig:
        op = sig[name]
        if len(params) != op.param_count:
            raise ArityError(f"operator {name!r} takes {op.param_count} parameter(s), "
                             f"got {len(params)}", tok.line, tok.col)
        if len(args) != op.arity:
            raise ArityError(f"operator {name!r} has arity {op.arity}, got {len(args)} "
                             f"argument(s)", tok.line, tok.col)
        return App(name, params, tuple(args))
    if params or has_args:
        raise UnknownOperatorError(f"unknown operator {name!r}", tok.line, tok.col)
    return Var(name)


def parse_term(text: str, sig: Signature) -> Term:
    """Parse one term. Identifiers outside the signature become variables."""
    cur = TokenCursor(tokenize(text))
    t = parse_term_tokens(cur, sig)
    tok = cur.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.value!r}", tok.line, tok.col)
    return t


# --- universe enumeration ------------------------------------------------------


@dataclass(frozen=True)
class UniversePolicy:
    """Caps for finite universes. grow is honoured by the engine only."""

    max_count: int = 500
    max_size: int = 12
    grow: bool = True


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All ways to write total as an ordered sum of `parts` positive integers."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


_LAYER_LIMIT = 1_000_000


def enumerate_universe(sig: Signature, seeds: Iterable[Term],
                       policy: UniversePolicy = UniversePolicy(),
                       param_values: Iterable[int] | None = None) -> tuple[Term, ...]:
    """Deterministic closed-term universe: all seeds, then terms in
    size-then-lexicographic order until max_count, never past max_size.

    Parameterized operators are instantiated only at param_values (default:
    the parameter values occurring in the seeds).
    """
    seeds = list(seeds)
    for s in seeds:
        if not is_closed(s):
            raise ValueError(f"seed {print_term(s)} is not closed")
        check_term(s, sig)
    if policy.max_count < 1 or policy.max_size < 1:
        raise ValueError("universe policy bounds must be positive")

    if param_values is None:
        pool: set[int] = set()
        for s in seeds:
            for sub in subterms(s):
                if isinstance(sub, App):
                    pool.update(sub.params)
    else:
        pool = set(param_values)
    pool_sorted = tuple(sorted(pool))

    result: set[Term] = set(seeds)
    layers: dict[int, list[Term]] = {}

    def layer(n: int) -> list[Term]:
        if n in layers:
            return layers[n]
        out: list[Term] = []
        for op in sig.operators():
            if op.param_count and not pool_sorted:
                continue
            param_tuples = list(product(pool_sorted, repeat=op.param_count))
            for params in param_tuples:
                for comp in _compositions(n - 1, op.arity):
                    for args in product(*(layer(k) for k in comp)):
                        out.append(App(op.name, params, args))
                        if len(out) > _LAYER_LIMIT:
                            raise ValueError("universe layer too large; tighten the policy")
        out.sort(key=term_key)
        layers[n] = out
        return out

    for size in range(1, policy.max_size + 1):
        if len(result) >= policy.max_count:
            break
        for t in layer(size):
            if len(result) >= policy.max_count:
                break
            result.add(t)
    return tuple(sorted(result, key=term_key))
