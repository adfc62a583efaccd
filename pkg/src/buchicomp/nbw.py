"""Nondeterministic Büchi automata over infinite words, plus the exact
decision procedures (lasso membership, emptiness, intersection) that act as
the ground truth for every complementation construction in this package.

Transition functions may be partial: a missing ``(state, symbol)`` entry
means the empty successor set, and a run simply dies there.  All values are
immutable after construction and every operation is a pure function.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .graphs import strongly_connected_components

__all__ = [
    "InputError",
    "LassoWord",
    "NBW",
    "make_nbw",
    "lift_delta",
    "lift_delta_word",
    "member",
    "is_empty",
    "product",
    "is_deterministic_in_limit",
    "reachable_trim",
]


class InputError(ValueError):
    """An operation was handed a symbol or state it does not know."""


def _word_tuple(word: Iterable[str]) -> tuple[str, ...]:
    # A plain string is treated as a sequence of one-character symbols.
    return tuple(word)


@dataclass(frozen=True)
class LassoWord:
    """An ultimately periodic word: finite stem followed by a cycle repeated
    forever.  The cycle must be nonempty; the stem may be empty."""

    stem: tuple[str, ...]
    cycle: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "stem", _word_tuple(self.stem))
        object.__setattr__(self, "cycle", _word_tuple(self.cycle))
        if not self.cycle:
            raise InputError("lasso cycle must be nonempty")

    def letter(self, i: int) -> str:
        """Symbol at position ``i`` of the infinite word."""
        if i < len(self.stem):
            return self.stem[i]
        return self.cycle[(i - len(self.stem)) % len(self.cycle)]

    def prefix(self, n: int) -> tuple[str, ...]:
        return tuple(self.letter(i) for i in range(n))

    def symbols(self) -> frozenset[str]:
        return frozenset(self.stem) | frozenset(self.cycle)

    def canonical(self) -> "LassoWord":
        """Unique minimal representation of the same infinite word: the cycle
        is reduced to its primitive root and stem letters equal to the wrapped
        end of the cycle are absorbed into it."""
        cyc = list(self.cycle)
        n = len(cyc)
        for d in range(1, n + 1):
            if n % d == 0 and cyc == cyc[:d] * (n // d):
                cyc = cyc[:d]
                break
        stem = list(self.stem)
        while stem and stem[-1] == cyc[-1]:
            stem.pop()
            cyc = [cyc[-1]] + cyc[:-1]
        return LassoWord(tuple(stem), tuple(cyc))

    def __str__(self) -> str:
        sep = "" if all(len(s) == 1 for s in self.stem + self.cycle) else " "
        return "%s(%s)^w" % (sep.join(self.stem), sep.join(self.cycle))


@dataclass(frozen=True, eq=False, repr=False)
class NBW:
    """A nondeterministic Büchi automaton.

    ``alphabet`` and ``states`` are ordered (their order is the canonical
    order used by printers); ``delta`` maps ``(state, symbol)`` to the set of
    successors, with absent entries meaning no successor.
    """

    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    initial: frozenset[str]
    accepting: frozenset[str]
    delta: Mapping[tuple[str, str], frozenset[str]]
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        alphabet = tuple(self.alphabet)
        states = tuple(self.states)
        if not alphabet:
            raise InputError("alphabet must be nonempty")
        if len(set(alphabet)) != len(alphabet):
            raise InputError("duplicate symbols in alphabet")
        if len(set(states)) != len(states):
            raise InputError("duplicate state names")
        state_set = frozenset(states)
        sym_set = frozenset(alphabet)
        initial = frozenset(self.initial)
        accepting = frozenset(self.accepting)
        if not initial <= state_set:
            raise InputError("initial states %s not declared" % sorted(initial - state_set))
        if not accepting <= state_set:
            raise InputError("accepting states %s not declared" % sorted(accepting - state_set))
        delta: dict[tuple[str, str], frozenset[str]] = {}
        for (src, sym), targets in self.delta.items():
            targets = frozenset(targets)
            if src not in state_set:
                raise InputError("transition source %r not declared" % (src,))
            if sym not in sym_set:
                raise InputError("transition symbol %r not declared" % (sym,))
            if not targets <= state_set:
                raise InputError(
                    "transition targets %s not declared" % sorted(targets - state_set)
                )
            if targets:
                delta[(src, sym)] = targets
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "accepting", accepting)
        object.__setattr__(self, "delta", delta)
        key = (
            alphabet,
            states,
            initial,
            accepting,
            frozenset(delta.items()),
        )
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NBW):
            return NotImplemented
        return self._key == other._key  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def __repr__(self) -> str:
        return "NBW(%d states, %d symbols, %d initial, %d accepting, %d edges)" % (
            len(self.states),
            len(self.alphabet),
            len(self.initial),
            len(self.accepting),
            sum(len(v) for v in self.delta.values()),
        )

    def succ(self, state: str, symbol: str) -> frozenset[str]:
        return self.delta.get((state, symbol), frozenset())

    def transition_count(self) -> int:
        return sum(len(v) for v in self.delta.values())


def make_nbw(
    alphabet: Iterable[str],
    states: Iterable[str],
    initial: Iterable[str],
    accepting: Iterable[str],
    transitions: Iterable[tuple[str, str, str]] = (),
    meta: Mapping[str, object] | None = None,
) -> NBW:
    """Build an NBW from ``(source, symbol, target)`` triples."""
    delta: dict[tuple[str, str], set[str]] = {}
    for src, sym, dst in transitions:
        delta.setdefault((src, sym), set()).add(dst)
    return NBW(
        tuple(alphabet),
        tuple(states),
        frozenset(initial),
        frozenset(accepting),
        {k: frozenset(v) for k, v in delta.items()},
        meta=dict(meta or {}),
    )


# --- bitmask index tables -------------------------------------------------
#
# Internal successor tables keyed by integer state indices; subsets of states
# are integer bitmasks.  Cached per automaton (weakly, so throwaway automata
# from sweeps do not accumulate).


class _Tables:
    __slots__ = ("n", "state_ix", "sym_ix", "succ", "pred", "acc_mask", "init_mask")

    def __init__(self, a: NBW) -> None:
        self.n = len(a.states)
        self.state_ix = {q: i for i, q in enumerate(a.states)}
        self.sym_ix = {s: i for i, s in enumerate(a.alphabet)}
        self.succ = [[0] * self.n for _ in a.alphabet]
        self.pred = [[0] * self.n for _ in a.alphabet]
        for (src, sym), targets in a.delta.items():
            si = self.sym_ix[sym]
            qi = self.state_ix[src]
            mask = 0
            for t in targets:
                ti = self.state_ix[t]
                mask |= 1 << ti
                self.pred[si][ti] |= 1 << qi
            self.succ[si][qi] = mask
        self.acc_mask = _mask_of(a.accepting, self.state_ix)
        self.init_mask = _mask_of(a.initial, self.state_ix)


def _mask_of(states: Iterable[str], state_ix: Mapping[str, int]) -> int:
    m = 0
    for q in states:
        m |= 1 << state_ix[q]
    return m


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


_TABLES: "weakref.WeakKeyDictionary[NBW, _Tables]" = weakref.WeakKeyDictionary()


def _tables(a: NBW) -> _Tables:
    t = _TABLES.get(a)
    if t is None:
        t = _Tables(a)
        _TABLES[a] = t
    return t


def _lift_mask(t: _Tables, mask: int, sym_index: int) -> int:
    out = 0
    row = t.succ[sym_index]
    for q in _bits(mask):
        out |= row[q]
    return out


def _states_of_mask(a: NBW, mask: int) -> frozenset[str]:
    return frozenset(a.states[i] for i in _bits(mask))


# --- basic operations -----------------------------------------------------


def _check_symbol(a: NBW, symbol: str) -> None:
    if symbol not in a.alphabet:
        raise InputError("symbol %r not in alphabet" % (symbol,))


def _check_states(a: NBW, states: Iterable[str]) -> None:
    unknown = frozenset(states) - frozenset(a.states)
    if unknown:
        raise InputError("unknown states %s" % sorted(unknown))


def _check_word(a: NBW, w: LassoWord) -> None:
    bad = w.symbols() - frozenset(a.alphabet)
    if bad:
        raise InputError("word symbols %s not in alphabet" % sorted(bad))


def lift_delta(a: NBW, states: Iterable[str], symbol: str) -> frozenset[str]:
    """Successor set of a set of states: the union of per-state successors."""
    _check_symbol(a, symbol)
    states = frozenset(states)
    _check_states(a, states)
    out: set[str] = set()
    for q in states:
        out |= a.succ(q, symbol)
    return frozenset(out)


def lift_delta_word(a: NBW, states: Iterable[str], word: Sequence[str]) -> frozenset[str]:
    """Fold of :func:`lift_delta` over a finite word; identity on the empty word."""
    current = frozenset(states)
    _check_states(a, current)
    for symbol in _word_tuple(word):
        current = lift_delta(a, current, symbol)
    return current


def member(a: NBW, w: LassoWord) -> bool:
    """Exact membership of the ultimately periodic word ``w`` in ``L(a)``.

    Unrolls the stem, then looks for an accepting cycle in the finite graph
    of (state, position-in-cycle) pairs.  The verdict does not depend on the
    representation of the word.
    """
    _check_word(a, w)
    t = _tables(a)
    entry = t.init_mask
    for sym in w.stem:
        entry = _lift_mask(t, entry, t.sym_ix[sym])
    if entry == 0:
        return False
    cyc = [t.sym_ix[s] for s in w.cycle]
    period = len(cyc)

    def successors(node: int):
        q, i = divmod(node, period)
        ni = (i + 1) % period
        return [p * period + ni for p in _bits(t.succ[cyc[i]][q])]

    start = [q * period for q in _bits(entry)]
    seen = set(start)
    frontier = list(start)
    while frontier:
        node = frontier.pop()
        for child in successors(node):
            if child not in seen:
                seen.add(child)
                frontier.append(child)

    acc = t.acc_mask
    for comp in strongly_connected_components(seen, successors):
        if len(comp) == 1 and comp[0] not in successors(comp[0]):
            continue
        if any((acc >> (node // period)) & 1 for node in comp):
            return True
    return False


def is_empty(a: NBW) -> bool:
    """True iff ``L(a)`` is empty: no reachable cycle through an accepting state."""
    t = _tables(a)
    union_succ = [0] * t.n
    for q in range(t.n):
        for row in t.succ:
            union_succ[q] |= row[q]

    def successors(q: int):
        return list(_bits(union_succ[q]))

    seen = set(_bits(t.init_mask))
    frontier = list(seen)
    while frontier:
        q = frontier.pop()
        for child in successors(q):
            if child not in seen:
                seen.add(child)
                frontier.append(child)

    acc = t.acc_mask
    for comp in strongly_connected_components(seen, successors):
        if len(comp) == 1 and not (union_succ[comp[0]] >> comp[0]) & 1:
            continue
        if any((acc >> q) & 1 for q in comp):
            return False
    return True


def product(a: NBW, b: NBW) -> NBW:
    """Intersection automaton with the usual two-flag acceptance bookkeeping.

    State count is at most ``2 * |a| * |b|``; only the reachable part is built.
    """
    if frozenset(a.alphabet) != frozenset(b.alphabet):
        raise InputError("product requires identical alphabets")

    def name(p: str, q: str, flag: int) -> str:
        return "%s&%s&%d" % (p, q, flag)

    initial = [(p, q, 0) for p in sorted(a.initial) for q in sorted(b.initial)]
    seen: dict[tuple[str, str, int], None] = dict.fromkeys(initial)
    order: list[tuple[str, str, int]] = list(initial)
    transitions: list[tuple[str, str, str]] = []
    i = 0
    while i < len(order):
        p, q, flag = order[i]
        i += 1
        if flag == 0:
            nflag = 1 if p in a.accepting else 0
        else:
            nflag = 0 if q in b.accepting else 1
        for sym in a.alphabet:
            for pp in sorted(a.succ(p, sym)):
                for qq in sorted(b.succ(q, sym)):
                    dst = (pp, qq, nflag)
                    if dst not in seen:
                        seen[dst] = None
                        order.append(dst)
                    transitions.append((name(p, q, flag), sym, name(pp, qq, nflag)))
    states = [name(*s) for s in order]
    accepting = [name(p, q, f) for (p, q, f) in order if f == 1 and q in b.accepting]
    return make_nbw(
        a.alphabet,
        states,
        [name(*s) for s in initial],
        accepting,
        transitions,
    )


def is_deterministic_in_limit(a: NBW) -> bool:
    """True iff every state reachable from an accepting state (including the
    accepting states themselves) has at most one successor per symbol."""
    frontier = list(a.accepting)
    seen = set(frontier)
    while frontier:
        q = frontier.pop()
        for sym in a.alphabet:
            for nxt in a.succ(q, sym):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
    return all(len(a.succ(q, sym)) <= 1 for q in seen for sym in a.alphabet)


def reachable_trim(a: NBW) -> NBW:
    """Drop states unreachable from the initial set; the language is preserved."""
    seen = set(a.initial)
    frontier = list(a.initial)
    while frontier:
        q = frontier.pop()
        for sym in a.alphabet:
            for nxt in a.succ(q, sym):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
    states = tuple(q for q in a.states if q in seen)
    delta = {
        (q, s): targets
        for (q, s), targets in a.delta.items()
        if q in seen
    }
    return NBW(
        a.alphabet,
        states,
        a.initial,
        a.accepting & seen,
        delta,
        meta=dict(a.meta),
    )
