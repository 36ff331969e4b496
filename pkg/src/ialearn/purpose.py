"""Learning purposes: regular restriction of non-regular behaviour.

A purpose is a complete deterministic automaton over the closed inputs with
in-purpose (accepting) and out-of-purpose states; out-of-purpose states are
absorbing.  Filtering a membership oracle through a purpose answers queries
normally until the first input that leaves the purpose; that position and
everything after it is answered with the reserved absorbing symbol ``oop``,
so the filtered behaviour is regular whenever the purpose is, even when the
component underneath counts unboundedly.

Purposes look only at inputs.  That is enough to cap pending requests (the
motivating use), and keeps filtering independent of the component's
answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Optional

from .modelspec import PurposeSpec, SpecError
from .oracles import MembershipOracle
from .symbols import WAIT, ClosedAlphabet, Word


@dataclass(frozen=True, eq=False)
class LearningPurpose:
    """Complete input automaton with absorbing out-of-purpose states."""

    alphabet: ClosedAlphabet
    n_states: int
    initial: int
    accepting: frozenset[int]
    delta: tuple[tuple[int, ...], ...]  # state -> input index -> state

    def __post_init__(self):
        if self.initial not in self.accepting:
            raise SpecError("purpose must start in-purpose")
        for q in range(self.n_states):
            if len(self.delta[q]) != self.alphabet.n_inputs:
                raise SpecError("purpose transition table is not total")
            if q not in self.accepting and any(t != q for t in self.delta[q]):
                raise SpecError("out-of-purpose states must be absorbing")

    def reject_position(self, word: Word) -> Optional[int]:
        """Index of the first input that drives the purpose out, or None."""
        q = self.initial
        for k, i in enumerate(word):
            q = self.delta[q][i]
            if q not in self.accepting:
                return k
        return None

    def step(self, state: int, i: int) -> int:
        return self.delta[state][i]

    def in_purpose(self, state: int) -> bool:
        return state in self.accepting


def bind_purpose(spec: PurposeSpec, alphabet: ClosedAlphabet) -> LearningPurpose:
    """Resolve a purpose spec against a model's closed alphabet.

    The spec must cover every user callin of the model; transitions on
    ``wait`` are taken literally.  Missing transitions from out-of-purpose
    states default to self-loops; in-purpose states must be fully specified.
    """
    user_inputs = {s.name for s in alphabet.user_inputs}
    declared = set(spec.inputs)
    if declared != user_inputs:
        raise SpecError(
            f"purpose inputs {sorted(declared)} do not match the model callins "
            f"{sorted(user_inputs)}"
        )
    index = {n: k for k, n in enumerate(spec.states)}
    accepting = frozenset(index[n] for n in spec.accepting)
    table: list[list[Optional[int]]] = [
        [None] * alphabet.n_inputs for _ in spec.states
    ]
    for src, sym, dst in spec.transitions:
        if src not in index or dst not in index:
            raise SpecError(f"purpose transition uses unknown state: {src!r} -> {dst!r}")
        if sym != WAIT and sym not in declared:
            raise SpecError(f"purpose transition on unknown input {sym!r}")
        i = alphabet.input_index(sym)
        if table[index[src]][i] is not None:
            raise SpecError(f"duplicate purpose transition from {src!r} on {sym!r}")
        table[index[src]][i] = index[dst]
    for q in range(len(spec.states)):
        for i in range(alphabet.n_inputs):
            if table[q][i] is None:
                if q in accepting:
                    raise SpecError(
                        f"purpose state {spec.states[q]!r} lacks a transition on "
                        f"{alphabet.inputs[i].name!r}"
                    )
                table[q][i] = q
    return LearningPurpose(
        alphabet,
        len(spec.states),
        index[spec.initial],
        accepting,
        tuple(tuple(row) for row in table),  # type: ignore[arg-type]
    )


class FilteredOracle:
    """Membership oracle restricted to a purpose.

    In-purpose prefixes are forwarded to the inner oracle; from the first
    out-of-purpose input onwards every output is ``oop``.
    """

    def __init__(self, inner: MembershipOracle, purpose: LearningPurpose):
        self.inner = inner
        self.purpose = purpose
        self.alphabet = inner.alphabet
        self._asked = 0

    @property
    def asked(self) -> int:
        return self._asked

    @property
    def executed(self) -> int:
        return self.inner.executed

    def query(self, word: Word) -> tuple[int, ...]:
        word = tuple(word)
        self._asked += 1
        cut = self.purpose.reject_position(word)
        if cut is None:
            return self.inner.query(word)
        head = self.inner.query(word[:cut])
        return head + (self.alphabet.oop,) * (len(word) - cut)


def purpose_filter(inner: MembershipOracle, purpose: LearningPurpose) -> FilteredOracle:
    return FilteredOracle(inner, purpose)


class PurposedProcess:
    """Deterministic closed-step process restricted to a purpose (for
    verification): out-of-purpose configurations answer ``oop`` forever."""

    _OUT = object()

    def __init__(self, process, purpose: LearningPurpose):
        self.alphabet = process.alphabet
        self._process = process
        self._purpose = purpose

    def initial_config(self) -> Hashable:
        return (self._process.initial_config(), self._purpose.initial)

    def step(self, config: Hashable, i: int) -> tuple[int, Hashable]:
        if config is PurposedProcess._OUT:
            return self.alphabet.oop, config
        inner_config, p = config
        p2 = self._purpose.step(p, i)
        if not self._purpose.in_purpose(p2):
            return self.alphabet.oop, PurposedProcess._OUT
        o, inner2 = self._process.step(inner_config, i)
        return o, (inner2, p2)
