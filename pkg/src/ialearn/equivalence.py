"""Equivalence oracles built from membership queries.

The distinguisher-bound oracle checks a hypothesis transition-by-
transition: for every state ``q`` (reached by its shortest access word
``R(q)``) and input ``i``, it first compares the output the component
produces on ``R(q)·i`` with the hypothesis, then probes whether ``R(q)·i``
and ``R(δ(q,i))`` can be told apart by any suffix of length at most the
bound -- if they can, the hypothesis merged two distinct component states
and whichever assembled word the hypothesis gets wrong is returned.  When
every pair of target states is distinguishable within the bound, acceptance
implies exact trace equivalence of hypothesis and component.

Suffix probing always queries full-length suffixes and reads shorter
comparisons out of their prefixes; together with access words that form a
breadth-first tree, the distinct executed words per call stay within
``|Q| * n_inputs^(bound+1)``, which is the whole point of the bound (the
state-bound baseline below needs ``n_inputs^(states + bound - 1)`` words).

Two cheap skips never change a verdict on machines that follow the closure
discipline: quiescent ``wait`` self-loops need no suffix probe (they do not
move the component), and neither do transitions that already output ``err``
or ``oop`` (both absorbing).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Hashable, Optional

from . import _kernels
from .machines import MachineError, MealyMachine
from .learner import Counterexample
from .oracles import MembershipOracle
from .symbols import Word


class EquivalenceError(RuntimeError):
    pass


class InfeasibleEnumerationError(EquivalenceError):
    """The state-bound check would need more words than the budget allows."""

    def __init__(self, word_count: int, max_length: int, budget: int):
        self.word_count = word_count
        self.max_length = max_length
        self.budget = budget
        super().__init__(
            f"state-bound equivalence needs {word_count} membership queries "
            f"(words up to length {max_length}); budget is {budget}"
        )


@dataclass(frozen=True)
class Bounds:
    """Distinguisher and/or state bound for oracle construction.

    A state bound of k implies a distinguisher bound of k - 1, so either
    field may be omitted as long as one is present.
    """

    b_dist: Optional[int] = None
    b_state: Optional[int] = None

    def __post_init__(self):
        if self.b_dist is None and self.b_state is None:
            raise ValueError("need a distinguisher bound or a state bound")
        for v in (self.b_dist, self.b_state):
            if v is not None and v < 0:
                raise ValueError("bounds must be non-negative")

    @property
    def effective_b_dist(self) -> int:
        if self.b_dist is not None:
            return self.b_dist
        return max(self.b_state - 1, 0)


def shortest_access_words(m: MealyMachine) -> tuple[list[Word], list[int]]:
    """Shortest access word per state (ties broken lexicographically) and
    the states in breadth-first discovery order.

    Each non-initial discovered state's word extends its parent's by one
    input, so the access words form a tree.  Unreachable states get no
    word (None) and are skipped by the oracles; they cannot affect traces.
    """
    words: list[Optional[Word]] = [None] * m.n_states
    words[m.initial] = ()
    order = [m.initial]
    k = 0
    while k < len(order):
        q = order[k]
        k += 1
        for i in range(m.alphabet.n_inputs):
            t = int(m.delta[q, i])
            if words[t] is None:
                words[t] = words[q] + (i,)
                order.append(t)
    return words, order  # type: ignore[return-value]


def _suffix_windows(b_dist: int, n_inputs: int):
    """(short suffix, padded full-length suffix) pairs in check order:
    increasing length, then lexicographic."""
    for k in range(1, b_dist + 1):
        for p in product(range(n_inputs), repeat=k):
            yield p, p + (0,) * (b_dist - k)


def check(w: Word, w2: Word, b_dist: int, moracle: MembershipOracle) -> Optional[Word]:
    """First suffix (length <= b_dist; shortest, then lexicographic least)
    on which the component behaves differently after `w` and after `w2`,
    or None if no such suffix exists within the bound."""
    w, w2 = tuple(w), tuple(w2)
    for p, padded in _suffix_windows(b_dist, moracle.alphabet.n_inputs):
        a = moracle.query(w + padded)
        b = moracle.query(w2 + padded)
        k = len(p)
        if a[len(w):len(w) + k] != b[len(w2):len(w2) + k]:
            return p
    return None


def dist_equivalence(
    h: MealyMachine,
    bounds: Bounds,
    moracle: MembershipOracle,
    access_words: Optional[tuple[Word, ...]] = None,
    skip_optimizations: bool = True,
) -> Optional[Counterexample]:
    """Distinguisher-bound equivalence check of `h` against the component
    behind `moracle`.

    Returns None (accept) or a counterexample that provably disagrees:
    every returned word is replayed against both sides first.  Uses the
    caller's access words when supplied (they must reach each state);
    recomputes shortest ones otherwise, so the oracle also works standalone
    (the executed-query bound is guaranteed for recomputed words).
    `skip_optimizations=False` probes even quiescent-wait and error
    transitions, for differential testing of the skips.
    """
    alph = h.alphabet
    b = bounds.effective_b_dist
    if access_words is not None:
        if len(access_words) != h.n_states:
            raise EquivalenceError("need one access word per hypothesis state")
        words: list[Optional[Word]] = list(access_words)
        order = list(range(h.n_states))
    else:
        words, order = shortest_access_words(h)

    # Warm the cache with the initial state's probe words.  Every
    # comparison-side word R(q')·s is either one of some earlier-checked
    # transition's probe words (access words form a tree) or, when q' is the
    # initial state, a prefix of one of these; warming first keeps the
    # distinct executed words of a whole call within |Q| * n_inputs^(b+1).
    root = words[h.initial]
    if root is not None:
        for full in product(range(alph.n_inputs), repeat=b + 1):
            moracle.query(root + full)

    skip_outputs = (alph.err, alph.oop)
    for q in order:
        w_q = words[q]
        if w_q is None:
            continue
        for i in range(alph.n_inputs):
            w = w_q + (i,)
            o_h = int(h.out[q, i])
            skip_probe = b == 0 or (
                skip_optimizations
                and (o_h in skip_outputs or (i == alph.wait and o_h == alph.quiet))
            )
            if skip_probe:
                if moracle.query(w)[-1] != o_h:
                    return Counterexample(w, suffix_hint=(i,))
                continue

            q2 = int(h.delta[q, i])
            w2 = words[q2]
            if w2 is None:
                raise EquivalenceError("hypothesis transition leads to an unreachable state")
            output_checked = False
            for p, padded in _suffix_windows(b, alph.n_inputs):
                a = moracle.query(w + padded)
                if not output_checked:
                    output_checked = True
                    if a[len(w) - 1] != o_h:
                        return Counterexample(w, suffix_hint=(i,))
                bb = moracle.query(w2 + padded)
                k = len(p)
                if a[len(w):len(w) + k] != bb[len(w2):len(w2) + k]:
                    cex1 = w + p
                    if h.run(cex1) != a[: len(cex1)]:
                        return Counterexample(cex1, suffix_hint=p)
                    cex2 = w2 + p
                    if h.run(cex2) != bb[: len(cex2)]:
                        return Counterexample(cex2, suffix_hint=p)
                    raise EquivalenceError(
                        "suffix separated two words yet the hypothesis agrees on both"
                    )
    return None


def state_bound_equivalence(
    h: MealyMachine,
    b_state: int,
    moracle: MembershipOracle,
    word_budget: int = 2_000_000,
) -> Optional[Counterexample]:
    """Exhaustive baseline: compare `h` with the component on every word of
    length up to ``|h| + b_state - 1``.

    Sound and complete under the state bound, but the word count is
    exponential in it; when it exceeds `word_budget` the check refuses to
    run and reports the count via InfeasibleEnumerationError instead.
    """
    count, max_length = state_bound_word_count(h.n_states, b_state, h.alphabet.n_inputs)
    if count > word_budget:
        raise InfeasibleEnumerationError(count, max_length, word_budget)
    for length in range(1, max_length + 1):
        for word in product(range(h.alphabet.n_inputs), repeat=length):
            if moracle.query(word) != h.run(word):
                return Counterexample(word)
    return None


def state_bound_word_count(k_states: int, b_state: int, n_inputs: int) -> tuple[int, int]:
    """(number of words, maximum word length) for the exhaustive baseline."""
    max_length = k_states + b_state - 1
    count = sum(n_inputs**length for length in range(1, max_length + 1))
    return count, max_length


def perfect_equivalence(h: MealyMachine, target: MealyMachine) -> Optional[Counterexample]:
    """White-box oracle for tests: product search against a known target.

    Returns the minimal (and lexicographically least) counterexample, or
    None when trace-equivalent.
    """
    if h.alphabet != target.alphabet:
        raise MachineError("perfect_equivalence needs machines over the same alphabet")
    cex = _kernels.product_counterexample(
        h.delta, h.out, h.initial, target.delta, target.out, target.initial
    )
    if cex is None:
        return None
    return Counterexample(tuple(int(i) for i in cex))


def process_equivalence(
    h: MealyMachine,
    process,
    max_configs: int = 1_000_000,
) -> Optional[Counterexample]:
    """Product search of a hypothesis against a deterministic closed-step
    process (which need not be finite-state).

    Finds the minimal, lexicographically least disagreeing word.  For an
    infinite process the search terminates whenever `h` is actually wrong
    (a disagreement exists at finite depth); `max_configs` guards the
    remaining case.
    """
    start = (h.initial, process.initial_config())
    parents: dict[tuple[int, Hashable], tuple] = {start: (None, -1)}
    queue = [start]
    k = 0
    n_inputs = h.alphabet.n_inputs
    while k < len(queue):
        pair = queue[k]
        k += 1
        state, config = pair
        for i in range(n_inputs):
            o_h, t_h = h.step(state, i)
            o_p, t_p = process.step(config, i)
            if o_h != o_p:
                word = [i]
                node = pair
                while parents[node][0] is not None:
                    node, j = parents[node]
                    word.append(j)
                word.reverse()
                return Counterexample(tuple(word))
            nxt = (t_h, t_p)
            if nxt not in parents:
                if len(parents) >= max_configs:
                    raise EquivalenceError(
                        f"process equivalence search exceeded {max_configs} configurations"
                    )
                parents[nxt] = (pair, i)
                queue.append(nxt)
    return None
