"""Active learning of Mealy machines from a membership and an equivalence
oracle (observation-table flavour, counterexamples handled by suffix
analysis).

The table keeps a row for every state representative in ``S`` and every
one-input extension of one; columns are suffix words ``E`` (initialised to
all single inputs, so hypothesis outputs come straight from the table).  A
closed table yields a hypothesis whose states are the distinct rows of
``S``.  Counterexamples contribute a suffix to ``E`` chosen so that the
next fill is guaranteed to split at least one row, which bounds the number
of equivalence queries by the size of the minimal target machine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .machines import MealyMachine
from .oracles import MembershipOracle
from .symbols import ClosedAlphabet, Word


class LearnerError(RuntimeError):
    pass


class UnclosedTableError(LearnerError):
    pass


class BudgetExceededError(LearnerError):
    """The equivalence-query safety cap was hit before convergence.

    Expected when the target behaviour is not regular (or an oracle keeps
    producing counterexamples for another reason); the partial hypothesis
    size is reported for diagnosis.
    """

    def __init__(self, eq_count: int, states: int):
        self.eq_count = eq_count
        self.states = states
        super().__init__(
            f"no stable hypothesis after {eq_count} equivalence queries "
            f"(current hypothesis has {states} states); "
            "the behaviour may not be regular -- consider a learning purpose"
        )


@dataclass(frozen=True)
class Counterexample:
    """Equivalence-oracle verdict: a word the hypothesis gets wrong.

    ``suffix_hint``, when present, is a distinguishing suffix the oracle
    already knows, letting the learner skip its own counterexample analysis.
    """

    word: Word
    suffix_hint: Optional[Word] = None


EquivalenceOracle = Callable[[MealyMachine, tuple[Word, ...]], Optional[Counterexample]]


class ObservationTable:
    """Output-word observations indexed by (row word, suffix word).

    With ``suppress_absorbing`` (default), rows whose own last output is
    ``err`` or ``oop`` are filled in place from the absorption law instead
    of being queried; sound because both symbols are absorbing in every
    oracle this package builds.
    """

    def __init__(self, alphabet: ClosedAlphabet, suppress_absorbing: bool = True):
        self.alphabet = alphabet
        self.suppress_absorbing = suppress_absorbing
        self.prefixes: list[Word] = [()]
        self.suffixes: list[Word] = [(i,) for i in range(alphabet.n_inputs)]
        self._cells: dict[Word, list[Optional[tuple[int, ...]]]] = {}

    # rows ---------------------------------------------------------------

    def row(self, word: Word) -> tuple[tuple[int, ...], ...]:
        cells = self._cells[word]
        assert all(c is not None for c in cells)
        return tuple(cells)  # type: ignore[return-value]

    def _terminal(self, word: Word) -> Optional[int]:
        """Last output of `word` itself (None for the empty word)."""
        if not word:
            return None
        return self._cells[word[:-1]][word[-1]][-1]

    def _fill_row(self, word: Word, oracle: MembershipOracle) -> None:
        cells = self._cells.setdefault(word, [])
        if len(cells) < len(self.suffixes):
            cells.extend([None] * (len(self.suffixes) - len(cells)))
        absorbing = (self.alphabet.err, self.alphabet.oop)
        term = self._terminal(word)
        for j, suffix in enumerate(self.suffixes):
            if cells[j] is not None:
                continue
            if self.suppress_absorbing and term in absorbing:
                cells[j] = (term,) * len(suffix)
            else:
                cells[j] = oracle.query(word + suffix)[len(word):]

    def fill(self, oracle: MembershipOracle) -> None:
        """Populate every missing cell; previously filled cells are untouched."""
        for w in self.prefixes:
            self._fill_row(w, oracle)
        for w in self.prefixes:
            for i in range(self.alphabet.n_inputs):
                self._fill_row(w + (i,), oracle)

    def check_closed(self) -> Optional[Word]:
        """First extension (row order, then input order) whose row matches
        no representative's row, or None when closed."""
        rows = {self.row(w) for w in self.prefixes}
        for w in self.prefixes:
            for i in range(self.alphabet.n_inputs):
                if self.row(w + (i,)) not in rows:
                    return w + (i,)
        return None

    def add_prefix(self, word: Word) -> None:
        self.prefixes.append(word)

    def add_suffix(self, suffix: Word) -> None:
        if suffix in self.suffixes:
            raise LearnerError(f"suffix {suffix!r} already in the table")
        self.suffixes.append(suffix)

    def build_machine(self) -> tuple[MealyMachine, tuple[Word, ...]]:
        """Hypothesis from a closed table, plus one access word per state.

        States are the distinct rows of the representatives (which are
        pairwise distinct by construction, so states and representatives
        are in bijection, in discovery order).
        """
        classes: dict[tuple, int] = {}
        for w in self.prefixes:
            sig = self.row(w)
            if sig in classes:
                raise LearnerError("duplicate representative rows; table corrupt")
            classes[sig] = len(classes)
        n = len(self.prefixes)
        k = self.alphabet.n_inputs
        delta = np.zeros((n, k), dtype=np.int32)
        out = np.zeros((n, k), dtype=np.int32)
        for q, w in enumerate(self.prefixes):
            for i in range(k):
                sig = self.row(w + (i,))
                if sig not in classes:
                    raise UnclosedTableError(
                        f"row {w + (i,)!r} matches no representative"
                    )
                delta[q, i] = classes[sig]
                out[q, i] = self._cells[w][i][-1]
        machine = MealyMachine(self.alphabet, 0, delta, out)
        return machine, tuple(self.prefixes)


def analyze_counterexample(
    hypothesis: MealyMachine,
    access_words: tuple[Word, ...],
    cex: Word,
    oracle: MembershipOracle,
) -> Word:
    """Distinguishing suffix extracted from a counterexample.

    Walks the split points of `cex` from the back: at split k the first k
    inputs are answered by the hypothesis and the rest by the oracle, the
    hypothesis state reached after k inputs being replaced by its table
    representative.  The earliest pair of neighbouring splits that disagree
    pins a suffix on which the representative and its claimed successor
    behave differently, so adding it to the table splits a row.  The
    backwards scan returns the shortest such suffix.
    """
    n = len(cex)
    if n == 1:
        return cex

    states = [hypothesis.initial]
    for i in cex:
        states.append(int(hypothesis.delta[states[-1], i]))

    def oracle_tail(k: int) -> tuple[int, ...]:
        word = access_words[states[k]] + cex[k:]
        return oracle.query(word)[len(access_words[states[k]]):]

    tail_next = oracle_tail(n - 1)
    for k in range(n - 2, -1, -1):
        tail_k = oracle_tail(k)
        h_out = int(hypothesis.out[states[k], cex[k]])
        if tail_k != (h_out,) + tail_next:
            return cex[k + 1:]
        tail_next = tail_k
    # split 0 uses the empty representative, so its tail is the true output
    # word and some divergence must exist; reaching here means the word was
    # not a counterexample at all
    raise LearnerError("counterexample analysis found no divergence")


@dataclass
class LstarStats:
    """Per-run counters; asked/executed are split between the learner's own
    table queries and those issued inside equivalence checks."""

    eq: int = 0
    mq_asked_learner: int = 0
    mq_asked_eq: int = 0
    mq_asked_per_eq: list[int] = field(default_factory=list)
    mq_executed_per_eq: list[int] = field(default_factory=list)
    hyp_states_per_eq: list[int] = field(default_factory=list)
    cex_lengths: list[int] = field(default_factory=list)

    @property
    def mq_asked(self) -> int:
        return self.mq_asked_learner + self.mq_asked_eq

    @property
    def max_cex_len(self) -> int:
        return max(self.cex_lengths, default=0)

    def within_query_budget(self, n_states: int, n_inputs: int) -> bool:
        """Learner-side query budget in terms of the learned machine size
        and the longest counterexample (floored at 1: the bound is stated
        for runs that see at least one counterexample)."""
        m = max(self.max_cex_len, 1)
        return self.mq_asked_learner <= n_inputs**2 * n_states + n_inputs * n_states**2 * m


@dataclass
class LstarResult:
    machine: MealyMachine
    access_words: tuple[Word, ...]
    stats: LstarStats


def lstar(
    moracle: MembershipOracle,
    eoracle: EquivalenceOracle,
    alphabet: ClosedAlphabet,
    max_eq: int = 100,
    suppress_absorbing: bool = True,
) -> LstarResult:
    """Learn the Mealy machine behind `moracle`.

    Returns the first hypothesis `eoracle` accepts.  Every counterexample
    grows the hypothesis by at least one state; if `max_eq` equivalence
    queries come and go without acceptance, BudgetExceededError is raised
    (safety net for non-regular behaviour).
    """
    table = ObservationTable(alphabet, suppress_absorbing=suppress_absorbing)
    stats = LstarStats()
    asked_at_start = moracle.asked
    eq_asked_base = asked_at_start

    while True:
        table.fill(moracle)
        while (unclosed := table.check_closed()) is not None:
            table.add_prefix(unclosed)
            table.fill(moracle)
        hypothesis, access = table.build_machine()

        stats.mq_asked_learner = moracle.asked - eq_asked_base
        asked_before, executed_before = moracle.asked, moracle.executed
        verdict = eoracle(hypothesis, access)
        stats.hyp_states_per_eq.append(hypothesis.n_states)
        stats.mq_asked_per_eq.append(moracle.asked - asked_before)
        stats.mq_executed_per_eq.append(moracle.executed - executed_before)
        stats.mq_asked_eq += moracle.asked - asked_before
        eq_asked_base += moracle.asked - asked_before
        stats.eq += 1

        if verdict is None:
            stats.mq_asked_learner = moracle.asked - eq_asked_base
            return LstarResult(hypothesis, access, stats)
        if stats.eq >= max_eq:
            raise BudgetExceededError(stats.eq, hypothesis.n_states)

        cex = verdict.word
        stats.cex_lengths.append(len(cex))
        hint = verdict.suffix_hint
        if hint is not None and hint not in table.suffixes:
            table.add_suffix(hint)
            table.fill(moracle)
            if table.check_closed() is not None:
                continue
            # hint did not split any row (it was relative to other access
            # words); fall back to counterexample analysis
        suffix = analyze_counterexample(hypothesis, access, cex, moracle)
        if suffix in table.suffixes:
            raise LearnerError("no progress: distinguishing suffix already in table")
        table.add_suffix(suffix)
        table.fill(moracle)
        if table.check_closed() is None:
            raise LearnerError("counterexample produced no new state")
