"""Membership oracles and the query cache.

Every oracle answers input words with output words of the same length.  The
cache is a trie over input symbols: it serves exact repeats, any prefix of a
recorded query, and any extension of a query that already ran into ``err``
or ``oop`` (those outputs are absorbing), all without touching the backend.
Because one output is pinned per trie edge, prefix consistency holds by
construction and a disagreeing observation is detected the moment it is
recorded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Protocol

from .symbols import ClosedAlphabet, Word, zip_trace


@dataclass(frozen=True)
class NonDeterminismReport:
    """Two observations with the same inputs but different outputs.

    ``trace_a``/``trace_b`` are the observations clipped to the shared input
    prefix (alternating input/output symbol names); they are identical
    except for the final output.  ``query_a``/``query_b`` name the full
    queries the observations came from.
    """

    prefix: tuple[str, ...]
    trace_a: tuple[str, ...]
    trace_b: tuple[str, ...]
    query_a: tuple[str, ...]
    query_b: tuple[str, ...]

    def render(self) -> str:
        return "\n".join(
            [
                "non-deterministic behaviour detected",
                f"  common input prefix: {' '.join(self.prefix)}",
                f"  observation A ({' '.join(self.query_a)}):",
                f"    {' '.join(self.trace_a)}",
                f"  observation B ({' '.join(self.query_b)}):",
                f"    {' '.join(self.trace_b)}",
            ]
        )


class NondeterminismError(RuntimeError):
    def __init__(self, report: NonDeterminismReport):
        self.report = report
        super().__init__(report.render())


class _Node:
    __slots__ = ("output", "children", "witness")

    def __init__(self, output: int, witness: Word):
        self.output = output
        self.children: dict[int, _Node] = {}
        self.witness = witness  # first query that walked through this node


class QueryCache:
    """Trie-backed map from input words to output words, with counters.

    ``asked`` counts every query put to the owning oracle; ``executed``
    counts the queries that actually reached the backend (``executed <=
    asked`` always).
    """

    def __init__(self, alphabet: ClosedAlphabet):
        self.alphabet = alphabet
        self.asked = 0
        self.executed = 0
        self._root: dict[int, _Node] = {}
        self._words: dict[Word, tuple[int, ...]] = {}

    def __len__(self) -> int:
        return len(self._words)

    def items(self):
        return self._words.items()

    def lookup(self, word: Word) -> Optional[tuple[int, ...]]:
        """Cached outputs for `word`, or None when the backend is needed."""
        absorbing = (self.alphabet.err, self.alphabet.oop)
        node_map = self._root
        outputs: list[int] = []
        for k, i in enumerate(word):
            node = node_map.get(i)
            if node is None:
                if outputs and outputs[-1] in absorbing:
                    return tuple(outputs) + (outputs[-1],) * (len(word) - k)
                return None
            outputs.append(node.output)
            node_map = node.children
        return tuple(outputs)

    def _divergence(self, word: Word, outputs: tuple[int, ...]):
        node_map = self._root
        cached: list[int] = []
        for k, i in enumerate(word):
            node = node_map.get(i)
            if node is None:
                return None
            if node.output != outputs[k]:
                return k, cached + [node.output], node.witness
            cached.append(node.output)
            node_map = node.children
        return None

    def _report(self, word, outputs, div) -> NonDeterminismReport:
        k, cached_outputs, witness = div
        names_in = self.alphabet.decode_inputs(word[: k + 1])
        return NonDeterminismReport(
            prefix=names_in,
            trace_a=zip_trace(names_in, self.alphabet.decode_outputs(cached_outputs)),
            trace_b=zip_trace(names_in, self.alphabet.decode_outputs(outputs[: k + 1])),
            query_a=self.alphabet.decode_inputs(witness),
            query_b=self.alphabet.decode_inputs(word),
        )

    def check(self, word: Word, outputs: tuple[int, ...]) -> Optional[NonDeterminismReport]:
        """Report if (word, outputs) contradicts a recorded observation."""
        div = self._divergence(word, outputs)
        return self._report(word, outputs, div) if div else None

    def insert(self, word: Word, outputs: tuple[int, ...]) -> None:
        """Record an observation; raises NondeterminismError on contradiction."""
        div = self._divergence(word, outputs)
        if div:
            raise NondeterminismError(self._report(word, outputs, div))
        node_map = self._root
        for k, i in enumerate(word):
            node = node_map.get(i)
            if node is None:
                node = _Node(outputs[k], word)
                node_map[i] = node
            node_map = node.children
        self._words[word] = outputs


class MembershipOracle(Protocol):
    alphabet: ClosedAlphabet

    @property
    def asked(self) -> int: ...

    @property
    def executed(self) -> int: ...

    def query(self, word: Word) -> tuple[int, ...]: ...


class CachingOracle:
    """Membership oracle that answers from a QueryCache, falling back to a
    backend function (one call per distinct uncached word)."""

    def __init__(self, alphabet: ClosedAlphabet, backend: Callable[[Word], tuple[int, ...]]):
        self.alphabet = alphabet
        self.cache = QueryCache(alphabet)
        self._backend = backend

    @property
    def asked(self) -> int:
        return self.cache.asked

    @property
    def executed(self) -> int:
        return self.cache.executed

    def query(self, word: Word) -> tuple[int, ...]:
        word = tuple(word)
        self.cache.asked += 1
        hit = self.cache.lookup(word)
        if hit is not None:
            return hit
        outputs = tuple(self._backend(word))
        if len(outputs) != len(word):
            raise RuntimeError("backend returned an output word of the wrong length")
        self.cache.executed += 1
        self.cache.insert(word, outputs)
        return outputs

    def query_names(self, names) -> tuple[str, ...]:
        return self.alphabet.decode_outputs(self.query(self.alphabet.encode_inputs(names)))


def machine_oracle(machine) -> CachingOracle:
    """Membership oracle backed by replaying words on a Mealy machine."""
    return CachingOracle(machine.alphabet, machine.run)
