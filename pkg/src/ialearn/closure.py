"""Synchronous closure of an asynchronous interface.

Asynchronous traces (callins and callbacks freely interleaved) are folded
into strictly alternating input/output words over the closed alphabet:

* an enabled callin answers ``lambda`` and advances the component;
* ``wait`` delivers the pending callback if there is one (advancing along
  its edge), else answers ``quiet`` and stays put;
* a disabled callin answers ``err`` and falls into the absorbing error sink.

Erasing ``wait``/``quiet``/``lambda``/``err`` from any non-error closed
trace recovers a trace of the source interface.  The closure exists in two
forms: :func:`closure` builds the explicit Mealy machine from an interface
automaton, and :func:`closure_oracle` lifts a black-box membership oracle
over the asynchronous interface into one over the closed alphabet; the two
answer identically, which the test suite cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Protocol

import numpy as np

from .machines import InterfaceAutomaton, MealyMachine
from .oracles import CachingOracle
from .symbols import ClosedAlphabet, Word

ERR_SINK_NAME = "ERR"


@dataclass(frozen=True)
class ClosureResult:
    """Closure machine plus the bookkeeping to read its states.

    ``state_map`` sends each non-sink Mealy state to the interface state it
    mirrors and whether a callback is pending there; ``err_sink`` is the
    index of the dedicated absorbing error state.
    """

    machine: MealyMachine
    state_map: dict[int, tuple[str, bool]]
    err_sink: int


def closure(a: InterfaceAutomaton) -> ClosureResult:
    """Synchronous closure of an interface automaton as a Mealy machine.

    The machine has one state per (reachable) automaton state plus the error
    sink.  Requires every state to have at most one outgoing callback edge
    (the closure would otherwise have to pick which callback ``wait``
    delivers); violations raise OutputNondeterminismError naming the state.
    """
    alph = ClosedAlphabet.make(a.input_names(), a.output_names())
    n = a.n_states
    sink = n
    delta = np.empty((n + 1, alph.n_inputs), dtype=np.int32)
    out = np.empty((n + 1, alph.n_inputs), dtype=np.int32)
    for q in range(n):
        pend = a.pending_output(q)
        for i in range(alph.n_inputs):
            if i == alph.wait:
                if pend is None:
                    out[q, i] = alph.quiet
                    delta[q, i] = q
                else:
                    out[q, i] = pend[0]
                    delta[q, i] = pend[1]
            elif i in a.input_edges[q]:
                out[q, i] = alph.lam
                delta[q, i] = a.input_edges[q][i]
            else:
                out[q, i] = alph.err
                delta[q, i] = sink
    delta[sink, :] = sink
    out[sink, :] = alph.err

    machine = MealyMachine(
        alph, a.initial, delta, out, tuple(a.state_names) + (ERR_SINK_NAME,)
    )
    state_map = {q: (a.state_names[q], a.pending_output(q) is not None) for q in range(n)}
    return ClosureResult(machine, state_map, sink)


class AsyncOracle(Protocol):
    """Black-box membership access to an asynchronous interface.

    Queries are phrased on interface traces (sequences of callin/callback
    names): is this trace extensible by a given callin, and which callback,
    if any, is pending after it.  Determinism is assumed: at most one
    callback extends any feasible trace.
    """

    def enabled(self, trace: tuple[str, ...], callin: str) -> bool: ...

    def pending(self, trace: tuple[str, ...]) -> Optional[str]: ...


class AutomatonAsyncOracle:
    """AsyncOracle view of an interface automaton (replays the trace)."""

    def __init__(self, automaton: InterfaceAutomaton):
        self.automaton = automaton
        self._in_idx = {s.name: k for k, s in enumerate(automaton.inputs)}
        self._out_idx = {s.name: k for k, s in enumerate(automaton.outputs)}

    def _walk(self, trace: tuple[str, ...]) -> Optional[int]:
        q = self.automaton.initial
        for sym in trace:
            if sym in self._in_idx:
                nxt = self.automaton.input_edges[q].get(self._in_idx[sym])
            else:
                pend = self.automaton.pending_output(q)
                nxt = pend[1] if pend and pend[0] == self._out_idx[sym] else None
            if nxt is None:
                return None
            q = nxt
        return q

    def enabled(self, trace: tuple[str, ...], callin: str) -> bool:
        q = self._walk(trace)
        if q is None:
            raise ValueError(f"infeasible trace {trace!r}")
        return self._in_idx[callin] in self.automaton.input_edges[q]

    def pending(self, trace: tuple[str, ...]) -> Optional[str]:
        q = self._walk(trace)
        if q is None:
            raise ValueError(f"infeasible trace {trace!r}")
        pend = self.automaton.pending_output(q)
        return self.automaton.outputs[pend[0]].name if pend else None


def closure_oracle(inner: AsyncOracle, alphabet: ClosedAlphabet) -> CachingOracle:
    """Membership oracle over the closed alphabet, answered through `inner`.

    Each closed query gets exactly one reply: the closure rules decide, per
    position, between lambda/err (callins) and the pending callback/quiet
    (wait), consulting `inner` for enablement and pending callbacks.
    Answers are cached; repeats do not touch `inner`.
    """

    def backend(word: Word) -> tuple[int, ...]:
        trace: tuple[str, ...] = ()
        outputs: list[int] = []
        errored = False
        for i in word:
            if errored:
                outputs.append(alphabet.err)
            elif i == alphabet.wait:
                cb = inner.pending(trace)
                if cb is None:
                    outputs.append(alphabet.quiet)
                else:
                    outputs.append(alphabet.output_index(cb))
                    trace = trace + (cb,)
            else:
                name = alphabet.inputs[i].name
                if inner.enabled(trace, name):
                    outputs.append(alphabet.lam)
                    trace = trace + (name,)
                else:
                    outputs.append(alphabet.err)
                    errored = True
        return tuple(outputs)

    return CachingOracle(alphabet, backend)
