"""System-under-learning harness: a deterministic discrete-time simulator.

The simulator stands in for a live component.  Time is counted in ticks:
entering a state schedules its callback ``delay`` ticks ahead (``t_min <=
delay < t_max``), callins execute instantly, and each ``wait`` advances the
clock by ``t_max`` before looking for a deliverable callback.  Because
delays are bounded away from ``t_max``, a pending callback is always
observed by the next ``wait`` and never lost to a premature timeout; this
pins down the timing assumptions a real harness would have to enforce with
wall-clock timeouts.

Models may declare environment-controlled choice points (``nondet`` block);
the simulator resolves those with a seeded RNG, which makes repeated runs
reproducible while still exhibiting genuine cross-query non-determinism for
the detector to catch.
"""

from __future__ import annotations

import random
from typing import Hashable, Optional, Sequence

from .machines import MealyMachine
from .modelspec import KIND_AUTOMATON, KIND_COUNTER, ModelSpec, SpecError
from .oracles import CachingOracle, NonDeterminismReport
from .symbols import ClosedAlphabet, Word

_ERR_CONFIG = -1


class Simulator:
    """Executes membership queries against a ground-truth model.

    Supports ``interface-automaton`` models (with optional choice points)
    and the ``request-response`` counter model, whose pending-callback count
    is deliberately unbounded.
    """

    def __init__(self, spec: ModelSpec, seed: int = 0):
        if spec.kind not in (KIND_AUTOMATON, KIND_COUNTER):
            raise SpecError(f"the simulator cannot execute {spec.kind!r} models")
        self.spec = spec
        self.alphabet = ClosedAlphabet.make(spec.inputs, spec.outputs)
        self.timing = spec.timing
        self._rng = random.Random(seed)

        if spec.kind == KIND_AUTOMATON:
            index = {n: k for k, n in enumerate(spec.states)}
            a = self.alphabet
            self._initial: Hashable = index[spec.initial]
            self._input_edges: list[dict[int, int]] = [dict() for _ in spec.states]
            self._input_draws: list[dict[int, list[int]]] = [dict() for _ in spec.states]
            self._output_edge: list[Optional[tuple[int, int]]] = [None] * len(spec.states)
            self._output_draws: list[list[tuple[int, int]]] = [[] for _ in spec.states]
            for src, sym, dst in spec.transitions:
                q = index[src]
                if sym in {s.name for s in a.user_inputs}:
                    self._input_edges[q][a.input_index(sym)] = index[dst]
                else:
                    if self._output_edge[q] is not None:
                        raise SpecError(
                            f"state {src!r} has two output transitions; the component "
                            "could have two callbacks pending at once"
                        )
                    self._output_edge[q] = (a.output_index(sym), index[dst])
            for ic in spec.input_choices:
                q = index[ic.source]
                self._input_draws[q][a.input_index(ic.input)] = [
                    index[target] for _, target in ic.branches
                ]
            for oc in spec.output_choices:
                q = index[oc.source]
                if self._output_edge[q] is not None:
                    raise SpecError(f"state {oc.source!r} mixes output edge and choice")
                self._output_draws[q] = [
                    (a.output_index(o), index[target]) for _, o, target in oc.branches
                ]

        self.reset()

    # -- core stepping ---------------------------------------------------

    def reset(self) -> None:
        """Fresh component instance: initial state, empty schedule, clock 0."""
        self.clock = 0
        self._pending: Optional[tuple[int, int, int]] = None  # (output, target, due tick)
        if self.spec.kind == KIND_COUNTER:
            self._config: Hashable = 0
        else:
            self._config = self._initial
        self._schedule()

    def _schedule(self) -> None:
        """(Re)arm the pending callback for the current configuration."""
        self._pending = None
        if self._config == _ERR_CONFIG:
            return
        if self.spec.kind == KIND_COUNTER:
            if self._config > 0:
                o = self.alphabet.output_index(self.spec.response)
                due = self.clock + self.timing.delay_of(self.spec.response)
                self._pending = (o, self._config - 1, due)
            return
        q = self._config
        edge = self._output_edge[q]
        if edge is None and self._output_draws[q]:
            edge = self._rng.choice(self._output_draws[q])
        if edge is not None:
            o, target = edge
            due = self.clock + self.timing.delay_of(self.alphabet.outputs[o].name)
            self._pending = (o, target, due)

    def step(self, i: int) -> int:
        """Feed one closed input; returns the output index."""
        a = self.alphabet
        if self._config == _ERR_CONFIG:
            return a.err
        if i == a.wait:
            self.clock += self.timing.t_max
            if self._pending is None:
                return a.quiet
            o, target, due = self._pending
            assert due <= self.clock, "callback scheduled beyond its wait window"
            self._config = target
            self._schedule()
            return o
        # callins execute within t_min ticks, i.e. before any pending callback fires
        if self.spec.kind == KIND_COUNTER:
            self._config = self._config + 1
            self._schedule()
            return a.lam
        q = self._config
        if i in self._input_edges[q]:
            self._config = self._input_edges[q][i]
        elif i in self._input_draws[q]:
            self._config = self._rng.choice(self._input_draws[q][i])
        else:
            self._config = _ERR_CONFIG
            self._pending = None
            return a.err
        self._schedule()
        return a.lam

    def run_query(self, word: Word) -> tuple[int, ...]:
        """Reset, replay `word`, return the outputs (one per input)."""
        self.reset()
        return tuple(self.step(i) for i in word)


class Sul:
    """Simulator plus query cache: the 'teacher side' of a learning run.

    Every distinct word is executed at most once; repeats, prefixes of
    executed words, and extensions of error observations are answered from
    the cache.  Any executed observation that contradicts the cache raises
    NondeterminismError carrying a rendered report.
    """

    def __init__(self, spec: ModelSpec, seed: int = 0):
        self.simulator = Simulator(spec, seed=seed)
        self.oracle = CachingOracle(self.simulator.alphabet, self.simulator.run_query)

    @property
    def alphabet(self) -> ClosedAlphabet:
        return self.simulator.alphabet

    @property
    def cache(self):
        return self.oracle.cache

    def simulate_reset(self) -> None:
        self.simulator.reset()

    def membership_query(self, word: Sequence[str]) -> tuple[str, ...]:
        """Answer a word of callin/wait names with callback/reserved names."""
        return self.oracle.query_names(word)

    def detect_nondeterminism(
        self, trace: Sequence[str]
    ) -> Optional[NonDeterminismReport]:
        """Check an alternating input/output trace against everything seen.

        Returns a report iff some recorded observation shares an input
        prefix with `trace` but differs in an output inside that prefix.
        """
        if len(trace) % 2 != 0:
            raise ValueError("trace must alternate inputs and outputs (even length)")
        inputs = self.alphabet.encode_inputs(trace[0::2])
        outputs = tuple(self.alphabet.output_index(o) for o in trace[1::2])
        return self.cache.check(inputs, outputs)


# -- deterministic white-box views (verification, perfect oracles) --------


class MachineProcess:
    """Closed-step view of a Mealy machine (configs are state indices)."""

    def __init__(self, machine: MealyMachine):
        self.alphabet = machine.alphabet
        self._machine = machine

    def initial_config(self) -> Hashable:
        return self._machine.initial

    def step(self, config: Hashable, i: int) -> tuple[int, Hashable]:
        o, t = self._machine.step(config, i)
        return o, t


class CounterProcess:
    """Closed-step view of the request-response counter (configs are counts).

    Not a finite machine: configs are unbounded, which is what makes the
    underlying behaviour non-regular.
    """

    def __init__(self, alphabet: ClosedAlphabet, request: str, response: str):
        self.alphabet = alphabet
        self._req = alphabet.input_index(request)
        self._resp = alphabet.output_index(response)

    def initial_config(self) -> Hashable:
        return 0

    def step(self, config: Hashable, i: int) -> tuple[int, Hashable]:
        a = self.alphabet
        if i == a.wait:
            if config > 0:
                return self._resp, config - 1
            return a.quiet, config
        if i == self._req:
            return a.lam, config + 1
        raise ValueError("counter process got an unknown callin")


def process_for(spec: ModelSpec):
    """Deterministic closed-step process for a model, when one exists."""
    if spec.kind == KIND_COUNTER:
        alphabet = ClosedAlphabet.make(spec.inputs, spec.outputs)
        return CounterProcess(alphabet, spec.request, spec.response)
    from .closure import closure  # local import to keep module deps one-way

    return MachineProcess(closure(spec.to_automaton()).machine)
