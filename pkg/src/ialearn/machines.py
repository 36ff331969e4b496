"""Interface automata and Mealy machines.

An :class:`InterfaceAutomaton` is the asynchronous view of a component:
states with transitions labelled by callins (inputs) or callbacks
(outputs).  A :class:`MealyMachine` is the synchronous view used for
learning: total transition/output functions over a closed alphabet.

Both types are immutable after construction and validated eagerly, so any
machine you can hold satisfies its invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from . import _kernels
from .symbols import AlphabetError, ClosedAlphabet, Symbol, Word


class MachineError(ValueError):
    """Structurally invalid machine."""


class OutputNondeterminismError(MachineError):
    """A state has more than one outgoing callback transition."""

    def __init__(self, state_name: str):
        self.state_name = state_name
        super().__init__(
            f"state {state_name!r} has more than one outgoing output transition"
        )


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.int32)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Transition:
    """One labelled edge of an interface automaton."""

    source: str
    symbol: str
    target: str


@dataclass(frozen=True, eq=False)
class InterfaceAutomaton:
    """Deterministic interface automaton over callins and callbacks.

    Construction normalises the automaton: unreachable states are dropped
    (declaration order of the surviving states is preserved) and per-state
    transition maps are derived.  Input/output determinism (at most one
    transition per state and symbol) always holds; at most one *output*
    transition per state holds unless ``require_output_determinism=False``
    is passed, a relaxation used only to build negative fixtures.
    """

    inputs: tuple[Symbol, ...]
    outputs: tuple[Symbol, ...]
    state_names: tuple[str, ...]
    initial: int
    transitions: tuple[Transition, ...]
    input_edges: tuple[Mapping[int, int], ...] = field(repr=False)
    output_edges: tuple[tuple[tuple[int, int], ...], ...] = field(repr=False)

    def __init__(
        self,
        input_names: Sequence[str],
        output_names: Sequence[str],
        state_names: Sequence[str],
        initial: str,
        transitions: Iterable[tuple[str, str, str]],
        require_output_determinism: bool = True,
    ):
        inputs = tuple(Symbol(n, "input") for n in input_names)
        outputs = tuple(Symbol(n, "output") for n in output_names)
        seen: set[str] = set()
        for sym in inputs + outputs:
            if sym.name in seen:
                raise AlphabetError(f"duplicate symbol name {sym.name!r}")
            seen.add(sym.name)
        names = list(state_names)
        if len(set(names)) != len(names):
            raise MachineError("duplicate state names")
        if initial not in names:
            raise MachineError(f"initial state {initial!r} not declared")
        index = {n: k for k, n in enumerate(names)}
        in_idx = {s.name: k for k, s in enumerate(inputs)}
        out_idx = {s.name: k for k, s in enumerate(outputs)}

        raw_in: list[dict[int, int]] = [dict() for _ in names]
        raw_out: list[list[tuple[int, int]]] = [list() for _ in names]
        trans = []
        for src, sym, dst in transitions:
            if src not in index or dst not in index:
                raise MachineError(f"transition {src!r} -{sym!r}-> {dst!r} uses unknown state")
            s = index[src]
            if sym in in_idx:
                if in_idx[sym] in raw_in[s]:
                    raise MachineError(f"state {src!r} has two transitions on input {sym!r}")
                raw_in[s][in_idx[sym]] = index[dst]
            elif sym in out_idx:
                o = out_idx[sym]
                if any(existing == o for existing, _ in raw_out[s]):
                    raise MachineError(f"state {src!r} has two transitions on output {sym!r}")
                raw_out[s].append((o, index[dst]))
            else:
                raise MachineError(f"transition symbol {sym!r} not declared")
            trans.append(Transition(src, sym, dst))
        if require_output_determinism:
            for s, edges in enumerate(raw_out):
                if len(edges) > 1:
                    raise OutputNondeterminismError(names[s])

        # normalisation: keep only states reachable from the initial state
        reachable = {index[initial]}
        frontier = [index[initial]]
        while frontier:
            s = frontier.pop()
            for t in list(raw_in[s].values()) + [t for _, t in raw_out[s]]:
                if t not in reachable:
                    reachable.add(t)
                    frontier.append(t)
        keep = [k for k in range(len(names)) if k in reachable]
        remap = {old: new for new, old in enumerate(keep)}

        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", outputs)
        object.__setattr__(self, "state_names", tuple(names[k] for k in keep))
        object.__setattr__(self, "initial", remap[index[initial]])
        object.__setattr__(
            self,
            "transitions",
            tuple(t for t in trans if index[t.source] in reachable),
        )
        object.__setattr__(
            self,
            "input_edges",
            tuple({i: remap[t] for i, t in sorted(raw_in[k].items())} for k in keep),
        )
        object.__setattr__(
            self,
            "output_edges",
            tuple(tuple(sorted((o, remap[t]) for o, t in raw_out[k])) for k in keep),
        )

    @property
    def n_states(self) -> int:
        return len(self.state_names)

    def input_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.inputs)

    def output_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.outputs)

    def pending_output(self, state: int) -> Optional[tuple[int, int]]:
        """The single (output, target) edge of `state`, or None if quiescent."""
        edges = self.output_edges[state]
        if not edges:
            return None
        if len(edges) > 1:
            raise OutputNondeterminismError(self.state_names[state])
        return edges[0]

    def trace_set(self, depth: int) -> frozenset[tuple[str, ...]]:
        """All traces of length <= depth, by exhaustive path enumeration.

        Exponential; meant as an independent oracle in tests, not for
        production use.
        """
        result: set[tuple[str, ...]] = set()
        stack: list[tuple[int, tuple[str, ...]]] = [(self.initial, ())]
        while stack:
            state, trace = stack.pop()
            result.add(trace)
            if len(trace) == depth:
                continue
            for i, t in self.input_edges[state].items():
                stack.append((t, trace + (self.inputs[i].name,)))
            for o, t in self.output_edges[state]:
                stack.append((t, trace + (self.outputs[o].name,)))
        return frozenset(result)


@dataclass(frozen=True, eq=False)
class MealyMachine:
    """Deterministic Mealy machine over a closed alphabet.

    ``delta`` and ``out`` are total (n_states, n_inputs) tables of state and
    output indices.  Construction enforces the error-sink law: the target of
    any transition that outputs ``err`` must itself emit ``err`` and
    self-loop on every input, so error behaviour is absorbing in every
    machine the package can represent.
    """

    alphabet: ClosedAlphabet
    initial: int
    delta: np.ndarray
    out: np.ndarray
    state_names: tuple[str, ...] = ()

    def __post_init__(self):
        delta = _freeze(self.delta)
        out = _freeze(self.out)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "out", out)
        n, k = delta.shape
        if n < 1:
            raise MachineError("machine needs at least one state")
        if out.shape != (n, k) or k != self.alphabet.n_inputs:
            raise MachineError("delta/out shape does not match the alphabet")
        if not (0 <= self.initial < n):
            raise MachineError("initial state out of range")
        if delta.min(initial=0) < 0 or delta.max(initial=0) >= n:
            raise MachineError("delta target out of range")
        if out.min(initial=0) < 0 or out.max(initial=0) >= self.alphabet.n_outputs:
            raise MachineError("output index out of range")
        if not self.state_names:
            object.__setattr__(self, "state_names", tuple(f"q{i}" for i in range(n)))
        elif len(self.state_names) != n:
            raise MachineError("state_names length mismatch")
        self._check_err_sink()

    def _check_err_sink(self):
        err = self.alphabet.err
        sink_targets = set(self.delta[self.out == err].tolist())
        for q in sink_targets:
            if not ((self.out[q] == err).all() and (self.delta[q] == q).all()):
                raise MachineError(
                    f"state {self.state_names[q]!r} is entered by an err transition "
                    "but is not an absorbing err state"
                )

    @property
    def n_states(self) -> int:
        return int(self.delta.shape[0])

    def step(self, state: int, inp: int) -> tuple[int, int]:
        """(output, successor) of one transition."""
        return int(self.out[state, inp]), int(self.delta[state, inp])

    def run(self, word: Word, start: Optional[int] = None) -> tuple[int, ...]:
        """Output indices produced on `word` (from the initial state by default)."""
        w = np.asarray(word, dtype=np.int32)
        start = self.initial if start is None else start
        return tuple(_kernels.run_word(self.delta, self.out, start, w).tolist())

    def reached(self, word: Word, start: Optional[int] = None) -> int:
        w = np.asarray(word, dtype=np.int32)
        start = self.initial if start is None else start
        return int(_kernels.reached_state(self.delta, start, w))


def mealy_output(machine: MealyMachine, word: Sequence[str]) -> tuple[str, ...]:
    """Outputs of `machine` on a word of input symbol names.

    Raises AlphabetError if the word uses a symbol outside the machine's
    closed inputs.  The result always has one output per input.
    """
    encoded = machine.alphabet.encode_inputs(word)
    return machine.alphabet.decode_outputs(machine.run(encoded))


def build_mealy(
    alphabet: ClosedAlphabet,
    rows: Sequence[Sequence[tuple[int, int]]],
    initial: int = 0,
    state_names: Sequence[str] = (),
) -> MealyMachine:
    """Assemble a machine from per-state rows of (output, successor) pairs."""
    n = len(rows)
    delta = np.zeros((n, alphabet.n_inputs), dtype=np.int32)
    out = np.zeros((n, alphabet.n_inputs), dtype=np.int32)
    for q, row in enumerate(rows):
        if len(row) != alphabet.n_inputs:
            raise MachineError(f"state {q} row has {len(row)} entries")
        for i, (o, t) in enumerate(row):
            out[q, i] = o
            delta[q, i] = t
    return MealyMachine(alphabet, initial, delta, out, tuple(state_names))
