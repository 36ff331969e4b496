"""Machine algorithms: equivalence, minimisation, distinguisher bounds,
conversion back to interface automata, and a seeded test generator.
"""

from __future__ import annotations

import random
from typing import Optional

import numpy as np

from . import _kernels
from .machines import InterfaceAutomaton, MachineError, MealyMachine
from .symbols import ClosedAlphabet


class NotMinimalError(MachineError):
    """A machine expected to be minimal has an indistinguishable state pair."""

    def __init__(self, pair: tuple[str, str]):
        self.pair = pair
        super().__init__(f"states {pair[0]!r} and {pair[1]!r} are not distinguishable")


class GenerationError(RuntimeError):
    """random_minimal_mealy could not hit the requested state count."""


def traces_equal(m1: MealyMachine, m2: MealyMachine) -> Optional[tuple[str, ...]]:
    """Exact trace-equivalence check via search over the product machine.

    Returns None when the machines agree on every input word, otherwise the
    lexicographically least among the shortest words on which their outputs
    differ.  Requires identical alphabets.
    """
    if m1.alphabet != m2.alphabet:
        raise MachineError("traces_equal needs machines over the same alphabet")
    cex = _kernels.product_counterexample(
        m1.delta, m1.out, m1.initial, m2.delta, m2.out, m2.initial
    )
    if cex is None:
        return None
    return m1.alphabet.decode_inputs(cex.tolist())


def _partition(m: MealyMachine) -> tuple[list[int], int]:
    blocks, rounds = _kernels.refine_partition(m.delta, m.out)
    return blocks.tolist(), int(rounds)


def distinguisher_bound(m: MealyMachine) -> int:
    """Smallest B such that every pair of distinct states is told apart by
    some input word of length <= B.

    Computed by partition refinement: the pairs still merged after round r
    are exactly those needing words longer than r.  The machine must have
    pairwise-distinguishable states; otherwise NotMinimalError reports an
    offending pair instead of silently minimising.
    """
    blocks, rounds = _partition(m)
    if len(set(blocks)) != m.n_states:
        first: dict[int, int] = {}
        for q, b in enumerate(blocks):
            if b in first:
                raise NotMinimalError((m.state_names[first[b]], m.state_names[q]))
            first[b] = q
    return rounds


def minimize(m: MealyMachine) -> MealyMachine:
    """Trace-equivalent machine with reachable, pairwise-distinguishable states.

    States are renumbered canonically (breadth-first from the initial state,
    expanding inputs in alphabet order), so equal-behaviour machines
    minimise to identical tables.
    """
    # restrict to the reachable part before quotienting
    n = m.n_states
    reach = [m.initial]
    seen = {m.initial}
    k = 0
    while k < len(reach):
        q = reach[k]
        k += 1
        for t in m.delta[q].tolist():
            if t not in seen:
                seen.add(t)
                reach.append(t)
    sub = {old: new for new, old in enumerate(reach)}
    delta = np.array(
        [[sub[int(m.delta[q, i])] for i in range(m.alphabet.n_inputs)] for q in reach],
        dtype=np.int32,
    )
    out = np.array([m.out[q].tolist() for q in reach], dtype=np.int32)

    blocks, _ = _kernels.refine_partition(delta, out)
    blocks = blocks.tolist()
    n_blocks = len(set(blocks))
    rep = [-1] * n_blocks
    for q in range(len(reach)):
        if rep[blocks[q]] < 0:
            rep[blocks[q]] = q

    # canonical BFS order over the quotient
    order: list[int] = [blocks[0]]
    pos = {blocks[0]: 0}
    k = 0
    while k < len(order):
        b = order[k]
        k += 1
        for i in range(m.alphabet.n_inputs):
            t = blocks[int(delta[rep[b], i])]
            if t not in pos:
                pos[t] = len(order)
                order.append(t)
    new_delta = np.zeros((n_blocks, m.alphabet.n_inputs), dtype=np.int32)
    new_out = np.zeros((n_blocks, m.alphabet.n_inputs), dtype=np.int32)
    for b in order:
        q = rep[b]
        for i in range(m.alphabet.n_inputs):
            new_delta[pos[b], i] = pos[blocks[int(delta[q, i])]]
            new_out[pos[b], i] = int(out[q, i])
    return MealyMachine(m.alphabet, 0, new_delta, new_out)


def random_minimal_mealy(
    n_states: int, n_inputs: int, n_outputs: int, seed: int, max_attempts: int = 200
) -> MealyMachine:
    """Seeded generator of connected minimal machines with exactly `n_states`
    states, `n_inputs` user inputs and `n_outputs` user outputs.

    Uses the stdlib Mersenne Twister (`random.Random(seed)`); ports should
    match it property-for-property, not bit-for-bit.  Draws a connected
    random machine, minimises, and retries until the minimal machine has the
    requested size; raises GenerationError (naming the seed) if that never
    happens within `max_attempts`.
    """
    if n_states < 1 or n_inputs < 1 or n_outputs < 2:
        raise ValueError("need n_states >= 1, n_inputs >= 1, n_outputs >= 2")
    alphabet = ClosedAlphabet.make(
        [f"i{k}" for k in range(n_inputs)], [f"o{k}" for k in range(n_outputs)]
    )
    rng = random.Random(seed)
    k_in = alphabet.n_inputs
    for _ in range(max_attempts):
        delta = np.empty((n_states, k_in), dtype=np.int32)
        out = np.empty((n_states, k_in), dtype=np.int32)
        for q in range(n_states):
            for i in range(k_in):
                delta[q, i] = rng.randrange(n_states)
                out[q, i] = rng.randrange(n_outputs)
        # graft a random in-edge from an earlier state so every state is reachable
        for q in range(1, n_states):
            delta[rng.randrange(q), rng.randrange(k_in)] = q
        candidate = minimize(MealyMachine(alphabet, 0, delta, out))
        if candidate.n_states == n_states:
            return candidate
    raise GenerationError(
        f"no minimal {n_states}-state machine found for seed {seed} "
        f"within {max_attempts} attempts"
    )


def mealy_to_interface_automaton(m: MealyMachine) -> InterfaceAutomaton:
    """Fold a learned synchronous machine back into an interface automaton.

    Drops err- and oop-output transitions and quiescent wait self-loops,
    relabels the remaining wait transitions with their callback symbol, and
    turns accepted callins (output ``lambda``) into input-labelled edges.
    Unreachable states are pruned by the automaton constructor.  Raises
    MachineError on machines that do not follow the closure output
    discipline (e.g. a callin transition with a callback output).
    """
    alph = m.alphabet
    names = list(m.state_names)
    transitions: list[tuple[str, str, str]] = []
    for q in range(m.n_states):
        for i in range(alph.n_inputs):
            o, t = m.step(q, i)
            if o in (alph.err, alph.oop):
                continue
            if i == alph.wait:
                if o == alph.quiet:
                    if t != q:
                        raise MachineError(
                            f"state {names[q]!r}: quiescent wait transition must self-loop"
                        )
                    continue
                transitions.append((names[q], alph.outputs[o].name, names[t]))
            else:
                if o != alph.lam:
                    raise MachineError(
                        f"state {names[q]!r}: callin {alph.inputs[i].name!r} has "
                        f"output {alph.outputs[o].name!r}; not a closure-shaped machine"
                    )
                transitions.append((names[q], alph.inputs[i].name, names[t]))
    return InterfaceAutomaton(
        [s.name for s in alph.user_inputs],
        [s.name for s in alph.user_outputs],
        names,
        names[m.initial],
        transitions,
    )


def canonical_form(
    a: InterfaceAutomaton,
) -> tuple[tuple[str, ...], tuple[str, ...], tuple[tuple[int, int, int], ...]]:
    """Canonical structure key: states renumbered breadth-first, transitions
    sorted.  Two automata over the same declared alphabet are isomorphic iff
    their canonical forms are equal.
    """
    symbol_order = {s.name: k for k, s in enumerate(a.inputs + a.outputs)}
    order = [a.initial]
    pos = {a.initial: 0}
    k = 0
    while k < len(order):
        q = order[k]
        k += 1
        edges = [(symbol_order[a.inputs[i].name], t) for i, t in a.input_edges[q].items()]
        edges += [(symbol_order[a.outputs[o].name], t) for o, t in a.output_edges[q]]
        for _, t in sorted(edges):
            if t not in pos:
                pos[t] = len(order)
                order.append(t)
    edges_canon = sorted(
        (pos[q], symbol_order[sym], pos[t])
        for q in order
        for sym, t in [
            *((a.inputs[i].name, t) for i, t in a.input_edges[q].items()),
            *((a.outputs[o].name, t) for o, t in a.output_edges[q]),
        ]
    )
    return (
        tuple(s.name for s in a.inputs),
        tuple(s.name for s in a.outputs),
        tuple(edges_canon),
    )


def isomorphic(a: InterfaceAutomaton, b: InterfaceAutomaton) -> bool:
    return canonical_form(a) == canonical_form(b)
