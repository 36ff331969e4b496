"""Shared fixtures and independent brute-force oracles.

The brute-force functions here deliberately avoid the library's algorithms
(no product search, no partition refinement): they enumerate words and
compare outputs directly, so they can serve as ground truth for the
efficient implementations.
"""

from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from ialearn import (
    ClosedAlphabet,
    InterfaceAutomaton,
    MealyMachine,
    bundled_model_path,
    closure,
    load_model,
    random_minimal_mealy,
)


def all_words(n_inputs: int, max_len: int):
    """Every input word of length 1..max_len, shortest first, lexicographic."""
    for length in range(1, max_len + 1):
        yield from product(range(n_inputs), repeat=length)


def brute_force_counterexample(m1: MealyMachine, m2: MealyMachine, max_len: int):
    """First word (shortest, then lexicographic) with differing outputs."""
    for w in all_words(m1.alphabet.n_inputs, max_len):
        if m1.run(w) != m2.run(w):
            return w
    return None


def brute_force_distinguisher_bound(m: MealyMachine) -> int:
    """Max over state pairs of the shortest separating word length, by
    direct enumeration (exponential; fine for the small test machines)."""
    n = m.n_states
    bound = 0
    for q1 in range(n):
        for q2 in range(q1 + 1, n):
            for w in all_words(m.alphabet.n_inputs, n):
                if m.run(w, start=q1) != m.run(w, start=q2):
                    bound = max(bound, len(w))
                    break
            else:
                raise AssertionError(f"states {q1},{q2} indistinguishable up to length {n}")
    return bound


def enumerate_traces(a: InterfaceAutomaton, depth: int) -> frozenset:
    """All traces up to `depth` symbols by explicit path enumeration
    (test-owned copy, independent of the library's trace_set)."""
    out: set[tuple[str, ...]] = set()
    stack = [(a.initial, ())]
    while stack:
        q, tr = stack.pop()
        out.add(tr)
        if len(tr) == depth:
            continue
        for i, t in a.input_edges[q].items():
            stack.append((t, tr + (a.inputs[i].name,)))
        for o, t in a.output_edges[q]:
            stack.append((t, tr + (a.outputs[o].name,)))
    return frozenset(out)


def random_interface_automaton(seed: int, n_states: int = 5, n_inputs: int = 3, n_outputs: int = 2):
    """Seeded random interface automaton: partial input edges, at most one
    output edge per state, connected by construction."""
    import random as _random

    rng = _random.Random(seed)
    inputs = [f"call{k}" for k in range(n_inputs)]
    outputs = [f"cb{k}" for k in range(n_outputs)]
    states = [f"s{k}" for k in range(n_states)]
    transitions = []
    used = set()

    def has_output(p):
        return any(s == states[p] and x in outputs for s, x in used)

    for q in range(1, n_states):
        candidates = [
            (p, sym)
            for p in range(q)
            for sym in inputs + outputs
            if (states[p], sym) not in used and not (sym in outputs and has_output(p))
        ]
        p, sym = rng.choice(candidates)
        used.add((states[p], sym))
        transitions.append((states[p], sym, states[q]))
    for q in range(n_states):
        for sym in inputs:
            if (states[q], sym) in used:
                continue
            if rng.random() < 0.4:
                used.add((states[q], sym))
                transitions.append((states[q], sym, states[rng.randrange(n_states)]))
        if rng.random() < 0.3 and not any(
            s == states[q] and x in outputs for s, x in used
        ):
            sym = rng.choice(outputs)
            used.add((states[q], sym))
            transitions.append((states[q], sym, states[rng.randrange(n_states)]))
    return InterfaceAutomaton(inputs, outputs, states, states[0], transitions)


def corrupt_machine(m: MealyMachine, seed: int) -> MealyMachine:
    """Copy of `m` with one non-error transition's output or target changed."""
    import random as _random

    rng = _random.Random(seed)
    err = m.alphabet.err
    candidates = [
        (q, i)
        for q in range(m.n_states)
        for i in range(m.alphabet.n_inputs)
        if int(m.out[q, i]) != err
    ]
    q, i = rng.choice(candidates)
    delta = np.array(m.delta)
    out = np.array(m.out)
    n_user_out = len(m.alphabet.user_outputs)
    if rng.random() < 0.5 or m.n_states == 1:
        choices = [o for o in range(n_user_out) if o != int(out[q, i])]
        out[q, i] = rng.choice(choices) if choices else (int(out[q, i]) + 1) % n_user_out
    else:
        choices = [t for t in range(m.n_states) if t != int(delta[q, i])]
        delta[q, i] = rng.choice(choices)
    return MealyMachine(m.alphabet, m.initial, delta, out)


def edit_output(m: MealyMachine, q: int, i: int, new_output: int) -> MealyMachine:
    out = np.array(m.out)
    out[q, i] = new_output
    return MealyMachine(m.alphabet, m.initial, np.array(m.delta), out)


def edit_target(m: MealyMachine, q: int, i: int, new_target: int) -> MealyMachine:
    delta = np.array(m.delta)
    delta[q, i] = new_target
    return MealyMachine(m.alphabet, m.initial, delta, np.array(m.out))


# -- fixtures --------------------------------------------------------------


def corpus_params(seed: int) -> tuple[int, int, int]:
    """Deterministic machine sizes for the 200-machine property corpus:
    2-8 states, 2-5 user inputs, 2-4 user outputs."""
    return 2 + seed % 7, 2 + seed % 4, 2 + (seed // 3) % 3


@pytest.fixture(scope="session")
def machine_corpus():
    machines = []
    for seed in range(200):
        n, k, o = corpus_params(seed)
        machines.append(random_minimal_mealy(n, k, o, seed=seed))
    return machines


@pytest.fixture(scope="session")
def asynctask_model():
    return load_model(bundled_model_path("asynctask"))


@pytest.fixture(scope="session")
def mediaplayer_model():
    return load_model(bundled_model_path("mediaplayer"))


@pytest.fixture(scope="session")
def asynctask_closure(asynctask_model):
    return closure(asynctask_model.to_automaton())


@pytest.fixture(scope="session")
def mediaplayer_closure(mediaplayer_model):
    return closure(mediaplayer_model.to_automaton())


def tiny_alphabet(n_inputs: int = 1, n_outputs: int = 2) -> ClosedAlphabet:
    return ClosedAlphabet.make(
        [f"i{k}" for k in range(n_inputs)], [f"o{k}" for k in range(n_outputs)]
    )
