from itertools import product

import pytest

from ialearn import (
    Bounds,
    InfeasibleEnumerationError,
    check,
    dist_equivalence,
    distinguisher_bound,
    machine_oracle,
    perfect_equivalence,
    process_equivalence,
    random_minimal_mealy,
    state_bound_equivalence,
    traces_equal,
)
from ialearn.equivalence import shortest_access_words, state_bound_word_count
from ialearn.sul import CounterProcess, MachineProcess
from ialearn.symbols import ClosedAlphabet

from conftest import corrupt_machine, edit_output, tiny_alphabet


class TestBounds:
    def test_state_bound_implies_distinguisher_bound(self):
        assert Bounds(b_state=5).effective_b_dist == 4
        assert Bounds(b_dist=2, b_state=9).effective_b_dist == 2
        with pytest.raises(ValueError):
            Bounds()

    def test_distinguisher_bound_never_exceeds_states_minus_one(self, machine_corpus):
        for m in machine_corpus:
            assert distinguisher_bound(m) <= m.n_states - 1


class TestAccessWords:
    def test_shortest_and_lexicographic(self, asynctask_closure):
        m = asynctask_closure.machine
        words, order = shortest_access_words(m)
        assert words[m.initial] == ()
        assert order[0] == m.initial
        for q, w in enumerate(words):
            assert m.reached(w) == q
            if not w:
                continue
            # no shorter access word exists
            for cand in product(range(m.alphabet.n_inputs), repeat=len(w) - 1):
                assert m.reached(cand) != q
            # first word of that length in lexicographic order
            for cand in product(range(m.alphabet.n_inputs), repeat=len(w)):
                if cand == w:
                    break
                assert m.reached(cand) != q


class TestCheck:
    def test_identical_words_pass(self):
        target = random_minimal_mealy(4, 2, 2, seed=2)
        oracle = machine_oracle(target)
        assert check((0,), (0,), 2, oracle) is None

    def test_single_input_distinguisher_found(self):
        a = tiny_alphabet(1, 2)
        from ialearn import build_mealy

        target = build_mealy(a, [[(0, 1), (0, 0)], [(0, 0), (1, 1)]])
        oracle = machine_oracle(target)
        # () reaches state 0, (0,) reaches state 1; wait tells them apart
        assert check((), (0,), 2, oracle) == (a.wait,)

    def test_enumeration_budget(self):
        target = random_minimal_mealy(3, 2, 2, seed=4)
        oracle = machine_oracle(target)
        k = target.alphabet.n_inputs
        b = 3
        check((0,), (1,), b, oracle)
        # at most two queries per suffix of length <= b
        assert oracle.asked <= 2 * sum(k**j for j in range(1, b + 1))


class TestDistEquivalence:
    def test_true_hypothesis_accepted(self, asynctask_closure):
        m = asynctask_closure.machine
        oracle = machine_oracle(m)
        assert dist_equivalence(m, Bounds(b_dist=2), oracle) is None

    def test_every_corrupted_output_detected(self, asynctask_closure):
        m = asynctask_closure.machine
        alph = m.alphabet
        n_user = len(alph.user_outputs)
        for q in range(m.n_states):
            for i in range(alph.n_inputs):
                current = int(m.out[q, i])
                if current == alph.err:
                    continue  # would break the error-sink law
                replacement = next(
                    o for o in range(n_user) if o != current
                )
                bad = edit_output(m, q, i, replacement)
                oracle = machine_oracle(m)
                verdict = dist_equivalence(bad, Bounds(b_dist=2), oracle)
                assert verdict is not None, (q, i)
                w = verdict.word
                assert bad.run(w) != oracle.query(w)

    def test_counterexamples_replay_against_oracle(self, machine_corpus):
        for seed, target in enumerate(machine_corpus[:50]):
            bad = corrupt_machine(target, seed=seed)
            if traces_equal(bad, target) is None:
                continue  # corruption happened to be behaviour-preserving
            b = distinguisher_bound(target)
            oracle = machine_oracle(target)
            verdict = dist_equivalence(bad, Bounds(b_dist=b), oracle)
            assert verdict is not None
            assert bad.run(verdict.word) != oracle.query(verdict.word)

    def test_executed_queries_within_theorem_budget(self, machine_corpus):
        # the sharp per-call bound: |Q| * n_inputs^(b+1) distinct executions
        for target in machine_corpus[:60]:
            b = distinguisher_bound(target)
            oracle = machine_oracle(target)
            assert dist_equivalence(target, Bounds(b_dist=b), oracle) is None
            assert oracle.executed <= target.n_states * target.alphabet.n_inputs ** (b + 1)

    def test_skips_do_not_change_verdicts(self, asynctask_closure, machine_corpus):
        cases = []
        m = asynctask_closure.machine
        cases.append((m, m))
        cases.append((edit_output(m, m.state_names.index("Running"),
                                  m.alphabet.input_index("cancel"), 0), m))
        for t in machine_corpus[:20]:
            cases.append((t, t))
            cases.append((corrupt_machine(t, seed=1), t))
        for hyp, target in cases:
            o1, o2 = machine_oracle(target), machine_oracle(target)
            v1 = dist_equivalence(hyp, Bounds(b_dist=2), o1, skip_optimizations=True)
            v2 = dist_equivalence(hyp, Bounds(b_dist=2), o2, skip_optimizations=False)
            assert (v1 is None) == (v2 is None)


class TestStateBoundEquivalence:
    def test_small_instance_accepts_target(self):
        target = random_minimal_mealy(2, 1, 2, seed=6)
        oracle = machine_oracle(target)
        assert state_bound_equivalence(target, 2, oracle) is None
        count, max_len = state_bound_word_count(2, 2, target.alphabet.n_inputs)
        assert max_len == 3
        assert oracle.asked == count

    def test_infeasible_enumeration_reported_not_run(self):
        count, _ = state_bound_word_count(10, 10, 8)
        assert count > 10**8
        target = random_minimal_mealy(4, 2, 2, seed=3)
        oracle = machine_oracle(target)
        with pytest.raises(InfeasibleEnumerationError) as exc:
            state_bound_equivalence(target, 16, oracle, word_budget=10**6)
        assert exc.value.word_count > 10**6
        assert oracle.executed == 0

    def test_counterexamples_replay(self):
        for seed in range(10):
            target = random_minimal_mealy(3, 2, 2, seed=seed)
            bad = corrupt_machine(target, seed=seed)
            if traces_equal(bad, target) is None:
                continue
            oracle = machine_oracle(target)
            verdict = state_bound_equivalence(bad, target.n_states, oracle)
            assert verdict is not None
            assert bad.run(verdict.word) != oracle.query(verdict.word)


class TestPerfectEquivalence:
    def test_reflexive(self, machine_corpus):
        for m in machine_corpus[:10]:
            assert perfect_equivalence(m, m) is None

    def test_minimal_counterexample_length(self, machine_corpus):
        for seed, target in enumerate(machine_corpus[:40]):
            bad = corrupt_machine(target, seed=seed + 7)
            verdict = perfect_equivalence(bad, target)
            if verdict is None:
                continue
            assert len(verdict.word) <= bad.n_states + target.n_states - 1

    def test_agrees_with_dist_oracle_at_true_bound(self, machine_corpus):
        agree = 0
        for seed, target in enumerate(machine_corpus):
            hyp = corrupt_machine(target, seed=seed + 99) if seed % 2 else target
            b = distinguisher_bound(target)
            oracle = machine_oracle(target)
            v_dist = dist_equivalence(hyp, Bounds(b_dist=b), oracle)
            v_perf = perfect_equivalence(hyp, target)
            assert (v_dist is None) == (v_perf is None), seed
            agree += 1
        assert agree == len(machine_corpus)


class TestProcessEquivalence:
    def test_machine_process_roundtrip(self, asynctask_closure):
        m = asynctask_closure.machine
        assert process_equivalence(m, MachineProcess(m)) is None

    def test_counter_process_always_beats_finite_hypotheses(self):
        alph = ClosedAlphabet.make(["get"], ["resp"])
        process = CounterProcess(alph, "get", "resp")
        from ialearn import build_mealy

        lam, quiet, resp = alph.lam, alph.quiet, alph.output_index("resp")
        hyp = build_mealy(
            alph, [[(lam, 1), (quiet, 0)], [(lam, 1), (resp, 0)]]
        )
        verdict = process_equivalence(hyp, process)
        assert verdict is not None
        outs = []
        config = process.initial_config()
        for i in verdict.word:
            o, config = process.step(config, i)
            outs.append(o)
        assert tuple(outs) != hyp.run(verdict.word)
