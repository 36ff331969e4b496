from itertools import product

import pytest

from ialearn import (
    AutomatonAsyncOracle,
    InterfaceAutomaton,
    OutputNondeterminismError,
    closure,
    closure_oracle,
    mealy_output,
)
from ialearn.symbols import ERR, LAMBDA, RESERVED_NAMES

from conftest import random_interface_automaton


class TestClosureRules:
    def test_mediaplayer_async_trace(self, mediaplayer_closure):
        m = mediaplayer_closure.machine
        assert mealy_output(m, ["setDataSource", "prepareAsync", "wait", "wait"]) == (
            "lambda", "lambda", "onPrepared", "quiet",
        )
        # quiescence is a self-loop: more waits stay quiet
        assert mealy_output(m, ["setDataSource", "prepareAsync", "wait", "wait", "wait"])[-1] == "quiet"

    def test_disabled_callin_errors_and_absorbs(self, mediaplayer_closure):
        m = mediaplayer_closure.machine
        assert mealy_output(m, ["start"]) == ("err",)
        assert mealy_output(m, ["start", "setDataSource"]) == ("err", "err")

    def test_asynctask_pending_delivery(self, asynctask_closure):
        m = asynctask_closure.machine
        assert mealy_output(m, ["execute", "wait"]) == ("lambda", "onPostExecute")

    def test_err_sink_bookkeeping(self, asynctask_closure):
        res = asynctask_closure
        assert res.machine.state_names[res.err_sink] == "ERR"
        assert res.err_sink not in res.state_map
        # pending flags reflect exactly the states with callback edges
        flags = {name: pending for name, pending in res.state_map.values()}
        assert flags == {
            "Start": False, "Cancelling": True, "Running": True,
            "Cancelling2": True, "Completed": False,
        }

    def test_state_budget(self, asynctask_model, mediaplayer_model):
        for spec in (asynctask_model, mediaplayer_model):
            a = spec.to_automaton()
            assert closure(a).machine.n_states <= 2 * a.n_states + 1

    def test_outputs_follow_rule_shape(self, mediaplayer_closure):
        # callins only ever answer lambda or err; wait answers a callback or quiet
        m = mediaplayer_closure.machine
        alph = m.alphabet
        for q in range(m.n_states):
            for i in range(alph.n_inputs):
                o, _ = m.step(q, i)
                name = alph.outputs[o].name
                if i == alph.wait:
                    assert name not in (LAMBDA,)
                else:
                    assert name in (LAMBDA, ERR)

    def test_async_erasure(self):
        # erasing reserved symbols from any non-error closed trace yields a
        # trace of the source automaton
        for seed in range(20):
            a = random_interface_automaton(seed)
            m = closure(a).machine
            oracle = AutomatonAsyncOracle(a)
            for word in product(range(m.alphabet.n_inputs), repeat=4):
                outs = m.run(word)
                if m.alphabet.err in outs:
                    continue
                trace = []
                for i, o in zip(word, outs):
                    trace.append(m.alphabet.inputs[i].name)
                    trace.append(m.alphabet.outputs[o].name)
                erased = tuple(s for s in trace if s not in RESERVED_NAMES)
                assert oracle._walk(erased) is not None, (seed, trace)

    def test_output_nondeterminism_rejected(self):
        bad = InterfaceAutomaton(
            ["go"], ["x", "y"], ["A", "B"], "A",
            [("A", "x", "B"), ("A", "y", "B")],
            require_output_determinism=False,
        )
        with pytest.raises(OutputNondeterminismError) as exc:
            closure(bad)
        assert "A" in str(exc.value)


class TestClosureOracle:
    def test_empty_query(self, asynctask_model):
        a = asynctask_model.to_automaton()
        oracle = closure_oracle(AutomatonAsyncOracle(a), closure(a).machine.alphabet)
        assert oracle.query(()) == ()

    def test_wait_on_quiescent_initial(self, mediaplayer_model):
        a = mediaplayer_model.to_automaton()
        m = closure(a).machine
        oracle = closure_oracle(AutomatonAsyncOracle(a), m.alphabet)
        assert oracle.query_names(["wait"]) == ("quiet",)

    @pytest.mark.parametrize("model", ["asynctask", "mediaplayer"])
    def test_matches_closure_machine_exhaustively(self, model, request):
        spec = request.getfixturevalue(f"{model}_model")
        a = spec.to_automaton()
        m = closure(a).machine
        oracle = closure_oracle(AutomatonAsyncOracle(a), m.alphabet)
        max_len = 6 if a.n_states <= 5 else 4
        for length in range(1, max_len + 1):
            for word in product(range(m.alphabet.n_inputs), repeat=length):
                assert oracle.query(word) == m.run(word), word

    def test_alternation(self, asynctask_model):
        a = asynctask_model.to_automaton()
        m = closure(a).machine
        oracle = closure_oracle(AutomatonAsyncOracle(a), m.alphabet)
        for word in product(range(m.alphabet.n_inputs), repeat=5):
            assert len(oracle.query(word)) == len(word)
