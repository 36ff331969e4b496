import numpy as np
import pytest

from ialearn import (
    ClosedAlphabet,
    InterfaceAutomaton,
    MachineError,
    MealyMachine,
    OutputNondeterminismError,
    Symbol,
    build_mealy,
    mealy_output,
)
from ialearn.symbols import AlphabetError

from conftest import tiny_alphabet


class TestSymbols:
    def test_reserved_names_blocked_for_users(self):
        for name in ("wait", "quiet", "lambda", "err", "oop"):
            with pytest.raises(AlphabetError):
                Symbol(name, "input")

    def test_empty_name_rejected(self):
        with pytest.raises(AlphabetError):
            Symbol("", "input")
        with pytest.raises(AlphabetError):
            Symbol("two words", "output")

    def test_alphabet_order_reserved_last(self):
        a = ClosedAlphabet.make(["open", "close"], ["onOpen"])
        assert [s.name for s in a.inputs] == ["open", "close", "wait"]
        assert [s.name for s in a.outputs] == ["onOpen", "quiet", "lambda", "err", "oop"]
        assert a.wait == 2
        assert a.inputs[a.wait].kind == "reserved"

    def test_duplicate_names_rejected(self):
        with pytest.raises(AlphabetError):
            ClosedAlphabet.make(["a", "a"], ["b"])
        with pytest.raises(AlphabetError):
            ClosedAlphabet.make(["a"], ["a"])

    def test_encode_decode_roundtrip(self):
        a = tiny_alphabet(2, 2)
        word = a.encode_inputs(["i0", "wait", "i1"])
        assert a.decode_inputs(word) == ("i0", "wait", "i1")
        with pytest.raises(AlphabetError):
            a.encode_inputs(["nope"])


def demo_machine(alphabet=None):
    # two states flipping on i0, wait self-loops
    a = alphabet or tiny_alphabet(1, 2)
    return build_mealy(
        a,
        rows=[
            [(0, 1), (a.quiet, 0)],
            [(1, 0), (a.quiet, 1)],
        ],
    )


class TestMealyMachine:
    def test_output_length_matches_word(self):
        m = demo_machine()
        for w in [(), (0,), (0, 1, 0, 1)]:
            assert len(m.run(w)) == len(w)

    def test_empty_word(self):
        assert mealy_output(demo_machine(), []) == ()

    def test_unknown_symbol_rejected(self):
        with pytest.raises(AlphabetError):
            mealy_output(demo_machine(), ["bogus"])

    def test_totality_shape_enforced(self):
        a = tiny_alphabet(1, 2)
        with pytest.raises(MachineError):
            MealyMachine(a, 0, np.zeros((2, 1), dtype=np.int32), np.zeros((2, 1), dtype=np.int32))

    def test_target_range_enforced(self):
        a = tiny_alphabet(1, 2)
        delta = np.array([[5, 0]], dtype=np.int32)
        out = np.zeros((1, 2), dtype=np.int32)
        with pytest.raises(MachineError):
            MealyMachine(a, 0, delta, out)

    def test_err_sink_law_enforced(self):
        a = tiny_alphabet(1, 2)
        err, lam = a.err, a.lam
        # state 1 is entered via an err output but is not absorbing
        with pytest.raises(MachineError):
            build_mealy(a, rows=[[(err, 1), (lam, 0)], [(lam, 0), (lam, 1)]])
        # proper sink passes
        m = build_mealy(a, rows=[[(err, 1), (lam, 0)], [(err, 1), (err, 1)]])
        assert m.run((0, 0, 1)) == (err, err, err)

    def test_immutable_tables(self):
        m = demo_machine()
        with pytest.raises(ValueError):
            m.delta[0, 0] = 1


class TestInterfaceAutomaton:
    def test_unreachable_states_pruned(self):
        a = InterfaceAutomaton(
            ["go"], ["done"], ["A", "B", "Z"], "A",
            [("A", "go", "B"), ("Z", "go", "A")],
        )
        assert a.state_names == ("A", "B")
        assert all(t.source != "Z" for t in a.transitions)

    def test_input_determinism_enforced(self):
        with pytest.raises(MachineError):
            InterfaceAutomaton(
                ["go"], ["done"], ["A", "B"], "A",
                [("A", "go", "B"), ("A", "go", "A")],
            )

    def test_output_determinism_enforced_and_relaxable(self):
        trans = [("A", "x", "B"), ("A", "y", "B"), ("B", "x", "A")]
        with pytest.raises(OutputNondeterminismError):
            InterfaceAutomaton(["go"], ["x", "y"], ["A", "B"], "A", trans)
        relaxed = InterfaceAutomaton(
            ["go"], ["x", "y"], ["A", "B"], "A", trans,
            require_output_determinism=False,
        )
        with pytest.raises(OutputNondeterminismError) as exc:
            relaxed.pending_output(0)
        assert "A" in str(exc.value)

    def test_unknown_symbol_rejected(self):
        with pytest.raises(MachineError):
            InterfaceAutomaton(["go"], ["done"], ["A"], "A", [("A", "stop", "A")])
