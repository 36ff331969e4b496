from ialearn import InterfaceAutomaton, run_learn, bundled_model_path
from ialearn.dot import export_dot

GOLDEN_SINGLE = """digraph "solo" {
  rankdir=LR;
  node [shape=circle, fontsize=11];
  __start [shape=point, label=""];
  "Only";
  __start -> "Only";
}
"""


def test_single_state_golden():
    a = InterfaceAutomaton(["go"], ["done"], ["Only"], "Only", [])
    assert export_dot(a, title="solo") == GOLDEN_SINGLE


def test_byte_identical_output(asynctask_model):
    a = asynctask_model.to_automaton()
    assert export_dot(a) == export_dot(a)


def test_callbacks_get_double_stroke(asynctask_model):
    text = export_dot(asynctask_model.to_automaton())
    assert 'label="onCancelled", color="black:invis:black"' in text
    assert 'label="execute"];' in text


def test_learned_asynctask_counts():
    outcome = run_learn(bundled_model_path("asynctask"), b_dist=2)
    text = export_dot(outcome.automaton)
    node_lines = [l for l in text.splitlines() if l.endswith('";') and "->" not in l]
    edge_lines = [l for l in text.splitlines() if "->" in l and "__start" not in l]
    assert len(node_lines) == 5
    assert len(edge_lines) == 9
