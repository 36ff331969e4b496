"""Graphviz rendering of interface automata.

Callins are plain solid edges; callbacks are drawn with a parallel-line
(double-edge) stroke.  Output is deterministic: states in automaton order,
edges grouped per state with inputs before outputs in alphabet order.
"""

from __future__ import annotations

from .machines import InterfaceAutomaton


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(a: InterfaceAutomaton, title: str = "typestate") -> str:
    lines = [
        f"digraph {_q(title)} {{",
        "  rankdir=LR;",
        "  node [shape=circle, fontsize=11];",
        '  __start [shape=point, label=""];',
    ]
    for name in a.state_names:
        lines.append(f"  {_q(name)};")
    lines.append(f"  __start -> {_q(a.state_names[a.initial])};")
    for q in range(a.n_states):
        for i, t in a.input_edges[q].items():
            lines.append(
                f"  {_q(a.state_names[q])} -> {_q(a.state_names[t])} "
                f"[label={_q(a.inputs[i].name)}];"
            )
        for o, t in a.output_edges[q]:
            lines.append(
                f"  {_q(a.state_names[q])} -> {_q(a.state_names[t])} "
                f'[label={_q(a.outputs[o].name)}, color="black:invis:black"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
