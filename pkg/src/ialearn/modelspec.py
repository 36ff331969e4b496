"""Model and purpose spec files (JSON).

One format serves the ground-truth models the simulator executes, the
machines the learner emits, and hand-written fixtures:

* ``kind: "interface-automaton"`` -- states plus callin/callback edges
  (``{"from", "symbol", "to"}``), optionally extended with a ``timing``
  block, a ``nondet`` block declaring environment-controlled choice points,
  and a suggested ``refinement``;
* ``kind: "mealy"`` -- total synchronous machines
  (``{"from", "input", "output", "to"}``, reserved symbols by name);
* ``kind: "request-response"`` -- the non-regular counter fixture: one
  callin that queues exactly one callback per invocation.

Unknown fields are rejected everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Optional

import numpy as np

from .machines import InterfaceAutomaton, MealyMachine
from .symbols import ClosedAlphabet, RESERVED_NAMES

KIND_AUTOMATON = "interface-automaton"
KIND_MEALY = "mealy"
KIND_COUNTER = "request-response"


class SpecError(ValueError):
    """Malformed spec file."""


def _require_keys(obj: Mapping, allowed: set[str], required: set[str], where: str):
    if not isinstance(obj, Mapping):
        raise SpecError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise SpecError(f"{where}: unknown fields {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise SpecError(f"{where}: missing fields {sorted(missing)}")


def _str_list(value, where: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise SpecError(f"{where}: expected a list of strings")
    return tuple(value)


@dataclass(frozen=True)
class TimingSpec:
    """Discrete-time envelope: callbacks scheduled when a state is entered
    are delivered `delay` ticks later, with t_min <= delay < t_max; a `wait`
    advances the clock by t_max, so a pending callback always lands inside
    the wait that observes it."""

    t_min: int = 1
    t_max: int = 10
    delays: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if not 0 < self.t_min < self.t_max:
            raise SpecError("timing requires 0 < t_min < t_max")
        for name, d in self.delays:
            if not (self.t_min <= d < self.t_max):
                raise SpecError(
                    f"delay for {name!r} must lie in [t_min, t_max) = "
                    f"[{self.t_min}, {self.t_max})"
                )

    def delay_of(self, callback: str) -> int:
        for name, d in self.delays:
            if name == callback:
                return d
        return self.t_min


@dataclass(frozen=True)
class InputChoice:
    source: str
    input: str
    branches: tuple[tuple[str, str], ...]  # (tag, target state)


@dataclass(frozen=True)
class OutputChoice:
    source: str
    branches: tuple[tuple[str, str, str], ...]  # (tag, output, target state)


@dataclass(frozen=True)
class SplitSpec:
    input: str
    variants: tuple[tuple[str, str], ...]  # (variant symbol, branch tag)


@dataclass(frozen=True)
class MergeSpec:
    outputs: tuple[str, ...]
    into: str


@dataclass(frozen=True)
class RefinementSpec:
    splits: tuple[SplitSpec, ...] = ()
    merges: tuple[MergeSpec, ...] = ()


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    inputs: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ()
    states: tuple[str, ...] = ()
    initial: Optional[str] = None
    transitions: tuple[tuple, ...] = ()
    name: Optional[str] = None
    notes: Optional[str] = None
    timing: TimingSpec = field(default_factory=TimingSpec)
    input_choices: tuple[InputChoice, ...] = ()
    output_choices: tuple[OutputChoice, ...] = ()
    refinement: Optional[RefinementSpec] = None
    request: Optional[str] = None
    response: Optional[str] = None

    @property
    def has_choices(self) -> bool:
        return bool(self.input_choices or self.output_choices)

    def to_automaton(self) -> InterfaceAutomaton:
        if self.kind != KIND_AUTOMATON:
            raise SpecError(f"cannot view a {self.kind!r} spec as an interface automaton")
        if self.has_choices:
            raise SpecError(
                "model has unresolved choice points; apply its refinement first"
            )
        return InterfaceAutomaton(
            self.inputs, self.outputs, self.states, self.initial, self.transitions
        )

    def to_mealy(self) -> MealyMachine:
        if self.kind != KIND_MEALY:
            raise SpecError(f"cannot view a {self.kind!r} spec as a Mealy machine")
        alph = ClosedAlphabet.make(self.inputs, self.outputs)
        index = {n: k for k, n in enumerate(self.states)}
        delta = np.full((len(self.states), alph.n_inputs), -1, dtype=np.int32)
        out = np.full((len(self.states), alph.n_inputs), -1, dtype=np.int32)
        for src, inp, o, dst in self.transitions:
            q, i = index[src], alph.input_index(inp)
            if delta[q, i] >= 0:
                raise SpecError(f"duplicate transition from {src!r} on {inp!r}")
            delta[q, i] = index[dst]
            out[q, i] = alph.output_index(o)
        if (delta < 0).any():
            q, i = np.argwhere(delta < 0)[0]
            raise SpecError(
                f"mealy spec not total: state {self.states[q]!r} lacks input "
                f"{alph.inputs[i].name!r}"
            )
        return MealyMachine(alph, index[self.initial], delta, out, self.states)


def _parse_timing(obj, where: str) -> TimingSpec:
    _require_keys(obj, {"t_min", "t_max", "delays"}, set(), where)
    delays = obj.get("delays", {})
    if not isinstance(delays, Mapping):
        raise SpecError(f"{where}: delays must be an object")
    return TimingSpec(
        t_min=int(obj.get("t_min", 1)),
        t_max=int(obj.get("t_max", 10)),
        delays=tuple((str(k), int(v)) for k, v in delays.items()),
    )


def _parse_refinement(obj, where: str) -> RefinementSpec:
    _require_keys(obj, {"splits", "merges"}, set(), where)
    splits = []
    for k, entry in enumerate(obj.get("splits", [])):
        w = f"{where}.splits[{k}]"
        _require_keys(entry, {"input", "variants"}, {"input", "variants"}, w)
        if not isinstance(entry["variants"], Mapping) or not entry["variants"]:
            raise SpecError(f"{w}: variants must be a non-empty object")
        splits.append(
            SplitSpec(
                input=entry["input"],
                variants=tuple((str(v), str(t)) for v, t in entry["variants"].items()),
            )
        )
    merges = []
    for k, entry in enumerate(obj.get("merges", [])):
        w = f"{where}.merges[{k}]"
        _require_keys(entry, {"outputs", "into"}, {"outputs", "into"}, w)
        merges.append(MergeSpec(outputs=_str_list(entry["outputs"], w), into=str(entry["into"])))
    return RefinementSpec(tuple(splits), tuple(merges))


def _parse_nondet(obj, where: str) -> tuple[tuple[InputChoice, ...], tuple[OutputChoice, ...]]:
    _require_keys(obj, {"input_choices", "output_choices"}, set(), where)
    ics = []
    for k, entry in enumerate(obj.get("input_choices", [])):
        w = f"{where}.input_choices[{k}]"
        _require_keys(entry, {"from", "input", "branches"}, {"from", "input", "branches"}, w)
        if not isinstance(entry["branches"], Mapping) or len(entry["branches"]) < 2:
            raise SpecError(f"{w}: branches must be an object with at least two entries")
        ics.append(
            InputChoice(
                source=entry["from"],
                input=entry["input"],
                branches=tuple((str(t), str(s)) for t, s in entry["branches"].items()),
            )
        )
    ocs = []
    for k, entry in enumerate(obj.get("output_choices", [])):
        w = f"{where}.output_choices[{k}]"
        _require_keys(entry, {"from", "branches"}, {"from", "branches"}, w)
        if not isinstance(entry["branches"], Mapping) or len(entry["branches"]) < 2:
            raise SpecError(f"{w}: branches must be an object with at least two entries")
        branches = []
        for tag, b in entry["branches"].items():
            wb = f"{w}.branches[{tag}]"
            _require_keys(b, {"output", "to"}, {"output", "to"}, wb)
            branches.append((str(tag), str(b["output"]), str(b["to"])))
        ocs.append(OutputChoice(source=entry["from"], branches=tuple(branches)))
    return tuple(ics), tuple(ocs)


_MODEL_KEYS = {
    "kind", "name", "notes", "inputs", "outputs", "states", "initial",
    "transitions", "timing", "nondet", "refinement", "request", "response",
}


def parse_model(doc, where: str = "model") -> ModelSpec:
    _require_keys(doc, _MODEL_KEYS, {"kind"}, where)
    kind = doc["kind"]
    name = doc.get("name")
    notes = doc.get("notes")
    timing = _parse_timing(doc["timing"], f"{where}.timing") if "timing" in doc else TimingSpec()
    refinement = (
        _parse_refinement(doc["refinement"], f"{where}.refinement")
        if "refinement" in doc
        else None
    )

    if kind == KIND_COUNTER:
        for bad in ("inputs", "outputs", "states", "initial", "transitions", "nondet"):
            if bad in doc:
                raise SpecError(f"{where}: {bad!r} not allowed for kind {kind!r}")
        _require_keys(doc, _MODEL_KEYS, {"kind", "request", "response"}, where)
        return ModelSpec(
            kind=kind,
            inputs=(doc["request"],),
            outputs=(doc["response"],),
            name=name,
            notes=notes,
            timing=timing,
            refinement=refinement,
            request=doc["request"],
            response=doc["response"],
        )

    if kind not in (KIND_AUTOMATON, KIND_MEALY):
        raise SpecError(f"{where}: unknown kind {kind!r}")
    _require_keys(doc, _MODEL_KEYS, {"kind", "inputs", "outputs", "states", "initial", "transitions"}, where)
    inputs = _str_list(doc["inputs"], f"{where}.inputs")
    outputs = _str_list(doc["outputs"], f"{where}.outputs")
    states = _str_list(doc["states"], f"{where}.states")
    for sym in inputs + outputs:
        if sym in RESERVED_NAMES:
            raise SpecError(f"{where}: {sym!r} is a reserved symbol name")
    initial = doc["initial"]
    if initial not in states:
        raise SpecError(f"{where}: initial state {initial!r} not declared")

    transitions: list[tuple] = []
    if kind == KIND_AUTOMATON:
        for k, t in enumerate(doc["transitions"]):
            w = f"{where}.transitions[{k}]"
            _require_keys(t, {"from", "symbol", "to"}, {"from", "symbol", "to"}, w)
            transitions.append((t["from"], t["symbol"], t["to"]))
    else:
        for k, t in enumerate(doc["transitions"]):
            w = f"{where}.transitions[{k}]"
            _require_keys(t, {"from", "input", "output", "to"}, {"from", "input", "output", "to"}, w)
            transitions.append((t["from"], t["input"], t["output"], t["to"]))

    input_choices: tuple[InputChoice, ...] = ()
    output_choices: tuple[OutputChoice, ...] = ()
    if "nondet" in doc:
        if kind != KIND_AUTOMATON:
            raise SpecError(f"{where}: nondet blocks require kind {KIND_AUTOMATON!r}")
        input_choices, output_choices = _parse_nondet(doc["nondet"], f"{where}.nondet")

    spec = ModelSpec(
        kind=kind,
        inputs=inputs,
        outputs=outputs,
        states=states,
        initial=initial,
        transitions=tuple(transitions),
        name=name,
        notes=notes,
        timing=timing,
        input_choices=input_choices,
        output_choices=output_choices,
        refinement=refinement,
    )
    _validate_model(spec, where)
    if kind == KIND_MEALY:
        try:
            spec.to_mealy()  # totality and symbol checks
        except (SpecError, ValueError) as e:
            raise SpecError(f"{where}: {e}") from None
    return spec


def _validate_model(spec: ModelSpec, where: str):
    state_set = set(spec.states)
    if len(state_set) != len(spec.states):
        raise SpecError(f"{where}: duplicate state names")
    symbols = set(spec.inputs) | set(spec.outputs)
    if len(symbols) != len(spec.inputs) + len(spec.outputs):
        raise SpecError(f"{where}: a symbol is declared as both input and output")
    if spec.kind == KIND_AUTOMATON:
        seen: set[tuple[str, str]] = set()
        for src, sym, dst in spec.transitions:
            if src not in state_set or dst not in state_set:
                raise SpecError(f"{where}: transition uses unknown state {src!r} or {dst!r}")
            if sym not in symbols:
                raise SpecError(f"{where}: transition symbol {sym!r} not declared")
            if (src, sym) in seen:
                raise SpecError(f"{where}: duplicate transition from {src!r} on {sym!r}")
            seen.add((src, sym))
        for ic in spec.input_choices:
            if ic.source not in state_set:
                raise SpecError(f"{where}: input choice at unknown state {ic.source!r}")
            if ic.input not in set(spec.inputs):
                raise SpecError(f"{where}: input choice on unknown input {ic.input!r}")
            if (ic.source, ic.input) in seen:
                raise SpecError(
                    f"{where}: state {ic.source!r} has both a transition and a choice on "
                    f"{ic.input!r}"
                )
            for _, target in ic.branches:
                if target not in state_set:
                    raise SpecError(f"{where}: choice branch targets unknown state {target!r}")
        for oc in spec.output_choices:
            if oc.source not in state_set:
                raise SpecError(f"{where}: output choice at unknown state {oc.source!r}")
            if any(src == oc.source and sym in set(spec.outputs) for src, sym, _ in spec.transitions):
                raise SpecError(
                    f"{where}: state {oc.source!r} has both an output transition and an "
                    "output choice"
                )
            for _, o, target in oc.branches:
                if o not in set(spec.outputs) or target not in state_set:
                    raise SpecError(f"{where}: output choice branch {o!r} -> {target!r} invalid")


def load_model(path) -> ModelSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise SpecError(f"{path}: not valid JSON ({e})") from None
    return parse_model(doc, where=str(path))


def apply_refinement(spec: ModelSpec, refinement: Optional[RefinementSpec] = None) -> ModelSpec:
    """Split callins and/or merge callbacks, resolving declared choice points.

    Splitting a callin replaces it by one variant symbol per environment
    branch; every choice on that callin must be covered tag-for-tag, and the
    choice becomes ordinary deterministic transitions.  Merging callbacks
    renames them to one symbol; output choices whose branches become
    identical collapse to a plain transition (a merge that does not actually
    reconcile behaviour leaves the choice in place, so lingering
    non-determinism stays observable).  With an empty refinement the spec is
    returned unchanged.
    """
    if refinement is None:
        refinement = spec.refinement
        if refinement is None:
            raise SpecError("model carries no refinement block and none was given")
    if spec.kind != KIND_AUTOMATON:
        raise SpecError("refinement applies to interface-automaton models")

    inputs = list(spec.inputs)
    outputs = list(spec.outputs)
    transitions = list(spec.transitions)
    input_choices = list(spec.input_choices)
    output_choices = list(spec.output_choices)

    for split in refinement.splits:
        if split.input not in inputs:
            raise SpecError(f"split source {split.input!r} is not a declared input")
        variant_names = [v for v, _ in split.variants]
        for v in variant_names:
            if v in inputs or v in outputs:
                raise SpecError(f"split variant {v!r} collides with a declared symbol")
        tags = [t for _, t in split.variants]
        if len(set(tags)) != len(tags) or len(set(variant_names)) != len(variant_names):
            raise SpecError(f"split on {split.input!r} has duplicate variants or tags")
        pos = inputs.index(split.input)
        inputs[pos:pos + 1] = variant_names

        new_transitions = []
        for src, sym, dst in transitions:
            if sym == split.input:
                new_transitions.extend((src, v, dst) for v in variant_names)
            else:
                new_transitions.append((src, sym, dst))
        transitions = new_transitions

        remaining = []
        for ic in input_choices:
            if ic.input != split.input:
                remaining.append(ic)
                continue
            branch_map = dict(ic.branches)
            if set(branch_map) != set(tags):
                raise SpecError(
                    f"split tags {sorted(tags)} do not match choice branches "
                    f"{sorted(branch_map)} at state {ic.source!r}"
                )
            for v, tag in split.variants:
                transitions.append((ic.source, v, branch_map[tag]))
        input_choices = remaining

    merge_of: dict[str, str] = {}
    for merge in refinement.merges:
        if len(merge.outputs) < 2:
            raise SpecError("a merge needs at least two callbacks")
        for o in merge.outputs:
            if o not in outputs:
                raise SpecError(f"merge member {o!r} is not a declared output")
            if o in merge_of:
                raise SpecError(f"output {o!r} appears in two merge classes")
            merge_of[o] = merge.into
        pos = outputs.index(merge.outputs[0])
        outputs = [o for o in outputs if o not in merge.outputs]
        outputs.insert(pos, merge.into)

    if merge_of:
        transitions = [(src, merge_of.get(sym, sym), dst) for src, sym, dst in transitions]
        merged_choices = []
        for oc in output_choices:
            branches = tuple(
                (tag, merge_of.get(o, o), dst) for tag, o, dst in oc.branches
            )
            if len({(o, dst) for _, o, dst in branches}) == 1:
                _, o, dst = branches[0]
                transitions.append((oc.source, o, dst))
            else:
                merged_choices.append(OutputChoice(oc.source, branches))
        output_choices = merged_choices

    refined = replace(
        spec,
        inputs=tuple(inputs),
        outputs=tuple(outputs),
        transitions=tuple(transitions),
        input_choices=tuple(input_choices),
        output_choices=tuple(output_choices),
        refinement=None,
    )
    _validate_model(refined, "refined model")
    return refined


# -- purpose specs -------------------------------------------------------


@dataclass(frozen=True)
class PurposeSpec:
    inputs: tuple[str, ...]
    states: tuple[str, ...]
    initial: str
    accepting: tuple[str, ...]
    transitions: tuple[tuple[str, str, str], ...]
    name: Optional[str] = None
    notes: Optional[str] = None


_PURPOSE_KEYS = {"kind", "name", "notes", "inputs", "states", "initial", "accepting", "transitions"}


def parse_purpose(doc, where: str = "purpose") -> PurposeSpec:
    _require_keys(doc, _PURPOSE_KEYS, {"kind", "inputs", "states", "initial", "accepting", "transitions"}, where)
    if doc["kind"] != "purpose":
        raise SpecError(f"{where}: kind must be 'purpose'")
    states = _str_list(doc["states"], f"{where}.states")
    accepting = _str_list(doc["accepting"], f"{where}.accepting")
    transitions = []
    for k, t in enumerate(doc["transitions"]):
        w = f"{where}.transitions[{k}]"
        _require_keys(t, {"from", "symbol", "to"}, {"from", "symbol", "to"}, w)
        transitions.append((t["from"], t["symbol"], t["to"]))
    spec = PurposeSpec(
        inputs=_str_list(doc["inputs"], f"{where}.inputs"),
        states=states,
        initial=doc["initial"],
        accepting=accepting,
        transitions=tuple(transitions),
        name=doc.get("name"),
        notes=doc.get("notes"),
    )
    if spec.initial not in states or not set(accepting) <= set(states):
        raise SpecError(f"{where}: initial/accepting states must be declared")
    if spec.initial not in accepting:
        raise SpecError(f"{where}: the initial state must be in-purpose")
    return spec


def load_purpose(path) -> PurposeSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise SpecError(f"{path}: not valid JSON ({e})") from None
    return parse_purpose(doc, where=str(path))


# -- serialisation -------------------------------------------------------


def automaton_to_doc(a: InterfaceAutomaton, name: Optional[str] = None) -> dict:
    doc = {
        "kind": KIND_AUTOMATON,
        "inputs": list(a.input_names()),
        "outputs": list(a.output_names()),
        "states": list(a.state_names),
        "initial": a.state_names[a.initial],
        "transitions": [
            {"from": t.source, "symbol": t.symbol, "to": t.target} for t in a.transitions
        ],
    }
    if name:
        doc = {"kind": doc.pop("kind"), "name": name, **doc}
    return doc


def mealy_to_doc(m: MealyMachine, name: Optional[str] = None) -> dict:
    alph = m.alphabet
    transitions = []
    for q in range(m.n_states):
        for i in range(alph.n_inputs):
            o, t = m.step(q, i)
            transitions.append(
                {
                    "from": m.state_names[q],
                    "input": alph.inputs[i].name,
                    "output": alph.outputs[o].name,
                    "to": m.state_names[t],
                }
            )
    doc = {
        "kind": KIND_MEALY,
        "inputs": [s.name for s in alph.user_inputs],
        "outputs": [s.name for s in alph.user_outputs],
        "states": list(m.state_names),
        "initial": m.state_names[m.initial],
        "transitions": transitions,
    }
    if name:
        doc = {"kind": doc.pop("kind"), "name": name, **doc}
    return doc


def save_json(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
