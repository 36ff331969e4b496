"""Symbols, alphabets and words.

A component's interface has *callins* (inputs the client invokes) and
*callbacks* (outputs the component delivers asynchronously).  Learning runs
over the *closed* alphabet, which extends the user alphabet with reserved
symbols:

* ``wait``   -- input: observe the component instead of calling it;
* ``quiet``  -- output of ``wait`` when no callback is pending;
* ``lambda`` -- dummy output completing an accepted callin;
* ``err``    -- output of a callin invoked in a state that forbids it
  (absorbing: once seen, every later output is ``err``);
* ``oop``    -- output marking queries outside the active learning purpose
  (absorbing, like ``err``).

Reserved symbols always sit after the user symbols, in the fixed order
above; all enumeration orders in the package derive from alphabet order, so
runs are reproducible byte-for-byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

WAIT = "wait"
QUIET = "quiet"
LAMBDA = "lambda"
ERR = "err"
OOP = "oop"

RESERVED_NAMES = frozenset({WAIT, QUIET, LAMBDA, ERR, OOP})

_TOKEN_RE = re.compile(r"^\S+$")

Word = tuple[int, ...]
"""A word over an alphabet's inputs, as a tuple of input indices."""


class AlphabetError(ValueError):
    """Bad symbol name or alphabet composition."""


@dataclass(frozen=True)
class Symbol:
    """A named interface symbol.

    kind is ``input`` for callins, ``output`` for callbacks and ``reserved``
    for the built-in closure symbols.
    """

    name: str
    kind: str

    def __post_init__(self):
        if self.kind not in ("input", "output", "reserved"):
            raise AlphabetError(f"bad symbol kind {self.kind!r}")
        if not _TOKEN_RE.match(self.name):
            raise AlphabetError(f"symbol name must be a non-empty token, got {self.name!r}")
        if self.kind != "reserved" and self.name in RESERVED_NAMES:
            raise AlphabetError(f"{self.name!r} is reserved and cannot be a user symbol")


@dataclass(frozen=True)
class ClosedAlphabet:
    """User alphabet plus the reserved closure symbols.

    ``inputs`` is the user callins followed by ``wait``; ``outputs`` is the
    user callbacks followed by ``quiet``, ``lambda``, ``err``, ``oop``.
    Symbol order is declaration order with reserved symbols last, and is the
    single source of truth for every enumeration in the package.
    """

    inputs: tuple[Symbol, ...]
    outputs: tuple[Symbol, ...]
    _input_index: dict[str, int] = field(repr=False, compare=False, default_factory=dict)
    _output_index: dict[str, int] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        seen: set[str] = set()
        for sym in self.inputs + self.outputs:
            if sym.name in seen:
                raise AlphabetError(f"duplicate symbol name {sym.name!r}")
            seen.add(sym.name)
        if [s.name for s in self.inputs if s.kind == "reserved"] != [WAIT]:
            raise AlphabetError("closed inputs must contain exactly the reserved input 'wait'")
        if [s.name for s in self.outputs if s.kind == "reserved"] != [QUIET, LAMBDA, ERR, OOP]:
            raise AlphabetError(
                "closed outputs must end with the reserved outputs quiet, lambda, err, oop"
            )
        if self.inputs[-1].name != WAIT:
            raise AlphabetError("'wait' must be the last input")
        self._input_index.update({s.name: k for k, s in enumerate(self.inputs)})
        self._output_index.update({s.name: k for k, s in enumerate(self.outputs)})

    @classmethod
    def make(cls, input_names: Sequence[str], output_names: Sequence[str]) -> "ClosedAlphabet":
        """Build a closed alphabet from user callin/callback names."""
        inputs = tuple(Symbol(n, "input") for n in input_names) + (Symbol(WAIT, "reserved"),)
        outputs = tuple(Symbol(n, "output") for n in output_names) + tuple(
            Symbol(n, "reserved") for n in (QUIET, LAMBDA, ERR, OOP)
        )
        return cls(inputs, outputs)

    # -- index lookups ---------------------------------------------------

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    @property
    def wait(self) -> int:
        return len(self.inputs) - 1

    @property
    def quiet(self) -> int:
        return len(self.outputs) - 4

    @property
    def lam(self) -> int:
        return len(self.outputs) - 3

    @property
    def err(self) -> int:
        return len(self.outputs) - 2

    @property
    def oop(self) -> int:
        return len(self.outputs) - 1

    @property
    def user_inputs(self) -> tuple[Symbol, ...]:
        return self.inputs[:-1]

    @property
    def user_outputs(self) -> tuple[Symbol, ...]:
        return self.outputs[:-4]

    def input_index(self, name: str) -> int:
        try:
            return self._input_index[name]
        except KeyError:
            raise AlphabetError(f"unknown input symbol {name!r}") from None

    def output_index(self, name: str) -> int:
        try:
            return self._output_index[name]
        except KeyError:
            raise AlphabetError(f"unknown output symbol {name!r}") from None

    def encode_inputs(self, names: Iterable[str]) -> Word:
        return tuple(self.input_index(n) for n in names)

    def decode_inputs(self, word: Iterable[int]) -> tuple[str, ...]:
        return tuple(self.inputs[i].name for i in word)

    def decode_outputs(self, word: Iterable[int]) -> tuple[str, ...]:
        return tuple(self.outputs[o].name for o in word)


def zip_trace(inputs: Sequence[str], outputs: Sequence[str]) -> tuple[str, ...]:
    """Interleave equal-length input and output sequences into a trace."""
    if len(inputs) != len(outputs):
        raise ValueError("trace needs one output per input")
    trace: list[str] = []
    for i, o in zip(inputs, outputs):
        trace.append(i)
        trace.append(o)
    return tuple(trace)
