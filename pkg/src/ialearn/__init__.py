"""ialearn: active learning of callback typestates from black-box
asynchronous components, with machine-checkable results."""

from importlib import resources as _resources

from ._kernels import BACKEND as KERNEL_BACKEND
from .closure import AutomatonAsyncOracle, ClosureResult, closure, closure_oracle
from .equivalence import (
    Bounds,
    InfeasibleEnumerationError,
    check,
    dist_equivalence,
    perfect_equivalence,
    process_equivalence,
    state_bound_equivalence,
)
from .learner import (
    BudgetExceededError,
    Counterexample,
    LstarResult,
    ObservationTable,
    analyze_counterexample,
    lstar,
)
from .machines import (
    InterfaceAutomaton,
    MachineError,
    MealyMachine,
    OutputNondeterminismError,
    build_mealy,
    mealy_output,
)
from .modelspec import (
    ModelSpec,
    RefinementSpec,
    SpecError,
    apply_refinement,
    load_model,
    load_purpose,
    parse_model,
    parse_purpose,
)
from .ops import (
    GenerationError,
    NotMinimalError,
    canonical_form,
    distinguisher_bound,
    isomorphic,
    mealy_to_interface_automaton,
    minimize,
    random_minimal_mealy,
    traces_equal,
)
from .oracles import (
    CachingOracle,
    NonDeterminismReport,
    NondeterminismError,
    QueryCache,
    machine_oracle,
)
from .pipeline import (
    LearnOutcome,
    Metrics,
    VerificationError,
    run_compare,
    run_learn,
    write_outputs,
)
from .purpose import LearningPurpose, bind_purpose, purpose_filter
from .sul import Simulator, Sul
from .symbols import ERR, LAMBDA, OOP, QUIET, WAIT, ClosedAlphabet, Symbol

__version__ = "0.1.0"


def bundled_model_path(name: str):
    """Filesystem path of a bundled benchmark model (e.g. 'mediaplayer')."""
    return _resources.files("ialearn.models") / f"{name}.json"
