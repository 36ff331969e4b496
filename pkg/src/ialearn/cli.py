"""Command-line experiment runner.

Exit codes: 0 verified success, 1 usage or file errors, 2 detected
non-determinism, 3 query/equivalence budget exceeded, 4 learned machine
failed ground-truth verification.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .dot import export_dot
from .learner import BudgetExceededError
from .equivalence import InfeasibleEnumerationError
from .modelspec import SpecError, load_model, save_json
from .machines import MachineError
from .oracles import NondeterminismError
from .pipeline import (
    EXIT_BUDGET,
    EXIT_NONDET,
    EXIT_USAGE,
    EXIT_VERIFY,
    ORACLE_KINDS,
    VerificationError,
    run_compare,
    run_learn,
    write_outputs,
)
from .symbols import AlphabetError


@click.group()
def cli():
    """Learn callback typestates of black-box asynchronous components."""


@cli.command()
@click.option("--model", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--oracle", default="dist", type=click.Choice(ORACLE_KINDS), show_default=True)
@click.option("--bdist", type=int, default=None, help="Distinguisher bound (default 2).")
@click.option("--state-bound", "state_bound", type=int, default=None)
@click.option("--purpose", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--refine/--no-refine", default=False, help="Apply the model's refinement block.")
@click.option("--eq-cap", type=int, default=100, show_default=True)
@click.option("--out-dir", type=click.Path(file_okay=False), default=None)
@click.option("--metrics", "metrics_path", type=click.Path(dir_okay=False), default=None)
def learn(model, oracle, bdist, state_bound, purpose, seed, refine, eq_cap, out_dir, metrics_path):
    """Learn a model's typestate and write the result."""
    outcome = run_learn(
        model,
        oracle=oracle,
        b_dist=bdist,
        b_state=state_bound,
        purpose=purpose,
        seed=seed,
        refine=refine,
        max_eq=eq_cap,
    )
    doc = outcome.metrics.to_doc()
    click.echo(json.dumps(doc, indent=2))
    if out_dir:
        paths = write_outputs(outcome, out_dir)
        for kind, path in paths.items():
            click.echo(f"wrote {kind}: {path}", err=True)
    if metrics_path:
        save_json(doc, metrics_path)


@cli.command()
@click.option("--model", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--bdist", type=int, default=None)
@click.option("--state-bound", "state_bound", type=int, default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--refine/--no-refine", default=False)
@click.option("--word-budget", type=int, default=200_000, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
def compare(model, bdist, state_bound, seed, refine, word_budget, out_path):
    """Compare distinguisher-bound and state-bound oracle costs."""
    report = run_compare(
        model,
        b_dist=bdist,
        b_state=state_bound,
        seed=seed,
        refine=refine,
        word_budget=word_budget,
    )
    click.echo(report.render())
    if out_path:
        save_json(report.to_doc(), out_path)


@cli.command()
@click.option("--model", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--refine/--no-refine", default=False)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
def export(model, refine, out_path):
    """Render an interface-automaton model as Graphviz DOT."""
    from .modelspec import apply_refinement

    spec = load_model(model)
    if refine:
        spec = apply_refinement(spec)
    text = export_dot(spec.to_automaton(), title=spec.name or Path(model).stem)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
        click.echo(f"wrote {out_path}", err=True)
    else:
        click.echo(text, nl=False)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    except NondeterminismError as e:
        click.echo(str(e), err=True)
        click.echo("hint: refine the input or output alphabet (see --refine)", err=True)
        return EXIT_NONDET
    except (BudgetExceededError, InfeasibleEnumerationError) as e:
        click.echo(str(e), err=True)
        return EXIT_BUDGET
    except VerificationError as e:
        click.echo(str(e), err=True)
        return EXIT_VERIFY
    except (SpecError, MachineError, AlphabetError, OSError) as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
