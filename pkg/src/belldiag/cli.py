"""Command-line interface.

Subcommands: verify, sample-stats, slice-scan, classify, ecc-demo.  All
commands exit 0 on success and nonzero with a JSON error object on stderr
otherwise.
"""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from .ecc import ErrorDistribution, run_demo
from .harness import (
    DEFAULT_GRID,
    DEFAULT_SEED,
    DEFAULT_WINDOW,
    ExperimentConfig,
    run_sample_stats,
    run_slice_scan,
    run_verify,
    scan_to_csv,
    write_stats_json,
)
from .qmat import DensityMatrix
from .rng import substream
from .states import BellDiagonalState, phase_matrix_for_system
from .weyl import PhaseMatrix, gen_bell_basis, standard_basis


def _fail(message: str, kind: str = "error", code: int = 1):
    json.dump({"error": kind, "message": message}, sys.stderr)
    sys.stderr.write("\n")
    sys.exit(code)


def _parse_alpha_mode(text: str) -> tuple[str, float]:
    """Parse standard | full | small:EPS."""
    if text == "standard" or text == "full":
        return text, 0.0
    if text.startswith("small:"):
        try:
            eps = float(text.split(":", 1)[1])
        except ValueError:
            raise click.BadParameter(f"bad small-mode epsilon in {text!r}")
        if eps <= 0:
            raise click.BadParameter("small-mode epsilon must be > 0")
        return "small", eps
    raise click.BadParameter(f"alpha-mode must be standard, full or small:EPS, got {text!r}")


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise click.BadParameter(f"range must be LO:HI, got {text!r}")
    if not hi > lo:
        raise click.BadParameter(f"range must satisfy LO < HI, got {text!r}")
    return lo, hi


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        nx, ny = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise click.BadParameter(f"grid must be NXxNY, got {text!r}")
    if nx < 2 or ny < 2:
        raise click.BadParameter("grid must be at least 2x2")
    return nx, ny


def _load_phase_matrix(path: str) -> PhaseMatrix:
    with open(path) as fh:
        doc = json.load(fh)
    d = int(doc["d"])
    phases = np.asarray(doc["phases"], dtype=float)
    if phases.shape != (d, d):
        raise ValueError(f"phases must be {d}x{d}, got {phases.shape}")
    return PhaseMatrix.from_angles(phases)


def _scan_basis(alpha_mode: str, eps: float, alpha_file: str | None, seed: int):
    if alpha_file is not None:
        return gen_bell_basis(_load_phase_matrix(alpha_file))
    if alpha_mode == "standard":
        return standard_basis(3)
    return gen_bell_basis(phase_matrix_for_system(seed, 0, 3, mode=alpha_mode, eps=eps))


@click.group()
def main():
    """Bell-diagonal qudit toolkit: bases, channels, criteria, experiments."""


@main.command()
@click.option("--dims", default="2,3,4,5", show_default=True, help="Comma-separated dimensions.")
@click.option("--trials", default=100, show_default=True, type=int)
@click.option("--seed", default=DEFAULT_SEED, show_default=True, type=int)
def verify(dims, trials, seed):
    """Run the algebraic invariant suite and print a JSON report."""
    try:
        dim_list = tuple(int(x) for x in dims.split(","))
        report = run_verify(dims=dim_list, trials=trials, seed=seed)
    except Exception as exc:  # pragma: no cover - defensive
        _fail(str(exc), type(exc).__name__)
    click.echo(json.dumps(report, indent=2))
    if not report["all_passed"]:
        _fail("one or more invariant checks failed", "verification-failure")


@main.command("sample-stats")
@click.option("--dim", default=3, show_default=True, type=int)
@click.option("--states", default=10000, show_default=True, type=int)
@click.option("--systems", default=200, show_default=True, type=int)
@click.option("--alpha-mode", default="full", show_default=True)
@click.option("--seed", default=DEFAULT_SEED, show_default=True, type=int)
@click.option("--out", required=True, type=click.Path(dir_okay=False, writable=True))
@click.option("--paper-scale", is_flag=True, help="Use 1000 systems (reported-table scale).")
@click.option("--jobs", default=0, show_default=True, type=int, help="Worker processes (0 = auto).")
def sample_stats(dim, states, systems, alpha_mode, seed, out, paper_scale, jobs):
    """Replay one coefficient sample set across basis systems; write stats JSON."""
    try:
        mode, eps = _parse_alpha_mode(alpha_mode)
        cfg = ExperimentConfig(
            d=dim,
            n_states=states,
            n_systems=1000 if paper_scale else systems,
            alpha_mode=mode,
            eps=eps,
            seed=seed,
            parallelism=jobs,
        )
        result = run_sample_stats(cfg)
        write_stats_json(result, out)
    except click.ClickException:
        raise
    except Exception as exc:
        _fail(str(exc), type(exc).__name__)
    click.echo(f"wrote {out}")


@main.command("slice-scan")
@click.option("--alpha-mode", default="standard", show_default=True)
@click.option("--alpha-file", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--a-range", default=f"{DEFAULT_WINDOW[0][0]}:{DEFAULT_WINDOW[0][1]}", show_default=True)
@click.option("--b-range", default=f"{DEFAULT_WINDOW[1][0]}:{DEFAULT_WINDOW[1][1]}", show_default=True)
@click.option("--grid", default=f"{DEFAULT_GRID[0]}x{DEFAULT_GRID[1]}", show_default=True)
@click.option("--seed", default=DEFAULT_SEED, show_default=True, type=int)
@click.option("--out", required=True, type=click.Path(dir_okay=False, writable=True))
def slice_scan(alpha_mode, alpha_file, a_range, b_range, grid, seed, out):
    """Classify the two-parameter slice family on a grid; write scan CSV."""
    try:
        mode, eps = _parse_alpha_mode(alpha_mode)
        basis = _scan_basis(mode, eps, alpha_file, seed)
        cells = run_slice_scan(basis, (_parse_range(a_range), _parse_range(b_range)), _parse_grid(grid))
        scan_to_csv(cells, out)
    except click.ClickException:
        raise
    except Exception as exc:
        _fail(str(exc), type(exc).__name__)
    click.echo(f"wrote {out}")


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
def classify(in_path):
    """Classify one state (coefficient or density form) and print the record."""
    from .criteria import classify as classify_state, e2_realignment, e3_quasipure_generic, is_ppt

    try:
        with open(in_path) as fh:
            doc = json.load(fh)
        if "c" in doc:
            d = int(doc["d"])
            alpha = doc.get("alpha", "standard")
            if alpha == "standard":
                basis = standard_basis(d)
            else:
                basis = gen_bell_basis(PhaseMatrix.from_angles(np.asarray(alpha["phases"], dtype=float)))
            state = BellDiagonalState(d=d, c=np.asarray(doc["c"], dtype=float), basis_ref=basis.key)
            record = classify_state(state, basis).as_dict()
        elif "rho" in doc:
            d1, d2 = int(doc["d1"]), int(doc["d2"])
            raw = np.asarray(doc["rho"], dtype=float)
            if raw.ndim != 3 or raw.shape[2] != 2:
                raise ValueError("rho entries must be [re, im] pairs")
            rho = DensityMatrix.make(raw[..., 0] + 1j * raw[..., 1], (d1, d2))
            ppt, min_eig = is_ppt(rho)
            e2, rsum = e2_realignment(rho)
            if d1 == d2:
                e3, c_qp = e3_quasipure_generic(rho)
            else:
                e3, c_qp = False, 0.0
            record = {
                "ppt": ppt,
                "e2": e2,
                "e3": e3,
                "min_pt_eig": min_eig,
                "realign_sum": rsum,
                "c_qp": c_qp,
            }
        else:
            raise ValueError('state JSON needs either "c" or "rho"')
    except Exception as exc:
        _fail(str(exc), type(exc).__name__)
    click.echo(json.dumps(record))


@main.command("ecc-demo")
@click.option("--dim", required=True, type=int)
@click.option("--k", default=None, type=int, help="Fixed phase error index.")
@click.option("--l", default=None, type=int, help="Fixed shift error index.")
@click.option("--rounds", default=1000, show_default=True, type=int)
@click.option("--seed", default=DEFAULT_SEED, show_default=True, type=int)
def ecc_demo(dim, k, l, rounds, seed):
    """Identify-and-correct demo; prints a JSON success report."""
    try:
        if (k is None) != (l is None):
            raise ValueError("--k and --l must be given together")
        if k is not None:
            p = ErrorDistribution.point(dim, k, l)
            rounds = max(1, min(rounds, 10))
        else:
            rng = substream(seed, "ecc-p")
            x = rng.standard_exponential((dim, dim))
            p = ErrorDistribution(d=dim, p=x / x.sum())
        report = run_demo(dim, p, rounds, substream(seed, "ecc-demo"))
    except Exception as exc:
        _fail(str(exc), type(exc).__name__)
    click.echo(json.dumps(report))


if __name__ == "__main__":
    main()
