"""Command line entry point: ``branchkit <mode> --config FILE --out DIR``.

Exit status 0 on success, 1 on a validation or admissibility failure and 2 on a
numerical failure (a ``diagnostics.json`` is written to the output directory).
"""

import argparse
import sys
import traceback
from pathlib import Path

import numpy as np

from .. import __version__
from ..bifurcate import (BifurcationProblem, analyze, gate_failure_report, pitchfork_analysis)
from ..bifurcate.problem import Diagnostics
from ..bifurcate.report import report_to_dict, write_branch_csv, write_json, write_rows
from ..elliptic import Grid2D, assemble_laplacian, dirichlet_eigenpairs
from ..errors import BranchkitError, ConfigError, GateFailure, NeutralityError
from ..vm import (VMParameters, boundary_potentials, maxwellian_profile, neutral_density_scales,
                  profile_from_config, species_set)
from .config import MODES, load_config
from .plots import bifurcation_svg, heatmap_svg, write_svg


def build_grid(config):
    g = config.grid
    return Grid2D(g.lx, g.ly, g.nx, g.ny)


def build_vm_inputs(config):
    """Species, profiles and parameters from the config; densities rescaled to neutrality."""
    raw = [(s.q, s.m, s.alpha, s.d) for s in config.species]
    names = [s.name or f"s{i}" for i, s in enumerate(config.species)]
    species = species_set(raw, names)
    pr = config.params
    params = VMParameters.from_species(species, pr.eps_rel, pr.a, pr.b)
    specs = config.profiles or tuple({"kind": "maxwellian"} for _ in species)
    profiles = []
    for sp, spec in zip(species, specs):
        if spec["kind"] == "maxwellian":
            profiles.append(maxwellian_profile(sp, pr.a, pr.b, float(spec.get("density", 1.0))))
        else:
            profiles.append(profile_from_config(spec, base_dir=config.base_dir))
    # fewer than three species is rejected by the N >= 3 gate, which names the reason
    if pr.neutralize and len(species) >= 3:
        phi0, psi0 = boundary_potentials(pr.u01, pr.u02, params)
        scales = neutral_density_scales(species, profiles, phi0, psi0, params)
        profiles = [p.scaled(f) for p, f in zip(profiles, scales)]
    return species, profiles, params


def build_vm_problem(config, diagnostics=None):
    species, profiles, params = build_vm_inputs(config)
    pr = config.params
    return BifurcationProblem(build_grid(config), species, profiles, params, u01=pr.u01,
                              u02=pr.u02, eigen_index=config.eigen_index, beta_const=pr.beta,
                              diagnostics=diagnostics)


def run_spectrum(config, out):
    grid = build_grid(config)
    pairs = dirichlet_eigenpairs(assemble_laplacian(grid), config.eigen_count)
    rows = [(i, float(p.mu), p.multiplicity_group) for i, p in enumerate(pairs)]
    path = write_rows(out / "eigenvalues.csv", ["index", "eigenvalue", "group"], rows)
    return {"eigenvalues": path}


def _attach_run_info(data, config):
    data["run"] = {"mode": config.mode, "model": config.model, "seed": config.seed,
                   "grid": [config.grid.nx, config.grid.ny], "delta": config.path.delta,
                   "version": __version__}
    return data


def _emit_branch_artifacts(config, out, report, problem=None):
    files = {}
    formats = set(config.output.formats)
    if "csv" in formats:
        files["branches"] = write_branch_csv(out / "branches.csv", report.branches)
    if "svg" not in formats:
        return files
    lam0 = float(report.lambda0)
    files["diagram"] = write_svg(out / "bifurcation.svg",
                                 bifurcation_svg(lam0, report.branches, report.verdicts))
    points = [p for b in report.branches for p in b.points]
    if not points:
        return files
    best = max(points, key=lambda p: p.amplitude)
    grid = build_grid(config)
    if problem is not None:
        phi, psi = problem.padded(best.x)
        title = f"at lambda={best.lam:.6g}"
        files["phi"] = write_svg(out / "phi.svg", heatmap_svg(phi, f"phi {title}"))
        files["psi"] = write_svg(out / "psi.svg", heatmap_svg(psi, f"psi {title}"))
    else:
        u = grid.pad(best.x)
        files["phi"] = write_svg(out / "phi.svg", heatmap_svg(u, f"u at lambda={best.lam:.6g}"))
    return files


def run_analysis(config, out):
    branch = config.mode == "branch"
    delta, samples = config.path.delta, config.path.samples
    steps, step = config.continuation.steps, config.continuation.step_size
    problem = None
    if config.model == "pitchfork":
        report = pitchfork_analysis(build_grid(config), delta, samples, branch=branch,
                                    steps=steps, step_size=step)
    else:
        diag = Diagnostics()
        try:
            problem = build_vm_problem(config, diag)
        except GateFailure as exc:
            report = gate_failure_report(exc, diag)
            if "json" in config.output.formats:
                write_json(out / "report.json", _attach_run_info(report_to_dict(report), config))
            raise
        report = analyze(problem, delta, samples, branch=branch, steps=steps, step_size=step)
    files = {}
    if "json" in config.output.formats:
        files["report"] = write_json(out / "report.json",
                                     _attach_run_info(report_to_dict(report), config))
    if branch:
        files.update(_emit_branch_artifacts(config, out, report, problem))
    return files


def run(config, out):
    """Execute one configured run; returns a mapping of artifact names to paths."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    if config.mode == "spectrum":
        return run_spectrum(config, out)
    return run_analysis(config, out)


def parser():
    p = argparse.ArgumentParser(prog="branchkit", description=__doc__.splitlines()[0])
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", required=True, help="YAML run configuration")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--grid", nargs=2, type=int, metavar=("NX", "NY"))
    p.add_argument("--delta", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def _override(config, args):
    changes = {"mode": args.mode}
    if args.grid:
        changes["grid.nx"], changes["grid.ny"] = args.grid
    if args.delta is not None:
        changes["path.delta"] = args.delta
    if args.seed is not None:
        changes["seed"] = args.seed
    return config.replace(**changes)


def main(argv=None):
    args = parser().parse_args(argv)
    out = Path(args.out)
    try:
        config = _override(load_config(args.config), args)
    except ConfigError as exc:
        print(f"branchkit: invalid configuration: {exc}", file=sys.stderr)
        return 1
    try:
        files = run(config, out)
    except ConfigError as exc:
        print(f"branchkit: invalid configuration: {exc}", file=sys.stderr)
        return 1
    except GateFailure as exc:
        print(f"branchkit: {exc}", file=sys.stderr)
        return 1
    except (NeutralityError, ValueError) as exc:
        print(f"branchkit: invalid physical input: {exc}", file=sys.stderr)
        return 1
    except (BranchkitError, np.linalg.LinAlgError, RuntimeError, ArithmeticError) as exc:
        write_json(out / "diagnostics.json", {
            "error": type(exc).__name__, "message": str(exc),
            "traceback": traceback.format_exception_only(type(exc), exc),
            "mode": config.mode, "model": config.model})
        print(f"branchkit: solver failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 2
    for name, path in sorted(files.items()):
        print(f"{name}: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
