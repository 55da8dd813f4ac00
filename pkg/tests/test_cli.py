import csv
import importlib
import json
import re
import subprocess
import sys
from pathlib import Path
from types import SimpleNamespace

import numpy as np
import pytest

from branchkit.bifurcate import Branch, BranchPoint
from branchkit.cli import dump_config, load_config, main, parse_config
from branchkit.cli.plots import bifurcation_svg, heatmap_svg, nice_ticks
from branchkit.errors import ConfigError, NoConvergence

# the package re-exports main(), which shadows the submodule attribute
cli_main = importlib.import_module("branchkit.cli.main")
CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _polylines(svg):
    return re.findall(r'<polyline class="branch"[^>]*points="([^"]*)"', svg)


# --- configuration -------------------------------------------------------------------

@pytest.mark.parametrize("name", ["three_species", "pitchfork", "spectrum", "two_species"])
def test_config_round_trip(tmp_path, name):
    cfg = load_config(CONFIGS / f"{name}.yaml")
    path = tmp_path / "again.yaml"
    dump_config(cfg, path)
    assert load_config(path) == cfg


@pytest.mark.parametrize("patch, key", [
    ({"mode": "walk"}, "mode"),
    ({"grid": {"lx": 1.0, "ly": 1.0, "nx": 4, "ny": 4}}, "grid"),
    ({"path": {"delta": 0.7}}, "path.delta"),
    ({"path": {"samples": 2}}, "path.samples"),
    ({"bogus": 1}, "unknown"),
    ({"grid": {"lx": 1.0, "ly": 1.0, "nx": "many", "ny": 9}}, "nx"),
    ({"output": {"formats": ["png"]}}, "formats"),
])
def test_validation_errors_name_the_key(patch, key):
    base = {"mode": "detect", "model": "pitchfork"}
    with pytest.raises(ConfigError, match=key):
        parse_config({**base, **patch})


def test_vm_detect_requires_species():
    with pytest.raises(ConfigError, match="species"):
        parse_config({"mode": "detect"})


def test_overrides_revalidate():
    cfg = load_config(CONFIGS / "pitchfork.yaml")
    new = cfg.replace(**{"grid.nx": 15, "grid.ny": 15, "path.delta": 0.02})
    assert (new.grid.nx, new.grid.ny, new.path.delta) == (15, 15, 0.02)
    with pytest.raises(ConfigError):
        cfg.replace(**{"path.delta": 0.6})


# --- plots --------------------------------------------------------------------------

def _branch(n, label="b"):
    pts = [BranchPoint(10.0 - 0.01 * k, 0.1 * k, 0.1 * k, 0.0, np.zeros(1)) for k in range(n)]
    return Branch(pts, 10.0, "subcritical", label)


def test_ticks_follow_one_two_five():
    assert nice_ticks(0.0, 1.0) == pytest.approx([0.0, 0.2, 0.4, 0.6, 0.8, 1.0])
    steps = np.diff(nice_ticks(-3.0, 47.0))
    mant = steps[0] / 10 ** np.floor(np.log10(steps[0]))
    assert np.allclose(steps, steps[0]) and round(mant, 9) in (1.0, 2.0, 5.0)


def test_empty_diagram_shows_trivial_branch_only():
    svg = bifurcation_svg(19.7, [])
    assert svg.count('class="trivial"') == 1
    assert not _polylines(svg)


def test_polyline_has_one_vertex_per_point():
    (pts,) = _polylines(bifurcation_svg(10.0, [_branch(20)]))
    assert len(pts.split()) == 20


def test_legend_lists_every_verdict():
    verdicts = [SimpleNamespace(kind="bifurcation_by_sign"),
                SimpleNamespace(kind="bifurcation_by_morse_jump")]
    svg = bifurcation_svg(10.0, [_branch(3)], verdicts)
    listed = re.findall(r'class="verdict"[^>]*>verdict: ([a-z_]+)<', svg)
    assert listed == ["bifurcation_by_sign", "bifurcation_by_morse_jump"]


def test_plots_are_deterministic():
    a = bifurcation_svg(10.0, [_branch(5), _branch(4, "c")])
    assert a == bifurcation_svg(10.0, [_branch(5), _branch(4, "c")])
    assert 'width="640" height="480"' in a
    field = np.outer(np.sin(np.linspace(0, 3, 6)), np.cos(np.linspace(0, 3, 5)))
    hm = heatmap_svg(field)
    assert hm == heatmap_svg(field) and hm.count("<rect x=") == 30


# --- end to end ---------------------------------------------------------------------

def test_spectrum_mode_writes_eigenvalue_table(tmp_path):
    assert main(["spectrum", "--config", str(CONFIGS / "spectrum.yaml"),
                 "--out", str(tmp_path)]) == 0
    with (tmp_path / "eigenvalues.csv").open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["index", "eigenvalue", "group"]
    assert float(rows[0]["eigenvalue"]) == pytest.approx(2 * np.pi**2, rel=1e-3)
    assert rows[1]["group"] == rows[2]["group"] != rows[0]["group"]


def test_two_species_exit_one(tmp_path, capsys):
    code = main(["detect", "--config", str(CONFIGS / "two_species.yaml"),
                 "--out", str(tmp_path)])
    assert code == 1
    assert "N>=3" in capsys.readouterr().err
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["diagnostics"]["failed"] == "N>=3"


def test_bad_config_exit_one(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("mode: detect\npath: {delta: 2.0}\nmodel: pitchfork\n")
    assert main(["detect", "--config", str(bad), "--out", str(tmp_path / "o")]) == 1


def test_solver_failure_exit_two(tmp_path, monkeypatch):
    def broken(config, out):
        raise NoConvergence("Newton stalled")

    monkeypatch.setattr(cli_main, "run", broken)
    code = main(["detect", "--config", str(CONFIGS / "pitchfork.yaml"), "--out", str(tmp_path)])
    assert code == 2
    diag = json.loads((tmp_path / "diagnostics.json").read_text())
    assert diag["error"] == "NoConvergence" and "stalled" in diag["message"]


def _pitchfork_run(out):
    return main(["branch", "--config", str(CONFIGS / "pitchfork.yaml"), "--out", str(out),
                 "--grid", "11", "11", "--delta", "0.02", "--seed", "7"])


@pytest.fixture(scope="module")
def pitchfork_runs(tmp_path_factory):
    outs = [tmp_path_factory.mktemp(f"run{i}") for i in range(2)]
    codes = [_pitchfork_run(o) for o in outs]
    return codes, outs


def test_pitchfork_branch_artifacts(pitchfork_runs):
    codes, (out, _) = pitchfork_runs
    assert codes == [0, 0]
    svg = (out / "bifurcation.svg").read_text()
    arcs = _polylines(svg)
    assert len(arcs) == 2
    # the arms are mirror images in the signed amplitude
    ys = [[float(p.split(",")[1]) for p in arc.split()] for arc in arcs]
    y0 = float(re.search(r'class="trivial"[^>]*y1="([^"]+)"', svg).group(1))
    assert np.allclose(np.array(ys[0]) - y0, -(np.array(ys[1]) - y0), atol=0.02)
    report = json.loads((out / "report.json").read_text())
    assert report["run"]["grid"] == [11, 11] and report["run"]["seed"] == 7
    assert (out / "phi.svg").exists()


def test_reruns_are_byte_identical(pitchfork_runs):
    _, (a, b) = pitchfork_runs
    for name in ("report.json", "branches.csv", "bifurcation.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    first = (a / "branches.csv").read_text().splitlines()[1].split(",")
    assert len(first[0].replace("-", "").replace(".", "").lstrip("0")) >= 15


def test_console_script_help():
    out = subprocess.run([sys.executable, "-m", "branchkit.cli.main", "--help"],
                         capture_output=True, text=True, check=True).stdout
    for flag in ("--config", "--out", "--grid", "--delta", "--seed"):
        assert flag in out
