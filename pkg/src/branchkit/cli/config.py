"""Run configuration: a YAML tree validated into a frozen RunConfig.

Example::

    mode: branch
    model: vm                  # vm | pitchfork
    grid: {lx: 1.0, ly: 1.0, nx: 24, ny: 24}
    species:
      - {name: e, q: -1, m: 1, alpha: 1, d: [0, 0, 1]}
      - {name: p1, q: 1, m: 1, alpha: 1, d: [0, 0, 0.5]}
      - {name: p2, q: 1, m: 1, alpha: 1, d: [0, 0, 2]}
    profiles:                  # optional; one entry per species, maxwellian by default
      - {kind: maxwellian}
    params: {a: 1, b: 1, eps_rel: 0.1, u01: 0, u02: 0, beta: 0, neutralize: true}
    eigen_index: 0
    path: {delta: 0.05, samples: 11}
    continuation: {steps: 10, step_size: 0.01}
    output: {directory: out, formats: [json, csv, svg]}

All physical inputs are in Gaussian model units.
"""

import copy
from dataclasses import asdict, dataclass, field
from pathlib import Path

import yaml

from ..errors import ConfigError

MODES = ("spectrum", "detect", "branch")
MODELS = ("vm", "pitchfork")
PROFILE_KINDS = ("maxwellian", "exponential", "polynomial", "tabulated-with-derivatives")
FORMATS = ("json", "csv", "svg")


@dataclass(frozen=True)
class GridConfig:
    lx: float = 1.0
    ly: float = 1.0
    nx: int = 24
    ny: int = 24


@dataclass(frozen=True)
class SpeciesConfig:
    q: float
    m: float
    alpha: float
    d: tuple
    name: str = ""


@dataclass(frozen=True)
class ParamsConfig:
    a: float = 1.0
    b: float = 1.0
    eps_rel: float = 0.1
    u01: float = 0.0
    u02: float = 0.0
    beta: float = 0.0
    neutralize: bool = True


@dataclass(frozen=True)
class PathConfig:
    delta: float = 0.05
    samples: int = 11


@dataclass(frozen=True)
class ContinuationConfig:
    steps: int = 10
    step_size: float = 0.01


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "out"
    formats: tuple = FORMATS


@dataclass(frozen=True)
class RunConfig:
    mode: str
    model: str = "vm"
    grid: GridConfig = field(default_factory=GridConfig)
    species: tuple = ()
    profiles: tuple = ()
    params: ParamsConfig = field(default_factory=ParamsConfig)
    eigen_index: int = 0
    eigen_count: int = 8
    path: PathConfig = field(default_factory=PathConfig)
    continuation: ContinuationConfig = field(default_factory=ContinuationConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    seed: int = 0
    base_dir: str = field(default=".", compare=False)

    def to_dict(self):
        data = asdict(self)
        data.pop("base_dir")
        data["species"] = [dict(s, d=list(s["d"])) for s in data["species"]]
        data["profiles"] = [dict(p) for p in self.profiles]
        data["output"]["formats"] = list(data["output"]["formats"])
        return data

    def replace(self, **changes):
        data = self.to_dict()
        for key, val in changes.items():
            head, _, tail = key.partition(".")
            if tail:
                data[head][tail] = val
            else:
                data[head] = val
        return parse_config(data, self.base_dir)


def _section(data, name, cls, ctx):
    raw = data.get(name, {}) or {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{ctx}{name}: expected a mapping")
    known = {f for f in cls.__dataclass_fields__}
    extra = set(raw) - known
    if extra:
        raise ConfigError(f"{ctx}{name}: unknown keys {sorted(extra)}")
    try:
        return cls(**{k: _coerce(cls, k, v, f"{ctx}{name}.") for k, v in raw.items()})
    except TypeError as exc:
        raise ConfigError(f"{ctx}{name}: {exc}") from exc


def _coerce(cls, key, value, ctx):
    kind = cls.__dataclass_fields__[key].type
    try:
        if kind is int or kind == "int":
            if isinstance(value, bool) or float(value) != int(value):
                raise ValueError
            return int(value)
        if kind is float or kind == "float":
            if isinstance(value, bool):
                raise ValueError
            return float(value)
        if kind is bool or kind == "bool":
            if not isinstance(value, bool):
                raise ValueError
            return value
        if kind is str or kind == "str":
            return str(value)
        if kind is tuple or kind == "tuple":
            return tuple(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{ctx}{key}: cannot read {value!r} as {kind}") from exc
    return value


def _species(raw, ctx="species"):
    if not isinstance(raw, list):
        raise ConfigError(f"{ctx}: expected a list of species blocks")
    out = []
    for i, block in enumerate(raw):
        if not isinstance(block, dict):
            raise ConfigError(f"{ctx}[{i}]: expected a mapping")
        missing = {"q", "m", "alpha", "d"} - set(block)
        if missing:
            raise ConfigError(f"{ctx}[{i}]: missing {sorted(missing)}")
        extra = set(block) - {"q", "m", "alpha", "d", "name"}
        if extra:
            raise ConfigError(f"{ctx}[{i}]: unknown keys {sorted(extra)}")
        d = block["d"]
        if not isinstance(d, (list, tuple)) or len(d) != 3:
            raise ConfigError(f"{ctx}[{i}].d: expected three components")
        try:
            sp = SpeciesConfig(float(block["q"]), float(block["m"]), float(block["alpha"]),
                               tuple(float(v) for v in d), str(block.get("name", "")))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{ctx}[{i}]: {exc}") from exc
        if sp.m <= 0:
            raise ConfigError(f"{ctx}[{i}].m: mass must be positive")
        if sp.alpha < 0:
            raise ConfigError(f"{ctx}[{i}].alpha: must be non-negative")
        if sp.q == 0:
            raise ConfigError(f"{ctx}[{i}].q: charge must be nonzero")
        if not any(sp.d):
            raise ConfigError(f"{ctx}[{i}].d: drift must be nonzero")
        out.append(sp)
    return tuple(out)


def _profiles(raw, count):
    if raw is None:
        raw = []
    if not isinstance(raw, list):
        raise ConfigError("profiles: expected a list")
    if len(raw) == 1 and count > 1:
        raw = raw * count
    if raw and len(raw) != count:
        raise ConfigError(f"profiles: got {len(raw)} entries for {count} species")
    out = []
    for i, p in enumerate(raw):
        if not isinstance(p, dict):
            raise ConfigError(f"profiles[{i}]: expected a mapping")
        kind = p.get("kind", "maxwellian")
        if kind not in PROFILE_KINDS:
            raise ConfigError(f"profiles[{i}].kind: {kind!r} is not one of {PROFILE_KINDS}")
        if kind == "polynomial" and "taylor" not in p:
            raise ConfigError(f"profiles[{i}]: polynomial profile needs 'taylor'")
        if kind == "tabulated-with-derivatives" and "file" not in p:
            raise ConfigError(f"profiles[{i}]: tabulated profile needs 'file'")
        entry = dict(p, kind=kind)
        if "taylor" in entry:
            entry["taylor"] = [float(v) for v in entry["taylor"]]
        out.append(entry)
    return tuple(out)


def parse_config(data, base_dir="."):
    """Validate a plain mapping into a RunConfig; raises ConfigError with the offending key."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    data = copy.deepcopy(data)
    known = set(RunConfig.__dataclass_fields__) - {"base_dir"}
    extra = set(data) - known
    if extra:
        raise ConfigError(f"unknown top-level keys {sorted(extra)}")
    mode = data.get("mode")
    if mode not in MODES:
        raise ConfigError(f"mode: {mode!r} is not one of {MODES}")
    model = data.get("model", "vm")
    if model not in MODELS:
        raise ConfigError(f"model: {model!r} is not one of {MODELS}")
    grid = _section(data, "grid", GridConfig, "")
    if grid.lx <= 0 or grid.ly <= 0:
        raise ConfigError("grid: side lengths must be positive")
    min_nodes = 8 if mode in ("detect", "branch") else 1
    if grid.nx < min_nodes or grid.ny < min_nodes:
        raise ConfigError(f"grid: nx, ny must be >= {min_nodes} for mode {mode}")
    species = _species(data.get("species", []) or [])
    if model == "vm" and mode != "spectrum" and not species:
        raise ConfigError(f"species: required for mode {mode} with model vm")
    profiles = _profiles(data.get("profiles"), len(species))
    params = _section(data, "params", ParamsConfig, "")
    if params.eps_rel <= 0:
        raise ConfigError("params.eps_rel: must be positive")
    if params.a <= 0:
        raise ConfigError("params.a: must be positive")
    path = _section(data, "path", PathConfig, "")
    if not 0 < path.delta < 0.5:
        raise ConfigError("path.delta: must lie in (0, 0.5)")
    if path.samples < 3:
        raise ConfigError("path.samples: need at least 3")
    cont = _section(data, "continuation", ContinuationConfig, "")
    if cont.steps < 1 or cont.step_size <= 0:
        raise ConfigError("continuation: steps >= 1 and step_size > 0 required")
    output = _section(data, "output", OutputConfig, "")
    bad = set(output.formats) - set(FORMATS)
    if bad:
        raise ConfigError(f"output.formats: unknown {sorted(bad)}")
    eigen_index = _coerce(RunConfig, "eigen_index", data.get("eigen_index", 0), "")
    eigen_count = _coerce(RunConfig, "eigen_count", data.get("eigen_count", 8), "")
    if eigen_index < 0:
        raise ConfigError("eigen_index: must be non-negative")
    if eigen_count < 1 or eigen_count > grid.nx * grid.ny:
        raise ConfigError("eigen_count: must lie in [1, nx * ny]")
    seed = _coerce(RunConfig, "seed", data.get("seed", 0), "")
    return RunConfig(mode, model, grid, species, profiles, params, eigen_index, eigen_count,
                     path, cont, output, seed, str(base_dir))


def load_config(path):
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
    return parse_config(data, base_dir=path.parent)


def dump_config(config, path=None):
    text = yaml.safe_dump(config.to_dict(), sort_keys=True, default_flow_style=None)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


__all__ = ["ContinuationConfig", "GridConfig", "OutputConfig", "ParamsConfig", "PathConfig",
           "RunConfig", "SpeciesConfig", "dump_config", "load_config", "parse_config"]
