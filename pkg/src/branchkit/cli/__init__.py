"""Configuration, orchestration and static plots for command line runs."""

from .config import RunConfig, dump_config, load_config, parse_config
from .main import main, run

__all__ = ["RunConfig", "dump_config", "load_config", "main", "parse_config", "run"]
