import json
import logging
import os
from pathlib import Path

from dotenv import load_dotenv

from errors import ContractViolation

load_dotenv(override=True)

DEFAULT_OUT_DIR = "runs"


def pp(obj):
    print(json.dumps(obj, indent=4, default=str))


def default_out_dir() -> Path:
    return Path(os.getenv("FEDCHS_OUT_DIR", DEFAULT_OUT_DIR))


def default_log_level() -> int:
    name = os.getenv("FEDCHS_LOG_LEVEL", "INFO").upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.INFO


def configure_logging(quiet: bool = False, debug: bool = False) -> None:
    if debug:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    else:
        level = default_log_level()
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def confined_path(out_dir: str | Path, name: str) -> Path:
    """Resolve `name` under `out_dir`; raise if the result would escape it."""
    root = Path(out_dir).resolve()
    target = (root / name).resolve()
    if target != root and root not in target.parents:
        raise ContractViolation(f"Output path escapes {root}: {name}")
    return target


def format_float(value: float | None) -> str:
    """Shortest round-trip text for a float; empty for missing values."""
    if value is None:
        return ""
    return repr(float(value))
