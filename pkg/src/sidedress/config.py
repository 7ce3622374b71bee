"""Run configuration documents.

A run config is a TOML document naming a field source (a generation seed
or a field CSV path, exactly one), the economic parameters, the
prescription split, the yield bounds, the attack scenarios to evaluate,
and optionally an optimizer search. Example:

    format_version = 1
    scenarios = ["builtin:1", "builtin:2", "builtin:3"]

    [field]
    seed = 42

    [economics]
    corn_price = 7.53
    nitrogen_price = 1.10
    timing_adj = 0.95

    [optimizer]
    multiplier_set = [0.0, 0.5, 1.0, 1.5, 2.0]
    stealth_budget = 50.0
    budget_resolution = 1.0

Scenario references are "identity", "builtin:1" through "builtin:3", or
a path to a scenario TOML document (see sidedress.attacks). Relative
paths resolve against the config file's directory.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .agronomy import EconParams, SplitFractions, YieldBounds
from .attacks import AttackScenario, builtin_scenario, load_scenario
from .field import FieldGrid, GenerationRanges, generate_field
from .gridio import read_field_csv

FORMAT_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run settings; exactly one of seed/field_path is set."""

    seed: int | None = 42
    field_path: Path | None = None
    rows: int = 10
    cols: int = 10
    ranges: GenerationRanges = GenerationRanges()
    econ: EconParams = EconParams()
    split: SplitFractions = SplitFractions()
    bounds: YieldBounds = YieldBounds()
    scenario_refs: tuple[str, ...] = ()
    optimizer: "OptimizerConfig | None" = None
    output_dir: Path | None = None
    base_dir: Path = dc_field(default_factory=Path.cwd)

    def __post_init__(self) -> None:
        if (self.seed is None) == (self.field_path is None):
            raise ValueError("config must set exactly one field source: a seed or a field file")

    def digest(self) -> str:
        """Stable hash of the resolved settings, for report provenance."""
        blob = json.dumps(_digest_view(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def _digest_view(cfg: RunConfig) -> dict:
    opt = cfg.optimizer
    return {
        "seed": cfg.seed,
        "field_path": str(cfg.field_path) if cfg.field_path else None,
        "rows": cfg.rows,
        "cols": cfg.cols,
        "ranges": [cfg.ranges.yield_goal, cfg.ranges.soil_nitrate,
                   cfg.ranges.organic_matter, cfg.ranges.n_credits],
        "econ": [cfg.econ.corn_price, cfg.econ.nitrogen_price, cfg.econ.timing_adj],
        "split": [cfg.split.at_planting, cfg.split.in_season],
        "bounds": [cfg.bounds.floor, cfg.bounds.boost],
        "scenarios": list(cfg.scenario_refs),
        "optimizer": None if opt is None else [
            list(opt.multiplier_set), opt.stealth_budget, opt.budget_resolution,
        ],
    }


def _parse_toml(path: Path, kind: str = "config") -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ValueError(f"{kind} file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ValueError(f"{kind} parse failure in {path}: {exc}") from None


def _take(table: dict, key: str, kind, where: str, default=None):
    if key not in table:
        return default
    value = table[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ValueError(f"{where}.{key} has the wrong type: expected {kind.__name__}")
    return value


def _reject_unknown(table: dict, allowed: set[str], where: str) -> None:
    unknown = set(table) - allowed
    if unknown:
        raise ValueError(f"unknown keys in [{where}]: {sorted(unknown)}")


def _pair(table: dict, key: str, where: str, default: tuple[float, float]) -> tuple[float, float]:
    if key not in table:
        return default
    value = table[key]
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        raise ValueError(f"{where}.{key} must be a two-number list [lo, hi]")
    return float(value[0]), float(value[1])


def load_run_config(path: Path | str) -> RunConfig:
    """Parse and validate a run-config document."""
    from .optimizer import OptimizerConfig

    path = Path(path)
    doc = _parse_toml(path)
    base_dir = path.resolve().parent

    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"config format_version must be {FORMAT_VERSION}, got {version!r}")
    unknown = set(doc) - {"format_version", "scenarios", "output_dir",
                          "field", "economics", "split", "bounds", "optimizer"}
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")

    ftab = doc.get("field", {})
    if not isinstance(ftab, dict):
        raise ValueError("[field] must be a table")
    _reject_unknown(ftab, {"seed", "path", "rows", "cols", "yield_goal_range",
                           "nitrate_range", "organic_matter_range", "n_credits"}, "field")
    seed = _take(ftab, "seed", int, "field")
    raw_path = _take(ftab, "path", str, "field")
    if (seed is None) == (raw_path is None):
        raise ValueError("[field] must set exactly one of seed or path")
    field_path = None
    if raw_path is not None:
        field_path = Path(raw_path)
        if not field_path.is_absolute():
            field_path = base_dir / field_path
        if not field_path.is_file():
            raise ValueError(f"field.path does not exist: {field_path}")
    defaults = GenerationRanges()
    ranges = GenerationRanges(
        yield_goal=_pair(ftab, "yield_goal_range", "field", defaults.yield_goal),
        soil_nitrate=_pair(ftab, "nitrate_range", "field", defaults.soil_nitrate),
        organic_matter=_pair(ftab, "organic_matter_range", "field", defaults.organic_matter),
        n_credits=_take(ftab, "n_credits", float, "field", defaults.n_credits),
    )

    etab = doc.get("economics", {})
    _reject_unknown(etab, {"corn_price", "nitrogen_price", "timing_adj"}, "economics")
    econ = EconParams(
        corn_price=_take(etab, "corn_price", float, "economics", 7.53),
        nitrogen_price=_take(etab, "nitrogen_price", float, "economics", 1.10),
        timing_adj=_take(etab, "timing_adj", float, "economics", 0.95),
    )
    stab = doc.get("split", {})
    _reject_unknown(stab, {"at_planting", "in_season"}, "split")
    split = SplitFractions(
        at_planting=_take(stab, "at_planting", float, "split", 0.25),
        in_season=_take(stab, "in_season", float, "split", 0.75),
    )
    btab = doc.get("bounds", {})
    _reject_unknown(btab, {"floor", "boost"}, "bounds")
    bounds = YieldBounds(
        floor=_take(btab, "floor", float, "bounds", 100.0),
        boost=_take(btab, "boost", float, "bounds", 30.0),
    )

    refs = doc.get("scenarios", [])
    if not isinstance(refs, list) or not all(isinstance(r, str) for r in refs):
        raise ValueError("scenarios must be a list of reference strings")
    for ref in refs:
        _check_scenario_ref(ref, base_dir)

    optimizer = None
    if "optimizer" in doc:
        otab = doc["optimizer"]
        if not isinstance(otab, dict):
            raise ValueError("[optimizer] must be a table")
        _reject_unknown(otab, {"multiplier_set", "stealth_budget", "budget_resolution"}, "optimizer")
        mset = otab.get("multiplier_set")
        if (not isinstance(mset, list) or not mset
                or not all(isinstance(m, (int, float)) and not isinstance(m, bool) for m in mset)):
            raise ValueError("optimizer.multiplier_set must be a nonempty number list")
        budget = otab.get("stealth_budget")
        if budget == "unbounded":
            budget = None
        elif budget is not None and (not isinstance(budget, (int, float)) or isinstance(budget, bool)):
            raise ValueError("optimizer.stealth_budget must be a number or 'unbounded'")
        optimizer = OptimizerConfig(
            multiplier_set=tuple(float(m) for m in mset),
            stealth_budget=None if budget is None else float(budget),
            budget_resolution=_take(otab, "budget_resolution", float, "optimizer", 1.0),
        )

    out_ref = doc.get("output_dir")
    if out_ref is not None and not isinstance(out_ref, str):
        raise ValueError("output_dir must be a path string")
    output_dir = None
    if out_ref is not None:
        output_dir = Path(out_ref)
        if not output_dir.is_absolute():
            output_dir = base_dir / output_dir

    return RunConfig(
        seed=seed,
        field_path=field_path,
        rows=_take(ftab, "rows", int, "field", 10),
        cols=_take(ftab, "cols", int, "field", 10),
        ranges=ranges,
        econ=econ,
        split=split,
        bounds=bounds,
        scenario_refs=tuple(refs),
        optimizer=optimizer,
        output_dir=output_dir,
        base_dir=base_dir,
    )


def _check_scenario_ref(ref: str, base_dir: Path) -> None:
    if ref == "identity" or ref.startswith("builtin:"):
        if ref.startswith("builtin:") and ref not in ("builtin:1", "builtin:2", "builtin:3"):
            raise ValueError(f"unknown builtin scenario reference {ref!r}")
        return
    path = Path(ref)
    if not path.is_absolute():
        path = base_dir / path
    if not path.is_file():
        raise ValueError(f"scenario document does not exist: {path}")


def resolve_field(cfg: RunConfig) -> FieldGrid:
    if cfg.field_path is not None:
        return read_field_csv(cfg.field_path)
    return generate_field(cfg.seed, cfg.rows, cfg.cols, cfg.ranges)


def resolve_scenario(ref: str, rows: int, cols: int, base_dir: Path) -> AttackScenario:
    """Materialize one scenario reference from a run config."""
    if ref == "identity":
        return AttackScenario.identity(rows, cols)
    if ref.startswith("builtin:"):
        return builtin_scenario(int(ref.split(":", 1)[1]), rows, cols)
    path = Path(ref)
    if not path.is_absolute():
        path = base_dir / path
    if not path.is_file():
        raise ValueError(
            f"unknown scenario reference {ref!r}: expected identity, builtin:1..3,"
            " or a scenario TOML path"
        )
    doc = _parse_toml(path, kind="scenario")
    version = doc.pop("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ValueError(f"scenario format_version must be {FORMAT_VERSION}, got {version!r}")
    return load_scenario(doc, rows, cols, base_dir=path.resolve().parent)
