"""Command-line front end for the verification suites.

Exit codes: 0 all cases pass, 1 some case fails, 2 invalid configuration,
3 internal verification error, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import jsonschema
import numpy as np

from .solution_factory import PhysicalConstants, field_from_dict
from .suites import SUITES, SuiteContext, run
from .verify import DEFAULT_GRID

SCHEMA_VERSION = 1
SEED_ENV = "CURRENT_FORGE_SEED"

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_INTERNAL, EXIT_IO = 0, 1, 2, 3, 4

_POS_INT = {"type": "integer", "minimum": 1}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "suite": {"enum": list(SUITES) + ["all"]},
        "seed": {"type": "integer", "minimum": 0},
        "constants": {
            "type": "object",
            "additionalProperties": False,
            "properties": {k: {"type": "number"} for k in ("hbar", "c", "m", "e", "kappa")},
        },
        "fields": {"type": "array", "items": {"type": "object", "required": ["equation", "modes"]}},
        "tolerances": {"type": "object", "additionalProperties": {"type": "number", "minimum": 0}},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "grid_n": _POS_INT,
        "modes": _POS_INT,
        "points": _POS_INT,
        "output": {"type": "string"},
        "format": {"enum": ["text", "json"]},
    },
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    suite: str = "all"
    seed: int = 0
    constants: dict = field(default_factory=dict)
    fields: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    tol: float | None = None
    grid_n: int = DEFAULT_GRID
    modes: int | None = None
    points: int = 200
    output: str | None = None
    format: str = "text"

    def echo(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "seed": self.seed,
            "constants": self.constants,
            "fields": self.fields,
            "tolerances": self.tolerances,
            "grid_n": self.grid_n,
            "points": self.points,
        }
        if self.tol is not None:
            d["tol"] = self.tol
        if self.modes is not None:
            d["modes"] = self.modes
        return d

    def context(self) -> SuiteContext:
        return SuiteContext(
            seed=self.seed,
            constants=PhysicalConstants(**self.constants),
            fields=self.fields,
            grid_n=self.grid_n,
            modes=self.modes,
            points=self.points,
            tol=self.tol,
            tolerances=self.tolerances,
        )


def load_config(data: dict) -> RunConfig:
    """Validate a config document and build a :class:`RunConfig`."""
    try:
        jsonschema.validate(data, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {path}: {exc.message}") from None
    d = {k: v for k, v in data.items() if k != "schema_version"}
    cfg = RunConfig(**d)
    try:
        PhysicalConstants(**cfg.constants)
        for spec in cfg.fields:
            field_from_dict(spec)
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(f"invalid config: {exc}") from None
    return cfg


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="current-forge", description="Run conserved-current verification suites.")
    p.add_argument("--suite", choices=list(SUITES) + ["all"], help="suite to run (default: all)")
    p.add_argument("--config", metavar="PATH", help="JSON run configuration")
    p.add_argument("--seed", type=int, help=f"random seed (fallback: ${SEED_ENV}, then 0)")
    p.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    p.add_argument("--format", choices=["text", "json"], help="stdout format (default: text)")
    p.add_argument("--grid", type=int, help="quadrature grid points per axis")
    p.add_argument("--tol", type=float, help="override every upper-bound tolerance")
    p.add_argument("--modes", type=int, help="modes per generated field (default: random 4-8)")
    p.add_argument("--points", type=int, help="sample points per sweep")
    return p


def resolve_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {"schema_version": SCHEMA_VERSION}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    overrides = {
        "suite": args.suite, "seed": args.seed, "grid_n": args.grid, "tol": args.tol,
        "modes": args.modes, "points": args.points, "output": args.json, "format": args.format,
    }
    if args.seed is None and "seed" not in data and os.environ.get(SEED_ENV):
        try:
            overrides["seed"] = int(os.environ[SEED_ENV])
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer") from None
    merged = dict(data)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return load_config(merged)


def run_suite(config: RunConfig) -> dict:
    """Run the configured suite and return the report document."""
    result = run(config.suite, config.context())
    cases = [c.to_dict() for c in result.cases]
    passed = sum(c["pass"] for c in cases)
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": config.suite,
        "seed": config.seed,
        "config": config.echo(),
        "cases": cases,
        "summary": {"passed": passed, "failed": len(cases) - passed},
        "details": _plain(result.details),
    }


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    return obj


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_text(report: dict) -> str:
    lines = []
    for c in report["cases"]:
        op = "<=" if c["bound"] == "upper" else ">="
        tag = "PASS" if c["pass"] else "FAIL"
        lines.append(f"{tag} {c['name']}: {c['metric']:.3e} {op} {c['tolerance']:.1e}")
    s = report["summary"]
    lines.append(f"{s['passed']} passed, {s['failed']} failed")
    return "\n".join(lines) + "\n"


def emit_report(report: dict, fmt: str = "text", path: str | None = None) -> None:
    """Write ``report`` as text or JSON to ``path`` (stdout when None or '-')."""
    text = render_json(report) if fmt == "json" else render_text(report)
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w") as fh:
        fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = run_suite(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # verification machinery failed, not a failed case
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    try:
        if config.output is not None:
            emit_report(report, "json", config.output)
            if config.output != "-":
                emit_report(report, config.format)
        else:
            emit_report(report, config.format)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if report["summary"]["failed"] == 0 else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
