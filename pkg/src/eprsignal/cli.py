"""Command-line front end: seeded reproducible runs over JSON configs.

Commands map onto the library one-to-one: ``gap`` and ``simulate`` report
signal gaps (exact / Monte-Carlo), ``capacity`` decodes letter blocks,
``affinity`` and ``gleason`` run the dimension-specific certifiers, and
``certify`` dispatches on the observable's dimension.

Exit codes: 0 success, 1 usage or validation error, 2 when a signal was
detected although the config declared none expected (CI gating).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .hilbert import TOL_DECISION
from .nosignal import VERDICT_NON_QUADRATIC, affinity_scan, gleason_certify
from .serialize import (
    certificate_to_json,
    channel_report_to_json,
    dumps_canonical,
    observable_from_json,
    scenario_from_json,
    signal_report_to_json,
)
from .signaling import (
    Z_THRESHOLD,
    channel_capacity,
    exact_gap,
    monte_carlo_report,
    per_sample_values,
)

COMMANDS = ("gap", "simulate", "capacity", "affinity", "gleason", "certify")

_DEFAULTS = {
    "n_samples": 10000,
    "n_chords": 1000,
    "block": 1000,
    "trials": 200,
    "subspaces_per_dim": 3,
    "resamples": 6,
    "seed": 0,
    "tolerance": TOL_DECISION,
}


class ConfigError(ValueError):
    """Malformed config; the message carries the offending field path."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    scenario: dict | None = None
    observable: dict | None = None
    n_samples: int = _DEFAULTS["n_samples"]
    n_chords: int = _DEFAULTS["n_chords"]
    block: int = _DEFAULTS["block"]
    trials: int = _DEFAULTS["trials"]
    subspaces_per_dim: int = _DEFAULTS["subspaces_per_dim"]
    resamples: int = _DEFAULTS["resamples"]
    seed: int = 0
    tolerance: float = TOL_DECISION
    expect: str | None = None
    out: str | None = None
    format: str = "json"
    workers: int = 1

    def to_dict(self) -> dict:
        """Normal form: every field explicit, stable ordering."""
        return dataclasses.asdict(self)


def bundled_config_names() -> list[str]:
    base = resources.files("eprsignal").joinpath("configs")
    return sorted(p.name.removesuffix(".json") for p in base.iterdir())


def load_config(path_or_name: str) -> dict:
    """Read a config file; bare names resolve to the bundled library."""
    p = Path(path_or_name)
    if p.is_file():
        text = p.read_text()
    else:
        name = path_or_name.removesuffix(".json")
        ref = resources.files("eprsignal").joinpath("configs", f"{name}.json")
        if not ref.is_file():
            raise ConfigError(
                f"config: {path_or_name!r} is neither a file nor one of the "
                f"bundled configs {bundled_config_names()}"
            )
        text = ref.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"config: invalid JSON ({err})") from err
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be an object")
    return data


def _require_int(data: dict, key: str, minimum: int) -> int:
    val = data[key]
    if not isinstance(val, int) or isinstance(val, bool) or val < minimum:
        raise ConfigError(f"{key}: must be an integer >= {minimum}, got {val!r}")
    return val


def parse_config(data: dict, overrides: dict | None = None) -> RunConfig:
    """Validate a raw config dict (plus CLI overrides) into a RunConfig."""
    merged = {**_DEFAULTS, "workers": 1, "format": "json", **data}
    for key, val in (overrides or {}).items():
        if val is not None:
            merged[key] = val

    command = merged.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"command: must be one of {COMMANDS}, got {command!r}")

    for key in ("n_samples", "n_chords", "block", "trials",
                "subspaces_per_dim", "workers"):
        _require_int(merged, key, 1)
    _require_int(merged, "resamples", 2)
    _require_int(merged, "seed", 0)
    tolerance = merged["tolerance"]
    if not isinstance(tolerance, (int, float)) or tolerance <= 0:
        raise ConfigError(f"tolerance: must be > 0, got {tolerance!r}")

    expect = merged.get("expect")
    if expect not in (None, "signal", "no-signal"):
        raise ConfigError(
            f"expect: must be 'signal', 'no-signal' or omitted, got {expect!r}"
        )

    fmt = merged.get("format")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"format: must be 'json' or 'csv', got {fmt!r}")

    scenario = merged.get("scenario")
    observable = merged.get("observable")
    if command in ("gap", "simulate", "capacity"):
        if not isinstance(scenario, dict):
            raise ConfigError(f"scenario: required for command {command!r}")
    else:
        if not isinstance(observable, dict):
            raise ConfigError(f"observable: required for command {command!r}")

    return RunConfig(
        command=command,
        scenario=scenario,
        observable=observable,
        n_samples=merged["n_samples"],
        n_chords=merged["n_chords"],
        block=merged["block"],
        trials=merged["trials"],
        subspaces_per_dim=merged["subspaces_per_dim"],
        resamples=merged["resamples"],
        seed=merged["seed"],
        tolerance=float(tolerance),
        expect=expect,
        out=merged.get("out"),
        format=fmt,
        workers=merged["workers"],
    )


def _build_scenario(config: RunConfig):
    try:
        return scenario_from_json(config.scenario)
    except (KeyError, ValueError, TypeError) as err:
        raise ConfigError(f"scenario: {err}") from err


def _build_observable(config: RunConfig):
    try:
        return observable_from_json(config.observable)
    except (KeyError, ValueError, TypeError) as err:
        raise ConfigError(f"observable: {err}") from err


def execute(config: RunConfig) -> tuple[dict, bool]:
    """Run the configured command; returns (result dict, signal detected)."""
    cmd = config.command
    if cmd == "gap":
        report = exact_gap(_build_scenario(config))
        return signal_report_to_json(report), abs(report.gap) >= config.tolerance
    if cmd == "simulate":
        report = monte_carlo_report(
            _build_scenario(config),
            config.n_samples,
            seed=config.seed,
            workers=config.workers,
            track_convergence=True,
        )
        return signal_report_to_json(report), report.z >= Z_THRESHOLD
    if cmd == "capacity":
        scenario = _build_scenario(config)
        report = channel_capacity(
            scenario,
            config.block,
            config.trials,
            seed=config.seed,
            workers=config.workers,
        )
        detected = abs(exact_gap(scenario).gap) >= config.tolerance
        return channel_report_to_json(report), detected

    observable = _build_observable(config)
    if cmd == "affinity" or (cmd == "certify" and observable.dim == 2):
        cert = affinity_scan(
            observable,
            config.n_chords,
            seed=config.seed,
            tolerance=config.tolerance,
            workers=config.workers,
        )
    else:
        cert = gleason_certify(
            observable,
            seed=config.seed,
            tolerance=config.tolerance,
            subspaces_per_dim=config.subspaces_per_dim,
            resamples=config.resamples,
            workers=config.workers,
        )
    return certificate_to_json(cert), cert.verdict == VERDICT_NON_QUADRATIC


_PLOT_KIND_FOR_COMMAND = {
    "simulate": "convergence",
    "affinity": "bloch",
    "certify": "bloch",
    "gleason": "violation-histogram",
}


def emit_plot_data(result: dict, kind: str) -> str:
    """Render a result dict as CSV rows for external plotting.

    Kinds: ``bloch`` (sphere points of chord witnesses with their observable
    values and violations), ``convergence`` (cumulative Monte-Carlo gap versus
    sample count), ``violation-histogram`` (one violation per witness).
    """
    lines: list[str] = []
    if kind == "bloch":
        witnesses = result.get("witnesses")
        if witnesses is None:
            raise ValueError("bloch plot data needs a certificate result")
        lines.append("x,y,z,f_value,violation")
        for w in witnesses:
            if w.get("type") != "chord":
                continue
            points = (w["x1"], w["x2"], w["x1p"], w["x2p"])
            vals = w.get("values") or (None,) * 4
            for point, val in zip(points, vals):
                lines.append(
                    f"{point[0]!r},{point[1]!r},{point[2]!r},{val!r},{w['violation']!r}"
                )
    elif kind == "convergence":
        series = result.get("convergence")
        if series is None:
            raise ValueError("convergence plot data needs a Monte-Carlo result")
        lines.append("n,mc_gap,pooled_stderr")
        for row in series:
            lines.append(f"{row['n']},{row['mc_gap']!r},{row['pooled_stderr']!r}")
    elif kind == "violation-histogram":
        witnesses = result.get("witnesses")
        if witnesses is None:
            raise ValueError("violation histogram needs a certificate result")
        lines.append("index,violation")
        for i, w in enumerate(witnesses):
            v = w.get("violation", w.get("basis_spread", w.get("residual")))
            lines.append(f"{i},{v!r}")
    else:
        raise ValueError(f"unknown plot kind {kind!r}")
    return "\n".join(lines) + "\n"


def run(config: RunConfig) -> tuple[int, dict]:
    """Execute a validated config, write the report, return (exit code, report)."""
    result, detected = execute(config)
    report = {
        "command": config.command,
        "seed": config.seed,
        "tolerance": config.tolerance,
        "result": result,
    }
    if config.format == "csv":
        kind = _PLOT_KIND_FOR_COMMAND.get(config.command)
        if kind is None:
            raise ConfigError(
                f"format: no CSV plot data defined for command {config.command!r}"
            )
        text = emit_plot_data(result, kind)
    else:
        text = dumps_canonical(report)
    if config.out:
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)
    if config.expect == "no-signal" and detected:
        return 2, report
    return 0, report


def _dump_samples(config: RunConfig, path: str):
    sc = _build_scenario(config)
    lines = ["letter,index,f_value"]
    for letter in (0, 1):
        vals = per_sample_values(sc, letter, config.n_samples, config.seed)
        lines.extend(f"{letter},{i},{float(v)!r}" for i, v in enumerate(vals))
    Path(path).write_text("\n".join(lines) + "\n")


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; 2 is reserved for the
    # CI gate here, so route errors through an exception instead
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="eprsignal", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True,
                       help="config file path or bundled config name")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--samples", type=int, default=None, dest="n_samples")
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("json", "csv"), default=None)
        p.add_argument("--tolerance", type=float, default=None)
        p.add_argument("--workers", type=int, default=None)
        if name == "simulate":
            p.add_argument("--dump-samples", default=None,
                           help="also write per-sample observable values (CSV)")
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        data = load_config(args.config)
        overrides = {
            "command": args.command,
            "seed": args.seed,
            "n_samples": args.n_samples,
            "out": args.out,
            "format": args.format,
            "tolerance": args.tolerance,
            "workers": args.workers,
        }
        config = parse_config(data, overrides)
        code, _ = run(config)
        if getattr(args, "dump_samples", None):
            _dump_samples(config, args.dump_samples)
        return code
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
