"""Command-line front end: figures, hedge, simulate, verify.

Every command is deterministic given its configuration and seed; CSV output
uses '.' decimals, no thousands separators, and 17-significant-digit floats
so reruns are byte-identical.  Each output directory receives an
``effective_config.json`` that reruns to identical outputs via ``--config``.

Exit codes: 0 success, 2 configuration error, 3 degenerate hedge system,
4 property failure, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .hedging import DegeneracyError, analytic_delta, degeneracy_check, gram_system, rho_diagnostic
from .market import GeometricBernoulliSpec, PricingKernelSpec
from .levy_core import JumpAtom, LevyMeasure, TimeGrid
from .sim_harness import (
    DEFAULT_SEED,
    FIGURE_NAMES,
    HEDGE_MODES,
    GoldenPath,
    Scenario,
    ScenarioResult,
    builtin_scenario,
    run_scenario,
    scenario_ratios,
    with_overrides,
)
from .verification import SUITE_NAMES, run_suite

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3
EXIT_PROPERTY = 4
EXIT_IO = 5

SCHEMA_VERSION = 1


class ConfigError(Exception):
    """Configuration rejected before execution."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _check_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def _require(obj: dict, keys: set[str], where: str) -> None:
    missing = keys - set(obj)
    if missing:
        raise ConfigError(f"missing key(s) in {where}: {', '.join(sorted(missing))}")


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer")
    return value


def _as_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number")
    return float(value)


def _build_asset(obj, where: str) -> GeometricBernoulliSpec:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object")
    keys = {"initial_price", "brownian_vol", "jump_exponent"}
    _check_keys(obj, keys, where)
    _require(obj, keys, where)
    try:
        return GeometricBernoulliSpec(
            _as_number(obj["initial_price"], f"{where}.initial_price"),
            _as_number(obj["brownian_vol"], f"{where}.brownian_vol"),
            _as_number(obj["jump_exponent"], f"{where}.jump_exponent"),
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _build_measure(obj, where: str) -> LevyMeasure:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object")
    _check_keys(obj, {"atoms"}, where)
    _require(obj, {"atoms"}, where)
    if not isinstance(obj["atoms"], list):
        raise ConfigError(f"{where}.atoms must be a list")
    atoms = []
    for i, atom in enumerate(obj["atoms"]):
        if not isinstance(atom, dict):
            raise ConfigError(f"{where}.atoms[{i}] must be an object")
        _check_keys(atom, {"location", "intensity"}, f"{where}.atoms[{i}]")
        _require(atom, {"location", "intensity"}, f"{where}.atoms[{i}]")
        try:
            atoms.append(
                JumpAtom(
                    _as_number(atom["location"], "location"),
                    _as_number(atom["intensity"], "intensity"),
                )
            )
        except ValueError as exc:
            raise ConfigError(f"{where}.atoms[{i}]: {exc}") from exc
    try:
        return LevyMeasure(tuple(atoms))
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _build_kernel(obj, where: str) -> PricingKernelSpec | None:
    if obj is None:
        return None
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object or null")
    keys = {"short_rate", "brownian_mpr", "jump_mpr"}
    _check_keys(obj, keys, where)
    _require(obj, keys, where)
    if not isinstance(obj["jump_mpr"], list):
        raise ConfigError(f"{where}.jump_mpr must be a list")
    try:
        return PricingKernelSpec(
            _as_number(obj["short_rate"], f"{where}.short_rate"),
            _as_number(obj["brownian_mpr"], f"{where}.brownian_mpr"),
            tuple(_as_number(v, f"{where}.jump_mpr[{i}]") for i, v in enumerate(obj["jump_mpr"])),
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


_SCENARIO_BUILTIN_KEYS = {"name", "n_paths", "seed", "steps", "hedge_mode", "hedge_asset_index"}
_SCENARIO_FULL_KEYS = {
    "measure",
    "kernel",
    "contract",
    "hedging_assets",
    "horizon",
    "steps",
    "n_paths",
    "seed",
    "hedge_mode",
    "hedge_asset_index",
}


def build_scenario(obj) -> Scenario:
    """Scenario from its JSON form; unknown keys are rejected."""
    if not isinstance(obj, dict):
        raise ConfigError("scenario must be an object")
    if "name" in obj:
        _check_keys(obj, _SCENARIO_BUILTIN_KEYS, "scenario")
        name = obj["name"]
        if name not in FIGURE_NAMES:
            raise ConfigError(f"unknown scenario name {name!r}; expected one of {FIGURE_NAMES}")
        s = builtin_scenario(name)
        try:
            s = with_overrides(
                s,
                n_paths=_as_int(obj["n_paths"], "scenario.n_paths") if "n_paths" in obj else None,
                seed=_as_int(obj["seed"], "scenario.seed") if "seed" in obj else None,
                steps=_as_int(obj["steps"], "scenario.steps") if "steps" in obj else None,
            )
            if "hedge_mode" in obj or "hedge_asset_index" in obj:
                from dataclasses import replace

                mode = obj.get("hedge_mode", s.hedge_mode)
                if mode not in HEDGE_MODES:
                    raise ConfigError(f"unknown hedge_mode {mode!r}")
                s = replace(
                    s,
                    hedge_mode=mode,
                    hedge_asset_index=_as_int(obj["hedge_asset_index"], "scenario.hedge_asset_index")
                    if "hedge_asset_index" in obj
                    else s.hedge_asset_index,
                )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return s

    _check_keys(obj, _SCENARIO_FULL_KEYS, "scenario")
    _require(obj, _SCENARIO_FULL_KEYS - {"kernel", "hedge_asset_index"}, "scenario")
    if not isinstance(obj["hedging_assets"], list):
        raise ConfigError("scenario.hedging_assets must be a list")
    mode = obj["hedge_mode"]
    if mode not in HEDGE_MODES:
        raise ConfigError(f"unknown hedge_mode {mode!r}; expected one of {HEDGE_MODES}")
    try:
        return Scenario(
            measure=_build_measure(obj["measure"], "scenario.measure"),
            kernel=_build_kernel(obj.get("kernel"), "scenario.kernel"),
            contract=_build_asset(obj["contract"], "scenario.contract"),
            hedging_assets=tuple(
                _build_asset(a, f"scenario.hedging_assets[{i}]") for i, a in enumerate(obj["hedging_assets"])
            ),
            grid=TimeGrid(_as_number(obj["horizon"], "scenario.horizon"), _as_int(obj["steps"], "scenario.steps")),
            n_paths=_as_int(obj["n_paths"], "scenario.n_paths"),
            seed=_as_int(obj["seed"], "scenario.seed"),
            hedge_mode=mode,
            hedge_asset_index=_as_int(obj.get("hedge_asset_index", 0), "scenario.hedge_asset_index"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def scenario_to_config(s: Scenario) -> dict:
    kernel = None
    if s.kernel is not None:
        kernel = {
            "short_rate": s.kernel.short_rate,
            "brownian_mpr": s.kernel.brownian_mpr,
            "jump_mpr": list(s.kernel.jump_mpr),
        }
    def spec(a: GeometricBernoulliSpec) -> dict:
        return {
            "initial_price": a.initial_price,
            "brownian_vol": a.brownian_vol,
            "jump_exponent": a.jump_exponent,
        }

    return {
        "measure": {"atoms": [{"location": a.location, "intensity": a.intensity} for a in s.measure.atoms]},
        "kernel": kernel,
        "contract": spec(s.contract),
        "hedging_assets": [spec(a) for a in s.hedging_assets],
        "horizon": s.grid.horizon,
        "steps": s.grid.steps,
        "n_paths": s.n_paths,
        "seed": s.seed,
        "hedge_mode": s.hedge_mode,
        "hedge_asset_index": s.hedge_asset_index,
    }


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigError("config root must be an object")
    if obj.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"config schema_version must be {SCHEMA_VERSION}")
    return obj


def _write_text(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="\n")


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    _write_text(path, "\n".join(lines) + "\n")


def _dump_config(cfg: dict, out_dir: Path) -> None:
    _write_text(out_dir / "effective_config.json", json.dumps(cfg, sort_keys=True, indent=2) + "\n")


# ----------------------------------------------------------------------------
# figure emission


def _figure_csv_rows(name: str, result: ScenarioResult):
    g: GoldenPath = result.golden
    n = len(g.residuals)
    if name == "fig1":
        header = ["t", "N_t", "X_t", "C", "S1", "S2"]
        rows = [
            [
                _fmt(g.times[i]),
                _fmt(g.jump_count_path[i]),
                _fmt(g.jump_sum_path[i]),
                _fmt(g.contract_values[i]),
                _fmt(g.asset_values[i, 0]),
                _fmt(g.asset_values[i, 1]),
            ]
            for i in range(n + 1)
        ]
        return header, rows

    n_assets = g.asset_values.shape[1]
    header = (
        ["t", "C"]
        + [f"S{j + 1}" for j in range(n_assets)]
        + [f"phi{j + 1}" for j in range(n_assets)]
        + ["theta", "V", "dV"]
    )
    total_gains = (g.contract_values[-1] - g.contract_values[0]) - float(g.residuals.sum())
    theta_terminal = float((g.phi[-1] * g.asset_values[-1]).sum()) - total_gains if n else 0.0
    rows = []
    for i in range(n + 1):
        hold = g.phi[min(i, n - 1)] if n else np.zeros(n_assets)
        theta = g.theta[i] if i < n else theta_terminal
        rows.append(
            [_fmt(g.times[i]), _fmt(g.contract_values[i])]
            + [_fmt(g.asset_values[i, j]) for j in range(n_assets)]
            + [_fmt(hold[j]) for j in range(n_assets)]
            + [_fmt(theta), _fmt(g.portfolio_values[i])]
            + ([""] if i == 0 else [_fmt(g.residuals[i - 1])])
        )
    return header, rows


def cmd_figures(args) -> int:
    names = list(args.names)
    seed = args.seed
    paths = args.paths
    steps = args.steps
    out = args.out
    if args.config:
        cfg = _load_json(args.config)
        _check_keys(cfg, {"schema_version", "command", "figures", "seed", "paths", "steps", "out_dir"}, "config")
        if cfg.get("command") != "figures":
            raise ConfigError("config command must be 'figures'")
        names = names or list(cfg.get("figures", []))
        seed = seed if seed is not None else cfg.get("seed")
        paths = paths if paths is not None else cfg.get("paths")
        steps = steps if steps is not None else cfg.get("steps")
        out = out or cfg.get("out_dir")
    names = names or list(FIGURE_NAMES)
    for name in names:
        if name not in FIGURE_NAMES:
            raise ConfigError(f"unknown figure {name!r}; expected one of {FIGURE_NAMES}")
    seed = DEFAULT_SEED if seed is None else seed
    paths = 1 if paths is None else paths
    out_dir = Path(out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)

    effective = {
        "schema_version": SCHEMA_VERSION,
        "command": "figures",
        "figures": names,
        "seed": seed,
        "paths": paths,
        "steps": steps if steps is not None else builtin_scenario("fig1").grid.steps,
        "out_dir": str(out_dir),
    }
    for name in names:
        scenario = with_overrides(builtin_scenario(name), n_paths=paths, seed=seed, steps=steps)
        result = run_scenario(scenario)
        header, rows = _figure_csv_rows(name, result)
        _write_csv(out_dir / f"{name}.csv", header, rows)
        print(f"wrote {out_dir / (name + '.csv')}")
    _dump_config(effective, out_dir)
    return EXIT_OK


# ----------------------------------------------------------------------------
# hedge


def _scenario_from_args(args) -> Scenario:
    if args.config and args.scenario:
        raise ConfigError("give either a scenario name or --config, not both")
    if args.config:
        cfg = _load_json(args.config)
        _check_keys(cfg, {"schema_version", "scenario", "out_dir", "verbosity"}, "config")
        _require(cfg, {"scenario"}, "config")
        if "verbosity" in cfg:
            _as_int(cfg["verbosity"], "verbosity")
        scenario = build_scenario(cfg["scenario"])
        if args.out is None and cfg.get("out_dir") is not None:
            args.out = cfg["out_dir"]
    elif args.scenario:
        if args.scenario not in FIGURE_NAMES:
            raise ConfigError(f"unknown scenario {args.scenario!r}; expected one of {FIGURE_NAMES}")
        scenario = builtin_scenario(args.scenario)
    else:
        raise ConfigError("a scenario name or --config is required")
    return with_overrides(scenario, n_paths=args.paths, seed=args.seed, steps=args.steps)


def cmd_hedge(args) -> int:
    scenario = _scenario_from_args(args)
    contract = scenario.natural_contract()
    assets = scenario.natural_assets()
    ratios = scenario_ratios(scenario)

    print(f"hedge mode: {scenario.hedge_mode}")
    if ratios is None:
        d0 = analytic_delta(contract, assets, [0.0] * len(assets), scenario.measure, scenario.grid.horizon)
        print("no hedge requested; expected squared error:", f"{d0:.10g}")
        return EXIT_OK

    prices = np.array([a.initial_price for a in assets])
    phi = np.asarray(ratios) * contract.initial_price / prices
    theta0 = float(phi @ prices)
    d_hat = analytic_delta(contract, assets, ratios, scenario.measure, scenario.grid.horizon)
    d_zero = analytic_delta(contract, assets, [0.0] * len(assets), scenario.measure, scenario.grid.horizon)
    system = gram_system(contract, assets, contract.initial_price, prices, scenario.measure)
    report = degeneracy_check(system)

    for i, (psi, units) in enumerate(zip(ratios, phi), start=1):
        print(f"phi_{i}: {units:.10g}  (scaled ratio psi_{i} = {psi:.10g})")
    print(f"theta_0: {theta0:.10g}")
    if scenario.hedge_mode == "single":
        rho = rho_diagnostic(contract, assets[scenario.hedge_asset_index], scenario.measure)
        print(f"rho: {rho:.10g}")
    print(f"analytic delta: {d_hat:.10g}")
    print(f"no-hedge delta: {d_zero:.10g}")
    if d_zero > 0.0:
        print(f"variance reduction: {1.0 - d_hat / d_zero:.10g}")
    print(
        "degeneracy: min_eigenvalue={:.6g} condition_number={:.6g} degenerate={}".format(
            report.min_eigenvalue, report.condition_number, report.degenerate
        )
    )

    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        rows = [
            [str(i + 1), _fmt(ratios[i]), _fmt(phi[i]), _fmt(prices[i])]
            for i in range(len(assets))
        ]
        _write_csv(out_dir / "hedge.csv", ["asset", "psi", "phi", "S0"], rows)
        _dump_config(
            {"schema_version": SCHEMA_VERSION, "scenario": scenario_to_config(scenario), "out_dir": str(out_dir)},
            out_dir,
        )
    return EXIT_OK


# ----------------------------------------------------------------------------
# simulate


def cmd_simulate(args) -> int:
    scenario = _scenario_from_args(args)
    result = run_scenario(scenario)
    agg = result.aggregate
    print(f"scenario: hedge_mode={scenario.hedge_mode} paths={scenario.n_paths} steps={scenario.grid.steps} seed={scenario.seed}")
    if result.ratios is not None:
        print("scaled ratios:", " ".join(f"{r:.10g}" for r in result.ratios))
    if result.delta_analytic is not None:
        print(f"analytic delta: {result.delta_analytic:.10g}")
    if result.rho is not None:
        print(f"rho: {result.rho:.10g}")
    print(f"mean delta (terminal): {agg.mean_delta:.10g}")
    print(f"mean delta (integrated): {agg.mean_delta_integrated:.10g}")
    print(f"mean delta (normalized): {agg.mean_delta_normalized:.10g}")
    print(f"per-step residual std: {agg.residual_std:.10g}")
    print(f"max |dV|: {agg.max_abs_residual:.10g}")

    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        rows = [
            [
                str(p.path_index),
                _fmt(p.delta_terminal),
                _fmt(p.delta_integrated),
                _fmt(p.delta_normalized),
                _fmt(p.residual_sum),
                _fmt(p.per_step_std),
                _fmt(p.max_abs_residual),
            ]
            for p in result.path_summaries
        ]
        _write_csv(
            out_dir / "paths.csv",
            [
                "path_index",
                "delta_terminal",
                "delta_integrated",
                "delta_normalized",
                "residual_sum",
                "per_step_std",
                "max_abs_residual",
            ],
            rows,
        )
        header, grows = _figure_csv_rows("golden", result)
        _write_csv(out_dir / "golden_path.csv", header, grows)
        _dump_config(
            {"schema_version": SCHEMA_VERSION, "scenario": scenario_to_config(scenario), "out_dir": str(out_dir)},
            out_dir,
        )
        print(f"wrote {out_dir / 'paths.csv'} and {out_dir / 'golden_path.csv'}")
    return EXIT_OK


# ----------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    results = run_suite(args.suite, seed=args.seed if args.seed is not None else DEFAULT_SEED, n_paths=args.paths)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name}: {r.detail}")
        failed += 0 if r.passed else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_PROPERTY


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levyhedge",
        description="Simulate jump-diffusion markets and compute optimal quadratic hedges in benchmark units.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_paths=True):
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--seed", type=int, help="master seed")
        if with_paths:
            p.add_argument("--paths", type=int, help="number of Monte Carlo paths")
        p.add_argument("--steps", type=int, help="grid steps over the horizon")
        p.add_argument("--out", help="output directory")

    p = sub.add_parser("figures", help="write per-figure CSV data for the built-in scenarios")
    p.add_argument("names", nargs="*", help=f"figure names ({', '.join(FIGURE_NAMES)}); default all")
    common(p)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("hedge", help="print the optimal hedge for a scenario at time 0")
    p.add_argument("scenario", nargs="?", help=f"built-in scenario name ({', '.join(FIGURE_NAMES)})")
    common(p)
    p.set_defaults(func=cmd_hedge)

    p = sub.add_parser("simulate", help="run the Monte Carlo hedge experiment for a scenario")
    p.add_argument("scenario", nargs="?", help=f"built-in scenario name ({', '.join(FIGURE_NAMES)})")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run a named property suite")
    p.add_argument("suite", choices=SUITE_NAMES + ("all",))
    p.add_argument("--seed", type=int)
    p.add_argument("--paths", type=int, help="Monte Carlo paths per check (suite default if omitted)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegeneracyError as exc:
        print(f"degenerate hedge system: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(
                f"min_eigenvalue={exc.report.min_eigenvalue:.6g} degenerate={exc.report.degenerate}",
                file=sys.stderr,
            )
        return EXIT_DEGENERATE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
