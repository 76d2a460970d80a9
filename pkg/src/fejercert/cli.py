"""Scenario-driven command line: compute certificates, run iterations,
verify them empirically, and emit machine-readable reports.

Exit codes: rate -> 2 on an exceeded evaluation/saturation cap;
verify -> 0 verified, 3 violation, 4 inconclusive; suite -> nonzero if
any scenario is non-verified.  Configuration errors exit 1.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .checker import INCONCLUSIVE, VERIFIED, verify_certificate
from .iterations import trajectory_csv
from .moduli import Modulus
from .rates import CapExceeded
from .scenario import Scenario, ScenarioError, build_certificate, build_runtime, parse_scenario

SCENARIO_DIR_ENV = "FEJERCERT_SCENARIO_DIR"


def _load_scenario(path: str, g_override: str = None) -> Scenario:
    text = Path(path).read_text(encoding="utf-8")
    sc = parse_scenario(text)
    if g_override:
        sc.g = Modulus.from_json(json.loads(g_override))
    return sc


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def cmd_rate(args) -> int:
    sc = _load_scenario(args.scenario, args.g)
    if args.k is not None:
        sc.k = args.k
    try:
        cert = build_certificate(sc)
    except CapExceeded as exc:
        _emit({"error": "cap_exceeded", "message": str(exc)})
        return 2
    if cert.saturated:
        _emit(
            {
                "error": "cap_exceeded",
                "message": "bound exceeds the saturation cap",
                "certificate": cert.to_json(),
            }
        )
        return 2
    _emit(cert.to_json())
    return 0


def cmd_simulate(args) -> int:
    sc = _load_scenario(args.scenario, args.g)
    runtime = build_runtime(sc)
    steps = args.steps
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_text = trajectory_csv(runtime.traj, steps, runtime.family, k0=sc.k)
    csv_path = out_dir / f"{sc.name}.csv"
    csv_path.write_text(csv_text, encoding="utf-8")
    sidecar = {
        "scenario": sc.to_json(),
        "steps": steps,
        "tool": f"fejercert {__version__}",
    }
    sidecar_path = out_dir / f"{sc.name}.json"
    sidecar_path.write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    _emit({"csv": str(csv_path), "sidecar": str(sidecar_path), "rows": steps + 1})
    return 0


def cmd_verify(args) -> int:
    sc = _load_scenario(args.scenario, args.g)
    if args.tau is not None:
        sc.checker.tau = args.tau
    if args.cap is not None:
        sc.caps.search = args.cap
    runtime = build_runtime(sc)
    try:
        verdict = verify_certificate(runtime, cap=sc.caps.search)
    except ScenarioError as exc:
        _emit({"error": "config", "message": str(exc)})
        return 1
    _emit(verdict.to_json())
    if verdict.status == VERIFIED:
        return 0
    if verdict.status == INCONCLUSIVE:
        return 4
    return 3


def _scenario_sources(args) -> list:
    """(name, json text) pairs from the chosen scenario directory."""
    if args.dir:
        root = Path(args.dir)
    elif os.environ.get(SCENARIO_DIR_ENV):
        root = Path(os.environ[SCENARIO_DIR_ENV])
    else:
        root = resources.files("fejercert") / "scenarios"
    entries = sorted(
        (entry.name, entry) for entry in root.iterdir() if entry.name.endswith(".json")
    )
    if not args.include_adversarial:
        entries = [(name, e) for name, e in entries if not name.startswith("adversarial")]
    return [(name, entry.read_text(encoding="utf-8")) for name, entry in entries]


def cmd_suite(args) -> int:
    try:
        sources = _scenario_sources(args)
    except FileNotFoundError:
        sources = []
    if not sources:
        _emit({"error": "no scenarios", "message": "no scenario files found"})
        return 1
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    all_ok = True
    for _, text in sources:
        sc = parse_scenario(text)
        if args.cap is not None:
            sc.caps.search = args.cap
        runtime = build_runtime(sc)
        try:
            cert = build_certificate(sc)
            verdict = verify_certificate(runtime, certificate=cert, cap=sc.caps.search)
            bound = cert.bound_decimal()
            theorem = cert.theorem
        except CapExceeded as exc:
            verdict = None
            bound = f"cap_exceeded: {exc}"
            theorem = runtime.expected_theorem
        status = verdict.status if verdict else INCONCLUSIVE
        witness = verdict.witness.n if verdict and verdict.witness else None
        rows.append(
            {
                "scenario": sc.name,
                "theorem": theorem,
                "bound": bound,
                "witness": witness,
                "status": status,
            }
        )
        all_ok = all_ok and status == VERIFIED
    report = {"scenarios": rows, "all_verified": all_ok}
    (out_dir / "suite.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    with (out_dir / "suite.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=["scenario", "theorem", "bound", "witness", "status"])
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    _emit(report)
    return 0 if all_ok else 3


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fejercert",
        description="Convergence certificates for Fejer monotone iterations.",
    )
    parser.add_argument("--version", action="version", version=f"fejercert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rate = sub.add_parser("rate", help="compute a scenario's certificate")
    p_rate.add_argument("--scenario", required=True)
    p_rate.add_argument("--g", help="counter-function JSON overriding the scenario's g")
    p_rate.add_argument("--k", type=int, help="error level overriding the scenario's k")
    p_rate.set_defaults(fn=cmd_rate)

    p_sim = sub.add_parser("simulate", help="run the iteration and write CSV")
    p_sim.add_argument("--scenario", required=True)
    p_sim.add_argument("--steps", type=int, default=100)
    p_sim.add_argument("--out", default="out")
    p_sim.add_argument("--g", help="counter-function JSON overriding the scenario's g")
    p_sim.set_defaults(fn=cmd_simulate)

    p_ver = sub.add_parser("verify", help="verify the certificate against the trajectory")
    p_ver.add_argument("--scenario", required=True)
    p_ver.add_argument("--cap", type=int, help="witness search cap")
    p_ver.add_argument("--tau", type=float, help="float comparison slack")
    p_ver.add_argument("--g", help="counter-function JSON overriding the scenario's g")
    p_ver.set_defaults(fn=cmd_verify)

    p_suite = sub.add_parser("suite", help="run every shipped scenario and report")
    p_suite.add_argument("--dir", help=f"scenario directory (default ${SCENARIO_DIR_ENV} or packaged)")
    p_suite.add_argument("--out", default="out")
    p_suite.add_argument("--cap", type=int)
    p_suite.add_argument("--include-adversarial", action="store_true")
    p_suite.set_defaults(fn=cmd_suite)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ScenarioError as exc:
        _emit({"error": "config", "message": str(exc)})
        return 1
    except FileNotFoundError as exc:
        _emit({"error": "io", "message": str(exc)})
        return 1


if __name__ == "__main__":
    sys.exit(main())
