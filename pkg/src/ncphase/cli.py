"""Command line front end.

Subcommands:

    verify    build a representation and check its commutator table (plus
              branch duality and, on request, the commutative limit and
              seeded random closure batches)
    repr      print a representation's coefficient table
    com       centre-of-mass construction and route comparison
    simulate  trajectories of quadratic Hamiltonians and the
              weak-equivalence (free-fall spread) check

Exit codes: 0 all checks passed, 1 ran-and-failed (or a singular
observable map), 2 invalid input or configuration.  Reports are JSON on
stdout unless --output is given; simulate writes CSV trajectories.  A JSON
--config file may hold any long-option value under its option name;
explicit flags win.  The NCPS_SEED environment variable seeds the random
batches.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Any, Sequence

import numpy as np

from . import __version__
from .composite import CompositeSystem, compare_com_reps, compare_com_simple, effective_params
from .dynamics import (
    build_hamiltonian,
    coordinate_spread,
    energy_drift,
    evolve,
    nc_initial_state,
    wep_trajectories,
)
from .errors import ConfigError, NCPhaseError, SingularMapError
from .reports import CheckRecord, CheckReport
from .representation import (
    BRANCHES,
    MassConditions,
    NCParams,
    branch_transform_residual,
    build_representation,
    check_commutative_limit,
    effective_planck,
    params_from_conditions,
    verify_nc_algebra,
)

TOOL = "ncphase"
DEFAULT_SEED = 20260814

_COMMON_DEFAULTS: dict[str, Any] = {
    "hbar": 1.0,
    "tol": 1e-12,
    "format": None,
    "output": None,
    "config": None,
    "family": "branch",
    "branch": "minus",
    "mass": 1.0,
}

_DEFAULTS: dict[str, dict[str, Any]] = {
    "verify": {
        **_COMMON_DEFAULTS,
        "theta": None,
        "eta": None,
        "gamma": None,
        "alpha": None,
        "expect_theta": None,
        "expect_eta": None,
        "expect_diag": None,
        "limit_scales": None,
        "limit_tols": None,
        "random": None,
    },
    "repr": {
        **_COMMON_DEFAULTS,
        "theta": None,
        "eta": None,
        "gamma": None,
        "alpha": None,
    },
    "com": {
        **_COMMON_DEFAULTS,
        "masses": None,
        "gamma": None,
        "alpha": None,
        "thetas": None,
        "etas": None,
    },
    "simulate": {
        **_COMMON_DEFAULTS,
        "theta": None,
        "eta": None,
        "gamma": None,
        "alpha": None,
        "kind": "free",
        "g": 1.0,
        "omega": 1.0,
        "x1": 0.0,
        "x2": 0.0,
        "p1": 0.0,
        "p2": 0.0,
        "t_end": 10.0,
        "dt": 0.01,
        "wep": False,
        "masses": None,
        "nc_x1": 0.0,
        "nc_x2": 0.0,
        "nc_v1": 1.0,
        "nc_v2": 0.0,
    },
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=TOOL, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=str, help="JSON file with option values; flags override")
        p.add_argument("--hbar", type=float, help="Planck constant (default 1)")
        p.add_argument("--tol", type=float, help="check tolerance (default 1e-12)")
        p.add_argument("--output", type=str, help="write the report/trajectory to this path")
        p.add_argument("--format", choices=("json", "csv"), help="output format")

    def add_params(p: argparse.ArgumentParser) -> None:
        p.add_argument("--theta", type=float, help="coordinate noncommutativity")
        p.add_argument("--eta", type=float, help="momentum noncommutativity")
        p.add_argument("--gamma", type=float, help="mass condition: theta = gamma/m")
        p.add_argument("--alpha", type=float, help="mass condition: eta = alpha*m")
        p.add_argument("--mass", type=float, help="particle mass (default 1)")
        p.add_argument("--family", choices=("branch", "simple", "epsilon_general"))
        p.add_argument("--branch", choices=BRANCHES)

    pv = sub.add_parser("verify", help="check a representation's commutator table")
    add_common(pv)
    add_params(pv)
    pv.add_argument("--expect-theta", type=float, dest="expect_theta")
    pv.add_argument("--expect-eta", type=float, dest="expect_eta")
    pv.add_argument("--expect-diag", type=float, dest="expect_diag")
    pv.add_argument("--limit-scales", type=str, dest="limit_scales",
                    help="comma list of scales for the commutative-limit check")
    pv.add_argument("--limit-tols", type=str, dest="limit_tols",
                    help="per-scale tolerances (defaults to the scales themselves)")
    pv.add_argument("--random", type=int, help="run a seeded random closure batch of this size")

    pr = sub.add_parser("repr", help="print a representation's coefficient table")
    add_common(pr)
    add_params(pr)

    pc = sub.add_parser("com", help="centre-of-mass construction and route comparison")
    add_common(pc)
    pc.add_argument("--masses", type=str, help="comma list of particle masses")
    pc.add_argument("--gamma", type=float, help="shared mass condition gamma")
    pc.add_argument("--alpha", type=float, help="shared mass condition alpha")
    pc.add_argument("--thetas", type=str, help="comma list of per-particle theta values")
    pc.add_argument("--etas", type=str, help="comma list of per-particle eta values")
    pc.add_argument("--family", choices=("branch", "simple"))
    pc.add_argument("--branch", choices=BRANCHES)

    ps = sub.add_parser("simulate", help="integrate a quadratic Hamiltonian")
    add_common(ps)
    add_params(ps)
    ps.add_argument("--kind", choices=("free", "uniform_gravity", "gravity", "harmonic"))
    ps.add_argument("--g", type=float, help="gravitational acceleration")
    ps.add_argument("--omega", type=float, help="oscillator frequency")
    ps.add_argument("--x1", type=float, help="initial canonical x1")
    ps.add_argument("--x2", type=float, help="initial canonical x2")
    ps.add_argument("--p1", type=float, help="initial canonical p1")
    ps.add_argument("--p2", type=float, help="initial canonical p2")
    ps.add_argument("--t-end", type=float, dest="t_end")
    ps.add_argument("--dt", type=float)
    ps.add_argument("--wep", action="store_const", const=True,
                    help="compare free fall across masses instead of one trajectory")
    ps.add_argument("--masses", type=str, help="comma list of masses for --wep")
    ps.add_argument("--nc-x1", type=float, dest="nc_x1", help="initial X1 for --wep")
    ps.add_argument("--nc-x2", type=float, dest="nc_x2", help="initial X2 for --wep")
    ps.add_argument("--nc-v1", type=float, dest="nc_v1", help="initial dX1/dt for --wep")
    ps.add_argument("--nc-v2", type=float, dest="nc_v2", help="initial dX2/dt for --wep")
    return parser


def _resolve_config(args: argparse.Namespace) -> dict[str, Any]:
    """defaults <- config file <- explicit flags."""
    defaults = _DEFAULTS[args.command]
    resolved = dict(defaults)
    path = getattr(args, "config", None)
    if path:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        for key, value in file_cfg.items():
            norm = key.replace("-", "_")
            if norm not in defaults:
                raise ConfigError(f"config key {key!r} is not an option of `{args.command}`")
            resolved[norm] = value
        resolved["config"] = path
    for key in defaults:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
    return resolved


def _float_list(value: Any, what: str) -> list[float]:
    if value is None:
        raise ConfigError(f"missing {what}")
    if isinstance(value, str):
        items = [s for s in value.split(",") if s.strip() != ""]
    elif isinstance(value, (list, tuple)):
        items = list(value)
    else:
        raise ConfigError(f"{what} must be a comma list or JSON array, got {value!r}")
    try:
        return [float(s) for s in items]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what} contains a non-numeric entry: {value!r}") from exc


def _resolve_particle_params(cfg: dict[str, Any]) -> NCParams:
    hbar = float(cfg["hbar"])
    mass = float(cfg["mass"])
    if cfg.get("theta") is not None or cfg.get("eta") is not None:
        if cfg.get("theta") is None or cfg.get("eta") is None:
            raise ConfigError("--theta and --eta must be given together")
        return NCParams(theta=float(cfg["theta"]), eta=float(cfg["eta"]), hbar=hbar, mass=mass)
    if cfg.get("gamma") is not None or cfg.get("alpha") is not None:
        if cfg.get("gamma") is None or cfg.get("alpha") is None:
            raise ConfigError("--gamma and --alpha must be given together")
        return params_from_conditions(
            MassConditions(gamma=float(cfg["gamma"]), alpha=float(cfg["alpha"])), mass, hbar
        )
    raise ConfigError("need either --theta/--eta or --gamma/--alpha")


def _config_echo(cfg: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in cfg.items() if k != "config" or v is not None}


def _emit(text: str, cfg: dict[str, Any]) -> None:
    output = cfg.get("output")
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_report(command: str, cfg: dict[str, Any], report: CheckReport, extra_meta: dict | None = None) -> int:
    if cfg.get("format") == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "expected", "measured", "tol", "pass", "detail"])
        for c in sorted(report.checks, key=lambda c: c.name):
            writer.writerow(
                [
                    c.name,
                    "" if c.expected is None else repr(c.expected),
                    "" if c.measured is None else repr(c.measured),
                    repr(c.tol),
                    str(c.passed).lower(),
                    c.detail,
                ]
            )
        _emit(buf.getvalue(), cfg)
        return 0 if report.overall else 1
    payload = report.to_dict()
    if extra_meta:
        payload["meta"].update(extra_meta)
    payload.update(
        {
            "tool": TOOL,
            "version": __version__,
            "command": command,
            "config": _config_echo(cfg),
        }
    )
    _emit(json.dumps(payload, indent=2, sort_keys=True), cfg)
    return 0 if report.overall else 1


def _error_payload(command: str, exc: NCPhaseError) -> str:
    return json.dumps(
        {
            "tool": TOOL,
            "version": __version__,
            "command": command,
            "error": {"type": type(exc).__name__, "message": str(exc)},
        },
        indent=2,
        sort_keys=True,
    )


def _seed() -> int:
    raw = os.environ.get("NCPS_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"NCPS_SEED must be an integer, got {raw!r}") from exc


def random_param_batch(n: int, seed: int) -> list[NCParams]:
    """n random parameter pairs with product in (-5, 1), never zero."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        product = float(rng.uniform(-5.0, 1.0))
        if product == 0.0:
            continue
        ratio = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
        ta = np.sqrt(abs(product) * ratio)
        ea = np.sqrt(abs(product) / ratio)
        if product > 0:
            sign = 1.0 if rng.uniform() < 0.5 else -1.0
            theta, eta = sign * ta, sign * ea
        else:
            if rng.uniform() < 0.5:
                theta, eta = ta, -ea
            else:
                theta, eta = -ta, ea
        out.append(NCParams(theta=float(theta), eta=float(eta)))
    return out


def _table_error(rep) -> float:
    report = verify_nc_algebra(rep)
    return max(abs(c.measured - c.expected) for c in report.checks)


def _cmd_verify(cfg: dict[str, Any]) -> int:
    tol = float(cfg["tol"])
    p = _resolve_particle_params(cfg)
    family = cfg["family"]
    branch = cfg["branch"]
    rep = build_representation(p, family, branch)
    report = verify_nc_algebra(
        rep,
        expect_theta=cfg.get("expect_theta"),
        expect_eta=cfg.get("expect_eta"),
        expect_diag=cfg.get("expect_diag"),
        tol=tol,
    )
    checks = list(report.checks)
    meta = dict(report.meta)

    if family == "simple":
        measured = report.record("[X1,P1]").measured
        expected = effective_planck(p) / p.hbar
        checks.append(
            CheckRecord(
                name="planck.diag",
                expected=expected,
                measured=measured,
                tol=tol,
                passed=abs(measured - expected) <= tol,
                detail="diagonal commutator against hbar_eff/hbar",
            )
        )
    if family == "branch" and p.eta != 0.0 and p.theta / p.eta > 0.0 and p.product != 0.0:
        residual = branch_transform_residual(p)
        checks.append(
            CheckRecord(
                name="transform.residual",
                expected=0.0,
                measured=residual,
                tol=tol,
                passed=residual <= tol,
                detail="plus branch mapped onto minus branch",
            )
        )
    if cfg.get("limit_scales") is not None:
        scales = _float_list(cfg["limit_scales"], "--limit-scales")
        tols = (
            _float_list(cfg["limit_tols"], "--limit-tols")
            if cfg.get("limit_tols") is not None
            else list(scales)
        )
        limit = check_commutative_limit(scales, p, tols)
        checks.extend(limit.checks)
        meta["limit"] = {k: v for k, v in limit.meta.items() if k != "scales"}
    if cfg.get("random") is not None:
        n = int(cfg["random"])
        if n <= 0:
            raise ConfigError(f"--random must be a positive batch size, got {n}")
        seed = _seed()
        meta["seed"] = seed
        batch = random_param_batch(n, seed)
        worst_minus = 0.0
        worst_plus = 0.0
        n_plus = 0
        for q in batch:
            worst_minus = max(worst_minus, _table_error(build_representation(q, "branch", "minus")))
            if q.product > 0:
                n_plus += 1
                worst_plus = max(worst_plus, _table_error(build_representation(q, "branch", "plus")))
        checks.append(
            CheckRecord(
                name="random.closure.minus",
                expected=0.0,
                measured=worst_minus,
                tol=tol,
                passed=worst_minus <= tol,
                detail=f"worst table error over {n} draws",
            )
        )
        checks.append(
            CheckRecord(
                name="random.closure.plus",
                expected=0.0,
                measured=worst_plus,
                tol=tol,
                passed=worst_plus <= tol,
                detail=f"worst table error over the {n_plus} positive-product draws",
            )
        )
    final = CheckReport(kind=report.kind, checks=tuple(checks), meta=meta)
    return _emit_report("verify", cfg, final)


def _cmd_repr(cfg: dict[str, Any]) -> int:
    p = _resolve_particle_params(cfg)
    rep = build_representation(p, cfg["family"], cfg["branch"])
    report = verify_nc_algebra(rep, tol=float(cfg["tol"]))
    forms = {
        name: {str(var): coeff for var, coeff in form.terms.items()}
        for name, form in zip(rep.form_names(), rep.forms())
    }
    constants = {name: form.constant for name, form in zip(rep.form_names(), rep.forms())}
    if cfg.get("format") == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["form", "term", "coefficient"])
        for name in rep.form_names():
            for term, coeff in sorted(forms[name].items()):
                writer.writerow([name, term, repr(coeff)])
            if constants[name] != 0.0:
                writer.writerow([name, "const", repr(constants[name])])
        _emit(buf.getvalue(), cfg)
        return 0
    payload = {
        "tool": TOOL,
        "version": __version__,
        "command": "repr",
        "config": _config_echo(cfg),
        "forms": forms,
        "constants": constants,
        "table": {c.name: c.measured for c in report.checks},
        "overall": report.overall,
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True), cfg)
    return 0


def _cmd_com(cfg: dict[str, Any]) -> int:
    tol = float(cfg["tol"])
    hbar = float(cfg["hbar"])
    masses = _float_list(cfg.get("masses"), "--masses")
    conditioned = cfg.get("gamma") is not None and cfg.get("alpha") is not None
    if conditioned:
        system = CompositeSystem.from_conditions(
            MassConditions(gamma=float(cfg["gamma"]), alpha=float(cfg["alpha"])), masses, hbar
        )
    elif cfg.get("thetas") is not None or cfg.get("etas") is not None:
        system = CompositeSystem.from_params(
            masses,
            _float_list(cfg.get("thetas"), "--thetas"),
            _float_list(cfg.get("etas"), "--etas"),
            hbar,
        )
    else:
        raise ConfigError("need either --gamma/--alpha or --thetas/--etas")
    if cfg["family"] == "simple":
        report = compare_com_simple(system, tol)
    else:
        report = compare_com_reps(system, cfg["branch"], tol)
    checks = report.checks
    if not conditioned:
        # Without shared conditions there is no claim that the two routes
        # agree; their distances are data, not a failure.
        checks = tuple(
            CheckRecord(
                name=c.name,
                expected=None,
                measured=c.measured,
                tol=c.tol,
                passed=True,
                detail="informational: no shared mass conditions",
            )
            if c.name.startswith("routes.")
            else c
            for c in checks
        )
    theta_eff, eta_eff = effective_params(system)
    extra = {
        "conditions_used": conditioned,
        "masses": masses,
        "theta_eff": theta_eff,
        "eta_eff": eta_eff,
    }
    final = CheckReport(kind=report.kind, checks=checks, meta=report.meta)
    return _emit_report("com", cfg, final, extra_meta=extra)


def _cmd_simulate(cfg: dict[str, Any]) -> int:
    if cfg.get("wep"):
        return _cmd_simulate_wep(cfg)
    p = _resolve_particle_params(cfg)
    rep = build_representation(p, cfg["family"], cfg["branch"])
    kind = {"gravity": "uniform_gravity"}.get(cfg["kind"], cfg["kind"])
    h = build_hamiltonian(kind, rep, g=float(cfg["g"]), omega=float(cfg["omega"]))
    initial = (float(cfg["x1"]), float(cfg["x2"]), float(cfg["p1"]), float(cfg["p2"]))
    traj = evolve(h, initial, float(cfg["t_end"]), float(cfg["dt"]))
    if cfg.get("format") == "json":
        payload = {
            "tool": TOOL,
            "version": __version__,
            "command": "simulate",
            "config": _config_echo(cfg),
            "columns": ["t", "x1", "x2", "p1", "p2", "X1", "X2", "P1", "P2"],
            "rows": [
                [t, *state, *obs]
                for t, state, obs in zip(
                    traj.times.tolist(),
                    traj.canonical_states.tolist(),
                    traj.nc_observables.tolist(),
                )
            ],
            "energy_drift": energy_drift(h, traj),
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True), cfg)
        return 0
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "x1", "x2", "p1", "p2", "X1", "X2", "P1", "P2"])
    for t, state, obs in zip(traj.times, traj.canonical_states, traj.nc_observables):
        writer.writerow([repr(float(t))] + [repr(float(v)) for v in state] + [repr(float(v)) for v in obs])
    _emit(buf.getvalue(), cfg)
    return 0


def _cmd_simulate_wep(cfg: dict[str, Any]) -> int:
    hbar = float(cfg["hbar"])
    masses = _float_list(cfg.get("masses"), "--masses")
    if len(masses) < 2:
        raise ConfigError(f"--wep needs at least two masses, got {masses}")
    conditioned = cfg.get("gamma") is not None and cfg.get("alpha") is not None
    if conditioned:
        cond = MassConditions(gamma=float(cfg["gamma"]), alpha=float(cfg["alpha"]))
        params = [params_from_conditions(cond, m, hbar) for m in masses]
    elif cfg.get("theta") is not None and cfg.get("eta") is not None:
        params = [
            NCParams(theta=float(cfg["theta"]), eta=float(cfg["eta"]), hbar=hbar, mass=m)
            for m in masses
        ]
    else:
        raise ConfigError("--wep needs either --gamma/--alpha or --theta/--eta")
    reps = [build_representation(q, cfg["family"], cfg["branch"]) for q in params]
    nc_data = (
        float(cfg["nc_x1"]),
        float(cfg["nc_x2"]),
        float(cfg["nc_v1"]),
        float(cfg["nc_v2"]),
    )
    runs = wep_trajectories(reps, nc_data, float(cfg["g"]), float(cfg["t_end"]), float(cfg["dt"]))
    payload = {
        "tool": TOOL,
        "version": __version__,
        "command": "simulate",
        "config": _config_echo(cfg),
        "summary": {
            "deviation_max": coordinate_spread(runs),
            "conditions_used": conditioned,
            "masses": masses,
            "family": cfg["family"],
            "branch": cfg["branch"],
            "energy_drift_max": max(energy_drift(h, traj) for h, traj in runs),
        },
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True), cfg)
    return 0


_COMMANDS = {
    "verify": _cmd_verify,
    "repr": _cmd_repr,
    "com": _cmd_com,
    "simulate": _cmd_simulate,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        return _COMMANDS[args.command](cfg)
    except SingularMapError as exc:
        sys.stdout.write(_error_payload(args.command, exc) + "\n")
        return 1
    except NCPhaseError as exc:
        sys.stdout.write(_error_payload(args.command, exc) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
