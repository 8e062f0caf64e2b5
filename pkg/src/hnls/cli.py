"""Command-line driver: single runs, domain-length sweeps, convergence studies.

Verbs:
    run <config>       integrate once, write norms CSV / snapshots
    sweep <config>     one run per [sweep] beta offset, write the drop table
    converge <config>  refinement study, write a JSON report
    validate <config>  parse + admissibility check only

Exit codes: 0 ok, 2 config error, 3 contraction failure, 4 iteration cap,
5 domain violation.  All CSV output is deterministic: repeated runs of the
same config on the same build are byte-identical (wall time lives in the
side metadata JSON, never in the CSV).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__, kernels
from .boundary import eval_boundary, validate_domain
from .config import ScenarioSpec, parse_config
from .diagnostics import convergence_study, delta_l2_sweep, physical_l2
from .errors import ConfigError, ContractionFailure, MaxPicardExceeded
from .scenarios import scheme_config_for
from .stepper import SchemeConfig, integrate, map_to_physical

ADVECTION_NOTE = "L(x,t) = -alpha'*p + x*(ln p)'; applied as i*L at the old time level"
DELTA_NOTE = "delta_l2 = max over steps of sqrt(width)*||u||_2 drop from its initial value"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONTRACTION = 3
EXIT_MAX_PICARD = 4
EXIT_DOMAIN = 5


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _metadata(spec: ScenarioSpec, cfg: SchemeConfig) -> dict:
    sc = spec.scenario
    return {
        "name": sc.name,
        "version": __version__,
        "kernel_path": "numba" if kernels.USING_NUMBA else "numpy",
        "gamma": _fmt(sc.gamma),
        "chi": _fmt(sc.chi),
        "cubic_sign": _fmt(sc.cubic_sign),
        "alpha": f"{sc.domain.alpha.kind}{sc.domain.alpha.params}",
        "beta": f"{sc.domain.beta.kind}{sc.domain.beta.params}",
        "min_width": _fmt(sc.domain.alpha0),
        "max_width": _fmt(sc.domain.beta0),
        "initial": spec.scenario.initial.kind,
        "M": str(sc.M),
        "dt": _fmt(cfg.dt),
        "T": _fmt(sc.T),
        "delta_hat": _fmt(cfg.delta_hat),
        "max_picard": str(cfg.max_picard),
        "coeff_time": cfg.coeff_time,
        "advection_convention": ADVECTION_NOTE,
        "delta_l2_definition": DELTA_NOTE,
    }


def _write_csv(path, meta: dict, header: str, rows) -> None:
    with open(path, "w") as fh:
        for k, v in meta.items():
            fh.write(f"# {k} = {v}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def _norm_rows(records):
    for r in records:
        yield ",".join(
            [
                _fmt(r.t), _fmt(r.l2), _fmt(r.h1_seminorm), _fmt(r.weighted_exp),
                _fmt(r.weighted_q), _fmt(r.conservation_residual), str(r.picard_iterations),
            ]
        )


NORMS_HEADER = "t,l2,h1,weighted_exp,weighted_q,conservation_residual,picard_iters"


def _write_norms(path, meta, records):
    _write_csv(path, meta, NORMS_HEADER, _norm_rows(records))


def _write_meta_json(out_dir, name, meta, wall_time, files):
    payload = dict(meta)
    payload["wall_time_seconds"] = wall_time
    payload["files"] = files
    with open(os.path.join(out_dir, f"{name}_meta.json"), "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _scheme_config(spec: ScenarioSpec, args) -> SchemeConfig:
    kw = dict(delta_hat=spec.delta_hat, max_picard=spec.max_picard, coeff_time=spec.coeff_time)
    if args.delta_hat is not None:
        kw["delta_hat"] = args.delta_hat
    if args.max_picard is not None:
        kw["max_picard"] = args.max_picard
    if args.coeff_time is not None:
        kw["coeff_time"] = args.coeff_time
    return scheme_config_for(spec.scenario, **kw)


def _check_domain(spec: ScenarioSpec) -> None:
    violation = validate_domain(spec.scenario.domain)
    if violation is not None:
        raise _DomainViolation(violation)


class _DomainViolation(Exception):
    def __init__(self, violation):
        super().__init__(f"width {violation.width:.6g} at t={violation.t:.6g} outside bounds")
        self.violation = violation


def _snapshot_steps(spec: ScenarioSpec, dt: float) -> dict[int, float]:
    steps = {}
    for t in spec.outputs.snapshots:
        k = int(round(t / dt))
        if abs(k * dt - t) > 1e-6 * max(dt, abs(t)):
            raise ConfigError(f"snapshot time {t} is not a multiple of dt={dt}")
        steps[k] = t
    return steps


def _cmd_run(spec: ScenarioSpec, args) -> int:
    cfg = _scheme_config(spec, args)
    _check_domain(spec)
    meta = _metadata(spec, cfg)
    out_dir = args.out_dir
    os.makedirs(out_dir, exist_ok=True)
    sc = spec.scenario
    norms_path = os.path.join(out_dir, spec.outputs.norms_csv or f"{sc.name}_norms.csv")

    snap_steps = _snapshot_steps(spec, cfg.dt)
    snapshots = {}

    def collect(step, t, u):
        if step in snap_steps:
            snapshots[step] = (t, u.copy())

    started = time.perf_counter()
    files = [os.path.basename(norms_path)]
    try:
        traj = integrate(sc, cfg, callbacks=[collect])
    except (ContractionFailure, MaxPicardExceeded) as err:
        _write_norms(norms_path, meta, err.records)
        _write_meta_json(out_dir, sc.name, meta, time.perf_counter() - started, files)
        print(f"{type(err).__name__} at step {err.step}: {err}", file=sys.stderr)
        print(f"partial diagnostics written to {norms_path}", file=sys.stderr)
        return EXIT_CONTRACTION if isinstance(err, ContractionFailure) else EXIT_MAX_PICARD

    _write_norms(norms_path, meta, traj.records)
    for step, (t, u) in sorted(snapshots.items()):
        xi, v = map_to_physical(u, sc.domain, t)
        path = os.path.join(out_dir, f"{spec.outputs.snapshot_prefix}_t{_fmt(t)}.csv")
        rows = (
            ",".join([_fmt(a), _fmt(b.real), _fmt(b.imag), _fmt(abs(b))])
            for a, b in zip(xi, v)
        )
        _write_csv(path, meta, "xi,re,im,abs", rows)
        files.append(os.path.basename(path))
    _write_meta_json(out_dir, sc.name, meta, time.perf_counter() - started, files)
    print(f"wrote {norms_path} ({len(traj.records)} rows)")
    return EXIT_OK


def _sweep_one(scenario):
    return delta_l2_sweep([scenario])[0]


def _cmd_sweep(spec: ScenarioSpec, args) -> int:
    cfg = _scheme_config(spec, args)
    out_dir = args.out_dir
    os.makedirs(out_dir, exist_ok=True)
    family = []
    for xf in spec.sweep.beta_offsets:
        beta = spec.scenario.domain.beta
        if beta.kind == "sinusoidal":
            new_beta = replace(beta, params=(xf,) + beta.params[1:])
        elif beta.kind == "constant":
            new_beta = replace(beta, params=(xf,))
        else:
            raise ConfigError("sweep requires a sinusoidal or constant beta profile")
        dom = replace(spec.scenario.domain, beta=new_beta)
        member = replace(
            spec.scenario,
            name=f"{spec.scenario.name}_xf{xf:g}",
            domain=dom,
            dt=cfg.dt,
        )
        v = validate_domain(dom)
        if v is not None:
            raise _DomainViolation(v)
        family.append(member)

    started = time.perf_counter()
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_one, family))
    else:
        rows = [_sweep_one(s) for s in family]

    meta = _metadata(spec, cfg)
    path = os.path.join(out_dir, f"{spec.scenario.name}_sweep.csv")
    _write_csv(
        path,
        meta,
        "x0,xf,length,delta_l2",
        (",".join([_fmt(r.x0), _fmt(r.xf), _fmt(r.length), _fmt(r.delta_l2)]) for r in rows),
    )
    _write_meta_json(out_dir, f"{spec.scenario.name}_sweep", meta,
                     time.perf_counter() - started, [os.path.basename(path)])
    print(f"wrote {path} ({len(rows)} rows)")
    return EXIT_OK


def _cmd_converge(spec: ScenarioSpec, args) -> int:
    cfg = _scheme_config(spec, args)
    _check_domain(spec)
    out_dir = args.out_dir
    os.makedirs(out_dir, exist_ok=True)
    conv = spec.convergence
    base_cfg = cfg if conv.space_dt is None else replace(cfg, dt=conv.space_dt)
    started = time.perf_counter()
    report = convergence_study(
        spec.scenario,
        base_cfg,
        conv.space_levels,
        conv.time_levels,
        reference=conv.reference,
        jobs=args.jobs,
    )
    meta = _metadata(spec, cfg)
    payload = dict(meta)
    payload["observed_space_order"] = report.observed_space_order
    payload["observed_time_order"] = report.observed_time_order
    payload["levels"] = [
        {"dx": dx, "dt": dt, "error": err} for dx, dt, err in report.levels
    ]
    path = os.path.join(out_dir, f"{spec.scenario.name}_convergence.json")
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_meta_json(out_dir, f"{spec.scenario.name}_convergence", meta,
                     time.perf_counter() - started, [os.path.basename(path)])
    print(
        f"wrote {path} (space order {report.observed_space_order:.3f}, "
        f"time order {report.observed_time_order:.3f})"
    )
    return EXIT_OK


def _cmd_validate(spec: ScenarioSpec, args) -> int:
    violation = validate_domain(spec.scenario.domain)
    if violation is not None:
        print(
            f"domain violation: width {violation.width:.6g} at t={violation.t:.6g}",
            file=sys.stderr,
        )
        return EXIT_DOMAIN
    u0 = spec.scenario.initial_state()
    a, b, _, _ = eval_boundary(spec.scenario.domain, 0.0)
    l2 = physical_l2(float(np.sqrt(np.sum(np.abs(u0.values) ** 2) / spec.scenario.M)), b - a)
    print(f"{spec.scenario.name}: ok (initial physical L2 norm {l2:.6g})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hnls",
        description="Dispersive wave solver on an interval with moving endpoints",
    )
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb, fn in (
        ("run", _cmd_run),
        ("sweep", _cmd_sweep),
        ("converge", _cmd_converge),
        ("validate", _cmd_validate),
    ):
        p = sub.add_parser(verb)
        p.add_argument("config")
        p.add_argument("--out-dir", default=".")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--coeff-time", choices=("tn", "midpoint"), default=None)
        p.add_argument("--delta-hat", type=float, default=None)
        p.add_argument("--max-picard", type=int, default=None)
        p.set_defaults(func=fn)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = parse_config(args.config)
        return args.func(spec, args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except _DomainViolation as err:
        print(f"domain violation: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except ContractionFailure as err:
        print(f"contraction failure: {err}", file=sys.stderr)
        return EXIT_CONTRACTION
    except MaxPicardExceeded as err:
        print(f"iteration cap: {err}", file=sys.stderr)
        return EXIT_MAX_PICARD


if __name__ == "__main__":
    sys.exit(main())
