"""Command-line driver: scenario/data runs, oracle comparison, convergence
studies, benchmarking, and coefficient/identity inspection.

A run is reproducible from its JSON config alone; every artifact embeds the
config hash and the scheme sign convention.  Wall-clock timings go to
stdout only, never into artifacts, so identical configs produce
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import brackets as br
from .coefficients import (
    CoeffTable,
    cmk,
    p1_product_check,
    pmk,
    sigma_identity_check,
    verify_cmk_identity,
    verify_pmk_identity,
)
from .fields import FieldSeries,SampledRate, SampledSpeed
from .oracle import ConeQuadSpec, direct_u, direct_u_lattice, phase_fraction
from .scenarios import (
    scenario_1d,
    scenario_2d,
    scenario_bump_3d,
    scenario_constant,
    scenario_invsqrt_speed,
)
from .snapshot import read_field, write_csv_1d, write_field
from .solvers import (
    SchemeParams,
    check_cfl,
    scheme_residual,
    solve_1d,
    solve_2d,
    solve_3d,
    unwarp,
)
from .timewarp import build_warp, warped_source

SCHEME_CONVENTION = "middle-weight +(1-2*eta)"

MODES = ("solve", "oracle", "compare", "convergence", "bench", "coeffs", "identities")


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


@dataclass
class RunConfig:
    """Validated run configuration (fully serializable)."""

    mode: str
    raw: dict
    out: Path
    seed: int
    threads: int = 1

    @property
    def digest(self) -> str:
        return config_hash(self.raw)


def config_hash(raw: dict) -> str:
    blob = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _get(raw: dict, key: str, default=None, required=False):
    if key not in raw:
        if required:
            raise ConfigError(f"config field '{key}' is required")
        return default
    return raw[key]


def load_config(path, overrides: dict | None = None) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if overrides:
        raw.update({k: v for k, v in overrides.items() if v is not None})
    mode = _get(raw, "mode", required=True)
    if mode not in MODES:
        raise ConfigError(f"config field 'mode' must be one of {MODES}, got {mode!r}")
    out = Path(_get(raw, "out", default="timecone-out"))
    seed = int(_get(raw, "seed", default=0))
    threads = int(_get(raw, "threads", default=1))
    return RunConfig(mode=mode, raw=raw, out=out, seed=seed, threads=threads)


def _quad_from(raw: dict) -> ConeQuadSpec:
    q = _get(raw, "quad", default={})
    try:
        return ConeQuadSpec(
            n_s=int(q.get("n_s", 64)),
            n_r=int(q.get("n_r", 64)),
            n_ang=int(q.get("n_ang", 64)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config field 'quad' is invalid: {exc}") from exc


def _load_speed_csv(path) -> SampledSpeed:
    knots, vals = [], []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.lower().startswith("t"):
            continue
        t, r = line.split(",")
        knots.append(float(t))
        vals.append(float(r))
    return SampledSpeed(np.array(knots), np.array(vals))


def build_inputs(cfg: RunConfig):
    """Scenario or data inputs per the config; returns (rate, speed)."""
    raw = cfg.raw
    if "scenario" in raw and "input" in raw:
        raise ConfigError("give either 'scenario' or 'input', not both")
    if "input" in raw:
        spec = raw["input"]
        alpha_path = _get(spec, "alpha", required=True)
        rho_path = _get(spec, "rho", required=True)
        series = read_field(alpha_path)
        speed = _load_speed_csv(rho_path)
        rate = SampledRate(series.grid, series.times, series.levels)
        return rate, speed
    spec = _get(raw, "scenario", required=True)
    name = _get(spec, "name", required=True)
    if name == "const":
        return scenario_constant(
            alpha0=float(spec.get("alpha0", 1.0)),
            rho0=float(spec.get("rho0", 1.0)),
            dim=int(spec.get("dim", 3)),
            n_points=int(spec.get("n_points", 16)),
            n_knots=int(spec.get("n_knots", 8)),
            horizon=float(spec.get("horizon", 1.0)),
        )
    if name == "pulse-1d":
        return scenario_1d(
            n_points=int(spec.get("n_points", 256)),
            n_knots=int(spec.get("n_knots", 512)),
        )
    if name == "hexagon-2d":
        return scenario_2d(
            seed=int(spec.get("seed", cfg.seed)),
            n_points=int(spec.get("n_points", 64)),
            n_knots=int(spec.get("n_knots", 512)),
        )
    if name == "bump-3d":
        return scenario_bump_3d(
            n_points=int(spec.get("n_points", 32)),
            n_knots=int(spec.get("n_knots", 16)),
            horizon=float(spec.get("horizon", 0.5)),
        )
    if name == "invsqrt-speed":
        raise ConfigError("'invsqrt-speed' is a speed-only preset; use mode=coeffs "
                          "or supply it as data")
    raise ConfigError(f"unknown scenario name {name!r}")


def _solve_pipeline(cfg: RunConfig):
    raw = cfg.raw
    rate, speed = build_inputs(cfg)
    n_tau = int(_get(raw, "n_tau", required=True))
    warp = build_warp(speed, n_tau)
    F = warped_source(rate, speed, warp)
    scheme = _get(raw, "scheme", default={})
    params = SchemeParams(
        eta=float(scheme.get("eta", 0.25)),
        dtau=warp.dtau,
        step=F.grid.step,
        start_rule=scheme.get("start_rule", "taylor"),
    )
    status = check_cfl(params, F.grid.dim)
    if not status.ok:
        raise ConfigError(f"scheme rejected: {status.note}")
    dim = F.grid.dim
    if dim == 1:
        report = solve_1d(F, params)
    elif dim == 2:
        report = solve_2d(F, params, n_theta=int(_get(raw, "n_theta", default=64)))
    else:
        report = solve_3d(F, params)
    return rate, speed, warp, F, params, report


def _sample_points(cfg: RunConfig, grid, n_levels: int):
    """Seeded (lattice index, level) sample points for compare/oracle."""
    spec = _get(cfg.raw, "samples", default={})
    count = int(spec.get("count", 8))
    rng = np.random.default_rng(int(spec.get("seed", cfg.seed)))
    pts = []
    for _ in range(count):
        n = int(rng.integers(1, n_levels))
        idx = tuple(int(v) for v in rng.integers(0, grid.counts))
        pts.append((n, idx))
    return pts


def run(cfg: RunConfig) -> int:
    """Execute one configured run; returns the process exit status."""
    handler = {
        "solve": _run_solve,
        "oracle": _run_oracle,
        "compare": _run_compare,
        "convergence": _run_convergence,
        "bench": _run_bench,
        "coeffs": _run_coeffs,
        "identities": _run_identities,
    }[cfg.mode]
    return handler(cfg)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _run_solve(cfg: RunConfig) -> int:
    rate, speed, warp, F, params, report = _solve_pipeline(cfg)
    u = unwarp(report, warp)
    cfg.out.mkdir(parents=True, exist_ok=True)
    for label, series in report.series.items():
        write_field(
            series,
            cfg.out / f"{label}.tcone",
            config_hash=cfg.digest,
            scheme_note=SCHEME_CONVENTION.replace(" ", ""),
        )
    write_field(
        u, cfg.out / "u.tcone", config_hash=cfg.digest,
        scheme_note=SCHEME_CONVENTION.replace(" ", ""),
    )
    if u.grid.dim == 1:
        write_csv_1d(u, cfg.out / "u.csv")
    final = report.series["U0"].levels[-1]
    summary = {
        "config": cfg.digest,
        "scheme_convention": SCHEME_CONVENTION,
        "stability": report.stability_note,
        "start_rule": params.start_rule,
        "n_tau": warp.n_tau,
        "dtau": warp.dtau,
        "final_min": float(final.min()),
        "final_max": float(final.max()),
        "final_phase_fraction_max": float(phase_fraction(float(final.max()))),
    }
    _write_json(cfg.out / "report.json", summary)
    print(f"solve: wrote {cfg.out}/ (config {cfg.digest})")
    print(f"  {report.stability_note}; convention: {SCHEME_CONVENTION}")
    print(f"  final level min={summary['final_min']:.6g} max={summary['final_max']:.6g}")
    print(f"  wall time {report.wall_time:.3f}s")
    return 0


def _run_oracle(cfg: RunConfig) -> int:
    rate, speed = build_inputs(cfg)
    n_tau = int(_get(cfg.raw, "n_tau", required=True))
    warp = build_warp(speed, n_tau)
    quad = _quad_from(cfg.raw)
    cfg.out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    if _get(cfg.raw, "lattice", default=False):
        t = warp.horizon
        values = direct_u_lattice(rate, speed, warp, t, quad)
        out = {
            "config": cfg.digest,
            "t": t,
            "min": float(values.min()),
            "max": float(values.max()),
            "mean": float(values.mean()),
        }
        _write_json(cfg.out / "oracle.json", out)
    else:
        pts = _sample_points(cfg, rate.grid, warp.n_tau + 1)
        rows = []
        for n, idx in pts:
            x = np.array(idx) * rate.grid.step
            t = float(warp.t_hat[n])
            rows.append(
                {
                    "level": n,
                    "index": list(idx),
                    "t_hat": t,
                    "u": float(direct_u(rate, speed, warp, x, t, quad)),
                }
            )
        _write_json(cfg.out / "oracle.json", {"config": cfg.digest, "points": rows})
    print(f"oracle: wrote {cfg.out}/oracle.json ({time.perf_counter()-t0:.3f}s)")
    return 0


def _run_compare(cfg: RunConfig) -> int:
    rate, speed, warp, F, params, report = _solve_pipeline(cfg)
    u = unwarp(report, warp)
    quad = _quad_from(cfg.raw)
    pts = _sample_points(cfg, rate.grid, u.n_levels)
    rows = []
    worst = 0.0
    for n, idx in pts:
        x = np.array(idx) * rate.grid.step
        t = float(warp.t_hat[n])
        o = float(direct_u(rate, speed, warp, x, t, quad))
        s = float(u.levels[n][idx])
        rel = abs(s - o) / max(o, 1e-6)
        worst = max(worst, rel)
        rows.append(
            {"level": n, "index": list(idx), "t_hat": t, "solver": s,
             "oracle": o, "rel_diff": rel}
        )
    cfg.out.mkdir(parents=True, exist_ok=True)
    _write_json(
        cfg.out / "compare.json",
        {
            "config": cfg.digest,
            "scheme_convention": SCHEME_CONVENTION,
            "points": rows,
            "max_rel_diff": worst,
        },
    )
    for row in rows:
        print(
            f"  level {row['level']:4d} idx {tuple(row['index'])} "
            f"solver {row['solver']:.6g} oracle {row['oracle']:.6g} "
            f"rel {row['rel_diff']:.3e}"
        )
    print(f"compare: max relative difference {worst:.3e} -> {cfg.out}/compare.json")
    return 0


def _run_convergence(cfg: RunConfig) -> int:
    raw = cfg.raw
    rate, speed = build_inputs(cfg)
    n_tau = int(_get(raw, "n_tau", required=True))
    scheme = _get(raw, "scheme", default={})
    finals = []
    for mult in (1, 2, 4):
        warp = build_warp(speed, n_tau * mult)
        F = warped_source(rate, speed, warp)
        params = SchemeParams(
            eta=float(scheme.get("eta", 0.25)),
            dtau=warp.dtau,
            step=F.grid.step,
            start_rule=scheme.get("start_rule", "taylor"),
        )
        dim = F.grid.dim
        if dim == 1:
            rep = solve_1d(F, params)
        elif dim == 2:
            rep = solve_2d(F, params, n_theta=int(_get(raw, "n_theta", default=64)))
        else:
            rep = solve_3d(F, params)
        finals.append(rep.series["U0"].levels[-1])
    e1 = float(np.max(np.abs(finals[0] - finals[1])))
    e2 = float(np.max(np.abs(finals[1] - finals[2])))
    order = math.log2(e1 / e2) if e2 > 0 else float("inf")
    print(f"convergence: |u_h - u_h/2| = {e1:.6e}, |u_h/2 - u_h/4| = {e2:.6e}")
    print(f"observed temporal order: {order:.3f}")
    cfg.out.mkdir(parents=True, exist_ok=True)
    _write_json(
        cfg.out / "convergence.json",
        {"config": cfg.digest, "e_coarse": e1, "e_fine": e2, "order": order},
    )
    return 0


def _run_bench(cfg: RunConfig) -> int:
    """Solver wall time versus brute-force oracle cost on the lattice.

    The oracle cost is measured on a pinned sample of lattice points and
    scaled to the full lattice (per-point cost is constant by
    construction); pass ``bench.oracle_points = "all"`` for a literal full
    sweep.
    """
    rate, speed, warp, F, params, report = _solve_pipeline(cfg)
    quad = _quad_from(cfg.raw)
    bench = _get(cfg.raw, "bench", default={})
    n_lattice = int(np.prod(rate.grid.counts))
    t_final = warp.horizon
    if bench.get("oracle_points", 32) == "all":
        t0 = time.perf_counter()
        direct_u_lattice(rate, speed, warp, t_final, quad)
        oracle_total = time.perf_counter() - t0
        measured = n_lattice
        note = "full lattice sweep"
    else:
        k = int(bench.get("oracle_points", 32))
        rng = np.random.default_rng(cfg.seed)
        idx = rng.integers(0, rate.grid.counts, size=(k, rate.grid.dim))
        pts = idx * rate.grid.step
        t0 = time.perf_counter()
        direct_u(rate, speed, warp, pts, t_final, quad)
        per_point = (time.perf_counter() - t0) / k
        oracle_total = per_point * n_lattice
        measured = k
        note = f"extrapolated from {k} of {n_lattice} lattice points"
    ratio = oracle_total / report.wall_time
    print(f"bench: solver {report.wall_time:.3f}s")
    print(f"bench: oracle-on-lattice {oracle_total:.3f}s ({note})")
    print(f"bench: ratio oracle/solver = {ratio:.1f}x (floor 5x)")
    print(f"bench: grid {rate.grid.counts}, n_tau {warp.n_tau}, quad "
          f"({quad.n_s},{quad.n_r},{quad.n_ang}), measured points {measured}")
    return 0 if ratio >= 5.0 else 1


def _run_coeffs(cfg: RunConfig) -> int:
    m = int(_get(cfg.raw, "m", default=6))
    print(f"c_m^k table up to m = {m}:")
    for mm in range(1, m + 1):
        row = CoeffTable.build(mm)
        print(f"  m={mm:2d}: " + " ".join(str(v) for v in row.c))
    print(f"P_{m}^k(d) for k = 1..{m}:")
    for k in range(1, m + 1):
        print(f"  P_{m}^{k}(d) = {pmk(m, k)}")
    return 0


def _run_identities(cfg: RunConfig) -> int:
    m_max = int(_get(cfg.raw, "m", default=16))
    ok = True
    for m in range(2, m_max + 1):
        ok &= verify_pmk_identity(m)
    for m in range(3, m_max + 1):
        ok &= verify_cmk_identity(m)
    for m in range(1, m_max + 1):
        ok &= p1_product_check(m)
        ok &= sigma_identity_check(m)
    print(f"exact coefficient identities up to m={m_max}: {'PASS' if ok else 'FAIL'}")

    quad = _quad_from(cfg.raw)
    hs = [0.2, 0.1, 0.05]
    fields = {
        2: [br.plane_wave_field(2), br.separable_field(2), br.quadratic_field(2)],
        3: [br.plane_wave_field(3), br.separable_field(3), br.quadratic_field(3)],
    }
    all_ok = ok
    for dim in (2, 3):
        x = np.full(dim, 0.3)
        for f in fields[dim]:
            specs = [
                ("laplace", br.BracketSpec("S", 1, 0, dim)),
                ("time-surface", br.BracketSpec("S", dim - 1, 0, dim)),
                ("time-ball", br.BracketSpec("B", 0, 0, dim)),
            ]
            if dim == 3:
                specs.append(("time-surface-low-k", br.BracketSpec("S", 1, 0, 3)))
            for name, spec in specs:
                resids = []
                for i, h in enumerate(hs):
                    q = ConeQuadSpec(
                        quad.n_s * 2**i, quad.n_r * 2**i, quad.n_ang * 2**i
                    )
                    if name == "laplace":
                        r = br.check_laplace_identity(spec, f, x, 0.7, h, q)
                    else:
                        r = br.check_time_identities(spec, f, x, 0.7, h, q)
                    resids.append(r)
                shrunk = all(
                    resids[i + 1] <= resids[i] / 3.0 or resids[i + 1] < 1e-7
                    for i in range(len(resids) - 1)
                )
                final_ok = resids[-1] <= 1e-3 * f.scale
                all_ok &= shrunk and final_ok
                print(
                    f"  d={dim} {f.name:16s} {name:18s} residuals "
                    + " ".join(f"{r:.2e}" for r in resids)
                    + ("  ok" if (shrunk and final_ok) else "  FAIL")
                )
    print(f"identities: {'PASS' if all_ok else 'FAIL'}")
    return 0 if all_ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="timecone",
        description="Time-cone kinetics: fast hyperbolic solvers with a "
        "direct cone-integral oracle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in MODES:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, default=None,
                       help="JSON run configuration")
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="RNG seed")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (speed only, never results)")
        if name in ("coeffs", "identities"):
            p.add_argument("-m", type=int, default=None, help="max order m")
    args = parser.parse_args(argv)

    overrides = {
        "mode": args.command,
        "out": str(args.out) if args.out is not None else None,
        "seed": args.seed,
        "threads": args.threads,
    }
    try:
        if args.config is not None:
            cfg = load_config(args.config, overrides)
        else:
            if args.command not in ("coeffs", "identities"):
                parser.error(f"{args.command} requires --config")
            raw = {k: v for k, v in overrides.items() if v is not None}
            if getattr(args, "m", None) is not None:
                raw["m"] = args.m
            cfg = RunConfig(
                mode=args.command,
                raw=raw,
                out=Path(raw.get("out", "timecone-out")),
                seed=int(raw.get("seed", 0)),
            )
        if getattr(args, "m", None) is not None:
            cfg.raw["m"] = args.m
        return run(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
