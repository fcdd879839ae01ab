"""Configuration-driven experiment runner.

    cat0-feas verify-space   --config c.json --out dir [--seed N] [--jobs K]
    cat0-feas verify-mapping --config c.json --out dir [--seed N] [--jobs K]
    cat0-feas run            --config c.json --out dir [--seed N] [--jobs K]
    cat0-feas certify        --config c.json --out dir [--seed N] [--jobs K]

Exit codes: 0 all checks passed, 1 some check failed, 2 some check was
inconclusive (or a stated hypothesis did not hold), 3 configuration error.

Outputs are deterministic for a fixed config and seed: report.json, trace
CSVs, and certificate JSON files are byte-identical across runs.  Wall-clock
timings go to the separate timings.txt, which is excluded from that claim.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .analysis import best_pair_bruteforce, check_delta_limit, set_distance
from .config import ExperimentConfig, InstanceConfig, load_config
from .errors import Cat0FeasError, ConfigError, InconclusiveError
from .iteration import (
    IterationTrace,
    certify_asymptotic_regularity,
    certify_best_approx_rate,
    picard,
    trace_rows,
)
from .mappings import (
    ComposeMap,
    IdentityMap,
    PairMap,
    ProjectionMap,
    averaged_projections,
    check_firmly_nonexpansive,
    check_p2,
    diagonal_projection,
)
from .product import (
    ConvexCombinationSpace,
    embed_diagonal,
    reduction_deviations,
    squared_diagonal_gap,
)
from .sets import DiagonalSet
from .spaces import PoincareDiskSpace, check_cn_inequality, check_four_point

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_CONFIG = 0, 1, 2, 3

_STATUS_RANK = {
    "pass": 0,
    "reported": 0,
    "inconclusive": 1,
    "hypothesis-unsatisfied": 1,
    "fail": 2,
}

SEMANTICS_NOTES = {
    "certificates": (
        "a certificate checks the bound on recorded indices up to the trace "
        "horizon; when the iteration reaches an exact fixed point the constant "
        "extension decides the bound for all later indices, otherwise a trace "
        "shorter than the bound is reported inconclusive"
    ),
    "delta-limit": (
        "limit checks use a finite-dimensional tail proxy: the last window must "
        "sit within tolerance of the claimed point and have it as its estimated "
        "asymptotic center"
    ),
}


def _worst_status(statuses) -> str:
    worst = "pass"
    for s in statuses:
        if _STATUS_RANK.get(s, 2) > _STATUS_RANK[worst]:
            worst = s
    return worst


def _exit_code(status: str) -> int:
    rank = _STATUS_RANK.get(status, 2)
    return (EXIT_PASS, EXIT_INCONCLUSIVE, EXIT_FAIL)[rank]


def _space_check_tolerance(space, cfg: ExperimentConfig) -> float:
    base = space.base if isinstance(space, ConvexCombinationSpace) else space
    return cfg.tol_disk if isinstance(base, PoincareDiskSpace) else cfg.tol_exact


def _quantiles(values):
    ordered = sorted(values)
    n = len(ordered)
    return {
        "p50": ordered[n // 2],
        "p90": ordered[min(n - 1, (9 * n) // 10)],
        "max": ordered[-1],
    }


def _map_instances(handler, instances, jobs):
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(handler, instances))
    return [handler(inst) for inst in instances]


def _build_map(inst: InstanceConfig):
    set_a, set_b, _ = inst.require_sets()
    if inst.mode == "composed":
        return ComposeMap(ProjectionMap(set_a), ProjectionMap(set_b))
    return averaged_projections(set_a, set_b, inst.lam)


def _run_trace(inst: InstanceConfig, n_max=None):
    set_a, set_b, start = inst.require_sets()
    steps = inst.n_max if n_max is None else n_max
    if inst.mode == "product-reduction":
        # Iterate the product-space twin and read the trace off the diagonal.
        cs = ConvexCombinationSpace(inst.space, inst.lam)
        qu = ComposeMap(
            diagonal_projection(cs),
            PairMap(cs, ProjectionMap(set_a), ProjectionMap(set_b)),
        )
        twin = picard(qu, embed_diagonal(cs, start), steps)
        points = [p.payload[0] for p in twin.points]
        space = inst.space
        return IterationTrace(
            space=space,
            points=points,
            residuals=[space.distance(a, b) for a, b in zip(points, points[1:])],
            to_fixed_point=(
                [space.distance(p, inst.fixed_point) for p in points]
                if inst.fixed_point is not None
                else None
            ),
            aux=[
                space.distance(set_a.project(p), set_b.project(p)) for p in points
            ],
            stationary_from=twin.stationary_from,
        )
    return picard(
        _build_map(inst),
        start,
        steps,
        fixed_point=inst.fixed_point,
        aux_pair=(set_a, set_b),
    )


# -- verify-space ------------------------------------------------------------------


def _verify_one_space(name, space, samples, tol, seed):
    rng = random.Random(f"{seed}:{name}:space-verify")
    max_fp = -float("inf")
    max_cn = -float("inf")
    for _ in range(samples):
        x, y, z, w = (space.random_point(rng) for _ in range(4))
        fp = check_four_point(space, x, y, z, w, tol)
        cn = check_cn_inequality(space, z, x, y, rng.random(), tol)
        max_fp = max(max_fp, fp.residual)
        max_cn = max(max_cn, cn.residual)
    ok = max_fp <= tol and max_cn <= tol
    return {
        "name": name,
        "samples": samples,
        "tolerance": tol,
        "max_four_point_residual": max_fp,
        "max_cn_residual": max_cn,
        "status": "pass" if ok else "fail",
    }


def cmd_verify_space(cfg: ExperimentConfig, seed: int, jobs: int):
    jobs_ = []
    seen = set()
    for inst in cfg.instances:
        variants = [(inst.space, None)]
        variants.extend(
            (ConvexCombinationSpace(inst.space, lam), lam)
            for lam in inst.product_lambdas
        )
        for space, lam in variants:
            if space in seen:
                continue
            seen.add(space)
            label = space.kind if lam is None else f"{space.base.kind} x lambda={lam}"
            jobs_.append((f"{inst.name}:{label}", space))
    results = _map_instances(
        lambda item: _verify_one_space(
            item[0], item[1], cfg.space_samples, _space_check_tolerance(item[1], cfg), seed
        ),
        jobs_,
        jobs,
    )
    return {"spaces": results}, _worst_status(r["status"] for r in results)


# -- verify-mapping -----------------------------------------------------------------


def _mapping_report(name, mapping, space, rng, samples, tol, assert_pass, fn_check=False):
    p2 = []
    fn = []
    for _ in range(samples):
        x, y = space.random_point(rng), space.random_point(rng)
        p2.append(check_p2(mapping, x, y))
        if fn_check:
            fn.append(check_firmly_nonexpansive(mapping, x, y))
    entry = {"name": name, "samples": samples, "p2": _quantiles(p2)}
    if fn:
        entry["firmly_nonexpansive"] = _quantiles(fn)
    if assert_pass:
        ok = entry["p2"]["max"] <= tol and (not fn or entry["firmly_nonexpansive"]["max"] <= tol)
        entry["status"] = "pass" if ok else "fail"
    else:
        entry["status"] = "reported"
    return entry


def _verify_mappings_for(inst: InstanceConfig, cfg: ExperimentConfig, seed: int):
    set_a, set_b, _ = inst.require_sets()
    rng = random.Random(f"{seed}:{inst.name}:mapping-verify")
    space = inst.space
    cs = ConvexCombinationSpace(space, inst.lam)
    proj_a, proj_b = ProjectionMap(set_a), ProjectionMap(set_b)
    rows = [
        _mapping_report("P_A", proj_a, space, rng, cfg.mapping_samples, cfg.tol_p2, True, True),
        _mapping_report("P_B", proj_b, space, rng, cfg.mapping_samples, cfg.tol_p2, True, True),
        _mapping_report("identity", IdentityMap(space), space, rng, 100, cfg.tol_p2, True),
        _mapping_report(
            "pair-map", PairMap(cs, proj_a, proj_b), cs, rng, cfg.mapping_samples, cfg.tol_p2, True
        ),
        _mapping_report(
            "diagonal-projection", diagonal_projection(cs), cs, rng,
            cfg.mapping_samples, cfg.tol_p2, True,
        ),
        _mapping_report(
            "averaged", averaged_projections(set_a, set_b, inst.lam), space, rng,
            cfg.mapping_samples, cfg.tol_p2, False,
        ),
    ]
    # Spot-check nearest-point minimality of the diagonal projection.
    diag = DiagonalSet(cs)
    worst_slack = -float("inf")
    worst_identity = 0.0
    for _ in range(25):
        p = cs.random_point(rng)
        qp = diag.project(p)
        dq = cs.distance(p, qp)
        x1, x2 = p.payload
        worst_identity = max(
            worst_identity,
            abs(dq * dq - inst.lam * (1 - inst.lam) * space.distance(x1, x2) ** 2),
        )
        for _ in range(cfg.minimality_samples):
            w = space.random_point(rng)
            worst_slack = max(worst_slack, dq - cs.distance(p, cs.pair(w, w)))
    minimality = {
        "name": "diagonal-minimality",
        "max_slack": worst_slack,
        "max_identity_residual": worst_identity,
        "status": "pass"
        if worst_slack <= cfg.tol_minimality and worst_identity <= cfg.tol_minimality
        else "fail",
    }
    rows.append(minimality)
    return {
        "name": inst.name,
        "mappings": rows,
        "status": _worst_status(r["status"] for r in rows),
    }


def cmd_verify_mapping(cfg: ExperimentConfig, seed: int, jobs: int):
    instances = [inst for inst in cfg.instances if inst.set_a is not None]
    results = _map_instances(
        lambda inst: _verify_mappings_for(inst, cfg, seed), instances, jobs
    )
    return {"instances": results}, _worst_status(r["status"] for r in results)


# -- run ---------------------------------------------------------------------------


def _write_trace_csv(path: Path, trace):
    lines = ["n,residual,dist_to_p,aux_dist"]
    for n, res, dist, aux in trace_rows(trace):
        cells = [str(n)] + [
            "" if v is None else repr(v) for v in (res, dist, aux)
        ]
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def _run_one(inst: InstanceConfig, out: Path):
    set_a, set_b, start = inst.require_sets()
    trace = _run_trace(inst)
    _write_trace_csv(out / f"trace_{inst.name}.csv", trace)
    row = {
        "name": inst.name,
        "mode": inst.mode,
        "steps": len(trace.points) - 1,
        "stationary_from": trace.stationary_from,
        "final_residual": trace.residuals[-1] if trace.residuals else 0.0,
        "final_aux": trace.aux[-1] if trace.aux else None,
    }
    if inst.mode in ("averaged", "product-reduction"):
        steps = min(200, inst.n_max)
        base = picard(
            averaged_projections(set_a, set_b, inst.lam),
            start,
            steps,
            stop_on_stationary=False,
        )
        cs = ConvexCombinationSpace(inst.space, inst.lam)
        qu = ComposeMap(
            diagonal_projection(cs),
            PairMap(cs, ProjectionMap(set_a), ProjectionMap(set_b)),
        )
        twin = picard(qu, embed_diagonal(cs, start), steps, stop_on_stationary=False)
        gaps = reduction_deviations(cs, base.points, twin.points)
        worst = max(
            (gap - 1e-9 * max(n, 1) for n, gap in enumerate(gaps)), default=0.0
        )
        row["reduction_max_gap"] = max(gaps)
        row["reduction_ok"] = worst <= 0.0
        row["status"] = "pass" if row["reduction_ok"] else "fail"
    else:
        row["status"] = "pass"
    if trace.to_fixed_point is not None:
        drift = max(
            (b - a for a, b in zip(trace.to_fixed_point, trace.to_fixed_point[1:])),
            default=0.0,
        )
        row["fejer_max_drift"] = max(drift, 0.0)
        row["fejer_monotone"] = drift <= 1e-9
        if not row["fejer_monotone"]:
            row["status"] = "fail"
    return row


def cmd_run(cfg: ExperimentConfig, seed: int, jobs: int, out: Path):
    instances = [inst for inst in cfg.instances if inst.set_a is not None]
    results = _map_instances(lambda inst: _run_one(inst, out), instances, jobs)
    return {"instances": results}, _worst_status(r["status"] for r in results)


# -- certify -----------------------------------------------------------------------


def _certify_one(inst: InstanceConfig, cfg: ExperimentConfig, out: Path):
    set_a, set_b, start = inst.require_sets()
    space = inst.space
    trace = _run_trace(inst)
    entry = {"name": inst.name, "checks": [], "certificates": []}
    statuses = []

    def add(check_name, status, **details):
        entry["checks"].append({"check": check_name, "status": status, **details})
        statuses.append(status)

    if "rate" in inst.checks:
        if inst.fixed_point is None:
            add("rate", "inconclusive", reason="no fixed point configured")
        else:
            d0 = space.distance(start, inst.fixed_point)
            b = inst.rate_b if inst.rate_b is not None else d0
            if d0 > b + 1e-12:
                add(
                    "rate",
                    "hypothesis-unsatisfied",
                    reason=f"d(x0, p) = {d0} exceeds the supplied b = {b}",
                    b=b,
                )
            else:
                certs = certify_asymptotic_regularity(trace, b, inst.eps_grid)
                entry["certificates"].extend(
                    {"quantity": "step-residual", **c.to_json()} for c in certs
                )
                add("rate", _worst_status(c.status for c in certs), b=b)

    needs_pair = {"gap-rate", "delta-limit"} & set(inst.checks)
    r_alt = None
    if needs_pair or "oracle-agreement" in inst.checks:
        try:
            r_alt = set_distance(set_a, set_b)
        except InconclusiveError as exc:
            r_alt = None
            add("set-distance", "inconclusive", reason=str(exc))

    if "gap-rate" in inst.checks:
        pair = inst.best_pair
        if pair is None:
            add("gap-rate", "inconclusive", reason="no best pair configured")
        else:
            a_star, b_star = pair
            u_star = space.interpolate(a_star, b_star, inst.lam)
            m_val = inst.rate_m if inst.rate_m is not None else space.distance(start, u_star)
            gap0 = space.distance(set_a.project(start), set_b.project(start))
            b_gap = gap0 * gap0
            r = inst.set_dist if inst.set_dist is not None else r_alt
            q_identity = None
            if r is not None:
                # Cross-check: squared diagonal-to-rectangle gap in the product
                # space against lam (1-lam) r^2.
                cs = ConvexCombinationSpace(space, inst.lam)
                q_identity = abs(
                    squared_diagonal_gap(cs, set_a, set_b)
                    - inst.lam * (1 - inst.lam) * r**2
                )
            if space.distance(start, u_star) > m_val + 1e-12:
                add("gap-rate", "hypothesis-unsatisfied", M=m_val)
            elif r is None:
                add("gap-rate", "inconclusive", reason="set distance unavailable")
            else:
                certs = certify_best_approx_rate(
                    trace, m_val, b_gap, r, inst.gap_eps_grid, inst.lam
                )
                entry["certificates"].extend(
                    {"quantity": "projection-gap", **c.to_json()} for c in certs
                )
                add(
                    "gap-rate",
                    _worst_status(c.status for c in certs),
                    M=m_val,
                    b=b_gap,
                    r=r,
                    q=inst.lam * (1 - inst.lam) * r * r,
                    q_identity_residual=q_identity,
                )

    if "delta-limit" in inst.checks:
        pair = best_pair_bruteforce(set_a, set_b, inst.grid)
        claimed = space.interpolate(pair.a, pair.b, inst.lam)
        verdict = check_delta_limit(trace, claimed, tol=1e-4)
        add(
            "delta-limit",
            "pass" if verdict.ok else "fail",
            max_tail_distance=verdict.max_tail_distance,
            center_distance=verdict.center_distance,
            bruteforce_dist=pair.dist,
        )

    if "oracle-agreement" in inst.checks:
        pair = best_pair_bruteforce(set_a, set_b, inst.grid)
        if r_alt is None:
            add("oracle-agreement", "inconclusive")
        else:
            gap = abs(pair.dist - r_alt)
            budget = 2.0 * inst.grid.h
            add(
                "oracle-agreement",
                "pass" if gap <= budget else "fail",
                alternating=r_alt,
                bruteforce=pair.dist,
                difference=gap,
                budget=budget,
            )

    entry["status"] = _worst_status(statuses) if statuses else "pass"
    (out / f"certificates_{inst.name}.json").write_text(
        json.dumps(entry["certificates"], indent=2, sort_keys=True) + "\n"
    )
    return entry


def cmd_certify(cfg: ExperimentConfig, seed: int, jobs: int, out: Path):
    instances = [inst for inst in cfg.instances if inst.set_a is not None]
    results = _map_instances(
        lambda inst: _certify_one(inst, cfg, out), instances, jobs
    )
    return {"instances": results}, _worst_status(r["status"] for r in results)


# -- entry point --------------------------------------------------------------------


def _parser():
    parser = argparse.ArgumentParser(
        prog="cat0-feas",
        description="verify, run, and certify averaged-projection experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("verify-space", "verify-mapping", "run", "certify"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="experiment config JSON")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--jobs", type=int, default=1, help="parallel instances")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    started = time.perf_counter()
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    seed = cfg.seed if args.seed is None else args.seed
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if args.command == "verify-space":
            body, verdict = cmd_verify_space(cfg, seed, args.jobs)
        elif args.command == "verify-mapping":
            body, verdict = cmd_verify_mapping(cfg, seed, args.jobs)
        elif args.command == "run":
            body, verdict = cmd_run(cfg, seed, args.jobs, out)
        else:
            body, verdict = cmd_certify(cfg, seed, args.jobs, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Cat0FeasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report = {
        "schema": "1",
        "command": args.command,
        "seed": seed,
        "semantics": SEMANTICS_NOTES,
        "verdict": verdict,
        **body,
    }
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    (out / "timings.txt").write_text(
        f"{args.command} wall_seconds={time.perf_counter() - started:.3f}\n"
    )
    print(f"{args.command}: {verdict} (report in {out / 'report.json'})")
    return _exit_code(verdict)


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
