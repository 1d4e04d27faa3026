"""Command-line front end.

Exit codes: 0 when every checked property holds, 1 when some property
fails, 2 for configuration or input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from coxrep import report
from coxrep._backend import BACKEND
from coxrep.errors import BallCapExceeded, CoxeterMatrixError
from coxrep.geometry import ReflectionTable
from coxrep.gns import group_kappa, kappa_search, verify_uniform_bound
from coxrep.multipliers import approximate_identity_demo, parse_schedule
from coxrep.positivity import mu_prime_search, mu_search, refine_mu
from coxrep.presets import Preset, resolve_group
from coxrep.reflections import n_g_family, n_set, orbit_partition
from coxrep.suites import SUITE_ORDER, RunConfig, run_suite, suite_kernels

log = logging.getLogger("coxrep")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


def _threads() -> int:
    raw = os.environ.get("COXREP_THREADS", "")
    if not raw:
        return min(4, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"COXREP_THREADS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigError("COXREP_THREADS must be at least 1")
    return n


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc


def _preset(args) -> Preset:
    src = getattr(args, "group", None) or getattr(args, "preset", None)
    if not src:
        raise ConfigError("one of --group or --preset is required")
    try:
        return resolve_group(src)
    except (KeyError, FileNotFoundError) as exc:
        raise ConfigError(str(exc).strip("'\"")) from exc


def _emit(doc: dict, out: str | None) -> None:
    text = report.dumps(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --- commands ----------------------------------------------------------------


def cmd_verify(args) -> int:
    preset = _preset(args)
    try:
        cfg = RunConfig(
            preset,
            radius=args.radius,
            r_values=_floats(args.r),
            arg_steps=args.arg_steps,
            seed=args.seed,
            trials=args.trials,
            word_length=args.word_length,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    names = SUITE_ORDER if not args.suites else tuple(s.strip() for s in args.suites.split(","))
    unknown = [n for n in names if n not in SUITE_ORDER]
    if unknown:
        raise ConfigError(f"unknown suite(s) {unknown}; choose from {', '.join(SUITE_ORDER)}")
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        futures = [pool.submit(run_suite, n, cfg) for n in names]
        results = [f.result() for f in futures]
    doc = report.envelope(
        "verify",
        config=cfg.to_json(),
        passed=all(r.passed for r in results),
        suites=[r.to_json() for r in results],
    )
    _emit(doc, args.out)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}", file=sys.stderr)
    return EXIT_OK if doc["passed"] else EXIT_FAIL


def _kappas(preset: Preset, r: float, g_max: int, cod_radius: int):
    group = preset.group()
    ball = group.enumerate_ball(cod_radius)
    table = ReflectionTable.from_ball(ball, group)
    part = orbit_partition(table, preset.gamma_generators, group)
    return [kappa_search(g, r, ball, group, table, part) for g in group.enumerate_ball(g_max).elements]


def cmd_norm_sweep(args) -> int:
    preset = _preset(args)
    group = preset.group()
    r_values = _floats(args.r)
    if args.radius < 0 or any(not 0 < r < 1 for r in r_values):
        raise ConfigError("radius must be >= 0 and r values in (0, 1)")
    g_max = args.radius if args.g_max is None else args.g_max
    cod = args.radius + g_max
    sweeps = []
    ok = True
    for r in r_values:
        kappa = args.kappa
        if kappa is None:
            kappa = group_kappa(_kappas(preset, r, g_max, cod))
        if kappa is None:
            sweeps.append({"r": r, "kappa": None, "rows": []})
            continue
        rows = verify_uniform_bound(group, r, kappa, args.radius, cod, g_max, args.arg_steps)
        ok &= all(row.passed for row in rows)
        sweeps.append({"r": r, "kappa": kappa, "rows": [row.to_json() for row in rows]})
    doc = report.envelope(
        "norm-sweep",
        config={"group": preset.name, "radius": args.radius, "codomain_radius": cod, "g_max": g_max,
                "r": list(r_values), "arg_steps": args.arg_steps},
        passed=ok,
        sweeps=sweeps,
    )
    _emit(doc, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_kappa_search(args) -> int:
    preset = _preset(args)
    r_values = _floats(args.r)
    if any(not 0 < r < 1 for r in r_values):
        raise ConfigError("r values must lie in (0, 1)")
    rows = []
    per_r = []
    for r in r_values:
        ests = _kappas(preset, r, args.radius, args.family_radius or 2 * args.radius)
        rows += [e.to_json() for e in ests]
        per_r.append({"r": r, "kappa": group_kappa(ests)})
    doc = report.envelope("kappa-search", config={"group": preset.name, "radius": args.radius}, kappa_by_r=per_r, rows=rows)
    _emit(doc, args.out)
    return EXIT_FAIL if any(r["flagged"] for r in rows) else EXIT_OK


def cmd_fourier_mu(args) -> int:
    if not 0 < args.q < 1:
        raise ConfigError("q must lie in (0, 1)")
    cert = mu_search(args.q, args.grid)
    mu = {"mu": cert.mu, "J": cert.J, "grid_min": cert.grid_min, "tail": cert.tail, "slack": cert.slack,
          "margin": cert.margin, "psi0_min": cert.psi0_min, "grid": cert.grid, "found": cert.found}
    if cert.found:
        mu["refined_min"] = refine_mu(cert)
    doc = report.envelope("fourier-mu", q=args.q, mu=mu)
    ok = cert.found
    if args.k:
        mp = mu_prime_search(args.q, args.k)
        doc["mu_prime"] = mp.to_json()
        ok &= mp.found
    _emit(doc, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_kernel_sweep(args) -> int:
    if args.trials < 1:
        raise ConfigError("trials must be positive")
    cfg = RunConfig(resolve_group("a1"), seed=args.seed, trials=args.trials)
    claims = suite_kernels(cfg)
    doc = report.envelope("kernel-sweep", config={"trials": args.trials, "seed": args.seed},
                          passed=all(c.passed for c in claims), claims=[c.to_json() for c in claims])
    _emit(doc, args.out)
    return EXIT_OK if doc["passed"] else EXIT_FAIL


def cmd_multiplier(args) -> int:
    preset = _preset(args)
    try:
        schedule = parse_schedule(args.schedule)
    except ValueError as exc:
        raise ConfigError(f"bad schedule {args.schedule!r}: {exc}") from exc
    rep = approximate_identity_demo(preset.group(), args.radius, schedule)
    if args.format == "csv":
        lines = ["N,r,sup_dev"] + [f"{e.N},{report._float(e.r)},{report._float(e.sup_dev)}" for e in rep.entries]
        text = "\n".join(lines) + "\n"
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    else:
        doc = report.envelope("multiplier", config={"group": preset.name, "radius": args.radius}, **rep.to_json())
        _emit(doc, args.out)
    return EXIT_OK if rep.non_increasing else EXIT_FAIL


def cmd_enumerate(args) -> int:
    preset = _preset(args)
    ball = preset.group().enumerate_ball(args.radius, cap=args.cap)
    doc = report.envelope(
        "enumerate",
        config={"group": preset.name, "radius": args.radius},
        size=len(ball),
        sphere_sizes=ball.sphere_sizes(),
        elements=[str(g) for g in ball.elements],
    )
    _emit(doc, args.out)
    return EXIT_OK


def cmd_nset(args) -> int:
    preset = _preset(args)
    group = preset.group()
    ball = group.enumerate_ball(args.radius)
    table = ReflectionTable.from_ball(group.enumerate_ball(2 * args.radius), group)
    part = orbit_partition(table, preset.gamma_generators, group)
    records = []
    for g in ball.elements:
        ns = n_set(g, table, group)
        fam = n_g_family(g, ball, table, group)
        sizes: dict[int, int] = {}
        for t in ns.ordered:
            c = part.class_of[table.position(t.element)]
            sizes[c] = sizes.get(c, 0) + 1
        records.append({
            "element": str(g),
            "length": len(g),
            "nset": [str(t) for t in ns.ordered],
            "family_size": len(fam),
            "orbit_class_sizes": [sizes[c] for c in sorted(sizes)],
        })
    doc = report.envelope("nset", config={"group": preset.name, "radius": args.radius}, records=records)
    _emit(doc, args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    p = Path(args.report)
    if not p.is_file():
        raise ConfigError(f"report file {p} not found")
    text = p.read_text(encoding="utf-8")
    try:
        doc = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: not valid JSON: {exc}") from exc
    sys.stdout.write(report.render(doc))
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def _group_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--group", help="preset name or path to a Coxeter matrix JSON file")
    g.add_argument("--preset", help="bundled preset name (a1 a2 a3 b2 g2 iinf ra3 u3)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coxrep", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the verification suites")
    _group_args(p)
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--r", default="0.5,0.8")
    p.add_argument("--arg-steps", type=int, default=16)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--word-length", type=int, default=8)
    p.add_argument("--suites", default="", help="comma-separated subset of: " + ", ".join(SUITE_ORDER))
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("norm-sweep", help="restricted norms of pi_z(g) against the uniform bound")
    _group_args(p)
    p.add_argument("--radius", type=int, default=3, help="domain ball radius")
    p.add_argument("--g-max", type=int, default=None, help="largest l(g) tested (default: radius)")
    p.add_argument("--r", default="0.5,0.8")
    p.add_argument("--arg-steps", type=int, default=16)
    p.add_argument("--kappa", type=float, default=None, help="use this kappa instead of searching")
    p.add_argument("--out")
    p.set_defaults(func=cmd_norm_sweep)

    p = sub.add_parser("fourier-mu", help="certified mu (and optionally mu') search")
    p.add_argument("--q", type=float, default=0.5)
    p.add_argument("--k", type=int, default=0, help="also search mu'(q, k)")
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fourier_mu)

    p = sub.add_parser("kernel-sweep", help="random sweeps of the twisted-form bounds")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out")
    p.set_defaults(func=cmd_kernel_sweep)

    p = sub.add_parser("kappa-search", help="kappa estimates per element")
    _group_args(p)
    p.add_argument("--radius", type=int, default=3, help="largest l(g)")
    p.add_argument("--family-radius", type=int, default=None, help="ball for u in N^g (default 2 * radius)")
    p.add_argument("--r", default="0.5,0.8")
    p.add_argument("--out")
    p.set_defaults(func=cmd_kappa_search)

    p = sub.add_parser("multiplier", help="Fejer approximate-identity demonstration")
    _group_args(p)
    p.add_argument("--radius", type=int, default=10)
    p.add_argument("--schedule", default="10:0.9,50:0.98,200:0.995")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_multiplier)

    p = sub.add_parser("enumerate", help="list a Cayley ball")
    _group_args(p)
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--cap", type=int, default=200_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("nset", help="N_g records over a ball")
    _group_args(p)
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_nset)

    p = sub.add_parser("report", help="render a JSON report as text")
    p.add_argument("report")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    log.info("kernel backend: %s", BACKEND)
    try:
        return args.func(args)
    except (ConfigError, CoxeterMatrixError, BallCapExceeded, OSError) as exc:
        print(f"coxrep: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
