"""Command-line entry point.

One binary with subcommands: the exact identity suite, the sampler, exact
expectations, the Monte Carlo runs, the character-ratio check, and profile
plot data.  Flag values win over a JSON config file, which wins over the
defaults; every output embeds its full configuration in a header line so runs
can be reproduced from the artifact alone.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import limits, observables, plancherel
from .algebra import Observable, structure_constants
from .identities import IdentityCaps, run_identity_suite
from .partitions import sort_partition, _profile_breakpoints


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _default_threads() -> int:
    env = os.environ.get("PLANCHLAB_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


_GENERATOR_BASES = {"p": "p", "pt": "ptilde", "ht": "htilde", "ps": "psharp", "fc": "fcum"}


def parse_observable(text: str) -> Observable:
    """Parse 'pt4', 'p3', 'ht5', 'fc4', 'ps2' or 'ps(2,1)' into an observable."""
    text = text.strip()
    for prefix in ("pt", "ht", "ps", "fc", "p"):
        if text.startswith(prefix):
            rest = text[len(prefix):]
            basis = _GENERATOR_BASES[prefix]
            if rest.startswith("(") and rest.endswith(")"):
                mono = sort_partition(int(v) for v in rest[1:-1].split(","))
                return Observable.monomial(basis, mono)
            return Observable.generator(basis, int(rest))
    raise ValueError(f"cannot parse observable name {text!r}")


def _write_out(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# subcommands

def cmd_identities(args) -> int:
    if args.dump:
        obs = parse_observable(args.dump)
        _write_out(obs.to_basis("p").canonical_text(), args.out)
        return 0
    if args.structure:
        sigma = sort_partition(int(v) for v in args.structure[0].split(","))
        tau = sort_partition(int(v) for v in args.structure[1].split(","))
        table = structure_constants(sigma, tau, cap=args.cap_boxes)
        ordered = sorted(table.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)
        text = " ".join(f"({','.join(map(str, r))}):{c}" for r, c in ordered)
        _write_out(text, args.out)
        return 0
    caps = IdentityCaps(
        lambda_cap=args.lambda_cap,
        index_cap=args.kmax if args.kmax else 8,
        structure_cap=args.cap_boxes,
        leading_kmax=args.leading_kmax,
    )
    results = run_identity_suite(caps)
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.ok else 'FAIL'} {r.name} ({r.seconds:.2f}s): {r.detail}")
    failed = [r for r in results if not r.ok]
    lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
    _write_out("\n".join(lines), args.out)
    return 1 if failed else 0


def cmd_sample(args) -> int:
    out = args.out or "samples.jsonl"
    plancherel.write_samples_jsonl(out, args.n, args.samples, args.seed, workers=args.threads)
    print(f"wrote {args.samples} samples of size {args.n} to {out}")
    return 0


def cmd_expect(args) -> int:
    obs = parse_observable(args.name)
    if args.poly:
        poly = plancherel.expectation_polynomial(obs)
        text = json.dumps(
            {
                "config": {"kind": "expect-poly", "name": args.name},
                "falling_factorial_form": poly.describe(),
                "monomial_coefficients": [str(c) for c in poly.monomial_coefficients()],
            },
            sort_keys=True,
        )
    else:
        value = plancherel.exact_expectation(obs, args.n, cap=max(args.n, 14))
        text = json.dumps(
            {
                "config": {"kind": "expect", "name": args.name, "n": args.n},
                "value": str(value),
            },
            sort_keys=True,
        )
    _write_out(text, args.out)
    return 0


def cmd_clt(args) -> int:
    kmax = args.kmax or 5
    batch = limits.collect_fluctuations(
        args.n, args.samples, max(kmax + 1, 6), args.seed,
        workers=args.threads, eta_products=args.variant == "characters",
    )
    if args.variant == "characters":
        report = limits.run_clt_characters(args.n, args.samples, kmax, args.seed, batch=batch)
    elif args.variant == "shape":
        report = limits.run_clt_shape(args.n, args.samples, min(kmax, 4), args.seed, batch=batch)
    elif args.variant == "transition":
        report = limits.run_clt_transition(args.n, args.samples, kmax, args.seed, batch=batch)
    else:
        raise ValueError(f"unknown variant {args.variant!r}")
    text = report.to_json() if args.format == "json" else "\n".join(report.csv_lines())
    _write_out(text, args.out)
    return 0


def cmd_lln(args) -> int:
    report = limits.run_lln(
        args.n, args.samples, kmax=args.kmax or 8, seed=args.seed, workers=args.threads
    )
    if args.format == "json":
        text = report.to_json()
    else:
        lines = [
            "# config: " + json.dumps(
                {"kind": "lln", "n": report.n, "N": report.N,
                 "kmax": report.kmax, "seed": report.seed}, sort_keys=True),
            "k,median,q90,threshold,ok",
        ]
        for r in report.rows:
            lines.append(
                f"{r['k']},{_fmt(r['median'])},{_fmt(r['q90'])},{_fmt(r['threshold'])},{r['ok']}"
            )
        lines.append(f"sup,{_fmt(report.sup_median)},{_fmt(report.sup_q90)},{_fmt(report.sup_bound)},"
                     f"{report.sup_median <= report.sup_bound}")
        text = "\n".join(lines)
    _write_out(text, args.out)
    return 0


def cmd_biane(args) -> int:
    steps = tuple(int(v) for v in args.steps.split(","))
    rho = sort_partition(int(v) for v in args.rho.split(","))
    family = limits.staircase_family(steps)
    report = limits.biane_check(family, rho, A=args.A)
    _write_out(report.to_json(), args.out)
    return 0


def cmd_shape(args) -> int:
    lam = plancherel.sample(args.n, args.seed)
    sqrt_n = math.sqrt(args.n) if args.n else 1.0
    grid = np.linspace(-args.extent, args.extent, args.grid)
    pts = _profile_breakpoints(lam.rows)
    xp = np.array([p[0] for p in pts]) / sqrt_n
    fp = np.array([p[1] for p in pts]) / sqrt_n
    scaled = np.interp(grid, xp, fp)
    outside = (grid < xp[0]) | (grid > xp[-1])
    scaled[outside] = np.abs(grid[outside])
    omega = np.array([observables.omega_value(x) for x in grid])
    residual = sqrt_n * (scaled - omega) / 2.0
    overlay = limits.gaussian_reference(
        min(args.kmax or 100, 200), grid, args.seed, count=1
    )["delta"][0]
    lines = [
        "# config: " + json.dumps(
            {"kind": "shape", "n": args.n, "seed": args.seed,
             "grid": args.grid, "extent": args.extent}, sort_keys=True),
        "x,profile_scaled,limit_curve,residual_scaled,gaussian_overlay",
    ]
    for i, x in enumerate(grid):
        lines.append(
            f"{_fmt(x)},{_fmt(scaled[i])},{_fmt(omega[i])},"
            f"{_fmt(residual[i])},{_fmt(overlay[i])}"
        )
    _write_out("\n".join(lines), args.out)
    return 0


# ---------------------------------------------------------------------------
# argument plumbing

def _load_config_defaults(argv) -> dict:
    if "--config" not in argv:
        return {}
    idx = argv.index("--config")
    with open(argv[idx + 1]) as fh:
        return json.load(fh)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planchlab",
        description="Exact observables on Young diagrams and Plancherel-measure statistics",
    )
    parser.add_argument("--config", help="JSON file with default flag values")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n_default=4000, samples_default=4000, seed_default=20120):
        p.add_argument("--n", type=int, default=n_default, help="diagram size")
        p.add_argument("--samples", type=int, default=samples_default, help="sample count")
        p.add_argument("--kmax", type=int, default=None, help="largest functional index")
        p.add_argument("--seed", type=int, default=seed_default, help="64-bit master seed")
        p.add_argument("--threads", type=int, default=_default_threads())
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("identities", help="run the zero-tolerance identity suite")
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--cap-boxes", dest="cap_boxes", type=int, default=8)
    p.add_argument("--lambda-cap", dest="lambda_cap", type=int, default=10)
    p.add_argument("--leading-kmax", dest="leading_kmax", type=int, default=6)
    p.add_argument("--dump", default=None, help="print an observable in the p system")
    p.add_argument("--structure", nargs=2, default=None, metavar=("SIGMA", "TAU"))
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("sample", help="write Plancherel samples as JSON lines")
    common(p, n_default=100, samples_default=100)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("expect", help="exact expectation of an observable")
    p.add_argument("--name", required=True, help="e.g. pt4, ps(1,1), p2")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--poly", action="store_true", help="closed form in the size")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("clt", help="Monte Carlo central-limit reports")
    p.add_argument("--variant", choices=("characters", "shape", "transition"),
                   required=True)
    common(p)
    p.set_defaults(func=cmd_clt)

    p = sub.add_parser("lln", help="law-of-large-numbers report")
    common(p, n_default=10000, samples_default=500)
    p.set_defaults(func=cmd_lln)

    p = sub.add_parser("biane", help="character-ratio asymptotics on staircases")
    p.add_argument("--rho", default="2", help="comma-separated class parts")
    p.add_argument("--steps", default="9,19,39", help="staircase step counts")
    p.add_argument("--A", type=float, default=3.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_biane)

    p = sub.add_parser("shape", help="profile plot data for one sample")
    p.add_argument("--n", type=int, default=4000)
    p.add_argument("--seed", type=int, default=20120)
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--extent", type=float, default=2.5)
    p.add_argument("--kmax", type=int, default=100)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_shape)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    defaults = _load_config_defaults(argv)
    args = parser.parse_args(argv)
    for key, value in defaults.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr):
            # config file fills in values the command line left at the default
            if f"--{key}" not in argv:
                setattr(args, attr, value)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
