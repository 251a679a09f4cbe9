"""Command-line front end: reproducible CSV / JSON tables with a run manifest."""

from __future__ import annotations

import argparse
import datetime as _dt
import io
import itertools
import json
import math
import os
import secrets
import sys
import tempfile
from typing import Any

import numpy as np

from . import __version__
from .correlations import compressibility, rho_n, truncated_pair_correlation
from .errors import ConvergenceError, DegenerateInputError, DomainError, EquilibrationError
from .gap import (
    SMALL_GAP_SERIES,
    asymptote_large_s,
    c1_annihilation,
    c1_tilde,
    c2_constant,
    gap_finite_n,
    gap_truncated_gf,
)
from .gap.generating import GF_WINDOW
from .kernels import KernelParams, Process
from .specialfun import zeta_three_halves
from .stochastic import (
    SimConfig,
    empirical_gap,
    estimate_gap,
    real_count_stats,
    run_ensemble,
    sample_real_eigs_batch,
)

OUTPUT_DIR_ENV = "RGGAP_OUTPUT_DIR"
EXIT_USAGE = 2
EXIT_RUNTIME = 3

GAP_METHODS = ("finite-n", "series", "asymptotic", "truncated-gf", "mc-annihilation", "mc-coalescence")
MC_METHODS = {"mc-annihilation": Process.ANNIHILATION, "mc-coalescence": Process.COALESCENCE}


class UsageError(Exception):
    pass


# output ------------------------------------------------------------------------

def manifest(command: str, args: argparse.Namespace) -> dict[str, Any]:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command", "seed", "output")}
    return {
        "command": command,
        "params": params,
        "seed": getattr(args, "seed", None),
        "tool_version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def render_csv(man: dict, header: list[str], rows, footer: list[str] = ()) -> str:
    buf = io.StringIO()
    buf.write("# manifest " + json.dumps(man, sort_keys=True) + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    for line in footer:
        buf.write("# " + line + "\n")
    return buf.getvalue()


def render_json(man: dict, payload: dict) -> str:
    return json.dumps({"manifest": man, **payload}, indent=2, sort_keys=False, default=_jsonable) + "\n"


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"cannot serialise {type(x).__name__}")


def resolve_output(path: str | None) -> str | None:
    if path is None or path == "-":
        return None
    base = os.environ.get(OUTPUT_DIR_ENV)
    return os.path.join(base, path) if base and not os.path.isabs(path) else path


def emit(text: str, path: str | None) -> None:
    """Write to stdout, or atomically to ``path`` via a sibling temp file."""
    target = resolve_output(path)
    if target is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    folder = os.path.dirname(os.path.abspath(target))
    os.makedirs(folder, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# grids and methods -------------------------------------------------------------

def make_grid(s_min: float, s_max: float, s_step: float) -> np.ndarray:
    if not (math.isfinite(s_min) and math.isfinite(s_max) and math.isfinite(s_step)):
        raise UsageError("grid bounds must be finite")
    if s_step <= 0:
        raise UsageError("--s-step must be positive")
    if s_min < 0 or s_max < s_min:
        raise UsageError("need 0 <= --s-min <= --s-max")
    count = int(math.floor((s_max - s_min) / s_step + 1e-9)) + 1
    return np.round(s_min + s_step * np.arange(count), 12)


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _method_list(text: str) -> list[str]:
    names = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in names if m not in GAP_METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown method(s) {', '.join(bad)}; choose from {', '.join(GAP_METHODS)}")
    return names


def sim_config(args) -> SimConfig:
    return SimConfig(lattice_size=args.lattice_size, initial_fill=args.fill, t_end=args.t_end,
                     seed=args.seed, replicas=args.replicas)


def evaluate(method: str, s: np.ndarray, args) -> tuple[np.ndarray, np.ndarray | None]:
    """Values (and stderr for Monte Carlo) of one method on the grid ``s``."""
    if method == "finite-n":
        return np.array([gap_finite_n(x / 2, args.n_matrix) for x in s]), None
    if method == "series":
        if np.any(s > args.series_window):
            raise UsageError(f"series is limited to s <= {args.series_window} (see --series-window)")
        return np.array([SMALL_GAP_SERIES(x, check_window=False) for x in s]), None
    if method == "asymptotic":
        if np.any(s <= 0):
            raise UsageError("the asymptotic form needs s > 0 (use --s-min)")
        return np.array([asymptote_large_s(x) for x in s]), None
    if method == "truncated-gf":
        if np.any(s > GF_WINDOW):
            raise UsageError(f"truncated-gf is limited to s <= {GF_WINDOW}")
        vals = [gap_truncated_gf(x, args.xi, args.order, workers=args.threads) for x in s]
        return np.array(vals), None
    process = MC_METHODS[method]
    est = estimate_gap(sim_config(args), process, s, threads=args.threads,
                       check=not args.no_equilibration_check, s_ref=args.s_ref,
                       stability_tol=args.stability_tol)
    return est.e_hat.copy(), est.stderr.copy()


# subcommands --------------------------------------------------------------------

def cmd_gap(args) -> str:
    s = make_grid(args.s_min, args.s_max, args.s_step)
    vals, err = evaluate(args.method, s, args)
    man = manifest("gap", args)
    if args.format == "json":
        payload = {"method": args.method, "s_values": s, "e_values": vals}
        if err is not None:
            payload["stderr"] = err
        return render_json(man, payload)
    if err is None:
        return render_csv(man, ["s", "value"], zip(s, vals))
    return render_csv(man, ["s", "value", "stderr"], zip(s, vals, err))


def _slope(s, e):
    """Least-squares slope and intercept of -log E against s."""
    slope, icpt = np.polyfit(s, -np.log(e), 1)
    return float(slope), float(-icpt)


def compare_tables(s, results: dict, args) -> tuple[list[str], list[list], dict]:
    methods = list(results)
    header = ["s"]
    for m in methods:
        header.append(m)
        if results[m][1] is not None:
            header.append(f"{m}_stderr")
    pairs = list(itertools.combinations(methods, 2))
    for a, b in pairs:
        header += [f"diff[{a}|{b}]", f"reldiff[{a}|{b}]"]
        if results[a][1] is not None or results[b][1] is not None:
            header.append(f"z[{a}|{b}]")

    rows = []
    summary = {"pairs": []}
    per_pair = {}
    for a, b in pairs:
        va, ea = results[a]
        vb, eb = results[b]
        diff = va - vb
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = np.where(vb != 0, diff / np.abs(vb), np.inf)
        z = None
        if ea is not None or eb is not None:
            se = np.sqrt((0 if ea is None else ea) ** 2 + (0 if eb is None else eb) ** 2)
            with np.errstate(divide="ignore", invalid="ignore"):
                z = np.where(se > 0, diff / se, np.where(np.abs(diff) < 1e-12, 0.0, np.inf))
        per_pair[(a, b)] = (diff, rel, z)
        k = int(np.argmax(np.abs(diff)))
        entry = {
            "methods": [a, b],
            "window": [float(s[0]), float(s[-1])],
            "max_abs_diff": float(np.abs(diff[k])),
            "at_s": float(s[k]),
        }
        if args.fit_slope:
            sa, ia = _slope(s, va)
            sb, ib = _slope(s, vb)
            entry.update(slope=[sa, sb], intercept=[ia, ib], slope_rel_diff=abs(sa - sb) / abs(sb))
            ok = entry["slope_rel_diff"] <= args.slope_tol
            entry["criterion"] = f"slope within {args.slope_tol:g} relative"
        elif z is not None:
            entry["max_abs_z"] = float(np.max(np.abs(z)))
            ok = entry["max_abs_z"] <= args.z_tol
            entry["criterion"] = f"every row within {args.z_tol:g} stderr"
        else:
            ok = entry["max_abs_diff"] <= args.tol
            entry["criterion"] = f"max abs diff <= {args.tol:g}"
        entry["status"] = "PASS" if ok else "FAIL"
        summary["pairs"].append(entry)
    summary["status"] = "PASS" if all(p["status"] == "PASS" for p in summary["pairs"]) else "FAIL"

    for i, x in enumerate(s):
        row = [x]
        for m in methods:
            row.append(results[m][0][i])
            if results[m][1] is not None:
                row.append(results[m][1][i])
        for pair in pairs:
            diff, rel, z = per_pair[pair]
            row += [diff[i], rel[i]]
            if z is not None:
                row.append(z[i])
        rows.append(row)
    return header, rows, summary


def _summary_lines(summary) -> list[str]:
    lines = []
    for p in summary["pairs"]:
        a, b = p["methods"]
        text = (f"{p['status']} {a} vs {b} on [{p['window'][0]:g}, {p['window'][1]:g}]: "
                f"max |diff| {p['max_abs_diff']:.3e} at s={p['at_s']:g}")
        if "slope_rel_diff" in p:
            text += f"; slopes {p['slope'][0]:.6f} vs {p['slope'][1]:.6f} ({p['slope_rel_diff']:.2%})"
        if "max_abs_z" in p:
            text += f"; max |z| {p['max_abs_z']:.2f}"
        lines.append(text + f" [{p['criterion']}]")
    lines.append(f"summary {summary['status']}")
    return lines


def cmd_compare(args) -> str:
    if len(args.methods) < 2:
        raise UsageError("compare needs at least two methods")
    if len(set(args.methods)) != len(args.methods):
        raise UsageError("methods must be distinct")
    s = make_grid(args.s_min, args.s_max, args.s_step)
    results = {m: evaluate(m, s, args) for m in args.methods}
    header, rows, summary = compare_tables(s, results, args)
    lines = _summary_lines(summary)
    for line in lines:
        print(line, file=sys.stderr)
    man = manifest("compare", args)
    if args.format == "json":
        cols = {h: [r[i] for r in rows] for i, h in enumerate(header)}
        return render_json(man, {"columns": cols, "summary": summary})
    return render_csv(man, header, rows, lines)


def constants_table() -> dict[str, dict]:
    # printed: the values quoted in the source; target: agreement demanded of the computed value
    z = zeta_three_halves()
    return {
        "zeta32": {"value": z, "printed": None, "reference": 2.6123753486854883, "tolerance": 1e-12},
        "c1": {"value": c1_annihilation(), "printed": 1.3062, "tolerance": 5e-5},
        "c1_tilde": {"value": c1_tilde(), "printed": None, "reference": 0.52105, "tolerance": 5e-5},
        "c2": {"value": c2_constant(), "printed": 0.0627, "tolerance": 5e-4},
        "compressibility": {"value": compressibility(KernelParams.real_ginibre()),
                            "printed": "2 - sqrt(2)", "reference": 2 - math.sqrt(2), "tolerance": 1e-5},
    }


def cmd_constants(args) -> str:
    table = constants_table()
    for entry in table.values():
        ref = entry.get("reference", entry["printed"])
        entry["status"] = "PASS" if abs(entry["value"] - ref) <= entry["tolerance"] else "FAIL"
    return render_json(manifest("constants", args), {"constants": table})


def _kernel_params(args) -> KernelParams:
    process = Process(args.process)
    if process is Process.REAL_GINIBRE_BULK:
        if args.rho is not None:
            raise UsageError("the real Ginibre bulk has fixed density; drop --rho")
        return KernelParams.real_ginibre()
    rho = 1.0 if args.rho is None else args.rho
    return KernelParams(process, rho)


def cmd_correlations(args) -> str:
    p = _kernel_params(args)
    man = manifest("correlations", args)
    if args.points is not None:
        value = rho_n(np.array(args.points), p)
        if args.format == "json":
            return render_json(man, {"points": args.points, "rho_n": value})
        return render_csv(man, ["n", "points", "value"], [[len(args.points), ";".join(map(_fmt, args.points)), value]])
    x = make_grid(args.x_min, args.x_max, args.x_step)
    vals = np.array([truncated_pair_correlation(v, p) for v in x])
    if args.format == "json":
        return render_json(man, {"x": x, "rho2_truncated": vals, "compressibility": compressibility(p)})
    return render_csv(man, ["x", "value"], zip(x, vals), [f"compressibility {compressibility(p)!r}"])


def cmd_simulate(args) -> str:
    cfg = sim_config(args)
    ens = run_ensemble(cfg, args.process, threads=args.threads)
    man = manifest("simulate", args)
    rows = [[r, ps.count, ps.density] for r, ps in enumerate(ens.end)]
    if args.format == "json":
        payload = {"replicas": [{"replica": r, "count": c, "density": d} for r, c, d in rows]}
        if args.positions:
            for item, ps in zip(payload["replicas"], ens.end):
                item["positions"] = ps.positions
        return render_json(man, payload)
    mean = float(np.mean([row[2] for row in rows]))
    return render_csv(man, ["replica", "count", "density"], rows,
                      [f"mean density {mean!r} at t={cfg.t_end:g}; density*sqrt(pi t) {mean * math.sqrt(math.pi * cfg.t_end)!r}"])


def cmd_sample_ginibre(args) -> str:
    samples = sample_real_eigs_batch(args.n, args.replicas, args.seed, args.threads)
    if not samples:
        raise ConvergenceError("every eigensolver call failed")
    mean, se = real_count_stats(samples)
    s = np.array(args.s_values if args.s_values is not None else [1.0, 2.0, 3.0])
    e, e_se = empirical_gap(samples, s)
    stats = {"replicas_used": len(samples), "skipped": args.replicas - len(samples),
             "mean_real_count": mean, "stderr_real_count": se,
             "leading_order_count": math.sqrt(2 * args.n / math.pi)}
    man = manifest("sample-ginibre", args)
    if args.format == "json":
        return render_json(man, {**stats, "s_values": s, "e_values": e, "stderr": e_se})
    return render_csv(man, ["s", "value", "stderr"], zip(s, e, e_se),
                      [f"{k} {v!r}" for k, v in stats.items()])


# parser ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, formats: bool = True) -> None:
    if formats:
        p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", help=f"output file (relative paths resolve against ${OUTPUT_DIR_ENV})")
    p.add_argument("--seed", type=int, default=None, help="random seed (default: fresh entropy, echoed in the manifest)")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")


def _add_grid(p: argparse.ArgumentParser, s_max: float = 8.0) -> None:
    p.add_argument("--s-min", type=float, default=0.0)
    p.add_argument("--s-max", type=float, default=s_max)
    p.add_argument("--s-step", type=float, default=0.1)


def _add_method_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n-matrix", type=int, default=120, help="matrix size N for finite-n")
    p.add_argument("--xi", type=float, default=1.0, help="generating-function parameter for truncated-gf")
    p.add_argument("--order", type=int, default=4, help="truncation order for truncated-gf")
    p.add_argument("--series-window", type=float, default=SMALL_GAP_SERIES.bound,
                   help="largest s at which the small-s series is evaluated")
    _add_sim(p)
    p.add_argument("--no-equilibration-check", action="store_true")
    p.add_argument("--s-ref", type=float, default=1.0, help="reference s of the equilibration check")
    p.add_argument("--stability-tol", type=float, default=3.0,
                   help="allowed drift between t_end/2 and t_end, in stderr units")


def _add_sim(p: argparse.ArgumentParser) -> None:
    p.add_argument("--replicas", type=int, default=200)
    p.add_argument("--lattice-size", type=int, default=100_000)
    p.add_argument("--t-end", type=float, default=1000.0)
    p.add_argument("--fill", type=float, default=1.0, help="initial occupation probability")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rggap", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gap", help="gap probability E(0;(-s/2,s/2)) on a grid")
    p.add_argument("--method", choices=GAP_METHODS, required=True)
    _add_grid(p)
    _add_method_params(p)
    _add_common(p)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("compare", help="several methods on one grid, with differences and PASS/FAIL")
    p.add_argument("--methods", type=_method_list, required=True, help="comma-separated, at least two")
    _add_grid(p, s_max=2.0)
    _add_method_params(p)
    p.add_argument("--tol", type=float, default=1e-3, help="max abs difference for deterministic pairs")
    p.add_argument("--z-tol", type=float, default=3.0, help="max |diff|/stderr when a method carries errors")
    p.add_argument("--fit-slope", action="store_true", help="judge pairs by the fitted slope of -log E")
    p.add_argument("--slope-tol", type=float, default=0.03)
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("constants", help="decay constants and the compressibility, as JSON")
    _add_common(p, formats=False)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("correlations", help="n-point or truncated two-point correlations")
    p.add_argument("--process", choices=[q.value for q in Process], default=Process.REAL_GINIBRE_BULK.value)
    p.add_argument("--rho", type=float, default=None, help="density for the reaction processes (default 1)")
    p.add_argument("--points", type=_float_list, default=None, help="comma-separated points for rho_n")
    p.add_argument("--x-min", type=float, default=0.1, help="the grid must avoid x = 0")
    p.add_argument("--x-max", type=float, default=5.0)
    p.add_argument("--x-step", type=float, default=0.1)
    _add_common(p)
    p.set_defaults(func=cmd_correlations)

    p = sub.add_parser("simulate", help="run the lattice reaction-diffusion ensemble")
    p.add_argument("--process", choices=[q.value for q in MC_METHODS.values()], required=True)
    _add_sim(p)
    p.add_argument("--positions", action="store_true", help="include final positions (json only)")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sample-ginibre", help="real eigenvalues of real Gaussian matrices")
    p.add_argument("--n", type=int, default=120)
    p.add_argument("--replicas", type=int, default=10_000)
    p.add_argument("--s-values", type=_float_list, default=None, help="gap widths (default 1,2,3)")
    _add_common(p)
    p.set_defaults(func=cmd_sample_ginibre)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = secrets.randbits(63)
    if args.threads is not None and args.threads < 1:
        parser.error("--threads must be positive")
    try:
        text = args.func(args)
    except (UsageError, DomainError, DegenerateInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EquilibrationError, ConvergenceError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    emit(text, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
