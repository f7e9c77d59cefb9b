"""Command-line interface.

Subcommands: `check` runs one criterion on one state, `swap` performs the
network swap and reports the conditional outcomes, `scan` writes activation
grids to CSV or JSON, `reproduce` re-runs the packaged reference
configurations and prints PASS/FAIL per table row.

States are given as JSON, e.g. '{"family":"gamma1","p":0.6,"alpha":0.6}';
family "raw" takes "matrix" as four rows of [re, im] pairs. Grid-valued
flags accept either a plain number (held fixed) or lo:hi:n, which sweeps n
intervals, i.e. n+1 evenly spaced points.

Exit codes: 0 success, 1 reproduction mismatch, 2 input error, 3 I/O error.
"""

import argparse
import json
import sys

import numpy as np

from .bloch import decompose
from .criteria import (
    DELTA,
    CriterionReport,
    MeasurementTriad,
    bell_local_3322,
    bowles_unsteerable,
    canonical_form,
    chsh_max,
    cjwr_max,
    cjwr_value,
    f3_value,
    i3322_max,
    reduced_steering,
)
from .errors import ArgumentError, SteernetError
from .families import FamilySpec, make_state, omega, omega_unsteerable
from .netswap import bsm_swap, star_swap
from .optimize import OptConfig, swap_criterion_ceiling, swap_criterion_value
from .qmat import DensityMatrix
from .sweep import (
    GridSpec,
    csv_lines,
    dumps,
    format_float,
    result_to_dict,
    scan_genuine,
    scan_linear,
    scan_star,
    write_csv,
    write_json,
)

_INTERPRET = {
    "f3": {"violated": "steerable", "satisfied": "not-steerable-by-this-criterion"},
    "cjwr": {"violated": "steerable", "satisfied": "not-steerable-by-this-criterion"},
    "cjwr_value": {"violated": "steerable", "satisfied": "not-steerable-by-this-criterion"},
    "reduced_steering": {"violated": "steerable", "satisfied": "not-steerable-by-this-criterion"},
    "chsh": {"violated": "bell-nonlocal", "satisfied": "bell-local"},
    "i3322": {"violated": "bell-nonlocal", "satisfied": "bell-local"},
    "bell_local_3322": {"violated": "bell-nonlocal", "satisfied": "bell-local"},
    "bowles": {"violated": "undecided", "satisfied": "certified-unsteerable"},
    "closed_form": {"violated": "undecided", "satisfied": "certified-unsteerable"},
}


def _clean(obj):
    if isinstance(obj, CriterionReport):
        return _report_dict(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _report_dict(rep: CriterionReport) -> dict:
    out = {
        "criterion": rep.criterion,
        "value": rep.value,
        "threshold": rep.threshold,
        "verdict": rep.verdict,
        "margin": rep.margin,
    }
    meaning = _INTERPRET.get(rep.criterion, {}).get(rep.verdict)
    if meaning is None and rep.verdict == "boundary":
        meaning = "boundary"
    if meaning is not None:
        out["interpretation"] = meaning
    if rep.witness is not None:
        out["witness"] = _clean(rep.witness)
    return out


def _parse_state(text: str) -> DensityMatrix:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"state is not valid JSON: {exc}") from exc
    if not isinstance(d, dict):
        raise ArgumentError("state JSON must be an object")
    return make_state(FamilySpec.from_dict(d))


def _parse_triad(text: str) -> MeasurementTriad:
    rows = []
    for part in text.split(";"):
        comps = part.split(",")
        if len(comps) != 3:
            raise ArgumentError("triad format is x,y,z;x,y,z;x,y,z")
        try:
            rows.append([float(c) for c in comps])
        except ValueError as exc:
            raise ArgumentError(f"bad triad component in {part!r}") from exc
    if len(rows) != 3:
        raise ArgumentError("a triad needs exactly three vectors")
    return MeasurementTriad(np.array(rows))


def _opt_config(args) -> OptConfig:
    return OptConfig(restarts=args.restarts, seed=args.seed)


def cmd_check(args) -> int:
    rho = _parse_state(args.state)
    kind = args.criterion
    if kind == "f3":
        value = f3_value(decompose(rho))
        margin = value - 1.0
        verdict = "boundary" if abs(margin) <= DELTA else ("violated" if margin > 0 else "satisfied")
        rep = CriterionReport("f3", value, 1.0, verdict, None, margin)
    elif kind == "cjwr":
        if (args.alice is None) != (args.charlie is None):
            raise ArgumentError("give both --alice and --charlie or neither")
        if args.alice is not None:
            ta, tc = _parse_triad(args.alice), _parse_triad(args.charlie)
            value = cjwr_value(rho, ta, tc)
            margin = value - 1.0
            verdict = "boundary" if abs(margin) <= DELTA else ("violated" if margin > 0 else "satisfied")
            rep = CriterionReport("cjwr_value", value, 1.0, verdict, None, margin)
        else:
            rep = cjwr_max(rho)
    elif kind == "chsh":
        rep = chsh_max(rho, _opt_config(args))
    elif kind == "i3322":
        rep = i3322_max(rho, _opt_config(args))
    elif kind == "bell-local":
        rep = bell_local_3322(rho, _opt_config(args))
    elif kind == "unsteerable":
        c = canonical_form(rho)
        rep = bowles_unsteerable(c, _opt_config(args))
        wit = dict(rep.witness)
        wit["canonical_a"] = c.a
        wit["canonical_w"] = c.w
        rep = CriterionReport(rep.criterion, rep.value, rep.threshold, rep.verdict, wit, rep.margin)
    else:
        raise ArgumentError(f"unknown check {kind!r}")
    sys.stdout.write(dumps(_report_dict(rep)) + "\n")
    return 0


def _outcome_dict(out, star: bool) -> dict:
    d = {"label": out.label, "probability": out.probability}
    if out.degenerate:
        d["degenerate"] = True
        return _clean(d)
    if star:
        # tripartite conditional: no two-qubit Bloch form, report pair verdicts
        d["reduced"] = _report_dict(reduced_steering(out.conditional))
    else:
        b = decompose(out.conditional)
        d.update({"u": b.u, "v": b.v, "W": b.W, "f3": f3_value(b)})
    return _clean(d)


def cmd_swap(args) -> int:
    left = _parse_state(args.left)
    right = _parse_state(args.right)
    if args.canonical:
        left = canonical_form(left).state()
        right = canonical_form(right).state()
    if args.star is not None:
        third = _parse_state(args.star)
        if args.canonical:
            third = canonical_form(third).state()
        outs = star_swap(left, right, third)
        payload = {"mode": "star", "outcomes": [_outcome_dict(o, True) for o in outs]}
    else:
        outs = bsm_swap(left, right)
        payload = {"mode": "chain", "outcomes": [_outcome_dict(o, False) for o in outs]}
    sys.stdout.write(dumps(payload) + "\n")
    return 0


def _grid_token(text: str):
    """Either a float (fixed) or lo:hi:n meaning n intervals, n+1 points."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ArgumentError(f"grid range must be lo:hi:n, got {text!r}")
        try:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ArgumentError(f"bad grid range {text!r}") from exc
        if n < 1:
            raise ArgumentError("grid range needs at least 1 interval")
        return (lo, hi, n + 1)
    try:
        return float(text)
    except ValueError as exc:
        raise ArgumentError(f"expected number or lo:hi:n, got {text!r}") from exc


def _build_grid(args, names) -> GridSpec:
    axes, fixed = [], {}
    for name in names:
        raw = getattr(args, name, None)
        if raw is None:
            continue
        tok = _grid_token(raw)
        if isinstance(tok, tuple):
            axes.append((name, tok[0], tok[1], tok[2]))
        else:
            fixed[name] = tok
    return GridSpec(axes, fixed)


def _emit_result(result, args) -> int:
    if args.out is None:
        if args.format == "csv":
            sys.stdout.write("\n".join(csv_lines(result)) + "\n")
        else:
            sys.stdout.write(dumps(result_to_dict(result)) + "\n")
        return 0
    if args.format == "csv":
        write_csv(result, args.out)
    else:
        write_json(result, args.out)
    return 0


def cmd_scan(args) -> int:
    cfg = OptConfig(restarts=args.restarts, seed=args.seed)
    if args.kind == "linear":
        if args.alpha_fixed is not None:
            args.alpha = repr(args.alpha_fixed)
        grid = _build_grid(args, ("p", "alpha"))
        result = scan_linear(grid, audit_bell=args.audit_bell, cfg=cfg)
    elif args.kind == "star":
        if args.alpha is None:
            raise ArgumentError("star scan needs --alpha")
        tok = _grid_token(args.alpha)
        if isinstance(tok, tuple):
            raise ArgumentError("star scan takes a single --alpha value")
        grid = _build_grid(args, ("p1", "p2", "p3"))
        result = scan_star(tok, grid)
    else:
        names = ("beta1", "s1") if args.identical else ("beta1", "s1", "beta2", "s2")
        if args.identical and (args.beta2 is not None or args.s2 is not None):
            raise ArgumentError("--identical uses beta1/s1 for both states")
        grid = _build_grid(args, names)
        result = scan_genuine(grid, identical=args.identical, cfg=cfg)
    return _emit_result(result, args)


def _window(points, mask):
    idx = np.flatnonzero(np.asarray(mask))
    if idx.size == 0:
        return None
    return (float(points[idx[0]]), float(points[idx[-1]]))


def _row(lines, name, ok, detail):
    lines.append(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return ok


def _check_window(lines, name, win, expected, tol):
    if expected is None:
        ok = win is None
        detail = "no activation anywhere" if ok else f"unexpected window {win}"
        return _row(lines, name, ok, detail)
    if win is None:
        return _row(lines, name, False, f"expected window {expected}, found none")
    ok = abs(win[0] - expected[0]) <= tol and abs(win[1] - expected[1]) <= tol
    detail = (
        f"measured ({format_float(win[0])}, {format_float(win[1])}] "
        f"vs reference ({format_float(expected[0])}, {format_float(expected[1])}] "
        f"at tolerance {tol:g}"
    )
    return _row(lines, name, ok, detail)


_STEPS = 500  # reference scans use 500 intervals, i.e. step 0.002 on [0, 1]


def _reproduce_linear_region(lines) -> bool:
    grid = GridSpec([("p", 0.0, 1.0, _STEPS + 1)], {"alpha": 0.1})
    result = scan_linear(grid)
    ps = grid.points("p")
    step = ps[1] - ps[0]
    ok = True
    for k, lab in enumerate(result.labels):
        vals = np.array([c.values[k] for c in result.cells])
        act = np.array([c.activated[k] for c in result.cells])
        if lab in ("00", "01"):
            win = _window(ps, vals > 1.0 + DELTA)
            ok &= _check_window(lines, f"outcome {lab} window", win, (0.001, 0.331), step)
        else:
            win = _window(ps, act)
            ok &= _check_window(lines, f"outcome {lab} never activated", win, None, step)
    return ok


_STAR_WINDOWS = {
    "1": (0.2, 1.0),
    "6": (0.071, 0.467),
    "7": (0.071, 0.465),
    "8": (0.2, 1.0),
}


def _reproduce_star_table(lines) -> bool:
    grid = GridSpec([("p3", 0.0, 1.0, _STEPS + 1)], {"p1": 0.08, "p2": 0.075})
    result = scan_star(0.2, grid)
    ps = grid.points("p3")
    step = ps[1] - ps[0]
    ok = True
    for k, lab in enumerate(result.labels):
        act = np.array([c.activated[k] for c in result.cells])
        win = _window(ps, act)
        expected = _STAR_WINDOWS.get(lab)
        name = f"outcome {lab} activation range" if expected else f"outcome {lab} never activated"
        ok &= _check_window(lines, name, win, expected, step)
    return ok


_GENUINE_ROWS = (
    ((0.75, 0.76, 0.99), (0.58, 1.0)),
    ((0.65, 0.60, 0.97), (0.78, 1.0)),
    ((0.55, 0.55, 0.90), (0.88, 1.0)),
    ((0.60, 0.55, 0.80), (0.98, 1.0)),
)


def _reproduce_genuine_table(lines) -> bool:
    ok = True
    for (b1, b2, s1), expected in _GENUINE_ROWS:
        grid = GridSpec(
            [("s2", 0.0, 1.0, _STEPS + 1)],
            {"beta1": b1, "s1": s1, "beta2": b2},
        )
        result = scan_genuine(grid)
        ps = grid.points("s2")
        step = ps[1] - ps[0]
        vals = np.array([c.values[0] for c in result.cells])  # outcome 00
        win = _window(ps, vals > 1.0 + DELTA)
        name = f"row ({b1}, {b2}, {s1}) outcome 00 s2-range"
        ok &= _check_window(lines, name, win, expected, step)
    return ok


def _reproduce_certificate_bound(lines) -> bool:
    res = swap_criterion_ceiling(OptConfig(restarts=64, seed=0))
    ok1 = abs(res.value - 0.75) <= 1e-3
    _row(lines, "certificate ceiling", ok1, f"optimum {format_float(res.value)} vs 0.75 (tol 1e-3)")
    listed = swap_criterion_value(
        np.array([1.0, 0.0, 0.0]),
        np.array([1.0, 0.0, 0.0]),
        np.array([0.5, 0.454199, 0.46353]),
        np.array([-1.0, 0.0, 0.0]),
    )
    ok2 = abs(listed - 0.75) <= 1e-12
    _row(lines, "listed maximizer", ok2, f"evaluates to {format_float(listed)}")
    return ok1 and ok2


_CONTROL_EXPECTED = {
    "00": ((0.0, 0.0, 0.98107), (0.0729052, -0.0729052, 0.0128697)),
    "01": ((0.0, 0.0, 0.98107), (-0.0729052, 0.0729052, 0.0128697)),
    "10": ((0.0, 0.0, 0.907448), (0.0729052, 0.0729052, -0.0128697)),
    "11": ((0.0, 0.0, 0.907448), (-0.0729052, -0.0729052, -0.0128697)),
}


def _reproduce_control_pair(lines) -> bool:
    ok = True
    pair = ((0.1, 0.7), (0.3, 0.59))
    for k, (beta, s) in enumerate(pair, start=1):
        cert = omega_unsteerable(beta, s)
        ok &= _row(lines, f"input {k} certified unsteerable", cert, f"beta={beta}, s={s}")
    c1 = canonical_form(omega(*pair[0]))
    c2 = canonical_form(omega(*pair[1]))
    outs = bsm_swap(c1.state(), c2.state())
    for out in outs:
        b = decompose(out.conditional)
        eu, ew = _CONTROL_EXPECTED[out.label]
        du = max(abs(b.u[i] - eu[i]) for i in range(3))
        dw = max(abs(b.W[i, i] - ew[i]) for i in range(3))
        doff = float(np.max(np.abs(b.W - np.diag(np.diag(b.W)))))
        dv = float(np.max(np.abs(b.v)))
        good = du <= 1e-5 and dw <= 1e-5 and doff <= 1e-5 and dv <= 1e-5
        ok &= _row(
            lines,
            f"outcome {out.label} Bloch values",
            good,
            f"max deviation {format_float(max(du, dw, doff, dv))} (tol 1e-5)",
        )
        rep = bowles_unsteerable(canonical_form(out.conditional))
        good = rep.verdict == "satisfied"
        ok &= _row(
            lines,
            f"outcome {out.label} unsteerability",
            good,
            f"criterion value {format_float(rep.value)} <= 1",
        )
    return ok


_TARGETS = {
    "linear-region": _reproduce_linear_region,
    "star-table": _reproduce_star_table,
    "genuine-table": _reproduce_genuine_table,
    "certificate-bound": _reproduce_certificate_bound,
    "control-pair": _reproduce_control_pair,
}


def cmd_reproduce(args) -> int:
    lines = []
    ok = _TARGETS[args.target](lines)
    lines.append("result: " + ("all rows PASS" if ok else "some rows FAIL"))
    sys.stdout.write("\n".join(lines) + "\n")
    return 0 if ok else 1


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="steernet", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check", help="run one criterion on one state")
    chk.add_argument("criterion",
                     choices=["f3", "cjwr", "chsh", "i3322", "bell-local", "unsteerable"])
    chk.add_argument("state", help="state JSON")
    chk.add_argument("--alice", help="first-party triad x,y,z;x,y,z;x,y,z (cjwr only)")
    chk.add_argument("--charlie", help="second-party triad (cjwr only)")
    chk.add_argument("--restarts", type=int, default=64)
    chk.add_argument("--seed", type=int, default=0)
    chk.set_defaults(func=cmd_check)

    swp = sub.add_parser("swap", help="swap two (or three) states and report outcomes")
    swp.add_argument("left", help="state JSON")
    swp.add_argument("right", help="state JSON")
    swp.add_argument("--star", metavar="THIRD", help="third state JSON, star topology")
    swp.add_argument("--canonical", action="store_true",
                     help="map inputs to canonical form before swapping")
    swp.set_defaults(func=cmd_swap)

    scn = sub.add_parser("scan", help="grid scan, writes CSV or JSON")
    scn.add_argument("kind", choices=["linear", "star", "genuine"])
    for name in ("p", "alpha", "p1", "p2", "p3", "beta1", "s1", "beta2", "s2"):
        scn.add_argument(f"--{name}", help="number or lo:hi:n")
    scn.add_argument("--alpha-fixed", type=float, dest="alpha_fixed",
                     help="hold alpha at this value (linear)")
    scn.add_argument("--identical", action="store_true",
                     help="genuine scan with two identical inputs")
    scn.add_argument("--audit-bell", action="store_true", dest="audit_bell",
                     help="also run Bell tests on activated cells (slow)")
    scn.add_argument("--seed", type=int, default=0)
    scn.add_argument("--restarts", type=int, default=8)
    scn.add_argument("--out", help="output path (default stdout)")
    scn.add_argument("--format", choices=["csv", "json"], default="csv")
    scn.set_defaults(func=cmd_scan)

    rep = sub.add_parser("reproduce", help="re-run a packaged reference configuration")
    rep.add_argument("target", choices=sorted(_TARGETS))
    rep.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SteernetError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"io error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
