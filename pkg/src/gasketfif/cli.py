"""Command-line front end.

Verbs: build | eval | grid | chaos | dim | holder | check.  Configuration
is a single JSON file; addresses serialize as "letters@corner" and vertex
pairs as "w@i|w@j".  Exit codes are documented in --help.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time

import numpy as np

from . import analysis, evaluator
from .errors import (
    CapacityError,
    ContractionError,
    DomainError,
    HypothesisError,
    PreconditionError,
    ValidationError,
)
from .gasket import Address, GasketSpec, enumerate_vertices
from .model import (
    DataSet,
    ScalingField,
    build_model,
    check_compatibility,
    perturb_shift,
    sup_bounds,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_VALIDATION = 2
EXIT_CONTRACTION = 3
EXIT_DOMAIN = 4
EXIT_CAPACITY = 5
EXIT_USAGE = 6
EXIT_PARSE = 7

GRID_ROW_BUDGET = 10**8

EPILOG = """\
exit codes:
  0  success
  1  invariant check failed
  2  config validation error (missing vertices, boundary values, duplicates)
  3  scaling field is not a contraction (sup norm >= 1)
  4  point outside the domain
  5  capacity budget exceeded
  6  usage / precondition error
  7  unreadable or malformed config file
"""


class _ConfigError(Exception):
    pass


def _load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as e:
        raise _ConfigError(f"cannot read config {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise _ConfigError(f"config {path} is not valid JSON: {e}") from None
    if not isinstance(raw, dict):
        raise _ConfigError("config root must be a JSON object")
    return raw


def _parse_gasket(raw, field):
    if raw is None:
        return None
    try:
        corners = tuple((float(p[0]), float(p[1])) for p in raw)
        return GasketSpec(corners)
    except (TypeError, ValueError, IndexError) as e:
        raise _ConfigError(f"{field}: bad corner list: {e}") from None


def _parse_scaling(raw, n):
    if not isinstance(raw, dict):
        raise _ConfigError("scaling: must be an object")
    if "constant" in raw:
        try:
            return ScalingField.constant(float(raw["constant"]), n)
        except (TypeError, ValueError) as e:
            raise _ConfigError(f"scaling.constant: {e}") from None
    if "cells" in raw:
        mapping = {}
        for key, val in raw["cells"].items():
            w1, sep, w2 = key.partition("|")
            if not sep:
                raise _ConfigError(f"scaling.cells key {key!r} must look like 'w|w'")
            mapping[(w1, w2)] = val
        return ScalingField.from_cells(mapping, n)
    raise _ConfigError("scaling: need either 'constant' or 'cells'")


def build_from_config(path):
    """Parse and assemble the model described by a config file."""
    raw = _load_config(path)
    try:
        n = int(raw["n"])
    except KeyError:
        raise _ConfigError("missing field 'n'") from None
    except (TypeError, ValueError):
        raise _ConfigError("'n' must be an integer") from None
    g1 = _parse_gasket(raw.get("gasket1"), "gasket1")
    g2 = _parse_gasket(raw.get("gasket2"), "gasket2")
    scaling = _parse_scaling(raw.get("scaling", {}), n)
    data_raw = raw.get("data")
    if not isinstance(data_raw, list):
        raise _ConfigError("'data' must be a list of {first, second, z} objects")
    triples = []
    for idx, item in enumerate(data_raw):
        try:
            triples.append((item["first"], item["second"], float(item["z"])))
        except (KeyError, TypeError, ValueError) as e:
            raise _ConfigError(f"data[{idx}]: {e}") from None
    try:
        data = DataSet.build(n, triples)
    except ValueError as e:
        raise ValidationError(str(e)) from None
    return build_model(data, scaling, g1, g2)


def _report(command, started, status, outputs=()):
    wall = time.perf_counter() - started
    outs = ",".join(outputs)
    print(
        f"# run command={command} wall={wall:.3f}s status={status} outputs=[{outs}]",
        file=sys.stderr,
    )


def _atomic_write(path, writer):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            writer(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_build(args):
    model = build_from_config(args.config)
    rep = check_compatibility(model, samples_per_edge=6)
    alpha_sup, shift_sup, f_bound = sup_bounds(model)
    print(f"n={model.n} a={model.a:.17g}")
    print(f"alphaSup={alpha_sup:.17g}")
    print(f"shiftSup={shift_sup:.17g}")
    print(f"fSupBound={f_bound:.17g}")
    print(f"compatibilityMax={rep.max_discrepancy:.3e}")
    return EXIT_OK


def cmd_eval(args):
    model = build_from_config(args.config)
    if args.address:
        a = Address.parse(args.address[0])
        b = Address.parse(args.address[1])
        value = evaluator.eval_exact(model, a, b)
        print(f"f({a}|{b}) = {value:.17g}")
    elif args.point:
        t = args.point[0:2]
        s = args.point[2:4]
        value, bound = evaluator.eval_approx(model, t, s, args.depth)
        print(f"f({t[0]:g},{t[1]:g};{s[0]:g},{s[1]:g}) = {value:.17g}")
        print(f"errorBound = {bound:.17g}")
    else:
        raise PreconditionError("eval needs either --address or --point")
    return EXIT_OK


def cmd_grid(args):
    model = build_from_config(args.config)
    if args.depth % model.n or args.depth < model.n:
        raise PreconditionError(f"--depth must be a positive multiple of N={model.n}")
    verts = enumerate_vertices(args.depth)
    rows = len(verts) ** 2
    if rows > GRID_ROW_BUDGET:
        raise CapacityError(f"{rows} rows exceed the grid budget {GRID_ROW_BUDGET}")
    g1, g2 = model.gasket1, model.gasket2
    from .gasket import address_point

    pts1 = [address_point(g1, a) for a in verts]
    pts2 = [address_point(g2, b) for b in verts]
    values = np.empty((len(verts), len(verts)))

    def write(fh):
        fh.write("t_x,t_y,s_x,s_y,f\n")
        for i, a in enumerate(verts):
            for j, b in enumerate(verts):
                v = evaluator.eval_exact(model, a, b)
                values[i, j] = v
                fh.write(
                    f"{pts1[i][0]:.17g},{pts1[i][1]:.17g},"
                    f"{pts2[j][0]:.17g},{pts2[j][1]:.17g},{v:.17g}\n"
                )

    outputs = []
    _atomic_write(args.out, write)
    outputs.append(args.out)
    if args.ppm:
        _write_ppm(args.ppm, values)
        outputs.append(args.ppm)
    print(f"wrote {rows} rows to {args.out}")
    args._outputs = outputs
    return EXIT_OK


def _write_ppm(path, values):
    """Min-max normalized grayscale heatmap, binary PPM (P6)."""
    lo, hi = float(values.min()), float(values.max())
    span = hi - lo if hi > lo else 1.0
    gray = np.round(255.0 * (values - lo) / span).astype(np.uint8)
    h, w = gray.shape
    rgb = np.repeat(gray[:, :, None], 3, axis=2)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
            fh.write(rgb.tobytes())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_chaos(args):
    model = build_from_config(args.config)
    samples = evaluator.chaos_game(model, args.points, args.seed, args.burn_in)
    evaluator.samples_to_csv(samples, args.out)
    print(f"wrote {len(samples)} samples to {args.out}")
    return EXIT_OK


def cmd_dim(args):
    if args.min_level >= args.max_level or args.max_level - args.min_level < 2:
        raise PreconditionError("need max-level >= min-level + 2 for a regression")
    model = build_from_config(args.config)
    records = []
    print("level,delta,count")
    for n in range(args.min_level, args.max_level + 1):
        table = analysis.oscillation(model, n, args.samples_per_cell)
        rec = analysis.box_count(model, n, table)
        records.append(rec)
        print(f"{rec.level},{rec.delta:.17g},{rec.count}")
    report = analysis.estimate_box_dimension(records)
    print(f"slope = {report.slope:.6f} +- {report.std_error:.6f}")
    try:
        lower, upper = analysis.dimension_bounds(model)
    except HypothesisError as e:
        print(f"warning: analytic bounds not applicable: {e}")
        return EXIT_OK
    verdict = "PASS" if lower - 0.15 <= report.slope <= upper + 0.2 else "FAIL"
    print(f"bounds: [{lower:.6f}, {upper:.6f}]  sandwich: {verdict}")
    return EXIT_OK if verdict == "PASS" else EXIT_CHECK_FAILED


def cmd_holder(args):
    model = build_from_config(args.config)
    rep = analysis.holder_predict(model)
    print(f"case = {rep.case_id}")
    print(f"delta = {rep.delta:.17g}")
    print(f"predictedExponent = {rep.exponent:.17g}")
    fit = analysis.holder_fit(model, args.min_level, args.max_level)
    if fit.degenerate:
        print("empiricalExponent = inf (all oscillations zero)")
        return EXIT_OK
    print(f"empiricalExponent = {fit.exponent:.6f} +- {fit.std_error:.6f}")
    verdict = "PASS" if fit.exponent >= rep.exponent - 0.2 else "FAIL"
    print(f"one-sided verdict: {verdict}")
    return EXIT_OK if verdict == "PASS" else EXIT_CHECK_FAILED


def cmd_check(args):
    model = build_from_config(args.config)
    if args.corrupt:
        try:
            omega, eta, i, j, delta = args.corrupt.split("|")
            model = perturb_shift(model, omega, eta, int(i), int(j), float(delta))
        except (ValueError, KeyError) as e:
            raise PreconditionError(f"bad --corrupt spec: {e}") from None
    failures = []

    def check(name, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} {name}"
        if detail:
            line += f" ({detail})"
        print(line)
        if not ok:
            failures.append(name)

    rep = check_compatibility(model, samples_per_edge=8)
    check(
        "compatibility",
        rep.max_discrepancy <= 1e-12,
        f"max discrepancy {rep.max_discrepancy:.3e} worst {rep.worst}"
        if rep.max_discrepancy > 1e-12
        else f"max discrepancy {rep.max_discrepancy:.3e}",
    )

    bad = 0
    for key, z in model.data.entries.items():
        v = evaluator.eval_exact(model, key.first, key.second)
        if abs(v - z) > 1e-12 * (1.0 + abs(z)):
            bad += 1
    check("interpolation", bad == 0, f"{bad} vertices off" if bad else "")

    rng = np.random.default_rng(7)
    g1, g2 = model.gasket1, model.gasket2
    from .model import eval_scaling, eval_shift, words_of_length
    from .gasket import address_point

    words = words_of_length(model.n)
    tol = 1e-9 * (1.0 + model.f_sup_bound)
    worst = 0.0
    for _ in range(200):
        wt = "".join(rng.choice(list("123"), size=rng.integers(0, 4)))
        ws = "".join(rng.choice(list("123"), size=rng.integers(0, 4)))
        at = Address(wt, int(rng.integers(1, 4)))
        bs = Address(ws, int(rng.integers(1, 4)))
        omega = words[rng.integers(0, len(words))]
        eta = words[rng.integers(0, len(words))]
        t = address_point(g1, at)
        s = address_point(g2, bs)
        lhs = evaluator.eval_exact(model, Address(omega + at.word, at.corner),
                                   Address(eta + bs.word, bs.corner))
        rhs = (
            eval_scaling(model, omega, eta, t, s)
            * evaluator.eval_exact(model, at, bs)
            + eval_shift(model, omega, eta, t, s)
        )
        worst = max(worst, abs(lhs - rhs))
    check("functional-equation", worst <= tol, f"residual {worst:.3e}")

    worst = 0.0
    for _ in range(100):
        w = "".join(rng.choice(list("123"), size=4))
        c = int(rng.integers(1, 4))
        corner = int(rng.integers(1, 4))
        v1 = evaluator.eval_exact(model, Address("", corner), Address(w, c))
        v2 = evaluator.eval_exact(model, Address(w, c), Address("", corner))
        worst = max(worst, abs(v1), abs(v2))
    check("boundary-vanishing", worst <= tol, f"max |f| {worst:.3e}")

    ok = True
    for m in range(0, 5):
        if len(enumerate_vertices(m)) != 3 * (3**m + 1) // 2:
            ok = False
    check("vertex-count", ok)

    depth = model.n
    sup_ratio = 0.0
    for _ in range(5):
        ga = evaluator.GridFunction(model, depth)
        gb = evaluator.GridFunction(model, depth)
        ga.values = rng.standard_normal(ga.values.shape)
        gb.values = rng.standard_normal(gb.values.shape)
        num = np.max(np.abs(evaluator.rb_apply(model, ga).values
                            - evaluator.rb_apply(model, gb).values))
        den = np.max(np.abs(ga.values - gb.values))
        if den > 0:
            sup_ratio = max(sup_ratio, num / den)
    check(
        "contraction",
        sup_ratio <= model.alpha_sup + 1e-12,
        f"ratio {sup_ratio:.6f} vs alphaSup {model.alpha_sup:.6f}",
    )

    return EXIT_OK if not failures else EXIT_CHECK_FAILED


def _make_parser():
    parser = argparse.ArgumentParser(
        prog="gasketfif",
        description="Fractal interpolation on the product of two Sierpinski gaskets",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("-c", "--config", required=True, help="JSON model config")
        p.add_argument(
            "--threads",
            type=int,
            default=0,
            help="worker threads for the numeric kernels (0 = auto)",
        )

    p = sub.add_parser("build", help="validate a config and print derived constants")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("eval", help="evaluate f at an address or a point")
    common(p)
    p.add_argument("--address", nargs=2, metavar=("W@I", "W@J"))
    p.add_argument("--point", nargs=4, type=float, metavar=("TX", "TY", "SX", "SY"))
    p.add_argument("--depth", type=int, default=12, help="truncation depth k")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid", help="exact values on a product vertex grid (CSV)")
    common(p)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--ppm", help="also write a PPM heatmap of the value matrix")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("chaos", help="chaos-game samples of the graph (CSV)")
    common(p)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=100)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_chaos)

    p = sub.add_parser("dim", help="box counts, dimension slope and bounds")
    common(p)
    p.add_argument("--min-level", type=int, required=True)
    p.add_argument("--max-level", type=int, required=True)
    p.add_argument("--samples-per-cell", type=int, default=9)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("holder", help="predicted and empirical Holder exponents")
    common(p)
    p.add_argument("--min-level", type=int, default=3)
    p.add_argument("--max-level", type=int, default=6)
    p.set_defaults(func=cmd_holder)

    p = sub.add_parser("check", help="run the full invariant suite")
    common(p)
    p.add_argument("--corrupt", help=argparse.SUPPRESS)  # test hook: w|w|i|j|delta
    p.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = _make_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        code = args.func(args)
    except _ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_PARSE
    except ContractionError as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_CONTRACTION
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_VALIDATION
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_DOMAIN
    except CapacityError as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_CAPACITY
    except PreconditionError as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_USAGE
    outputs = getattr(args, "_outputs", ())
    _report(args.command, started, "ok" if code == EXIT_OK else f"exit={code}", outputs)
    return code


if __name__ == "__main__":
    sys.exit(main())
