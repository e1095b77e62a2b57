"""Command-line front end: ``qfourier eval|transform|verify|table``.

Exit codes: 0 success, 1 a verification check failed (including a round
trip above tolerance), 2 usage or parse error, 3 domain error (pole, strip,
non-integrable input).
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings

import numpy as np

from .distributions import c_nu, table_rows
from .errors import ConvergenceWarning, QFourierError
from .lattice import Skeleton, Window
from .qcore import E_q2, QParams, big_trig, bigQ, e_q2, phi01, small_trig, theta0, theta_lattice
from .transform import fourier_forward, fourier_inverse
from .verify import ACCEPTANCE_NU, ACCEPTANCE_Q, GUARD_BAND, SuiteConfig, run_suite, select_suites

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3
ROUNDTRIP_TOL = 1e-8


class UsageError(Exception):
    pass


def _num(x: float) -> str:
    return f"{x + 0.0:.17g}"


def parse_complex(text: str) -> complex:
    """Parse ``re`` or ``re+imi`` (also ``re-imi`` and a bare ``imi``)."""
    t = text.strip().replace(" ", "")
    try:
        if t.endswith("i"):
            return complex(t[:-1] + "j")
        return complex(float(t), 0.0)
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}; use 're' or 're+imi'") from None


def parse_window(text: str | None) -> Window | None:
    if text is None:
        return None
    try:
        lo, hi = text.split(":")
        return Window(int(lo), int(hi))
    except (ValueError, QFourierError):
        raise UsageError(f"--window expects MIN:MAX with MIN <= MAX, got {text!r}") from None


def make_params(args, q: float | None = None) -> QParams:
    q = args.q if q is None else q
    try:
        return QParams(q, series_tol=args.tol, lattice_depth=args.depth)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def _needs_z(args) -> complex:
    if args.z is None:
        raise UsageError(f"{args.function} needs --z")
    return parse_complex(args.z)


EVAL_FUNCTIONS = {
    "e_q2": lambda z, p, a: e_q2(z, p),
    "E_q2": lambda z, p, a: E_q2(z, p),
    "cos_q2": lambda z, p, a: small_trig(z, p)[0],
    "sin_q2": lambda z, p, a: small_trig(z, p)[1],
    "Cos_q2": lambda z, p, a: big_trig(z, p)[0],
    "Sin_q2": lambda z, p, a: big_trig(z, p)[1],
    "phi01": lambda z, p, a: phi01(z, p),
    "theta": lambda z, p, a: theta_lattice(z, p),
    "bigQ": lambda z, p, a: bigQ(z, p),
}


def cmd_eval(args, out) -> int:
    name = args.function
    p = make_params(args, 0.5 if args.q is None else None)
    if name == "theta0":
        value, z = complex(theta0(p)), None
    elif name == "c_nu":
        if args.nu is None:
            raise UsageError("c_nu needs --nu")
        value, z = complex(c_nu(args.nu, p)), None
    elif name in EVAL_FUNCTIONS:
        z = _needs_z(args)
        # real arguments stay real so that real-axis formulas apply
        arg = z.real if z.imag == 0 else z
        value = complex(EVAL_FUNCTIONS[name](arg, p, args))
    else:
        known = ", ".join([*EVAL_FUNCTIONS, "theta0", "c_nu"])
        raise UsageError(f"unknown function {name!r}; expected one of {known}")
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        print(f"error: {name} is not finite at this argument", file=sys.stderr)
        return EXIT_DOMAIN
    fmt = args.format or "text"
    if fmt == "json":
        doc = {"function": name, "q": p.q, "re": value.real, "im": value.imag}
        if z is not None:
            doc["z"] = [z.real, z.imag]
        if args.nu is not None and name == "c_nu":
            doc["nu"] = args.nu
        out.write(json.dumps(doc) + "\n")
    elif fmt == "csv":
        out.write("function,q,re,im\n")
        out.write(f"{name},{_num(p.q)},{_num(value.real)},{_num(value.imag)}\n")
    else:
        text = _num(value.real) if value.imag == 0 else f"{_num(value.real)}{value.imag:+.17g}i"
        out.write(text + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# transform
# ---------------------------------------------------------------------------

def _interior_rel_error(got: Skeleton, want: Skeleton) -> float:
    w = got.window.intersect(want.window).shrink(GUARD_BAND, GUARD_BAND)
    g, h = got.restrict(w), want.restrict(w)
    diff = max(np.max(np.abs(g.pos - h.pos)), np.max(np.abs(g.neg - h.neg)))
    return float(diff / max(h.max_abs(), 1e-300))


def cmd_transform(args, out) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    try:
        doc_q = float(json.loads(text)["q"])
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot parse skeleton file: {exc}") from None
    if args.q is not None and args.q != doc_q:
        raise UsageError(f"q mismatch: --q {args.q} but the file has q={doc_q}")
    p = make_params(args, doc_q)
    try:
        phi = Skeleton.from_json(text, p)
    except (ValueError, QFourierError) as exc:
        raise UsageError(f"cannot parse skeleton file: {exc}") from None
    window = parse_window(args.window)
    if args.direction == "forward":
        result = fourier_forward(phi, window, workers=args.workers)
    elif args.direction == "inverse":
        result = fourier_inverse(phi, window, workers=args.workers)
    else:
        # the forward image of a sample is not itself integrable, so only the input is checked
        psi = fourier_forward(phi, window, workers=args.workers)
        result = fourier_inverse(psi, workers=args.workers, check=False)
        err = _interior_rel_error(result, phi)
        print(f"round trip interior max relative error: {err:.3e} (tolerance {ROUNDTRIP_TOL:g})",
              file=sys.stderr)
        out.write(result.to_json() + "\n")
        return EXIT_OK if err <= ROUNDTRIP_TOL else EXIT_FAILED
    out.write(result.to_json() + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args, out) -> int:
    try:
        names = select_suites(args.suite)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    qs = ACCEPTANCE_Q if args.q is None else (args.q,)
    nus = ACCEPTANCE_NU if args.nu is None else (args.nu,)
    cfg = SuiteConfig(params=tuple(make_params(args, q) for q in qs), nus=nus,
                      window=parse_window(args.window))
    results = {name: run_suite(name, cfg) for name in names}
    fmt = args.format or "text"
    if fmt == "json":
        doc = {name: [c.to_dict() for c in checks] for name, checks in results.items()}
        out.write(json.dumps(doc, indent=1) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["suite", "check", "residual", "tolerance", "passed", "detail"])
        for name, checks in results.items():
            for c in checks:
                w.writerow([name, c.name, "exact" if c.exact else _num(c.residual), _num(c.tolerance),
                            c.passed, c.detail])
    else:
        for name, checks in results.items():
            out.write(f"[{name}]\n")
            for c in checks:
                out.write(f"  {c.line()}\n")
    failed = sum(not c.passed for checks in results.values() for c in checks)
    total = sum(len(checks) for checks in results.values())
    print(f"{total - failed} of {total} checks passed", file=sys.stderr)
    return EXIT_OK if failed == 0 else EXIT_FAILED


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------

TABLE_COLUMNS = ["source_label", "image_label", "constant_re", "constant_im", "q", "nu"]


def cmd_table(args, out) -> int:
    p = make_params(args, 0.5 if args.q is None else None)
    rows = args.rows
    if rows == "auto":
        rows = "all" if args.nu is not None else "integer"
    if rows in ("all", "nu") and args.nu is None:
        raise UsageError(f"--rows {rows} includes the nu rows, which need --nu")
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    entries = table_rows(p, args.nu if rows != "integer" else None, n=args.n)
    if rows == "nu":
        entries = entries[5:]
    records = []
    for e in entries:
        c = complex(e.normalization)
        records.append({"source_label": e.source_label, "image_label": e.image_label,
                        "constant_re": c.real, "constant_im": c.imag, "q": p.q, "nu": e.nu})
    if args.format == "json":
        out.write(json.dumps(records, indent=1) + "\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(TABLE_COLUMNS)
        for r in records:
            w.writerow([r["source_label"], r["image_label"], _num(r["constant_re"]), _num(r["constant_im"]),
                        _num(r["q"]), "" if r["nu"] is None else _num(r["nu"])])
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=float, default=None, help="deformation parameter in (0, 1)")
    common.add_argument("--tol", type=float, default=1e-15, help="series truncation tolerance")
    common.add_argument("--depth", type=int, default=48, help="initial bilateral half-width")
    common.add_argument("--window", default=None, metavar="MIN:MAX", help="lattice index window")
    common.add_argument("--format", choices=["text", "json", "csv"], default=None)
    common.add_argument("--nu", type=float, default=None)
    common.add_argument("--workers", type=int, default=None, help="threads for transform sums")

    parser = argparse.ArgumentParser(prog="qfourier", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="evaluate a special function")
    p_eval.add_argument("function")
    p_eval.add_argument("--z", default=None, help="argument as 're' or 're+imi'")
    p_eval.set_defaults(run=cmd_eval)

    p_tr = sub.add_parser("transform", parents=[common], help="transform a skeleton JSON file")
    p_tr.add_argument("input")
    p_tr.add_argument("--direction", choices=["forward", "inverse", "roundtrip"], default="forward")
    p_tr.set_defaults(run=cmd_transform)

    p_ver = sub.add_parser("verify", parents=[common], help="run verification suites")
    p_ver.add_argument("--suite", default=None, help="substring of suite names (default all)")
    p_ver.set_defaults(run=cmd_verify)

    p_tab = sub.add_parser("table", parents=[common], help="emit the distribution transform table")
    p_tab.add_argument("--n", type=int, default=1, help="n for the integer power rows")
    p_tab.add_argument("--rows", choices=["auto", "all", "integer", "nu"], default="auto")
    p_tab.set_defaults(run=cmd_table)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConvergenceWarning)
            with np.errstate(all="ignore"):
                return args.run(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QFourierError, OverflowError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    entry()
