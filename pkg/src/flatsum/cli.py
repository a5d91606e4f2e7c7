"""Command-line front end: ``flatsum <subcommand> ...``.

Exit status is 0 on success or a passing suite, 1 when an asserted
suite or sweep fails, and 2 on any usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .arith import as_modulus
from .characters import DirichletCharacter, character_from_label, enumerate_characters, jacobi_character, principal_character
from .expsums import gauss_sum_shifted, kloosterman, salie_rhs, t_sum
from .flatnum import flat_set, fourier_w_star, salie_w_star, w_star_sum, w_sum, zhang_count
from .harness import SUITES, TARGETS, SweepConfig, burgess_ratio, run_bound_sweep, run_identity_suite
from .harness.report import Report, _cell, _num, render_report, write_text

SUM_KINDS = ("kloosterman", "tsum", "gauss", "salie-rhs", "w", "wstar", "wstar-fourier", "wstar-salie")
JACOBI_KINDS = ("salie-rhs", "wstar-salie")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _str_list(text: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _threshold(text: str):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad threshold {text!r}") from None
    return int(value) if value.denominator == 1 else float(value)


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output path (default: standard output)")


def _sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q-min", type=int, default=3)
    p.add_argument("--q-max", type=int)
    p.add_argument("--q-list", type=_int_list)
    p.add_argument("--h-grid", type=_str_list, default=None, help="e.g. 1,q/8,q/4,q/2,q")
    p.add_argument("--chi", default="all", help="all | jacobi | principal | index:<labels>")
    p.add_argument("--samples", type=int, default=32)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=0x5EED)
    p.add_argument("--tol", type=float, default=None, help="tolerance factor (scaled by q where the suite says so)")
    p.add_argument("--r", type=_int_list, default=(1, 2, 3))
    p.add_argument("--deltas", type=_str_list, default=None)
    _output_flags(p)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flatsum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("flat", help="print the H-flat residues mod q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--h", type=_threshold, required=True)
    _output_flags(p)

    p = sub.add_parser("sum", help="evaluate one character or exponential sum")
    p.add_argument("--kind", choices=SUM_KINDS, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--chi", default=None, help="all | jacobi | principal | index:<labels> | q=<q>;labels=<...>")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--h", type=_threshold)
    _output_flags(p)

    p = sub.add_parser("zhang", help="count units within delta*q of their inverse")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--delta", type=_str_list, required=True, help="one value or a comma list")
    _output_flags(p)

    p = sub.add_parser("verify", help="run an identity suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    _sweep_flags(p)

    p = sub.add_parser("sweep", help="run a bound ratio sweep")
    p.add_argument("--target", choices=TARGETS, required=True)
    _sweep_flags(p)

    p = sub.add_parser("burgess", help="compare an interval character sum with the Burgess shape")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--chi", required=True)
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    _output_flags(p)
    return parser


def resolve_characters(q: int, selector: str) -> list[DirichletCharacter]:
    mod = as_modulus(q)
    if selector == "all":
        return enumerate_characters(mod)
    if selector == "principal":
        return [principal_character(mod)]
    if selector == "jacobi":
        return [jacobi_character(mod)]
    if selector.startswith("index:"):
        try:
            labels = tuple(int(x) for x in selector[6:].split(",") if x.strip())
        except ValueError:
            raise UsageError(f"bad character selector {selector!r}") from None
        return [DirichletCharacter(mod, labels)]
    if selector.startswith("q="):
        chi = character_from_label(selector)
        if chi.q != q:
            raise UsageError(f"character label is for modulus {chi.q}, not {q}")
        return [chi]
    raise UsageError(f"unknown character selector {selector!r}")


def _render_rows(rows: list[dict], columns: tuple[str, ...], fmt: str, header: dict | None = None) -> str:
    if fmt == "json":
        obj = dict(header or {})
        obj["results"] = [{k: _num(row[k]) for k in columns} for row in rows]
        return json.dumps(obj, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[k]) for k in columns])
    return buf.getvalue()


def _require(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"sum --kind {args.kind} requires {', '.join(missing)}")


def _cmd_flat(args) -> int:
    fs = flat_set(args.q, args.h)
    if args.format == "json":
        text = json.dumps(fs.to_json()) + "\n"
    else:
        text = "q,h,member\n" + "".join(f"{fs.q},{fs.h},{n}\n" for n in fs.members)
    write_text(text, args.out)
    return 0


def _cmd_sum(args) -> int:
    kind, q = args.kind, args.q
    if kind in JACOBI_KINDS:
        if args.chi not in (None, "jacobi"):
            raise UsageError(f"sum --kind {kind} always uses the Jacobi character")
        chars = None
    else:
        if args.chi is None:
            raise UsageError(f"sum --kind {kind} requires --chi")
        chars = resolve_characters(q, args.chi)
    rows = []

    def add(label, value, terms):
        rows.append({"chi": label, "re": value.real, "im": value.imag, "abs": abs(value), "term_count": terms})

    if kind == "salie-rhs":
        _require(args, "m", "n")
        res = salie_rhs(args.m, args.n, q)
        add(res.params[-1], res.value, res.term_count)
    elif kind == "wstar-salie":
        _require(args, "h")
        res = salie_w_star(args.h, q)
        add(res.chi_label, res.w, None)
    else:
        for chi in chars:
            if kind == "kloosterman":
                _require(args, "m", "n")
                res = kloosterman(chi, args.m, args.n, q)
                add(chi.label, res.value, res.term_count)
            elif kind == "tsum":
                _require(args, "m", "n", "d")
                res = t_sum(chi, args.m, args.n, args.d, q)
                add(chi.label, res.value, res.term_count)
            elif kind == "gauss":
                _require(args, "s")
                res = gauss_sum_shifted(args.s, chi)
                add(chi.label, res.value, res.term_count)
            else:
                _require(args, "h")
                fn = {"w": w_sum, "wstar": w_star_sum, "wstar-fourier": fourier_w_star}[kind]
                res = fn(chi, args.h, q)
                add(chi.label, res.w, None)
    header = {"kind": kind, "q": q}
    for key in ("m", "n", "d", "s", "h"):
        if getattr(args, key) is not None:
            header[key] = getattr(args, key)
    text = _render_rows(rows, ("chi", "re", "im", "abs", "term_count"), args.format, header)
    write_text(text, args.out)
    return 0


def _cmd_zhang(args) -> int:
    rows = []
    for token in args.delta:
        res = zhang_count(args.q, token)
        rows.append({"q": args.q, "delta": token, "count": res.count, "main_term": res.main_term, "error": res.error})
    text = _render_rows(rows, ("q", "delta", "count", "main_term", "error"), args.format)
    write_text(text, args.out)
    return 0


def _config(args) -> SweepConfig:
    if args.q_max is None and args.q_list is None:
        raise UsageError("one of --q-max or --q-list is required")
    kwargs = dict(
        q_min=args.q_min,
        q_max=args.q_max,
        q_list=args.q_list,
        chi=args.chi,
        samples=args.samples,
        seed=args.seed,
        tol=args.tol,
        r_values=args.r,
    )
    if args.h_grid is not None:
        kwargs["h_grid"] = args.h_grid
    if args.deltas is not None:
        kwargs["deltas"] = args.deltas
    if args.q_list is not None and args.q_max is None:
        kwargs["q_max"] = max(args.q_list)
    return SweepConfig(**kwargs)


def _finish(report: Report, args) -> int:
    write_text(render_report(report, args.format), args.out)
    status = "pass" if report.passed else "FAIL"
    print(
        f"{report.suite}: {status} ({report.summary_key} {report.summary:.3g}, {len(report.records)} records)",
        file=sys.stderr,
    )
    return 0 if report.passed else 1


def _cmd_verify(args) -> int:
    return _finish(run_identity_suite(args.suite, _config(args)), args)


def _cmd_sweep(args) -> int:
    return _finish(run_bound_sweep(args.target, _config(args)), args)


def _cmd_burgess(args) -> int:
    chars = resolve_characters(args.q, args.chi)
    if len(chars) != 1:
        raise UsageError("burgess needs a single character")
    rec = burgess_ratio(chars[0], args.start, args.length, args.r)
    params = {"q": args.q, "chi": chars[0].label, "start": args.start, "length": args.length, "r": args.r}
    report = Report("burgess", "ratio", params, [rec])
    write_text(render_report(report, args.format), args.out)
    return 0


COMMANDS = {
    "flat": _cmd_flat,
    "sum": _cmd_sum,
    "zhang": _cmd_zhang,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "burgess": _cmd_burgess,
}


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        return COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"flatsum: error: {msg}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
