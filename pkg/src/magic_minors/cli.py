"""Command-line front end.

Exit codes: 0 success, 1 a verified identity failed (report still written),
2 configuration error, 3 enumeration budget exceeded, 4 purity or model
error.  Data goes to stdout or ``--out``; diagnostics go to stderr.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys

from . import identities as ids
from .entropy import shannon_limit, shannon_renyi, stabilizer_renyi
from .exceptions import CapacityError, DimensionError, DomainError, FitError, ModelError, SpecError
from .matrix import format_matrix, parse_matrix
from .models import ModelSpec, build_matrix
from .scaling import entropy_series, fit_scaling, series_to_csv

log = logging.getLogger("magic_minors")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_CAPACITY, EXIT_MODEL = 0, 1, 2, 3, 4


class ConfigError(Exception):
    pass


def parse_range(text, cast=int):
    """Parse ``"2,4,6"``, ``"2..5"`` or ``"200..2000:200"`` (mixable with commas)."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            span, _, step = part.partition(":")
            lo, _, hi = span.partition("..")
            try:
                lo, hi, step = cast(lo), cast(hi), cast(step) if step else cast(1)
            except ValueError:
                raise ConfigError(f"bad range {part!r}; expected a..b or a..b:step") from None
            if step <= 0 or hi < lo:
                raise ConfigError(f"bad range {part!r}; need a <= b and a positive step")
            k = 0
            while lo + k * step <= hi + 1e-12:
                out.append(lo + k * step)
                k += 1
        else:
            try:
                out.append(cast(part))
            except ValueError:
                raise ConfigError(f"cannot parse {part!r} as {cast.__name__}") from None
    if not out:
        raise ConfigError(f"empty list {text!r}")
    return out


def _model_args(p):
    p.add_argument("--model", choices=["tfi", "xx", "zn+1", "chiral"], required=False)
    p.add_argument("--bc", choices=["pbc", "obc"], default="pbc")
    p.add_argument("--L", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--matrix", metavar="FILE", help="raw matrix in the text format instead of --model")


def _common(p):
    p.add_argument("--workers", type=int, default=None, help="threads (default: available CPUs)")
    p.add_argument("--out", metavar="FILE", help="write data here instead of stdout")
    p.add_argument("--max-terms", type=float, default=None, help="enumeration budget override")
    p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)


def build_parser():
    parser = argparse.ArgumentParser(prog="magic-minors", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (
        ("sre", "stabilizer Rényi entropy M_alpha of a G-model"),
        ("sr", "Shannon-Rényi entropy H_alpha of an R-model"),
        ("shannon", "alpha -> 1 limit (SRE for G-models, SR for R-models)"),
    ):
        p = sub.add_parser(name, help=helptext)
        _model_args(p)
        if name != "shannon":
            p.add_argument("--alpha", required=True)
        p.add_argument("--kind", choices=["SR", "SRE"], help="shannon: distribution for --matrix input")
        p.add_argument("--format", choices=["text", "json", "csv"], default="text")
        _common(p)

    p = sub.add_parser("verify", help="run identity checks and emit JSON reports")
    p.add_argument("which", choices=["theorem1", "xx-tfi", "blocks", "gf", "table2", "all"])
    p.add_argument("--M", default="2..5", help="theorem1 matrix sizes")
    p.add_argument("--count", type=int, default=20, help="theorem1 random matrices")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", default=None)
    p.add_argument("--bc", choices=["pbc", "obc"], default=None, help="default: both")
    p.add_argument("--L", default=None)
    p.add_argument("--family", choices=["zn+1", "chiral"], default=None, help="default: both")
    p.add_argument("--n", default=None)
    p.add_argument("--m", default=None)
    _common(p)

    p = sub.add_parser("scaling", help="entropy series and conformal fit")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--bc", choices=["pbc", "obc"], default="pbc")
    p.add_argument("--source", choices=["closed", "brute"], default="closed")
    p.add_argument("--L", required=True)
    p.add_argument("--model", choices=["tfi", "zn+1", "chiral"], default="tfi")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--l-min", type=int, default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    _common(p)

    p = sub.add_parser("matrix", help="build or re-emit matrices in the text format")
    p.add_argument("action", choices=["build", "dump"])
    p.add_argument("file", nargs="?", help="dump: matrix file to read")
    _model_args(p)
    _common(p)
    return parser


def _spec(args):
    if args.model is None:
        raise ConfigError("--model is required (or --matrix FILE)")
    if args.L is None:
        raise ConfigError("--L is required")
    return ModelSpec(args.model, args.bc, args.L, n=args.n, m=args.m)


def _load_matrix(path):
    try:
        with open(path) as fh:
            return parse_matrix(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _max_terms(args):
    return None if args.max_terms is None else int(args.max_terms)


def _format_rows(rows, fmt):
    if fmt == "json":
        return json.dumps({"schema_version": 1, "results": rows}, sort_keys=True, indent=2) + "\n"
    keys = ["kind", "model", "alpha", "value", "numerator_log", "normalization_log"]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(keys)
        writer.writerows([r[k] if k in ("kind", "model") else repr(float(r[k])) for k in keys] for r in rows)
        return buf.getvalue()
    return "".join(f"{r['kind']} {r['model']} alpha={r['alpha']:g} value={r['value']!r}\n" for r in rows)


def cmd_entropy(args):
    if args.matrix:
        mat = _load_matrix(args.matrix)
        tag = f"raw[{os.path.basename(args.matrix)}]"
        is_g = (args.kind or ("SR" if args.command == "sr" else "SRE")) == "SRE"
    else:
        spec = _spec(args)
        mat = build_matrix(spec)
        tag = spec.tag
        is_g = spec.is_g_model
    if args.command == "sre" and not is_g:
        raise ConfigError(f"sre takes a G-model (tfi, zn+1, chiral); {args.model} is an R-model, use sr")
    if args.command == "sr" and is_g:
        raise ConfigError(f"sr takes an R-model (xx); {args.model or 'this matrix'} is a G-model, use sre")
    kw = dict(model=tag, workers=args.workers, max_terms=_max_terms(args))
    rows = []
    if args.command == "shannon":
        rows.append(shannon_limit(mat, "SRE" if is_g else "SR", **kw).as_row())
    else:
        for a in parse_range(args.alpha, float):
            if a == 1.0:
                raise ConfigError("alpha = 1 is the Shannon limit; use the 'shannon' command")
            fn = stabilizer_renyi if is_g else shannon_renyi
            rows.append(fn(mat, a, **kw).as_row())
    _emit(_format_rows(rows, args.format), args.out)
    return EXIT_OK


def _valid_zn(n, L_max=24):
    return [L for L in range(2 * n, L_max + 1, 2 * n)]


def _valid_chiral(m, L_max=16):
    return [L for L in range(4 * m, L_max + 1, 4 * m)]


def run_verify(args):
    which = args.which
    workers = args.workers
    alphas = None if args.alpha is None else parse_range(args.alpha, float)
    bcs = [args.bc] if args.bc else ["pbc", "obc"]
    reports = []
    if which in ("theorem1", "all"):
        sizes = parse_range(args.M)
        reports.append(ids.verify_theorem1_random(sizes, alphas or [0.5, 1, 2, 3], args.count, args.seed, workers=workers))
    if which in ("xx-tfi", "all"):
        for bc in bcs:
            for L in parse_range(args.L or "2,4,6"):
                reports.append(ids.verify_xx_tfi(L, bc, alphas or [0.5, 2, 4], workers=workers))
    if which in ("blocks", "all"):
        families = [args.family] if args.family else ["zn+1", "chiral"]
        for fam in families:
            params = parse_range(args.n or "1,2,3") if fam == "zn+1" else parse_range(args.m or "1,2")
            for q in params:
                if args.L:
                    Ls = parse_range(args.L)
                else:
                    Ls = _valid_zn(q) if fam == "zn+1" else _valid_chiral(q)
                reports.append(ids.verify_blocks(fam, Ls, q))
                if fam == "chiral":
                    gl = [L for L in Ls if L // (2 * q) <= 8]
                    if gl:
                        reports.append(ids.verify_chiral_gauge(q, gl, workers=workers))
    if which in ("gf", "all"):
        if args.family or args.n or args.m or args.L or alphas:
            fam = args.family or "zn+1"
            q = int((args.n if fam == "zn+1" else args.m) or 1)
            L = parse_range(args.L or "8")[0]
            for a in alphas or [2]:
                reports.append(ids.verify_gf_products(L, fam, a, q, workers=workers))
        else:
            for fam, q, a in (("zn+1", 2, 2), ("zn+1", 2, 4), ("chiral", 1, 2)):
                reports.append(ids.verify_gf_products(8, fam, a, q, workers=workers))
    if which in ("table2", "all"):
        for bc in bcs:
            default = "1,2,4,6,8" if bc == "pbc" else "2,4,6,8"
            reports.extend(ids.verify_table2(bc, parse_range(args.L or default), workers=workers))
    ok = all(r.passed for r in reports)
    doc = {
        "schema_version": ids.SCHEMA_VERSION,
        "command": f"verify {which}",
        "pass": ok,
        "reports": [r.to_dict() for r in reports],
    }
    for r in reports:
        log.info("%-40s %s  max_err=%.3e", r.identity_name, "PASS" if r.passed else "FAIL", r.max_rel_error)
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_scaling(args):
    if args.alpha == 1.0:
        raise ConfigError("alpha = 1 is excluded from scaling fits")
    Ls = parse_range(args.L)
    series = entropy_series(
        args.alpha, Ls, boundary=args.bc, source=args.source, family=args.model, n=args.n, m=args.m, workers=args.workers
    )
    if args.format == "csv":
        _emit(series_to_csv(series, args.alpha, args.bc, args.source), args.out)
        return EXIT_OK
    fit = fit_scaling(series, args.alpha, args.bc, source=args.source, l_min=args.l_min)
    doc = fit.to_dict()
    log.info("fit: m=%.6g b=%.6g c=%.6g (predicted b=%s c=%s)", *fit.fitted, *fit.predicted)
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_matrix(args):
    if args.action == "build":
        mat = build_matrix(_spec(args))
    else:
        path = args.file or args.matrix
        if not path:
            raise ConfigError("matrix dump needs a file")
        mat = _load_matrix(path)
    _emit(format_matrix(mat), args.out)
    return EXIT_OK


COMMANDS = {
    "sre": cmd_entropy,
    "sr": cmd_entropy,
    "shannon": cmd_entropy,
    "verify": run_verify,
    "scaling": cmd_scaling,
    "matrix": cmd_matrix,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, SpecError, DomainError, DimensionError, FitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ModelError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
