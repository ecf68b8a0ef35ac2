"""Hecke eigenvalues, twisted L-values and moment sweeps from the command line.

    heckelab [--config FILE] [--threads T] [--format csv|json] [--out PATH]
             [--eigenform-n N] [--sieve-limit L] [--cache-dir DIR] COMMAND ...

Exit status: 0 on success, 1 when a precondition is rejected (message on
stderr), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import arith, lfunc, moments
from .dirichlet import CharacterGroup, gauss_sum, quadratic_character
from .eigenform import DEFAULT_N, build_table, default_cache_dir, shared_table

log = logging.getLogger("heckelab")


@dataclass
class RunConfig:
    sieve_limit: int = arith.DEFAULT_SIEVE_LIMIT
    eigenform_N: int = DEFAULT_N
    cache_dir: str | None = None
    thread_count: int = 1
    output_format: str = "csv"

    def validate(self):
        for name in ("sieve_limit", "eigenform_N", "thread_count"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"output_format must be csv or json, got {self.output_format!r}")

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        """key=value lines; blank lines and '#' comments ignored."""
        cfg = cls()
        types = {f.name: f.type for f in fields(cls)}
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in types:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            setattr(cfg, key, int(value) if key in ("sieve_limit", "eigenform_N", "thread_count") else value)
        return cfg


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (np.integer,)):
        return str(int(v))
    if isinstance(v, (np.floating,)):
        return repr(float(v))
    return "" if v is None else str(v)


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if v == "":
        return None
    return v


def render(header: list[str], rows: list[list], output_format: str = "csv") -> str:
    """Table as CSV (shortest round-trip floats) or a JSON list of objects."""
    if output_format == "json":
        return json.dumps([{h: _jsonable(v) for h, v in zip(header, row)} for row in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def emit(header: list[str], rows: list[list], cfg: RunConfig, out: str | None):
    text = render(header, rows, cfg.output_format)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands ------------------------------------------------------------------


def _table(cfg: RunConfig, need: int):
    return shared_table(max(cfg.eigenform_N, need), cache_dir=cfg.cache_dir)


def cmd_eigenvalues(args, cfg):
    table = build_table(args.n, cache_dir=cfg.cache_dir or default_cache_dir(), max_n=max(args.n, cfg.eigenform_N))
    rows = [[n, table.tau[n], float(table.lam[n])] for n in range(1, args.n + 1)]
    return ["n", "tau", "lambda"], rows


def cmd_characters(args, cfg):
    group = CharacterGroup(args.q)
    rows = []
    for chi in group.characters():
        if args.primitive_only and not chi.is_primitive:
            continue
        gauss = abs(gauss_sum(chi)) if chi.is_primitive else None
        rows.append(
            [chi.label, args.q, chi.order, chi.conductor, chi.is_primitive, chi.parity, chi.is_quadratic, gauss]
        )
    return ["label", "q", "order", "conductor", "primitive", "parity", "quadratic", "gauss_abs"], rows


def _family(q: int):
    if q == 1:
        return [None]
    return CharacterGroup(q).primitive_characters()


def cmd_lvalues(args, cfg):
    s = complex(args.sigma, args.t)
    need = args.cutoff or 0
    if args.method == "afe":
        need = lfunc._afe_terms_needed(args.q, 1.0, max(abs(s + 5.5), abs(1 - s + 5.5)))
    table = _table(cfg, math.ceil(need))
    rows = []
    for chi in _family(args.q):
        v = lfunc.l_twisted(s, chi, table, cutoff=args.cutoff, method=args.method)
        label = "1:" if chi is None else chi.label
        rows.append([label, s.real, s.imag, v.value.real, v.value.imag, abs(v.value), v.error, v.method, v.converged])
    return ["label", "sigma", "t", "re", "im", "abs", "error", "method", "converged"], rows


def cmd_majorant(args, cfg):
    if args.q < 3:
        raise ValueError(f"majorant needs a modulus >= 3, got {args.q}")
    rows = []
    if args.variant == "quadratic":
        modulus = args.q
        chars = [quadratic_character(int(d)) for d in arith.odd_squarefree(args.q)]
    else:
        modulus = None
        chars = _family(args.q)
        if args.variant == "nonquadratic":
            chars = [c for c in chars if not c.is_quadratic]
    x = args.x if args.x is not None else args.q
    afe_need = max(lfunc._afe_terms_needed(c.modulus, 1.0, 6.0 + abs(args.t)) for c in chars) if chars else 0
    table = _table(cfg, max(math.ceil(x), afe_need if args.with_lvalues else 0))
    for chi in chars:
        mv = lfunc.log_l_majorant(chi, args.t, x, table, args.variant, A=args.A, modulus=modulus)
        logl = None
        if args.with_lvalues:
            val = abs(lfunc.l_twisted(complex(0.5, args.t), chi, table, method="afe").value)
            logl = math.log(val) if val > 0 else -math.inf
        rows.append([chi.label, x, args.t, mv.total, mv.prime_sum, mv.square_sum, mv.log_term, logl])
    return ["label", "x", "t", "majorant", "prime_sum", "square_sum", "log_term", "log_abs_L"], rows


def _kernel(args, modulus):
    if args.U is not None:
        return moments.make_kernel(args.U)
    return moments.default_kernel(modulus) if args.smooth else None


def _report_rows(reports):
    return list(moments.CSV_COLUMNS), [r.csv_row() for r in reports]


def cmd_moments_fixed(args, cfg):
    y = args.y if args.y is not None else args.q
    table = _table(cfg, y)
    reps = moments.moments_fixed_mod(
        args.q, y, args.m, table, _kernel(args, args.q), primitive=not args.all_characters, threads=cfg.thread_count
    )
    return _report_rows(reps)


def cmd_moments_quad(args, cfg):
    y = args.y if args.y is not None else args.X
    table = _table(cfg, y)
    reps = moments.moments_quadratic(
        args.X, y, args.m, table, _kernel(args, args.X), k=args.k, eps=args.eps, threads=cfg.thread_count
    )
    return _report_rows(reps)


def cmd_verify_prsum(args, cfg):
    kernel = moments.make_kernel(args.U)
    rows = []
    for n in args.n:
        r = moments.verify_lemma_prsum(args.x, n, args.k, kernel)
        rows.append([r.X, r.n, r.k, r.lhs, r.main_term, r.error, r.product_tail])
    return ["X", "n", "k", "lhs", "main_term", "error", "product_tail"], rows


def cmd_verify_cancel(args, cfg):
    group = CharacterGroup(args.q)
    if args.chi is not None:
        chi = group.character(int(c) for c in args.chi.split(":")[-1].split("."))
    else:
        chi = next((c for c in group.characters() if c.is_quadratic and not c.is_principal), None)
        if chi is None:
            raise ValueError(f"no non-principal quadratic character mod {args.q}")
    table = _table(cfg, math.ceil(args.x)) if args.variant == "sym_square" else None
    rows = []
    for x in args.x_grid or [args.x]:
        r = moments.verify_prime_cancellation(args.q, chi, args.t0, x, table, args.variant)
        rows.append([chi.label, x, args.t0, args.variant, r.sum.real, r.sum.imag, abs(r.sum), r.envelope_sqrt_x, r.ratio])
    return ["label", "x", "t0", "variant", "re", "im", "abs", "envelope", "ratio"], rows


def _reports_from_csv(path, k, eps):
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != moments.CSV_COLUMNS:
            raise ValueError(f"{path}: not a moments report (columns {reader.fieldnames})")
        for row in reader:
            m = float(row["m"])
            family = row["family"]
            exponent = (m - 1) ** 2 if family == "fixed_mod" else moments.E_exponent(m, k, eps)
            out.append(
                moments.MomentReport(
                    family=family,
                    modulus=int(row["q_or_X"]),
                    Y=int(row["Y"]),
                    m=m,
                    U=float(row["U"]) if row["U"] else None,
                    count=int(row["count"]),
                    measured=float(row["measured"]),
                    envelope=float(row["envelope"]),
                    ratio=float(row["ratio"]),
                    exponent=exponent,
                    k=k,
                    eps=eps,
                )
            )
    return out


def cmd_fit(args, cfg):
    reports = []
    for path in args.inputs:
        reports += _reports_from_csv(path, args.k, args.eps)
    rows = []
    for m in sorted({r.m for r in reports}):
        for family in sorted({r.family for r in reports}):
            group = [r for r in reports if r.m == m and r.family == family]
            if not group:
                continue
            fit = moments.fit_exponent(group)
            rows.append([family, m, fit.slope, fit.intercept, fit.r2, fit.points])
    return ["family", "m", "slope", "intercept", "r2", "points"], rows


# -- parser ------------------------------------------------------------------------


def _floats(text):
    return [float(v) for v in text.split(",")]


def _ints(text):
    return [int(v) for v in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file (flags override it)")
    common.add_argument("--threads", type=int, dest="thread_count")
    common.add_argument("--format", choices=("csv", "json"), dest="output_format")
    common.add_argument("--out", help="write to this file instead of stdout")
    common.add_argument("--eigenform-n", type=int, dest="eigenform_N")
    common.add_argument("--sieve-limit", type=int, dest="sieve_limit")
    common.add_argument("--cache-dir", dest="cache_dir")
    common.add_argument("-v", "--verbose", action="store_true")
    # global flags are accepted before or after the subcommand
    for action in common._actions:
        action.default = argparse.SUPPRESS
    p = argparse.ArgumentParser(prog="heckelab", description=__doc__.split("\n\n")[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eigenvalues", help="tau(n) and lambda_f(n)", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_eigenvalues)

    s = sub.add_parser("characters", help="characters mod q with conductor and Gauss sum size", parents=[common])
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--primitive-only", action="store_true")
    s.set_defaults(func=cmd_characters)

    s = sub.add_parser("lvalues", help="L(s, f x chi) over primitive chi mod q", parents=[common])
    s.add_argument("--q", type=int, required=True, help="1 for the untwisted L-function")
    s.add_argument("--t", type=float, default=0.0)
    s.add_argument("--sigma", type=float, default=0.5)
    s.add_argument("--method", choices=("afe", "smoothed"), default="afe")
    s.add_argument("--cutoff", type=float)
    s.set_defaults(func=cmd_lvalues)

    s = sub.add_parser("majorant", help="constant-free majorant of log|L(1/2+it)|", parents=[common])
    s.add_argument("--q", type=int, required=True, help="modulus (X for the quadratic variant)")
    s.add_argument("--t", type=float, default=0.0)
    s.add_argument("--x", type=float)
    s.add_argument("--A", type=float, default=1.0)
    s.add_argument("--variant", choices=lfunc.MAJORANT_VARIANTS, default="general")
    s.add_argument("--with-lvalues", action="store_true")
    s.set_defaults(func=cmd_majorant)

    for name, func, mod, what in (
        ("moments-fixed", cmd_moments_fixed, "q", "primitive characters mod q"),
        ("moments-quad", cmd_moments_quad, "X", "quadratic characters (8d|.), odd square-free d <= X"),
    ):
        s = sub.add_parser(name, help=f"moment sums over {what}, with envelope ratios", parents=[common])
        s.add_argument(f"--{mod}", type=int, required=True, dest=mod)
        s.add_argument("--y", type=int)
        s.add_argument("--m", type=_floats, default=[1.0], help="comma-separated")
        s.add_argument("--U", type=float)
        s.add_argument("--smooth", action="store_true", help="default kernel U = modulus^0.2 in [4, 100]")
        if mod == "q":
            s.add_argument("--all-characters", action="store_true", help="diagnostic: every character mod q")
        else:
            s.add_argument("--k", type=int, default=1)
            s.add_argument("--eps", type=float, default=0.0)
        s.set_defaults(func=func)

    s = sub.add_parser("verify-prsum", help="smoothed quadratic character sum vs main term", parents=[common])
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--n", type=_ints, required=True, help="comma-separated")
    s.add_argument("--k", type=float, default=0.0)
    s.add_argument("--U", type=float, default=4.0)
    s.set_defaults(func=cmd_verify_prsum)

    s = sub.add_parser("verify-cancel", help="prime sums against sqrt(x) log^2", parents=[common])
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--chi", help="label q:c1.c2 (default: a quadratic character)")
    s.add_argument("--t0", type=float, default=0.0)
    s.add_argument("--x", type=float, default=1e5)
    s.add_argument("--x-grid", type=_floats)
    s.add_argument("--variant", choices=("plain", "sym_square"), default="plain")
    s.set_defaults(func=cmd_verify_cancel)

    s = sub.add_parser("fit", help="log-log exponent fit of moments CSV files", parents=[common])
    s.add_argument("inputs", nargs="+")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--eps", type=float, default=0.0)
    s.set_defaults(func=cmd_fit)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on usage errors
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = getattr(args, "config", None)
        cfg = RunConfig.from_file(config) if config else RunConfig()
        for name in ("sieve_limit", "eigenform_N", "cache_dir", "thread_count", "output_format"):
            if getattr(args, name, None) is not None:
                setattr(cfg, name, getattr(args, name))
        cfg.validate()
        arith.set_sieve_limit(cfg.sieve_limit)
        header, rows = args.func(args, cfg)
        emit(header, rows, cfg, getattr(args, "out", None))
    except (ValueError, OverflowError, OSError) as exc:
        print(f"heckelab: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())
