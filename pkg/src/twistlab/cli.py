"""Command-line front end: ``twistlab <subcommand> ...``.

Exit status is 0 when everything passed, 1 when a verification check failed
or an internal inconsistency surfaced, and 2 for usage and I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import __version__
from .arith import is_prime, is_squarefree, primes_in
from .cache import TableCache
from .errors import (
    BadPrime,
    CacheCorrupted,
    DomainError,
    Inapplicable,
    InconsistencyError,
    TwistlabError,
    UsageError,
)

log = logging.getLogger("twistlab")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    d: int | None = None
    p: int | None = None
    dmax: int | None = None
    pmax: int | None = None
    X: tuple[float, ...] = ()
    sigma: float | None = None
    cache_dir: str | None = None
    out: str | None = None
    fmt: str = "json"

    def validate(self) -> None:
        if self.p is not None and (self.p < 5 or not is_prime(self.p)):
            raise UsageError(f"--p must be a prime >= 5, got {self.p}")
        if self.dmax is not None and self.dmax < 1:
            raise UsageError("--dmax must be positive")
        if self.pmax is not None and self.pmax < 5:
            raise UsageError("--pmax must be at least 5")
        for x in self.X:
            if not x >= 10:
                raise UsageError(f"--xmax must be at least 10, got {x}")
        if self.sigma is not None and not self.sigma > 0:
            raise UsageError(f"--sigma must be positive, got {self.sigma}")


def _ff(x) -> str:
    from .density import format_float

    return format_float(x)


def _emit_csv(header: Sequence[str], rows: Iterable[Sequence], stream=None) -> None:
    stream = stream or sys.stdout
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(_cell(v) for v in row) + "\n")


def _cell(v) -> str:
    if isinstance(v, bool):
        return "pass" if v else "FAIL"
    if isinstance(v, float):
        return _ff(v)
    return str(v)


def _map(fn: Callable, items: list, workers: int) -> list:
    """Ordered map; results come back in input order whatever the worker count."""
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _family_ds(dmax: int) -> list[int]:
    return [d for d in range(1, dmax + 1) if d != 3 and is_squarefree(d)]


# euler


def _ap_E0_cached(cache: TableCache | None, p: int) -> int:
    from .frobdata import ap_E0

    if cache is None:
        return ap_E0(p)
    table = cache.load_ap("E0")
    if p not in table:
        table[p] = ap_E0(p)
        cache.store_ap("E0", table)
    elif table[p] != ap_E0(p):
        raise InconsistencyError(f"cached a_{p}(E0)={table[p]} disagrees with a fresh count")
    return table[p]


def _kernel(d: int, which: str):
    from .frobdata import infer_twist_kernel, rule_kernel

    return infer_twist_kernel(d) if which == "infer" else rule_kernel(d)


def cmd_euler(args) -> int:
    from .frobdata import euler_factor_good

    cfg = RunConfig("euler", d=args.d, p=args.p, cache_dir=args.cache_dir)
    cfg.validate()
    cache = TableCache(args.cache_dir) if args.cache_dir else None
    e = euler_factor_good(args.d, args.p, _kernel(args.d, args.kernel), oracle=args.oracle)
    a = _ap_E0_cached(cache, args.p)
    p = args.p
    record = {
        "d": args.d,
        "p": p,
        "I": list(e.profile.astuple()),
        "ap_E0": a,
        "a1": e.a1,
        "a2": e.a2,
        "lambda_p": -e.a1 / p**0.5,
        "lambda_p2": e.a_p2 / p,
        "source": e.source.value,
    }
    sys.stdout.write(_json(record))
    return EXIT_OK


def _json(record: dict) -> str:
    parts = []
    for k, v in record.items():
        val = _ff(v) if isinstance(v, float) else json.dumps(v)
        parts.append(f"  {json.dumps(k)}: {val}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


# verify


def _table_rows(p: int) -> list[tuple]:
    from .stats import TABLE2_FROZEN_BOUND, table1, table2

    rows = [("table1", p, r.label, r.measured, str(r.predicted), str(r.deviation), r.deviation == 0)
            for r in table1(p)]
    if p <= 199:
        rows += [("table2", p, r.label, r.measured, str(r.predicted), str(r.deviation),
                  abs(r.deviation) <= TABLE2_FROZEN_BOUND) for r in table2(p)]
    return rows


def _euler_rows(job: tuple[int, int, str]) -> list[tuple]:
    from .ffcount import genus2_a1a2
    from .frobdata import _int_model, euler_factor_good

    d, pmax, which = job
    kernel = _kernel(d, which)
    cache_rows = []
    for p in primes_in(5, pmax):
        if (d * (d + 3)) % p == 0:
            continue
        fast = euler_factor_good(d, p, kernel)
        o1, o2 = genus2_a1a2(list(_int_model(d)), p)
        ok = (fast.a1, fast.a2) == (o1, o2)
        if p % 3 == 2:
            ok = ok and o1 == 0
        if fast.profile.astuple() == (6, 6, 2):
            ok = ok and fast.zeta_numerator() == (1, 0, -p, 0, p * p)
        cache_rows.append((d, p, str(fast.profile), fast.a1, fast.a2, o1, o2, ok))
    return cache_rows


def _conductor_rows(d: int) -> list[tuple]:
    from sympy import factorint

    from .conductor import build_family_picture, exponent_at_prime, tame_exponent

    rows = []
    for p in sorted(set(factorint(d)) | set(factorint(d + 3))):
        if p < 5:
            continue
        e = exponent_at_prime(d, p)
        t = tame_exponent(*build_family_picture(d, p)).n_tame
        rows.append((d, p, e, t, e == t))
    return rows


def _identity_rows(seed: int) -> list[tuple]:
    from .family import (
        build_gd,
        family_constants,
        typeB_identity,
        verify_disc_fd,
        verify_H36,
        verify_quadratic_factorization,
        verify_two_cubic_factorization,
    )

    rows = []
    for d in range(-200, 201):
        if d in (0, 3, -3):
            continue
        rows.append(("disc", f"d={d}", verify_disc_fd(d)))
        rows.append(("uvsz", f"d={d}", family_constants(d).relation_holds()))
    for d in _family_ds(100):
        rows.append(("gd_irreducible", f"d={d}", not build_gd(d).rational_roots()))
    for d in range(1, 101):
        rows.append(("typeB_rewrite", f"d={d}", typeB_identity(d)))
    rows.append(("H36", "roots", verify_H36()))
    rows += _typeB_count_rows()
    rng = random.Random(seed)
    for name, fn in (("quad_factor", verify_quadratic_factorization),
                     ("cubic_factor", verify_two_cubic_factorization)):
        done = 0
        while done < 100:
            d = rng.choice([x for x in range(-60, 61) if x not in (0, 3, -3)])
            p = rng.choice(primes_in(5, 400))
            try:
                ok = fn(d, p)
            except (Inapplicable, UsageError):
                continue
            rows.append((name, f"d={d};p={p}", ok))
            done += 1
    return rows


def _typeB_count_rows() -> list[tuple]:
    from .family import build_Ed4, build_Ed5, build_typeB, disc
    from .ffcount import count_points, trace_ap

    rows = []
    for d in range(1, 31):
        if not is_squarefree(d):
            continue
        F = build_typeB(d)
        D = disc(F) * disc(build_Ed4(d)) * disc(build_Ed5(d))
        for p in primes_in(5, 199):
            if D.numerator % p == 0:
                continue
            lhs = count_points(F, p, 1).count
            rhs = p + 1 - trace_ap(build_Ed4(d), p) - trace_ap(build_Ed5(d), p)
            rows.append(("typeB_count", f"d={d};p={p}", lhs == rhs))
    return rows


def cmd_verify(args) -> int:
    cfg = RunConfig("verify", dmax=args.dmax, pmax=args.pmax)
    cfg.validate()
    workers = args.workers
    suite = args.suite
    if suite == "tables":
        pmax = args.pmax or 499
        header = ("table", "p", "class", "measured", "predicted", "deviation", "status")
        rows = _flatten(_map(_table_rows, primes_in(5, pmax), workers))
    elif suite == "euler":
        dmax, pmax = args.dmax or 50, args.pmax or 199
        header = ("d", "p", "I", "fast_a1", "fast_a2", "oracle_a1", "oracle_a2", "status")
        jobs = [(d, pmax, args.kernel) for d in _family_ds(dmax)]
        rows = _flatten(_map(_euler_rows, jobs, workers))
        if args.cache_dir:
            _store_euler(TableCache(args.cache_dir), rows)
    elif suite == "conductor":
        dmax = args.dmax or 10_000
        header = ("d", "p", "exponent", "n_tame", "status")
        rows = _flatten(_map(_conductor_rows, _family_ds(dmax), workers))
    else:
        header = ("check", "case", "status")
        rows = _identity_rows(args.seed)
    _emit_csv(header, rows)
    failed = sum(1 for r in rows if r[-1] is not True)
    print(f"# {suite}: {len(rows) - failed}/{len(rows)} checks passed", file=sys.stderr)
    return EXIT_OK if failed == 0 else EXIT_FAIL


def _flatten(chunks: list[list]) -> list:
    return [row for chunk in chunks for row in chunk]


def _store_euler(cache: TableCache, rows: list[tuple]) -> None:
    cache.check_writable()
    per_d: dict[int, dict[int, tuple[int, int]]] = {}
    for d, p, _, _, _, o1, o2, _ in rows:
        per_d.setdefault(d, {})[p] = (o1, o2)
    for d, table in per_d.items():
        old = cache.load_euler(d)
        for p, val in table.items():
            if p in old and old[p] != val:
                raise InconsistencyError(f"cached Euler data for d={d}, p={p} disagrees")
        old.update(table)
        cache.store_euler(d, old)


# conductor


def cmd_conductor(args) -> int:
    from .conductor import conductor_known_part, log_conductor_bracket
    from .family import conductor_bound_statement, conductor_bound_used

    d = args.d
    known = conductor_known_part(d)
    low, high = log_conductor_bracket(d)
    record = {
        "d": d,
        "known_part": known.value,
        "factors": {str(p): e for p, e in sorted(known.factors.items())},
        "log_low": low,
        "log_high": high,
        "bound_statement": conductor_bound_statement(d),
        "bound_used": conductor_bound_used(d),
    }
    sys.stdout.write(_json(record))
    return EXIT_OK


# density and rank bound


def _reports(xs: Sequence[float], sigma: float, kernel: str):
    from .density import rank_bound

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        reps = [rank_bound(x, sigma, kernel=kernel) for x in xs]
    for r in reps:
        for f in r.flags:
            log.warning("X=%s: %s", _ff(r.X), f)
    return reps


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        with open(tmp, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def cmd_density(args) -> int:
    from .density import CSV_SERIES_HEADER

    cfg = RunConfig("density", X=tuple(args.xmax), sigma=args.sigma, out=args.out)
    cfg.validate()
    reps = _reports(args.xmax, args.sigma, args.kernel)
    body = reps[0].to_json() if len(reps) == 1 else (
        "[\n" + ",\n".join(r.to_json().rstrip("\n") for r in reps) + "\n]\n"
    )
    series = CSV_SERIES_HEADER + "\n" + "".join(r.csv_row() + "\n" for r in reps)
    if args.out:
        out = Path(args.out)
        csv_path = Path(args.csv) if args.csv else out.with_suffix(".csv")
        _write(out, body)
        _write(csv_path, series)
    else:
        sys.stdout.write(series if args.format == "csv" else body)
    return EXIT_OK


def cmd_rankbound(args) -> int:
    from .density import asymptotic_bound

    cfg = RunConfig("rankbound", X=tuple(args.xmax), sigma=args.sigma)
    cfg.validate()
    reps = _reports(args.xmax, args.sigma, args.kernel)
    header = ("X", "sigma", "bound_low", "bound_high", "skipped_budget", "asymptotic_bound")
    rows = [(r.X, r.sigma, r.bound_low, r.bound_high, r.skipped_budget,
             asymptotic_bound(r.sigma)) for r in reps]
    _emit_csv(header, rows)
    bad = [r for r in reps if not r.bound_low <= r.bound_high]
    if bad:
        log.error("bound_low > bound_high at X=%s", ", ".join(_ff(r.X) for r in bad))
        return EXIT_FAIL
    return EXIT_OK


# sieve


def cmd_sieve(args) -> int:
    from .stats import sieve_check

    cfg = RunConfig("sieve", X=(args.xmax,))
    cfg.validate()
    try:
        A = [int(a) for a in args.A.split(",") if a.strip()]
    except ValueError:
        raise UsageError(f"--A must be a comma-separated list of integers, got {args.A!r}")
    header = ("p", "A", "X", "size", "measured", "predicted_minus", "predicted_plus",
              "deviation_minus", "deviation_plus", "better", "constant")
    rows = []
    for p in args.p:
        if p < 5 or not is_prime(p):
            raise UsageError(f"--p must be a prime >= 5, got {p}")
        s = sieve_check(p, A, args.xmax)
        rows.append((p, " ".join(map(str, s.A)), float(s.X), s.size, s.measured,
                     s.predicted_minus, s.predicted_plus, s.deviation_minus,
                     s.deviation_plus, s.better, s.constant))
    _emit_csv(header, rows)
    return EXIT_OK


# parser


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", help="cache directory (default: $TWISTLAB_CACHE "
                        "or ./.twistlab-cache)")
    common.add_argument("--kernel", choices=("infer", "rule"), default=None,
                        help="twist kernel: inferred per d, or sf(-2(d+3))")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="twistlab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    e = sub.add_parser("euler", parents=[common], help="Euler data at one good prime")
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--p", type=int, required=True)
    e.add_argument("--oracle", action="store_true", help="force brute-force counting")
    e.set_defaults(func=cmd_euler, kernel_default="infer")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=("tables", "euler", "conductor", "identities"))
    v.add_argument("--dmax", type=int)
    v.add_argument("--pmax", type=int)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--seed", type=int, default=0, help="seed for random spot checks")
    v.set_defaults(func=cmd_verify, kernel_default="infer")

    c = sub.add_parser("conductor", parents=[common], help="known conductor part of C_d")
    c.add_argument("--d", type=int, required=True)
    c.set_defaults(func=cmd_conductor, kernel_default="rule")

    for name, func, helptext in (("density", cmd_density, "S1, S2 and the rank-bound report"),
                                 ("rankbound", cmd_rankbound, "rank-bound brackets")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--xmax", type=_float, nargs="+", required=True)
        s.add_argument("--sigma", type=_float, required=True)
        if name == "density":
            s.add_argument("--out", help="JSON report path; the CSV series goes next to it")
            s.add_argument("--csv", help="CSV series path (default: --out with .csv)")
            s.add_argument("--format", choices=("json", "csv"), default="json",
                           help="stdout format when --out is not given")
        s.set_defaults(func=func, kernel_default="rule")

    sv = sub.add_parser("sieve", parents=[common], help="square-free counts in residue classes")
    sv.add_argument("--p", type=int, nargs="+", required=True)
    sv.add_argument("--A", default="1", help="comma-separated residues (default: 1)")
    sv.add_argument("--xmax", type=_float, default=1e6)
    sv.set_defaults(func=cmd_sieve, kernel_default="rule")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.kernel is None:
        args.kernel = args.kernel_default
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except CacheCorrupted as exc:
        print(f"twistlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, DomainError, BadPrime) as exc:
        print(f"twistlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"twistlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TwistlabError as exc:
        print(f"twistlab: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
