"""Command-line front end.

Every subcommand prints one JSON document (or CSV for per-trial output).
Rationals print as "num/den" strings and floats as 17-significant-digit
strings, so identical argv gives byte-identical output.

Exit codes: 0 success, 1 invalid input, 2 a requested check found violations.
"""

from __future__ import annotations

import argparse
import functools
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import bounds, config_model, girth_chrom, oracle, perm_latin
from .matching import BIPARTITE, COMPLETE, GENERAL, MatchingError, MatchingSpace, read_family

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _plain(obj):
    """Convert report values into JSON-ready data with fixed formatting."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    if hasattr(obj, "to_json"):
        return _plain(obj.to_json())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _emit(out, payload) -> None:
    out.write(json.dumps(_plain(payload), indent=2) + "\n")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _add_space_args(p) -> None:
    p.add_argument("--space", choices=[COMPLETE, BIPARTITE])
    p.add_argument("--n", type=_positive)
    p.add_argument("--m", type=_positive)
    p.add_argument("--family", required=True, help="family file (JSON lines)")


def _load_family(args):
    space = None
    if args.space is not None:
        if args.n is None:
            raise UsageError("--space needs --n")
        space = (
            MatchingSpace.complete(args.n)
            if args.space == COMPLETE
            else MatchingSpace.bipartite(args.n, args.m)
        )
    with open(args.family, encoding="utf-8") as fh:
        return read_family(fh, space)


def _family_summary(fam) -> dict:
    out = {"space": fam.space.to_header(), "members": len(fam)}
    if fam.members and fam.space.kind != GENERAL:
        st = fam.stats
        out.update(
            r=st.r,
            sizes=list(st.sizes),
            d={str(i): st.d[i] for i in st.sizes},
            mu=st.mu,
            regular=st.regular,
        )
    return out


# -- subcommands ------------------------------------------------------------


def cmd_bounds(args, out) -> int:
    fam = _load_family(args)
    if fam.space.kind == GENERAL:
        raise UsageError("bounds need a complete or bipartite space")
    delta = bounds.AUTO if args.delta == "auto" else Fraction(args.delta)
    payload = {
        "family": _family_summary(fam),
        "lower": bounds.l5_lower_bound(fam),
        "sparseness": bounds.delta_sparseness(fam, delta),
        "upper": bounds.upper_bound(fam, delta),
    }
    if args.epsilon is not None:
        payload["simple"] = bounds.simple_lower_bound(fam, Fraction(args.epsilon))
    if fam.members and fam.stats.regular:
        payload["asymptotic"] = bounds.asymptotic_bracket(fam)
    if args.exact:
        payload["exact"] = oracle.avoid_probability_exact(fam, args.oracle_cap)
    _emit(out, payload)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    fam = _load_family(args)
    if args.check == "negative":
        rep = oracle.check_negative_dependency(fam, args.max_subset, args.oracle_cap)
        payload = {"family": _family_summary(fam), "report": rep}
    else:
        eps = (
            bounds.near_positive_epsilon(fam)
            if args.epsilon in (None, "auto")
            else Fraction(args.epsilon)
        )
        rep = oracle.check_near_positive(fam, eps, args.max_subset, args.oracle_cap)
        payload = {"family": _family_summary(fam), "epsilon": eps, "report": rep}
    _emit(out, payload)
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_permutations(args, out) -> int:
    count = perm_latin.k_cycle_free_count(args.n, args.k)
    payload = {
        "n": args.n,
        "k": args.k,
        "count": count,
        "probability": Fraction(count, math.factorial(args.n)),
        "limit": math.exp(-1 / args.k),
        "brute_force_checked": args.n <= perm_latin.BRUTE_MAX_N,
    }
    if args.bounds:
        fam = perm_latin.k_cycle_event_family(args.n, args.k)
        payload["lower"] = bounds.l5_lower_bound(fam)
        payload["upper"] = bounds.upper_bound(fam)
    _emit(out, payload)
    return EXIT_OK


def cmd_latin(args, out) -> int:
    b = perm_latin.latin_bounds(args.k, args.n)
    payload: dict = {"k": args.k, "n": args.n}
    if args.exact:
        payload["exact"] = perm_latin.latin_count_exact(args.k, args.n)
    payload.update(
        lower=b.lower_lat2,
        log_lower=b.log_lower,
        upper=b.upper_felso3,
        log_upper=b.log_upper,
        upper_applicable=b.felso3_applicable,
        log_stein=b.log_stein,
    )
    _emit(out, payload)
    return EXIT_OK


def cmd_regular(args, out) -> int:
    dseq = config_model.DegreeSequence.regular(args.n, args.d)
    if args.exact:
        prob = config_model.exact_girth_probability(dseq, args.g, args.threads)
        _emit(out, {"n": args.n, "d": args.d, "g": args.g, "exact": prob})
        return EXIT_OK
    res = config_model.mc_girth_at_least(dseq, args.g, args.trials, args.seed, args.threads)
    if args.format == "csv":
        out.write("trial,girth\n")
        for t, g in enumerate(res.girths.tolist()):
            out.write(f"{t},{'inf' if g == 0 else g}\n")
        return EXIT_OK
    payload = dict(res.to_json())
    payload["n"], payload["d"], payload["g"] = args.n, args.d, args.g
    if args.d >= 3 and args.g >= 3:
        payload["prediction"] = config_model.girth_prediction(args.d, args.g)
        payload["condition_ratio"] = config_model.condition_ratio(args.n, args.d, args.g)
    _emit(out, payload)
    return EXIT_OK


def _read_degrees(path: str) -> tuple[int, ...]:
    with open(path, encoding="utf-8") as fh:
        return tuple(int(tok) for tok in fh.read().replace(",", " ").split())


def cmd_girthchrom(args, out) -> int:
    if (args.regular is None) == (args.degrees is None):
        raise UsageError("give exactly one of --regular d,n and --degrees FILE")
    if args.regular is not None:
        try:
            d, n = (int(x) for x in args.regular.split(","))
        except ValueError as exc:
            raise UsageError("--regular expects d,n") from exc
        dseq = config_model.DegreeSequence.regular(n, d)
    else:
        dseq = config_model.DegreeSequence(_read_degrees(args.degrees))
    cert = girth_chrom.existence_certificate(dseq, args.k, args.ell, margin=args.margin)
    payload = {"certificate": cert}
    if args.spot_check:
        payload["spot_check"] = girth_chrom.spot_check(
            dseq, args.k, args.ell, args.spot_check, args.seed
        )
    _emit(out, payload)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lllmatch", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=_seed, default=0)
    parser.add_argument("--threads", type=_positive, default=1)
    # also accepted after the subcommand; SUPPRESS keeps the top-level value otherwise
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=_seed, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=_positive, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    add = functools.partial(sub.add_parser, parents=[common])

    p = add("bounds", help="lower/upper bounds for a family file")
    _add_space_args(p)
    p.add_argument("--epsilon", help="also evaluate the simple bound at this epsilon")
    p.add_argument("--delta", default="auto")
    p.add_argument("--exact", action="store_true", help="add the exact avoid probability")
    p.add_argument("--oracle-cap", type=_positive)
    p.set_defaults(func=cmd_bounds)

    p = add("verify", help="exhaustive dependency check of a family file")
    _add_space_args(p)
    p.add_argument("--check", choices=["negative", "near_positive"], default="negative")
    p.add_argument("--epsilon", help="near-positive epsilon, or 'auto'")
    p.add_argument("--max-subset", type=_positive, default=oracle.DEFAULT_MAX_SUBSET)
    p.add_argument("--oracle-cap", type=_positive)
    p.set_defaults(func=cmd_verify)

    p = add("permutations", help="k-cycle-free permutation counts")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--bounds", action="store_true")
    p.set_defaults(func=cmd_permutations)

    p = add("latin", help="Latin rectangle counts and bounds")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--bounds", action="store_true", help="accepted for symmetry; always on")
    p.set_defaults(func=cmd_latin)

    p = add("regular", help="girth of configuration-model regular graphs")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--d", type=_positive, required=True)
    p.add_argument("--g", type=_positive, required=True)
    p.add_argument("--trials", type=_positive, default=10000)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--exact", action="store_true", help="exact enumeration (N <= 16)")
    p.set_defaults(func=cmd_regular)

    p = add("girthchrom", help="high-girth / high-chromatic existence certificate")
    p.add_argument("--regular", help="d,n")
    p.add_argument("--degrees", help="file of whitespace or comma separated degrees")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--ell", type=_positive, required=True)
    p.add_argument("--margin", type=float, default=0.1)
    p.add_argument("--spot-check", type=_positive, metavar="TRIALS")
    p.set_defaults(func=cmd_girthchrom)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"{parser.prog}: error: {exc}\n")
        return EXIT_INPUT
    except (MatchingError, ValueError, OSError, ZeroDivisionError) as exc:
        err.write(f"{parser.prog}: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
