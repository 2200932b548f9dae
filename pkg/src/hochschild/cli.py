"""Command-line entry point: ``hochschild check | homology | reproduce``.

Exit status: 0 when everything passes, 1 when an identity, check or frozen
comparison fails, 2 for configuration and parse errors.  Reports contain no
timings, paths or other run-dependent text, so equal inputs give equal bytes.
"""

import argparse
import os
import sys
from fractions import Fraction

from .algebra import AlgebraError, Bimodule, identity_automorphism, load_algebra
from .chains import ChainError
from .cochains import CochainError
from .families import BUILTIN, dilation
from .homology import ComplexError, Window, WindowError, assemble_chain_complex, \
    assemble_cochain_complex, homology_table
from .linalg import ShapeError
from .scenarios import SCENARIOS, ScenarioError, format_report, run_scenario
from .suite import SuiteConfig, run_suite
from .twisted import TwistError

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")

CONFIG_ERRORS = (AlgebraError, ChainError, CochainError, ComplexError, ScenarioError, ShapeError,
                 TwistError, WindowError)


class ConfigError(ValueError):
    pass


def resolve_algebra(ref):
    """An algebra from a file path, a shipped data file or a builtin name.

    Returns ``(algebra, automorphisms by name)``.
    """
    candidates = [ref, os.path.join(DATA_DIR, ref), os.path.join(DATA_DIR, ref + ".json")]
    for path in candidates:
        if os.path.isfile(path):
            try:
                with open(path, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read {ref}: {exc}") from None
            return load_algebra(text)
    name = ref[:-5] if ref.endswith(".json") else ref
    if name in BUILTIN:
        return BUILTIN[name](), {}
    raise ConfigError(f"no algebra file or builtin named {ref!r}; builtins: {sorted(BUILTIN)}")


def parse_rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a rational number: {text!r}") from None


def resolve_twist(A, autos, text):
    """A named automorphism from the file, or the dilation by a rational."""
    if text in autos:
        return autos[text]
    alpha = parse_rational(text)
    if alpha == 0:
        raise ConfigError("a dilation twist must be nonzero")
    phi = dilation(A, alpha, name=f"dil({alpha})")
    phi.validate()
    return phi


def _nonnegative(name, value, minimum=1):
    if value is not None and value < minimum:
        raise ConfigError(f"--{name} must be at least {minimum}")
    return value


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands ----------------------------------------------------------------

def cmd_check(args):
    A, autos = resolve_algebra(args.algebra)
    _nonnegative("samples", args.samples)
    _nonnegative("max-arity", args.max_arity)
    _nonnegative("max-degree", args.max_degree, 0)
    twists = [resolve_twist(A, autos, t) for t in args.twist]
    if not twists and autos:
        twists = [autos[k] for k in sorted(autos)]
    cfg = SuiteConfig(seed=args.seed, samples=args.samples, max_arity=args.max_arity,
                      max_degree=args.max_degree, twists=twists)
    only = None
    if args.only:
        from .suite import IDENTITIES
        names = {n for n, _ in IDENTITIES}
        unknown = [n for n in args.only if n not in names]
        if unknown:
            raise ConfigError(f"unknown identity {unknown[0]!r}")
        only = set(args.only)
    results = run_suite(A, cfg, only)
    lines = [f"algebra: {A.name}",
             f"seed: {args.seed}  samples: {args.samples}  max arity: {args.max_arity}  "
             f"max degree: {args.max_degree if args.max_degree is not None else '-'}",
             "twists: " + (", ".join(t.name for t in cfg.twists) if cfg.twists else "identity")]
    lines.extend(r.line() for r in results)
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} identities passed")
    _emit("\n".join(lines) + "\n", args.out)
    return 1 if failed else 0


def _default_degree(A, max_arity, given):
    if given is not None:
        return given
    if A.window is not None:
        return min(max_arity, A.window)
    return max_arity + 1


def cmd_homology(args):
    A, autos = resolve_algebra(args.algebra)
    _nonnegative("max-arity", args.max_arity)
    _nonnegative("max-degree", args.max_degree)
    if len(args.twist) > 2:
        raise ConfigError("homology takes at most two twists (left, right)")
    twists = [resolve_twist(A, autos, t) for t in args.twist]
    ident = identity_automorphism(A)
    if len(twists) == 1:
        M = Bimodule(A, ident, twists[0])
    elif len(twists) == 2:
        M = Bimodule(A, twists[0], twists[1])
    else:
        M = Bimodule(A)
    w = Window(args.max_arity, _default_degree(A, args.max_arity, args.max_degree))
    if args.complex == "cochains":
        sc = assemble_cochain_complex(A, M, w)
    else:
        sc = assemble_chain_complex(A, M, w)
    report = homology_table(sc)
    text = report.to_csv() if args.format == "csv" else report.to_markdown()
    if args.representatives:
        labels = A.labels
        if args.complex == "cochains":
            def label(piece):
                a, r = piece
                return "[" + ",".join(labels[i] for i in a) + "]->" + labels[r]
        else:
            def label(k):
                return labels[k]
        text += "\n" + report.representatives_text(label)
    _emit(text, args.out)
    return 0


_SCENARIO_FLAGS = {
    "kx-dilation": ("alpha", "beta", "gamma", "max_degree"),
    "hkr-affine": ("vars", "max_degree", "max_arity"),
    "shuffle-oracle": ("seed", "samples", "max_arity"),
    "keps-tower": ("max_arity", "seed", "samples"),
}


def cmd_reproduce(args):
    name = args.scenario
    if name not in SCENARIOS:
        raise ScenarioError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}")
    given = {k: getattr(args, k) for k in ("alpha", "beta", "gamma", "max_degree", "vars",
                                           "max_arity", "seed", "samples")
             if getattr(args, k) is not None}
    if args.twist:
        if name != "kx-dilation":
            raise ConfigError("--twist applies to kx-dilation only")
        if len(args.twist) > 3:
            raise ConfigError("kx-dilation takes at most three twists (alpha, beta, gamma)")
        for key, t in zip(("alpha", "beta", "gamma"), args.twist):
            if key in given:
                raise ConfigError(f"--{key} given twice")
            given[key] = t
    extra = sorted(set(given) - set(_SCENARIO_FLAGS[name]))
    if extra:
        raise ConfigError(f"{name} does not take --{extra[0].replace('_', '-')}")
    params = {}
    for k, v in given.items():
        if k in ("alpha", "beta", "gamma"):
            v = parse_rational(v)
            v = v.numerator if v.denominator == 1 else str(v)
        params[k] = v
    _nonnegative("samples", params.get("samples"))
    _nonnegative("max-arity", params.get("max_arity"))
    _nonnegative("max-degree", params.get("max_degree"))
    _nonnegative("vars", params.get("vars"))
    report, frozen, diff = run_scenario(name, params)
    _emit(format_report(report, frozen, diff), args.out)
    ok = all(c["ok"] for c in report["checks"]) and frozen != "mismatch"
    return 0 if ok else 1


# -- parser ---------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="hochschild",
                                description="Exact Hochschild calculus on small algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run the randomized identity suite")
    c.add_argument("--algebra", required=True, help="spec file, shipped data name or builtin")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--samples", type=int, default=50)
    c.add_argument("--max-arity", type=int, default=3)
    c.add_argument("--max-degree", type=int, default=None, help="weight cap for random elements")
    c.add_argument("--twist", action="append", default=[],
                   help="automorphism name or dilation p/q (repeat for alpha, beta, gamma)")
    c.add_argument("--only", action="append", default=[], help="run only the named identity")
    c.add_argument("--out")
    c.set_defaults(func=cmd_check)

    h = sub.add_parser("homology", help="homology table of a finite window")
    h.add_argument("--algebra", required=True)
    h.add_argument("--max-arity", type=int, default=6)
    h.add_argument("--max-degree", type=int, default=None)
    h.add_argument("--twist", action="append", default=[],
                   help="one twist gives A_alpha; two give alpha A_beta")
    h.add_argument("--complex", choices=("chains", "cochains"), default="chains")
    h.add_argument("--format", choices=("csv", "markdown"), default="csv")
    h.add_argument("--representatives", action="store_true")
    h.add_argument("--out")
    h.set_defaults(func=cmd_homology)

    r = sub.add_parser("reproduce", help="run a named scenario against frozen data")
    r.add_argument("scenario", help="one of: " + ", ".join(sorted(SCENARIOS)))
    r.add_argument("--alpha")
    r.add_argument("--beta")
    r.add_argument("--gamma")
    r.add_argument("--twist", action="append", default=[])
    r.add_argument("--vars", type=int)
    r.add_argument("--max-degree", type=int)
    r.add_argument("--max-arity", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--samples", type=int)
    r.add_argument("--out")
    r.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (ConfigError,) + CONFIG_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
