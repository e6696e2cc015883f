"""Command line front end: matrix | check | decompose | grid.

Exit codes: 0 for a positive verdict (or successful output), 1 for a
negative verdict, 2 for configuration errors, 3 for evaluation errors.
JSON documents carry a top-level ``schema: 1`` field; CSV uses a comma
separator with exact rationals rendered as p/q.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .arith import ArithmeticFunction, builtin, pd_check_grid, to_lattice_function
from .errors import EvaluationError, MeetPDError, UnknownBuiltinError
from .meetmatrix import (
    decomposition_to_json,
    kron_decompose_d,
    matrix_to_csv,
    matrix_to_json,
    meet_matrix,
    reconstruct,
    summatory_function,
    table_function,
)
from .pdcheck import pd_criterion
from .posets import (
    DivisorLattice,
    MinLattice,
    divisor_lattice,
    load_hasse,
    min_lattice,
    product_subset,
)

CONFIG_ERROR = 2
EVAL_ERROR = 3


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    family: object
    family_name: str
    d: int
    fn: object            # ArithmeticFunction, LatticeFunction, or None
    fn_spec: str | None
    bound: int
    tol: float
    fmt: str
    out: str | None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="meetpd",
        description="meet matrices, structured decompositions, and positive "
                    "semidefiniteness checks on meet semilattices",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("matrix", "write the meet matrix of the covering set at the bound"),
        ("check", "decide positive definiteness on the tested covering"),
        ("decompose", "write the structured factorization of the covering matrix"),
        ("grid", "emit the summatory-of-one grid data for a 2-d family"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--family", choices=["divisor", "min"], default=None)
        p.add_argument("--d", type=int, default=None, help="arity of the family")
        p.add_argument("--fn", default=None,
                       help="builtin name[:param], or @file.csv / @file.json value table")
        p.add_argument("--m", type=int, required=(name != "grid"), default=None,
                       help="covering bound")
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--format", dest="fmt", choices=["json", "csv"], default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--hasse", default=None, help="explicit lattice description file")
    return parser


def _parse_cell(text):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        return text


def _load_table(path):
    """Value table from CSV rows ``i1,...,id,value`` (ids may be strings)."""
    mapping = {}
    arity = None
    with open(path, "r", encoding="utf-8") as handle:
        for raw in handle:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            cells = line.split(",")
            if len(cells) < 2:
                raise ConfigError(f"bad table row: {line}")
            keys = [_parse_cell(c) for c in cells[:-1]]
            value = Fraction(cells[-1])
            key = keys[0] if len(keys) == 1 else tuple(keys)
            mapping[key] = value
            arity = len(keys)
    if not mapping:
        raise ConfigError(f"value table {path} is empty")
    return mapping, arity


def _load_matrix_diagonal(path):
    """Diagonal of a matrix JSON document as a value table."""
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    if doc.get("kind") != "meet_matrix":
        raise ConfigError(f"{path} is not a meet matrix document")
    labels = doc["labels"]
    entries = doc["entries"]
    mapping = {}
    arity = None
    for i, label in enumerate(labels):
        key = tuple(label) if isinstance(label, list) else label
        mapping[key] = Fraction(entries[i][i])
        arity = len(label) if isinstance(label, list) else 1
    return mapping, arity


def _resolve_function(spec, d):
    if spec is None:
        raise ConfigError("--fn is required for this command")
    if spec.startswith("@"):
        path = spec[1:]
        if path.endswith(".json"):
            mapping, arity = _load_matrix_diagonal(path)
        else:
            mapping, arity = _load_table(path)
        if d is not None and arity is not None and d != arity:
            raise ConfigError(f"table arity {arity} does not match --d {d}")
        return ("table", mapping, arity)
    name, _, param = spec.partition(":")
    alpha = None
    if param:
        try:
            alpha = Fraction(param)
        except ValueError:
            raise ConfigError(f"bad parameter {param!r} in --fn")
    try:
        fn = builtin(name, alpha=alpha, d=d if d is not None else (2 if name == "ramanujan_C" else 1))
    except UnknownBuiltinError as exc:
        raise ConfigError(str(exc))
    except (ValueError, MeetPDError) as exc:
        raise ConfigError(str(exc))
    return ("builtin", fn, fn.arity)


def _resolve_config(args, need_fn=True):
    if args.hasse is not None and args.family is not None:
        raise ConfigError("--hasse and --family are mutually exclusive")
    bound = args.m
    if bound is not None and bound < 1:
        raise ConfigError("--m must be at least 1")
    if args.tol < 0:
        raise ConfigError("--tol must be nonnegative")

    family = None
    family_name = args.family or "divisor"
    if args.hasse is not None:
        try:
            family = load_hasse(args.hasse)
        except (OSError, ValueError, MeetPDError) as exc:
            raise ConfigError(f"cannot load {args.hasse}: {exc}")
        family_name = "hasse"

    fn = None
    fn_spec = args.fn
    d = args.d
    if need_fn:
        kind, payload, arity = _resolve_function(args.fn, d)
        if d is None:
            d = arity if arity is not None else 1
        if arity is not None and arity != d:
            raise ConfigError(f"function arity {arity} does not match --d {d}")
        if kind == "builtin":
            fn = payload
        else:
            fn = ("table", payload)
    if d is None:
        d = 1
    if d < 1:
        raise ConfigError("--d must be at least 1")

    if family is None:
        if family_name == "divisor":
            family = divisor_lattice(d)
        else:
            family = min_lattice(d)
    return RunConfig(family, family_name, d, fn, fn_spec, bound, args.tol,
                     args.fmt, args.out)


def _as_lattice_function(config):
    fn = config.fn
    if isinstance(fn, ArithmeticFunction):
        return to_lattice_function(fn, config.family)
    kind, mapping = fn
    return table_function(config.family, mapping, name=config.fn_spec or "table")


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _covering(config):
    return config.family.covering_set(config.bound)


def cmd_matrix(config):
    m = meet_matrix(_covering(config), _as_lattice_function(config))
    fmt = config.fmt or "json"
    if fmt == "csv":
        _emit(matrix_to_csv(m), config.out)
    else:
        _emit(json.dumps(matrix_to_json(m), indent=2) + "\n", config.out)
    return 0


def cmd_check(config):
    fn = config.fn
    if isinstance(fn, ArithmeticFunction) and isinstance(config.family, DivisorLattice):
        verdict = pd_check_grid(fn, config.bound)
    elif (isinstance(fn, ArithmeticFunction)
          and getattr(config.family, "kind", "") == "product"
          and all(isinstance(f, DivisorLattice) for f in config.family.factors)):
        verdict = pd_check_grid(fn, config.bound)
    else:
        verdict = pd_criterion(_as_lattice_function(config), config.family, config.bound)
    doc = {"schema": 1}
    doc.update(verdict.to_json())
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return 0 if verdict.is_positive else 1


def cmd_decompose(config):
    f = _as_lattice_function(config)
    cover = _covering(config)
    if cover.factor_subsets is not None:
        dec = kron_decompose_d(cover.factor_subsets, f)
    else:
        dec = kron_decompose_d([cover], f)
    rebuilt = reconstruct(dec)
    direct = meet_matrix(cover, f)
    residual = max(
        (abs(a - b) for ra, rb in zip(rebuilt.rows, direct.rows) for a, b in zip(ra, rb)),
        default=Fraction(0),
    )
    doc = decomposition_to_json(dec, residual=residual)
    fmt = config.fmt or "json"
    if fmt == "csv":
        lines = [",".join(str(v) for v in dec.diag)]
        _emit("\n".join(lines) + "\n", config.out)
    else:
        _emit(json.dumps(doc, indent=2) + "\n", config.out)
    return 0


def cmd_grid(config):
    if config.family_name not in ("divisor", "min"):
        raise ConfigError("grid needs --family divisor or min")
    if config.d != 2:
        raise ConfigError("grid data is two-dimensional; use --d 2")
    bound = config.bound or 10
    family = divisor_lattice(2) if config.family_name == "divisor" else min_lattice(2)
    f = summatory_function(family, lambda _z: 1, name="lower_set_size")
    lines = []
    for x1 in range(1, bound + 1):
        for x2 in range(1, bound + 1):
            lines.append(f"{x1},{x2},{f((x1, x2))}")
    _emit("\n".join(lines) + "\n", config.out)
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "grid":
            if args.d is None:
                args.d = 2
            config = _resolve_config(args, need_fn=False)
        else:
            config = _resolve_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    try:
        if args.command == "matrix":
            return cmd_matrix(config)
        if args.command == "check":
            return cmd_check(config)
        if args.command == "decompose":
            return cmd_decompose(config)
        return cmd_grid(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    except EvaluationError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EVAL_ERROR
    except MeetPDError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
