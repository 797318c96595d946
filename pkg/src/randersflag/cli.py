"""Command-line entry point and the algebra file format.

Algebra files are JSON documents::

    {"name": "heisenberg3", "dim": 3, "h_dim": 0, "basis": ["e1", "e2", "e3"],
     "brackets": [{"i": 1, "j": 2, "k": 3, "c": 1.0}],
     "gram": [1, 0, 0, 0, 1, 0, 0, 0, 1], "x": [0, 0, 0]}

Bracket indices are 1-based with ``i < j``; ``gram`` is the row-major inner
product on ``m``; ``x`` (optional) gives the drift in ``m``-coordinates.
Exit codes: 0 ok, 2 invalid input, 3 degenerate flag, 4 hypothesis violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import examples
from .lie_core import (
    DegenerateFlagError,
    HypothesisViolation,
    InputError,
    LieAlgebraSpec,
    ReductiveSpace,
    UnsupportedConfiguration,
    check_drift_admissible,
    check_naturally_reductive,
    is_abelian,
    nilpotency_class,
    validate_space,
)
from .randers import Flag, RandersSpec, curvature_report, random_flag
from .riemann import ORACLE_CONSISTENT, PAPER_LITERAL, is_parallel_koszul

EXIT_OK, EXIT_INVALID, EXIT_DEGENERATE, EXIT_HYPOTHESIS = 0, 2, 3, 4


class FileFormatError(InputError):
    pass


# ---------------------------------------------------------------- file format

def _field(doc: dict, key: str, kind, required: bool = True):
    if key not in doc:
        if required:
            raise FileFormatError(f"field '{key}': missing")
        return None
    val = doc[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise FileFormatError(f"field '{key}': expected integer, got {val!r}")
    if kind is str and not isinstance(val, str):
        raise FileFormatError(f"field '{key}': expected text, got {val!r}")
    if kind is list and not isinstance(val, list):
        raise FileFormatError(f"field '{key}': expected list, got {type(val).__name__}")
    return val


def _reals(values: list, key: str) -> list[float]:
    out = []
    for n, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise FileFormatError(f"field '{key}[{n}]': expected finite real, got {v!r}")
        out.append(float(v))
    return out


def parse_algebra_text(text: str) -> tuple[ReductiveSpace, np.ndarray | None]:
    """Parse an algebra document without running structural checks beyond the format."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise FileFormatError("top level: expected an object")
    name = _field(doc, "name", str)
    dim = _field(doc, "dim", int)
    h_dim = _field(doc, "h_dim", int)
    if dim < 1:
        raise FileFormatError(f"field 'dim': must be positive, got {dim}")
    if not 0 <= h_dim < dim:
        raise FileFormatError(f"field 'h_dim': must satisfy 0 <= h_dim < dim, got {h_dim}")
    basis = _field(doc, "basis", list, required=False) or [f"e{i + 1}" for i in range(dim)]
    if len(basis) != dim or not all(isinstance(b, str) for b in basis):
        raise FileFormatError(f"field 'basis': expected {dim} labels")
    records = []
    for n, rec in enumerate(_field(doc, "brackets", list)):
        where = f"field 'brackets[{n}]'"
        if not isinstance(rec, dict) or set(rec) != {"i", "j", "k", "c"}:
            raise FileFormatError(f"{where}: expected an object with keys i, j, k, c")
        idx = []
        for key in ("i", "j", "k"):
            v = rec[key]
            if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= dim:
                raise FileFormatError(f"{where}: index {key}={v!r} out of range 1..{dim}")
            idx.append(v - 1)
        (c,) = _reals([rec["c"]], f"brackets[{n}].c")
        records.append((*idx, c))
    try:
        algebra = LieAlgebraSpec.from_brackets(name, dim, records, basis)
    except InputError as exc:
        raise FileFormatError(f"field 'brackets': {exc}") from None
    m = dim - h_dim
    gram = _reals(_field(doc, "gram", list), "gram")
    if len(gram) != m * m:
        raise FileFormatError(f"field 'gram': expected {m * m} entries, got {len(gram)}")
    rs = ReductiveSpace(algebra, h_dim, np.array(gram).reshape(m, m))
    x = _field(doc, "x", list, required=False)
    if x is not None:
        x = _reals(x, "x")
        if len(x) != m:
            raise FileFormatError(f"field 'x': expected {m} entries, got {len(x)}")
        x = np.array(x)
    return rs, x


def load_algebra_file(path: str) -> tuple[ReductiveSpace, np.ndarray | None]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FileFormatError(f"{path}: {exc.strerror}") from None
    return parse_algebra_text(text)


def dump_algebra_file(rs: ReductiveSpace, x=None) -> str:
    doc = {
        "name": rs.algebra.name,
        "dim": rs.dim,
        "h_dim": rs.h_dim,
        "basis": list(rs.algebra.basis_labels),
        "brackets": [{"i": i + 1, "j": j + 1, "k": k + 1, "c": c}
                     for i, j, k, c in rs.algebra.bracket_records()],
        "gram": [float(v) for v in rs.gram.ravel()],
    }
    if x is not None:
        doc["x"] = [float(v) for v in x]
    return dumps(doc)


# ---------------------------------------------------------------- emission

def _fmt(obj, indent: int) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return "null"
        s = format(v, ".17g")
        return s if any(ch in s for ch in ".en") else s + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_fmt(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_fmt(v, indent + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + _fmt(v, indent + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON with insertion-ordered keys and floats at 17 significant digits."""
    return _fmt(obj, 0) + "\n"


def _pretty(obj, prefix: str = "") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not all(isinstance(t, (int, float)) for t in v):
                lines.append(f"{prefix}{k}:")
                lines.extend(_pretty(v, prefix + "  "))
            else:
                lines.append(f"{prefix}{k}: {_short(v)}")
    elif isinstance(obj, list):
        for n, v in enumerate(obj):
            lines.append(f"{prefix}[{n}]")
            lines.extend(_pretty(v, prefix + "  "))
    else:
        lines.append(prefix + _short(obj))
    return lines


def _short(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, list):
        return "(" + ", ".join(_short(t) for t in v) + ")"
    return "-" if v is None else str(v)


def _table(rows: list[dict], columns: list[str]) -> str:
    cells = [[_short(r[c]) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    out = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    out.append("  ".join("-" * w for w in widths))
    out += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- commands

def _load(args) -> tuple[ReductiveSpace, np.ndarray | None, str]:
    if args.builtin:
        rs, x = examples.build(args.builtin)
        return rs, x, f"builtin:{args.builtin}"
    if not args.path:
        raise FileFormatError("an algebra file or --builtin is required")
    rs, x = load_algebra_file(args.path)
    return rs, x, args.path


def _spec(rs: ReductiveSpace, x) -> RandersSpec:
    problems = validate_space(rs)
    if problems:
        raise InputError("; ".join(problems))
    return RandersSpec(rs, np.zeros(rs.m_dim) if x is None else x)


def _vector(text: str, n: int, name: str) -> np.ndarray:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise InputError(f"--{name}: expected comma-separated reals, got {text!r}") from None
    if len(vals) != n:
        raise InputError(f"--{name}: expected {n} m-coordinates, got {len(vals)}")
    return np.array(vals)


def cmd_validate(args, out) -> int:
    rs, x, source = _load(args)
    problems = validate_space(rs)
    info = {}
    if not problems:
        nat, res = check_naturally_reductive(rs)
        nil = nilpotency_class(rs.algebra)
        info = {"naturally_reductive": nat, "naturally_reductive_residual": res,
                "nilpotency_class": nil, "abelian": is_abelian(rs.algebra)}
        if x is not None:
            adm = check_drift_admissible(rs, x)
            if not adm.norm_ok:
                problems.append(f"drift violates g(X,X) < 1 (g(X,X) = {adm.norm_sq:.17g})")
            if not adm.h_invariant:
                problems.append("drift is not ad(h)-invariant: [h, X] != 0")
            info["drift_parallel"] = adm.parallel
    doc = {"source": source, "name": rs.algebra.name, "dim": rs.dim, "h_dim": rs.h_dim,
           "valid": not problems, "violations": problems, "info": info}
    _emit(doc, args, out)
    return EXIT_OK if not problems else EXIT_INVALID


def _hypothesis_problems(spec: RandersSpec) -> list[str]:
    rs = spec.space
    msgs = []
    nat, res = check_naturally_reductive(rs)
    if not nat:
        msgs.append(f"space is not naturally reductive (residual {res:.3e})")
    parallel = spec.admissibility.parallel
    if rs.h_dim == 0:
        parallel = parallel and is_parallel_koszul(rs, spec.x)
    if not parallel:
        msgs.append("drift vector is not parallel")
    return msgs


def cmd_flag_curvature(args, out) -> int:
    rs, x, source = _load(args)
    spec = _spec(rs, x)
    flag = Flag(_vector(args.y, rs.m_dim, "y"), _vector(args.u, rs.m_dim, "u"))
    problems = _hypothesis_problems(spec)
    if problems and not args.force:
        raise HypothesisViolation("; ".join(problems) + " (use --force to evaluate anyway)")
    variants = (ORACLE_CONSISTENT,) if args.variant == ORACLE_CONSISTENT else (ORACLE_CONSISTENT, PAPER_LITERAL)
    rep = curvature_report(spec, flag, variants, force=args.force)
    doc = {"source": source, "variant": args.variant, **rep.as_dict()}
    _emit(doc, args, out)
    return EXIT_OK


def cmd_counterexample(args, out) -> int:
    rs, x, source = _load(args)
    problems = validate_space(rs)
    if problems:
        raise InputError("; ".join(problems))
    if rs.h_dim != 0:
        raise UnsupportedConfiguration("the counterexample needs a Lie group (h_dim = 0)")
    if x is not None and np.any(x):
        raise HypothesisViolation("the counterexample uses zero drift; the file sets x != 0")
    rep = examples.run_counterexample(rs, args.samples, args.seed)
    doc = {"source": source, "samples": args.samples, **rep.as_dict()}
    _emit(doc, args, out)
    return EXIT_OK


def _grid(spec_text: str, rs: ReductiveSpace) -> list[Flag]:
    kind, _, rest = spec_text.partition(":")
    if kind == "basis" and not rest:
        return examples.basis_flags(rs.m_dim)
    if kind == "random":
        parts = rest.split(":")
        try:
            count = int(parts[0])
            seed = int(parts[1]) if len(parts) > 1 else examples.DEFAULT_SEED
        except (ValueError, IndexError):
            raise InputError(f"--grid: expected random:<N>[:<seed>], got {spec_text!r}") from None
        rng = np.random.default_rng(seed)
        return [random_flag(rng, rs) for _ in range(count)]
    raise InputError(f"--grid: expected 'basis' or 'random:<N>[:<seed>]', got {spec_text!r}")


SWEEP_COLUMNS = ["index", "y", "u", "K_thm42_oracle_consistent", "K_thm42_paper_literal",
                 "K_assembled_oracle", "K_thm22_denghou", "sectional_g",
                 "thm42_vs_assembled_abs", "paper_literal_vs_oracle_consistent_rel"]


def cmd_sweep(args, out) -> int:
    rs, x, source = _load(args)
    spec = _spec(rs, x)
    rows = []
    for n, flag in enumerate(_grid(args.grid, rs)):
        rep = curvature_report(spec, flag, (ORACLE_CONSISTENT, PAPER_LITERAL), force=args.force)
        rows.append({
            "index": n, "y": rep.y, "u": rep.u,
            "K_thm42_oracle_consistent": rep.K_thm42_oracle_consistent,
            "K_thm42_paper_literal": rep.K_thm42_paper_literal,
            "K_assembled_oracle": rep.K_assembled_oracle,
            "K_thm22_denghou": rep.K_thm22_denghou,
            "sectional_g": rep.sectional_g,
            "thm42_vs_assembled_abs": rep.discrepancy["thm42_vs_assembled_abs"],
            "paper_literal_vs_oracle_consistent_rel": rep.discrepancy["paper_literal_vs_oracle_consistent_rel"],
        })
    if args.pretty:
        out.write(_table(rows, SWEEP_COLUMNS))
    else:
        out.write(dumps({"source": source, "grid": args.grid, "columns": SWEEP_COLUMNS,
                         "hypothesis_problems": _hypothesis_problems(spec), "forced": args.force,
                         "rows": rows}))
    return EXIT_OK


def _emit(doc: dict, args, out) -> None:
    if getattr(args, "pretty", False):
        out.write("\n".join(_pretty(doc)) + "\n")
    else:
        out.write(dumps(doc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randersflag",
        description="Flag curvature of invariant Randers metrics on homogeneous spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("path", nargs="?", help="algebra file (JSON)")
        p.add_argument("--builtin", help="heisenberg3, su2, su2_x_r:<t>, abelian:<n>, toy_gh4")
        p.add_argument("--pretty", action="store_true", help="human-readable output")

    p = sub.add_parser("validate", help="structural checks of an algebra file")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("flag-curvature", help="curvature report for one flag")
    common(p)
    p.add_argument("--y", required=True, help="flagpole, comma-separated m-coordinates")
    p.add_argument("--u", required=True, help="transverse edge, comma-separated m-coordinates")
    p.add_argument("--variant", choices=[ORACLE_CONSISTENT, PAPER_LITERAL, "all"],
                   default=ORACLE_CONSISTENT)
    p.add_argument("--force", action="store_true", help="evaluate outside the hypotheses")
    p.set_defaults(func=cmd_flag_curvature)

    p = sub.add_parser("counterexample", help="refuted formula vs Koszul oracle, zero drift")
    common(p)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=examples.DEFAULT_SEED)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("sweep", help="all variants over a grid of flags")
    common(p)
    p.add_argument("--grid", default="basis", help="'basis' or 'random:<N>[:<seed>]'")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except DegenerateFlagError as exc:
        print(f"error: degenerate flag: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (HypothesisViolation, UnsupportedConfiguration) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
