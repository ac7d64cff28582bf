"""Line-oriented input format, subcommand dispatch, and deterministic output.

The input grammar (one declaration per line, `#` starts a comment):

    field <prime>
    vertices <label> <label> ...
    arrow <name> : <src> -> <tgt>
    relation <term> (+|- <term>)*          term = [coeff*]name(*name)*
    order <arrow> <arrow> ...              optional monomial precedence
    module / generator <name> : <vertex> degree <k> / relation ... / end

Identical inputs produce byte-identical outputs.  Exit codes: 0 success,
1 refusal (outside the certified range), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .errors import InputError, KoszulityError, Refusal
from .ext import (
    DeltaFunction,
    ainfty_feasible_arities,
    classify,
    classify_module,
    delta,
    ek_subalgebra,
    ext_generation_degrees,
    ext_table,
    yoneda_surjectivity_check,
)
from .groebner import MonomialOrder, buchberger_truncated, graded_algebra_data
from .linalg import is_prime
from .modules import FreeModule, ModuleMap, ModulePresentation
from .presentation import (
    DEFAULT_CHAR,
    AlgebraElement,
    Quiver,
    QuiverPresentation,
    compose,
)
from .resolution import betti_table, minimal_resolution

# ---------------------------------------------------------------------------
# input documents


@dataclass
class ModuleBlock:
    generators: list = field(default_factory=list)  # (name, vertex label, degree)
    relations: list = field(default_factory=list)  # list of [(coeff, names tuple)]
    lines: list = field(default_factory=list, compare=False)


@dataclass
class InputDocument:
    char: int | None = None
    vertices: list = field(default_factory=list)
    arrows: list = field(default_factory=list)  # (name, src, tgt)
    relations: list = field(default_factory=list)  # list of [(coeff, names tuple)]
    order: list | None = None
    modules: list = field(default_factory=list)
    relation_lines: list = field(default_factory=list, compare=False)
    arrow_lines: list = field(default_factory=list, compare=False)


def _err(line_no: int, col: int, message: str):
    raise InputError(f"line {line_no}, column {col}: {message}")


def _tokenize(line: str, line_no: int):
    """Tokens with 1-based columns: names, integers, and : -> + - * symbols."""
    tokens = []
    i = 0
    n = len(line)
    while i < n:
        ch = line[i]
        if ch in " \t":
            i += 1
            continue
        if ch == "#":
            break
        if line.startswith("->", i):
            tokens.append(("->", i + 1))
            i += 2
            continue
        if ch in ":+-*":
            tokens.append((ch, i + 1))
            i += 1
            continue
        if ch.isalnum() or ch == "_":
            j = i
            while j < n and (line[j].isalnum() or line[j] == "_"):
                j += 1
            tokens.append((line[i:j], i + 1))
            i = j
            continue
        _err(line_no, i + 1, f"unexpected character {ch!r}")
    return tokens


def _parse_expr(tokens, pos, line_no, char):
    """Parse term ((+|-) term)* starting at tokens[pos]; returns list of
    (coeff residue, names tuple)."""
    terms = []
    sign = 1
    if pos < len(tokens) and tokens[pos][0] in "+-":
        sign = -1 if tokens[pos][0] == "-" else 1
        pos += 1
    while True:
        if pos >= len(tokens):
            col = tokens[-1][1] if tokens else 1
            _err(line_no, col, "expected a term")
        tok, col = tokens[pos]
        coeff = 1
        if tok.isdigit():
            coeff = int(tok)
            pos += 1
            if pos >= len(tokens) or tokens[pos][0] != "*":
                _err(line_no, col, "coefficient must be followed by '*'")
            pos += 1
            if pos >= len(tokens):
                _err(line_no, col, "coefficient without factors")
            tok, col = tokens[pos]
        names = []
        while True:
            if not (tok[0].isalpha() or tok[0] == "_" or tok.isalnum()):
                _err(line_no, col, f"expected a name, got {tok!r}")
            names.append(tok)
            pos += 1
            if pos < len(tokens) and tokens[pos][0] == "*":
                pos += 1
                if pos >= len(tokens):
                    _err(line_no, col, "dangling '*'")
                tok, col = tokens[pos]
                continue
            break
        terms.append(((sign * coeff) % char, tuple(names)))
        if pos >= len(tokens):
            return terms
        tok, col = tokens[pos]
        if tok == "+":
            sign = 1
        elif tok == "-":
            sign = -1
        else:
            _err(line_no, col, f"expected '+' or '-', got {tok!r}")
        pos += 1


def parse_input(text: str) -> InputDocument:
    """Parse the line-oriented input format into a document; errors cite the
    line and column."""
    doc = InputDocument()
    block: ModuleBlock | None = None
    pending_exprs = []  # (line_no, tokens, target list) parsed after char is known
    declared_char = None
    for line_no, line in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(line, line_no)
        if not tokens:
            continue
        head, col = tokens[0]
        rest = tokens[1:]
        if block is not None and head not in ("generator", "relation", "end"):
            _err(line_no, col, f"unexpected {head!r} inside module block")
        if head == "field":
            if len(rest) != 1 or not rest[0][0].isdigit():
                _err(line_no, col, "usage: field <prime>")
            declared_char = int(rest[0][0])
            if not is_prime(declared_char):
                _err(line_no, rest[0][1], f"{declared_char} is not prime")
            doc.char = declared_char
        elif head == "vertices":
            if not rest:
                _err(line_no, col, "usage: vertices <label> ...")
            doc.vertices.extend(tok for tok, _ in rest)
        elif head == "arrow":
            if (
                len(rest) != 5
                or rest[1][0] != ":"
                or rest[3][0] != "->"
            ):
                _err(line_no, col, "usage: arrow <name> : <src> -> <tgt>")
            name, src, tgt = rest[0][0], rest[2][0], rest[4][0]
            for label, where in ((src, rest[2][1]), (tgt, rest[4][1])):
                if label not in doc.vertices:
                    _err(line_no, where, f"unknown vertex {label}")
            doc.arrows.append((name, src, tgt))
            doc.arrow_lines.append(line_no)
        elif head == "order":
            if not rest:
                _err(line_no, col, "usage: order <arrow> ...")
            doc.order = [tok for tok, _ in rest]
        elif head == "relation":
            if not rest:
                _err(line_no, col, "empty relation")
            if block is None:
                pending_exprs.append((line_no, rest, doc.relations, doc.relation_lines))
            else:
                pending_exprs.append((line_no, rest, block.relations, block.lines))
        elif head == "module":
            if rest:
                _err(line_no, rest[0][1], "module takes no arguments")
            block = ModuleBlock()
            doc.modules.append(block)
        elif head == "generator":
            if block is None:
                _err(line_no, col, "generator outside module block")
            if (
                len(rest) != 5
                or rest[1][0] != ":"
                or rest[3][0] != "degree"
                or not rest[4][0].isdigit()
            ):
                _err(line_no, col, "usage: generator <name> : <vertex> degree <k>")
            gname, vlabel, deg = rest[0][0], rest[2][0], int(rest[4][0])
            if vlabel not in doc.vertices:
                _err(line_no, rest[2][1], f"unknown vertex {vlabel}")
            block.generators.append((gname, vlabel, deg))
        elif head == "end":
            if block is None:
                _err(line_no, col, "end outside module block")
            block = None
        else:
            _err(line_no, col, f"unknown declaration {head!r}")
    if block is not None:
        raise InputError("unterminated module block (missing 'end')")
    char = declared_char if declared_char is not None else DEFAULT_CHAR
    for line_no, tokens, target, lines in pending_exprs:
        target.append(_parse_expr(tokens, 0, line_no, char))
        lines.append(line_no)
    return doc


def _coeff_str(c: int, char: int) -> tuple[str, str]:
    """(sign, body) with the minimal-magnitude signed representative."""
    if c > char // 2:
        return "-", "" if char - c == 1 else f"{char - c}*"
    return "+", "" if c == 1 else f"{c}*"


def _expr_str(terms, char: int) -> str:
    parts = []
    for idx, (c, names) in enumerate(terms):
        sign, coeff = _coeff_str(c, char)
        body = coeff + "*".join(names)
        if idx == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def format_document(doc: InputDocument) -> str:
    """Canonical printer; parse(format_document(doc)) == doc for canonical
    documents (explicit field line, reduced coefficients)."""
    char = doc.char if doc.char is not None else DEFAULT_CHAR
    out = [f"field {char}"]
    if doc.vertices:
        out.append("vertices " + " ".join(doc.vertices))
    for name, src, tgt in doc.arrows:
        out.append(f"arrow {name} : {src} -> {tgt}")
    if doc.order is not None:
        out.append("order " + " ".join(doc.order))
    for terms in doc.relations:
        out.append("relation " + _expr_str(terms, char))
    for block in doc.modules:
        out.append("module")
        for gname, vlabel, deg in block.generators:
            out.append(f"generator {gname} : {vlabel} degree {deg}")
        for terms in block.relations:
            out.append("relation " + _expr_str(terms, char))
        out.append("end")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# document -> algebra objects


def document_presentation(doc: InputDocument, char: int) -> QuiverPresentation:
    quiver = Quiver(doc.vertices, doc.arrows)
    relations = []
    for idx, terms in enumerate(doc.relations):
        line = doc.relation_lines[idx] if idx < len(doc.relation_lines) else "?"
        elem = AlgebraElement.zero(char)
        for c, names in terms:
            path = None
            for name in names:
                if name not in quiver.arrow_index:
                    raise InputError(f"line {line}: unknown arrow {name}")
                step = quiver.arrow_path(name)
                path = step if path is None else compose(path, step)
                if path is None:
                    raise InputError(f"line {line}: non-composable path {'*'.join(names)}")
            elem = elem + AlgebraElement.from_path(path, char, c)
        relations.append(elem)
    pres = QuiverPresentation(quiver, relations, char)
    report = pres.validate()
    if not report.ok:
        details = []
        for v in report.violations:
            line = doc.relation_lines[v.relation] if 0 <= v.relation < len(doc.relation_lines) else "?"
            details.append(f"line {line}: {v.message}")
        raise InputError("; ".join(details))
    return pres


def document_module(doc: InputDocument, alg, quiver: Quiver) -> ModulePresentation:
    if not doc.modules:
        raise InputError("no module block in input")
    if len(doc.modules) > 1:
        raise InputError("only one module block is supported per input")
    block = doc.modules[0]
    if not block.generators:
        raise InputError("module block declares no generators")
    gen_index = {}
    gens = []
    for gname, vlabel, deg in block.generators:
        if gname in gen_index or gname in quiver.arrow_index or gname in quiver.vertex_index:
            raise InputError(f"module generator name {gname} already in use")
        gen_index[gname] = len(gens)
        gens.append((quiver.vertex_index[vlabel], deg))
    ambient = FreeModule(tuple(gens))
    rel_gens = []
    entries: dict = {}
    for ridx, terms in enumerate(block.relations):
        line = block.lines[ridx] if ridx < len(block.lines) else "?"
        per_gen: dict = {}
        row_degree = None
        row_target = None
        for c, names in terms:
            if not names or names[0] not in gen_index:
                raise InputError(
                    f"line {line}: module relation terms must start with a generator name"
                )
            g = gen_index[names[0]]
            path = quiver.idempotent(ambient.vertex(g))
            for name in names[1:]:
                if name not in quiver.arrow_index:
                    raise InputError(f"line {line}: unknown arrow {name}")
                step = compose(path, quiver.arrow_path(name))
                if step is None:
                    raise InputError(f"line {line}: path does not start at the generator vertex")
                path = step
            deg = len(path.arrows) + ambient.degree(g)
            tgt = path.target
            if row_degree is None:
                row_degree, row_target = deg, tgt
            elif (deg, tgt) != (row_degree, row_target):
                raise InputError(f"line {line}: relation is not homogeneous and parallel")
            elem = per_gen.setdefault(g, AlgebraElement.zero(alg.char))
            per_gen[g] = elem + AlgebraElement.from_path(path, alg.char, c)
        if row_degree is None:
            raise InputError(f"line {line}: empty relation")
        j = len(rel_gens)
        rel_gens.append((row_target, row_degree))
        for g, elem in per_gen.items():
            words = []
            for wdeg, u, v, widx, c in alg.express(elem):
                if not c:
                    continue
                if (u, v) != (ambient.vertex(g), row_target):
                    raise InputError(f"line {line}: relation term endpoints inconsistent")
                if wdeg != row_degree - ambient.degree(g):
                    raise InputError(f"line {line}: relation term degree inconsistent")
                words.append((widx, c))
            if words:
                entries[(g, j)] = words
    relations = ModuleMap(FreeModule(tuple(rel_gens)), ambient, entries)
    return ModulePresentation(relations)


# ---------------------------------------------------------------------------
# run configuration and dispatch


@dataclass
class RunConfig:
    subcommand: str
    N: int = 8
    D: int | None = None
    char: int | None = None
    format: str = "table"
    p: int | None = None
    d: int | None = None
    k: int = 1
    q_max: int = 9
    l: int | None = None
    i: int = 1
    j: int = 1


def _effective_bounds(cfg: RunConfig):
    N = cfg.N
    if cfg.D is not None:
        return N, cfg.D
    if cfg.p is not None and cfg.d is not None:
        return N, delta(DeltaFunction(cfg.p, cfg.d), N) + 1
    return N, max(2 * N, 2)


def _delta_params(cfg: RunConfig, table) -> DeltaFunction:
    if cfg.p is not None and cfg.d is not None:
        return DeltaFunction(cfg.p, cfg.d)
    cls = classify(table)
    if cls.p is None:
        raise Refusal(
            f"no staircase parameters: classification verdict {cls.verdict}; "
            "pass --p and --d explicitly"
        )
    return DeltaFunction(cls.p, cls.d)


def _render(obj: dict, fmt: str, kind: str = "") -> str:
    if fmt == "json":
        return json.dumps(obj, indent=2) + "\n"
    special = {
        "classify": _classification_table,
        "resolve": _betti_table_text,
        "ext": _ext_table_text,
    }.get(kind)
    if special is not None:
        return special(obj)
    return _render_table(obj)


def _classification_table(obj) -> str:
    lines = [
        f"verdict: {obj['verdict']}",
        f"p: {_scalar(obj['p'])}",
        f"d: {_scalar(obj['d'])}",
        f"certified_to: {obj['certified_to']}",
        f"termination_degree: {_scalar(obj['termination_degree'])}",
        "fitting_pairs: "
        + (" ".join(f"({p},{d})" for p, d in obj["fitting_pairs"]) or "-"),
    ]
    return "\n".join(lines) + "\n"


def _betti_table_text(obj) -> str:
    lines = ["  n  certified  generators (vertex:degree:count)"]
    for row in obj["rows"]:
        gens = " ".join(
            f"{g['vertex']}:{g['degree']}:{g['count']}" for g in row["generators"]
        )
        lines.append(f"{row['n']:>3}  {'yes' if row['certified'] else 'NO ':<9}  {gens or '-'}")
    return "\n".join(lines) + "\n"


def _ext_table_text(obj) -> str:
    lines = [f"certified_to: {obj['certified_to']}", "  i   j  dim"]
    for cell in obj["cells"]:
        lines.append(f"{cell['i']:>3} {cell['j']:>3}  {cell['dim']}")
    return "\n".join(lines) + "\n"


def _scalar(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    return str(x)


def _render_table(obj) -> str:
    """Flat deterministic key: value rendering of a JSON-able object."""
    lines: list[str] = []

    def walk(prefix: str, value):
        if isinstance(value, dict):
            for key, sub in value.items():
                walk(f"{prefix}{key}." if prefix else f"{key}.", sub)
        elif isinstance(value, list):
            if value and all(isinstance(x, (dict, list)) for x in value):
                for idx, x in enumerate(value):
                    walk(f"{prefix}{idx}.", x)
            else:
                lines.append(f"{prefix[:-1]}: {' '.join(_scalar(x) for x in value)}")
        else:
            lines.append(f"{prefix[:-1]}: {_scalar(value)}")

    walk("", obj)
    return "\n".join(lines) + "\n"


SCHEMA_TEXT = """\
INPUT GRAMMAR (one declaration per line, '#' starts a comment)
  field <prime>
  vertices <label> <label> ...
  arrow <name> : <src> -> <tgt>
  relation <term> (+|- <term>)*        term = [coeff*]name(*name)*
  order <arrow> <arrow> ...            optional monomial precedence
  module
  generator <name> : <vertex> degree <k>
  relation <term> (+|- <term>)*        first factor of each term = generator
  end

BETTI TABLE JSON
  { "rows": [ { "n": int, "certified": bool,
                "generators": [ {"vertex": str, "degree": int, "count": int} ] } ] }

CLASSIFICATION JSON
  { "verdict": "Koszul"|"dKoszul"|"PK"|"NotPure"|"NoFit",
    "p": int|null, "d": int|null, "certified_to": int,
    "fitting_pairs": [[p, d], ...], "termination_degree": int|null }

ARITY REPORT JSON
  { "support": [int, ...], "closed_form": [int, ...]|null, "consistent": bool|null }

STRUCTURE-CONSTANT JSON (ek output; ingest input)
  { "char": p, "idempotents": [...],
    "dims": { "<degree>": [[count per vertex pair]] },
    "products": [[deg_a, idx_a, deg_b, idx_b, [[idx_c, coeff], ...]], ...] }
  (indices are per-degree, flattened over vertex pairs in row-major order)

EXIT CODES  0 success, 1 refusal (outside certified range), 2 input error
"""


def run(cfg: RunConfig, doc: InputDocument) -> tuple[int, str]:
    """Execute one subcommand; returns (exit code, output)."""
    char = cfg.char if cfg.char is not None else (doc.char if doc.char is not None else DEFAULT_CHAR)
    N, D = _effective_bounds(cfg)
    if N < 0:
        raise InputError(f"homological bound {N} must be >= 0")
    if D < 2:
        raise InputError(f"internal bound {D} must be >= 2")
    pres = document_presentation(doc, char)
    order = MonomialOrder(pres.quiver, doc.order)
    gb = buchberger_truncated(pres, order, D)
    alg = graded_algebra_data(gb, D)
    res = minimal_resolution(alg, None, N=N, D=D)
    table = betti_table(res)

    if cfg.subcommand == "resolve":
        return 0, _render(table.json_dict(), cfg.format, "resolve")
    if cfg.subcommand == "classify":
        return 0, _render(classify(table).json_dict(), cfg.format, "classify")
    if cfg.subcommand == "ext":
        return 0, _render(ext_table(table).json_dict(), cfg.format, "ext")
    if cfg.subcommand == "yoneda":
        ok = yoneda_surjectivity_check(res, cfg.i, cfg.j, _delta_params(cfg, table))
        return 0, _render({"i": cfg.i, "j": cfg.j, "surjective": ok}, cfg.format)
    if cfg.subcommand == "generation":
        return 0, _render(ext_generation_degrees(res), cfg.format)
    if cfg.subcommand == "module-classify":
        f = _delta_params(cfg, table)
        mod = document_module(doc, alg, pres.quiver)
        res_m = minimal_resolution(alg, mod, N=N, D=D)
        out = classify_module(betti_table(res_m), f).json_dict()
        out["p"], out["d"] = f.p, f.d
        return 0, _render(out, cfg.format)
    if cfg.subcommand == "ek":
        f = _delta_params(cfg, table)
        n_max = res.certified_to() // (f.p * cfg.k)
        ek = ek_subalgebra(res, f, cfg.k, n_max)
        return 0, _render(ek.to_tables(), cfg.format)
    if cfg.subcommand == "arities":
        f = _delta_params(cfg, table)
        report = ainfty_feasible_arities(ext_table(table), f, cfg.q_max)
        out = report.json_dict()
        out["p"], out["d"] = f.p, f.d
        return 0, _render(out, cfg.format)
    if cfg.subcommand == "reduced2l":
        from .ext import reduced_2l_check

        l = cfg.l
        if l is None:
            f = _delta_params(cfg, table)
            l = f.d - 1
        return 0, _render(reduced_2l_check(res, ext_table(table), l), cfg.format)
    raise InputError(f"unknown subcommand {cfg.subcommand}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="koszulity",
        description="Koszul / d-Koszul / piecewise-Koszul classification of graded quiver algebras.",
    )
    parser.add_argument("--schema", action="store_true", help="print the input grammar and JSON schemas")
    sub = parser.add_subparsers(dest="subcommand")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-hdeg", type=int, default=8, dest="N", help="homological bound N (default 8)")
    common.add_argument("--max-ideg", type=int, default=None, dest="D",
                        help="internal degree bound D (default: delta(N)+1 when (p,d) known, else 2N)")
    common.add_argument("--char", type=int, default=None, help="field characteristic (default 32003)")
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--p", type=int, default=None, help="override staircase period")
    common.add_argument("--d", type=int, default=None, help="override staircase jump degree")

    def add(name, *positionals):
        p = sub.add_parser(name, parents=[common])
        for pname in positionals:
            p.add_argument(pname, type=int)
        p.add_argument("input", nargs="?", help="input file (default: stdin)")
        return p

    add("resolve")
    add("classify")
    add("ext")
    add("yoneda", "i", "j")
    add("generation")
    add("module-classify")
    add("ek", "k")
    add("arities", "q_max")
    red = sub.add_parser("reduced2l", parents=[common])
    red.add_argument("l", type=int, nargs="?", default=None)
    red.add_argument("input", nargs="?", help="input file (default: stdin)")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.schema:
        sys.stdout.write(SCHEMA_TEXT)
        return 0
    if not args.subcommand:
        parser.print_usage(sys.stderr)
        return 2
    try:
        if args.input:
            with open(args.input, "r", encoding="utf-8") as handle:
                text = handle.read()
        else:
            text = sys.stdin.read()
        doc = parse_input(text)
        cfg = RunConfig(
            subcommand=args.subcommand,
            N=args.N,
            D=args.D,
            char=args.char,
            format=args.format,
            p=args.p,
            d=args.d,
            k=getattr(args, "k", 1),
            q_max=getattr(args, "q_max", 9),
            l=getattr(args, "l", None),
            i=getattr(args, "i", 1),
            j=getattr(args, "j", 1),
        )
        code, output = run(cfg, doc)
        sys.stdout.write(output)
        return code
    except Refusal as exc:
        sys.stderr.write(f"refused: {exc}\n")
        return 1
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except KoszulityError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
