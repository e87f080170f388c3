"""Command line front end.

Exit codes: 0 success / match, 1 mismatch, 2 construction failure (or a
degree-cap overflow during verification), 3 parse error or malformed input.

Default caps can be set through the environment: PSETDML_DIM_CAP,
PSETDML_DEG_CAP, PSETDML_RECURSION_CAP, PSETDML_N_BUILD.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .compiler import CompileOptions, ConstructionError, compile_expr, plan
from .compiler.plan import DEFAULT_DIM_CAP, DEFAULT_N_FINAL, DEFAULT_RECURSION_CAP, TRACE_SCHEMA
from .setlang import SetParseError, enumerate_set, parse
from .torus import (DegreeCapExceeded, InstanceFormatError, dumps, instance_from_json,
                    instance_stats, instance_to_json)
from .verifier import verify_instance

EXIT_OK, EXIT_MISMATCH, EXIT_CONSTRUCTION, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _env_int(name: str, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        v = int(raw)
    except ValueError:
        raise InputError(f"{name} must be an integer, got {raw!r}") from None
    if v <= 0:
        raise InputError(f"{name} must be positive")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write_text(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _expr(args):
    if args.set is not None and args.set_file is not None:
        raise InputError("give either --set or --set-file, not both")
    text = args.set
    if args.set_file is not None:
        text = _read_text(args.set_file).strip()
    if text is None:
        raise InputError("a set expression is required (--set or --set-file)")
    return parse(text)


def _options(args, verify=True) -> CompileOptions:
    return CompileOptions(
        n_build=args.n_build if args.n_build is not None else _env_int("PSETDML_N_BUILD", None),
        n_final=args.n,
        dim_cap=args.dim_cap or _env_int("PSETDML_DIM_CAP", DEFAULT_DIM_CAP),
        recursion_cap=_env_int("PSETDML_RECURSION_CAP", DEFAULT_RECURSION_CAP),
        degree_cap=args.deg_cap or _env_int("PSETDML_DEG_CAP", None),
        paper_literal=args.paper_literal,
        seed=args.seed,
        verify=verify,
    )


# -- commands -----------------------------------------------------------------

def cmd_compile(args) -> int:
    e = _expr(args)
    opts = _options(args)
    try:
        inst, trace = compile_expr(e, opts)
    except ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        if args.trace and exc.trace is not None:
            _write_text(args.trace, dumps(exc.trace))
        return EXIT_CONSTRUCTION
    _write_text(args.out, instance_to_json(inst))
    if args.trace:
        _write_text(args.trace, dumps(trace))
    out = sys.stderr if args.out in (None, "-") else sys.stdout
    st = instance_stats(inst)
    print(f"field F_{trace['field']['p']}^{trace['field']['e']}  dim {st['dim']}  "
          f"atoms {st['atoms']}  equations {st['equations']}  "
          f"max degree {st['max_equation_degree']}  trace depth {st['trace_depth']}", file=out)
    v = trace.get("verified")
    if v:
        print(f"verified against the oracle on [0, {v['n']}]: {v['verdict']}", file=out)
    return EXIT_OK


def cmd_verify(args) -> int:
    e = _expr(args)
    inst = instance_from_json(_read_text(args.instance))
    rep = verify_instance(inst, e, args.n, degree_cap=args.deg_cap or _env_int("PSETDML_DEG_CAP", None),
                          all_witnesses=args.all_witnesses)
    if args.report:
        _write_text(args.report, rep.to_json())
    print(f"{rep.verdict} on [0, {args.n}]  ({rep.witness_count} witnesses)")
    for w in rep.witnesses:
        print(f"  n={w['n']}  expected {'in' if w['expected'] else 'out'}  "
              f"got {'in' if w['got'] else 'out'}")
    if rep.verdict == "error":
        print(f"error: {rep.error}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    return EXIT_OK if rep.ok else EXIT_MISMATCH


def cmd_oracle(args) -> int:
    vals = enumerate_set(_expr(args), args.n)
    if args.json:
        print(json.dumps(vals))
    else:
        print(" ".join(map(str, vals)))
    return EXIT_OK


def cmd_explain(args) -> int:
    if args.trace_file is not None:
        try:
            trace = json.loads(_read_text(args.trace_file))
        except json.JSONDecodeError as exc:
            raise InputError(f"trace is not JSON: {exc}") from None
    else:
        try:
            trace = plan(_expr(args), _options(args, verify=False))
        except ConstructionError as exc:
            print(f"construction failed: {exc}", file=sys.stderr)
            return EXIT_CONSTRUCTION
    sys.stdout.write(explain_trace(trace, max_depth=args.depth))
    return EXIT_OK


# -- explain ------------------------------------------------------------------

def _fmt_coeffs(cs) -> str:
    return ",".join(map(str, cs))


def describe(node: dict) -> str:
    s = node["step"]
    if s == "AP":
        return f"T_{{{node['a']},{node['b']}}} = {{{node['a']} + {node['b']}n}}"
    if s == "Union":
        return "union of the children (product system)"
    if s == "Intersect":
        return "intersection of the children (product system)"
    if s == "ScaleUp":
        return f"{node['m']}*S: {node['m']} cyclic blocks, cut by T_{{0,{node['m']}}}"
    if s == "DivideBy":
        return f"S/{node['m']}: replace Phi by Phi^{node['m']}"
    if s == "ShiftUp":
        how = "doubling" if node.get("literal") else "delay line"
        return f"{node['m']}+S via {how}"
    if s == "Normalize":
        return (f"{node['expr']} = (1/{node['scale']})*({node['shift']} + core)"
                + (" (constant term only)" if node.get("degenerate") else ""))
    if s == "Uniformize":
        return (f"uniformize to base {node['base']}, k := k_1...k_m"
                f"{' (product)' if node.get('literal') else ' (lcm)'}: "
                f"{len(node['terms'])} term(s)")
    if s == "PSet":
        return f"B({node['q']};{_fmt_coeffs(node['coeffs'])};1..1)"
    if s == "M1Split":
        q, c = node["q"], node["c"]
        return f"B({q};{c};1) = {c}*B({q * q};1;1) U {q * c}*B({q * q};1;1)"
    if s == "M1Scale":
        d = node.get("factor", 1)
        return f"B({node['q']};{node['c']};1) = {node['c'] // d}*B({node['q']};{d};1) (shortcut)"
    if s == "UniformSplit":
        return (f"choose k={node['k']}, base q^k={node['base']}; "
                f"{node['k']}^{node['m']} subterms over i in [0,{node['k'] - 1}]^{node['m']}")
    if s == "Subterm":
        return (f"i={tuple(node['i'])}: coefficients {_fmt_coeffs(node['coeffs'])}, "
                f"factor q^{node['i_min']}")
    if s == "GapShift":
        return (f"gap shift r={node['r']}, gaps {node['gaps']} (max gap >= k/m), "
                f"divide by q^{node['shift_exponent']}")
    if s == "Peel":
        return (f"peel position {node['position']}: B({node['base']};"
                f"{_fmt_coeffs(node['before'])}) -> B({node['base']};{_fmt_coeffs(node['after'])})")
    if s == "BaseGadget":
        return (f"base gadget B({node['q']};{_fmt_coeffs(node['coeffs'])};1..1), "
                f"dim {node['dim']}, certified on [0,{node.get('certified_n')}]")
    if s == "GadgetSplit":
        return f"gadget base enlargement B({node['q']};{_fmt_coeffs(node['coeffs'])}) over q^2"
    return s


def explain_trace(trace: dict, max_depth: int | None = None) -> str:
    if not isinstance(trace, dict):
        raise InputError("trace must be a JSON object")
    root = trace.get("root", trace) if trace.get("schema") == TRACE_SCHEMA else trace
    if "step" not in root:
        raise InputError("trace has no root step")
    lines = []
    if "expr" in trace:
        f = trace.get("field", {})
        lines.append(f"expression {trace['expr']}  field F_{f.get('p')}^{f.get('e')}  "
                     f"dim {trace.get('dim')}")

    def walk(node, depth):
        if not isinstance(node, dict) or "step" not in node:
            raise InputError("malformed trace node")
        if max_depth is not None and depth > max_depth:
            return
        lemma = f"[{node['lemma']}] " if node.get("lemma") else ""
        try:
            text = describe(node)
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed {node['step']} node: missing {exc}") from None
        lines.append(f"{'  ' * depth}{node['step']} {lemma}{text}  (dim {node.get('dim')})")
        for c in node.get("children", ()):
            walk(c, depth + 1)

    walk(root, 0)
    return "\n".join(lines) + "\n"


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="psetdml", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add_set(p):
        p.add_argument("--set", help="set expression, e.g. 'B(3;1,1;1,1) U AP(0,5)'")
        p.add_argument("--set-file", help="file holding the set expression")

    def add_caps(p):
        p.add_argument("--n-build", type=_nonneg, help="gadget certification bound")
        p.add_argument("--dim-cap", type=_positive, help="maximum instance dimension")
        p.add_argument("--deg-cap", type=_positive, help="maximum orbit coordinate degree")
        p.add_argument("--paper-literal", action="store_true",
                       help="use the paper-verbatim shift and uniformization")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("compile", help="compile a set expression to an instance")
    add_set(p)
    add_caps(p)
    p.add_argument("--out", help="instance JSON path (default stdout)")
    p.add_argument("--trace", help="trace JSON path")
    p.add_argument("--n", type=_nonneg, default=DEFAULT_N_FINAL,
                   help="verify against the oracle on [0, N] (default %(default)s)")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify", help="compare an instance with a set expression")
    p.add_argument("instance", help="instance JSON file")
    add_set(p)
    p.add_argument("--n", type=_nonneg, default=DEFAULT_N_FINAL)
    p.add_argument("--deg-cap", type=_positive)
    p.add_argument("--report", help="report JSON path")
    p.add_argument("--all-witnesses", action="store_true",
                   help="list every witness instead of the first 32")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="enumerate a set expression on [0, N]")
    add_set(p)
    p.add_argument("--n", type=_nonneg, default=100)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("explain", help="render a compile trace")
    p.add_argument("trace_file", nargs="?", help="trace JSON file (or plan from --set)")
    add_set(p)
    add_caps(p)
    p.add_argument("--depth", type=_nonneg, help="maximum nesting depth shown")
    p.set_defaults(func=cmd_explain, n=DEFAULT_N_FINAL)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (SetParseError, InstanceFormatError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegreeCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION


if __name__ == "__main__":
    sys.exit(main())
