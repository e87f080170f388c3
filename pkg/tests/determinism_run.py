"""Build every criterion 1-7 artifact and print sha256 digests of their JSON.

Run as a script in a fresh interpreter so that no in-process cache is shared
between the two runs being compared.
"""

import hashlib
import json
import sys

from psetdml.compiler import CompileOptions, base_gadget, compile_expr, scale_up
from psetdml.setlang import parse
from psetdml.torus import dumps, instance_to_json
from psetdml.verifier import hand_encoded_b3, verify_instance

COMPILED = [(f"AP({a},{b})", 200) for a in range(5) for b in range(5)] + [
    ("B(2;1;1)", 512), ("B(3;2;1)", 512), ("B(2;1,1;1,1)", 128), ("B(2;1,1;1,2)", 128),
    ("B(2;3/2,1/2;1,1)", 128), ("B(3;1,1;1,1) U AP(0,5)", 120), ("AP(0,2) & AP(0,3)", 120),
]


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def artifacts() -> dict:
    out = {}

    def record(name, inst, trace, e, N):
        rep = verify_instance(inst, e, N)
        out[name] = {"instance": digest(instance_to_json(inst)),
                     "trace": digest(dumps(trace)) if trace is not None else None,
                     "report": digest(rep.to_json(timing=False)), "verdict": rep.verdict}

    record("golden", hand_encoded_b3(), None, parse("B(3;1,1;1,1)"), 2000)
    for text, N in COMPILED:
        e = parse(text)
        inst, trace = compile_expr(e, CompileOptions(n_final=N))
        record(text, inst, trace, e, N)
    record("gadget(7,(1,2))", base_gadget(7, (1, 2)), None, parse("B(7;1,2;1,1)"), 686)
    record("gadget(5,(2))", base_gadget(5, (2,)), None, parse("B(5;2;1)"), 300)
    record("scaled(5,(1))", scale_up(base_gadget(5, (1,)), 2), None, parse("B(5;2;1)"), 300)
    return out


if __name__ == "__main__":
    json.dump(artifacts(), sys.stdout, sort_keys=True)
