"""Deliberately broken constructions the verifier must reject.

scale_no_cut
    scale_up without the intersection with m*N_0; 2*AP(2,3) then picks up
    odd exponents.
z_one
    the gadget's z coordinate is multiplied by 1 instead of t, so E_M = z can
    only hold where E_M = 1.
subfield_constant
    hyperplane-only gadget over F_4 with constant 1, which lies in F_2; the
    Frobenius identity (1+t)^2 = 1+t^2 lets n = 2 through although B(4;1;1)
    holds only powers of 4.
"""

from __future__ import annotations

from ..algebra import make_field
from ..compiler import build_ap, scale_up
from ..compiler.gadget import _normalize_relations, gadget_instance, make_spec, plan_gadget
from ..setlang import parse
from .report import VerificationReport, verify_instance

MUTATION_NAMES = ("scale_no_cut", "z_one", "subfield_constant")


def mutated_instance(name: str):
    """(instance, expression text, N) for a named mutation."""
    if name == "scale_no_cut":
        I = scale_up(build_ap(make_field(2, 1), 2, 3), 2, cut=False)
        return I, "2*AP(2,3)", 64
    if name == "z_one":
        spec = dict(plan_gadget(5, (1,)))
        spec["mutation"] = "z_one"
        return gadget_instance(_normalize_relations(spec), make_field(5, 1)), "B(5;1;1)", 250
    if name == "subfield_constant":
        spec = make_spec(4, (1,), [1], mutation="hyperplane_only")
        return gadget_instance(_normalize_relations(spec), make_field(2, 2)), "B(4;1;1)", 128
    raise ValueError(f"unknown mutation {name!r}; expected one of {MUTATION_NAMES}")


def run_mutation(name: str) -> VerificationReport:
    I, text, N = mutated_instance(name)
    return verify_instance(I, parse(text), N)
