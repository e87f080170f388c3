from .constructors import (ConstructionError, build_ap, divide_by, find_off_variety_point,
                           intersect, scale_up, shift_up, shift_up_literal, union)
from .gadget import (base_gadget, gadget_instance, plan_gadget, solve_gadget_lambda,
                     synthesize_relations)
from .plan import CompileOptions, build_from_trace, compile_expr, plan

__all__ = [
    "CompileOptions", "ConstructionError", "base_gadget", "build_ap", "build_from_trace",
    "compile_expr", "divide_by", "find_off_variety_point", "gadget_instance", "intersect",
    "plan", "plan_gadget", "scale_up", "shift_up", "shift_up_literal", "solve_gadget_lambda",
    "synthesize_relations", "union",
]
