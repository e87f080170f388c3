from .model import (DMLInstance, Equation, MonomialEndo, TorusError, Variety, const_rf,
                    endo_compose, endo_pow, form_var, instance_product, linear_equation, t_rf)
from .orbit import (DegreeCapExceeded, ExponentTracker, orbit_eval, orbit_iter, return_set,
                    return_set_exact, variety_member)
from .serialize import (SCHEMA as INSTANCE_SCHEMA, InstanceFormatError, dumps, format_equation,
                        instance_from_dict, instance_from_json, instance_to_dict,
                        instance_to_json, parse_equation)
from .stats import instance_stats

__all__ = [
    "DMLInstance", "DegreeCapExceeded", "Equation", "ExponentTracker", "INSTANCE_SCHEMA",
    "InstanceFormatError", "MonomialEndo", "TorusError", "Variety", "const_rf", "dumps",
    "endo_compose", "endo_pow", "format_equation", "form_var", "instance_from_dict",
    "instance_from_json", "instance_product", "instance_stats", "instance_to_dict",
    "instance_to_json", "linear_equation", "orbit_eval", "orbit_iter", "parse_equation",
    "return_set", "return_set_exact", "variety_member",
]
