from .oracle import enumerate_set, identity_check, member
from .parser import SetParseError, from_json, parse, render, to_json
from .terms import (APTerm, Intersect, NormalizedPSet, PSetTerm, Scale, SetExpr, Shift, Union,
                    normalize_pset, pset, uniformize)

__all__ = [
    "APTerm", "Intersect", "NormalizedPSet", "PSetTerm", "Scale", "SetExpr", "SetParseError",
    "Shift", "Union", "enumerate_set", "from_json", "identity_check", "member",
    "normalize_pset", "parse", "pset", "render", "to_json", "uniformize",
]
