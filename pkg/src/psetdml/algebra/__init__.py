from .field import FieldElement, FieldError, FieldSpec, factorize, is_prime, make_field, prime_power
from .linalg import LinAlgError, SingularMatrixError, inverse, nullspace, rref, solve
from .poly import SparsePoly, linear_combination, naive_pow, poly_gcd, poly_pow
from .rational import RationalFunc
from .textform import (TextFormError, format_element, format_poly, format_rational,
                       parse_element, parse_poly, parse_rational)

__all__ = [
    "FieldElement", "FieldError", "FieldSpec", "LinAlgError", "RationalFunc",
    "SingularMatrixError", "SparsePoly", "TextFormError", "factorize", "format_element",
    "format_poly", "format_rational", "inverse", "linear_combination", "is_prime", "make_field", "naive_pow",
    "nullspace", "parse_element", "parse_poly", "parse_rational", "poly_gcd", "poly_pow",
    "prime_power", "rref", "solve",
]
