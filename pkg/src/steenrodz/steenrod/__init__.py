from .adem import AlgebraElement, adem_reduce, admissible_basis, antipode, milnor_primitive, multiply
from .dual import (
    DualElement,
    conjugate_generator,
    coproduct,
    dual_quotient_basis,
    right_total_sq,
)
from .milnor import milnor_basis, milnor_product
from .profile import Profile

__all__ = [
    "AlgebraElement",
    "DualElement",
    "Profile",
    "adem_reduce",
    "admissible_basis",
    "antipode",
    "conjugate_generator",
    "coproduct",
    "dual_quotient_basis",
    "milnor_basis",
    "milnor_primitive",
    "milnor_product",
    "multiply",
    "right_total_sq",
]
