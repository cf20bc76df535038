"""Truncations of the Rickard idempotent module over k[t_1..t_r]/(t_i^p) and
stable-category computations around them."""

from .algebra import (
    Algebra,
    Module,
    PiPoint,
    Splitting,
    direct_sum,
    dual,
    kh_regular,
    regular_module,
    split_along,
    standard_splitting,
    tensor_module,
    trivial_module,
    u_module,
)
from .fingen import annihilator, cone_of, extract_generators, hom_truncation, verify_realize
from .gamma import EndElement, GammaRing, gamma_ring
from .idempotent import DegreeCalculus, IdempotentTruncation, RangeError, build_E
from .stable import omega, omega_inverse, restrict, stable_hom_dim
from .varieties import rank_variety

__version__ = "0.1.0"
