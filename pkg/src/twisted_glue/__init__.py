"""Finite-field point counts and homology checks for glued Springer fibers of GL_n."""

from .nilpotent import JordanType, jm_data, partitions, w_prime
from .polynomial import CountPolynomial, interpolate_count_polynomial
from .posets import FinitePoset, par_prime_poset, tw_poset, twtr_poset
from .root_weyl import Parabolic, WeylPerm, bruhat_leq, enumerate_weyl

__version__ = "0.1.0"

__all__ = [
    "CountPolynomial",
    "FinitePoset",
    "JordanType",
    "Parabolic",
    "WeylPerm",
    "__version__",
    "bruhat_leq",
    "enumerate_weyl",
    "interpolate_count_polynomial",
    "jm_data",
    "par_prime_poset",
    "partitions",
    "tw_poset",
    "twtr_poset",
    "w_prime",
]
