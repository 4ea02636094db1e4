"""Constructive machinery for quaternionic lattices in O(5,1):
exact quaternion arithmetic, skew-hermitian forms, hyperboloid-model
geometry, bisector constants, quadrilateral-of-groups certificates,
and Stallings-folding noncoherence witnesses."""

from . import (bisectors, cli, combine, freegrp, hermitian, lorentz,
               minkowski, numbers, quaternions, squares)

__version__ = "0.1.0"

__all__ = ["bisectors", "cli", "combine", "freegrp", "hermitian",
           "lorentz", "minkowski", "numbers", "quaternions", "squares",
           "__version__"]
