"""curvedhom: exact-arithmetic curved dg algebra.

First-order deformations of dg algebras along Hochschild 2-cocycles,
the distinguished resolution generator and its homological inverse,
twisted complexes, gluing of dg categories, and chain-level comparison
of deformation classes with their defining cocycles.
"""

from .exactalg import Field, GF, QQ, Matrix, Window, GradedVectorSpace
from .errors import (WindowIncomplete, ArityOverflow, NotFiniteDimensional,
                     MaurerCartanViolation, TypeMismatch, VerificationFailed)
from .gluing import Bimodule, GluedMorphism, GluedObject, glued_cone

__version__ = "0.1.0"
