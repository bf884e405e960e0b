"""Exceptions shared across the package."""


class WindowIncomplete(Exception):
    """A degreewise question needs data outside the materialized window."""


class ArityOverflow(Exception):
    """A multilinear component beyond the supported arity range was requested."""


class NotFiniteDimensional(Exception):
    """A construction needs a finite basis where none exists."""


class MaurerCartanViolation(Exception):
    """Twist data fails the Maurer-Cartan equation."""


class TypeMismatch(Exception):
    """Entries violate the coefficient typing forced by generator kinds."""


class VerificationFailed(Exception):
    """A structural law that should hold by construction failed a machine check."""
