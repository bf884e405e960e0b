"""Small exact algebras used across tests, demos and the CLI.

Every fixture is total in each degree without truncation: either the label
degrees are bounded, or unboundedness comes only from the invertible
central generator u, which multiplication handles by exponent arithmetic.
"""

from __future__ import annotations

from .dgcore import DgAlgebra
from .exactalg import GF

DEFAULT_FIELD = GF(5)


def dual_numbers(field=None):
    """k[x]/x^2 with x in degree 0 and zero differential."""
    F = field or DEFAULT_FIELD
    one = {("1", 0): F.one()}
    x = {("x", 0): F.one()}
    return DgAlgebra(F, {"1": 0, "x": 0},
                     {("1", "1"): one, ("1", "x"): x, ("x", "1"): x},
                     unit=one)


def ground_field(field=None):
    """k itself."""
    F = field or DEFAULT_FIELD
    one = {("1", 0): F.one()}
    return DgAlgebra(F, {"1": 0}, {("1", "1"): one}, unit=one)


def graded_field(field=None):
    """k[u, u^-1] with u central invertible of degree 2; the basis element
    in degree 2n is ("1", n)."""
    F = field or DEFAULT_FIELD
    one = {("1", 0): F.one()}
    return DgAlgebra(F, {"1": 0}, {("1", "1"): one}, unit=one, periodicity=2)


def koszul_pair(field=None):
    """k[x]/x^2 tensor an exterior generator y, with |x| = 2, |y| = 1 and
    d(y) = x.

    The one fixture with odd degrees and a nonzero differential; most sign
    conventions are exercised here and nowhere else.
    """
    F = field or DEFAULT_FIELD
    one = {("1", 0): F.one()}
    x = {("x", 0): F.one()}
    y = {("y", 0): F.one()}
    z = {("z", 0): F.one()}  # z = x*y
    mul = {
        ("1", "1"): one, ("1", "x"): x, ("x", "1"): x,
        ("1", "y"): y, ("y", "1"): y, ("1", "z"): z, ("z", "1"): z,
        ("x", "y"): z, ("y", "x"): z,
    }
    diff = {"y": x}
    return DgAlgebra(F, {"1": 0, "x": 2, "y": 1, "z": 3}, mul,
                     diff_table=diff, unit=one)


def bimodule_koszul(field=None):
    """Rank-two gluing datum over the Koszul pair: the action on
    A + A[1] with the sign twist on the shifted copy and the derivation
    y -> x in the corner.  The twist is forced: without it the left
    Leibniz rule fails on y."""
    from .gluing import Bimodule
    A = koszul_pair(field)
    F = A.field
    action = {}
    for label, deg in A.labels.items():
        sg = F.of(1 if deg % 2 == 0 else -1)
        action[label] = {(0, 0): {(label, 0): F.one()},
                         (1, 1): {(label, 0): sg}}
    action["y"][(0, 1)] = {("x", 0): F.one()}
    return Bimodule(A, A, [0, 1], action)


def bimodule_graded(field=None):
    """Rank-two gluing datum over the graded field: diagonal action with
    the periodicity element as internal differential.  This is the shifted
    t-torsion of the two-generator module for the pure-curvature class,
    alias the cone of u, with generators in degrees -1 and 0."""
    from .gluing import Bimodule
    A = graded_field(field)
    F = A.field
    one = {("1", 0): F.one()}
    return Bimodule(A, A, [-1, 0],
                    {"1": {(0, 0): one, (1, 1): one}},
                    diff={(0, 1): {("1", 1): F.one()}})


def bimodule_dual(field=None):
    """Rank-two gluing datum over the dual numbers: plain diagonal
    action, no internal differential, generators in degrees -1 and 0
    (the shifted t-torsion shape again; the defining class has no
    linear or curvature part, so the differential vanishes)."""
    from .gluing import Bimodule
    A = dual_numbers(field)
    F = A.field
    action = {label: {(0, 0): {(label, 0): F.one()},
                      (1, 1): {(label, 0): F.one()}}
              for label in A.labels}
    return Bimodule(A, A, [-1, 0], action)


def bimodule_augmentation(field=None):
    """Rank-one datum between different algebras: the dual numbers act on
    the Koszul pair through the augmentation killing x."""
    from .gluing import Bimodule
    B = dual_numbers(field)
    A = koszul_pair(field)
    return Bimodule(B, A, [0], {"1": {(0, 0): dict(A.unit)}})


def mu_dual(algebra):
    """Generator of HH^2 of the dual numbers: mu2(x, x) = 1."""
    from .hochschild import Cochain
    F = algebra.field
    return Cochain(algebra, 2, {2: {("x", "x"): {("1", 0): F.one()}}})


def mu_graded(algebra):
    """The degree-2 class of the graded field: mu0 = u."""
    from .hochschild import Cochain
    F = algebra.field
    return Cochain(algebra, 2, {0: {(): {("1", 1): F.one()}}})


def document_manifest():
    """Every fixture in its on-disk document form, keyed by filename.

    The fixtures/ directory is generated from this dict (write_documents)
    and a test asserts the shipped bytes match it, so the files can never
    drift from the builders above.
    """
    import random

    from .documents import (algebra_to_document, bimodule_to_document,
                            cochain_to_document, maps_to_document,
                            twisted_to_document)
    from .exactalg import Window
    from .gluing import random_closed_hom
    from .twist import TwistedComplex

    D = dual_numbers()
    G = graded_field()
    K = koszul_pair()
    k = ground_field()
    F = D.field
    x = {("x", 0): F.one()}

    X = TwistedComplex(D, [1, 0], {(1, 0): dict(x)})
    Y = TwistedComplex(D, [0])
    Z = TwistedComplex(D, [1, 0], {(1, 0): dict(x)})
    rng = random.Random(7)
    f = random_closed_hom(rng, X.totalize(), Y.totalize(), 0)
    g = random_closed_hom(rng, Y.totalize(), Z.totalize(), 0)

    return {
        "dualnum.json": algebra_to_document(D, Window(-3, 3)),
        "gradedfield.json": algebra_to_document(G, Window(-8, 8)),
        "koszul.json": algebra_to_document(K, Window(-6, 6)),
        "groundfield.json": algebra_to_document(k, Window(-3, 3)),
        "mu-gen.json": cochain_to_document(mu_dual(D)),
        "mu-u.json": cochain_to_document(mu_graded(G)),
        "freeA.json": twisted_to_document(TwistedComplex(D, [0])),
        "twostep.json": twisted_to_document(
            TwistedComplex(D, [1, 0], {(1, 0): dict(x)})),
        "threestep.json": twisted_to_document(
            TwistedComplex(D, [2, 1, 0],
                           {(1, 0): dict(x), (2, 1): dict(x)})),
        "glue-koszul.json": bimodule_to_document(bimodule_koszul()),
        "glue-augmentation.json":
            bimodule_to_document(bimodule_augmentation()),
        "maps-sample.json": maps_to_document(
            D, Window(-3, 3), {"X": X, "Y": Y, "Z": Z},
            f.entries, g.entries),
    }


def write_documents(directory):
    """Write the manifest as canonical JSON files; returns the paths."""
    import os

    from .documents import canonical_bytes

    os.makedirs(directory, exist_ok=True)
    paths = []
    for name, doc in sorted(document_manifest().items()):
        path = os.path.join(directory, name)
        with open(path, "wb") as fh:
            fh.write(canonical_bytes(doc))
        paths.append(path)
    return paths
