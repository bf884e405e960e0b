"""Command line: exact checks over documents, with byte-stable reports.

Eight verbs cover the pipeline end to end: validate an algebra document,
test a cochain against the cocycle equations, compute HH^2 with
representatives, build the square-zero extension, build and verify the
two-generator module with its quasi-inverse identities, fuzz a gluing
datum, verify that the categorical class of a deformation equals its
defining class on a chosen object, and certify an octahedron.

Every run can emit a report document (--report); reports depend only on
the inputs, the seed, and the tool version, never on the clock, so reruns
are byte-identical and safe to golden-file.  Exit status: 0 when every
check passes, 1 when some check fails, 2 on unreadable or ill-typed input
and on window problems.
"""

import argparse
import json
import sys

from . import __version__
from .ainfinity import REDUCED_EQUATIONS, adjunction_check, identity_holds
from .deform import Deformation, check_cdg, four_term_exactness
from .dgcore import CdgModule, Gen, ModuleMap, shift_map, shift_module
from .documents import (algebra_from_document, algebra_to_document,
                        canonical_bytes, check_entry, cochain_from_document,
                        cochain_to_document, digest_file, elem_to_json,
                        field_spec, bimodule_from_document, make_report,
                        map_to_json, maps_from_document,
                        twisted_from_document, window_from_spec, window_spec)
from .errors import (MaurerCartanViolation, NotFiniteDimensional,
                     TypeMismatch, VerificationFailed, WindowIncomplete)
from .gluing import GluedObject, glued_cone, random_glued
from .hochschild import (component_residuals, hh_dim, hh_representatives,
                         is_cocycle)
from .twist import TwistedComplex, random_twisted
from .yoneda import deformation_iota, octahedron_check, verify_class_theorem

INPUT_ERRORS = (OSError, json.JSONDecodeError, KeyError, ValueError,
                TypeError, TypeMismatch, WindowIncomplete,
                NotFiniteDimensional, MaurerCartanViolation,
                VerificationFailed)


def _load_json(path):
    with open(path, "r", encoding="ascii") as fh:
        return json.load(fh)


def _load_algebra(path, args):
    algebra, window = algebra_from_document(_load_json(path))
    if args.field is not None and args.field != field_spec(algebra.field):
        raise ValueError("--field %s does not match the document's field %s"
                         % (args.field, field_spec(algebra.field)))
    if args.window is not None:
        window = window_from_spec(args.window)
    return algebra, window


def _basis_tuples(algebra, n):
    labs = sorted(algebra.labels)
    if n == 0:
        return [()]
    out = [()]
    for _ in range(n):
        out = [t + (l,) for t in out for l in labs]
    return out


def _random_t_module(algebra, rng):
    n = rng.randrange(1, 4)
    gens = [Gen("e%d" % i, rng.randrange(-2, 3),
                rng.choice(["full", "quot"])) for i in range(n)]
    return CdgModule(algebra, gens, {}, check=False)


# --- subcommand bodies: each returns (checks, window or None) ---

def cmd_check_algebra(args):
    algebra, window = _load_algebra(args.algebra, args)
    bad = algebra.check()
    checks = [check_entry("algebra axioms", not bad,
                          witness=bad[:5] if bad else None)]
    if args.cdg:
        checks.append(check_entry(
            "curvature is closed",
            not algebra.curvature or not algebra.d(algebra.curvature)))
    else:
        checks.append(check_entry("algebra is uncurved",
                                  not algebra.curvature,
                                  witness=None if not algebra.curvature else
                                  elem_to_json(algebra.field,
                                               algebra.curvature)))
    return checks, window


def cmd_cocycle_check(args):
    algebra, window = _load_algebra(args.algebra, args)
    mu = cochain_from_document(algebra, _load_json(args.cocycle))
    res = component_residuals(mu)
    witness = None
    if res:
        arity = sorted(res)[0]
        labs, e = sorted(res[arity].items())[0]
        witness = {"arity": arity, "labels": list(labs),
                   "residual": elem_to_json(algebra.field, e)}
    checks = [check_entry("component equations", not res, witness=witness),
              check_entry("suspension differential vanishes", is_cocycle(mu))]
    ext_ok = check_cdg(Deformation(algebra, mu).algebra) == []
    checks.append(check_entry("square-zero extension satisfies cdg axioms",
                              ext_ok))
    checks.append(check_entry("cocycle condition matches extension axioms",
                              (not res) == ext_ok == is_cocycle(mu)))
    return checks, window


def cmd_hh2(args):
    algebra, window = _load_algebra(args.algebra, args)
    cap = args.max_arity
    dim = hh_dim(algebra, 2, cap)
    reps = hh_representatives(algebra, 2, cap)
    print("dim HH^2 = %d" % dim)
    for r in reps:
        print("representative: %s" % json.dumps(
            cochain_to_document(r)["components"], sort_keys=True))
    checks = [check_entry("dim HH^2 equals the number of representatives",
                          dim == len(reps),
                          witness={"dim": dim,
                                   "representatives":
                                   [cochain_to_document(r)["components"]
                                    for r in reps]})]
    return checks, window


def cmd_deform(args):
    algebra, window = _load_algebra(args.algebra, args)
    mu = cochain_from_document(algebra, _load_json(args.cocycle))
    dfm = Deformation(algebra, mu)
    bad = check_cdg(dfm.algebra)
    checks = [check_entry("extension satisfies the cdg axioms", not bad,
                          witness=bad[:5] if bad else None)]
    data = canonical_bytes(algebra_to_document(dfm.algebra, window))
    with open(args.out, "wb") as fh:
        fh.write(data)
    return checks, window


def cmd_gamma(args):
    algebra, window = _load_algebra(args.algebra, args)
    mu = cochain_from_document(algebra, _load_json(args.cocycle))
    dfm = Deformation(algebra, mu)
    gam = dfm.gamma()
    checks = [check_entry("two-generator module satisfies the cdg axioms",
                          gam.check_axioms() == [])]
    if not args.verify:
        return checks, window
    first_bad = None
    count = 0
    for n in range(5):
        for labs in _basis_tuples(algebra, n):
            argsv = [{(l, 0): algebra.field.one()} for l in labs]
            count += 1
            if not identity_holds(dfm, n, argsv):
                first_bad = {"identity": n, "labels": list(labs),
                             "equation": REDUCED_EQUATIONS[n]}
                break
        if first_bad:
            break
    checks.append(check_entry(
        "quasi-inverse morphism identities on basis tuples",
        first_bad is None,
        witness=first_bad or {"tuples": count}))
    proj_ok = all(
        dfm.projection(dfm.g1({(l, 0): algebra.field.one()}))
        == {(l, 0): algebra.field.one()} for l in sorted(algebra.labels))
    checks.append(check_entry("projection retracts the linear component",
                              proj_ok))
    rng = _rng(args.seed)
    bad = []
    for _ in range(25):
        M = _random_t_module(dfm.algebra, rng)
        bad = four_term_exactness(M, window)
        if bad:
            break
    checks.append(check_entry("four-term torsion sequence exact on "
                              "random free modules", not bad,
                              witness=bad[:3] if bad else {"samples": 25}))
    pairs = [(TwistedComplex(algebra, [0]), gam)]
    if not dfm.algebra.curvature:
        free = CdgModule(dfm.algebra, [Gen("e", 0, "full")], {})
        pairs.append((TwistedComplex(algebra, [0]), free))
    pairs.append((random_twisted(algebra, rng, steps=2), gam))
    bad = []
    for x, N in pairs:
        bad = adjunction_check(dfm, x, N, window)
        if bad:
            break
    checks.append(check_entry("hom adjunction between the extension and "
                              "the base", not bad,
                              witness=bad[:3] if bad else
                              {"pairs": len(pairs)}))
    return checks, window


def cmd_glue(args):
    source, window = _load_algebra(args.source, args)
    target, twindow = _load_algebra(args.target, args)
    bim = bimodule_from_document(source, target, _load_json(args.bimodule))
    checks = [check_entry("bimodule action laws", bim.check() == [])]
    rng = _rng(args.seed)
    fuzz = args.fuzz
    bad = None
    for k in range(fuzz):
        X = random_glued(bim, rng)
        into, onto, connect = X.canonical_triangle()
        h_mid, h_out = X.triangle_homotopies()
        alpha, beta, gamma = X.corner_triangle()
        h_ba, h_gb = X.corner_homotopies()
        c1 = connect.compose(onto)
        d1 = h_mid.delta()
        c2 = into.shift(1).compose(connect)
        d2 = h_out.delta()
        conditions = [
            into.is_closed(), onto.is_closed(), connect.is_closed(),
            onto.compose(into).is_zero(),
            (c1.f1, c1.f2, c1.g) == (d1.f1, d1.f2, d1.g),
            (c2.f1, c2.f2, c2.g) == (d2.f1, d2.f2, d2.g),
            beta.compose(alpha) == h_ba.delta(),
            gamma.compose(beta) == h_gb.delta(),
            shift_map(alpha, 1).compose(gamma).is_zero(),
            glued_cone(connect.shift(-1)).same_as(X),
        ]
        if not all(conditions):
            bad = {"sample": k,
                   "conditions": [i for i, ok in enumerate(conditions)
                                  if not ok]}
            break
    checks.append(check_entry("recollement identities on random glued "
                              "objects", bad is None,
                              witness=bad or {"samples": fuzz}))
    ex = GluedObject.from_x(bim, random_twisted(bim.target, rng))
    ey = GluedObject.from_y(bim, random_twisted(bim.source, rng))
    checks.append(check_entry(
        "embedded corners are the expected modules",
        ex.corner().same_shape(ex.x.totalize())
        and ey.corner().same_shape(shift_module(bim.realize(ey.y), -1))))
    return checks, window


def cmd_verify_class(args):
    algebra, window = _load_algebra(args.algebra, args)
    mu = cochain_from_document(algebra, _load_json(args.cocycle))
    dfm = Deformation(algebra, mu)
    x = twisted_from_document(algebra, _load_json(args.object))
    verdict = verify_class_theorem(dfm, x, window)
    cert = {"status": verdict.status,
            "homotopy": None if verdict.homotopy is None
            else map_to_json(verdict.homotopy)}
    checks = [check_entry("categorical class equals the defining class",
                          verdict.passed, witness=verdict.status,
                          certificate=cert)]
    from .ainfinity import extend_object
    from .deform import iota
    E = extend_object(dfm, x)
    checks.append(check_entry("snake connecting map equals the closed form",
                              deformation_iota(E) == iota(E)))
    return checks, window


def cmd_octahedron(args):
    algebra, window, cxs, fe, ge = maps_from_document(_load_json(args.maps))
    if args.field is not None and args.field != field_spec(algebra.field):
        raise ValueError("--field %s does not match the document's field %s"
                         % (args.field, field_spec(algebra.field)))
    if args.window is not None:
        window = window_from_spec(args.window)
    tx = cxs["X"].totalize()
    ty = cxs["Y"].totalize()
    tz = cxs["Z"].totalize()
    f = ModuleMap(tx, ty, 0, fe)
    g = ModuleMap(ty, tz, 0, ge)
    wit = octahedron_check(f, g)
    checks = [check_entry("octahedron face: %s" % name, ok)
              for name, ok in sorted(wit.faces.items())]
    cert = {"u": map_to_json(wit.u), "v": map_to_json(wit.v),
            "w": map_to_json(wit.w), "h_vu": map_to_json(wit.h_vu),
            "h_wv": map_to_json(wit.h_wv), "h_uw": map_to_json(wit.h_uw)}
    checks.append(check_entry("octahedron", wit.passed, certificate=cert))
    return checks, window


def _rng(seed):
    import random
    return random.Random(seed)


def build_parser():
    p = argparse.ArgumentParser(
        prog="curvedhom",
        description="Exact checks for first-order curved deformations: "
                    "cocycles, the two-generator module, torsion functors, "
                    "gluing, and extension classes.")
    p.add_argument("--field", help="field spec (a prime, or Q) that every "
                                   "input document must declare")
    p.add_argument("--window", help="degree window lo:hi overriding the "
                                    "algebra document header")
    p.add_argument("--report", help="write the canonical JSON run report "
                                    "to this path")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for fuzzed checks (default 0)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-algebra", help="validate an algebra document")
    s.add_argument("algebra")
    s.add_argument("--cdg", action="store_true",
                   help="accept curvature and check the curved axioms")
    s.set_defaults(run=cmd_check_algebra, inputs=["algebra"])

    s = sub.add_parser("cocycle-check",
                       help="test a degree-2 cochain against the cocycle "
                            "equations and the extension axioms")
    s.add_argument("algebra")
    s.add_argument("cocycle")
    s.set_defaults(run=cmd_cocycle_check, inputs=["algebra", "cocycle"])

    s = sub.add_parser("hh2", help="dimension of HH^2 with deterministic "
                                   "representatives")
    s.add_argument("algebra")
    s.add_argument("--max-arity", type=int, default=None,
                   help="cochain arity cap (required for periodic algebras)")
    s.set_defaults(run=cmd_hh2, inputs=["algebra"])

    s = sub.add_parser("deform", help="write the square-zero extension "
                                      "algebra as a document")
    s.add_argument("algebra")
    s.add_argument("cocycle")
    s.add_argument("-o", "--out", required=True)
    s.set_defaults(run=cmd_deform, inputs=["algebra", "cocycle"])

    s = sub.add_parser("gamma", help="build the two-generator module; "
                                     "--verify runs the identity, "
                                     "exactness, and adjunction checks")
    s.add_argument("algebra")
    s.add_argument("cocycle")
    s.add_argument("--verify", action="store_true")
    s.set_defaults(run=cmd_gamma, inputs=["algebra", "cocycle"])

    s = sub.add_parser("glue", help="fuzz the recollement identities of a "
                                    "gluing bimodule")
    s.add_argument("source", help="algebra acting on the left")
    s.add_argument("target", help="algebra the bimodule is free over")
    s.add_argument("bimodule")
    s.add_argument("--fuzz", type=int, default=25)
    s.set_defaults(run=cmd_glue, inputs=["source", "target", "bimodule"])

    s = sub.add_parser("verify-class",
                       help="certify that the deformation's class on an "
                            "object equals the defining class")
    s.add_argument("algebra")
    s.add_argument("cocycle")
    s.add_argument("--object", required=True, dest="object",
                   help="twisted-complex document")
    s.set_defaults(run=cmd_verify_class,
                   inputs=["algebra", "cocycle", "object"])

    s = sub.add_parser("octahedron",
                       help="certify the octahedron of a composable pair "
                            "from a maps document")
    s.add_argument("maps")
    s.set_defaults(run=cmd_octahedron, inputs=["maps"])
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        checks, window = args.run(args)
        inputs = {role: {"file": getattr(args, role),
                         "sha256": digest_file(getattr(args, role))}
                  for role in args.inputs}
    except INPUT_ERRORS as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    outputs = None
    if getattr(args, "out", None):
        outputs = {"out": {"file": args.out, "sha256": digest_file(args.out)}}
    field = args.field
    if field is None:
        for role in args.inputs:
            try:
                doc = _load_json(getattr(args, role))
            except INPUT_ERRORS:
                continue
            spec = doc.get("field") or doc.get("algebra", {}).get("field")
            if spec:
                field = spec
                break
    report = make_report(__version__, args.command, field, window,
                         args.seed, inputs, checks, outputs=outputs)
    for c in checks:
        line = "%s %s" % (c["verdict"].upper(), c["name"])
        if c["verdict"] == "fail" and "witness" in c:
            line += "  -- %s" % json.dumps(c["witness"], sort_keys=True)
        print(line)
    if args.report:
        with open(args.report, "wb") as fh:
            fh.write(canonical_bytes(report))
        print("report: %s" % args.report)
    return 0 if all(c["verdict"] == "pass" for c in checks) else 1


if __name__ == "__main__":
    sys.exit(main())
