"""Canonical JSON documents and byte-stable run reports.

Every object the command line reads or writes lives here as a pair of
functions: X_to_document builds a plain dict of strings and integers, and
X_from_document rebuilds the object, validating against the field spec in
the document header.  Writers normalize aggressively (sorted keys, zero
entries dropped, coefficients printed through the field) so that the same
mathematical content always produces the same bytes; the determinism
acceptance check pins this down by hashing.

Elements {(label, exp): coeff} are stored as {"label": "coeff"} with a
"label@exp" key when the periodicity exponent is nonzero.  Coefficients go
through Field.parse, so "2/3" means the exact rational over Q and the
modular inverse over GF(p).
"""

import hashlib
import json

from .dgcore import DgAlgebra
from .exactalg import Field, Window
from .gluing import Bimodule
from .hochschild import Cochain
from .twist import TwistedComplex

FORMAT_VERSION = 1


# --- field and window headers ---

def field_spec(field):
    return "Q" if field.p is None else str(field.p)


def field_from_spec(spec):
    spec = str(spec).strip()
    if spec in ("Q", "QQ", "0"):
        return Field(None)
    return Field(int(spec))


def window_spec(window):
    return [window.lo, window.hi]


def window_from_spec(spec):
    if isinstance(spec, str):
        lo, hi = spec.split(":")
        return Window(int(lo), int(hi))
    lo, hi = spec
    return Window(int(lo), int(hi))


# --- elements ---

def elem_to_json(field, e):
    out = {}
    for (label, exp), c in e.items():
        if "@" in label:
            raise ValueError("label %r cannot be serialized" % label)
        key = label if exp == 0 else "%s@%d" % (label, exp)
        out[key] = field.show(c)
    return out


def elem_from_json(field, obj):
    out = {}
    for key, c in obj.items():
        if "@" in key:
            label, exp = key.rsplit("@", 1)
            exp = int(exp)
        else:
            label, exp = key, 0
        out[(label, exp)] = field.parse(c)
    return out


def _pair_key(i, j):
    return "%d,%d" % (i, j)


def _pair_from_key(key):
    i, j = key.split(",")
    return int(i), int(j)


def _entries_to_json(field, entries):
    return {_pair_key(i, j): elem_to_json(field, e)
            for (i, j), e in entries.items() if e}


def _entries_from_json(field, obj):
    return {_pair_from_key(k): elem_from_json(field, e)
            for k, e in obj.items()}


# --- algebra presentation ---

def algebra_to_document(algebra, window):
    F = algebra.field
    doc = {
        "format": "algebra",
        "version": FORMAT_VERSION,
        "field": field_spec(F),
        "window": window_spec(window),
        "labels": {l: d for l, d in algebra.labels.items()},
        "unit": elem_to_json(F, algebra.unit),
        "mul": {"%s %s" % pair: elem_to_json(F, prod)
                for pair, prod in algebra.mul_table.items() if prod},
        "diff": {l: elem_to_json(F, dl)
                 for l, dl in algebra.diff_table.items() if dl},
        "curvature": elem_to_json(F, algebra.curvature),
        "periodicity": algebra.periodicity,
        "base": (None if algebra.base is None
                 else algebra_to_document(algebra.base, window)),
    }
    return doc


def algebra_from_document(doc):
    """Returns (algebra, window)."""
    if doc.get("format") != "algebra":
        raise ValueError("not an algebra document")
    F = field_from_spec(doc["field"])
    window = window_from_spec(doc["window"])
    base = None
    if doc.get("base"):
        base, _ = algebra_from_document(doc["base"])
    mul = {}
    for key, prod in doc.get("mul", {}).items():
        l1, l2 = key.split(" ")
        mul[(l1, l2)] = elem_from_json(F, prod)
    algebra = DgAlgebra(
        F,
        {l: int(d) for l, d in doc["labels"].items()},
        mul,
        diff_table={l: elem_from_json(F, dl)
                    for l, dl in doc.get("diff", {}).items()},
        unit=elem_from_json(F, doc["unit"]),
        periodicity=doc.get("periodicity"),
        curvature=elem_from_json(F, doc.get("curvature", {})),
        base=base,
    )
    return algebra, window


# --- cochains ---

def cochain_to_document(mu):
    F = mu.algebra.field
    comps = {}
    for arity in mu.arities():
        table = {}
        for labs, e in mu.table(arity).items():
            table[" ".join(labs)] = elem_to_json(F, e)
        comps[str(arity)] = table
    return {
        "format": "cochain",
        "version": FORMAT_VERSION,
        "field": field_spec(F),
        "total": mu.total,
        "components": comps,
    }


def cochain_from_document(algebra, doc):
    if doc.get("format") != "cochain":
        raise ValueError("not a cochain document")
    if doc["field"] != field_spec(algebra.field):
        raise ValueError("cochain field %r does not match the algebra"
                         % doc["field"])
    F = algebra.field
    comps = {}
    for arity, table in doc.get("components", {}).items():
        k = int(arity)
        comps[k] = {tuple(labs.split(" ")) if labs else ():
                    elem_from_json(F, e) for labs, e in table.items()}
    return Cochain(algebra, int(doc["total"]), comps)


# --- twisted complexes ---

def twisted_to_document(x):
    F = x.algebra.field
    return {
        "format": "twisted",
        "version": FORMAT_VERSION,
        "field": field_spec(F),
        "shifts": list(x.shifts),
        "twists": _entries_to_json(F, x.twists),
    }


def twisted_from_document(algebra, doc):
    if doc.get("format") != "twisted":
        raise ValueError("not a twisted-complex document")
    if doc["field"] != field_spec(algebra.field):
        raise ValueError("twisted-complex field %r does not match the algebra"
                         % doc["field"])
    return TwistedComplex(algebra, [int(n) for n in doc["shifts"]],
                          _entries_from_json(algebra.field,
                                             doc.get("twists", {})))


# --- gluing bimodules ---

def bimodule_to_document(bim):
    F = bim.target.field
    return {
        "format": "bimodule",
        "version": FORMAT_VERSION,
        "field": field_spec(F),
        "degrees": list(bim.degrees),
        "diff": _entries_to_json(F, bim.diff),
        "action": {label: _entries_to_json(F, mat)
                   for label, mat in bim.action.items() if mat},
    }


def bimodule_from_document(source, target, doc):
    if doc.get("format") != "bimodule":
        raise ValueError("not a bimodule document")
    if doc["field"] != field_spec(target.field):
        raise ValueError("bimodule field %r does not match the algebras"
                         % doc["field"])
    F = target.field
    return Bimodule(source, target, [int(d) for d in doc["degrees"]],
                    {label: _entries_from_json(F, mat)
                     for label, mat in doc.get("action", {}).items()},
                    diff=_entries_from_json(F, doc.get("diff", {})))


# --- composable-pair documents (octahedron input) ---

def maps_to_document(algebra, window, complexes, f_entries, g_entries):
    F = algebra.field
    return {
        "format": "maps",
        "version": FORMAT_VERSION,
        "algebra": algebra_to_document(algebra, window),
        "complexes": {name: twisted_to_document(x)
                      for name, x in complexes.items()},
        "f": _entries_to_json(F, f_entries),
        "g": _entries_to_json(F, g_entries),
    }


def maps_from_document(doc):
    """Returns (algebra, window, {name: TwistedComplex}, f_entries,
    g_entries) for a composable pair X -f-> Y -g-> Z."""
    if doc.get("format") != "maps":
        raise ValueError("not a maps document")
    algebra, window = algebra_from_document(doc["algebra"])
    complexes = {name: twisted_from_document(algebra, sub)
                 for name, sub in doc["complexes"].items()}
    for name in ("X", "Y", "Z"):
        if name not in complexes:
            raise ValueError("maps document needs complexes X, Y, Z")
    F = algebra.field
    return (algebra, window, complexes,
            _entries_from_json(F, doc.get("f", {})),
            _entries_from_json(F, doc.get("g", {})))


# --- module maps as certificates ---

def map_to_json(m):
    F = m.target.algebra.field
    return {
        "degree": m.degree,
        "entries": _entries_to_json(F, m.entries),
    }


# --- canonical bytes, digests, reports ---

def canonical_bytes(doc):
    return (json.dumps(doc, sort_keys=True, indent=2,
                       ensure_ascii=True) + "\n").encode("ascii")


def sha256_hex(data):
    return hashlib.sha256(data).hexdigest()


def digest_document(doc):
    return sha256_hex(canonical_bytes(doc))


def digest_file(path):
    with open(path, "rb") as fh:
        return sha256_hex(fh.read())


def check_entry(name, ok, witness=None, certificate=None):
    """One line of a run report.  The certificate itself is not embedded
    (it can be large); its canonical hash is, so reruns are comparable."""
    entry = {"name": name, "verdict": "pass" if ok else "fail"}
    if witness is not None:
        entry["witness"] = witness
    if certificate is not None:
        entry["certificate_sha256"] = digest_document(certificate)
    return entry


def make_report(version, command, field, window, seed, inputs, checks,
                outputs=None):
    report = {
        "format": "report",
        "version": FORMAT_VERSION,
        "tool": {"name": "curvedhom", "version": version},
        "command": command,
        "field": field,
        "window": None if window is None else window_spec(window),
        "seed": seed,
        "inputs": inputs,
        "checks": checks,
        "timing": None,
    }
    if outputs:
        report["outputs"] = outputs
    return report
