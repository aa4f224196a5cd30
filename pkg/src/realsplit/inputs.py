"""Reading variety descriptions from TOML or JSON documents.

Example (TOML)::

    schema_version = 1
    g = 1
    rational_point = true

    [coefficients]
    ring = "Z[1/2]"          # or "Q", "Z", or invert = [2, 3]

    [real_locus]
    kind = "quadratic"       # explicit | quadratic | cyclotomic | cm
    d = -2
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .assemble import (
    SCHEMA_VERSION,
    CoefficientRing,
    CyclotomicLocus,
    ExplicitCM,
    ExplicitCount,
    InputError,
    QuadraticLocus,
    VarietyInput,
)
from .real_locus import CMFieldData, PrimeOverTwo, cyclotomic_cm_data, euler_phi


def load_document(path: str | Path) -> dict:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        return json.loads(text)
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _coefficients(doc: dict) -> CoefficientRing:
    table = doc.get("coefficients", {"ring": "Q"})
    if isinstance(table, str):
        return CoefficientRing.parse(table)
    if "ring" in table:
        return CoefficientRing.parse(str(table["ring"]))
    if table.get("rational"):
        return CoefficientRing.rationals()
    return CoefficientRing.inverting(*table.get("invert", []))


def _epsilon(table: dict):
    eps = table.get("epsilon")
    return None if eps is None else int(eps)


def _locus(doc: dict):
    table = doc.get("real_locus")
    if not isinstance(table, dict) or "kind" not in table:
        raise InputError("missing [real_locus] table with a 'kind' key")
    kind = table["kind"]
    if kind == "explicit":
        return ExplicitCount(int(table["n"])), None
    if kind == "quadratic":
        return QuadraticLocus(int(table["d"]), _epsilon(table)), 1
    if kind == "cyclotomic":
        k = int(table["k"])
        if k <= 2:
            cyclotomic_cm_data(k)  # raises with the engine's message
        return CyclotomicLocus(k, _epsilon(table)), euler_phi(k) // 2
    if kind == "cm":
        primes = tuple(
            PrimeOverTwo(int(p["ord_disc"]), int(p["residue_degree"]), int(p["ord_two"]),
                         None if p.get("epsilon") is None else int(p["epsilon"]))
            for p in table.get("primes", [])
        )
        g = int(table.get("g", doc.get("g", 0)))
        data = CMFieldData(g, primes, bool(table.get("has_odd_ramified_primes", False)),
                           label=str(table.get("label", "")))
        return ExplicitCM(data), g
    raise InputError(f"unknown real_locus kind {kind!r}")


def variety_from_document(doc: dict) -> VarietyInput:
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise InputError(f"unsupported schema_version {version}; expected {SCHEMA_VERSION}")
    locus, implied_g = _locus(doc)
    g = doc.get("g", implied_g)
    if g is None:
        raise InputError("g is required for an explicit component count")
    return VarietyInput(
        g=int(g),
        real_locus=locus,
        coefficient_ring=_coefficients(doc),
        rational_point=bool(doc.get("rational_point", True)),
    )


def load_variety(path: str | Path) -> VarietyInput:
    try:
        return variety_from_document(load_document(path))
    except KeyError as exc:
        raise InputError(f"{path}: missing key {exc}") from exc
