"""JSON schemas for divisors, residues, connections, points, and systems.

Fractions serialize as "p/q" strings (denominator always written), and
polynomials as graded-lexicographically sorted term lists, so identical
values always produce identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List, Sequence

from .catalog import catalog
from .connections import LogConnection, MatrixPolyMap
from .divisor import FrameElement, FreeDivisor, frame_constants
from .liealg import ResidueData
from .linear import RationalMatrix
from .moduli import Coordinate, Equation, ModuliPoint, PolySystem
from .polynomials import WeightedPoly


class SchemaError(ValueError):
    """Raised when an input file does not match the expected schema."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SchemaError(message)


# ----------------------------------------------------------------- fractions

def fraction_to_json(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def fraction_from_json(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    _require(isinstance(text, str), f"expected a rational string, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational literal {text!r}") from exc


# --------------------------------------------------------------- polynomials

def poly_to_json(p: WeightedPoly) -> List[dict]:
    return [
        {"exponents": list(mono), "coeff": fraction_to_json(coeff)}
        for mono, coeff in p.sorted_terms()
    ]


def poly_from_json(data, weights: Sequence[int]) -> WeightedPoly:
    _require(isinstance(data, list), "polynomial must be a list of terms")
    terms = {}
    for item in data:
        _require(isinstance(item, dict) and "exponents" in item and "coeff" in item,
                 "each term needs 'exponents' and 'coeff'")
        mono = tuple(int(e) for e in item["exponents"])
        _require(len(mono) == len(weights), f"term has {len(mono)} exponents, expected {len(weights)}")
        terms[mono] = terms.get(mono, Fraction(0)) + fraction_from_json(item["coeff"])
    return WeightedPoly(weights, terms)


# ------------------------------------------------------------------ matrices

def matrix_to_json(m: RationalMatrix) -> List[List[str]]:
    return [[fraction_to_json(v) for v in row] for row in m.entries]


def matrix_from_json(data) -> RationalMatrix:
    _require(isinstance(data, list) and data and all(isinstance(r, list) for r in data),
             "matrix must be a non-empty list of rows")
    return RationalMatrix([[fraction_from_json(v) for v in row] for row in data])


def matrix_map_to_json(m: MatrixPolyMap) -> List[List[List[dict]]]:
    return [[poly_to_json(p) for p in row] for row in m.entries]


def matrix_map_from_json(data, weights: Sequence[int]) -> MatrixPolyMap:
    _require(isinstance(data, list) and data, "matrix polynomial map must be a list of rows")
    return MatrixPolyMap([[poly_from_json(p, weights) for p in row] for row in data])


# ------------------------------------------------------------------ divisors

def divisor_to_json(d: FreeDivisor) -> dict:
    frame = []
    for element in d.frame:
        entry: Dict[str, object] = {
            "kind": element.kind,
            "coefficients": [poly_to_json(c) for c in element.field.coefficients],
        }
        if element.grade is not None:
            entry["grade"] = element.grade
        if element.distinguished:
            entry["distinguished"] = True
        frame.append(entry)
    out: Dict[str, object] = {
        "name": d.name,
        "variables": list(d.variables),
        "weights": list(d.weights),
        "f": poly_to_json(d.f),
        "degree": d.degree,
        "frame": frame,
        "positive_combination": list(d.positive_combination),
    }
    if d.factors is not None:
        out["factors"] = [poly_to_json(p) for p in d.factors]
    constants = frame_constants(d)
    if constants.semisimple:
        out["semisimple_constants"] = {
            f"{i + 1},{j + 1}": [fraction_to_json(c) for c in row]
            for (i, j), row in sorted(constants.semisimple.items())
        }
    return out


def divisor_from_json(data) -> FreeDivisor:
    from .divisor import VectorFieldPoly

    _require(isinstance(data, dict), "divisor file must be a JSON object")
    for key in ("variables", "weights", "f", "degree", "frame"):
        _require(key in data, f"divisor file is missing {key!r}")
    variables = tuple(str(v) for v in data["variables"])
    weights = tuple(int(w) for w in data["weights"])
    _require(len(variables) == len(weights), "variables and weights differ in length")
    f = poly_from_json(data["f"], weights)
    frame = []
    for raw in data["frame"]:
        _require(isinstance(raw, dict) and "kind" in raw and "coefficients" in raw,
                 "each frame element needs 'kind' and 'coefficients'")
        coefficients = tuple(poly_from_json(c, weights) for c in raw["coefficients"])
        frame.append(
            FrameElement(
                kind=str(raw["kind"]),
                field=VectorFieldPoly(coefficients),
                grade=int(raw["grade"]) if "grade" in raw and raw["grade"] is not None else None,
                distinguished=bool(raw.get("distinguished", False)),
            )
        )
    toral_count = sum(1 for e in frame if e.kind == "toral")
    combination = data.get("positive_combination")
    if combination is None:
        _require(toral_count == 1, "positive_combination is required when there are several toral slots")
        combination = [1]
    factors = data.get("factors")
    return FreeDivisor(
        name=str(data.get("name", "divisor")),
        variables=variables,
        weights=weights,
        f=f,
        degree=int(data["degree"]),
        frame=tuple(frame),
        positive_combination=tuple(int(c) for c in combination),
        factors=tuple(poly_from_json(p, weights) for p in factors) if factors is not None else None,
    )


def divisor_reference(d: FreeDivisor) -> dict:
    return {"catalog": d.name}


def divisor_from_reference(data) -> FreeDivisor:
    _require(isinstance(data, dict), "divisor reference must be an object")
    if "catalog" in data:
        return catalog(str(data["catalog"]))
    return divisor_from_json(data)


# ------------------------------------------------------------------ residues

def residue_to_json(r: ResidueData) -> dict:
    out: Dict[str, object] = {
        "k": r.k,
        "matrix_size": r.matrix_size,
        "S": [matrix_to_json(s) for s in r.s_list],
        "positive_combination": list(r.positive_combination),
    }
    if r.chi is not None:
        out["chi"] = [matrix_to_json(c) for c in r.chi]
    return out


def residue_from_json(data) -> ResidueData:
    _require(isinstance(data, dict), "residue file must be a JSON object")
    _require("S" in data, "residue file is missing 'S'")
    s_list = tuple(matrix_from_json(m) for m in data["S"])
    combination = data.get("positive_combination", [1] * len(s_list))
    chi = data.get("chi")
    residue = ResidueData(
        s_list=s_list,
        positive_combination=tuple(int(c) for c in combination),
        chi=tuple(matrix_from_json(m) for m in chi) if chi is not None else None,
    )
    if "k" in data:
        _require(int(data["k"]) == residue.k, "'k' does not match the number of S matrices")
    return residue


# --------------------------------------------------------------- connections

def connection_to_json(conn: LogConnection) -> dict:
    return {
        "divisor": divisor_reference(conn.divisor),
        "components": [matrix_map_to_json(c) for c in conn.components],
    }


def connection_from_json(data) -> LogConnection:
    _require(isinstance(data, dict) and "divisor" in data and "components" in data,
             "connection file needs 'divisor' and 'components'")
    divisor = divisor_from_reference(data["divisor"])
    components = tuple(matrix_map_from_json(c, divisor.weights) for c in data["components"])
    return LogConnection(divisor=divisor, components=components)


# -------------------------------------------------------------------- points

def point_to_json(p: ModuliPoint) -> dict:
    return {
        "components": [matrix_map_to_json(c) for c in p.components],
        "corrections": [matrix_map_to_json(c) for c in p.corrections],
    }


def point_from_json(data, weights: Sequence[int]) -> ModuliPoint:
    _require(isinstance(data, dict), "point file must be a JSON object")
    components = tuple(matrix_map_from_json(c, weights) for c in data.get("components", []))
    corrections = tuple(matrix_map_from_json(c, weights) for c in data.get("corrections", []))
    return ModuliPoint(components=components, corrections=corrections)


# ------------------------------------------------------------------- systems

def system_to_json(system: PolySystem, variables: Sequence[str]) -> dict:
    return {
        "divisor": system.divisor_name,
        "matrix_size": system.matrix_size,
        "summary": system.summary,
        "coordinates": [
            {
                "name": c.name,
                "slot": list(c.slot),
                "basis_index": c.basis_index,
                "degree": c.degree,
            }
            for c in system.coordinates
        ],
        "equations": [
            {
                "tag": eq.tag,
                "frame_slots": list(eq.frame_slots),
                "entry": [eq.entry[0] + 1, eq.entry[1] + 1],
                "base_monomial": list(eq.base_monomial),
                "poly": poly_to_json(eq.poly),
            }
            for eq in system.equations
        ],
    }


def system_from_json(data) -> PolySystem:
    _require(isinstance(data, dict), "system file must be a JSON object")
    coords = tuple(
        Coordinate(
            name=str(c["name"]),
            slot=(str(c["slot"][0]), int(c["slot"][1])),
            basis_index=int(c["basis_index"]),
            degree=int(c["degree"]),
        )
        for c in data["coordinates"]
    )
    ncoords = len(coords)
    coord_weights = (1,) * (ncoords if ncoords else 1)
    equations = tuple(
        Equation(
            tag=str(eq["tag"]),
            frame_slots=tuple(int(v) for v in eq["frame_slots"]),
            entry=(int(eq["entry"][0]) - 1, int(eq["entry"][1]) - 1),
            base_monomial=tuple(int(v) for v in eq["base_monomial"]),
            poly=poly_from_json(eq["poly"], coord_weights),
        )
        for eq in data["equations"]
    )
    return PolySystem(
        divisor_name=str(data["divisor"]),
        matrix_size=int(data["matrix_size"]),
        coordinates=coords,
        equations=equations,
        summary=dict(data.get("summary", {})),
    )


# ----------------------------------------------------------------- text form

def canonical_dumps(payload) -> str:
    """Byte-stable compact JSON: sorted keys, fixed separators, newline end."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def pretty_dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as exc:
        raise SchemaError(f"file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from exc
