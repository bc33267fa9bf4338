"""JSON file format for arrangements over number fields.

Rationals are written as strings ``"p"`` or ``"p/q"`` (``q > 0``, reduced);
field elements as lists of rationals, lowest power of the generator first.
"""

from __future__ import annotations

import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from .arrangement import Arrangement
from .exact import QQ, FieldElement, NumberField, ProjLine

ARRANGEMENT_SCHEMA = "hirzebruch.arrangement/1"
_RATIONAL = re.compile(r"-?\d+(/\d+)?")


class InputError(ValueError):
    """Malformed or inconsistent input file."""


def parse_rational(s) -> Fraction:
    if not isinstance(s, str) or not _RATIONAL.fullmatch(s.strip()):
        raise InputError(f"not a rational string: {s!r}")
    num, _, den = s.strip().partition("/")
    if den and int(den) == 0:
        raise InputError(f"zero denominator in {s!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def field_to_json(K: NumberField) -> dict:
    z = K.root
    return {
        "name": K.name,
        "min_poly": [format_rational(c) for c in K.min_poly],
        "embedding": [repr(float(z.real)), repr(float(z.imag))],
        "involution": [format_rational(c) for c in K.involution],
    }


def field_from_json(obj: dict) -> NumberField:
    try:
        poly = [parse_rational(c) for c in obj["min_poly"]]
        re_, im = (float(x) for x in obj["embedding"])
        inv = obj.get("involution")
        inv = None if inv is None else [parse_rational(c) for c in inv]
        name = obj.get("name")
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad field block: {e}") from e
    if len(poly) == 2 and poly == [Fraction(0), Fraction(1)]:
        return QQ
    try:
        return NumberField(poly, complex(re_, im), inv, name=name)
    except ValueError as e:
        raise InputError(f"bad field block: {e}") from e


def arrangement_to_json(arr: Arrangement) -> dict:
    def elt(x: FieldElement):
        return [format_rational(c) for c in x.coeffs]

    return {
        "schema": ARRANGEMENT_SCHEMA,
        "name": arr.name,
        "field": field_to_json(arr.field),
        "lines": [[elt(c) for c in l.coords] for l in arr.lines],
    }


def arrangement_from_json(obj: dict) -> Arrangement:
    if not isinstance(obj, dict):
        raise InputError("top level must be an object")
    if obj.get("schema", ARRANGEMENT_SCHEMA) != ARRANGEMENT_SCHEMA:
        raise InputError(f"unsupported schema {obj.get('schema')!r}")
    if "field" not in obj or "lines" not in obj:
        raise InputError("missing 'field' or 'lines'")
    K = field_from_json(obj["field"])
    lines = []
    for i, raw in enumerate(obj["lines"]):
        if not isinstance(raw, list) or len(raw) != 3:
            raise InputError(f"line {i}: need three coordinates")
        coords = []
        for c in raw:
            if not isinstance(c, list) or len(c) != K.degree:
                raise InputError(f"line {i}: each coordinate needs {K.degree} rational coefficients")
            coords.append(K([parse_rational(x) for x in c]))
        try:
            lines.append(ProjLine(coords, K))
        except ValueError as e:
            raise InputError(f"line {i}: {e}") from e
    try:
        return Arrangement(K, lines, obj.get("name"))
    except ValueError as e:
        raise InputError(str(e)) from e


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_arrangement(path: str | Path) -> Arrangement:
    try:
        text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
        obj = json.loads(text)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e})") from e
    return arrangement_from_json(obj)


def save_arrangement(arr: Arrangement, path: str | Path) -> None:
    Path(path).write_text(dumps(arrangement_to_json(arr)))
