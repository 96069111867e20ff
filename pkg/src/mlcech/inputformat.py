"""Input document formats: JSON arguments given inline, as a path or on stdin."""

import json
import os
import sys
from fractions import Fraction
from logging import getLogger
from typing import Any, Callable, Dict, List, NamedTuple, Tuple, Union

import numpy as np

from mlcech import linalg
from mlcech.cech import Nerve, SheafDatum, constant_sheaf
from mlcech.contour import NumericPart
from mlcech.errors import SchemaError
from mlcech.exact import INF, GaussianRational, Point, PrincipalPart
from mlcech.linalg import as_matrix
from mlcech.p1 import DivisorP1
from mlcech.plane import DomainSpec
from mlcech.torus import Lattice

logger = getLogger(__name__)


def load_json(source: str) -> Any:
    """Loads a JSON document.

    Args:
        source (str): Inline JSON, the path to a `.json` file, or "-" for stdin.

    Raises:
        SchemaError: If the document is not valid JSON.
        OSError: If the file cannot be read.

    Returns:
        A[n] `Any` decoded JSON value.
    """
    if source == "-":
        text = sys.stdin.read()
        origin = "stdin"
    elif source.endswith(".json") or os.path.isfile(source):
        with open(source) as f:
            text = f.read()
        origin = source
    else:
        text = source
        origin = "inline argument"
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"Malformed JSON in {origin}: {e}") from e
    logger.debug(f"loaded JSON from {origin}")
    return doc


def _expect(value: Any, kind: Union[type, Tuple[type, ...]], what: str) -> Any:
    if not isinstance(value, kind) or isinstance(value, bool):
        raise SchemaError(f"{what} has the wrong type: {value!r}")
    return value


def parse_int(value: Any, what: str = "value") -> int:
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    return _expect(value, int, what)


def parse_rational(value: Any) -> Fraction:
    """Parses an int or a "p/q" (or decimal) string.

    Raises:
        SchemaError: For floats that are not integers, and malformed strings.
    """
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise SchemaError(f"'{value}' is not a rational number") from e
    raise SchemaError(f"Exact values must be ints or 'p/q' strings, got {value!r}")


def parse_gaussian(value: Any) -> GaussianRational:
    """Parses {"re": r, "im": r}, a rational, or a string such as "i", "-2i" or
    "1/2-3/4i" (the imaginary part is written before the "i")."""
    if isinstance(value, dict):
        if set(value) - {"re", "im"}:
            raise SchemaError(f"Unknown keys in Gaussian rational {value}")
        return GaussianRational(
            parse_rational(value.get("re", 0)), parse_rational(value.get("im", 0))
        )
    if isinstance(value, str):
        text = value.replace(" ", "")
        if not text.endswith("i"):
            return GaussianRational(parse_rational(text))
        body = text[:-1]
        split = max(body.rfind("+"), body.rfind("-"))
        re, im = (body[:split], body[split:]) if split > 0 else ("0", body)
        if im in ("", "+"):
            im = "1"
        elif im == "-":
            im = "-1"
        return GaussianRational(parse_rational(re), parse_rational(im))
    return GaussianRational(parse_rational(value))


def parse_point(value: Any) -> Point:
    """"inf" (or "∞") is the point at infinity, anything else a Gaussian rational."""
    if isinstance(value, str) and value.strip().lower() in ("inf", "∞", "infinity"):
        return INF
    return parse_gaussian(value)


def parse_complex(value: Any) -> complex:
    """Parses a number, {"re": x, "im": y}, or a string like "1+2i", "1e-3" or "2-3/4i"."""
    if isinstance(value, dict):
        if set(value) - {"re", "im"}:
            raise SchemaError(f"Unknown keys in complex number {value}")
        return complex(
            _expect(value.get("re", 0.0), (int, float), "re"),
            _expect(value.get("im", 0.0), (int, float), "im"),
        )
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", "").replace("i", "j"))
        except ValueError:
            pass
        try:
            return complex(parse_gaussian(value))
        except SchemaError as e:
            raise SchemaError(f"'{value}' is not a complex number") from e
    return complex(_expect(value, (int, float), "complex number"))


def parse_divisor(doc: Any) -> DivisorP1:
    """{"point": n, ...} or [[point, n], ...]."""
    if isinstance(doc, dict):
        pairs = list(doc.items())
    elif isinstance(doc, list):
        pairs = [tuple(_expect(p, list, "divisor entry")) for p in doc]
    else:
        raise SchemaError(f"A divisor is an object or a list of pairs, got {doc!r}")
    entries: Dict[Point, int] = {}
    for pair in pairs:
        if len(pair) != 2:
            raise SchemaError(f"Divisor entry {list(pair)} is not a [point, n] pair")
        point = parse_point(pair[0])
        entries[point] = entries.get(point, 0) + parse_int(pair[1], "multiplicity")
    return DivisorP1(entries)


def _coefficient_map(coeffs: Any, parse: Callable[[Any], Any]) -> Dict[int, Any]:
    if isinstance(coeffs, list):
        return {j: parse(c) for j, c in enumerate(coeffs, start=1)}
    if isinstance(coeffs, dict):
        out = {}
        for key, c in coeffs.items():
            try:
                out[int(key)] = parse(c)
            except ValueError as e:
                raise SchemaError(f"Coefficient key '{key}' is not an integer") from e
        return out
    raise SchemaError(f"coeffs must be a list or an object, got {coeffs!r}")


def _part_fields(doc: Any) -> Tuple[Any, Any]:
    """The pole may be keyed "pole" or "a"."""
    _expect(doc, dict, "principal part")
    keys = set(doc)
    if keys not in ({"pole", "coeffs"}, {"a", "coeffs"}):
        raise SchemaError(
            f"A principal part has keys 'pole' (or 'a') and 'coeffs', got {sorted(doc)}"
        )
    return doc.get("pole", doc.get("a")), doc["coeffs"]


def parse_principal_part(doc: Any) -> PrincipalPart:
    """{"pole": point, "coeffs": [A_1, A_2, ...] or {"j": A_j}}."""
    pole, coeffs = _part_fields(doc)
    try:
        return PrincipalPart(parse_point(pole), _coefficient_map(coeffs, parse_gaussian))
    except ValueError as e:
        raise SchemaError(f"Invalid principal part {doc}: {e}") from e


def parse_parts(doc: Any) -> List[PrincipalPart]:
    return [parse_principal_part(p) for p in _expect(doc, list, "parts")]


def parse_numeric_part(doc: Any) -> NumericPart:
    pole, coeffs = _part_fields(doc)
    cmap = _coefficient_map(coeffs, parse_complex)
    if not cmap or min(cmap) < 1:
        raise SchemaError(f"Coefficient indices must start at 1 in {doc}")
    dense = [cmap.get(j, 0j) for j in range(1, max(cmap) + 1)]
    try:
        return NumericPart.create(parse_complex(pole), dense)
    except ValueError as e:
        raise SchemaError(f"Invalid principal part {doc}: {e}") from e


def parse_numeric_parts(doc: Any) -> List[NumericPart]:
    return [parse_numeric_part(p) for p in _expect(doc, list, "parts")]


def _is_exact(value: Any) -> bool:
    if isinstance(value, float):
        return value.is_integer()
    if isinstance(value, dict):
        return all(_is_exact(v) for v in value.values())
    if isinstance(value, list):
        return all(_is_exact(v) for v in value)
    return True


def parse_torus_parts(doc: Any) -> List[Union[PrincipalPart, NumericPart]]:
    """Parts whose values are all ints or rational strings stay exact."""
    out: List[Union[PrincipalPart, NumericPart]] = []
    for p in _expect(doc, list, "parts"):
        if _is_exact(p):
            try:
                out.append(parse_principal_part(p))
                continue
            except ValueError:
                logger.debug(f"part {p} is not exact, parsing numerically")
        out.append(parse_numeric_part(p))
    return out


def parse_nerve_datum(doc: Any) -> Tuple[Nerve, SheafDatum]:
    """A nerve with sections and restrictions.

    {"n_opens": n, "faces": [[0, 1], ...], "spaces": [{"face": [0], "dim": 1}, ...],
    "restrictions": [{"face": [0], "coface": [0, 1], "matrix": [[...]]}, ...]}.
    Without "spaces" the datum is the constant sheaf, with optional
    "components": [{"face": [0, 1], "count": 2}] and "containment":
    [{"face": [0], "coface": [0, 1], "into": [0, 0]}].
    """
    _expect(doc, dict, "nerve document")
    unknown = set(doc) - {
        "n_opens", "faces", "spaces", "restrictions", "components", "containment"
    }
    if unknown:
        raise SchemaError(f"Unknown keys {sorted(unknown)} in nerve document")
    if "n_opens" not in doc:
        raise SchemaError("Nerve document needs 'n_opens'")
    faces = [
        tuple(parse_int(i, "open index") for i in _expect(f, list, "face"))
        for f in _expect(doc.get("faces", []), list, "faces")
    ]
    try:
        nerve = Nerve.from_faces(parse_int(doc["n_opens"], "n_opens"), faces)
    except ValueError as e:
        raise SchemaError(str(e)) from e

    def face_of(entry: Dict[str, Any], key: str = "face") -> Tuple[int, ...]:
        indices = _expect(entry[key], list, key)
        return tuple(sorted(parse_int(i, "open index") for i in indices))

    try:
        if "spaces" not in doc:
            components = {
                face_of(c): parse_int(c["count"], "count")
                for c in _expect(doc.get("components", []), list, "components")
            }
            containment = {
                (face_of(c), face_of(c, "coface")): [parse_int(i) for i in c["into"]]
                for c in _expect(doc.get("containment", []), list, "containment")
            }
            return nerve, constant_sheaf(nerve, components, containment)
        space = {
            face_of(s): parse_int(s["dim"], "dim")
            for s in _expect(doc["spaces"], list, "spaces")
        }
        restriction = {}
        for r in _expect(doc.get("restrictions", []), list, "restrictions"):
            rows = [[parse_gaussian(x) for x in row] for row in r["matrix"]]
            key = (face_of(r), face_of(r, "coface"))
            shape = (space.get(key[1], 0), space.get(key[0], 0))
            if rows and rows[0]:
                restriction[key] = as_matrix(rows)
            else:
                restriction[key] = linalg.zeros(*shape)
    except KeyError as e:
        raise SchemaError(f"Missing key {e} in nerve document") from e
    except ValueError as e:
        raise SchemaError(f"Invalid nerve document: {e}") from e
    return nerve, SheafDatum(space, restriction)


def parse_domain(doc: Any) -> DomainSpec:
    """{"kind": "plane"}, {"kind": "disc", "center": z, "radius": r},
    {"kind": "annulus", "center": z, "inner_radius": r, "radius": R} or
    {"kind": "halfplane", "normal": u, "offset": c}."""
    _expect(doc, dict, "domain")
    kind = doc.get("kind")
    try:
        if kind == "plane":
            return DomainSpec.plane()
        if kind == "disc":
            return DomainSpec.disc(parse_complex(doc.get("center", 0)), float(doc["radius"]))
        if kind == "annulus":
            return DomainSpec.annulus(
                parse_complex(doc.get("center", 0)),
                float(doc["inner_radius"]),
                float(doc["radius"]),
            )
        if kind == "halfplane":
            return DomainSpec.halfplane(
                parse_complex(doc["normal"]), float(doc.get("offset", 0.0))
            )
    except KeyError as e:
        raise SchemaError(f"Domain '{kind}' needs key {e}") from e
    except (TypeError, ValueError) as e:
        raise SchemaError(f"Invalid domain {doc}: {e}") from e
    raise SchemaError(f"Unknown domain kind {kind!r}")


def parse_lattice(text: str) -> Lattice:
    """"w1,w2" with complex periods such as "1,0.2+1.1i"."""
    pieces = text.split(",")
    if len(pieces) != 2:
        raise SchemaError(f"A lattice is given as 'w1,w2', got '{text}'")
    try:
        return Lattice.create(parse_complex(pieces[0]), parse_complex(pieces[1]))
    except ValueError as e:
        raise SchemaError(str(e)) from e


def parse_grid(text: str) -> np.ndarray:
    """"x0:x1:nx,y0:y1:ny", the row-major grid of nx·ny points."""
    axes = []
    for piece in text.split(","):
        fields = piece.split(":")
        if len(fields) != 3:
            raise SchemaError(f"Grid axis '{piece}' is not of the form lo:hi:count")
        try:
            lo, hi, count = float(fields[0]), float(fields[1]), int(fields[2])
        except ValueError as e:
            raise SchemaError(f"Grid axis '{piece}' is malformed") from e
        if count < 1 or (count > 1 and not lo < hi):
            raise SchemaError(f"Grid axis '{piece}' needs lo < hi and count >= 1")
        axes.append(np.linspace(lo, hi, count))
    if len(axes) != 2:
        raise SchemaError(f"A grid has two axes, got '{text}'")
    y, x = np.meshgrid(axes[1], axes[0], indexing="ij")
    return (x + 1j * y).ravel()


class InputFormat(NamedTuple):
    """Specifies a JSON argument of a command.

    Attributes:
        name (str): The argument's name in messages.
        parse (Callable): Converts the decoded document.
    """

    name: str
    parse: Callable[[Any], Any]


DIVISOR = InputFormat(name="divisor", parse=parse_divisor)
PARTS = InputFormat(name="parts", parse=parse_parts)
NERVE = InputFormat(name="nerve", parse=parse_nerve_datum)
DOMAIN = InputFormat(name="domain", parse=parse_domain)
POLES = InputFormat(name="poles", parse=parse_numeric_parts)
TORUS_PARTS = InputFormat(name="parts", parse=parse_torus_parts)


def parse_input(source: str, format: InputFormat) -> Any:
    """Loads and parses a JSON argument.

    Args:
        source (str): Inline JSON, a `.json` path or "-".
        format (InputFormat): The expected document.

    Raises:
        SchemaError: If the document does not match `format`.
        OSError: If the file cannot be read.
    """
    logger.info(f"Parsing {format.name}")
    return format.parse(load_json(source))
