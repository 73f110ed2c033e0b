"""Bundle documents and OFF meshes with per-vertex field tables."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .core import (Bifunction, MalformedSimplexError, NonFiniteValueError, ScalarField, SimplicialComplex,
                   build_complex)


class BundleError(ValueError):
    """The document does not follow the bundle schema."""


class FieldLengthError(BundleError):
    pass


@dataclass(frozen=True, eq=False)
class Bundle:
    complex: SimplicialComplex
    fields: dict[str, ScalarField] = field(default_factory=dict)
    coordinates: np.ndarray | None = None

    def __post_init__(self):
        n = self.complex.vertex_count
        for name, f in self.fields.items():
            if len(f) != n:
                raise FieldLengthError(f"field {name!r} has {len(f)} values for {n} vertices")
        if self.coordinates is not None:
            coords = np.array(self.coordinates, dtype=np.float64)
            if coords.shape != (n, 3):
                raise BundleError(f"coordinates must have shape ({n}, 3), got {coords.shape}")
            if not np.all(np.isfinite(coords)):
                raise NonFiniteValueError("coordinates must be finite")
            object.__setattr__(self, "coordinates", coords)

    @property
    def vertex_count(self) -> int:
        return self.complex.vertex_count

    def field(self, name: str) -> ScalarField:
        try:
            return self.fields[name]
        except KeyError:
            known = ", ".join(sorted(self.fields)) or "none"
            raise BundleError(f"unknown field {name!r} (available: {known})") from None

    def bifunction(self, first: str, second: str) -> Bifunction:
        return Bifunction(self.field(first), self.field(second))

    @classmethod
    def from_mesh(cls, mesh) -> Bundle:
        from .shapes import projection_field

        fields = {axis: projection_field(mesh, axis) for axis in "xyz"}
        return cls(mesh.complex, fields, mesh.coordinates)

    def semantically_equal(self, other: Bundle) -> bool:
        if self.complex != other.complex or self.fields.keys() != other.fields.keys():
            return False
        if any(not np.array_equal(self.fields[k].values, other.fields[k].values) for k in self.fields):
            return False
        if (self.coordinates is None) != (other.coordinates is None):
            return False
        return self.coordinates is None or np.array_equal(self.coordinates, other.coordinates)


def maximal_simplices(K: SimplicialComplex) -> list[tuple[int, ...]]:
    """Simplices of dimension >= 1 that are not a face of another simplex."""
    covered = set()
    for facets in K.facets:
        covered.update(facets)
    return [s for i, s in enumerate(K.simplices) if len(s) > 1 and i not in covered]


def _finite_list(values, what: str) -> list[float]:
    try:
        out = [float(v) for v in values]
    except (TypeError, ValueError) as exc:
        raise BundleError(f"{what} must be numbers") from exc
    if not all(math.isfinite(v) for v in out):
        raise NonFiniteValueError(f"{what} contains a non-finite value")
    return out


def bundle_from_dict(doc) -> Bundle:
    if not isinstance(doc, dict):
        raise BundleError("bundle must be an object")
    unknown = set(doc) - {"vertices", "simplices", "fields", "coordinates"}
    if unknown:
        raise BundleError(f"unknown bundle keys: {sorted(unknown)}")
    n = doc.get("vertices")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise BundleError("'vertices' must be a non-negative integer")
    simplices = doc.get("simplices", [])
    if not isinstance(simplices, list) or not all(
            isinstance(s, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in s)
            for s in simplices):
        raise BundleError("'simplices' must be an array of integer arrays")
    for s in simplices:
        if any(v >= n for v in s):
            raise MalformedSimplexError(f"simplex {s} references a vertex >= {n}")
    K = build_complex(simplices, vertex_count=n)
    raw_fields = doc.get("fields", {})
    if not isinstance(raw_fields, dict):
        raise BundleError("'fields' must be an object of arrays")
    fields = {}
    for name, values in raw_fields.items():
        if not isinstance(values, list):
            raise BundleError(f"field {name!r} must be an array")
        fields[name] = ScalarField(_finite_list(values, f"field {name!r}"))
    coords = doc.get("coordinates")
    if coords is not None:
        if not isinstance(coords, list) or not all(isinstance(p, list) and len(p) == 3 for p in coords):
            raise BundleError("'coordinates' must be an array of 3-arrays")
        coords = np.array([_finite_list(p, "coordinates") for p in coords]).reshape(-1, 3)
    return Bundle(K, fields, coords)


def parse_bundle(text: str) -> Bundle:
    """Parse and validate a bundle document; missing faces are added."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BundleError(f"bundle is not valid JSON: {exc}") from exc
    return bundle_from_dict(doc)


def bundle_to_dict(bundle: Bundle) -> dict:
    doc = {
        "vertices": bundle.vertex_count,
        "simplices": [list(s) for s in maximal_simplices(bundle.complex)],
        "fields": {name: f.values.tolist() for name, f in bundle.fields.items()},
    }
    if bundle.coordinates is not None:
        doc["coordinates"] = bundle.coordinates.tolist()
    return doc


def emit_bundle(bundle: Bundle) -> str:
    return json.dumps(bundle_to_dict(bundle), allow_nan=False) + "\n"


def _off_lines(text: str):
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            yield line


def parse_off(text: str) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    """Vertices and faces of an ASCII OFF file.

    Faces with two vertices are read as edges; polygons with more than three
    vertices are split into a triangle fan.
    """
    lines = _off_lines(text)
    try:
        header = next(lines)
    except StopIteration:
        raise BundleError("empty OFF file") from None
    tokens = header.split()
    if not tokens[0].upper().endswith("OFF"):
        raise BundleError("OFF file must start with an OFF header")
    tokens = tokens[1:]
    if not tokens:
        try:
            tokens = next(lines).split()
        except StopIteration:
            raise BundleError("OFF file lacks the count line") from None
    try:
        nv, nf = int(tokens[0]), int(tokens[1])
        vertices = [[float(t) for t in next(lines).split()[:3]] for _ in range(nv)]
        faces = []
        for _ in range(nf):
            row = [int(t) for t in next(lines).split()]
            k, idx = row[0], row[1:row[0] + 1]
            if len(idx) != k or k < 1:
                raise BundleError(f"malformed face line {row}")
            faces.append(tuple(idx))
    except StopIteration:
        raise BundleError("OFF file ends before all vertices and faces") from None
    except (ValueError, IndexError) as exc:
        raise BundleError(f"malformed OFF content: {exc}") from exc
    coords = np.array(vertices, dtype=np.float64).reshape(-1, 3)
    if not np.all(np.isfinite(coords)):
        raise NonFiniteValueError("OFF vertex coordinates must be finite")
    simplices = []
    for face in faces:
        if any(not 0 <= v < nv for v in face):
            raise MalformedSimplexError(f"face {face} references a missing vertex")
        if len(face) <= 3:
            simplices.append(face)
        else:
            simplices += [(face[0], face[i], face[i + 1]) for i in range(1, len(face) - 1)]
    return coords, simplices


def parse_field_table(text: str) -> dict[str, list[float]]:
    """Comma-separated table: a header of field names, then one row per vertex."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise BundleError("field table is empty")
    names = [h.strip() for h in rows[0]]
    if len(set(names)) != len(names) or not all(names):
        raise BundleError("field table header must hold distinct non-empty names")
    columns: dict[str, list[float]] = {name: [] for name in names}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(names):
            raise BundleError(f"table row {lineno} has {len(row)} entries, expected {len(names)}")
        for name, cell in zip(names, row):
            try:
                columns[name].append(float(cell))
            except ValueError:
                raise BundleError(f"table row {lineno}: {cell!r} is not a number") from None
    for name, values in columns.items():
        _finite_list(values, f"field {name!r}")
    return columns


def parse_off_with_fields(mesh_text: str, table_text: str) -> Bundle:
    coords, simplices = parse_off(mesh_text)
    columns = parse_field_table(table_text)
    n = len(coords)
    for name, values in columns.items():
        if len(values) != n:
            raise FieldLengthError(f"table has {len(values)} rows for {n} mesh vertices")
    K = build_complex(simplices, vertex_count=n)
    return Bundle(K, {name: ScalarField(v) for name, v in columns.items()}, coords)


def emit_off_with_fields(bundle: Bundle) -> tuple[str, str]:
    """OFF text for the maximal simplices plus the field table, both lossless."""
    coords = bundle.coordinates if bundle.coordinates is not None else np.zeros((bundle.vertex_count, 3))
    faces = maximal_simplices(bundle.complex)
    lines = ["OFF", f"{bundle.vertex_count} {len(faces)} 0"]
    lines += [" ".join(repr(float(c)) for c in p) for p in coords]
    lines += [" ".join(str(v) for v in (len(s), *s)) for s in faces]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    names = list(bundle.fields)
    writer.writerow(names)
    for row in zip(*(bundle.fields[k].values.tolist() for k in names)):
        writer.writerow([repr(v) for v in row])
    return "\n".join(lines) + "\n", out.getvalue()
