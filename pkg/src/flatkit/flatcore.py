"""Exact model of translation surfaces given as polygons glued by translations.

A surface is a finite list of simple polygons with rational vertices together
with a pairing of their boundary edges.  Paired edges must be parallel, of
equal length and oppositely oriented, so that the identification is a pure
translation.  Everything here is computed in exact rational arithmetic; no
floating point is used anywhere in this module.

The main operations are structural validation, the cone-point (singularity)
sweep, genus and stratum computation, the rank of the relative period lattice,
and JSON serialization of surfaces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from math import gcd
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

Rational = Union[int, str, Fraction]


def _as_fraction(value: Rational) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"not a rational value: {value!r}")


@dataclass(frozen=True)
class PlanarVec:
    """A point or translation vector in the plane with rational coordinates."""

    x: Fraction
    y: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _as_fraction(self.x))
        object.__setattr__(self, "y", _as_fraction(self.y))

    def __add__(self, other: "PlanarVec") -> "PlanarVec":
        return PlanarVec(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "PlanarVec") -> "PlanarVec":
        return PlanarVec(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "PlanarVec":
        return PlanarVec(-self.x, -self.y)

    def cross(self, other: "PlanarVec") -> Fraction:
        return self.x * other.y - self.y * other.x

    @property
    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def __repr__(self) -> str:
        return f"({self.x}, {self.y})"


class EdgeRef(NamedTuple):
    """Reference to one directed boundary edge: (polygon index, edge index)."""

    polygon: int
    edge: int


@dataclass(frozen=True)
class PolygonChain:
    """A polygon given by its cyclic vertex list, counterclockwise.

    Edge i runs from vertices[i] to vertices[(i+1) % n].  Collinear
    consecutive vertices are allowed; they create straight (angle pi)
    corners, which occur naturally when an edge of a bigger polygon is
    subdivided or when a degeneration collapses an edge.
    """

    vertices: tuple[PlanarVec, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> PlanarVec:
        return self.vertices[i % self.n]

    def edge_vector(self, i: int) -> PlanarVec:
        return self.vertex(i + 1) - self.vertex(i)

    def twice_signed_area(self) -> Fraction:
        total = Fraction(0)
        for i in range(self.n):
            a, b = self.vertex(i), self.vertex(i + 1)
            total += a.x * b.y - b.x * a.y
        return total

    def translate(self, shift: PlanarVec) -> "PolygonChain":
        return PolygonChain(tuple(p + shift for p in self.vertices))


def polygon(points: Iterable[Sequence[Rational]]) -> PolygonChain:
    """Build a PolygonChain from raw (x, y) coordinate pairs."""
    return PolygonChain(tuple(PlanarVec(_as_fraction(x), _as_fraction(y)) for x, y in points))


@dataclass(frozen=True, eq=False)
class TranslationSurface:
    """Polygons plus a pairing (involution) on their directed boundary edges."""

    polygons: tuple[PolygonChain, ...]
    pairing: Mapping[EdgeRef, EdgeRef]

    def __post_init__(self) -> None:
        object.__setattr__(self, "polygons", tuple(self.polygons))
        object.__setattr__(
            self,
            "pairing",
            {EdgeRef(*k): EdgeRef(*v) for k, v in dict(self.pairing).items()},
        )

    def edge_refs(self) -> Iterator[EdgeRef]:
        for p, poly in enumerate(self.polygons):
            for e in range(poly.n):
                yield EdgeRef(p, e)

    def edge_vector(self, ref: EdgeRef) -> PlanarVec:
        return self.polygons[ref.polygon].edge_vector(ref.edge)


def surface(
    polygons: Iterable[Iterable[Sequence[Rational]]],
    pairs: Union[Iterable[Sequence[Sequence[int]]], Mapping[Sequence[int], Sequence[int]]],
) -> TranslationSurface:
    """Build a TranslationSurface from vertex lists and edge pairs.

    pairs may be a list of ((p1, e1), (p2, e2)) entries or a mapping
    (p1, e1) -> (p2, e2); either direction of each pair suffices.
    """
    if isinstance(pairs, Mapping):
        pairs = pairs.items()
    pairing: dict[EdgeRef, EdgeRef] = {}
    for (p1, e1), (p2, e2) in pairs:
        a, b = EdgeRef(p1, e1), EdgeRef(p2, e2)
        pairing[a] = b
        pairing[b] = a
    return TranslationSurface(tuple(polygon(ps) for ps in polygons), pairing)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


def _orient(a: PlanarVec, b: PlanarVec, c: PlanarVec) -> int:
    return _sign((b - a).cross(c - a))


def _on_segment(p: PlanarVec, a: PlanarVec, b: PlanarVec) -> bool:
    """True iff p lies on the closed segment [a, b]."""
    if _orient(a, b, p) != 0:
        return False
    return (
        min(a.x, b.x) <= p.x <= max(a.x, b.x)
        and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    )


def _segments_touch(a: PlanarVec, b: PlanarVec, c: PlanarVec, d: PlanarVec) -> bool:
    """True iff closed segments [a,b] and [c,d] share at least one point."""
    d1 = _orient(c, d, a)
    d2 = _orient(c, d, b)
    d3 = _orient(a, b, c)
    d4 = _orient(a, b, d)
    if d1 != d2 and d3 != d4 and d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return (
        _on_segment(a, c, d)
        or _on_segment(b, c, d)
        or _on_segment(c, a, b)
        or _on_segment(d, a, b)
    )


def _polygon_violations(index: int, poly: PolygonChain) -> list[str]:
    out: list[str] = []
    n = poly.n
    if n < 3:
        out.append(f"polygon {index}: fewer than 3 vertices")
        return out
    for i in range(n):
        if poly.vertex(i) == poly.vertex(i + 1):
            out.append(f"polygon {index}: zero-length edge at vertex {i}")
    if out:
        return out
    area2 = poly.twice_signed_area()
    if area2 == 0:
        out.append(f"polygon {index}: degenerate (zero signed area)")
    elif area2 < 0:
        out.append(f"polygon {index}: vertices are clockwise (negative signed area)")

    # Simplicity: edges may meet only where consecutive edges share a vertex.
    for i in range(n):
        a, b = poly.vertex(i), poly.vertex(i + 1)
        for j in range(i + 1, n):
            c, d = poly.vertex(j), poly.vertex(j + 1)
            if j == i + 1 or (i == 0 and j == n - 1):
                # Adjacent edges: the shared endpoint is fine, anything more
                # (a fold-back or overlap) is not.
                shared = b if j == i + 1 else a
                p_other = a if j == i + 1 else b
                q_other = d if j == i + 1 else c
                bad = (
                    _on_segment(p_other, c, d)
                    or _on_segment(q_other, a, b)
                    or (p_other != shared and q_other != shared and p_other == q_other)
                )
                if bad:
                    out.append(
                        f"polygon {index}: edges {i} and {j} overlap beyond their shared vertex"
                    )
            elif _segments_touch(a, b, c, d):
                out.append(f"polygon {index}: edges {i} and {j} intersect")
    return out


def validate(surf: TranslationSurface) -> ValidationReport:
    """Structural gate: every other operation assumes this passes."""
    out: list[str] = []
    if not surf.polygons:
        return ValidationReport(("no polygons",))
    for i, poly in enumerate(surf.polygons):
        out.extend(_polygon_violations(i, poly))

    all_edges = set(surf.edge_refs())
    keys = set(surf.pairing.keys())
    structural_ok = True
    for e, partner in surf.pairing.items():
        if e not in all_edges:
            out.append(f"pairing refers to nonexistent edge {tuple(e)}")
            structural_ok = False
        if partner not in all_edges:
            out.append(f"pairing refers to nonexistent edge {tuple(partner)}")
            structural_ok = False
    if structural_ok:
        missing = all_edges - keys
        for e in sorted(missing):
            out.append(f"edge {tuple(e)} is unpaired")
        for e in sorted(keys):
            partner = surf.pairing[e]
            if partner == e:
                out.append(f"edge {tuple(e)} is paired with itself")
                structural_ok = False
            elif surf.pairing.get(partner) != e:
                out.append(f"pairing is not an involution at edge {tuple(e)}")
                structural_ok = False
        if missing:
            structural_ok = False

    if structural_ok and not any("polygon" in v for v in out):
        for e in sorted(surf.pairing.keys()):
            partner = surf.pairing[e]
            if e < partner:
                if surf.edge_vector(partner) != -surf.edge_vector(e):
                    out.append(
                        f"paired edge vectors not opposite: {tuple(e)} and {tuple(partner)}"
                    )
        # Gluing graph on polygons must be connected.
        parent = list(range(len(surf.polygons)))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e, partner in surf.pairing.items():
            ra, rb = find(e.polygon), find(partner.polygon)
            if ra != rb:
                parent[ra] = rb
        roots = {find(p) for p in range(len(surf.polygons))}
        if len(roots) > 1:
            out.append("not connected: gluing graph has multiple components")

    return ValidationReport(tuple(out))


def _require_valid(surf: TranslationSurface) -> None:
    report = validate(surf)
    if not report.ok:
        raise ValueError("invalid surface: " + "; ".join(report.violations))


# --- singularities ---------------------------------------------------------


@dataclass(frozen=True)
class ConePoint:
    """One identified vertex of the surface.

    corners lists the (polygon, vertex) corners in the orbit; the total cone
    angle is 2*pi*angle_turns and the induced zero of the one-form dz has
    order zero_order = angle_turns - 1.
    """

    corners: tuple[tuple[int, int], ...]
    angle_turns: int

    @property
    def zero_order(self) -> int:
        return self.angle_turns - 1


def _rational_directions() -> Iterator[Fraction]:
    """Deterministic scan 0, 1, 1/2, 2, 1/3, 3, 2/3, 3/2, ... of slopes."""
    yield Fraction(0)
    for total in count(2):
        for num in range(1, total):
            den = total - num
            if gcd(num, den) == 1:
                yield Fraction(num, den)


def _reference_direction(surf: TranslationSurface) -> PlanarVec:
    """A direction not parallel to any edge, used to count angle sweeps."""
    edge_vecs = [surf.edge_vector(e) for e in surf.edge_refs()]
    for slope in _rational_directions():
        ref = PlanarVec(Fraction(1), slope)
        if all(ref.cross(v) != 0 for v in edge_vecs):
            return ref
    raise AssertionError("unreachable: finitely many edge directions")


def _sector_contains(ref: PlanarVec, start: PlanarVec, end: PlanarVec) -> bool:
    """True iff ref lies strictly inside the ccw sector from start to end.

    start and end are distinct directions (never opposite ends of the same
    ray) and ref is parallel to neither, so the open/closed distinction
    never matters.
    """
    s = start.cross(end)
    if s > 0:
        return start.cross(ref) > 0 and ref.cross(end) > 0
    if s < 0:
        return start.cross(ref) > 0 or ref.cross(end) > 0
    # start and end opposite: the sector is the half plane to the left of start.
    return start.cross(ref) > 0


def _corner_orbits(surf: TranslationSurface) -> list[list[tuple[int, int]]]:
    """Orbits of the corner walk that circles each identified vertex.

    From the corner at vertex i of polygon p, crossing the incoming edge
    (p, i-1) through its pairing lands at the start vertex of the partner
    edge; repeating sweeps counterclockwise around one vertex of the glued
    surface until the walk closes up.
    """
    next_corner: dict[tuple[int, int], tuple[int, int]] = {}
    for p, poly in enumerate(surf.polygons):
        n = poly.n
        for i in range(n):
            partner = surf.pairing[EdgeRef(p, (i - 1) % n)]
            next_corner[(p, i)] = (partner.polygon, partner.edge)
    orbits: list[list[tuple[int, int]]] = []
    seen: set[tuple[int, int]] = set()
    for start in sorted(next_corner):
        if start in seen:
            continue
        orbit = [start]
        seen.add(start)
        cur = next_corner[start]
        while cur != start:
            if cur in seen:
                raise RuntimeError(f"corner orbit through {start} does not close")
            orbit.append(cur)
            seen.add(cur)
            cur = next_corner[cur]
        orbits.append(orbit)
    return orbits


def singularities(surf: TranslationSurface) -> list[ConePoint]:
    """All identified vertices with their exact cone angles.

    The angle around a vertex is a positive multiple of 2*pi.  It is counted
    without transcendental functions: a fixed reference direction crosses the
    interior sector of a corner at most once, and the number of corners in an
    orbit whose sector contains the reference direction equals the number of
    full turns.
    """
    _require_valid(surf)
    ref = _reference_direction(surf)
    points: list[ConePoint] = []
    total_turns = 0
    for orbit in _corner_orbits(surf):
        turns = 0
        for p, i in orbit:
            poly = surf.polygons[p]
            outgoing = poly.edge_vector(i)
            incoming = poly.edge_vector((i - 1) % poly.n)
            if _sector_contains(ref, outgoing, -incoming):
                turns += 1
        if turns < 1:
            raise RuntimeError(f"empty angle sweep at corner orbit {orbit[0]}")
        total_turns += turns
        points.append(ConePoint(tuple(sorted(orbit)), turns))
    # Total interior angle of each n-gon is (n-2)*pi, so the turn counts
    # must add up to half the sum of (n-2) over the polygons.
    expected_double = sum(poly.n - 2 for poly in surf.polygons)
    if 2 * total_turns != expected_double:
        raise RuntimeError(
            f"angle sweep mismatch: counted {total_turns} turns, "
            f"expected {expected_double}/2"
        )
    points.sort(key=lambda cp: cp.corners[0])
    return points


def genus(surf: TranslationSurface) -> int:
    """Genus via the Euler characteristic of the induced cell structure."""
    points = singularities(surf)
    n_vertices = len(points)
    n_edges = sum(poly.n for poly in surf.polygons) // 2
    n_faces = len(surf.polygons)
    chi = n_vertices - n_edges + n_faces
    if chi % 2 != 0:
        raise RuntimeError(f"odd Euler characteristic {chi}")
    g = (2 - chi) // 2
    zeros = sum(cp.zero_order for cp in points)
    if zeros != 2 * g - 2:
        raise RuntimeError(
            f"zero orders sum to {zeros} but 2g-2 = {2 * g - 2}; broken representation"
        )
    return g


@dataclass(frozen=True)
class StratumSignature:
    """Genus plus the descending list of positive zero orders."""

    genus: int
    orders: tuple[int, ...]

    def __str__(self) -> str:
        return "H(" + ",".join(str(m) for m in self.orders) + ")"


def stratum(surf: TranslationSurface) -> StratumSignature:
    """Stratum of the surface; zero orders of marked regular points are dropped."""
    points = singularities(surf)
    g = genus(surf)
    orders = tuple(sorted((cp.zero_order for cp in points if cp.zero_order > 0), reverse=True))
    return StratumSignature(g, orders)


# --- periods ---------------------------------------------------------------


@dataclass(frozen=True)
class PeriodData:
    """One translation vector per edge pair and the rank they span.

    rank is the dimension over the rationals of the span of the edge-pair
    generators modulo the polygon boundary relations, relative to the set of
    actual zeros (for the torus a single marked point is kept).  It always
    equals 2g + n - 1 for n marked points.
    """

    pairs: tuple[tuple[EdgeRef, EdgeRef], ...]
    vectors: tuple[PlanarVec, ...]
    rank: int


def _rational_rank(rows: list[list[Fraction]]) -> int:
    rows = [row[:] for row in rows if any(row)]
    rank = 0
    col_count = len(rows[0]) if rows else 0
    pivot_col = 0
    while rows and pivot_col < col_count:
        pivot_row = next((r for r in rows if r[pivot_col] != 0), None)
        if pivot_row is None:
            pivot_col += 1
            continue
        rows.remove(pivot_row)
        rank += 1
        inv = 1 / pivot_row[pivot_col]
        pivot_row = [x * inv for x in pivot_row]
        for row in rows:
            factor = row[pivot_col]
            if factor != 0:
                for c in range(pivot_col, col_count):
                    row[c] -= factor * pivot_row[c]
        rows = [row for row in rows if any(row)]
        pivot_col += 1
    return rank


def periods(surf: TranslationSurface) -> PeriodData:
    _require_valid(surf)
    pair_list: list[tuple[EdgeRef, EdgeRef]] = []
    pair_index: dict[EdgeRef, int] = {}
    for e in sorted(surf.pairing.keys()):
        partner = surf.pairing[e]
        if e < partner:
            pair_index[e] = len(pair_list)
            pair_index[partner] = len(pair_list)
            pair_list.append((e, partner))
    vectors = tuple(surf.edge_vector(rep) for rep, _ in pair_list)
    n_pairs = len(pair_list)

    # Boundary relation of each polygon, written over the pair generators.
    boundary_rows: list[list[Fraction]] = []
    for p, poly in enumerate(surf.polygons):
        row = [Fraction(0)] * n_pairs
        for i in range(poly.n):
            e = EdgeRef(p, i)
            rep = pair_list[pair_index[e]][0]
            row[pair_index[e]] += 1 if e == rep else -1
        boundary_rows.append(row)

    points = singularities(surf)
    orbit_of: dict[tuple[int, int], int] = {}
    for idx, cp in enumerate(points):
        for corner in cp.corners:
            orbit_of[corner] = idx
    marked = {idx for idx, cp in enumerate(points) if cp.zero_order > 0}
    if not marked:
        marked = {0}

    # Endpoint relations for the unmarked vertices: a relative cycle must
    # have boundary supported on the marked set only.
    unmarked = [idx for idx in range(len(points)) if idx not in marked]
    row_of_orbit = {orbit: r for r, orbit in enumerate(unmarked)}
    endpoint_rows = [[Fraction(0)] * n_pairs for _ in unmarked]
    for k, (rep, _) in enumerate(pair_list):
        p, i = rep
        n = surf.polygons[p].n
        tail = orbit_of[(p, i)]
        head = orbit_of[(p, (i + 1) % n)]
        if tail in row_of_orbit:
            endpoint_rows[row_of_orbit[tail]][k] -= 1
        if head in row_of_orbit:
            endpoint_rows[row_of_orbit[head]][k] += 1

    rank = n_pairs - _rational_rank(endpoint_rows) - _rational_rank(boundary_rows)
    g = genus(surf)
    expected = 2 * g + len(marked) - 1
    if rank != expected:
        raise RuntimeError(
            f"period rank {rank} does not match 2g+n-1 = {expected}; broken representation"
        )
    return PeriodData(tuple(pair_list), vectors, rank)


def is_integral(surf: TranslationSurface) -> bool:
    """True iff every edge vector has integer coordinates."""
    _require_valid(surf)
    return all(surf.edge_vector(e).is_integral for e in surf.edge_refs())


# --- JSON interchange ------------------------------------------------------


def _coord_to_json(value: Fraction) -> int | str:
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def _coord_from_json(raw: object) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise ValueError(f"coordinate must be an integer or 'p/q' string, got {raw!r}")
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad coordinate {raw!r}: {exc}") from exc


def surface_to_json(surf: TranslationSurface) -> dict:
    polys = [
        [[_coord_to_json(p.x), _coord_to_json(p.y)] for p in poly.vertices]
        for poly in surf.polygons
    ]
    pairs = []
    for e in sorted(surf.pairing.keys()):
        partner = surf.pairing[e]
        if e < partner:
            pairs.append([[e.polygon, e.edge], [partner.polygon, partner.edge]])
    return {"polygons": polys, "pairings": pairs}


def surface_from_json(data: Union[str, dict]) -> TranslationSurface:
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict):
        raise ValueError("surface JSON must be an object")
    try:
        raw_polys = data["polygons"]
        raw_pairs = data["pairings"]
    except KeyError as exc:
        raise ValueError(f"surface JSON missing key {exc}") from exc
    polys = []
    for raw in raw_polys:
        polys.append(PolygonChain(tuple(PlanarVec(_coord_from_json(x), _coord_from_json(y)) for x, y in raw)))
    edge_counts = [p.n for p in polys]
    pairing: dict[EdgeRef, EdgeRef] = {}
    for entry in raw_pairs:
        (p1, e1), (p2, e2) = entry
        a, b = EdgeRef(int(p1), int(e1)), EdgeRef(int(p2), int(e2))
        for ref in (a, b):
            if not (0 <= ref.polygon < len(polys)) or not (0 <= ref.edge < edge_counts[ref.polygon]):
                raise ValueError(f"pairing refers to nonexistent edge {tuple(ref)}")
            if ref in pairing:
                raise ValueError(f"edge {tuple(ref)} is paired twice")
        if a == b:
            raise ValueError(f"edge {tuple(a)} is paired with itself")
        pairing[a] = b
        pairing[b] = a
    for p, n in enumerate(edge_counts):
        for e in range(n):
            if EdgeRef(p, e) not in pairing:
                raise ValueError(f"edge ({p}, {e}) is unpaired")
    return TranslationSurface(tuple(polys), pairing)


def load_surface(path: str) -> TranslationSurface:
    with open(path, "r", encoding="utf-8") as fh:
        return surface_from_json(fh.read())


def dump_surface(surf: TranslationSurface, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(surface_to_json(surf), fh, indent=2)
        fh.write("\n")
