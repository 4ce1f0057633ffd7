"""Exact polygon (triangulated) model of a flat surface.

A surface is a collection of Euclidean triangles with sides glued in
opposite pairs by translation.  Each triangle is stored as its three
counterclockwise side vectors (summing to zero, positive doubled area);
side ``i`` runs from vertex ``i`` to vertex ``i + 1``.  Every vertex of the
triangulation is a cone point of the surface, so straight-line rays can be
traced exactly: a separatrix closes up if and only if the trace reaches a
vertex.

The module provides the polygon side of the cylinder <-> polygon bridge:
building a triangulation from a cylinder surface, applying a matrix of
positive determinant, re-deriving the cylinder decomposition in any
in-field direction by tracing separatrices, and the wall-crossing surgery
for the relative-period deformation (areas are linear in the deformation
time, so wall times are exact; at a wall the degenerate cells are either
flipped away or welded along the collapsed cylinder's core circle).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from cyldec.diagram import diagram_from_words, sigma_orbits
from cyldec.quadfield import (
    QuadNum,
    Scalar,
    scalar_mod,
    scalar_sign,
    scalar_sqrt,
)

__all__ = [
    "NonFieldDirection",
    "NonPositiveDeterminant",
    "STEP_CAP_DEFAULT",
    "StepCapExceeded",
    "TriangulatedSurface",
    "apply_matrix",
    "decompose_direction",
    "from_cylinder_surface",
    "rel_deform_with_surgery",
]

STEP_CAP_DEFAULT = 10_000

Vec = tuple[Scalar, Scalar]
Side = tuple[int, int]


class NonPositiveDeterminant(ValueError):
    """The matrix must have positive determinant."""


class NonFieldDirection(ValueError):
    """The direction vector must live in the surface's number field."""


class StepCapExceeded(RuntimeError):
    """A separatrix trace used more crossings than the step cap allows."""


def _coerce(value: object) -> Scalar:
    if isinstance(value, QuadNum):
        return value
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    raise TypeError(f"exact scalar required, got {type(value).__name__}")


def _cross(u: Vec, v: Vec) -> Scalar:
    return u[0] * v[1] - u[1] * v[0]


def _add(u: Vec, v: Vec) -> Vec:
    return (u[0] + v[0], u[1] + v[1])


def _sub(u: Vec, v: Vec) -> Vec:
    return (u[0] - v[0], u[1] - v[1])


def _neg(u: Vec) -> Vec:
    return (-u[0], -u[1])


def _is_zero(u: Vec) -> bool:
    return scalar_sign(u[0]) == 0 and scalar_sign(u[1]) == 0


@dataclass(frozen=True)
class TriangulatedSurface:
    """Triangles as ccw side-vector triples glued in opposite pairs.

    ``partner[t][s]`` names the side glued to side ``s`` of triangle ``t``;
    glued sides carry opposite vectors.  ``vertex_marks``, when present,
    tags each triangle corner with the index of the cone point sitting
    there (corners identified around a vertex share the tag).
    """

    triangles: tuple[tuple[Vec, Vec, Vec], ...]
    partner: tuple[tuple[Side, Side, Side], ...]
    vertex_marks: Optional[tuple[tuple[int, int, int], ...]] = None

    def __post_init__(self) -> None:
        for t, sides in enumerate(self.triangles):
            total = _add(_add(sides[0], sides[1]), sides[2])
            if not _is_zero(total):
                raise ValueError(f"triangle {t} does not close up")
            if scalar_sign(_cross(sides[0], sides[1])) <= 0:
                raise ValueError(f"triangle {t} is not positively oriented")
        for t, row in enumerate(self.partner):
            for s, (t2, s2) in enumerate(row):
                if (t2, s2) == (t, s):
                    raise ValueError("a side cannot be glued to itself")
                if self.partner[t2][s2] != (t, s):
                    raise ValueError("side gluing is not an involution")
                if not _is_zero(
                    _add(self.triangles[t][s], self.triangles[t2][s2])
                ):
                    raise ValueError("glued sides must carry opposite vectors")
        if self.vertex_marks is not None:
            for corner in _corners(self):
                t, i = corner
                t2, i2 = _ccw_next(self, corner)
                if self.vertex_marks[t][i] != self.vertex_marks[t2][i2]:
                    raise ValueError("vertex marks differ around one vertex")

    @property
    def doubled_area(self) -> Scalar:
        total: Scalar = Fraction(0)
        for sides in self.triangles:
            total = total + _cross(sides[0], sides[1])
        return total


def _vertex_positions(sides: tuple[Vec, Vec, Vec]) -> tuple[Vec, Vec, Vec]:
    zero = (Fraction(0), Fraction(0))
    return (zero, sides[0], _add(sides[0], sides[1]))


def _corners(polys: TriangulatedSurface) -> Iterable[tuple[int, int]]:
    for t in range(len(polys.triangles)):
        for i in range(3):
            yield (t, i)


def _ccw_next(polys: TriangulatedSurface, corner: tuple[int, int]) -> tuple[int, int]:
    """The next corner counterclockwise around the same vertex."""
    t, i = corner
    return polys.partner[t][(i + 2) % 3]


def _cw_prev(polys: TriangulatedSurface, corner: tuple[int, int]) -> tuple[int, int]:
    t, i = corner
    t2, s2 = polys.partner[t][i]
    return (t2, (s2 + 1) % 3)


# ---------------------------------------------------------------------------
# cylinder surface -> triangulation


def from_cylinder_surface(s) -> TriangulatedSurface:
    """Triangulate each cylinder rectangle over its boundary cone points.

    A cylinder with ``p`` bottom and ``q`` top saddle connections becomes a
    fan of ``p + q`` triangles between the two boundary lines; horizontal
    sides are then glued across cylinders by saddle-connection identity and
    the two ends of each strip are glued to each other.
    """
    prediagram = s.diagram.prediagram
    orbits = sigma_orbits(prediagram)
    orbit_of = {e: k for k, orbit in enumerate(orbits) for e in orbit}

    triangles: list[tuple[Vec, Vec, Vec]] = []
    marks: list[tuple[int, int, int]] = []
    gluing: dict[Side, Side] = {}
    horizontal_side: dict[int, Side] = {}

    for i in range(s.cylinder_count):
        bottom, top = s.bottom_edge_words[i], s.top_edge_words[i]
        lb, lt = s.lengths_of(bottom), s.lengths_of(top)
        height, twist = s.heights[i], s.twists[i]
        xb: list[Scalar] = [Fraction(0)]
        for length in lb:
            xb.append(xb[-1] + length)
        xt: list[Scalar] = [twist]
        for length in lt:
            xt.append(xt[-1] + length)
        mark_bottom = orbit_of[bottom[0]]
        mark_top = orbit_of[top[0]]

        a = b = 0
        strip_start: Optional[Side] = None
        prev_diagonal: Optional[Side] = None
        while a < len(lb) or b < len(lt):
            if a == len(lb):
                advance_bottom = False
            elif b == len(lt):
                advance_bottom = True
            else:
                advance_bottom = scalar_sign(xb[a + 1] - xt[b + 1]) <= 0
            t_index = len(triangles)
            if advance_bottom:
                # (B_a, B_{a+1}, T_b): base on the bottom line.
                v0 = (lb[a], Fraction(0))
                v1 = (xt[b] - xb[a + 1], height)
                v2 = (xb[a] - xt[b], -height)
                triangles.append((v0, v1, v2))
                marks.append((mark_bottom, mark_bottom, mark_top))
                horizontal_side[bottom[a]] = (t_index, 0)
                new_diagonal = (t_index, 1)
                a += 1
            else:
                # (B_a, T_{b+1}, T_b): base on the top line.
                v0 = (xt[b + 1] - xb[a], height)
                v1 = (-lt[b], Fraction(0))
                v2 = (xb[a] - xt[b], -height)
                triangles.append((v0, v1, v2))
                marks.append((mark_bottom, mark_top, mark_top))
                horizontal_side[top[b]] = (t_index, 1)
                new_diagonal = (t_index, 0)
                b += 1
            back = (t_index, 2)
            if prev_diagonal is None:
                strip_start = back
            else:
                gluing[prev_diagonal] = back
                gluing[back] = prev_diagonal
            prev_diagonal = new_diagonal
        assert strip_start is not None and prev_diagonal is not None
        gluing[prev_diagonal] = strip_start
        gluing[strip_start] = prev_diagonal

    for edge, side in horizontal_side.items():
        other = horizontal_side[prediagram.partner[edge]]
        gluing[side] = other
        gluing[other] = side

    partner = tuple(
        tuple(gluing[(t, s)] for s in range(3)) for t in range(len(triangles))
    )
    return TriangulatedSurface(tuple(triangles), partner, tuple(marks))


# ---------------------------------------------------------------------------
# matrix action


def _transform(polys: TriangulatedSurface, m: Sequence[Sequence[Scalar]]) -> TriangulatedSurface:
    (m00, m01), (m10, m11) = m
    new = tuple(
        tuple((m00 * v[0] + m01 * v[1], m10 * v[0] + m11 * v[1]) for v in sides)
        for sides in polys.triangles
    )
    return TriangulatedSurface(new, polys.partner, polys.vertex_marks)


def apply_matrix(s, matrix) -> TriangulatedSurface:
    """Act on a cylinder surface by a 2x2 matrix of positive determinant.

    Returns the polygon model of the image surface; its cylinder structure
    in any direction is recovered with :func:`decompose_direction`.
    """
    rows = tuple(tuple(_coerce(x) for x in row) for row in matrix)
    if len(rows) != 2 or any(len(row) != 2 for row in rows):
        raise ValueError("a 2x2 matrix is required")
    det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if scalar_sign(det) <= 0:
        raise NonPositiveDeterminant(f"determinant {det} is not positive")
    return _transform(from_cylinder_surface(s), rows)


# ---------------------------------------------------------------------------
# exact ray tracing

_EAST: Vec = (Fraction(1), Fraction(0))
_NORTH: Vec = (Fraction(0), Fraction(1))


def _exit_through(
    sides: tuple[Vec, Vec, Vec], p: Vec, d: Vec
) -> tuple[int, Vec, Optional[int]]:
    """First boundary crossing of the ray ``p + r·d`` (r > 0).

    Returns ``(side, point, vertex)`` where ``vertex`` is the index of the
    triangle vertex hit exactly, if any.
    """
    positions = _vertex_positions(sides)
    best: Optional[tuple[Scalar, int, Vec]] = None
    for side in range(3):
        a = positions[side]
        b = positions[(side + 1) % 3]
        w = _sub(b, a)
        denom = _cross(d, w)
        if scalar_sign(denom) == 0:
            if scalar_sign(_cross(_sub(a, p), d)) != 0:
                continue
            # Ray runs along this side: it exits at an endpoint ahead.
            for endpoint in (a, b):
                delta = _sub(endpoint, p)
                if scalar_sign(d[0]) != 0:
                    r = delta[0] / d[0]
                else:
                    r = delta[1] / d[1]
                if scalar_sign(r) > 0 and (
                    best is None or scalar_sign(r - best[0]) < 0
                ):
                    best = (r, side, endpoint)
            continue
        r = _cross(_sub(a, p), w) / denom
        if scalar_sign(r) <= 0:
            continue
        u = _cross(_sub(a, p), d) / denom
        if scalar_sign(u) < 0 or scalar_sign(u - 1) > 0:
            continue
        q = _add(p, (d[0] * r, d[1] * r))
        if best is None or scalar_sign(r - best[0]) < 0:
            best = (r, side, q)
    if best is None:
        raise RuntimeError("ray failed to leave the triangle")
    _, side, q = best
    vertex: Optional[int] = None
    for v, position in enumerate(_vertex_positions(sides)):
        if q[0] == position[0] and q[1] == position[1]:
            vertex = v
            break
    return side, q, vertex


def _cross_gluing(
    polys: TriangulatedSurface, t: int, side: int, q: Vec
) -> tuple[int, Vec]:
    """Carry a boundary point across a gluing into the partner's chart."""
    t2, s2 = polys.partner[t][side]
    a = _vertex_positions(polys.triangles[t])[side]
    b2 = _vertex_positions(polys.triangles[t2])[(s2 + 1) % 3]
    return t2, _add(q, _sub(b2, a))


def _corner_wedge(polys: TriangulatedSurface, corner: tuple[int, int]) -> tuple[Vec, Vec]:
    t, i = corner
    sides = polys.triangles[t]
    return sides[i], _neg(sides[(i + 2) % 3])


def _contains_east(wedge: tuple[Vec, Vec]) -> bool:
    d1, d2 = wedge
    if scalar_sign(d1[1]) == 0 and scalar_sign(d1[0]) > 0:
        return True
    return scalar_sign(d1[1]) < 0 and scalar_sign(d2[1]) > 0


def _contains_west(wedge: tuple[Vec, Vec]) -> bool:
    d1, d2 = wedge
    if scalar_sign(d1[1]) == 0 and scalar_sign(d1[0]) < 0:
        return True
    return scalar_sign(d1[1]) > 0 and scalar_sign(d2[1]) < 0


Piece = tuple[int, Vec, Vec]


def _trace_separatrix(
    polys: TriangulatedSurface, corner: tuple[int, int], step_cap: int
) -> tuple[list[Piece], tuple[int, int]]:
    """Follow the eastward ray from a cone point until the next cone point.

    Returns the per-triangle segments of the saddle connection and the
    corner (a west-containing wedge) at which it arrives.
    """
    t, i = corner
    p = _vertex_positions(polys.triangles[t])[i]
    pieces: list[Piece] = []
    for _ in range(step_cap):
        side, q, vertex = _exit_through(polys.triangles[t], p, _EAST)
        pieces.append((t, p, q))
        if vertex is not None:
            arrival = (t, vertex)
            if _contains_west(_corner_wedge(polys, arrival)):
                return pieces, arrival
            arrival = _ccw_next(polys, arrival)
            if not _contains_west(_corner_wedge(polys, arrival)):
                raise RuntimeError("separatrix arrival corner not found")
            return pieces, arrival
        t, p = _cross_gluing(polys, t, side, q)
    raise StepCapExceeded(f"separatrix still open after {step_cap} crossings")


def _next_horizontal_germ(
    polys: TriangulatedSurface,
    corner: tuple[int, int],
    east_corners: Mapping[tuple[int, int], int],
    clockwise: bool,
) -> int:
    """The saddle connection leaving half a turn from a west arrival."""
    step = _cw_prev if clockwise else _ccw_next
    current = step(polys, corner)
    for _ in range(6 * len(polys.triangles) + 6):
        if current in east_corners:
            return east_corners[current]
        current = step(polys, current)
    raise RuntimeError("no horizontal germ found around the vertex")


def _register_pieces(
    polys: TriangulatedSurface, traces: Sequence[list[Piece]]
) -> dict[int, list[tuple[int, Scalar, Scalar, Scalar, Scalar]]]:
    """Index saddle-connection segments by triangle for vertical probes.

    Segments running along a glued side are registered on both sides of
    the gluing so a probe sees them no matter which chart it travels in.
    """
    registry: dict[int, list[tuple[int, Scalar, Scalar, Scalar, Scalar]]] = {}

    def note(tri: int, sc: int, y: Scalar, x1: Scalar, x2: Scalar, cum: Scalar) -> None:
        registry.setdefault(tri, []).append((sc, y, x1, x2, cum))

    for sc, pieces in enumerate(traces):
        cum: Scalar = Fraction(0)
        for t, p_in, p_out in pieces:
            assert p_in[1] == p_out[1]
            note(t, sc, p_in[1], p_in[0], p_out[0], cum)
            positions = _vertex_positions(polys.triangles[t])
            for side in range(3):
                a = positions[side]
                w = _sub(positions[(side + 1) % 3], a)
                if (
                    scalar_sign(_cross(w, _sub(p_in, a))) == 0
                    and scalar_sign(_cross(w, _sub(p_out, a))) == 0
                ):
                    t2, q_in = _cross_gluing(polys, t, side, p_in)
                    _, q_out = _cross_gluing(polys, t, side, p_out)
                    note(t2, sc, q_in[1], q_in[0], q_out[0], cum)
                    break
            cum = cum + (p_out[0] - p_in[0])
    return registry


def _probe_up(
    polys: TriangulatedSurface,
    t: int,
    p: Vec,
    registry: Mapping[int, list[tuple[int, Scalar, Scalar, Scalar, Scalar]]],
    step_cap: int,
) -> Optional[tuple[int, Scalar, Scalar]]:
    """Shoot a vertical ray up to the first saddle connection above.

    Returns ``(sc, position along sc, rise)``, or None when the ray runs
    into a cone point or a segment endpoint (caller retries elsewhere).
    """
    rise: Scalar = Fraction(0)
    for _ in range(step_cap):
        side, q, vertex = _exit_through(polys.triangles[t], p, _NORTH)
        hit: Optional[tuple[Scalar, int, Scalar, Scalar]] = None
        for sc, y, x1, x2, cum in registry.get(t, ()):
            if scalar_sign(y - p[1]) <= 0 or scalar_sign(y - q[1]) > 0:
                continue
            if scalar_sign(p[0] - x1) == 0 or scalar_sign(x2 - p[0]) == 0:
                return None
            if scalar_sign(p[0] - x1) > 0 and scalar_sign(x2 - p[0]) > 0:
                if hit is None or scalar_sign(y - hit[0]) < 0:
                    hit = (y, sc, x1, cum)
        if hit is not None:
            y, sc, x1, cum = hit
            return sc, cum + (p[0] - x1), rise + (y - p[1])
        if vertex is not None:
            return None
        rise = rise + (q[1] - p[1])
        t, p = _cross_gluing(polys, t, side, q)
    raise StepCapExceeded(f"vertical probe still open after {step_cap} crossings")


def _probe_start(
    polys: TriangulatedSurface, pieces: Sequence[Piece], offset: Scalar
) -> Optional[tuple[int, Vec]]:
    """Locate the point at ``offset`` along a saddle connection.

    Picks the chart in which "up" points into the triangle; returns None
    when the offset lands exactly on a segment junction.
    """
    cum: Scalar = Fraction(0)
    for t, p_in, p_out in pieces:
        length = p_out[0] - p_in[0]
        if scalar_sign(offset - cum) <= 0 or scalar_sign(offset - (cum + length)) >= 0:
            cum = cum + length
            continue
        p = (p_in[0] + (offset - cum), p_in[1])
        positions = _vertex_positions(polys.triangles[t])
        for side in range(3):
            a = positions[side]
            w = _sub(positions[(side + 1) % 3], a)
            if scalar_sign(_cross(w, _sub(p, a))) != 0:
                continue
            if scalar_sign(w[0]) > 0:
                return t, p
            if scalar_sign(w[0]) < 0:
                t2, p2 = _cross_gluing(polys, t, side, p)
                return t2, p2
        return t, p
    return None


_OFFSET_FRACTIONS = [
    Fraction(num, den)
    for den in (2, 3, 5, 7, 11, 13, 17, 19)
    for num in range(1, den)
]


def _horizontal_decomposition(polys: TriangulatedSurface, step_cap: int):
    """Cylinder decomposition of the horizontal direction, traced exactly."""
    from cyldec.surface import build_surface

    east_corners: dict[tuple[int, int], int] = {}
    for corner in _corners(polys):
        if _contains_east(_corner_wedge(polys, corner)):
            east_corners[corner] = len(east_corners)

    traces: list[list[Piece]] = []
    arrivals: list[tuple[int, int]] = []
    for corner in east_corners:
        pieces, arrival = _trace_separatrix(polys, corner, step_cap)
        traces.append(pieces)
        arrivals.append(arrival)
    lengths: list[Scalar] = [
        sum((p_out[0] - p_in[0] for _, p_in, p_out in pieces), Fraction(0))
        for pieces in traces
    ]

    # Rotating clockwise by half a turn from the west-pointing arrival stays
    # in the sector above the line: the continuation along the bottom circle
    # of the cylinder above.  Counterclockwise continues the top circle of
    # the cylinder below.  Both orbits run geometrically left to right.
    bottom_next = [
        _next_horizontal_germ(polys, arrival, east_corners, clockwise=True)
        for arrival in arrivals
    ]
    top_next = [
        _next_horizontal_germ(polys, arrival, east_corners, clockwise=False)
        for arrival in arrivals
    ]

    def orbits(step: Sequence[int]) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        found: list[tuple[int, ...]] = []
        for start in range(len(step)):
            if start in seen:
                continue
            orbit = [start]
            seen.add(start)
            current = step[start]
            while current != start:
                orbit.append(current)
                seen.add(current)
                current = step[current]
            least = orbit.index(min(orbit))
            found.append(tuple(orbit[least:] + orbit[:least]))
        found.sort(key=lambda orbit: orbit[0])
        return found

    bottom_circles = orbits(bottom_next)
    top_circles = orbits(top_next)
    top_of = {
        sc: k for k, orbit in enumerate(top_circles) for sc in orbit
    }

    registry = _register_pieces(polys, traces)

    cylinders: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
    heights: list[Scalar] = []
    twists: list[Scalar] = []
    used_tops: list[int] = []
    for orbit in bottom_circles:
        start = orbit[0]
        result = None
        for fraction in _OFFSET_FRACTIONS:
            offset = lengths[start] * fraction
            located = _probe_start(polys, traces[start], offset)
            if located is None:
                continue
            result = _probe_up(polys, located[0], located[1], registry, step_cap)
            if result is not None:
                break
        if result is None:
            raise RuntimeError("no clean vertical probe found for a cylinder")
        hit_sc, position, rise = result
        top_index = top_of[hit_sc]
        used_tops.append(top_index)
        top_orbit = top_circles[top_index]
        before = top_orbit[: top_orbit.index(hit_sc)]
        prefix = sum((lengths[sc] for sc in before), Fraction(0))
        twist = offset - position - prefix
        cylinders.append(
            (
                tuple(f"s{sc}" for sc in orbit),
                tuple(f"s{sc}" for sc in top_orbit),
            )
        )
        heights.append(rise)
        twists.append(twist)
    if sorted(used_tops) != list(range(len(top_circles))):
        raise RuntimeError("bottom and top circles do not pair up")

    named_lengths = {f"s{sc}": lengths[sc] for sc in range(len(traces))}

    # The built surface lays each boundary word out again starting from its
    # first-named connection, so re-express every twist against those
    # anchors rather than the rotation chosen above.
    appearance: dict[str, int] = {}
    for bottom, top in cylinders:
        for name in bottom + top:
            appearance.setdefault(name, len(appearance))

    def offset_of(word: tuple[str, ...], anchor: str) -> Scalar:
        total: Scalar = Fraction(0)
        for name in word:
            if name == anchor:
                return total
            total = total + named_lengths[name]
        raise AssertionError(anchor)

    twists = [
        twist
        + offset_of(top, min(top, key=appearance.__getitem__))
        - offset_of(bottom, min(bottom, key=appearance.__getitem__))
        for (bottom, top), twist in zip(cylinders, twists)
    ]

    diagram = diagram_from_words(cylinders, named_lengths, require_stable=False)
    surface = build_surface(diagram, heights, twists)
    if scalar_sign(surface.area + surface.area - polys.doubled_area) != 0:
        raise RuntimeError("cylinder areas do not add up to the surface area")
    return surface


def _field_discriminant(values: Iterable[Scalar]) -> Optional[int]:
    disc: Optional[int] = None
    for value in values:
        if isinstance(value, QuadNum) and not value.is_rational:
            if disc is None:
                disc = value.disc
            elif disc != value.disc:
                raise NonFieldDirection("mixed discriminants")
    return disc


def decompose_direction(
    polys: TriangulatedSurface,
    direction: Sequence[object],
    step_cap: int = STEP_CAP_DEFAULT,
):
    """Cylinder decomposition of a polygon surface in a given direction.

    The direction is rotated to horizontal — by an exact field rotation
    when the direction's length is a field element, otherwise by the
    similarity ``[[dx, dy], [-dy, dx]]`` (which scales all lengths by the
    direction's length but keeps the combinatorics).  Returns the
    decomposition, or None when some separatrix stays open past
    ``step_cap`` crossings and periodicity is undetermined.
    """
    try:
        dx, dy = (_coerce(x) for x in direction)
    except TypeError as exc:
        raise NonFieldDirection(str(exc)) from None
    if scalar_sign(dx) == 0 and scalar_sign(dy) == 0:
        raise ValueError("direction must be nonzero")
    surface_disc = _field_discriminant(
        v for sides in polys.triangles for vec in sides for v in vec
    )
    direction_disc = _field_discriminant((dx, dy))
    if direction_disc is not None and direction_disc != surface_disc:
        raise NonFieldDirection(
            "direction does not live in the surface's field"
        )
    norm = dx * dx + dy * dy
    root = scalar_sqrt(norm, surface_disc)
    if root is not None:
        matrix = ((dx / root, dy / root), (-dy / root, dx / root))
    else:
        matrix = ((dx, dy), (-dy, dx))
    rotated = _transform(polys, matrix)
    try:
        return _horizontal_decomposition(rotated, step_cap)
    except StepCapExceeded:
        return None


# ---------------------------------------------------------------------------
# relative-period surgery


def _flip(
    triangles: list[tuple[Vec, Vec, Vec]],
    partner: list[list[Side]],
    marks: list[list[int]],
    t: int,
    s: int,
) -> None:
    """Replace the diagonal ``(t, s)`` by the other quadrilateral diagonal."""
    t2, s2 = partner[t][s]
    pos1 = _vertex_positions(triangles[t])
    pos2 = _vertex_positions(triangles[t2])
    shift = _sub(pos1[s], pos2[(s2 + 1) % 3])
    r = pos1[(s + 2) % 3]
    p_start = pos1[s]
    p_end = pos1[(s + 1) % 3]
    apex = _add(pos2[(s2 + 2) % 3], shift)

    mark_r = marks[t][(s + 2) % 3]
    mark_start = marks[t][s]
    mark_end = marks[t][(s + 1) % 3]
    mark_apex = marks[t2][(s2 + 2) % 3]

    new_a = (_sub(p_start, r), _sub(apex, p_start), _sub(r, apex))
    new_b = (_sub(p_end, apex), _sub(r, p_end), _sub(apex, r))

    old_sides = {
        (t, (s + 2) % 3): (t, 0),
        (t2, (s2 + 1) % 3): (t, 1),
        (t2, (s2 + 2) % 3): (t2, 0),
        (t, (s + 1) % 3): (t2, 1),
    }
    outside = {
        new: partner[old_t][old_s] for (old_t, old_s), new in old_sides.items()
    }
    triangles[t] = new_a
    triangles[t2] = new_b
    marks[t] = [mark_r, mark_start, mark_apex]
    marks[t2] = [mark_apex, mark_end, mark_r]
    partner[t][2] = (t2, 2)
    partner[t2][2] = (t, 2)
    for new, glued in outside.items():
        glued = old_sides.get(glued, glued)
        partner[new[0]][new[1]] = glued
        partner[glued[0]][glued[1]] = new


def _doubled_area(sides: Sequence[Vec]) -> Scalar:
    return _cross(sides[0], sides[1])


def _area_slope(sides: Sequence[Vec], mark_row: Sequence[int], direction: int) -> Scalar:
    """Time derivative of the doubled area under the vertical mark velocities."""
    speeds = [mark_row[(i + 1) % 3] - mark_row[i] for i in range(3)]
    return (sides[0][0] * speeds[1] - sides[1][0] * speeds[0]) * direction


def _abs_scalar(value: Scalar) -> Scalar:
    return value if scalar_sign(value) >= 0 else -value


def _flat_cells(triangles: list[tuple[Vec, Vec, Vec]]) -> list[int]:
    return [
        t
        for t in range(len(triangles))
        if scalar_sign(_doubled_area(triangles[t])) == 0
    ]


def _flat_groups(
    partner: list[list[Side]], flats: list[int]
) -> list[list[int]]:
    """Connected components of the zero-area cells under side adjacency."""
    flat_set = set(flats)
    groups: list[list[int]] = []
    seen: set[int] = set()
    for start in flats:
        if start in seen:
            continue
        component = [start]
        seen.add(start)
        queue = [start]
        while queue:
            a = queue.pop()
            for s in range(3):
                b, _ = partner[a][s]
                if b in flat_set and b not in seen:
                    seen.add(b)
                    component.append(b)
                    queue.append(b)
        groups.append(sorted(component))
    return groups


def _is_horizontal(sides: tuple[Vec, Vec, Vec]) -> bool:
    return all(scalar_sign(v[1]) == 0 for v in sides)


def _open_slanted_cell(
    triangles: list[tuple[Vec, Vec, Vec]],
    partner: list[list[Side]],
    marks: list[list[int]],
    t: int,
) -> None:
    """Re-cut around a cone point that crossed a single saddle connection.

    The crossing flattens one triangle: its three vertices line up, with
    the middle one sitting on the longest side.  That side stops being a
    geodesic, so replace the diagonal of the surrounding quadrilateral by
    flipping it against the (non-degenerate) neighbour; both new cells are
    strictly positive again at the event time.
    """
    dxs = [_abs_scalar(triangles[t][s][0]) for s in range(3)]
    long_side = 0
    for s in (1, 2):
        if scalar_sign(dxs[s] - dxs[long_side]) > 0:
            long_side = s
    t2, _ = partner[t][long_side]
    if t2 == t or scalar_sign(_doubled_area(triangles[t2])) <= 0:
        raise AssertionError("pierced side lacks a non-degenerate neighbour")
    _flip(triangles, partner, marks, t, long_side)
    if (
        scalar_sign(_doubled_area(triangles[t])) <= 0
        or scalar_sign(_doubled_area(triangles[t2])) <= 0
    ):
        raise AssertionError("re-cutting a pierced cell failed")


class _Seam:
    """A cylinder collapsed onto its core circle, laid out exactly.

    ``lower``/``upper`` hold the boundary intervals contributed by the
    non-degenerate cells below/above the seam line, as
    ``(start, length, outside_side)`` tuples sorted along the circle and
    tiling it; starts are normalised into ``[0, circumference)``.
    """

    def __init__(
        self,
        cells: list[int],
        circumference: Scalar,
        lower: list[tuple[Scalar, Scalar, Side]],
        upper: list[tuple[Scalar, Scalar, Side]],
        lower_mark: int,
        upper_mark: int,
    ) -> None:
        self.cells = cells
        self.circumference = circumference
        self.lower = lower
        self.upper = upper
        self.lower_mark = lower_mark
        self.upper_mark = upper_mark


def _sorted_by_start(
    entries: list[tuple[Scalar, Scalar, Side]]
) -> list[tuple[Scalar, Scalar, Side]]:
    ordered = list(entries)
    for i in range(1, len(ordered)):
        current = ordered[i]
        j = i
        while j > 0 and scalar_sign(ordered[j - 1][0] - current[0]) > 0:
            ordered[j] = ordered[j - 1]
            j -= 1
        ordered[j] = current
    return ordered


def _seam_layout(
    triangles: list[tuple[Vec, Vec, Vec]],
    partner: list[list[Side]],
    marks: list[list[int]],
    group: list[int],
) -> _Seam:
    """Lay a connected family of flat cells out along its core circle."""
    from cyldec.surface import HeightCollapse

    group_set = set(group)
    offsets: dict[int, Scalar] = {group[0]: Fraction(0)}
    queue = [group[0]]
    wraps: list[Scalar] = []
    while queue:
        a = queue.pop()
        pos_a = _vertex_positions(triangles[a])
        for s in range(3):
            b, s2 = partner[a][s]
            if b not in group_set:
                continue
            pos_b = _vertex_positions(triangles[b])
            expected = offsets[a] + pos_a[s][0] - pos_b[(s2 + 1) % 3][0]
            if b not in offsets:
                offsets[b] = expected
                queue.append(b)
            else:
                gap = _abs_scalar(expected - offsets[b])
                if scalar_sign(gap) != 0:
                    wraps.append(gap)
    if not wraps:
        raise AssertionError("a degenerate strip fails to close up")
    c = wraps[0]
    for gap in wraps[1:]:
        if scalar_sign(gap - c) < 0:
            c = gap
    for gap in wraps:
        if scalar_sign(scalar_mod(gap, c)) != 0:
            raise AssertionError("inconsistent circumference of a collapsed cylinder")

    lower: list[tuple[Scalar, Scalar, Side]] = []
    upper: list[tuple[Scalar, Scalar, Side]] = []
    lower_marks: set[int] = set()
    upper_marks: set[int] = set()
    for a in group:
        pos_a = _vertex_positions(triangles[a])
        for s in range(3):
            outside = partner[a][s]
            if outside[0] in group_set:
                continue
            dx = triangles[a][s][0]
            start = offsets[a] + pos_a[s][0]
            end_marks = {marks[a][s], marks[a][(s + 1) % 3]}
            if scalar_sign(dx) > 0:
                lower.append((scalar_mod(start, c), dx, outside))
                lower_marks |= end_marks
            else:
                upper.append((scalar_mod(start + dx, c), -dx, outside))
                upper_marks |= end_marks
    if len(lower_marks) != 1 or len(upper_marks) != 1 or lower_marks == upper_marks:
        raise AssertionError("a collapsed cylinder must run between the two cone points")

    lower = _sorted_by_start(lower)
    upper = _sorted_by_start(upper)
    for cover in (lower, upper):
        total = sum((length for _, length, _ in cover), Fraction(0))
        if scalar_sign(total - c) != 0:
            raise AssertionError("a seam boundary does not tile the core circle")
        for i in range(len(cover) - 1):
            if scalar_sign(cover[i][0] + cover[i][1] - cover[i + 1][0]) != 0:
                raise AssertionError("a seam boundary does not tile the core circle")
    for p, _, _ in lower:
        for q, _, _ in upper:
            if scalar_sign(p - q) == 0:
                raise HeightCollapse(
                    "cone points collide at the deformation wall"
                )
    return _Seam(
        group, c, lower, upper, lower_marks.pop(), upper_marks.pop()
    )


class _Patch:
    """Replacement cells for one fanned boundary cell, in local indices."""

    def __init__(self, seam_side: int) -> None:
        self.seam_side = seam_side
        self.cells: list[tuple[Vec, Vec, Vec]] = []
        self.marks: list[tuple[int, int, int]] = []
        self.internal: list[tuple[tuple[int, int], tuple[int, int]]] = []


def _lift_into(start: Scalar, low: Scalar, c: Scalar) -> Scalar:
    """Representative of ``start`` (mod ``c``) inside ``[low, low + c)``."""
    return low + scalar_mod(start - low, c)


def _merge_sort_exact(values: list) -> list:
    ordered = list(values)
    for i in range(1, len(ordered)):
        current = ordered[i]
        j = i
        while j > 0 and scalar_sign(ordered[j - 1] - current) > 0:
            ordered[j] = ordered[j - 1]
            j -= 1
        ordered[j] = current
    return ordered


def _collapse_patches(
    seam: _Seam,
    triangles: list[tuple[Vec, Vec, Vec]],
    marks: list[list[int]],
) -> tuple[dict[int, _Patch], list[tuple[Side, Side]], set[int]]:
    """Weld the two covers of a seam to each other.

    The collapsed cylinder degenerates onto its core circle, so in the
    limit each side of one cover lies against the matching stretch of the
    other cover; glue them together.  Where a cone-point visit of the
    opposite circle sits strictly inside a side, the side's cell is first
    cut into a fan from its off-line vertex, so the visit becomes a corner
    of every cell touching it and the vertical motion can carry it onward.
    Returns per-cell fan patches, the cover-to-cover gluings (addressing
    fan sub-sides as ``(cell, fan index)`` and whole sides as
    ``(cell, side)``), and the set of fanned cells.
    """
    c = seam.circumference
    junctions = {
        id(seam.lower): [entry[0] for entry in seam.upper],
        id(seam.upper): [entry[0] for entry in seam.lower],
    }
    inserted_mark = {
        id(seam.lower): seam.upper_mark,
        id(seam.upper): seam.lower_mark,
    }

    patches: dict[int, _Patch] = {}
    fanned: set[int] = set()
    sub_sides: dict[int, list[tuple[Scalar, Side]]] = {
        id(seam.lower): [],
        id(seam.upper): [],
    }

    for cover in (seam.lower, seam.upper):
        registry = sub_sides[id(cover)]
        opposite = junctions[id(cover)]
        new_mark = inserted_mark[id(cover)]
        for start, length, (f, sf) in cover:
            cuts = _merge_sort_exact(
                [
                    _lift_into(q, start, c)
                    for q in opposite
                    if scalar_sign(scalar_mod(q - start, c)) != 0
                    and scalar_sign(scalar_mod(q - start, c) - length) < 0
                ]
            )
            if not cuts:
                registry.append((start, (f, sf)))
                continue
            if f in patches:
                raise AssertionError("a cell cannot border two seams")
            fanned.add(f)
            pos = _vertex_positions(triangles[f])
            vs, vs1 = pos[sf], pos[(sf + 1) % 3]
            va = pos[(sf + 2) % 3]
            descending = scalar_sign(triangles[f][sf][0]) < 0
            if descending:
                params = [start + length, *reversed(cuts), start]
            else:
                params = [start, *cuts, start + length]
            corner_marks = [marks[f][sf]]
            corner_marks.extend(new_mark for _ in cuts)
            corner_marks.append(marks[f][(sf + 1) % 3])
            apex_mark = marks[f][(sf + 2) % 3]
            # the layout parameter runs along the circle at unit speed, so
            # the cut positions translate directly into the cell's chart
            points = [(vs[0] + (p - params[0]), vs[1]) for p in params]
            points[0] = vs
            points[-1] = vs1
            patch = _Patch(sf)
            count = len(points) - 1
            for i in range(count):
                q0, q1 = points[i], points[i + 1]
                patch.cells.append((_sub(q1, q0), _sub(va, q1), _sub(q0, va)))
                patch.marks.append(
                    (corner_marks[i], corner_marks[i + 1], apex_mark)
                )
                if i + 1 < count:
                    patch.internal.append(((i, 1), (i + 1, 2)))
                low = params[i + 1] if descending else params[i]
                registry.append((scalar_mod(low, c), (f, i)))
            patches[f] = patch

    gluings: list[tuple[Side, Side]] = []
    lower_list = sub_sides[id(seam.lower)]
    upper_list = sub_sides[id(seam.upper)]
    if len(lower_list) != len(upper_list):
        raise AssertionError("cover subdivisions do not match")
    zero = Fraction(0)
    lower_sorted = _sorted_by_start([(s, zero, ref) for s, ref in lower_list])
    upper_sorted = _sorted_by_start([(s, zero, ref) for s, ref in upper_list])
    for (ls, _, lref), (us, _, uref) in zip(lower_sorted, upper_sorted):
        if scalar_sign(ls - us) != 0:
            raise AssertionError("cover subdivisions do not line up")
        gluings.append((lref, uref))
    return patches, gluings, fanned


def _wall_surgery(
    triangles: list[tuple[Vec, Vec, Vec]],
    partner: list[list[Side]],
    marks: list[list[int]],
) -> None:
    """Repair the triangulation at a degeneration of the vertical motion.

    Zero-area cells come in two kinds.  An isolated slanted cell records a
    cone point crossing one saddle connection: re-cut it with a single
    deterministic flip.  A horizontal family records a cylinder collapsed
    onto its core circle: lay the seam out exactly, check that no two cone
    points meet there (``HeightCollapse`` otherwise), then weld the two
    covers of the circle together.  The welded complex is the flat limit
    of the collapsing family, and every visit on the welded line is a
    corner of all cells touching it, so continuing the linear motion from
    here carries a cone point straight through the line and the onward
    family reopens into the correct new cylinder by itself.
    """
    from cyldec.surface import HeightCollapse

    flats = _flat_cells(triangles)
    if not flats:
        return
    for t in flats:
        if any(_is_zero(v) for v in triangles[t]):
            raise HeightCollapse("cone points collide at the deformation wall")

    for group in _flat_groups(partner, flats):
        if all(_is_horizontal(triangles[t]) for t in group):
            continue
        if len(group) > 1:
            raise AssertionError(
                "simultaneous collinear degenerations are not supported"
            )
        _open_slanted_cell(triangles, partner, marks, group[0])

    flats = _flat_cells(triangles)
    if not flats:
        return
    seams = [
        _seam_layout(triangles, partner, marks, group)
        for group in _flat_groups(partner, flats)
    ]

    removed: set[int] = set()
    for seam in seams:
        removed.update(seam.cells)
    fan_plan: list[tuple[int, _Patch]] = []
    direct: list[tuple[Side, Side]] = []
    for seam in seams:
        patches, gluings, fanned = _collapse_patches(seam, triangles, marks)
        removed.update(fanned)
        direct.extend(gluings)
        fan_plan.extend(patches.items())

    keep = [t for t in range(len(triangles)) if t not in removed]
    new_id = {old: i for i, old in enumerate(keep)}
    out_triangles: list[tuple[Vec, Vec, Vec]] = [triangles[t] for t in keep]
    out_marks: list[list[int]] = [list(marks[t]) for t in keep]

    fan_patch: dict[int, tuple[_Patch, int]] = {}
    for origin, patch in fan_plan:
        base = len(out_triangles)
        fan_patch[origin] = (patch, base)
        for cell, mark_row in zip(patch.cells, patch.marks):
            out_triangles.append(cell)
            out_marks.append(list(mark_row))

    out_partner: list[list[Optional[Side]]] = [
        [None, None, None] for _ in out_triangles
    ]

    def weld(a: Side, b: Side) -> None:
        out_partner[a[0]][a[1]] = b
        out_partner[b[0]][b[1]] = a

    def moved(ref: Side) -> Side:
        """Where an old side reference lives now (fans relocate sides)."""
        old_t, old_s = ref
        if old_t in new_id:
            return (new_id[old_t], old_s)
        if old_t not in fan_patch:
            raise AssertionError("dangling reference into a removed seam cell")
        patch, base = fan_patch[old_t]
        sf = patch.seam_side
        if old_s == (sf + 1) % 3:
            return (base + len(patch.cells) - 1, 1)
        if old_s == (sf + 2) % 3:
            return (base, 2)
        raise AssertionError("the welded side of a fan has no single image")

    # gluings inherited from cells that survive (possibly fanned), then
    # fan-internal diagonals, then the cover-to-cover welds.
    for old in keep:
        for s in range(3):
            other, _ = partner[old][s]
            if other in new_id or other in fan_patch:
                weld(moved((old, s)), moved(partner[old][s]))
    for origin, (patch, base) in fan_patch.items():
        sf = patch.seam_side
        for old_s in ((sf + 1) % 3, (sf + 2) % 3):
            weld(moved((origin, old_s)), moved(partner[origin][old_s]))
        for local_a, local_b in patch.internal:
            weld(
                (base + local_a[0], local_a[1]),
                (base + local_b[0], local_b[1]),
            )
    for lref, uref in direct:
        lf, li = lref
        uf, ui = uref
        left = (fan_patch[lf][1] + li, 0) if lf in fan_patch else moved(lref)
        right = (fan_patch[uf][1] + ui, 0) if uf in fan_patch else moved(uref)
        weld(left, right)

    final_partner: list[list[Side]] = []
    for row in out_partner:
        if any(side is None for side in row):
            raise AssertionError("surgery left an unglued side")
        final_partner.append([side for side in row if side is not None])

    triangles[:] = out_triangles
    marks[:] = out_marks
    partner[:] = final_partner


def rel_deform_with_surgery(s, t: Scalar, step_cap: int = STEP_CAP_DEFAULT):
    """Imaginary-axis relative deformation allowed to cross height walls.

    Moves the second cone point vertically by ``t`` relative to the first
    in the polygon model (side vectors change linearly, so triangle areas
    are linear in time and the first wall is an exact rational function of
    the data), repairing the triangulation at each wall, then re-derives
    the horizontal cylinder decomposition.
    """
    from cyldec.surface import HeightCollapse, NotTwoSingularities

    polys = from_cylinder_surface(s)
    assert polys.vertex_marks is not None
    mark_values = {mark for row in polys.vertex_marks for mark in row}
    if mark_values != {0, 1}:
        raise NotTwoSingularities("surgery needs exactly two cone points")

    triangles = [tuple(sides) for sides in polys.triangles]
    partner = [list(row) for row in polys.partner]
    marks = [list(row) for row in polys.vertex_marks]
    remaining = _coerce(t)
    direction = scalar_sign(remaining)
    if direction == 0:
        return s

    for _ in range(step_cap):
        wall: Optional[Scalar] = None
        for sides, mark_row in zip(triangles, marks):
            area = _doubled_area(sides)
            slope = _area_slope(sides, mark_row, direction)
            if scalar_sign(slope) >= 0:
                continue
            time_to_zero = area / (-slope)
            if wall is None or scalar_sign(time_to_zero - wall) < 0:
                wall = time_to_zero
        magnitude = remaining if direction > 0 else -remaining
        step = magnitude if wall is None or scalar_sign(magnitude - wall) < 0 else wall
        signed = step * direction
        for index, (sides, mark_row) in enumerate(zip(triangles, marks)):
            triangles[index] = tuple(
                (
                    v[0],
                    v[1] + signed * (mark_row[(i + 1) % 3] - mark_row[i]),
                )
                for i, v in enumerate(sides)
            )
        remaining = remaining - signed
        at_wall = wall is not None and scalar_sign(step - wall) == 0
        done = scalar_sign(remaining) == 0
        if at_wall:
            _wall_surgery(triangles, partner, marks)
        if done:
            rebuilt = TriangulatedSurface(
                tuple(triangles),
                tuple(tuple(row) for row in partner),
                tuple(tuple(row) for row in marks),
            )
            return _horizontal_decomposition(rebuilt, step_cap)
    raise StepCapExceeded(
        f"deformation crossed more than {step_cap} walls"
    )
