"""Horizontally periodic flat surfaces built from separatrix diagrams.

A surface is a list of flat cylinders glued along their boundary words.  Each
cylinder is the rectangle ``[0, c_i] x [0, h_i]``: the bottom edge carries the
cylinder's bottom word laid out left to right from ``x = 0``, the top edge
carries its top word laid out from ``x = t_i`` (the twist), and every saddle
connection appears on exactly one bottom and one top, glued by translation.

Boundary-word conventions (fixed once, used everywhere): the bottom word of a
cylinder lists its positive circle's edges in boundary order starting from the
least edge; the top word starts at the least edge of the negative circle and
then runs through the orbit in reversed order, which is the geometric
left-to-right order on the top boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from cyldec.diagram import (
    LengthMismatch,
    NotStable,
    SeparatrixDiagram,
    circle_length,
    cylinder_components,
    diagram_from_words,
    diagram_isomorphisms,
    edge_pair_id,
    is_stable,
    reverse_diagram,
    sigma_orbits,
)
from cyldec.quadfield import (
    QuadNum,
    Scalar,
    format_scalar,
    parse_scalar,
    scalar_mod,
    scalar_sign,
)

__all__ = [
    "CylinderSurface",
    "DimensionMismatch",
    "HeightCollapse",
    "MixedStructure",
    "MoreThanTwoSingularities",
    "NonPositiveHeight",
    "NotTwoSingularities",
    "ZeroOrderSingularity",
    "build_surface",
    "format_surface",
    "horizontal_diagram",
    "mixed_structure",
    "parse_surface",
    "rel_deform",
    "stratum_signature",
    "surface_rotate_pi",
    "surfaces_isomorphic",
    "twist_deform",
]


class NonPositiveHeight(ValueError):
    """Every cylinder height must be strictly positive."""


class DimensionMismatch(ValueError):
    """A per-cylinder vector has the wrong length."""


class ZeroOrderSingularity(ValueError):
    """Marked points (cone angle 2π) are unsupported."""


class MoreThanTwoSingularities(ValueError):
    """The mixed-cylinder structure needs at most two cone points."""


class NotTwoSingularities(ValueError):
    """The deformation needs exactly two cone points."""


class HeightCollapse(ValueError):
    """A height reached zero and surgery was not requested."""


@dataclass(frozen=True)
class CylinderSurface:
    """Immutable flat surface: diagram plus heights and twists per cylinder."""

    diagram: SeparatrixDiagram
    heights: tuple[Scalar, ...]
    twists: tuple[Scalar, ...]

    @property
    def cylinder_count(self) -> int:
        return len(self.diagram.pairing)

    @property
    def circumferences(self) -> tuple[Scalar, ...]:
        metric = self.diagram.metric
        p = self.diagram.prediagram
        circles = cylinder_components(p)
        return tuple(
            circle_length(p, circles[pos], metric) for pos, _ in self.diagram.pairing
        )

    @property
    def bottom_edge_words(self) -> tuple[tuple[int, ...], ...]:
        """Per cylinder, the bottom boundary's edges in left-to-right order."""
        circles = cylinder_components(self.diagram.prediagram)
        return tuple(circles[pos].edges for pos, _ in self.diagram.pairing)

    @property
    def top_edge_words(self) -> tuple[tuple[int, ...], ...]:
        """Per cylinder, the top boundary's edges in left-to-right order."""
        circles = cylinder_components(self.diagram.prediagram)
        words = []
        for _, neg in self.diagram.pairing:
            orbit = circles[neg].edges
            words.append((orbit[0],) + tuple(reversed(orbit[1:])))
        return tuple(words)

    @property
    def areas(self) -> tuple[Scalar, ...]:
        return tuple(c * h for c, h in zip(self.circumferences, self.heights))

    @property
    def area(self) -> Scalar:
        total = 0
        for value in self.areas:
            total = value + total
        return total

    def lengths_of(self, edges: Sequence[int]) -> list[Scalar]:
        metric = self.diagram.metric
        p = self.diagram.prediagram
        return [metric[edge_pair_id(p, e)] for e in edges]


def build_surface(
    d: SeparatrixDiagram,
    heights: Sequence[Scalar],
    twists: Sequence[Scalar],
) -> CylinderSurface:
    """Glue the diagram's circles into a flat surface with the given moduli."""
    cylinders = len(d.pairing)
    if len(heights) != cylinders or len(twists) != cylinders:
        raise DimensionMismatch(
            f"expected {cylinders} heights and twists, got "
            f"{len(heights)} and {len(twists)}"
        )
    for value in heights:
        if scalar_sign(value) <= 0:
            raise NonPositiveHeight(f"cylinder height {value!r} is not positive")
    p = d.prediagram
    circles = cylinder_components(p)
    metric = d.metric
    circumferences = []
    for pos, neg in d.pairing:
        c = circle_length(p, circles[pos], metric)
        if c != circle_length(p, circles[neg], metric):
            raise LengthMismatch("paired circles have different lengths")
        circumferences.append(c)
    reduced = tuple(
        scalar_mod(t, c) for t, c in zip(twists, circumferences)
    )
    return CylinderSurface(d, tuple(heights), reduced)


def stratum_signature(s: CylinderSurface) -> tuple[tuple[int, ...], int]:
    """Cone-point orders (descending) and the genus they force."""
    orders = sorted(
        (len(orbit) // 2 - 1 for orbit in sigma_orbits(s.diagram.prediagram)),
        reverse=True,
    )
    if any(k == 0 for k in orders):
        raise ZeroOrderSingularity("marked points are unsupported")
    total = sum(orders)
    return tuple(orders), (total + 2) // 2


def horizontal_diagram(s: CylinderSurface) -> SeparatrixDiagram:
    """Rebuild the diagram from the boundary words (inverse of build)."""
    p = s.diagram.prediagram
    metric = s.diagram.metric
    cylinders = []
    lengths = {}
    for bottom, top in zip(s.bottom_edge_words, s.top_edge_words):
        bottom_names = tuple(str(edge_pair_id(p, e)) for e in bottom)
        top_names = tuple(str(edge_pair_id(p, e)) for e in top)
        cylinders.append((bottom_names, top_names))
        for e in bottom + top:
            lengths[str(edge_pair_id(p, e))] = metric[edge_pair_id(p, e)]
    return diagram_from_words(cylinders, lengths)


@dataclass(frozen=True)
class MixedStructure:
    """Cross-section sign data for a two-cone-point decomposition.

    ``delta[i]`` is 0 when cylinder i's boundaries share a cone point, +1
    when its cross-section runs from cone point 0 up to cone point 1, and −1
    in the opposite case.  ``collapse_plus`` holds the minimal-height
    cylinders of the +1 class (the first to die under the height deformation)
    and ``keep_plus`` the rest; likewise for the −1 class.
    """

    delta: tuple[int, ...]
    plus: tuple[int, ...]
    minus: tuple[int, ...]
    non_mixed: tuple[int, ...]
    collapse_plus: tuple[int, ...]
    keep_plus: tuple[int, ...]
    collapse_minus: tuple[int, ...]
    keep_minus: tuple[int, ...]
    gamma: tuple[Scalar, ...]
    deformation_vector: tuple[Scalar, ...]
    height_vector: tuple[Scalar, ...]
    one_singularity: bool = False


def mixed_structure(s: CylinderSurface) -> MixedStructure:
    """Classify cylinders by the cone points on their two boundaries."""
    p = s.diagram.prediagram
    if not is_stable(p):
        raise NotStable("boundary circles visit several cone points")
    orbits = sigma_orbits(p)
    if len(orbits) > 2:
        raise MoreThanTwoSingularities(f"{len(orbits)} cone points")
    orbit_of = {}
    for index, orbit in enumerate(orbits):
        for edge in orbit:
            orbit_of[edge] = index
    circles = cylinder_components(p)
    delta = []
    for pos, neg in s.diagram.pairing:
        bottom = orbit_of[circles[pos].edges[0]]
        top = orbit_of[circles[neg].edges[0]]
        if bottom == top:
            delta.append(0)
        else:
            delta.append(1 if (bottom, top) == (0, 1) else -1)
    delta = tuple(delta)

    def argmin_heights(indices: tuple[int, ...]) -> tuple[int, ...]:
        if not indices:
            return ()
        best = indices[0]
        for i in indices[1:]:
            if scalar_sign(s.heights[i] - s.heights[best]) < 0:
                best = i
        return tuple(i for i in indices if s.heights[i] == s.heights[best])

    plus = tuple(i for i, d in enumerate(delta) if d == 1)
    minus = tuple(i for i, d in enumerate(delta) if d == -1)
    non_mixed = tuple(i for i, d in enumerate(delta) if d == 0)
    collapse_plus = argmin_heights(plus)
    collapse_minus = argmin_heights(minus)
    gamma = tuple(1 / c for c in s.circumferences)
    return MixedStructure(
        delta=delta,
        plus=plus,
        minus=minus,
        non_mixed=non_mixed,
        collapse_plus=collapse_plus,
        keep_plus=tuple(i for i in plus if i not in collapse_plus),
        collapse_minus=collapse_minus,
        keep_minus=tuple(i for i in minus if i not in collapse_minus),
        gamma=gamma,
        deformation_vector=tuple(d * g for d, g in zip(delta, gamma)),
        height_vector=tuple(h * g for h, g in zip(s.heights, gamma)),
        one_singularity=len(orbits) == 1,
    )


def twist_deform(s: CylinderSurface, x: Sequence[Scalar]) -> CylinderSurface:
    """Twist each cylinder by the fraction ``x_i`` of its circumference."""
    if len(x) != s.cylinder_count:
        raise DimensionMismatch(
            f"expected {s.cylinder_count} twist fractions, got {len(x)}"
        )
    new_twists = tuple(
        scalar_mod(t + value * c, c)
        for t, value, c in zip(s.twists, x, s.circumferences)
    )
    return CylinderSurface(s.diagram, s.heights, new_twists)


def rel_deform(
    s: CylinderSurface,
    t: Scalar,
    axis: str = "imaginary",
    allow_surgery: bool = False,
) -> CylinderSurface:
    """Move one cone point relative to the other by ``t`` along an axis.

    The real axis shifts the twist of each mixed cylinder by ``t·δ_i``; the
    imaginary axis changes its height by ``t·δ_i``.  Circumferences and the
    gluing pattern never change while every height stays positive; crossing a
    height-zero wall raises unless ``allow_surgery``, in which case the
    surface is rebuilt from polygons and re-decomposed horizontally.
    """
    if axis not in ("real", "imaginary"):
        raise ValueError(f"unknown axis {axis!r}")
    orbits = sigma_orbits(s.diagram.prediagram)
    if len(orbits) != 2:
        raise NotTwoSingularities(f"{len(orbits)} cone points")
    structure = mixed_structure(s)
    if axis == "real":
        new_twists = tuple(
            scalar_mod(tw + t * d, c)
            for tw, d, c in zip(s.twists, structure.delta, s.circumferences)
        )
        return CylinderSurface(s.diagram, s.heights, new_twists)
    new_heights = tuple(
        h + t * d for h, d in zip(s.heights, structure.delta)
    )
    if all(scalar_sign(h) > 0 for h in new_heights):
        return CylinderSurface(s.diagram, new_heights, s.twists)
    if not allow_surgery:
        raise HeightCollapse(
            "a cylinder height reached zero; pass allow_surgery to continue"
        )
    from cyldec.polygons import rel_deform_with_surgery

    return rel_deform_with_surgery(s, t)


def surface_rotate_pi(s: CylinderSurface) -> CylinderSurface:
    """The image of the surface under −Id (rotation by half a turn).

    Each cylinder maps to itself with bottom and top exchanged and both words
    reversed; the normalized twist picks up the difference between the two
    old canonical start lengths.
    """
    metric = s.diagram.metric
    p = s.diagram.prediagram
    new_twists = []
    for i in range(s.cylinder_count):
        bottom = s.bottom_edge_words[i]
        top = s.top_edge_words[i]
        shift = (
            metric[edge_pair_id(p, top[0])] - metric[edge_pair_id(p, bottom[0])]
        )
        new_twists.append(scalar_mod(s.twists[i] + shift, s.circumferences[i]))
    return CylinderSurface(reverse_diagram(s.diagram), s.heights, tuple(new_twists))


def _edge_positions(s: CylinderSurface, cylinder: int) -> dict[int, Scalar]:
    """Start abscissa of every boundary edge of one cylinder, in its chart."""
    metric = s.diagram.metric
    p = s.diagram.prediagram
    positions: dict[int, Scalar] = {}
    x: Scalar = Fraction(0)
    for edge in s.bottom_edge_words[cylinder]:
        positions[edge] = x
        x = x + metric[edge_pair_id(p, edge)]
    x = s.twists[cylinder]
    c = s.circumferences[cylinder]
    for edge in s.top_edge_words[cylinder]:
        positions[edge] = scalar_mod(x, c)
        x = x + metric[edge_pair_id(p, edge)]
    return positions


def surfaces_isomorphic(s1: CylinderSurface, s2: CylinderSurface) -> bool:
    """Exact translation isomorphism (lengths, heights, and twists)."""
    if s1.cylinder_count != s2.cylinder_count:
        return False
    circles2 = cylinder_components(s2.diagram.prediagram)
    circle_of_edge2 = {}
    for index, circle in enumerate(circles2):
        for edge in circle.edges:
            circle_of_edge2[edge] = index
    cylinder_of_pos2 = {pos: i for i, (pos, _) in enumerate(s2.diagram.pairing)}
    positions2 = [_edge_positions(s2, i) for i in range(s2.cylinder_count)]

    for mapping in diagram_isomorphisms(s1.diagram, s2.diagram):
        ok = True
        for i in range(s1.cylinder_count):
            image_circle = circle_of_edge2[mapping[s1.bottom_edge_words[i][0]]]
            j = cylinder_of_pos2[image_circle]
            if s1.heights[i] != s2.heights[j]:
                ok = False
                break
            pos1 = _edge_positions(s1, i)
            c = s1.circumferences[i]
            shift = None
            for edge, x in pos1.items():
                difference = scalar_mod(positions2[j][mapping[edge]] - x, c)
                if shift is None:
                    shift = difference
                elif difference != shift:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


# -- text format ---------------------------------------------------------


def _surface_discriminant(s: CylinderSurface) -> int:
    values = list(s.diagram.metric.values()) + list(s.heights) + list(s.twists)
    disc = 1
    for value in values:
        if isinstance(value, QuadNum) and value.disc is not None:
            if disc not in (1, value.disc):
                raise ValueError("surface mixes quadratic discriminants")
            disc = value.disc
    return disc


def format_surface(s: CylinderSurface) -> str:
    """Serialize to the structured text format (parseable back)."""
    p = s.diagram.prediagram
    names: dict[int, str] = {}

    def name_of(edge: int) -> str:
        pair = edge_pair_id(p, edge)
        if pair not in names:
            names[pair] = chr(ord("a") + len(names))
        return names[pair]

    lines = [f"D={_surface_discriminant(s)}"]
    rows = []
    for i in range(s.cylinder_count):
        bottom = ",".join(name_of(e) for e in s.bottom_edge_words[i])
        top = ",".join(name_of(e) for e in s.top_edge_words[i])
        rows.append(
            f"c={format_scalar(s.circumferences[i])}"
            f";h={format_scalar(s.heights[i])}"
            f";t={format_scalar(s.twists[i])}"
            f";top=[{top}];bottom=[{bottom}]"
        )
    lines.extend(rows)
    metric = s.diagram.metric
    table = " ".join(
        f"{name}={format_scalar(metric[pair])}"
        for pair, name in sorted(names.items(), key=lambda kv: kv[1])
    )
    lines.append(f"lengths: {table}")
    return "\n".join(lines) + "\n"


def parse_surface(text: str) -> CylinderSurface:
    """Rebuild a surface from the structured text format."""
    lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
    if not lines or not lines[0].startswith("D="):
        raise ValueError("surface text must start with a D=<int> header")
    int(lines[0][2:])  # validated; the discriminant is implied by the values
    cylinder_rows = []
    lengths: dict[str, Scalar] = {}
    for line in lines[1:]:
        if line.startswith("lengths:"):
            for item in line[len("lengths:"):].split():
                name, _, value = item.partition("=")
                lengths[name] = parse_scalar(value)
            continue
        fields = {}
        for piece in line.split(";"):
            key, _, value = piece.partition("=")
            fields[key] = value
        cylinder_rows.append(fields)
    if not cylinder_rows:
        raise ValueError("no cylinder records found")

    def word(field_text: str) -> tuple[str, ...]:
        inner = field_text.strip()
        if not (inner.startswith("[") and inner.endswith("]")):
            raise ValueError(f"malformed word field {field_text!r}")
        inner = inner[1:-1]
        return tuple(part for part in inner.split(",") if part)

    cylinders = [
        (word(row["bottom"]), word(row["top"])) for row in cylinder_rows
    ]
    diagram = diagram_from_words(cylinders, lengths)
    heights = [parse_scalar(row["h"]) for row in cylinder_rows]
    written_twists = [parse_scalar(row["t"]) for row in cylinder_rows]

    # The written layout puts the bottom word at x=0 and the top word at x=t.
    # Normalize to the canonical convention (both words starting at their
    # least edge) by sliding to the canonical start of each word.
    index = {}
    for bottom, top in cylinders:
        for name in bottom + top:
            if name not in index:
                index[name] = len(index)
    circles = cylinder_components(diagram.prediagram)
    metric = diagram.metric
    twists = []
    for row_index, (bottom, top) in enumerate(cylinders):
        pos, neg = diagram.pairing[row_index]
        c = circle_length(diagram.prediagram, circles[pos], metric)
        canonical_bottom = circles[pos].edges[0]
        x = Fraction(0)
        x_bottom = None
        for name in bottom:
            if 2 * index[name] == canonical_bottom:
                x_bottom = x
            x = x + lengths[name]
        canonical_top = circles[neg].edges[0]
        x = written_twists[row_index]
        x_top = None
        for name in top:
            if 2 * index[name] + 1 == canonical_top:
                x_top = x
            x = x + lengths[name]
        if x_bottom is None or x_top is None:
            raise ValueError("boundary words do not cover their circles")
        twists.append(scalar_mod(x_top - x_bottom, c))
    return build_surface(diagram, heights, twists)
