"""Bundled reference tables of stable cylinder decompositions.

These are the reference classification tables for the two target strata,
stored as boundary words with exact lengths and cone-point marks.  They
anchor the golden files, the regression tests, and the proof-scenario
replays.  Marks split the saddle connections between the two cone points:
``x`` and ``o`` are arbitrary but consistent glyphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from cyldec.diagram import (
    SeparatrixDiagram,
    diagram_from_words,
    sigma_orbits,
)

__all__ = [
    "HYP22",
    "LIST31",
    "ODD22",
    "ReferenceSurface",
    "all_reference_surfaces",
    "cone_point_of_connections",
]


@dataclass(frozen=True)
class ReferenceSurface:
    """One catalogued decomposition: boundary words, lengths, and marks."""

    name: str
    cylinders: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]
    lengths: Mapping[str, Fraction]
    x_marked: frozenset[str]

    def diagram(self) -> SeparatrixDiagram:
        d = diagram_from_words(self.cylinders, self.lengths)
        _check_marks(self, d)
        return d

    @property
    def connection_names(self) -> tuple[str, ...]:
        order: list[str] = []
        for bottom, top in self.cylinders:
            for name in list(bottom) + list(top):
                if name not in order:
                    order.append(name)
        return tuple(order)


def _entry(name, cylinders, x_marked, lengths=None) -> ReferenceSurface:
    cylinders = tuple(
        (tuple(bottom), tuple(top)) for bottom, top in cylinders
    )
    names: list[str] = []
    for bottom, top in cylinders:
        for sc in bottom + top:
            if sc not in names:
                names.append(sc)
    if lengths is None:
        lengths = {}
    full = {sc: Fraction(lengths.get(sc, 1)) for sc in names}
    return ReferenceSurface(name, cylinders, full, frozenset(x_marked))


def cone_point_of_connections(surface: ReferenceSurface) -> dict[str, int]:
    """Map each connection name to its cone point index (0 = x, 1 = o)."""
    return {
        sc: 0 if sc in surface.x_marked else 1
        for sc in surface.connection_names
    }


def _check_marks(surface: ReferenceSurface, d: SeparatrixDiagram) -> None:
    index = {name: i for i, name in enumerate(surface.connection_names)}
    orbits = sigma_orbits(d.prediagram)
    if len(orbits) != 2:
        raise ValueError(f"{surface.name}: expected two cone points")
    orbit_of = {}
    for which, orbit in enumerate(orbits):
        for edge in orbit:
            orbit_of[edge] = which
    by_mark = {}
    for sc in surface.connection_names:
        mark = sc in surface.x_marked
        for edge in (2 * index[sc], 2 * index[sc] + 1):
            key = orbit_of[edge]
            if by_mark.setdefault(mark, key) != key:
                raise ValueError(
                    f"{surface.name}: marks disagree with cone-point orbits"
                )
    if by_mark.get(True) == by_mark.get(False):
        raise ValueError(f"{surface.name}: both marks landed on one cone point")


F = Fraction

# Odd-spin component of the (2,2) stratum: four catalogued decompositions.
ODD22 = (
    _entry(
        "odd22-1",
        [
            (["C"], ["u"]),
            (["B", "u"], ["v"]),
            (["A", "v"], ["A", "w"]),
            (["w"], ["B", "C"]),
        ],
        x_marked={"B", "C", "u"},
        lengths={"v": 2, "w": 2},
    ),
    _entry(
        "odd22-2",
        [
            (["n", "A"], ["n", "w"]),
            (["w"], ["q"]),
            (["m", "q"], ["m", "r"]),
            (["r"], ["A"]),
        ],
        x_marked={"n", "A", "w"},
    ),
    _entry(
        "odd22-3",
        [
            (["A", "C"], ["w"]),
            (["B", "w"], ["A", "q"]),
            (["q"], ["B", "r"]),
            (["r"], ["C"]),
        ],
        x_marked={"w", "B", "r"},
        lengths={"A": F(3, 4), "w": F(7, 4), "B": F(5, 4), "q": F(9, 4)},
    ),
    _entry(
        "odd22-4",
        [
            (["v"], ["w"]),
            (["A", "w", "B"], ["q", "v", "r"]),
            (["q"], ["A"]),
            (["r"], ["B"]),
        ],
        x_marked={"w", "A", "B"},
    ),
)

# Hyperelliptic component of the (2,2) stratum: three catalogued entries.
HYP22 = (
    _entry(
        "hyp22-1",
        [
            (["A"], ["w"]),
            (["w", "v"], ["A", "q"]),
            (["q", "B"], ["v", "r"]),
            (["r"], ["B"]),
        ],
        x_marked={"A", "q", "B"},
    ),
    _entry(
        "hyp22-2",
        [
            (["v"], ["w"]),
            (["B", "w", "A"], ["q", "v", "r"]),
            (["q"], ["A"]),
            (["r"], ["B"]),
        ],
        x_marked={"w", "A", "B"},
        lengths={"B": F(3, 4), "A": F(5, 4), "q": F(5, 4), "r": F(3, 4)},
    ),
    _entry(
        "hyp22-3",
        [
            (["A", "B", "C"], ["E", "D", "w"]),
            (["w", "D", "E"], ["C", "B", "A"]),
        ],
        x_marked={"E", "D", "w"},
        lengths={
            "A": F(17, 20),
            "B": F(23, 20),
            "E": F(23, 20),
            "D": F(17, 20),
        },
    ),
)

# The (3,1) stratum: seven catalogued decompositions.
LIST31 = (
    _entry(
        "h31-1",
        [
            (["B"], ["w"]),
            (["A", "w", "C"], ["A", "q"]),
            (["q"], ["B", "r"]),
            (["r"], ["C"]),
        ],
        x_marked={"B", "r"},
        lengths={"q": 2},
    ),
    _entry(
        "h31-2",
        [
            (["A"], ["w"]),
            (["B", "w", "C"], ["A", "q"]),
            (["q"], ["B", "r"]),
            (["r"], ["C"]),
        ],
        x_marked={"A", "q"},
        lengths={"q": 2},
    ),
    _entry(
        "h31-3",
        [
            (["C"], ["w"]),
            (["A", "B", "w"], ["q", "C"]),
            (["q"], ["A", "r"]),
            (["r"], ["B"]),
        ],
        x_marked={"C", "q"},
        lengths={"q": 2},
    ),
    _entry(
        "h31-4",
        [
            (["A", "B"], ["A", "w"]),
            (["w"], ["q"]),
            (["q", "C"], ["B", "r"]),
            (["r"], ["C"]),
        ],
        x_marked={"q", "C"},
    ),
    _entry(
        "h31-5",
        [
            (["A", "B"], ["w"]),
            (["w", "C"], ["A", "q"]),
            (["q"], ["B", "r"]),
            (["r"], ["C"]),
        ],
        x_marked={"w", "C"},
        lengths={"w": 2, "q": 2},
    ),
    _entry(
        "h31-6",
        [
            (["A"], ["w"]),
            (["w", "B", "C", "D"], ["A", "q"]),
            (["q"], ["B", "D", "C"]),
        ],
        x_marked={"A", "q"},
        lengths={"C": F(17, 20), "D": F(23, 20), "q": 3},
    ),
    _entry(
        "h31-7",
        [
            (["A", "B", "C", "D"], ["w", "v"]),
            (["w"], ["A", "C"]),
            (["v"], ["B", "D"]),
        ],
        x_marked={"w", "v"},
        lengths={"w": 2, "v": 2},
    ),
)


def all_reference_surfaces() -> tuple[ReferenceSurface, ...]:
    return ODD22 + HYP22 + LIST31
