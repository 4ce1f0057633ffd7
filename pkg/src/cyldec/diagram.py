"""Permutation encoding of the horizontal saddle-connection structure.

A horizontally periodic translation surface is recorded by a finite edge set
(two oriented copies of each horizontal saddle connection), a permutation
``next_edge`` rotating edges counterclockwise around the cone point they
emanate from, a fixed-point-free involution ``partner`` exchanging the two
copies of each saddle connection, and the set ``positive`` of copies pointing
in the +x direction.  Boundary circles of cylinders are the orbits of
``next_edge ∘ partner``; a full diagram adds a pairing of positive with
negative circles (one per cylinder) and a strictly positive length for each
saddle connection.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from cyldec.quadfield import Scalar, format_scalar, parse_scalar, scalar_sign

__all__ = [
    "CylinderComponent",
    "LengthMismatch",
    "MinimalType",
    "NotAlternating",
    "NotMinimal",
    "NotPermutation",
    "NotStable",
    "OrientationMixedWithinOrbit",
    "Prediagram",
    "SeparatrixDiagram",
    "TauNotFixedPointFreeInvolution",
    "ThetaNotSection",
    "are_isomorphic",
    "canonical_cyclic",
    "canonical_form",
    "connected_components",
    "cylinder_components",
    "diagram_from_words",
    "diagram_isomorphisms",
    "diagrams_isomorphic",
    "edge_pair_id",
    "word_names",
    "format_diagram",
    "format_prediagram",
    "is_alternating",
    "is_stable",
    "make_diagram",
    "minimal_type",
    "parse_diagram",
    "parse_prediagram",
    "realize_type",
    "reverse_diagram",
    "reverse_orientation",
    "sigma_orbits",
    "type_reversal",
    "validate_prediagram",
]


class NotPermutation(ValueError):
    """An array is not a permutation of 0..N-1."""


class TauNotFixedPointFreeInvolution(ValueError):
    """The pairing of edge copies is not a fixed-point-free involution."""


class ThetaNotSection(ValueError):
    """The positive set does not pick exactly one copy per saddle connection."""


class OrientationMixedWithinOrbit(ValueError):
    """A boundary circle mixes both orientations (input not alternating)."""


class NotMinimal(ValueError):
    """Operation requires a single connected component."""


class NotStable(ValueError):
    """The involution moves some edge out of its cone-point orbit."""


class NotAlternating(ValueError):
    """Orientations do not alternate along some cone-point orbit."""


class LengthMismatch(ValueError):
    """Paired boundary circles have different total lengths."""


@dataclass(frozen=True)
class Prediagram:
    """Validated combinatorial structure (edges, rotation, pairing, signs)."""

    next_edge: tuple[int, ...]
    partner: tuple[int, ...]
    positive: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.next_edge)

    def boundary_step(self, edge: int) -> int:
        """One step along a boundary circle: partner, then rotate."""
        return self.next_edge[self.partner[edge]]

    def is_positive(self, edge: int) -> bool:
        return edge in self.positive


@dataclass(frozen=True)
class CylinderComponent:
    """A boundary circle: an orbit of ``boundary_step`` with its orientation."""

    edges: tuple[int, ...]
    positive: bool


@dataclass(frozen=True, order=True)
class MinimalType:
    """Canonical invariant of a connected component.

    ``f`` is the permutation of {0..n-1} linking the copy-pairing to even
    rotation powers, stored as the lexicographically least conjugate under the
    cyclic shift.  Two connected stable alternating structures are isomorphic
    exactly when their types are equal.
    """

    n: int
    f: tuple[int, ...]

    def positive_circles(self) -> int:
        shifted = tuple((self.f[k] + 1) % self.n for k in range(self.n))
        return _cycle_count(shifted)

    def negative_circles(self) -> int:
        return _cycle_count(self.f)


def _check_permutation(values: Sequence[int], size: int, name: str) -> tuple[int, ...]:
    values = tuple(values)
    if len(values) != size or sorted(values) != list(range(size)):
        raise NotPermutation(f"{name} is not a permutation of 0..{size - 1}")
    return values


def validate_prediagram(
    size: int,
    sigma: Sequence[int],
    tau: Sequence[int],
    positive: Iterable[int],
) -> Prediagram:
    """Validate raw arrays and return an immutable :class:`Prediagram`."""
    next_edge = _check_permutation(sigma, size, "sigma")
    partner = _check_permutation(tau, size, "tau")
    for edge in range(size):
        if partner[edge] == edge or partner[partner[edge]] != edge:
            raise TauNotFixedPointFreeInvolution(
                "tau must be an involution without fixed points"
            )
    positive_set = frozenset(positive)
    if not positive_set <= set(range(size)):
        raise ThetaNotSection("positive contains unknown edges")
    for edge in range(size):
        if (edge in positive_set) == (partner[edge] in positive_set):
            raise ThetaNotSection(
                "exactly one copy of each saddle connection must be positive"
            )
    return Prediagram(next_edge, partner, positive_set)


def is_alternating(p: Prediagram) -> bool:
    """True when the rotation maps positive copies onto negative copies."""
    return {p.next_edge[e] for e in p.positive} == set(range(p.size)) - p.positive


def is_stable(p: Prediagram) -> bool:
    """True when the copy-pairing preserves every cone-point orbit."""
    orbit_of = _orbit_index(p.next_edge)
    return all(orbit_of[e] == orbit_of[p.partner[e]] for e in range(p.size))


def _orbit_index(perm: tuple[int, ...]) -> list[int]:
    index = [-1] * len(perm)
    count = 0
    for start in range(len(perm)):
        if index[start] >= 0:
            continue
        edge = start
        while index[edge] < 0:
            index[edge] = count
            edge = perm[edge]
        count += 1
    return index


def _cycles(perm: Sequence[int]) -> list[tuple[int, ...]]:
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycle = []
        edge = start
        while not seen[edge]:
            seen[edge] = True
            cycle.append(edge)
            edge = perm[edge]
        cycles.append(tuple(cycle))
    return cycles


def _cycle_count(perm: Sequence[int]) -> int:
    return len(_cycles(perm))


def sigma_orbits(p: Prediagram) -> list[tuple[int, ...]]:
    """Cone-point orbits of the rotation, each starting at its least edge."""
    return _cycles(p.next_edge)


def connected_components(p: Prediagram) -> list[Prediagram]:
    """Split into orbits of the group generated by rotation and pairing.

    Each component is returned with edges re-indexed by increasing original
    id; single components come back equal to the input.
    """
    components = _component_edge_sets(p)
    result = []
    for edges in components:
        relabel = {old: new for new, old in enumerate(edges)}
        result.append(
            Prediagram(
                tuple(relabel[p.next_edge[old]] for old in edges),
                tuple(relabel[p.partner[old]] for old in edges),
                frozenset(relabel[old] for old in edges if old in p.positive),
            )
        )
    return result


def _component_edge_sets(p: Prediagram) -> list[tuple[int, ...]]:
    seen = [False] * p.size
    components = []
    for start in range(p.size):
        if seen[start]:
            continue
        stack, edges = [start], []
        seen[start] = True
        while stack:
            edge = stack.pop()
            edges.append(edge)
            for nxt in (p.next_edge[edge], p.partner[edge]):
                if not seen[nxt]:
                    seen[nxt] = True
                    stack.append(nxt)
        components.append(tuple(sorted(edges)))
    return components


def cylinder_components(p: Prediagram) -> list[CylinderComponent]:
    """All boundary circles, each rotated to start at its least edge."""
    step = tuple(p.boundary_step(e) for e in range(p.size))
    circles = []
    for cycle in _cycles(step):
        flags = {edge in p.positive for edge in cycle}
        if len(flags) != 1:
            raise OrientationMixedWithinOrbit(
                "boundary circle mixes orientations; structure is not alternating"
            )
        circles.append(CylinderComponent(cycle, flags.pop()))
    return circles


def canonical_cyclic(f: Sequence[int]) -> tuple[int, ...]:
    """Least conjugate of ``f`` under the cyclic shift k -> k+1 (mod n)."""
    n = len(f)
    best = None
    for k in range(n):
        candidate = tuple((f[(i - k) % n] + k) % n for i in range(n))
        if best is None or candidate < best:
            best = candidate
    assert best is not None
    return best


def minimal_type(component: Prediagram) -> MinimalType:
    """Canonical type of a connected stable alternating structure."""
    if len(_component_edge_sets(component)) != 1:
        raise NotMinimal("type is defined for a single connected component")
    if not is_stable(component):
        raise NotStable("type requires a stable structure")
    if not is_alternating(component):
        raise NotAlternating("type requires an alternating structure")
    orbit = sigma_orbits(component)[0]
    n = len(orbit) // 2
    base = min(component.positive)
    along = [base]
    for _ in range(2 * n - 1):
        along.append(component.next_edge[along[-1]])
    index_of = {edge: i for i, edge in enumerate(along)}
    f = [0] * n
    for k in range(n):
        image_index = index_of[component.partner[along[2 * k]]]
        if image_index % 2 == 0:
            raise NotAlternating("pairing does not link opposite orientations")
        f[k] = (image_index - 1) // 2
    return MinimalType(n, canonical_cyclic(f))


def realize_type(t: MinimalType) -> Prediagram:
    """The standard representative: one 2n-cycle with even copies positive."""
    n = t.n
    partner = [0] * (2 * n)
    for k in range(n):
        odd = (2 * t.f[k] + 1) % (2 * n)
        partner[2 * k] = odd
        partner[odd] = 2 * k
    return validate_prediagram(
        2 * n,
        tuple((i + 1) % (2 * n) for i in range(2 * n)),
        tuple(partner),
        frozenset(range(0, 2 * n, 2)),
    )


def reverse_orientation(p: Prediagram) -> Prediagram:
    """Flip every orientation mark (the surface rotated by half a turn)."""
    return Prediagram(
        p.next_edge, p.partner, frozenset(range(p.size)) - p.positive
    )


def type_reversal(t: MinimalType) -> MinimalType:
    """Type of the orientation-reversed component: canonical (f∘shift)^{-1}."""
    n = t.n
    composed = [t.f[(k + 1) % n] for k in range(n)]
    inverse = [0] * n
    for k, value in enumerate(composed):
        inverse[value] = k
    return MinimalType(n, canonical_cyclic(inverse))


def component_types(p: Prediagram) -> list[MinimalType]:
    return sorted(minimal_type(c) for c in connected_components(p))


def are_isomorphic(p: Prediagram, q: Prediagram) -> bool:
    """Isomorphism test via the complete type invariant."""
    for candidate in (p, q):
        if not is_stable(candidate):
            raise NotStable("isomorphism test requires stable structures")
        if not is_alternating(candidate):
            raise NotAlternating("isomorphism test requires alternating structures")
    return component_types(p) == component_types(q)


# -- full diagrams ---------------------------------------------------------


def edge_pair_id(p: Prediagram, edge: int) -> int:
    """Canonical id of a saddle connection: the lesser of its two copies."""
    return min(edge, p.partner[edge])


@dataclass(frozen=True)
class SeparatrixDiagram:
    """Prediagram plus circle pairing and saddle-connection lengths.

    ``pairing`` lists (positive circle index, negative circle index) pairs —
    indices into :func:`cylinder_components` — one per cylinder, in cylinder
    order.  ``metric`` maps each saddle connection id to its length.
    """

    prediagram: Prediagram
    pairing: tuple[tuple[int, int], ...]
    metric_items: tuple[tuple[int, Scalar], ...] = field(repr=False)

    @property
    def metric(self) -> dict[int, Scalar]:
        return dict(self.metric_items)

    @property
    def circles(self) -> list[CylinderComponent]:
        return cylinder_components(self.prediagram)


def circle_length(p: Prediagram, circle: CylinderComponent, metric: Mapping[int, Scalar]):
    total = 0
    for edge in circle.edges:
        total = total + metric[edge_pair_id(p, edge)]
    return total


def make_diagram(
    p: Prediagram,
    pairing: Sequence[tuple[int, int]],
    metric: Mapping[int, Scalar],
) -> SeparatrixDiagram:
    """Validate circle pairing and lengths and build a diagram."""
    circles = cylinder_components(p)
    positive_ids = [i for i, c in enumerate(circles) if c.positive]
    negative_ids = [i for i, c in enumerate(circles) if not c.positive]
    firsts = [a for a, _ in pairing]
    seconds = [b for _, b in pairing]
    if sorted(firsts) != positive_ids or sorted(seconds) != negative_ids:
        raise ValueError("pairing must match positive circles with negative circles")
    lengths = {edge_pair_id(p, e): metric[edge_pair_id(p, e)] for e in range(p.size)}
    for value in lengths.values():
        if scalar_sign(value) <= 0:
            raise ValueError("all saddle-connection lengths must be positive")
    for pos_id, neg_id in pairing:
        if circle_length(p, circles[pos_id], lengths) != circle_length(
            p, circles[neg_id], lengths
        ):
            raise LengthMismatch(
                f"paired circles {pos_id} and {neg_id} have different lengths"
            )
    return SeparatrixDiagram(p, tuple(pairing), tuple(sorted(lengths.items())))


def reverse_diagram(d: SeparatrixDiagram) -> SeparatrixDiagram:
    """The same surface rotated by half a turn: circles swap orientations."""
    p = d.prediagram
    reversed_p = reverse_orientation(p)
    pairing = tuple((neg, pos) for pos, neg in d.pairing)
    return make_diagram(reversed_p, pairing, d.metric)


def diagram_from_words(
    cylinders: Sequence[tuple[Sequence[str], Sequence[str]]],
    lengths: Mapping[str, Scalar] | None = None,
    *,
    require_stable: bool = True,
) -> SeparatrixDiagram:
    """Build a diagram from per-cylinder boundary words.

    Each cylinder is a pair ``(bottom, top)`` of saddle-connection names
    listed left to right; every name must appear exactly once on a bottom and
    once on a top.  Named connection ``s`` becomes the edge pair
    ``(2s, 2s+1)`` (lower copy positive) so lengths stay addressable by name
    order.  Without ``lengths``, all connections get length 1 when that is
    consistent; otherwise circumference-proportional witness lengths must be
    supplied by the caller.

    ``require_stable=False`` admits decompositions whose boundary circles
    visit several cone points; direction tracing can legitimately produce
    those, and operations that need per-circle cone points reject them
    themselves.
    """
    order: list[str] = []
    for bottom, top in cylinders:
        for name in list(bottom) + list(top):
            if name not in order:
                order.append(name)
    index = {name: i for i, name in enumerate(order)}
    bottoms = [name for bottom, _ in cylinders for name in bottom]
    tops = [name for _, top in cylinders for name in top]
    if sorted(bottoms) != sorted(order) or sorted(tops) != sorted(order):
        raise ValueError(
            "each connection must appear exactly once on a bottom and once on a top"
        )
    size = 2 * len(order)
    boundary = [0] * size
    for bottom, top in cylinders:
        cycle = [2 * index[name] for name in bottom]
        for edge, nxt in zip(cycle, cycle[1:] + cycle[:1]):
            boundary[edge] = nxt
        cycle = [2 * index[name] + 1 for name in reversed(top)]
        for edge, nxt in zip(cycle, cycle[1:] + cycle[:1]):
            boundary[edge] = nxt
    tau = [edge + 1 if edge % 2 == 0 else edge - 1 for edge in range(size)]
    sigma = [boundary[tau[edge]] for edge in range(size)]
    p = validate_prediagram(size, sigma, tau, set(range(0, size, 2)))
    if require_stable and not is_stable(p):
        raise NotStable("boundary words do not describe a stable decomposition")
    circles = cylinder_components(p)
    of_edge = {}
    for i, circle in enumerate(circles):
        for edge in circle.edges:
            of_edge[edge] = i
    pairing = [
        (of_edge[2 * index[bottom[0]]], of_edge[2 * index[top[0]] + 1])
        for bottom, top in cylinders
    ]
    if lengths is None:
        metric: Mapping[str, Scalar] = {name: Fraction(1) for name in order}
    else:
        metric = lengths
    metric_by_id = {2 * index[name]: metric[name] for name in order}
    return make_diagram(p, pairing, metric_by_id)


def word_names(d: SeparatrixDiagram) -> dict[int, str]:
    """Stable display names for saddle connections: a, b, c, … by pair id."""
    pairs = sorted({edge_pair_id(d.prediagram, e) for e in range(d.prediagram.size)})
    return {pair: chr(ord("a") + i) for i, pair in enumerate(pairs)}


# -- canonical forms and isomorphism ----------------------------------------


def _relabelings(p: Prediagram):
    """All edge relabelings induced by structure-preserving base choices.

    An isomorphism of connected structures is fixed by the image of a single
    edge, so every candidate arises from an ordering of the components and a
    positive base edge in each; edges are then numbered along a deterministic
    traversal by (rotation, pairing).
    """
    from itertools import permutations, product

    components = _component_edge_sets(p)
    per_component_bases = [
        [e for e in edges if e in p.positive] for edges in components
    ]
    for order in permutations(range(len(components))):
        for bases in product(*[per_component_bases[i] for i in order]):
            relabel: dict[int, int] = {}
            for base in bases:
                queue = [base]
                while queue:
                    edge = queue.pop(0)
                    if edge in relabel:
                        continue
                    relabel[edge] = len(relabel)
                    queue.extend((p.next_edge[edge], p.partner[edge]))
            yield relabel


def _apply_relabeling(p: Prediagram, relabel: Mapping[int, int]) -> Prediagram:
    size = p.size
    next_edge = [0] * size
    partner = [0] * size
    for old in range(size):
        next_edge[relabel[old]] = relabel[p.next_edge[old]]
        partner[relabel[old]] = relabel[p.partner[old]]
    positive = frozenset(relabel[e] for e in p.positive)
    return Prediagram(tuple(next_edge), tuple(partner), positive)


def _circle_key(circles: list[CylinderComponent]) -> dict[tuple[int, ...], int]:
    return {c.edges: i for i, c in enumerate(circles)}


def canonical_form(
    p: Prediagram,
    pairing: Sequence[tuple[int, int]] | None = None,
    metric: Mapping[int, Scalar] | None = None,
) -> tuple:
    """Least serialization over all structure-preserving relabelings.

    Two inputs have equal canonical forms exactly when they are isomorphic at
    the corresponding level (structure only / with pairing / with lengths).
    """
    old_circles = cylinder_components(p) if pairing is not None else []
    best = None
    for relabel in _relabelings(p):
        q = _apply_relabeling(p, relabel)
        record: tuple = (
            q.size,
            q.next_edge,
            q.partner,
            tuple(sorted(q.positive)),
        )
        if pairing is not None:
            new_circles = _circle_key(cylinder_components(q))
            mapped = []
            for pos_id, neg_id in pairing:
                new_pos = _relabel_circle(old_circles[pos_id].edges, relabel, new_circles)
                new_neg = _relabel_circle(old_circles[neg_id].edges, relabel, new_circles)
                mapped.append((new_pos, new_neg))
            record = record + (tuple(sorted(mapped)),)
        if metric is not None:
            lengths = []
            for edge in sorted(set(edge_pair_id(q, e) for e in range(q.size))):
                old_edge = _preimage(relabel, edge)
                lengths.append((edge, format_scalar(metric[edge_pair_id(p, old_edge)])))
            record = record + (tuple(lengths),)
        if best is None or record < best:
            best = record
    assert best is not None
    return best


def _relabel_circle(
    edges: tuple[int, ...],
    relabel: Mapping[int, int],
    new_circles: Mapping[tuple[int, ...], int],
) -> int:
    mapped = [relabel[e] for e in edges]
    least = mapped.index(min(mapped))
    rotated = tuple(mapped[least:] + mapped[:least])
    return new_circles[rotated]


def _preimage(relabel: Mapping[int, int], new_edge: int) -> int:
    for old, new in relabel.items():
        if new == new_edge:
            return old
    raise KeyError(new_edge)


def diagrams_isomorphic(
    d1: SeparatrixDiagram, d2: SeparatrixDiagram, exact_metric: bool = False
) -> bool:
    """Diagram isomorphism.

    Metric-free (default): an isomorphism must transport the circle pairing;
    lengths are ignored, matching classification up to cylinder equivalence.
    With ``exact_metric`` the isomorphism must also transport every length.
    """
    metric1 = d1.metric if exact_metric else None
    metric2 = d2.metric if exact_metric else None
    return canonical_form(d1.prediagram, d1.pairing, metric1) == canonical_form(
        d2.prediagram, d2.pairing, metric2
    )


def diagram_isomorphisms(d1: SeparatrixDiagram, d2: SeparatrixDiagram):
    """Yield explicit edge maps carrying d1 to d2 (pairing and lengths)."""
    p, q = d1.prediagram, d2.prediagram
    if p.size != q.size:
        return
    circles_q = cylinder_components(q)
    pairing_q = {pos: neg for pos, neg in d2.pairing}
    key_q = _circle_key(circles_q)
    circles_p = cylinder_components(p)
    metric_p, metric_q = d1.metric, d2.metric
    for mapping in _isomorphism_maps(p, q):
        if any(metric_p[edge_pair_id(p, e)] != metric_q[edge_pair_id(q, mapping[e])] for e in range(p.size)):
            continue
        ok = True
        for pos_id, neg_id in d1.pairing:
            new_pos = _relabel_circle(circles_p[pos_id].edges, mapping, key_q)
            new_neg = _relabel_circle(circles_p[neg_id].edges, mapping, key_q)
            if pairing_q.get(new_pos) != new_neg:
                ok = False
                break
        if ok:
            yield dict(mapping)


def _isomorphism_maps(p: Prediagram, q: Prediagram):
    """All edge bijections commuting with rotation, pairing and signs."""
    from itertools import permutations, product

    comps_p = _component_edge_sets(p)
    comps_q = _component_edge_sets(q)
    if sorted(map(len, comps_p)) != sorted(map(len, comps_q)):
        return
    for assignment in permutations(range(len(comps_q))):
        if any(
            len(comps_p[i]) != len(comps_q[assignment[i]]) for i in range(len(comps_p))
        ):
            continue
        base_choices = []
        for i, edges in enumerate(comps_p):
            base = next(e for e in edges if e in p.positive)
            targets = [e for e in comps_q[assignment[i]] if e in q.positive]
            base_choices.append([(base, t) for t in targets])
        for picks in product(*base_choices):
            mapping: dict[int, int] = {}
            ok = True
            for base, target in picks:
                stack = [(base, target)]
                while stack and ok:
                    a, b = stack.pop()
                    if a in mapping:
                        if mapping[a] != b:
                            ok = False
                        continue
                    if (a in p.positive) != (b in q.positive):
                        ok = False
                        continue
                    mapping[a] = b
                    stack.append((p.next_edge[a], q.next_edge[b]))
                    stack.append((p.partner[a], q.partner[b]))
                if not ok:
                    break
            if ok and len(mapping) == p.size and len(set(mapping.values())) == p.size:
                yield mapping


# -- text format -------------------------------------------------------------


def format_prediagram(p: Prediagram) -> str:
    cycles = _cycles(p.partner)
    tau_text = "".join(
        "(" + " ".join(map(str, cycle)) + ")" for cycle in cycles
    )
    return (
        f"{p.size}; "
        f"sigma={' '.join(map(str, p.next_edge))}; "
        f"tau={tau_text}; "
        f"pos={{{','.join(map(str, sorted(p.positive)))}}}"
    )


def format_diagram(d: SeparatrixDiagram) -> str:
    pairing_text = ",".join(f"({a},{b})" for a, b in d.pairing)
    metric_text = ",".join(
        f"{edge}:{format_scalar(value)}" for edge, value in d.metric_items
    )
    return (
        format_prediagram(d.prediagram)
        + f"; pairing=[{pairing_text}]; metric={metric_text}"
    )


def _parse_fields(line: str) -> dict[str, str]:
    head, *rest = [part.strip() for part in line.strip().split(";")]
    fields = {"N": head}
    for part in rest:
        if not part:
            continue
        key, value = part.split("=", 1)
        fields[key.strip()] = value.strip()
    return fields


def parse_prediagram(line: str) -> Prediagram:
    fields = _parse_fields(line)
    size = int(fields["N"])
    sigma = [int(x) for x in fields["sigma"].split()]
    tau = [0] * size
    for cycle_text in re.findall(r"\(([^)]*)\)", fields["tau"]):
        cycle = [int(x) for x in cycle_text.split()]
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            tau[a] = b
    positive = {
        int(x) for x in fields["pos"].strip("{}").split(",") if x != ""
    }
    return validate_prediagram(size, sigma, tau, positive)


def parse_diagram(line: str) -> SeparatrixDiagram:
    fields = _parse_fields(line)
    p = parse_prediagram(line)
    pairing = [
        (int(a), int(b))
        for a, b in re.findall(r"\((\d+),(\d+)\)", fields["pairing"])
    ]
    metric: dict[int, Scalar] = {}
    for item in fields["metric"].split(","):
        edge_text, value_text = item.split(":", 1)
        metric[int(edge_text)] = parse_scalar(value_text)
    return make_diagram(p, pairing, metric)
