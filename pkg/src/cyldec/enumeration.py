"""Enumeration and classification of stable cylinder decompositions.

For a profile of cone-point orders this module enumerates the connected-
component types, assembles all balanced stable alternating structures, walks
every circle pairing, decides exact metric feasibility, and groups the
surviving diagrams into isomorphism classes, optionally up to rotating the
surface by half a turn and optionally restricted to decompositions with at
least one cylinder joining the two cone points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from typing import Iterable, Sequence

from cyldec.diagram import (
    MinimalType,
    Prediagram,
    SeparatrixDiagram,
    canonical_cyclic,
    canonical_form,
    component_types,
    cylinder_components,
    edge_pair_id,
    make_diagram,
    realize_type,
    reverse_diagram,
    sigma_orbits,
    type_reversal,
    validate_prediagram,
)
from cyldec.feasibility import FeasibilityWitness, strict_positive_kernel

__all__ = [
    "CensusRow",
    "ClassificationEntry",
    "UnequalComponentCounts",
    "UnsupportedProfile",
    "classify_stratum",
    "enumerate_pairings",
    "enumerate_prediagrams",
    "enumerate_types",
    "equality_system",
    "metric_feasible",
    "pairing_word",
    "random_feasible_metrics",
    "reversal_representative",
    "stratum_census",
    "surface_connected",
]


class UnsupportedProfile(ValueError):
    """The requested profile is outside the supported enumeration domain."""


class UnequalComponentCounts(ValueError):
    """No pairing exists: positive and negative circle counts differ."""


def enumerate_types(n: int, quotient_by_reversal: bool = False) -> list[MinimalType]:
    """All component types on ``n`` letters, in deterministic order."""
    if n < 1:
        raise ValueError("n must be positive")
    classes = {MinimalType(n, canonical_cyclic(f)) for f in permutations(range(n))}
    if quotient_by_reversal:
        classes = {reversal_representative(t) for t in classes}
    return sorted(classes)


def reversal_representative(t: MinimalType) -> MinimalType:
    """The least of a type and its orientation reversal."""
    return min(t, type_reversal(t))


def _validate_profile(kappa: Sequence[int]) -> tuple[int, ...]:
    kappa = tuple(int(k) for k in kappa)
    if not kappa or any(k < 1 for k in kappa):
        raise UnsupportedProfile("cone-point orders must be positive integers")
    if sum(kappa) % 2:
        raise UnsupportedProfile("cone-point orders must sum to an even number")
    return kappa


def enumerate_prediagrams(
    profile: Sequence[int], stable: bool = True
) -> list[Prediagram]:
    """All balanced stable alternating structures for the profile.

    One connected component of 2(k+1) edges is built per cone point of order
    k; orientation assignments whose positive and negative circle counts
    disagree are dropped (no pairing can exist).  Output is up to structure
    isomorphism, sorted by component type multiset.
    """
    if not stable:
        raise UnsupportedProfile("only stable structures are enumerated")
    kappa = _validate_profile(profile)
    letters = [k + 1 for k in kappa]
    per_letter_types = {n: enumerate_types(n) for n in set(letters)}

    # One group per distinct component size, in order of first appearance;
    # the type choice within a group of equal sizes is unordered.
    group_sizes: list[int] = []
    for n in letters:
        if n not in group_sizes:
            group_sizes.append(n)
    choices_per_group = [
        list(combinations_with_replacement(per_letter_types[n], letters.count(n)))
        for n in group_sizes
    ]
    results = []
    for selection in product(*choices_per_group):
        type_list: list[MinimalType] = []
        for group_choice in selection:
            type_list.extend(group_choice)
        positives = sum(t.positive_circles() for t in type_list)
        negatives = sum(t.negative_circles() for t in type_list)
        if positives != negatives:
            continue
        results.append(tuple(type_list))
    results.sort(key=lambda type_list: sorted(type_list))
    return [_assemble(type_list) for type_list in results]


def _assemble(type_list: Sequence[MinimalType]) -> Prediagram:
    sigma: list[int] = []
    tau: list[int] = []
    positive: set[int] = set()
    offset = 0
    for t in type_list:
        component = realize_type(t)
        sigma.extend(e + offset for e in component.next_edge)
        tau.extend(e + offset for e in component.partner)
        positive.update(e + offset for e in component.positive)
        offset += component.size
    return validate_prediagram(offset, sigma, tau, positive)


def enumerate_pairings(p: Prediagram) -> list[tuple[tuple[int, int], ...]]:
    """All bijections between positive and negative circles, in lex order."""
    circles = cylinder_components(p)
    positive_ids = [i for i, c in enumerate(circles) if c.positive]
    negative_ids = [i for i, c in enumerate(circles) if not c.positive]
    if len(positive_ids) != len(negative_ids):
        raise UnequalComponentCounts(
            f"{len(positive_ids)} positive vs {len(negative_ids)} negative circles"
        )
    return [
        tuple(zip(positive_ids, chosen))
        for chosen in permutations(negative_ids)
    ]


def pairing_word(p: Prediagram, pairing: Iterable[tuple[int, int]]) -> str:
    """Compact name of a pairing: position i holds the letter of the positive
    circle matched with the i-th negative circle (circles ordered by least
    edge, letters a,b,… for positive circles, implicit digits for negative)."""
    circles = cylinder_components(p)
    positive_ids = [i for i, c in enumerate(circles) if c.positive]
    negative_ids = [i for i, c in enumerate(circles) if not c.positive]
    letter = {circle: chr(ord("a") + rank) for rank, circle in enumerate(positive_ids)}
    by_negative = {neg: pos for pos, neg in pairing}
    return "".join(letter[by_negative[neg]] for neg in negative_ids)


def surface_connected(p: Prediagram, pairing: Iterable[tuple[int, int]]) -> bool:
    """True when gluing cylinders along the pairing yields one surface."""
    circles = cylinder_components(p)
    component_of = _component_index(p)
    parent = list(range(1 + max(component_of)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for pos, neg in pairing:
        a = find(component_of[circles[pos].edges[0]])
        b = find(component_of[circles[neg].edges[0]])
        parent[a] = b
    roots = {find(component_of[e]) for e in range(p.size)}
    return len(roots) == 1


def _component_index(p: Prediagram) -> list[int]:
    index = [-1] * p.size
    count = 0
    for start in range(p.size):
        if index[start] >= 0:
            continue
        stack = [start]
        index[start] = count
        while stack:
            edge = stack.pop()
            for nxt in (p.next_edge[edge], p.partner[edge]):
                if index[nxt] < 0:
                    index[nxt] = count
                    stack.append(nxt)
        count += 1
    return index


def equality_system(
    p: Prediagram, pairing: Iterable[tuple[int, int]]
) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Equal-length conditions of paired circles over saddle-connection ids."""
    circles = cylinder_components(p)
    equalities = []
    for pos, neg in pairing:
        form: dict[int, Fraction] = {}
        for edge in circles[pos].edges:
            var = edge_pair_id(p, edge)
            form[var] = form.get(var, Fraction(0)) + 1
        for edge in circles[neg].edges:
            var = edge_pair_id(p, edge)
            form[var] = form.get(var, Fraction(0)) - 1
        form = {var: value for var, value in form.items() if value != 0}
        equalities.append(form)
    variables = sorted({edge_pair_id(p, e) for e in range(p.size)})
    return equalities, variables


def metric_feasible(
    p: Prediagram, pairing: Iterable[tuple[int, int]]
) -> FeasibilityWitness:
    """Exact feasibility of a strictly positive metric for the pairing."""
    pairing = tuple(pairing)
    if not surface_connected(p, pairing):
        return FeasibilityWitness("disconnected")
    equalities, variables = equality_system(p, pairing)
    return strict_positive_kernel(equalities, variables)


def random_feasible_metrics(
    p: Prediagram,
    pairing: Sequence[tuple[int, int]],
    count: int,
    seed: int = 0,
) -> list[dict[int, Fraction]]:
    """Deterministic sample of strictly positive rational metrics."""
    from cyldec.feasibility import _kernel_basis  # exact rational kernel

    witness = metric_feasible(p, pairing)
    if not witness.feasible:
        raise ValueError("pairing admits no positive metric")
    equalities, variables = equality_system(p, pairing)
    matrix = [
        [Fraction(form.get(var, 0)) for var in variables] for form in equalities
    ]
    kernel = _kernel_basis(matrix, len(variables))
    rng = random.Random(seed)
    samples = []
    base = [witness.lengths[var] for var in variables]
    while len(samples) < count:
        shift = [Fraction(0)] * len(variables)
        for vector in kernel:
            coefficient = Fraction(rng.randint(-8, 8), rng.randint(1, 8))
            shift = [s + coefficient * v for s, v in zip(shift, vector)]
        scale = Fraction(1)
        candidate = [b + s for b, s in zip(base, shift)]
        while any(value <= 0 for value in candidate):
            scale /= 2
            candidate = [b + scale * s for b, s in zip(base, shift)]
            if scale < Fraction(1, 2**20):
                candidate = base
                break
        samples.append(dict(zip(variables, candidate)))
    return samples


@dataclass(frozen=True)
class ClassificationEntry:
    """One isomorphism class with a feasibility witness metric."""

    diagram: SeparatrixDiagram
    class_id: int
    mixed: tuple[bool, ...]
    component_label: str
    type_multiset: tuple[MinimalType, ...]
    pairing_name: str


@dataclass(frozen=True)
class CensusRow:
    """One (structure, pairing) candidate with its feasibility verdict."""

    type_multiset: tuple[MinimalType, ...]
    prediagram: Prediagram
    pairing: tuple[tuple[int, int], ...]
    word: str
    witness: FeasibilityWitness


def stratum_census(profile: Sequence[int]) -> list[CensusRow]:
    """Every candidate pairing for the profile with its exact verdict."""
    rows = []
    for p in enumerate_prediagrams(profile):
        types = tuple(sorted(component_types(p)))
        for pairing in enumerate_pairings(p):
            rows.append(
                CensusRow(
                    types,
                    p,
                    pairing,
                    pairing_word(p, pairing),
                    metric_feasible(p, pairing),
                )
            )
    return rows


def cylinder_is_mixed(p: Prediagram, pairing_entry: tuple[int, int]) -> bool:
    """True when the cylinder's two boundary circles lie at different cone points."""
    circles = cylinder_components(p)
    orbit_of = {}
    for orbit_index, orbit in enumerate(sigma_orbits(p)):
        for edge in orbit:
            orbit_of[edge] = orbit_index
    pos, neg = pairing_entry
    return orbit_of[circles[pos].edges[0]] != orbit_of[circles[neg].edges[0]]


def classify_stratum(
    profile: Sequence[int],
    quotient_minus_omega: bool = False,
    require_mixed: bool = False,
    label_components: bool = True,
) -> list[ClassificationEntry]:
    """Full pipeline: enumerate, filter, and group into isomorphism classes.

    Classes are grouped metric-free (cylinder equivalence); each entry carries
    one verified witness metric.  With ``quotient_minus_omega`` classes are
    further identified with their half-turn images.  With ``require_mixed``
    only decompositions with a cylinder joining both cone points are kept.
    """
    kappa = _validate_profile(profile)
    if len(kappa) > 2:
        raise UnsupportedProfile("profiles with more than two cone points are not supported")
    chosen: dict[tuple, tuple] = {}
    for p in enumerate_prediagrams(kappa):
        types = tuple(sorted(component_types(p)))
        for pairing in enumerate_pairings(p):
            witness = metric_feasible(p, pairing)
            if not witness.feasible:
                continue
            key = canonical_form(p, pairing)
            if key in chosen:
                continue
            chosen[key] = (types, p, pairing, witness)

    if quotient_minus_omega:
        merged: dict[tuple, tuple] = {}
        for key in sorted(chosen):
            types, p, pairing, witness = chosen[key]
            diagram = make_diagram(p, pairing, witness.lengths)
            reversed_d = reverse_diagram(diagram)
            reversed_key = canonical_form(reversed_d.prediagram, reversed_d.pairing)
            representative = min(key, reversed_key)
            if representative not in merged:
                merged[representative] = chosen[key]
        chosen = merged

    entries = []
    for key in sorted(chosen):
        types, p, pairing, witness = chosen[key]
        mixed = tuple(cylinder_is_mixed(p, entry) for entry in pairing)
        if require_mixed and not any(mixed):
            continue
        diagram = make_diagram(p, pairing, witness.lengths)
        label = "n/a"
        if label_components and all(k % 2 == 0 for k in kappa):
            label = _component_label(diagram)
        entries.append(
            ClassificationEntry(
                diagram,
                len(entries),
                mixed,
                label,
                types,
                pairing_word(p, pairing),
            )
        )
    return entries


def _component_label(diagram: SeparatrixDiagram) -> str:
    from cyldec.spin import detect_neg_involution, spin_parity
    from cyldec.surface import build_surface

    cylinder_count = len(diagram.pairing)
    surface = build_surface(
        diagram,
        [Fraction(1)] * cylinder_count,
        [Fraction(0)] * cylinder_count,
    )
    if spin_parity(surface) == 1:
        return "odd"
    found = detect_neg_involution(surface)
    if found is not None and found.quotient_genus == 0:
        return "hyp"
    return "nonhyp-even"
