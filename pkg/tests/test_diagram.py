"""Tests for the combinatorial layer: validation, types, isomorphism, text."""

import random
from fractions import Fraction
from itertools import permutations

import pytest

from cyldec.diagram import (
    MinimalType,
    NotAlternating,
    NotPermutation,
    NotStable,
    OrientationMixedWithinOrbit,
    TauNotFixedPointFreeInvolution,
    ThetaNotSection,
    are_isomorphic,
    canonical_cyclic,
    canonical_form,
    connected_components,
    cylinder_components,
    diagrams_isomorphic,
    format_diagram,
    format_prediagram,
    is_alternating,
    is_stable,
    make_diagram,
    minimal_type,
    parse_diagram,
    parse_prediagram,
    realize_type,
    reverse_diagram,
    reverse_orientation,
    type_reversal,
    validate_prediagram,
)
from cyldec.quadfield import QuadNum

from oracles import brute_force_isomorphic, raw_invariants_hold

SIX_CYCLE = [1, 2, 3, 4, 5, 0]
TAU_636 = [3, 4, 5, 0, 1, 2]

# Conjugacy classes under the cyclic shift, with (positive, negative) circle
# counts, tabulated by hand twice from the definitions.
N3_CLASSES = {
    (0, 1, 2): (1, 3),
    (1, 2, 0): (1, 1),
    (2, 0, 1): (3, 1),
    (0, 2, 1): (2, 2),
}
N4_REVERSAL_REPRESENTATIVES = {
    (0, 3, 1, 2): (3, 2),
    (0, 3, 2, 1): (2, 3),
    (0, 2, 3, 1): (1, 2),
    (2, 3, 0, 1): (1, 2),
    (0, 1, 2, 3): (1, 4),
}


def test_validation_accepts_valid_triple():
    p = validate_prediagram(6, SIX_CYCLE, TAU_636, {0, 2, 4})
    assert p.size == 6
    assert p.boundary_step(0) == 4  # partner 3, then rotate


def test_validation_errors():
    with pytest.raises(NotPermutation):
        validate_prediagram(6, [0, 0, 1, 2, 3, 4], TAU_636, {0, 2, 4})
    with pytest.raises(TauNotFixedPointFreeInvolution):
        validate_prediagram(6, SIX_CYCLE, [0, 4, 5, 3, 1, 2], {0, 2, 4})
    with pytest.raises(ThetaNotSection):
        validate_prediagram(6, SIX_CYCLE, [1, 0, 3, 2, 5, 4], {0, 1, 4})
    with pytest.raises(ThetaNotSection):
        validate_prediagram(6, SIX_CYCLE, TAU_636, {0, 2, 4, 7})


def test_validation_agrees_with_raw_invariants_exhaustively():
    size = 4
    count_ok = 0
    for sigma in permutations(range(size)):
        for tau in permutations(range(size)):
            for bits in range(2**size):
                positive = {e for e in range(size) if bits >> e & 1}
                expected = raw_invariants_hold(size, sigma, tau, positive)
                try:
                    validate_prediagram(size, sigma, tau, positive)
                    accepted = True
                except (
                    NotPermutation,
                    TauNotFixedPointFreeInvolution,
                    ThetaNotSection,
                ):
                    accepted = False
                assert accepted == expected
                count_ok += expected
    assert count_ok > 0


def test_validation_agrees_with_raw_invariants_sampled():
    rng = random.Random(7)
    size = 6
    for _ in range(2000):
        sigma = list(range(size))
        tau = list(range(size))
        rng.shuffle(sigma)
        rng.shuffle(tau)
        positive = {e for e in range(size) if rng.random() < 0.5}
        expected = raw_invariants_hold(size, sigma, tau, positive)
        try:
            validate_prediagram(size, sigma, tau, positive)
            accepted = True
        except (NotPermutation, TauNotFixedPointFreeInvolution, ThetaNotSection):
            accepted = False
        assert accepted == expected


def test_alternating_and_stable():
    p = validate_prediagram(6, SIX_CYCLE, TAU_636, {0, 2, 4})
    assert is_alternating(p)
    assert is_stable(p)
    q = validate_prediagram(6, SIX_CYCLE, [1, 0, 3, 2, 5, 4], {0, 3, 4})
    assert not is_alternating(q)  # consecutive edges share a sign after rotation
    # Two rotation orbits exchanged by the pairing: not stable.
    r = validate_prediagram(
        4, [1, 0, 3, 2], [2, 3, 0, 1], {0, 3}
    )
    assert not is_stable(r)
    assert is_stable(validate_prediagram(4, [1, 2, 3, 0], [2, 3, 0, 1], {0, 1}))


def test_connected_components_roundtrip():
    single = realize_type(MinimalType(3, (1, 2, 0)))
    assert len(connected_components(single)) == 1
    assert connected_components(single)[0] == single
    # Disjoint union of two copies splits back into both.
    size = single.size
    double = validate_prediagram(
        2 * size,
        list(single.next_edge) + [e + size for e in single.next_edge],
        list(single.partner) + [e + size for e in single.partner],
        set(single.positive) | {e + size for e in single.positive},
    )
    parts = connected_components(double)
    assert len(parts) == 2 and all(part == single for part in parts)


def test_cylinder_components_counts_per_type():
    for table in (N3_CLASSES, N4_REVERSAL_REPRESENTATIVES):
        for f, (pos, neg) in table.items():
            t = MinimalType(len(f), f)
            assert (t.positive_circles(), t.negative_circles()) == (pos, neg)
            circles = cylinder_components(realize_type(t))
            observed = (
                sum(1 for c in circles if c.positive),
                sum(1 for c in circles if not c.positive),
            )
            assert observed == (pos, neg)
    # The two-letter identity type: one positive circle, two negative ones.
    two = MinimalType(2, (0, 1))
    assert (two.positive_circles(), two.negative_circles()) == (1, 2)


def test_cylinder_components_rejects_mixed_orbit():
    q = validate_prediagram(6, SIX_CYCLE, [1, 0, 3, 2, 5, 4], {0, 3, 4})
    with pytest.raises(OrientationMixedWithinOrbit):
        cylinder_components(q)


def test_minimal_type_base_independence_and_relabeling():
    rng = random.Random(11)
    for f in list(N3_CLASSES) + list(N4_REVERSAL_REPRESENTATIVES):
        t = MinimalType(len(f), f)
        p = realize_type(t)
        assert minimal_type(p) == MinimalType(len(f), canonical_cyclic(f))
        # Relabel edges randomly; the type must not change.
        relabel = list(range(p.size))
        rng.shuffle(relabel)
        sigma = [0] * p.size
        tau = [0] * p.size
        for e in range(p.size):
            sigma[relabel[e]] = relabel[p.next_edge[e]]
            tau[relabel[e]] = relabel[p.partner[e]]
        q = validate_prediagram(p.size, sigma, tau, {relabel[e] for e in p.positive})
        assert minimal_type(q) == minimal_type(p)


def test_minimal_type_guards():
    single = realize_type(MinimalType(3, (1, 2, 0)))
    size = single.size
    double = validate_prediagram(
        2 * size,
        list(single.next_edge) + [e + size for e in single.next_edge],
        list(single.partner) + [e + size for e in single.partner],
        set(single.positive) | {e + size for e in single.positive},
    )
    with pytest.raises(Exception) as info:
        minimal_type(double)
    assert info.type.__name__ == "NotMinimal"
    with pytest.raises(NotStable):
        minimal_type(validate_prediagram(4, [1, 0, 3, 2], [2, 3, 0, 1], {0, 3}))


def test_reversal_formula_against_recomputation():
    for f in list(N3_CLASSES) + list(N4_REVERSAL_REPRESENTATIVES) + [(0, 1), (1, 0)]:
        t = MinimalType(len(f), canonical_cyclic(f))
        reversed_type = minimal_type(reverse_orientation(realize_type(t)))
        assert reversed_type == type_reversal(t)
    # Reversing twice is the identity.
    for f in N4_REVERSAL_REPRESENTATIVES:
        t = MinimalType(len(f), canonical_cyclic(f))
        assert type_reversal(type_reversal(t)) == t


def test_n3_reversal_pairs():
    assert type_reversal(MinimalType(3, (0, 1, 2))) == MinimalType(3, (2, 0, 1))
    assert type_reversal(MinimalType(3, (1, 2, 0))) == MinimalType(3, (1, 2, 0))
    assert type_reversal(MinimalType(3, (0, 2, 1))) == MinimalType(3, (0, 2, 1))


def test_are_isomorphic_matches_brute_force():
    reps = [
        realize_type(MinimalType(3, f)) for f in (canonical_cyclic((0, 1, 2)),)
    ]
    pool = [realize_type(MinimalType(3, canonical_cyclic(f))) for f in N3_CLASSES]
    pool += [realize_type(MinimalType(2, f)) for f in ((0, 1), (1, 0))]
    pool += reps
    rng = random.Random(3)
    for p in pool:
        for q in pool:
            if p.size != q.size:
                continue
            assert are_isomorphic(p, q) == brute_force_isomorphic(p, q)
    # Relabeled copies stay isomorphic.
    for p in pool:
        relabel = list(range(p.size))
        rng.shuffle(relabel)
        sigma = [0] * p.size
        tau = [0] * p.size
        for e in range(p.size):
            sigma[relabel[e]] = relabel[p.next_edge[e]]
            tau[relabel[e]] = relabel[p.partner[e]]
        q = validate_prediagram(p.size, sigma, tau, {relabel[e] for e in p.positive})
        assert are_isomorphic(p, q) and brute_force_isomorphic(p, q)


def test_diagram_round_trip_and_isomorphism_levels():
    p = realize_type(MinimalType(3, (1, 2, 0)))
    circles = cylinder_components(p)
    positive = [i for i, c in enumerate(circles) if c.positive]
    negative = [i for i, c in enumerate(circles) if not c.positive]
    pairing = [(positive[0], negative[0])]
    metric = {0: Fraction(1), 1: Fraction(2), 2: QuadNum(0, 1, 2)}
    d = make_diagram(p, pairing, metric)
    text = format_diagram(d)
    back = parse_diagram(text)
    assert back == d
    assert diagrams_isomorphic(d, back, exact_metric=True)
    other = make_diagram(p, pairing, {0: Fraction(1), 1: Fraction(1), 2: Fraction(1)})
    assert diagrams_isomorphic(d, other)  # metric-free level
    assert not diagrams_isomorphic(d, other, exact_metric=True)
    assert format_prediagram(p) == format_prediagram(parse_prediagram(format_prediagram(p)))


def test_reverse_diagram_involution():
    p = realize_type(MinimalType(3, (0, 2, 1)))
    circles = cylinder_components(p)
    positive = [i for i, c in enumerate(circles) if c.positive]
    negative = [i for i, c in enumerate(circles) if not c.positive]
    lengths = {0: Fraction(2), 2: Fraction(1), 3: Fraction(2)}
    # Circle lengths must match; find a valid pairing by trying both.
    from cyldec.diagram import LengthMismatch

    diagram = None
    for neg in permutations(negative):
        try:
            diagram = make_diagram(p, list(zip(positive, neg)), lengths)
            break
        except LengthMismatch:
            continue
    assert diagram is not None
    twice = reverse_diagram(reverse_diagram(diagram))
    assert twice == diagram
    assert canonical_form(p) == canonical_form(
        reverse_orientation(reverse_orientation(p))
    )
