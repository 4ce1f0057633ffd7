"""Tests for flat-surface construction, invariants, and deformations."""

from fractions import Fraction

import pytest

from cyldec.diagram import (
    diagram_from_words,
    diagrams_isomorphic,
    make_diagram,
)
from cyldec.enumeration import classify_stratum, random_feasible_metrics
from cyldec.quadfield import QuadNum
from cyldec.reference import LIST31, ODD22, all_reference_surfaces
from cyldec.surface import (
    DimensionMismatch,
    HeightCollapse,
    NonPositiveHeight,
    NotTwoSingularities,
    ZeroOrderSingularity,
    build_surface,
    format_surface,
    horizontal_diagram,
    mixed_structure,
    parse_surface,
    rel_deform,
    stratum_signature,
    surface_rotate_pi,
    surfaces_isomorphic,
    twist_deform,
)

F = Fraction


def unit_surface(diagram):
    n = len(diagram.pairing)
    return build_surface(diagram, [F(1)] * n, [F(0)] * n)


def reference_surface(name):
    for ref in all_reference_surfaces():
        if ref.name == name:
            return unit_surface(ref.diagram())
    raise AssertionError(name)


def torus():
    d = diagram_from_words([(("A",), ("A",))])
    return build_surface(d, [F(1)], [F(0)])


def one_cone_point_surface():
    d = diagram_from_words([(("A",), ("B",)), (("B", "C"), ("A", "C"))])
    return build_surface(d, [F(1), F(1)], [F(0), F(0)])


class TestBuild:
    def test_rejects_nonpositive_heights(self):
        d = ODD22[0].diagram()
        with pytest.raises(NonPositiveHeight):
            build_surface(d, [F(1), F(0), F(1), F(1)], [F(0)] * 4)
        with pytest.raises(NonPositiveHeight):
            build_surface(d, [F(1), F(-2), F(1), F(1)], [F(0)] * 4)

    def test_rejects_wrong_vector_lengths(self):
        d = ODD22[0].diagram()
        with pytest.raises(DimensionMismatch):
            build_surface(d, [F(1)] * 3, [F(0)] * 4)
        with pytest.raises(DimensionMismatch):
            build_surface(d, [F(1)] * 4, [F(0)] * 5)

    def test_twists_are_reduced_into_the_fundamental_interval(self):
        d = ODD22[0].diagram()
        s = build_surface(d, [F(1)] * 4, [F(5), F(-1, 2), F(7, 3), F(0)])
        for twist, c in zip(s.twists, s.circumferences):
            assert 0 <= twist < c
        # circumferences of odd22-1 are (1, 2, 3, 2)
        assert s.twists == (F(0), F(3, 2), F(7, 3), F(0))

    def test_area_is_total_cylinder_area(self):
        s = reference_surface("odd22-3")
        assert s.area == sum(c * h for c, h in zip(s.circumferences, s.heights))
        assert s.area == 8


class TestSignature:
    @pytest.mark.parametrize(
        "name,expected",
        [("odd22-1", ((2, 2), 3)), ("hyp22-3", ((2, 2), 3)), ("h31-6", ((3, 1), 3))],
    )
    def test_reference_signatures(self, name, expected):
        assert stratum_signature(reference_surface(name)) == expected

    def test_single_cone_point_of_order_two(self):
        assert stratum_signature(one_cone_point_surface()) == ((2,), 2)

    def test_torus_is_rejected(self):
        with pytest.raises(ZeroOrderSingularity):
            stratum_signature(torus())


class TestRoundTrip:
    @pytest.mark.parametrize(
        "ref", all_reference_surfaces(), ids=lambda r: r.name
    )
    def test_reference_surfaces(self, ref):
        d = ref.diagram()
        s = unit_surface(d)
        assert diagrams_isomorphic(horizontal_diagram(s), d, exact_metric=True)

    def test_random_metrics_roundtrip(self):
        for profile in ((2, 2), (3, 1)):
            for entry in classify_stratum(profile, label_components=False):
                d = entry.diagram
                for metric in random_feasible_metrics(
                    d.prediagram, d.pairing, count=2, seed=11
                ):
                    varied = make_diagram(d.prediagram, d.pairing, metric)
                    s = build_surface(
                        varied,
                        [F(k + 1) for k in range(len(d.pairing))],
                        [F(1, k + 2) for k in range(len(d.pairing))],
                    )
                    assert diagrams_isomorphic(
                        horizontal_diagram(s), varied, exact_metric=True
                    )


EXPECTED_DELTA = {
    "odd22-1": (0, 1, 0, -1),
    "odd22-2": (0, 1, 0, -1),
    "odd22-3": (1, -1, 1, -1),
    "odd22-4": (1, -1, 1, 1),
    "hyp22-1": (1, -1, 1, -1),
    "hyp22-2": (1, -1, 1, 1),
    "hyp22-3": (1, -1),
    "h31-1": (1, 0, -1, 1),
    "h31-2": (1, -1, 1, 0),
    "h31-3": (1, -1, 1, 0),
    "h31-4": (0, 1, -1, 1),
    "h31-5": (1, -1, 0, 1),
    "h31-6": (1, -1, 1),
    "h31-7": (1, -1, -1),
}


class TestMixedStructure:
    @pytest.mark.parametrize(
        "ref", all_reference_surfaces(), ids=lambda r: r.name
    )
    def test_sign_vectors(self, ref):
        s = unit_surface(ref.diagram())
        ms = mixed_structure(s)
        assert ms.delta == EXPECTED_DELTA[ref.name]
        assert not ms.one_singularity
        # Balanced circumference classes (forced by area invariance).
        total_plus = sum(s.circumferences[i] for i in ms.plus)
        total_minus = sum(s.circumferences[i] for i in ms.minus)
        assert total_plus == total_minus

    def test_deformation_vector_of_the_four_cylinder_start(self):
        # First listed order-(3,1) surface: cylinder 2 is not mixed, so the
        # deformation vector is (γ1, 0, −γ3, γ4).
        s = reference_surface("h31-1")
        ms = mixed_structure(s)
        gamma = tuple(1 / c for c in s.circumferences)
        assert ms.deformation_vector == (gamma[0], 0, -gamma[2], gamma[3])
        assert ms.height_vector == tuple(h / c for h, c in zip(s.heights, s.circumferences))

    def test_deformation_vector_of_the_staircase_surface(self):
        s = reference_surface("odd22-4")
        ms = mixed_structure(s)
        gamma = tuple(1 / c for c in s.circumferences)
        assert ms.deformation_vector == (gamma[0], -gamma[1], gamma[2], gamma[3])

    def test_minimal_height_split(self):
        ref = LIST31[0]
        s = build_surface(
            ref.diagram(), [F(1), F(1), F(2), F(3)], [F(0)] * 4
        )
        ms = mixed_structure(s)
        assert ms.plus == (0, 3)
        assert ms.minus == (2,)
        assert ms.non_mixed == (1,)
        assert ms.collapse_plus == (0,)
        assert ms.keep_plus == (3,)
        assert ms.collapse_minus == (2,)
        assert ms.keep_minus == ()

    def test_single_cone_point_flag(self):
        ms = mixed_structure(one_cone_point_surface())
        assert ms.one_singularity
        assert ms.delta == (0, 0)
        assert ms.plus == () and ms.minus == ()


class TestTwist:
    def test_zero_is_identity(self):
        s = reference_surface("h31-5")
        assert twist_deform(s, [F(0)] * 4) == s

    def test_wrong_length_rejected(self):
        s = reference_surface("h31-5")
        with pytest.raises(DimensionMismatch):
            twist_deform(s, [F(1)] * 3)

    def test_additive(self):
        s = reference_surface("odd22-2")
        x = [F(1, 3), F(0), F(2, 7), F(5)]
        y = [F(1, 2), F(3, 4), F(0), F(-1, 3)]
        assert twist_deform(twist_deform(s, x), y) == twist_deform(
            s, [a + b for a, b in zip(x, y)]
        )

    def test_full_turns_vanish(self):
        # Twisting by whole circumferences is the identity on the moduli,
        # so only the fractional part of the twist vector matters.
        s = reference_surface("h31-6")
        assert twist_deform(s, [1, 0, F(-1, 2)]) == twist_deform(
            s, [0, 0, F(-1, 2)]
        )

    def test_integer_twists_are_translation_isomorphic(self):
        s = reference_surface("odd22-4")
        assert surfaces_isomorphic(twist_deform(s, [2, -1, 3, 1]), s)
        assert not surfaces_isomorphic(
            twist_deform(s, [F(1, 5), 0, 0, 0]), s
        )


class TestRel:
    def test_zero_is_identity_on_both_axes(self):
        s = reference_surface("hyp22-1")
        assert rel_deform(s, F(0), axis="real") == s
        assert rel_deform(s, F(0), axis="imaginary") == s

    def test_real_axis_shifts_mixed_twists(self):
        s = reference_surface("h31-1")
        moved = rel_deform(s, F(1, 3), axis="real")
        ms = mixed_structure(s)
        for i in range(4):
            expected = (s.twists[i] + F(1, 3) * ms.delta[i]) % s.circumferences[i]
            assert moved.twists[i] == expected
        assert moved.heights == s.heights

    def test_imaginary_axis_moves_heights_only(self):
        s = reference_surface("h31-1")
        moved = rel_deform(s, F(1, 4), axis="imaginary")
        ms = mixed_structure(s)
        assert moved.circumferences == s.circumferences
        assert moved.twists == s.twists
        for i in range(4):
            assert moved.heights[i] == s.heights[i] + F(1, 4) * ms.delta[i]
        assert moved.area == s.area

    def test_additive_within_domain(self):
        s = reference_surface("odd22-3")
        a = rel_deform(rel_deform(s, F(1, 8)), F(1, 8))
        assert a == rel_deform(s, F(1, 4))

    def test_wall_crossing_raises_without_surgery(self):
        s = reference_surface("odd22-3")
        with pytest.raises(HeightCollapse):
            rel_deform(s, F(-1), axis="imaginary")

    def test_two_cone_points_required(self):
        with pytest.raises(NotTwoSingularities):
            rel_deform(one_cone_point_surface(), F(1, 2))


class TestRotateHalfTurn:
    @pytest.mark.parametrize(
        "ref", all_reference_surfaces(), ids=lambda r: r.name
    )
    def test_involution_up_to_isomorphism(self, ref):
        s = build_surface(
            ref.diagram(),
            [F(k + 1) for k in range(len(ref.cylinders))],
            [F(1, k + 3) for k in range(len(ref.cylinders))],
        )
        r = surface_rotate_pi(s)
        assert r.heights == s.heights
        assert r.area == s.area
        assert surfaces_isomorphic(surface_rotate_pi(r), s)

    def test_flips_the_sign_classes(self):
        s = reference_surface("h31-1")
        before = mixed_structure(s)
        after = mixed_structure(surface_rotate_pi(s))
        assert after.delta == tuple(-d for d in before.delta)


class TestIsomorphism:
    def test_distinguishes_heights(self):
        ref = ODD22[2]
        s1 = build_surface(ref.diagram(), [F(1)] * 4, [F(0)] * 4)
        s2 = build_surface(ref.diagram(), [F(1), F(2), F(1), F(1)], [F(0)] * 4)
        assert not surfaces_isomorphic(s1, s2)

    def test_distinguishes_classes(self):
        s1 = reference_surface("odd22-3")
        s2 = reference_surface("hyp22-1")
        assert not surfaces_isomorphic(s1, s2)

    def test_accepts_relabelings(self):
        ref = LIST31[6]
        s1 = unit_surface(ref.diagram())
        s2 = unit_surface(ref.diagram())
        assert surfaces_isomorphic(s1, s2)


class TestTextFormat:
    def test_roundtrip_rational(self):
        s = build_surface(
            ODD22[0].diagram(),
            [F(1), F(3, 2), F(2), F(1)],
            [F(0), F(1, 2), F(5, 3), F(1)],
        )
        text = format_surface(s)
        assert text.startswith("D=1\n")
        back = parse_surface(text)
        assert surfaces_isomorphic(back, s)
        assert format_surface(parse_surface(format_surface(back))) == format_surface(back)

    def test_roundtrip_quadratic(self):
        root2 = QuadNum(0, 1, 2)
        scale = 1 + root2
        ref = LIST31[0]
        lengths = {name: scale * value for name, value in ref.lengths.items()}
        d = diagram_from_words(ref.cylinders, lengths)
        s = build_surface(
            d,
            [QuadNum(1), QuadNum(2), 1 + root2, QuadNum(1)],
            [QuadNum(0), QuadNum(0), root2, QuadNum(0)],
        )
        text = format_surface(s)
        assert text.startswith("D=2\n")
        back = parse_surface(text)
        assert surfaces_isomorphic(back, s)

    def test_rejects_missing_header(self):
        with pytest.raises(ValueError):
            parse_surface("c=1;h=1;t=0;top=[a];bottom=[a]\nlengths: a=1\n")

    def test_rejects_empty_body(self):
        with pytest.raises(ValueError):
            parse_surface("D=1\nlengths: a=1\n")
