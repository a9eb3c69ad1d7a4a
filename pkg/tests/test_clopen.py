import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import ckshift as ck
from ckshift.clopen import (make_clopen, members_at_level, prepend_word,
                            strip_word)
from ckshift.errors import ValidationError
from ckshift.graphs import all_finite_graphs
from ckshift.pathspace import full_point, truncated_point


class TestBaseSets:
    def test_full_shift_dense_v1_is_everything(self, full2_model):
        u1, v1 = ck.base_sets(full2_model, 1)
        u2, _ = ck.base_sets(full2_model, 2)
        assert u1.join(u2) == v1 == ck.full_space(full2_model)

    def test_toeplitz_v1_strictly_larger(self, toeplitz_model):
        u1, v1 = ck.base_sets(toeplitz_model, 1)
        u2, _ = ck.base_sets(toeplitz_model, 2)
        (pat,) = toeplitz_model.boundary
        assert truncated_point((), pat) in v1.members
        union = u1.join(u2)
        assert union.leq(v1) and union != v1

    def test_ray_v_is_next_cylinder(self, ray):
        m = ck.dense_model(ray)
        for i in (1, 4, 9):
            _, v = ck.base_sets(m, i)
            assert v == ck.vertex_cylinder(m, i + 1)

    def test_golden_mean_v2(self, golden_model):
        _, v2 = ck.base_sets(golden_model, 2)
        assert v2 == ck.vertex_cylinder(golden_model, 1)

    def test_unknown_vertex(self, full2_model):
        with pytest.raises(ValidationError):
            ck.base_sets(full2_model, 5)


def random_clopen(model, rng, level=2):
    pts = list(ck.spectrum_level(model, level).points)
    chosen = [p for p in pts if rng.random() < 0.4]
    return make_clopen(model, level, chosen)


class TestBooleanOps:
    def test_meet_disjoint_first_letters(self, full2_model):
        u1 = ck.vertex_cylinder(full2_model, 1)
        u2 = ck.vertex_cylinder(full2_model, 2)
        assert u1.meet(u2).is_empty

    def test_complement_of_empty(self, toeplitz_model):
        assert ck.empty_clopen(toeplitz_model).complement() == \
            ck.full_space(toeplitz_model)

    @settings(max_examples=40, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_lattice_laws(self, rng):
        g = ck.FiniteGraph(((1, 1), (1, 1)))
        model = ck.validate_model(g, [ck.make_pattern(g, finite=(1, 2))])
        a = random_clopen(model, rng)
        b = random_clopen(model, rng)
        c = random_clopen(model, rng)
        assert a.meet(b) == b.meet(a)
        assert a.join(b) == b.join(a)
        assert a.meet(b.join(c)) == a.meet(b).join(a.meet(c))
        assert a.join(b.meet(c)) == a.join(b).meet(a.join(c))
        # De Morgan
        assert a.meet(b).complement() == a.complement().join(b.complement())
        assert a.join(b).complement() == a.complement().meet(b.complement())
        assert a.complement().complement() == a
        assert a.difference(b) == a.meet(b.complement())
        assert a.meet(b).leq(a) and a.leq(a.join(b))

    def test_model_mismatch(self, full2_model, golden_model):
        with pytest.raises(ValidationError, match="different models"):
            ck.full_space(full2_model).meet(ck.full_space(golden_model))


class TestLevels:
    def test_raise_u1(self, full2_model):
        u1 = ck.vertex_cylinder(full2_model, 1)
        raised = ck.raise_level(u1, 1)
        assert raised.members == {full_point((1, 1)), full_point((1, 2))}

    def test_boundary_point_fixed(self, toeplitz_model):
        (pat,) = toeplitz_model.boundary
        single = make_clopen(toeplitz_model, 0, [truncated_point((), pat)])
        assert ck.raise_level(single, 3).members == {truncated_point((), pat)}

    def test_golden_u2_raised(self, golden_model):
        u2 = ck.vertex_cylinder(golden_model, 2)
        assert members_at_level(u2, 1) == {full_point((2, 1))}

    def test_canonical_minimal_level(self, toeplitz_model):
        # raising then canonicalizing returns the same object
        u1 = ck.vertex_cylinder(toeplitz_model, 1)
        again = make_clopen(toeplitz_model, 3, members_at_level(u1, 3))
        assert again == u1 and again.level == u1.level == 0

    def test_level_independence_of_ops(self, toeplitz_model):
        rng = random.Random(2)
        for _ in range(20):
            a = random_clopen(toeplitz_model, rng, level=1)
            b = random_clopen(toeplitz_model, rng, level=2)
            hi_a = make_clopen(toeplitz_model, 3, members_at_level(a, 3))
            hi_b = make_clopen(toeplitz_model, 3, members_at_level(b, 3))
            assert hi_a == a and hi_b == b
            assert hi_a.meet(hi_b) == a.meet(b)
            assert hi_a.join(hi_b) == a.join(b)

    def test_cannot_lower(self, full2_model):
        u1 = ck.vertex_cylinder(full2_model, 1)
        with pytest.raises(ValidationError):
            members_at_level(ck.raise_level(u1, 2), 1)


class TestWordSurgery:
    def test_prepend_strip_roundtrip(self, golden_model):
        v1 = ck.follower_set(golden_model, 1)
        lifted = prepend_word((1,), v1)
        assert lifted == ck.vertex_cylinder(golden_model, 1)
        assert strip_word((1,), lifted) == v1

    def test_strip_filters_prefix(self, full2_model):
        u12 = ck.cylinder(full2_model, (1, 2))
        assert strip_word((1,), u12) == ck.vertex_cylinder(full2_model, 2)
        assert strip_word((2,), u12).is_empty

    def test_prepend_respects_admissibility(self, golden_model):
        u2 = ck.vertex_cylinder(golden_model, 2)
        # 2 -> 2 is not admissible in the golden mean graph
        assert prepend_word((2,), u2).is_empty


class TestCk4:
    def test_full_shift_dense_holds(self, full2_model):
        res = ck.ck4_identity(full2_model, (1,), ())
        assert res.holds and res.support == frozenset({1, 2})

    def test_toeplitz_fails_with_boundary_witness(self, toeplitz_model):
        res = ck.ck4_identity(toeplitz_model, (1,), ())
        (pat,) = toeplitz_model.boundary
        assert res.status == "fails"
        assert res.witness == truncated_point((), pat)

    def test_toeplitz_E_equals_I(self, toeplitz_model):
        res = ck.ck4_identity(toeplitz_model, (1, 2), ())
        (pat,) = toeplitz_model.boundary
        assert res.status == "fails" and res.witness == truncated_point((), pat)

    def test_all_ones_not_finitely_supported(self, all_ones_infinite):
        m = ck.dense_model(all_ones_infinite)
        assert ck.ck4_identity(m, (1,), ()).status == "not_finitely_supported"
        assert ck.ck4_identity(m, (), ()).status == "not_finitely_supported"

    def test_ray_finite_support(self, ray):
        m = ck.dense_model(ray)
        res = ck.ck4_identity(m, (3,), ())
        assert res.holds and res.support == frozenset({4})
        res = ck.ck4_identity(m, (), (3,))
        assert res.status == "not_finitely_supported"

    def test_ray_windowed_mixed_pairs(self, ray):
        m = ck.dense_model(ray)
        # nonempty E keeps the support finite whatever F adds
        res = ck.ck4_identity(m, (3,), (2,))
        assert res.holds and res.support == frozenset({4})
        res = ck.ck4_identity(m, (3,), (3,))
        assert res.holds and res.support == frozenset()  # overlapping E, F
        res = ck.ck4_identity(m, (2, 3), ())
        assert res.holds and res.support == frozenset()  # columns never share
        res = ck.ck4_identity(m, (3,), (4,))
        assert res.holds and res.support == frozenset({4})

    def test_banded_with_prefix_support(self):
        g = ck.BandedTailGraph(((1,),), 1, (2,), ((1,),))
        m = ck.dense_model(g)
        # vertex 1 feeds itself and, via the coupling, vertex 3
        res = ck.ck4_identity(m, (1,), ())
        assert res.holds and res.support == frozenset({1, 3})

    def test_dense_models_never_fail_exhaustive(self):
        for size in (1, 2, 3):
            for g in all_finite_graphs(size, no_zero_rows_only=True):
                model = ck.dense_model(g)
                verts = list(range(1, size + 1))
                subsets = [tuple(c) for r in range(size + 1)
                           for c in itertools.combinations(verts, r)]
                for E in subsets:
                    for F in subsets:
                        assert ck.ck4_identity(model, E, F).holds, (g.rows, E, F)

    def test_brute_membership_oracle(self, toeplitz_model):
        # recompute the combination pointwise at level 0 from the edges
        g = toeplitz_model.graph
        for E in ((), (1,), (2,), (1, 2)):
            for F in ((), (1,), (2,), (1, 2)):
                res = ck.ck4_identity(toeplitz_model, E, F)
                assert res.support is not None
                lhs = set()
                for p in ck.spectrum_level(toeplitz_model, 0).points:
                    if p.is_full:
                        inside = all(g.edge(j, p.word[0]) for j in E) and \
                            not any(g.edge(k, p.word[0]) for k in F)
                    else:
                        inside = all(p.boundary.contains(j, g) for j in E) and \
                            not any(p.boundary.contains(k, g) for k in F)
                    if inside:
                        lhs.add(p)
                rhs = {p for p in ck.spectrum_level(toeplitz_model, 0).points
                       if p.is_full and p.word[0] in res.support}
                assert res.holds == (lhs == rhs)


class TestSerialization:
    def test_clopen_json(self, toeplitz_model):
        _, v1 = ck.base_sets(toeplitz_model, 1)
        assert v1.serialize() == {"level": 0, "members": ["1", "2", ";{1,2}"]}

    def test_point_render(self, toeplitz_model):
        (pat,) = toeplitz_model.boundary
        assert full_point((1, 2)).render() == "1,2"
        assert truncated_point((1,), pat).render() == "1;{1,2}"
        assert truncated_point((), pat).pretty() == "(∅;{1,2})"
