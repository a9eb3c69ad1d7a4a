import itertools
import random

import pytest

import ckshift as ck
from ckshift.errors import (DomainError, UnsupportedPresentationError,
                            ValidationError)
from ckshift.graphs import all_finite_graphs
from ckshift.pathspace import (admissible_words, fiber, full_point,
                               strict_period_counts, truncated_point)
from ckshift.sse import trace_powers


class TestClusterPatterns:
    def test_finite_graphs_have_none(self, golden_mean, full2, two_cycle):
        for g in (golden_mean, full2, two_cycle):
            assert ck.cluster_patterns(g) == frozenset()

    def test_ray(self, ray):
        assert ck.cluster_patterns(ray) == frozenset({ck.make_pattern(ray)})

    def test_all_ones_infinite(self, all_ones_infinite):
        g = all_ones_infinite
        assert ck.cluster_patterns(g) == frozenset({ck.make_pattern(g, classes=(1,))})

    def test_mixed_block(self):
        # finite class 1 feeds the infinite class 2; columns of class 2 see both
        g = ck.BlockPatternGraph((2, None), ((0, 1), (1, 1)))
        (pat,) = ck.cluster_patterns(g)
        assert pat == ck.make_pattern(g, finite=(1, 2), classes=(2,))

    def test_window_empirics_ray(self, ray):
        # for any finite window, all large columns miss it entirely
        for w in (3, 5, 8):
            for j in range(w + 2, w + 12):
                assert all(v > w for v in ray.in_neighbors(j))

    def test_window_empirics_all_ones(self, all_ones_infinite):
        # every column meets every window in everything: the full pattern
        g = all_ones_infinite
        (pat,) = ck.cluster_patterns(g)
        for v in (1, 5, 100):
            assert pat.contains(v, g)

    def test_window_invariance_banded(self):
        g = ck.BandedTailGraph(((1,),), 1, (2,), ((1,),))
        assert ck.cluster_patterns(g) == frozenset({ck.make_pattern(g)})


class TestValidateModel:
    def test_full_shift_dense(self, full2):
        m = ck.validate_model(full2, ())
        assert m.dense_domain

    def test_toeplitz_not_dense(self, toeplitz_model):
        assert not toeplitz_model.dense_domain

    def test_ray_missing_pattern(self, ray):
        with pytest.raises(ValidationError, match="misses the cluster pattern"):
            ck.validate_model(ray, ())

    def test_hypothesis_failure_names_vertex(self):
        g = ck.FiniteGraph(((0, 1), (0, 0)))
        with pytest.raises(ValidationError, match="vertex 2"):
            ck.validate_model(g, ())

    def test_zero_row_covered_by_boundary(self):
        g = ck.FiniteGraph(((0, 1), (0, 0)))
        m = ck.validate_model(g, [ck.make_pattern(g, finite=(2,))])
        assert not m.dense_domain  # boundary strictly exceeds the (empty) cluster family

    def test_pattern_canonicalization(self):
        # a finite class listed as a class equals its vertex expansion
        g = ck.BlockPatternGraph((2, None), ((1, 1), (1, 1)))
        assert ck.make_pattern(g, classes=(1,)) == ck.make_pattern(g, finite=(1, 2))


def brute_spectrum(model, n):
    """Oracle: build the level set from scratch by filtering all tuples."""
    g = model.graph
    letters = list(g.vertices())
    full = {full_point(w) for w in itertools.product(letters, repeat=n + 1)
            if all(g.edge(a, b) for a, b in zip(w, w[1:]))}
    trunc = set()
    for r in range(0, n + 1):
        for w in itertools.product(letters, repeat=r):
            if not all(g.edge(a, b) for a, b in zip(w, w[1:])):
                continue
            for pat in model.boundary:
                if not w or pat.contains(w[-1], g):
                    trunc.add(truncated_point(w, pat))
    return full | trunc


class TestSpectrum:
    def test_toeplitz_count(self, toeplitz_model):
        sl = ck.spectrum_level(toeplitz_model, 1)
        assert len(sl.points) == 7
        assert len([p for p in sl.points if p.is_full]) == 4

    def test_dense_full_shift(self, full2_model):
        sl = ck.spectrum_level(full2_model, 2)
        assert len(sl.points) == 8 and all(p.is_full for p in sl.points)

    def test_golden_mean_level1(self, golden_model):
        assert [p.word for p in ck.spectrum_level(golden_model, 1).points] == \
            [(1, 1), (1, 2), (2, 1)]

    def test_against_brute_oracle(self, toeplitz_model, golden_model):
        for model in (toeplitz_model, golden_model):
            for n in range(0, 4):
                assert set(ck.spectrum_level(model, n).points) == \
                    brute_spectrum(model, n)

    def test_deterministic_order(self, toeplitz_model):
        a = [p.render() for p in ck.spectrum_level(toeplitz_model, 3).points]
        b = [p.render() for p in ck.spectrum_level(toeplitz_model, 3).points]
        assert a == b

    def test_infinite_needs_window(self, ray):
        m = ck.dense_model(ray)
        with pytest.raises(UnsupportedPresentationError, match="window"):
            ck.spectrum_level(m, 2)
        sl = ck.spectrum_level(m, 2, window=5)
        assert sl.partial
        assert full_point((1, 2, 3)) in set(sl.points)

    def test_infinite_block_windowed(self, all_ones_infinite):
        m = ck.dense_model(all_ones_infinite)
        sl = ck.spectrum_level(m, 1, window=2)
        # matches the Toeplitz count on the same window: the boundary
        # pattern is the full vertex set here as well
        assert sl.partial and len(sl.points) == 7

    def test_full_pattern(self, full2, all_ones_infinite, ray):
        assert ck.full_pattern(full2) == ck.make_pattern(full2, finite=(1, 2))
        pat = ck.full_pattern(all_ones_infinite)
        assert pat.contains(123, all_ones_infinite)
        with pytest.raises(UnsupportedPresentationError):
            ck.full_pattern(ray)

    def test_projection_validates_level(self):
        with pytest.raises(ValidationError):
            ck.project_point(full_point((1, 2)), 3)  # wrong word length
        with pytest.raises(ValidationError):
            ck.project_point(full_point((1,)), 0)  # no level below 0


class TestProjection:
    def test_full_path_drops_last(self):
        assert ck.project_point(full_point((1, 2, 1)), 2) == full_point((1, 2))

    def test_truncated_identity(self, toeplitz_model):
        (pat,) = toeplitz_model.boundary
        p = truncated_point((1,), pat)
        assert ck.project_point(p, 2) == p

    def test_truncated_maximal_drops_cap(self, toeplitz_model):
        (pat,) = toeplitz_model.boundary
        p = truncated_point((1, 2), pat)
        assert ck.project_point(p, 2) == full_point((1, 2))

    def test_empty_word_fixed(self, toeplitz_model):
        (pat,) = toeplitz_model.boundary
        p = truncated_point((), pat)
        assert ck.project_point(p, 5) == p

    def test_projective_coherence(self, toeplitz_model, golden_model):
        # the projection maps level n+1 onto level n, fibers partition it
        for model in (toeplitz_model, golden_model):
            for n in range(0, 3):
                lower = set(ck.spectrum_level(model, n).points)
                upper = set(ck.spectrum_level(model, n + 1).points)
                assert {ck.project_point(p, n + 1) for p in upper} == lower
                fibers = [set(fiber(model, q, n)) for q in lower]
                assert set().union(*fibers) == upper
                assert sum(len(f) for f in fibers) == len(upper)


class TestShift:
    def test_word(self):
        assert ck.shift_point((1, 2, 1, 1)) == (2, 1, 1)

    def test_truncated_to_empty(self, toeplitz_model):
        (pat,) = toeplitz_model.boundary
        assert ck.shift_point(truncated_point((1,), pat)) == truncated_point((), pat)

    def test_empty_domain_error(self, toeplitz_model):
        (pat,) = toeplitz_model.boundary
        with pytest.raises(DomainError):
            ck.shift_point(truncated_point((), pat))
        with pytest.raises(DomainError):
            ck.shift_point(())

    def test_commutes_with_projection(self, toeplitz_model):
        # T(pi(x)) = pi(T(x)) wherever both sides are defined
        for n in (2, 3):
            for p in ck.spectrum_level(toeplitz_model, n).points:
                if len(p.word) < 2:
                    continue
                lhs = ck.shift_point(ck.project_point(p, n))
                rhs = ck.project_point(ck.shift_point(p), n - 1)
                assert lhs == rhs, p.render()


def brute_periodic_points(g, max_period, max_preperiod, horizon=14):
    """Oracle: expand every (prefix, primitive cycle) pair into the first
    `horizon` letters of the corresponding path."""
    pts = set()
    letters = list(g.vertices())
    for p in range(1, max_period + 1):
        for cyc in itertools.product(letters, repeat=p):
            if not all(g.edge(a, b) for a, b in zip(cyc, cyc[1:])):
                continue
            if not g.edge(cyc[-1], cyc[0]):
                continue
            if any(p % d == 0 and cyc == cyc[:d] * (p // d) for d in range(1, p)):
                continue
            for m in range(0, max_preperiod + 1):
                for pre in itertools.product(letters, repeat=m):
                    word = pre + cyc
                    if not all(g.edge(a, b) for a, b in zip(word, word[1:])):
                        continue
                    if pre and pre[-1] == cyc[-1]:
                        continue
                    expand = pre + cyc * ((horizon // p) + 1)
                    pts.add(expand[:horizon])
    return pts


class TestPeriodicPoints:
    def test_golden_mean(self, golden_model):
        scan = ck.periodic_points(golden_model, 2, 0)
        assert [(r.period, r.loop.vertices) for r in scan.records] == \
            [(1, (1, 1)), (2, (1, 2, 1)), (2, (2, 1, 2))]
        assert scan.strict_count_dividing(1) == 1
        assert scan.strict_count_dividing(2) == 3

    def test_two_cycle_isolated(self, two_cycle):
        scan = ck.periodic_points(ck.dense_model(two_cycle), 2, 0)
        assert len(scan.records) == 2 and all(r.isolated for r in scan.records)

    def test_full_shift_fixed_points(self, full2_model):
        scan = ck.periodic_points(full2_model, 1, 0)
        assert len(scan.records) == 2 and not any(r.isolated for r in scan.records)

    def test_records_against_brute_expansion(self):
        rng = random.Random(11)
        pool = [r for r in itertools.product((0, 1), repeat=3) if any(r)]
        for _ in range(25):
            g = ck.FiniteGraph(tuple(rng.choice(pool) for _ in range(3)))
            model = ck.dense_model(g)
            for q in (0, 2):
                scan = ck.periodic_points(model, 3, q)
                got = set()
                for r in scan.records:
                    expand = r.prefix + r.loop.base_word * 20
                    got.add(expand[:14])
                assert got == brute_periodic_points(g, 3, q), (g.rows, q)

    def test_counts_match_walk_counts_and_traces(self):
        for size in (1, 2, 3):
            for g in all_finite_graphs(size):
                counts = strict_period_counts(g, 6)
                assert counts == trace_powers(g.rows, 6), g.rows
        # record-derived counts agree with the walk counts
        for g in all_finite_graphs(2, no_zero_rows_only=True):
            scan = ck.periodic_points(ck.dense_model(g), 6, 0)
            counts = strict_period_counts(g, 6)
            for k in range(1, 7):
                assert scan.strict_count_dividing(k) == counts[k]

    def test_preperiod_minimality(self, golden_model):
        scan = ck.periodic_points(golden_model, 1, 1)
        # 2(1)^inf is the only preperiod-1 point onto the fixed point
        extra = [r for r in scan.records if r.preperiod == 1]
        assert [(r.prefix, r.loop.vertices) for r in extra] == [((2,), (1, 1))]

    def test_infinite_rejected(self, ray):
        with pytest.raises(UnsupportedPresentationError):
            ck.periodic_points(ck.dense_model(ray), 2, 0)


def brute_freeness_scan(model, m0, n0, depth):
    """Oracle: literal cylinder-by-cylinder, extension-by-extension scan."""
    g = ck.finite_form(model.graph)
    m0, n0 = min(m0, n0), max(m0, n0)
    d = n0 - m0
    full = depth + d
    words = {length: list(admissible_words(g, length)) for length in (full,)}
    for length in range(1, depth + 1):
        for gamma in admissible_words(g, length):
            exts = [w for w in words[full] if w[:length] == gamma]
            if not exts:
                continue
            if all(all(w[m0 + t] == w[n0 + t] for t in range(full - n0))
                   for w in exts):
                return True, gamma
    return False, None


class TestEssentialFreeness:
    def test_full_shift_free(self, full2_model):
        res = ck.essential_freeness_scan(full2_model, 0, 1, 4)
        assert not res.violation_found

    def test_two_cycle_violation(self, two_cycle):
        res = ck.essential_freeness_scan(ck.dense_model(two_cycle), 0, 2, 4)
        assert res.violation_found and res.witness == (1,)

    def test_single_loop_violation(self):
        m = ck.dense_model(ck.FiniteGraph(((1,),)))
        res = ck.essential_freeness_scan(m, 0, 1, 2)
        assert res.violation_found and res.witness == (1,)

    def test_against_brute_oracle(self):
        rng = random.Random(5)
        pool = [r for r in itertools.product((0, 1), repeat=3) if any(r)]
        for _ in range(20):
            g = ck.FiniteGraph(tuple(rng.choice(pool) for _ in range(3)))
            model = ck.dense_model(g)
            for m0, n0 in ((0, 1), (0, 2), (1, 2)):
                got = ck.essential_freeness_scan(model, m0, n0, 4)
                want = brute_freeness_scan(model, m0, n0, 4)
                assert (got.violation_found, got.witness) == want, (g.rows, m0, n0)

    def test_swapped_powers(self, two_cycle):
        m = ck.dense_model(two_cycle)
        a = ck.essential_freeness_scan(m, 2, 0, 4)
        b = ck.essential_freeness_scan(m, 0, 2, 4)
        assert (a.violation_found, a.witness) == (b.violation_found, b.witness)

    def test_depth_too_small(self, full2_model):
        with pytest.raises(ValidationError, match="depth"):
            ck.essential_freeness_scan(full2_model, 0, 3, 2)
        with pytest.raises(ValidationError, match="distinct"):
            ck.essential_freeness_scan(full2_model, 1, 1, 4)

    def test_dead_end_graph(self):
        # zero-row graphs: extensions that cannot reach full depth do not witness
        g = ck.FiniteGraph(((0, 1), (0, 0)))
        model = ck.validate_model(g, [ck.make_pattern(g, finite=(2,))])
        res = ck.essential_freeness_scan(model, 0, 1, 2)
        want = brute_freeness_scan(model, 0, 1, 2)
        assert (res.violation_found, res.witness) == want
