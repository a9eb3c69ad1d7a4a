"""The terminal-path model of a one-sided Markov shift.

A point is either an infinite admissible vertex sequence or a finite word
paired with a boundary set containing its last letter.  The space is the
projective limit of finite level spectra: at level n these are the full
words of length n+1, the shorter words capped by a boundary set, and the
empty-word boundary points.  This module computes the boundary family of
column cluster patterns, validates models, enumerates levels, applies the
shift and the level projections, and scans for periodic points and
essential-freeness violations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .errors import DomainError, UnsupportedPresentationError, ValidationError
from .graphs import (BandedTailGraph, BlockPatternGraph, FiniteGraph,
                     GraphSpec, Loop, finite_form, loop_has_outgoing_edge,
                     valid_vertex)


# ---------------------------------------------------------------------------
# Boundary patterns

@dataclass(frozen=True)
class BoundaryPattern:
    """A subset of the vertex set: finitely many explicit vertices plus,
    for block-pattern graphs, whole infinite classes.  Construct through
    :func:`make_pattern` so equal subsets get equal representations."""

    finite: frozenset[int]
    classes: frozenset[int]

    @property
    def is_empty(self) -> bool:
        return not self.finite and not self.classes

    def contains(self, v: int, g: GraphSpec) -> bool:
        if v in self.finite:
            return True
        return bool(self.classes) and isinstance(g, BlockPatternGraph) \
            and g.class_of(v) in self.classes

    def sort_key(self):
        return (tuple(sorted(self.finite)), tuple(sorted(self.classes)))

    def render(self) -> str:
        parts = [str(v) for v in sorted(self.finite)]
        parts += [f"c{c}" for c in sorted(self.classes)]
        return "{" + ",".join(parts) + "}"


def make_pattern(g: GraphSpec, finite: Iterable[int] = (),
                 classes: Iterable[int] = ()) -> BoundaryPattern:
    """Canonical pattern: finite classes are expanded into explicit
    vertices, so structural equality is extensional equality."""
    fin = set()
    for v in finite:
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValidationError(f"pattern vertices are positive integers, got {v!r}")
        ff = finite_form(g)
        if ff is not None and v > ff.size:
            raise ValidationError(f"pattern vertex {v} exceeds graph size {ff.size}")
        fin.add(v)
    cls = set()
    for c in classes:
        if not isinstance(g, BlockPatternGraph):
            raise ValidationError("class patterns only apply to block-pattern graphs")
        if not isinstance(c, int) or c < 1 or c > g.num_classes:
            raise ValidationError(f"unknown class id {c!r}")
        card = g.class_sizes[c - 1]
        if card is None:
            cls.add(c)
        else:
            start = g.class_start(c)
            fin.update(range(start, start + card))
    return BoundaryPattern(frozenset(fin), frozenset(cls))


def full_pattern(g: GraphSpec) -> BoundaryPattern:
    """The pattern denoting the whole vertex set, where representable."""
    ff = finite_form(g)
    if ff is not None:
        return make_pattern(g, finite=ff.vertices())
    if isinstance(g, BlockPatternGraph):
        return make_pattern(g, classes=range(1, g.num_classes + 1))
    raise UnsupportedPresentationError(
        "the full vertex set of a banded tail is not a representable pattern")


def cluster_patterns(g: GraphSpec) -> frozenset[BoundaryPattern]:
    """The boundary family forced by the graph: the cluster points of the
    net of in-neighbor (column) sets.  A pattern J is a cluster point iff
    every finite window W has infinitely many columns agreeing with J on W.

    Finite graphs have none.  For a block pattern only the finitely many
    distinct column patterns occur, so the cluster points are exactly the
    in-neighbor patterns of the infinite classes.  For a banded tail every
    column is a finite set marching off to infinity and only finitely many
    columns meet any window, so the empty pattern is the only cluster point.
    """
    if finite_form(g) is not None:
        return frozenset()
    if isinstance(g, BlockPatternGraph):
        out = set()
        for c in range(1, g.num_classes + 1):
            if g.class_sizes[c - 1] is None:
                sources = g.source_classes(c)
                fin = [s for s in sources if g.class_sizes[s - 1] is not None]
                inf = [s for s in sources if g.class_sizes[s - 1] is None]
                vertices: list[int] = []
                for s in fin:
                    start = g.class_start(s)
                    vertices.extend(range(start, start + g.class_sizes[s - 1]))
                out.add(make_pattern(g, finite=vertices, classes=inf))
        return frozenset(out)
    if isinstance(g, BandedTailGraph):
        return frozenset({make_pattern(g)})
    raise ValidationError(f"unknown graph presentation {type(g).__name__}")


# ---------------------------------------------------------------------------
# Models

@dataclass(frozen=True)
class MarkovModel:
    """A graph together with a boundary family containing all its cluster
    patterns.  ``dense_domain`` records whether the family is exactly the
    cluster family; only then is the shift's domain dense in the space."""

    graph: GraphSpec
    boundary: frozenset[BoundaryPattern]
    dense_domain: bool

    def vertex_in_boundary(self, v: int) -> bool:
        return any(p.contains(v, self.graph) for p in self.boundary)

    def boundary_sorted(self) -> list[BoundaryPattern]:
        return sorted(self.boundary, key=BoundaryPattern.sort_key)


def validate_model(g: GraphSpec, boundary: Iterable[BoundaryPattern]) -> MarkovModel:
    """Check that the family contains every cluster pattern and that each
    vertex either has an outgoing edge or lies in some member of the
    family (so every vertex heads a terminal path)."""
    fam = frozenset(boundary)
    forced = cluster_patterns(g)
    for pattern in sorted(forced, key=BoundaryPattern.sort_key):
        if pattern not in fam:
            raise ValidationError(
                f"boundary family misses the cluster pattern {pattern.render()}")

    def covered(v: int) -> bool:
        return any(p.contains(v, g) for p in fam)

    if isinstance(g, FiniteGraph):
        for i in g.vertices():
            if g.out_degree(i) == 0 and not covered(i):
                raise ValidationError(
                    f"vertex {i} has no outgoing edge and lies in no boundary set")
    elif isinstance(g, BlockPatternGraph):
        for c in range(1, g.num_classes + 1):
            if any(g.block[c - 1]):
                continue
            card = g.class_sizes[c - 1]
            if card is None:
                if not any(c in p.classes for p in fam):
                    raise ValidationError(
                        f"vertex {g.class_start(c)} has no outgoing edge "
                        "and lies in no boundary set")
            else:
                start = g.class_start(c)
                for v in range(start, start + card):
                    if not covered(v):
                        raise ValidationError(
                            f"vertex {v} has no outgoing edge and lies in no boundary set")
    elif isinstance(g, BandedTailGraph):
        if not g.offsets:
            raise ValidationError(
                f"vertex {g.cutoff + 1} has no outgoing edge and lies in no boundary set")
        for i in range(1, g.cutoff + 1):
            if g.out_degree(i) == 0 and not covered(i):
                raise ValidationError(
                    f"vertex {i} has no outgoing edge and lies in no boundary set")
    else:
        raise ValidationError(f"unknown graph presentation {type(g).__name__}")
    return MarkovModel(g, fam, dense_domain=(fam == forced))


def dense_model(g: GraphSpec) -> MarkovModel:
    """The model with boundary family exactly the cluster patterns."""
    return validate_model(g, cluster_patterns(g))


# ---------------------------------------------------------------------------
# Spectrum points

@dataclass(frozen=True)
class SpectrumPoint:
    """A member of a level spectrum: a full admissible word (``boundary``
    is None; at level n the word has length n+1) or a truncated point, a
    word of length <= n capped by a boundary set containing its last
    letter.  The level is carried by the enclosing enumeration."""

    word: tuple[int, ...]
    boundary: Optional[BoundaryPattern] = None

    @property
    def is_full(self) -> bool:
        return self.boundary is None

    def sort_key(self):
        if self.boundary is None:
            return (0, self.word)
        return (1, -len(self.word), self.word, self.boundary.sort_key())

    def render(self) -> str:
        word = ",".join(str(v) for v in self.word)
        if self.boundary is None:
            return word
        return f"{word};{self.boundary.render()}"

    def pretty(self) -> str:
        if self.boundary is None:
            return "(" + ",".join(str(v) for v in self.word) + ")"
        word = ",".join(str(v) for v in self.word) if self.word else "∅"
        return f"({word};{self.boundary.render()})"


def full_point(word: Sequence[int]) -> SpectrumPoint:
    return SpectrumPoint(tuple(word), None)


def truncated_point(word: Sequence[int], pattern: BoundaryPattern,
                    g: Optional[GraphSpec] = None) -> SpectrumPoint:
    word = tuple(word)
    if word and g is not None and not pattern.contains(word[-1], g):
        raise ValidationError(
            f"truncated word must end inside its boundary set: {word[-1]} "
            f"not in {pattern.render()}")
    return SpectrumPoint(word, pattern)


def point_valid_at(p: SpectrumPoint, level: int) -> bool:
    if p.is_full:
        return len(p.word) == level + 1
    return len(p.word) <= level


def word_admissible(g: GraphSpec, word: Sequence[int]) -> bool:
    if not all(valid_vertex(g, v) for v in word):
        return False
    return all(g.edge(a, b) for a, b in zip(word, word[1:]))


def admissible_words(g: GraphSpec, length: int,
                     window: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """All admissible words of the given length in lexicographic order.
    Infinite presentations require a window (letters restricted to
    1..window) and the enumeration is flagged partial by the caller."""
    if length == 0:
        yield ()
        return
    fin = finite_form(g)
    if fin is not None:
        starts: Sequence[int] = list(fin.vertices())
    else:
        if window is None:
            raise UnsupportedPresentationError(
                "enumerating words of an infinite graph needs a window bound")
        starts = range(1, window + 1)

    def extend(word: list[int]) -> Iterator[tuple[int, ...]]:
        if len(word) == length:
            yield tuple(word)
            return
        if fin is not None:
            nxt: Iterable[int] = fin.successors(word[-1])
        else:
            nxt = (j for j in range(1, window + 1) if g.edge(word[-1], j))
        for j in nxt:
            word.append(j)
            yield from extend(word)
            word.pop()

    for s in starts:
        yield from extend([s])


@dataclass(frozen=True)
class SpectrumSlice:
    points: tuple[SpectrumPoint, ...]
    partial: bool


def spectrum_level(model: MarkovModel, n: int,
                   window: Optional[int] = None) -> SpectrumSlice:
    """The level-n spectrum: full words of length n+1, then truncated words
    by decreasing length, then the empty-word boundary points.  For
    infinite graphs a window must be supplied and the result is the
    window-restricted sub-spectrum, flagged partial."""
    if n < 0:
        raise ValidationError("level must be nonnegative")
    g = model.graph
    infinite = finite_form(g) is None
    if infinite and window is None:
        raise UnsupportedPresentationError(
            "spectrum of an infinite graph needs a window bound")
    pts: list[SpectrumPoint] = [full_point(w) for w in admissible_words(g, n + 1, window)]
    fam = model.boundary_sorted()
    for r in range(n, 0, -1):
        layer = []
        for w in admissible_words(g, r, window):
            for pat in fam:
                if pat.contains(w[-1], g):
                    layer.append(truncated_point(w, pat))
        layer.sort(key=SpectrumPoint.sort_key)
        pts.extend(layer)
    pts.extend(truncated_point((), pat) for pat in fam)
    return SpectrumSlice(tuple(pts), infinite)


def project_point(p: SpectrumPoint, from_level: int) -> SpectrumPoint:
    """The projection from level ``from_level`` to ``from_level - 1``:
    full words drop their last letter, maximal-length truncated words drop
    their boundary cap, everything else is fixed."""
    if from_level < 1:
        raise ValidationError("projection needs a source level >= 1")
    if not point_valid_at(p, from_level):
        raise ValidationError(f"point {p.render()} is not a level-{from_level} point")
    if p.is_full:
        return full_point(p.word[:-1])
    if len(p.word) == from_level:
        return full_point(p.word)
    return p


def fiber(model: MarkovModel, p: SpectrumPoint, at_level: int) -> tuple[SpectrumPoint, ...]:
    """All level-(at_level+1) points projecting onto ``p``."""
    if not point_valid_at(p, at_level):
        raise ValidationError(f"point {p.render()} is not a level-{at_level} point")
    if not p.is_full:
        return (p,)
    g = model.graph
    last = p.word[-1]
    try:
        succ = g.successors(last)
    except UnsupportedPresentationError:
        raise UnsupportedPresentationError(
            f"vertex {last} has infinitely many successors; "
            "the fiber is not finitely enumerable")
    out = [full_point(p.word + (j,)) for j in succ]
    for pat in model.boundary_sorted():
        if pat.contains(last, g):
            out.append(truncated_point(p.word, pat))
    return tuple(sorted(out, key=SpectrumPoint.sort_key))


def shift_point(p, from_level: Optional[int] = None):
    """Remove the first letter; level bookkeeping drops by one.  Accepts a
    spectrum point or a plain word tuple.  Points of word length 0 lie
    outside the shift's domain, and a full length-1 word is a level-0
    cylinder whose image is no longer a cylinder."""
    if isinstance(p, tuple):
        if not p:
            raise DomainError("the empty word lies outside the shift's domain")
        return p[1:]
    if not p.word:
        raise DomainError(f"{p.pretty()} lies outside the shift's domain")
    if p.is_full:
        if len(p.word) == 1:
            raise DomainError(
                "a level-0 full path shifts onto a follower set, not a cylinder")
        return full_point(p.word[1:])
    return SpectrumPoint(p.word[1:], p.boundary)


# ---------------------------------------------------------------------------
# Periodic points

@dataclass(frozen=True)
class PeriodicPointRecord:
    """The eventually periodic path ``prefix . loop . loop ...``; the
    preperiod and period are minimal, so the record is the point."""

    preperiod: int
    period: int
    prefix: tuple[int, ...]
    loop: Loop
    isolated: bool


@dataclass(frozen=True)
class PeriodicScan:
    records: tuple[PeriodicPointRecord, ...]
    max_period: int
    max_preperiod: int

    def strictly_periodic(self) -> tuple[PeriodicPointRecord, ...]:
        return tuple(r for r in self.records if r.preperiod == 0)

    def strict_count_dividing(self, k: int) -> int:
        """Number of strictly periodic points whose minimal period divides k."""
        if k < 1 or k > self.max_period:
            raise ValidationError(f"k must lie in 1..{self.max_period}")
        return sum(1 for r in self.records
                   if r.preperiod == 0 and k % r.period == 0)


def periodic_points(model: MarkovModel, max_period: int,
                    max_preperiod: int) -> PeriodicScan:
    """All eventually periodic paths with minimal period <= max_period and
    minimal preperiod <= max_preperiod.  Each point appears once: the loop
    is primitive and based where the periodic tail starts, and the prefix
    is shortest (its last letter differs from the loop's last letter)."""
    fin = finite_form(model.graph)
    if fin is None:
        raise UnsupportedPresentationError("periodic-point search needs a finite graph")
    if max_period < 1:
        raise ValidationError("max_period must be >= 1")
    if max_preperiod < 0:
        raise ValidationError("max_preperiod must be >= 0")

    def primitive(word: tuple[int, ...]) -> bool:
        p = len(word)
        return not any(p % d == 0 and word == word[:d] * (p // d)
                       for d in range(1, p))

    # Primitive closed walks up to max_period; distinct base points are
    # distinct points of the shift, so rotations are not merged.
    loops: list[tuple[int, ...]] = []

    def close_walks(word: list[int]) -> None:
        v = word[-1]
        if fin.edge(v, word[0]) and primitive(tuple(word)):
            loops.append(tuple(word))
        if len(word) < max_period:
            for j in fin.successors(v):
                word.append(j)
                close_walks(word)
                word.pop()

    for start in fin.vertices():
        close_walks([start])

    records = []
    for base in loops:
        loop = Loop(base + (base[0],))
        isolated = not loop_has_outgoing_edge(fin, loop)
        records.append(PeriodicPointRecord(0, len(base), (), loop, isolated))
        # Preperiod words grow leftwards.  Minimality of the preperiod is
        # exactly "last prefix letter differs from the loop's last letter";
        # shorter prefixes are separate records of their own.
        frontier: list[tuple[int, ...]] = [()]
        for m in range(1, max_preperiod + 1):
            new: list[tuple[int, ...]] = []
            for pre in frontier:
                target = pre[0] if pre else base[0]
                for i in fin.vertices():
                    if fin.edge(i, target):
                        new.append((i,) + pre)
            for w in new:
                if w[-1] != base[-1]:
                    records.append(
                        PeriodicPointRecord(m, len(base), w, loop, isolated))
            frontier = new
    records.sort(key=lambda r: (r.preperiod, r.prefix, r.loop.vertices))
    return PeriodicScan(tuple(records), max_period, max_preperiod)


def strict_period_counts(g: GraphSpec, max_k: int) -> list[int]:
    """counts[k] = number of points with T^k x = x, for 1 <= k <= max_k
    (index 0 unused).  Each such point is a closed walk of length k read
    as an infinite path, so the counts come from walk vectors pushed
    through the successor lists."""
    fin = finite_form(g)
    if fin is None:
        raise UnsupportedPresentationError("periodic counts need a finite graph")
    n = fin.size
    succ = [fin.successors(i) for i in fin.vertices()]
    counts = [0] * (max_k + 1)
    for start in range(1, n + 1):
        vec = [0] * (n + 1)
        vec[start] = 1
        for k in range(1, max_k + 1):
            new = [0] * (n + 1)
            for i in range(1, n + 1):
                c = vec[i]
                if c:
                    for j in succ[i - 1]:
                        new[j] += c
            vec = new
            counts[k] += vec[start]
    return counts


# ---------------------------------------------------------------------------
# Essential freeness (bounded shadow)

@dataclass(frozen=True)
class FreenessScanResult:
    violation_found: bool
    witness: Optional[tuple[int, ...]] = None


def essential_freeness_scan(model: MarkovModel, m0: int, n0: int,
                            depth: int) -> FreenessScanResult:
    """Look for a cylinder on which the m0-fold and n0-fold shifts agree.

    A cylinder Z(w), |w| <= depth, is a witness when it has at least one
    admissible extension to length depth + (n0 - m0) and every such
    extension e satisfies e[m0+t] = e[n0+t] coordinatewise.  Returns the
    first witness in (length, lexicographic) order, or reports none.  This
    is a bounded, word-level shadow of essential freeness: truncated
    boundary points are not consulted, and the unbounded statement is
    settled by condition (L).
    """
    fin = finite_form(model.graph)
    if fin is None:
        raise UnsupportedPresentationError("the freeness scan needs a finite graph")
    if m0 == n0 or m0 < 0 or n0 < 0:
        raise ValidationError("the two shift powers must be distinct naturals")
    m0, n0 = min(m0, n0), max(m0, n0)
    if depth < n0:
        raise ValidationError(f"depth {depth} is smaller than the shift power {n0}")
    d = n0 - m0
    full = depth + d
    n = fin.size
    succ = [fin.successors(i) for i in fin.vertices()]

    # ext[v][r] = number of admissible words of r further letters from v.
    ext = [[1] * (n + 1)]
    for _ in range(full):
        prev = ext[-1]
        ext.append([0] + [sum(prev[j] for j in succ[v - 1]) for v in range(1, n + 1)])

    def extensions(word: tuple[int, ...], to_len: int) -> int:
        return ext[to_len - len(word)][word[-1]]

    # Words of length `full` in which every checkable coordinate pair
    # agrees: positions >= n0 are forced to repeat the letter d earlier.
    agreeing: list[tuple[int, ...]] = []

    def grow(word: list[int]) -> None:
        if len(word) == full:
            agreeing.append(tuple(word))
            return
        pos = len(word)
        choices: Iterable[int]
        if pos == 0:
            choices = range(1, n + 1)
        elif pos >= n0:
            forced = word[pos - d]
            choices = (forced,) if fin.edge(word[-1], forced) else ()
        else:
            choices = succ[word[-1] - 1]
        for j in choices:
            word.append(j)
            grow(word)
            word.pop()

    grow([])
    prefix_hits: dict[tuple[int, ...], int] = {}
    for w in agreeing:
        for ln in range(1, depth + 1):
            pre = w[:ln]
            prefix_hits[pre] = prefix_hits.get(pre, 0) + 1
    for pre in sorted(prefix_hits, key=lambda w: (len(w), w)):
        if prefix_hits[pre] == extensions(pre, full):
            return FreenessScanResult(True, pre)
    return FreenessScanResult(False, None)
