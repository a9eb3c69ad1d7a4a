"""The Boolean algebra of clopen subsets of a terminal-path space,
realized as explicit member sets at spectrum levels.

A clopen set stored at level n means the union of the projective-limit
preimages of its members.  Raising the level replaces members by their
fibers and never changes the set; the canonical form is the minimal level
at which the set is expressible, with members kept as a frozenset, so set
equality is structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import UnsupportedPresentationError, ValidationError
from .graphs import BlockPatternGraph, finite_form
from .pathspace import (MarkovModel, SpectrumPoint, fiber, full_point,
                        point_valid_at, project_point, spectrum_level,
                        truncated_point, word_admissible)


@dataclass(frozen=True)
class ClopenSet:
    model: MarkovModel
    level: int
    members: frozenset[SpectrumPoint]

    @property
    def is_empty(self) -> bool:
        return not self.members

    def sorted_members(self) -> list[SpectrumPoint]:
        return sorted(self.members, key=SpectrumPoint.sort_key)

    # -- lattice operations (canonical results) ----------------------------

    def _pair(self, other: "ClopenSet") -> tuple[frozenset, frozenset, int]:
        if self.model != other.model:
            raise ValidationError("clopen sets belong to different models")
        n = max(self.level, other.level)
        return (members_at_level(self, n), members_at_level(other, n), n)

    def meet(self, other: "ClopenSet") -> "ClopenSet":
        a, b, n = self._pair(other)
        return make_clopen(self.model, n, a & b)

    def join(self, other: "ClopenSet") -> "ClopenSet":
        a, b, n = self._pair(other)
        return make_clopen(self.model, n, a | b)

    def difference(self, other: "ClopenSet") -> "ClopenSet":
        a, b, n = self._pair(other)
        return make_clopen(self.model, n, a - b)

    def leq(self, other: "ClopenSet") -> bool:
        a, b, _ = self._pair(other)
        return a <= b

    def complement(self) -> "ClopenSet":
        full = full_space(self.model, self.level)
        return full.difference(self)

    def serialize(self) -> dict:
        return {"level": self.level,
                "members": [p.render() for p in self.sorted_members()]}


def _validate_members(model: MarkovModel, level: int,
                      members: Iterable[SpectrumPoint]) -> frozenset[SpectrumPoint]:
    out = set()
    for p in members:
        if not point_valid_at(p, level):
            raise ValidationError(
                f"{p.render()} is not a level-{level} point")
        if p.is_full and not word_admissible(model.graph, p.word):
            raise ValidationError(f"{p.render()} is not an admissible word")
        if not p.is_full:
            if p.boundary not in model.boundary:
                raise ValidationError(
                    f"{p.render()} caps with a set outside the boundary family")
            if p.word and not p.boundary.contains(p.word[-1], model.graph):
                raise ValidationError(
                    f"{p.render()} does not end inside its boundary set")
        out.add(p)
    return frozenset(out)


def _lower_once(model: MarkovModel, level: int,
                members: frozenset[SpectrumPoint]) -> Optional[frozenset[SpectrumPoint]]:
    """Members at level-1 when the set is a union of whole fibers, else None."""
    if level == 0:
        return None
    images = {project_point(p, level) for p in members}
    covered = set()
    for q in images:
        for p in fiber(model, q, level - 1):
            if p not in members:
                return None
            covered.add(p)
    if covered != members:
        return None
    return frozenset(images)


def make_clopen(model: MarkovModel, level: int,
                members: Iterable[SpectrumPoint]) -> ClopenSet:
    """Canonical clopen set: validates members and lowers to minimal level."""
    mem = _validate_members(model, level, members)
    while True:
        lowered = _lower_once(model, level, mem)
        if lowered is None:
            break
        mem = lowered
        level -= 1
    if not mem:
        level = 0
    return ClopenSet(model, level, mem)


def members_at_level(cl: ClopenSet, n: int) -> frozenset[SpectrumPoint]:
    """The member set of ``cl`` re-expressed at level n >= level(cl)."""
    if n < cl.level:
        raise ValidationError(f"cannot lower a level-{cl.level} set to level {n}")
    mem = set(cl.members)
    for lvl in range(cl.level, n):
        nxt: set[SpectrumPoint] = set()
        for p in mem:
            nxt.update(fiber(cl.model, p, lvl))
        mem = nxt
    return frozenset(mem)


def raise_level(cl: ClopenSet, n: int) -> ClopenSet:
    """Same set, materialized at level n (not canonicalized downwards)."""
    return ClopenSet(cl.model, n, members_at_level(cl, n))


def empty_clopen(model: MarkovModel) -> ClopenSet:
    return ClopenSet(model, 0, frozenset())


def full_space(model: MarkovModel, level: int = 0) -> ClopenSet:
    if finite_form(model.graph) is None:
        raise UnsupportedPresentationError(
            "the full space of an infinite graph is not a finite member list")
    return make_clopen(model, level, spectrum_level(model, level).points)


def cylinder(model: MarkovModel, word: Sequence[int]) -> ClopenSet:
    """Z(word): all terminal paths starting with the given letters.  At
    level len(word)-1 this is the single full-path member; the capped
    finite paths through the word live in its fibers."""
    word = tuple(word)
    if not word:
        return full_space(model)
    if not word_admissible(model.graph, word):
        return empty_clopen(model)
    return make_clopen(model, len(word) - 1, [full_point(word)])


def base_sets(model: MarkovModel, i: int) -> tuple[ClopenSet, ClopenSet]:
    """(U_i, V_i): the cylinder of paths starting at ``i`` and its shift
    image, the follower set {x : i.x admissible}."""
    g = model.graph
    u = cylinder(model, (i,))
    if u.is_empty:
        raise ValidationError(f"unknown or unusable vertex {i}")
    fin = finite_form(g)
    if fin is not None:
        succ: Sequence[int] = fin.successors(i)
    else:
        succ = g.successors(i)  # may raise for infinite rows
    members: list[SpectrumPoint] = [full_point((j,)) for j in succ]
    for pat in model.boundary_sorted():
        if pat.contains(i, g):
            members.append(truncated_point((), pat))
    return u, make_clopen(model, 0, members)


def vertex_cylinder(model: MarkovModel, i: int) -> ClopenSet:
    return base_sets(model, i)[0]


def follower_set(model: MarkovModel, i: Optional[int]) -> ClopenSet:
    """V_i, or the whole space when no last letter constrains the tail."""
    if i is None:
        return full_space(model)
    return base_sets(model, i)[1]


# ---------------------------------------------------------------------------
# Word surgery on clopen sets (used by the monomial calculus)

def prepend_word(word: Sequence[int], cl: ClopenSet) -> ClopenSet:
    """{word . x : x in cl, word . x admissible}."""
    word = tuple(word)
    if not word:
        return cl
    model = cl.model
    g = model.graph
    if not word_admissible(g, word):
        return empty_clopen(model)
    out = []
    for p in cl.members:
        if p.word:
            if not g.edge(word[-1], p.word[0]):
                continue
        elif p.is_full:
            raise AssertionError("full points always carry a word")
        else:
            if not p.boundary.contains(word[-1], g):
                continue
        out.append(SpectrumPoint(word + p.word, p.boundary))
    return make_clopen(model, cl.level + len(word), out)


def strip_word(word: Sequence[int], cl: ClopenSet) -> ClopenSet:
    """{x : word . x in cl} — the transport inverse to prepend_word."""
    word = tuple(word)
    if not word:
        return cl
    model = cl.model
    base = max(cl.level, len(word))
    members = members_at_level(cl, base)
    out = []
    for p in members:
        if len(p.word) >= len(word) and p.word[:len(word)] == word:
            out.append(SpectrumPoint(p.word[len(word):], p.boundary))
    return make_clopen(model, base - len(word), out)


# ---------------------------------------------------------------------------
# The finite-support product identity (CK4)

CK4_HOLDS = "holds"
CK4_FAILS = "fails"
CK4_NOT_FINITELY_SUPPORTED = "not_finitely_supported"


@dataclass(frozen=True)
class Ck4Result:
    status: str
    witness: Optional[SpectrumPoint] = None
    support: Optional[frozenset[int]] = None

    @property
    def holds(self) -> bool:
        return self.status == CK4_HOLDS


def _support(model: MarkovModel, E: frozenset[int], F: frozenset[int]) -> Optional[frozenset[int]]:
    """{i : A(j,i)=1 for j in E and A(k,i)=0 for k in F}, or None if infinite."""
    g = model.graph
    fin = finite_form(g)
    if fin is not None:
        return frozenset(
            i for i in fin.vertices()
            if all(fin.edge(j, i) for j in E) and not any(fin.edge(k, i) for k in F))
    if isinstance(g, BlockPatternGraph):
        verts: set[int] = set()
        for c in range(1, g.num_classes + 1):
            ok = all(g.block[g.class_of(j) - 1][c - 1] for j in E) and \
                not any(g.block[g.class_of(k) - 1][c - 1] for k in F)
            if not ok:
                continue
            card = g.class_sizes[c - 1]
            if card is None:
                return None
            start = g.class_start(c)
            verts.update(range(start, start + card))
        return frozenset(verts)
    # banded tail: rows are finite, so a nonempty E forces a finite support
    if not E:
        return None  # complement constraints alone leave a cofinite set
    candidates = None
    for j in E:
        succ = set(g.successors(j))
        candidates = succ if candidates is None else candidates & succ
    return frozenset(i for i in candidates
                     if not any(g.edge(k, i) for k in F))


def ck4_identity(model: MarkovModel, E: Iterable[int], F: Iterable[int]) -> Ck4Result:
    """Compare the Boolean combination  /\\_E V_j  /\\_F V_k^c  with the
    union of the U_i over the support {i : A(E,F,i) = 1}.  When the support
    is infinite the identity's premise fails and nothing is imposed.

    The letter parts always agree (a point with first letter i lies in the
    combination iff i is in the support), so failures are exactly the
    empty-word boundary points (∅;J) with E inside J and F disjoint from J.
    """
    E, F = frozenset(E), frozenset(F)
    support = _support(model, E, F)
    if support is None:
        return Ck4Result(CK4_NOT_FINITELY_SUPPORTED)
    g = model.graph
    bad = [pat for pat in model.boundary_sorted()
           if all(pat.contains(j, g) for j in E)
           and not any(pat.contains(k, g) for k in F)]
    if finite_form(g) is not None:
        # honest set computation, cross-checked against the letter analysis
        lhs = full_space(model)
        for j in sorted(E):
            lhs = lhs.meet(follower_set(model, j))
        for k in sorted(F):
            lhs = lhs.meet(follower_set(model, k).complement())
        rhs = empty_clopen(model)
        for i in sorted(support):
            rhs = rhs.join(vertex_cylinder(model, i))
        if lhs == rhs:
            assert not bad
            return Ck4Result(CK4_HOLDS, support=support)
        n = max(lhs.level, rhs.level)
        diff = members_at_level(lhs, n) ^ members_at_level(rhs, n)
        witness = min(diff, key=SpectrumPoint.sort_key)
        return Ck4Result(CK4_FAILS, witness=witness, support=support)
    if bad:
        return Ck4Result(CK4_FAILS, witness=truncated_point((), bad[0]),
                         support=support)
    return Ck4Result(CK4_HOLDS, support=support)
