"""Directed-graph presentations of 0/1 transition matrices and the loop
predicates that classify the associated shift algebras.

Three presentations are supported.  ``FiniteGraph`` is an explicit n x n
matrix.  ``BlockPatternGraph`` groups vertices into classes whose mutual
adjacency is a constant block; the last class may be infinite.
``BandedTailGraph`` is a finite prefix followed by an infinite tail in
which ``i -> j`` iff ``j - i`` lies in a fixed set of positive offsets,
with finitely many coupling edges from the prefix into the tail.

Vertices are 1-based integers.  ``A(i, j) = 1`` permits the transition
``i -> j``; a path is a vertex word whose consecutive pairs are edges.
All predicates on infinite presentations are decided symbolically (class
or tail analysis), never by unbounded scans.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import UnsupportedPresentationError, ValidationError


def _check_01_rows(rows, what: str) -> tuple[tuple[int, ...], ...]:
    out = []
    for r, row in enumerate(rows):
        clean = []
        for c, entry in enumerate(row):
            if not isinstance(entry, int) or isinstance(entry, bool) or entry not in (0, 1):
                raise ValidationError(
                    f"{what}[{r+1}][{c+1}] must be 0 or 1, got {entry!r}")
            clean.append(entry)
        out.append(tuple(clean))
    return tuple(out)


@dataclass(frozen=True)
class FiniteGraph:
    """Explicit 0/1 adjacency matrix on vertices 1..n."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = _check_01_rows(self.rows, "rows")
        n = len(rows)
        for r, row in enumerate(rows):
            if len(row) != n:
                raise ValidationError(
                    f"rows must be square: row {r+1} has length {len(row)}, expected {n}")
        object.__setattr__(self, "rows", rows)

    @property
    def size(self) -> int:
        return len(self.rows)

    def vertices(self) -> range:
        return range(1, self.size + 1)

    def _check(self, v: int) -> None:
        if not 1 <= v <= self.size:
            raise ValidationError(f"vertex {v} outside 1..{self.size}")

    def edge(self, i: int, j: int) -> bool:
        self._check(i), self._check(j)
        return self.rows[i - 1][j - 1] == 1

    def successors(self, i: int) -> tuple[int, ...]:
        self._check(i)
        return tuple(j + 1 for j, bit in enumerate(self.rows[i - 1]) if bit)

    def in_neighbors(self, j: int) -> tuple[int, ...]:
        self._check(j)
        return tuple(i + 1 for i in range(self.size) if self.rows[i][j - 1])

    def out_degree(self, i: int) -> int:
        self._check(i)
        return sum(self.rows[i - 1])


@dataclass(frozen=True)
class BlockPatternGraph:
    """Vertices partitioned into contiguous classes; adjacency depends only
    on the (source class, target class) pair via ``block``.

    ``class_sizes`` holds one positive integer per class, or ``None`` for an
    infinite class.  Since classes occupy contiguous 1-based ranges, only the
    last class may be infinite.
    """

    class_sizes: tuple[Optional[int], ...]
    block: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        sizes = tuple(self.class_sizes)
        if not sizes:
            raise ValidationError("block pattern needs at least one class")
        for k, card in enumerate(sizes):
            if card is None:
                if k != len(sizes) - 1:
                    raise ValidationError(
                        f"class {k+1} is infinite but not last; "
                        "contiguous vertex ranges allow only a final infinite class")
            elif not isinstance(card, int) or isinstance(card, bool) or card < 1:
                raise ValidationError(
                    f"class {k+1} cardinality must be a positive integer or infinite, got {card!r}")
        block = _check_01_rows(self.block, "block")
        if len(block) != len(sizes) or any(len(row) != len(sizes) for row in block):
            raise ValidationError(
                f"block must be {len(sizes)}x{len(sizes)} to match the class list")
        object.__setattr__(self, "class_sizes", sizes)
        object.__setattr__(self, "block", block)

    @property
    def num_classes(self) -> int:
        return len(self.class_sizes)

    def class_start(self, c: int) -> int:
        """First vertex id of class ``c`` (classes are 1-based)."""
        start = 1
        for card in self.class_sizes[:c - 1]:
            start += card
        return start

    def class_of(self, v: int) -> int:
        if v < 1:
            raise ValidationError(f"vertex ids are positive, got {v}")
        start = 1
        for k, card in enumerate(self.class_sizes, start=1):
            if card is None or v < start + card:
                return k
            start += card
        raise ValidationError(f"vertex {v} exceeds the finite vertex range")

    def total_size(self) -> Optional[int]:
        """Number of vertices, or None when some class is infinite."""
        total = 0
        for card in self.class_sizes:
            if card is None:
                return None
            total += card
        return total

    def edge(self, i: int, j: int) -> bool:
        return self.block[self.class_of(i) - 1][self.class_of(j) - 1] == 1

    def target_classes(self, c: int) -> tuple[int, ...]:
        return tuple(k + 1 for k, bit in enumerate(self.block[c - 1]) if bit)

    def source_classes(self, c: int) -> tuple[int, ...]:
        return tuple(k + 1 for k in range(self.num_classes) if self.block[k][c - 1])

    def out_degree(self, i: int) -> Optional[int]:
        """Out-degree of a vertex, or None when infinite."""
        total = 0
        for c in self.target_classes(self.class_of(i)):
            card = self.class_sizes[c - 1]
            if card is None:
                return None
            total += card
        return total

    def successors(self, i: int) -> tuple[int, ...]:
        if self.out_degree(i) is None:
            raise UnsupportedPresentationError(
                f"vertex {i} has infinitely many successors; restrict to a window")
        out = []
        for c in self.target_classes(self.class_of(i)):
            start = self.class_start(c)
            out.extend(range(start, start + self.class_sizes[c - 1]))
        return tuple(sorted(out))

    def materialize(self) -> FiniteGraph:
        n = self.total_size()
        if n is None:
            raise UnsupportedPresentationError("cannot materialize an infinite block pattern")
        return FiniteGraph(tuple(
            tuple(1 if self.edge(i, j) else 0 for j in range(1, n + 1))
            for i in range(1, n + 1)))


@dataclass(frozen=True)
class BandedTailGraph:
    """Finite ``cutoff`` x ``cutoff`` prefix, then an infinite tail where
    ``i -> j`` iff ``j - i`` is one of the ``offsets``.  ``cross[i][k]``
    switches on the edge from prefix vertex ``i`` to ``i + offsets[k]``
    whenever that target lands in the tail.
    """

    prefix: tuple[tuple[int, ...], ...]
    cutoff: int
    offsets: tuple[int, ...]
    cross: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        prefix = _check_01_rows(self.prefix, "prefix")
        if len(prefix) != self.cutoff or any(len(r) != self.cutoff for r in prefix):
            raise ValidationError(
                f"prefix must be {self.cutoff}x{self.cutoff} (cutoff={self.cutoff})")
        offs = tuple(sorted(set(self.offsets)))
        for o in offs:
            if not isinstance(o, int) or isinstance(o, bool) or o < 1:
                raise ValidationError(f"offsets must be positive integers, got {o!r}")
        cross = _check_01_rows(self.cross, "cross")
        if len(cross) != self.cutoff or any(len(r) != len(offs) for r in cross):
            raise ValidationError(
                f"cross must be {self.cutoff}x{len(offs)} (one column per offset)")
        for i, row in enumerate(cross, start=1):
            for k, bit in enumerate(row):
                if bit and i + offs[k] <= self.cutoff:
                    raise ValidationError(
                        f"cross[{i}][{k+1}] couples {i} -> {i + offs[k]} inside the "
                        "prefix; prefix edges belong in the prefix matrix")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "offsets", offs)
        object.__setattr__(self, "cross", cross)

    def edge(self, i: int, j: int) -> bool:
        if i < 1 or j < 1:
            raise ValidationError("vertex ids are positive")
        if i <= self.cutoff:
            if j <= self.cutoff:
                return self.prefix[i - 1][j - 1] == 1
            if (j - i) in self.offsets:
                return self.cross[i - 1][self.offsets.index(j - i)] == 1
            return False
        return j > self.cutoff and (j - i) in self.offsets

    def successors(self, i: int) -> tuple[int, ...]:
        if i <= self.cutoff:
            out = [j + 1 for j, bit in enumerate(self.prefix[i - 1]) if bit]
            for k, o in enumerate(self.offsets):
                if self.cross[i - 1][k] and i + o > self.cutoff:
                    out.append(i + o)
            return tuple(sorted(out))
        return tuple(i + o for o in self.offsets)

    def in_neighbors(self, j: int) -> tuple[int, ...]:
        if j <= self.cutoff:
            return tuple(i + 1 for i in range(self.cutoff) if self.prefix[i][j - 1])
        out = [j - o for o in self.offsets if j - o > self.cutoff]
        for i in range(1, self.cutoff + 1):
            if j - i in self.offsets and self.cross[i - 1][self.offsets.index(j - i)]:
                out.append(i)
        return tuple(sorted(out))

    def out_degree(self, i: int) -> int:
        return len(self.successors(i))

    def truncate(self, window: int) -> FiniteGraph:
        """Restriction to vertices 1..window as an explicit matrix."""
        if window < max(self.cutoff, 1):
            raise ValidationError("window must cover the prefix")
        return FiniteGraph(tuple(
            tuple(1 if self.edge(i, j) else 0 for j in range(1, window + 1))
            for i in range(1, window + 1)))


GraphSpec = Union[FiniteGraph, BlockPatternGraph, BandedTailGraph]


def finite_form(g: GraphSpec) -> Optional[FiniteGraph]:
    """The graph as an explicit finite matrix, when it has one."""
    if isinstance(g, FiniteGraph):
        return g
    if isinstance(g, BlockPatternGraph) and g.total_size() is not None:
        return g.materialize()
    return None


def is_infinite(g: GraphSpec) -> bool:
    return finite_form(g) is None


def valid_vertex(g: GraphSpec, v) -> bool:
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        return False
    if isinstance(g, FiniteGraph):
        return v <= g.size
    if isinstance(g, BlockPatternGraph):
        total = g.total_size()
        return total is None or v <= total
    return True


# ---------------------------------------------------------------------------
# Loops

@dataclass(frozen=True)
class Loop:
    """A closed path (i_0, ..., i_n) with i_n = i_0 and n >= 1."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        w = tuple(self.vertices)
        if len(w) < 2 or w[0] != w[-1]:
            raise ValidationError("a loop is a closed word (i_0,...,i_n=i_0) with n >= 1")
        object.__setattr__(self, "vertices", w)

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def base_word(self) -> tuple[int, ...]:
        return self.vertices[:-1]

    @property
    def is_simple(self) -> bool:
        return len(set(self.base_word)) == self.length


@dataclass(frozen=True)
class LoopRecord:
    loop: Loop
    has_outgoing_edge: bool


def loop_is_admissible(g: GraphSpec, loop: Loop) -> bool:
    return all(g.edge(a, b) for a, b in zip(loop.vertices, loop.vertices[1:]))


def loop_has_outgoing_edge(g: GraphSpec, loop: Loop) -> bool:
    """An outgoing edge is an edge (i_k, j) with j != i_{k+1} (cyclically)."""
    word = loop.vertices
    for k in range(loop.length):
        follow = word[k + 1]
        if isinstance(g, BlockPatternGraph):
            deg = g.out_degree(word[k])
            if deg is None or deg > 1:
                return True
            if g.successors(word[k]) != (follow,):
                return True
        else:
            for j in g.successors(word[k]):
                if j != follow:
                    return True
    return False


def _canonical_rotation(word: tuple[int, ...]) -> tuple[int, ...]:
    return min(word[k:] + word[:k] for k in range(len(word)))


def _is_primitive(word: tuple[int, ...]) -> bool:
    p = len(word)
    for d in range(1, p):
        if p % d == 0 and word == word[:d] * (p // d):
            return False
    return True


def enumerate_loops(g: GraphSpec, max_len: int) -> list[LoopRecord]:
    """All primitive loops of length <= max_len, one per rotation class
    (lexicographically minimal base point and word), in (length, word) order.
    """
    fin = finite_form(g)
    if fin is None:
        raise UnsupportedPresentationError("loop enumeration needs a finite graph")
    if max_len < 0:
        raise ValidationError("max_len must be nonnegative")
    found: set[tuple[int, ...]] = set()

    def extend(word: list[int]) -> None:
        v = word[-1]
        if len(word) <= max_len and fin.edge(v, word[0]):
            base = tuple(word)
            if _is_primitive(base):
                found.add(_canonical_rotation(base))
        if len(word) < max_len:
            for j in fin.successors(v):
                word.append(j)
                extend(word)
                word.pop()

    for start in fin.vertices():
        extend([start])
    records = []
    for base in sorted(found, key=lambda w: (len(w), w)):
        loop = Loop(base + (base[0],))
        records.append(LoopRecord(loop, loop_has_outgoing_edge(fin, loop)))
    return records


# ---------------------------------------------------------------------------
# Predicates

def has_no_zero_rows(g: GraphSpec) -> bool:
    """Every vertex has at least one outgoing edge."""
    if isinstance(g, FiniteGraph):
        return all(any(row) for row in g.rows)
    if isinstance(g, BlockPatternGraph):
        return all(any(row) for row in g.block)
    if isinstance(g, BandedTailGraph):
        if not g.offsets:
            return False  # every tail vertex has an empty row
        return all(g.out_degree(i) > 0 for i in range(1, g.cutoff + 1))
    raise ValidationError(f"unknown graph presentation {type(g).__name__}")


def _functional_cycles(vertices: Iterable[int], step: dict[int, int]) -> list[list[int]]:
    """Cycles of the partial map ``step`` restricted to its key set."""
    cycles = []
    state: dict[int, int] = {}  # 0 = on current walk, 1 = finished
    for start in sorted(step):
        if state.get(start) == 1:
            continue
        walk, index = [], {}
        v = start
        while v in step and v not in index and state.get(v) != 1:
            index[v] = len(walk)
            walk.append(v)
            state[v] = 0
            v = step[v]
        if v in index:
            cycles.append(walk[index[v]:])
        for u in walk:
            state[u] = 1
    return cycles


@dataclass(frozen=True)
class ConditionLVerdict:
    holds: bool
    witness: Optional[Loop] = None

    def __bool__(self) -> bool:
        return self.holds


def _min_cycle_loop(cycles: list[list[int]]) -> Loop:
    best = min(cycles, key=min)
    k = best.index(min(best))
    rotated = best[k:] + best[:k]
    return Loop(tuple(rotated) + (rotated[0],))


def condition_l(g: GraphSpec) -> ConditionLVerdict:
    """Every loop has at least one outgoing edge.

    A loop lacks an outgoing edge iff all its vertices have out-degree
    exactly 1, so it suffices to detect a cycle in the out-degree-1
    subgraph.  The witness, when the condition fails, is the
    lexicographically minimal exit-free loop.
    """
    if isinstance(g, FiniteGraph):
        step = {i: g.successors(i)[0] for i in g.vertices() if g.out_degree(i) == 1}
        cycles = _functional_cycles(step.keys(), step)
    elif isinstance(g, BlockPatternGraph):
        fin = finite_form(g)
        if fin is not None:
            return condition_l(fin)
        # Only vertices of singleton classes can be revisited by a forced
        # walk, so cycles live in the class-level functional graph over
        # singleton out-degree-1 classes.
        step = {}
        for c in range(1, g.num_classes + 1):
            if g.class_sizes[c - 1] != 1:
                continue
            targets = g.target_classes(c)
            if len(targets) == 1 and g.class_sizes[targets[0] - 1] == 1:
                step[g.class_start(c)] = g.class_start(targets[0])
        cycles = _functional_cycles(step.keys(), step)
    elif isinstance(g, BandedTailGraph):
        # Tail walks strictly increase, so exit-free cycles live in the prefix.
        step = {}
        for i in range(1, g.cutoff + 1):
            succ = g.successors(i)
            if len(succ) == 1 and succ[0] <= g.cutoff:
                step[i] = succ[0]
        cycles = _functional_cycles(step.keys(), step)
    else:
        raise ValidationError(f"unknown graph presentation {type(g).__name__}")
    if cycles:
        return ConditionLVerdict(False, _min_cycle_loop(cycles))
    return ConditionLVerdict(True, None)


def _reach_sets(fin: FiniteGraph) -> dict[int, set[int]]:
    """reach[i] = vertices reachable from i by a path of length >= 1."""
    reach: dict[int, set[int]] = {}
    for i in fin.vertices():
        seen: set[int] = set()
        stack = list(fin.successors(i))
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(fin.successors(v))
        reach[i] = seen
    return reach


def irreducible_with_witness(g: GraphSpec) -> tuple[bool, Optional[tuple[int, int]]]:
    """True iff every ordered vertex pair (i, j) is joined by a path of
    length >= 1; otherwise the lexicographically first unjoined pair."""
    if isinstance(g, FiniteGraph):
        reach = _reach_sets(g)
        for i in g.vertices():
            for j in g.vertices():
                if j not in reach[i]:
                    return False, (i, j)
        return True, None
    if isinstance(g, BlockPatternGraph):
        fin = finite_form(g)
        if fin is not None:
            return irreducible_with_witness(fin)
        # Adjacency between vertices depends only on their classes, so
        # path existence is decided on the class digraph.
        class_graph = FiniteGraph(g.block)
        reach = _reach_sets(class_graph)
        for ci in range(1, g.num_classes + 1):
            for cj in range(1, g.num_classes + 1):
                if cj not in reach[ci]:
                    return False, (g.class_start(ci), g.class_start(cj))
        return True, None
    if isinstance(g, BandedTailGraph):
        # Tail edges strictly increase and nothing re-enters the prefix, so
        # a path ending at j never visits a vertex beyond max(cutoff, j):
        # reachability below the window is exact in the truncation.
        window = g.cutoff + 2 * (max(g.offsets) if g.offsets else 0) + 2
        fin = g.truncate(window)
        reach = _reach_sets(fin)
        for i in range(1, window + 1):
            for j in range(1, window + 1):
                if j not in reach[i]:
                    return False, (i, j)
        raise AssertionError("a banded tail always has an unreachable pair")
    raise ValidationError(f"unknown graph presentation {type(g).__name__}")


def is_irreducible(g: GraphSpec) -> bool:
    return irreducible_with_witness(g)[0]


def reaches_loop_with_witness(g: GraphSpec) -> tuple[bool, Optional[int]]:
    """True iff every vertex has a path to a vertex lying on some loop;
    otherwise the minimal vertex that reaches none."""
    if isinstance(g, FiniteGraph):
        reach = _reach_sets(g)
        on_cycle = {i for i in g.vertices() if i in reach[i]}
        for i in g.vertices():
            if i not in on_cycle and not (reach[i] & on_cycle):
                return False, i
        return True, None
    if isinstance(g, BlockPatternGraph):
        fin = finite_form(g)
        if fin is not None:
            return reaches_loop_with_witness(fin)
        class_graph = FiniteGraph(g.block)
        reach = _reach_sets(class_graph)
        on_cycle = {c for c in range(1, g.num_classes + 1) if c in reach[c]}
        for c in range(1, g.num_classes + 1):
            if c not in on_cycle and not (reach[c] & on_cycle):
                return False, g.class_start(c)
        return True, None
    if isinstance(g, BandedTailGraph):
        # Loops live in the prefix; tail vertices only move further out.
        return False, g.cutoff + 1
    raise ValidationError(f"unknown graph presentation {type(g).__name__}")


def every_vertex_reaches_loop(g: GraphSpec) -> bool:
    return reaches_loop_with_witness(g)[0]


# ---------------------------------------------------------------------------
# Classification

CRITERIA_MET = "criteria-met"
CRITERIA_FAILED = "criteria-failed"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: object = None
    reason: str = ""

    @property
    def met(self) -> bool:
        return self.status == CRITERIA_MET


@dataclass(frozen=True)
class ClassificationReport:
    no_zero_rows: bool
    condition_l: ConditionLVerdict
    irreducible: bool
    irreducible_witness: Optional[tuple[int, int]]
    every_vertex_reaches_loop: bool
    loop_witness: Optional[int]
    simple: Verdict
    purely_infinite: Verdict


def classify(g: GraphSpec) -> ClassificationReport:
    """Assemble the graph predicates and the resulting sufficient-criteria
    verdicts: simple needs condition (L) plus irreducibility, purely
    infinite needs condition (L) plus every vertex reaching a loop.  With a
    zero row the shift hypotheses fail and both verdicts are not-applicable.
    """
    nzr = has_no_zero_rows(g)
    cl = condition_l(g)
    irr, irr_wit = irreducible_with_witness(g)
    rl, rl_wit = reaches_loop_with_witness(g)
    if not nzr:
        na = Verdict(NOT_APPLICABLE, reason="graph has a zero row")
        return ClassificationReport(nzr, cl, irr, irr_wit, rl, rl_wit, na, na)

    if cl.holds and irr:
        simple = Verdict(CRITERIA_MET)
    elif not cl.holds:
        simple = Verdict(CRITERIA_FAILED, witness=cl.witness, reason="condition (L) fails")
    else:
        simple = Verdict(CRITERIA_FAILED, witness=irr_wit, reason="not irreducible")

    if cl.holds and rl:
        pi = Verdict(CRITERIA_MET)
    elif not cl.holds:
        pi = Verdict(CRITERIA_FAILED, witness=cl.witness, reason="condition (L) fails")
    else:
        pi = Verdict(CRITERIA_FAILED, witness=rl_wit,
                     reason="some vertex reaches no loop")
    return ClassificationReport(nzr, cl, irr, irr_wit, rl, rl_wit, simple, pi)


def all_finite_graphs(n: int, no_zero_rows_only: bool = False) -> Iterable[FiniteGraph]:
    """Every n x n 0/1 matrix, in row-major lexicographic order."""
    row_choices = list(itertools.product((0, 1), repeat=n))
    if no_zero_rows_only:
        row_choices = [r for r in row_choices if any(r)]
    for rows in itertools.product(row_choices, repeat=n):
        yield FiniteGraph(rows)
