"""Flag complexes and the kernel groups of their right-angled Artin groups.

The kernel of the map sending every vertex generator to a fixed integer unit
is presented on directed edges, with relators cancelling an edge against its
reverse and collapsing triangle cycles.  This module builds those
presentations, spanning-tree power words, the shift endomorphism, the indexed
relator families of the associated infinite presentation, and replayable
filling sequences whose measured areas stay within the quadratic envelopes
that feed the quartic isoperimetric bound."""

from __future__ import annotations

import itertools
import warnings
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .constructors import IndexedRelator
from .oracle import SearchBudget, area_exact
from .rewriting import (
    DerivationSequence,
    GroupPresentation,
    NotNullError,
    find_relator_move,
    mirror_sequence,
    replay_sequence,
    reverse_sequence,
)
from .seqbuild import WordEditor
from .words import EMPTY, Letter, Word, concat, free_reduce, word, wpow

__all__ = [
    "FlagComplex",
    "SpanningTree",
    "NullHomotopyMove",
    "CombinatorialNullHomotopy",
    "check_flag",
    "raag_presentation",
    "dicks_leary_presentation",
    "edge_embedding",
    "spanning_tree",
    "tree_word",
    "bb_phi",
    "edge_conjugation_word",
    "bb_indexed_families",
    "find_null_homotopy",
    "null_homotopy_to_sequence",
    "bb_relator_scheme",
    "scheme_bound",
    "rarea_sample",
    "triangle_complex",
    "octahedron_complex",
]

Edge = Tuple[str, str]


class FlagComplex:
    """A finite flag complex given by its one-skeleton; simplices are the
    cliques, so only the graph and a base vertex are stored."""

    def __init__(self, vertices: Sequence[str], edges: Iterable[Tuple[str, str]],
                 base: Optional[str] = None):
        self.vertices = tuple(dict.fromkeys(vertices))
        vset = set(self.vertices)
        pairs = set()
        for u, v in edges:
            if u not in vset or v not in vset:
                raise ValueError(f"edge ({u}, {v}) uses unknown vertices")
            if u == v:
                raise ValueError(f"loop at {u!r}: the graph must be simple")
            pairs.add(frozenset((u, v)))
        self.edge_set = frozenset(pairs)
        self.base = base if base is not None else self.vertices[0]
        if self.base not in vset:
            raise ValueError(f"unknown base vertex {self.base!r}")
        self.adjacency: Dict[str, frozenset] = {
            v: frozenset(
                u for u in self.vertices if frozenset((u, v)) in self.edge_set
            )
            for v in self.vertices
        }

    def triangles(self) -> List[Tuple[str, str, str]]:
        out = []
        for trio in itertools.combinations(self.vertices, 3):
            u, v, w = trio
            if (
                v in self.adjacency[u]
                and w in self.adjacency[u]
                and w in self.adjacency[v]
            ):
                out.append(trio)
        return out

    def directed_edges(self) -> List[Edge]:
        out = []
        for pair in sorted(self.edge_set, key=sorted):
            u, v = sorted(pair)
            out.append((u, v))
            out.append((v, u))
        return out

    def edge_letter(self, e: Edge, sign: int = 1) -> Letter:
        if frozenset(e) not in self.edge_set:
            raise ValueError(f"({e[0]}, {e[1]}) is not an edge")
        return Letter(f"{e[0]}_{e[1]}", sign)

    def letter_edge(self, gen: str) -> Edge:
        u, _, v = gen.partition("_")
        if frozenset((u, v)) not in self.edge_set:
            raise ValueError(f"{gen!r} does not name a directed edge")
        return (u, v)

    def reverse_letter(self, let: Letter) -> Letter:
        u, v = self.letter_edge(let.gen)
        return Letter(f"{v}_{u}", let.sign)

    def diameter(self) -> int:
        best = 0
        for v in self.vertices:
            dist = self._bfs(v)
            if len(dist) != len(self.vertices):
                raise ValueError("the one-skeleton must be connected")
            best = max(best, max(dist.values()))
        return best

    def _bfs(self, start: str) -> Dict[str, int]:
        dist = {start: 0}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in sorted(self.adjacency[u]):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def __repr__(self):
        return (
            f"FlagComplex({len(self.vertices)} vertices, "
            f"{len(self.edge_set)} edges, base {self.base!r})"
        )


def check_flag(
    vertices: Sequence[str],
    edges: Iterable[Tuple[str, str]],
    base: Optional[str] = None,
    declared_simplices: Optional[Iterable[Sequence[str]]] = None,
) -> FlagComplex:
    """Build a flag complex from a simple graph; when simplices are declared,
    verify they match the derived cliques of dimension at most two."""
    delta = FlagComplex(vertices, edges, base)
    if declared_simplices is not None:
        declared = {frozenset(s) for s in declared_simplices if len(s) == 3}
        derived = {frozenset(t) for t in delta.triangles()}
        if declared != derived:
            raise ValueError(
                f"declared two-simplices {sorted(map(sorted, declared))} do not "
                f"match the derived cliques {sorted(map(sorted, derived))}"
            )
    return delta


def triangle_complex() -> FlagComplex:
    return FlagComplex("abc", [("a", "b"), ("b", "c"), ("a", "c")], "a")


def octahedron_complex() -> FlagComplex:
    # three antipodal pairs, every other pair joined
    vs = ["u1", "u2", "v1", "v2", "w1", "w2"]
    anti = {frozenset(("u1", "u2")), frozenset(("v1", "v2")), frozenset(("w1", "w2"))}
    edges = [
        (a, b)
        for a, b in itertools.combinations(vs, 2)
        if frozenset((a, b)) not in anti
    ]
    return FlagComplex(vs, edges, "u1")


def raag_presentation(delta: FlagComplex) -> GroupPresentation:
    """One generator per vertex, one commutator per edge."""
    relators = []
    for pair in sorted(delta.edge_set, key=sorted):
        u, v = sorted(pair)
        relators.append(word(f"{u} {v} {u}' {v}'"))
    return GroupPresentation(delta.vertices, relators)


def _cycles_of_triangle(delta: FlagComplex, trio) -> List[Tuple[Edge, Edge, Edge]]:
    u, v, w = trio
    out = []
    for a, b, c in ((u, v, w), (u, w, v)):
        cyc = ((a, b), (b, c), (c, a))
        for k in range(3):
            out.append(cyc[k:] + cyc[:k])
    return out


def dicks_leary_presentation(delta: FlagComplex) -> GroupPresentation:
    """The kernel presentation on directed edges: an edge cancels its
    reverse, and each triangle cycle gives a positive and a negative relator.

    Simple connectivity of the complex is the caller's responsibility; a
    cheap Euler-characteristic check warns about obvious first homology.
    """
    gens = [delta.edge_letter(e).gen for e in delta.directed_edges()]
    relators = []
    for e in delta.directed_edges():
        relators.append(
            Word((delta.edge_letter(e), delta.edge_letter((e[1], e[0]))))
        )
    for trio in delta.triangles():
        for cyc in _cycles_of_triangle(delta, trio):
            letters = tuple(delta.edge_letter(e) for e in cyc)
            relators.append(Word(letters))
            relators.append(Word(tuple(l.inverse() for l in letters)))
    pres = GroupPresentation(gens, relators)
    euler = len(delta.vertices) - len(delta.edge_set) + len(delta.triangles())
    if euler < 1:
        warnings.warn(
            "Euler characteristic below one: the complex may not be simply "
            "connected, so this presentation may present a quotient",
            stacklevel=2,
        )
    return pres


def edge_embedding(delta: FlagComplex, w: Word) -> Word:
    """The embedding into the ambient right-angled Artin group: a directed
    edge maps to its initial vertex times the inverse of its terminal one."""
    letters: List[Letter] = []
    for let in w:
        u, v = delta.letter_edge(let.gen)
        image = Word((Letter(u, 1), Letter(v, -1)))
        letters.extend((image if let.sign > 0 else image.inverse()).letters)
    return Word(letters)


class SpanningTree:
    """Breadth-first spanning tree from the base vertex, lexicographic ties."""

    def __init__(self, delta: FlagComplex):
        self.delta = delta
        self.parent: Dict[str, Optional[str]] = {delta.base: None}
        queue = deque([delta.base])
        while queue:
            u = queue.popleft()
            for v in sorted(delta.adjacency[u]):
                if v not in self.parent:
                    self.parent[v] = u
                    queue.append(v)
        if len(self.parent) != len(delta.vertices):
            raise ValueError("the one-skeleton must be connected")

    def path(self, u: str, v: str) -> List[Edge]:
        """Directed edges of the unique reduced tree path from u to v."""
        if u not in self.parent or v not in self.parent:
            raise ValueError(f"unknown vertex in ({u!r}, {v!r})")
        up, vp = [u], [v]
        while self.parent[up[-1]] is not None:
            up.append(self.parent[up[-1]])
        while self.parent[vp[-1]] is not None:
            vp.append(self.parent[vp[-1]])
        while len(up) > 1 and len(vp) > 1 and up[-2] == vp[-2]:
            up.pop()
            vp.pop()
        while up[-1] != vp[-1]:
            # distinct roots cannot happen in one tree
            raise AssertionError("disconnected tree")
        out = [(up[i], up[i + 1]) for i in range(len(up) - 1)]
        out.extend((vp[i + 1], vp[i]) for i in reversed(range(len(vp) - 1)))
        return out


def spanning_tree(delta: FlagComplex) -> SpanningTree:
    return SpanningTree(delta)


def tree_word(delta: FlagComplex, tree: SpanningTree, n: int, u: str, v: str) -> Word:
    """Each tree edge of the geodesic path from u to v raised to the n-th
    power, in path order."""
    letters: List[Letter] = []
    for e in tree.path(u, v):
        letters.extend(wpow(Word((delta.edge_letter(e),)), n).letters)
    return Word(letters)


def bb_phi(delta: FlagComplex, tree: SpanningTree, n: int, w: Word) -> Word:
    """The shift endomorphism: an edge goes to its tree-conjugated n-step
    translate; extends letterwise, commuting with inversion."""
    out: List[Letter] = []
    for let in w:
        u, v = delta.letter_edge(let.gen)
        image = concat(
            tree_word(delta, tree, n, delta.base, u),
            wpow(Word((Letter(let.gen, 1),)), n + 1),
            tree_word(delta, tree, n, v, delta.base),
        )
        out.extend((image if let.sign > 0 else image.inverse()).letters)
    return Word(out)


def edge_conjugation_word(delta: FlagComplex, tree: SpanningTree, e: Edge) -> Word:
    """The positive-normal-form conjugation word of a directed edge."""
    return concat(
        tree_word(delta, tree, 1, delta.base, e[0]),
        Word((delta.edge_letter(e),)),
        tree_word(delta, tree, 1, e[0], delta.base),
    )


def bb_indexed_families(
    delta: FlagComplex, tree: SpanningTree, index_bound: int
) -> List[IndexedRelator]:
    """All members of the shifted relator family and the shift-mismatch
    family with index at most the bound."""
    if index_bound < 0:
        raise ValueError("index bound must be nonnegative")
    pres = dicks_leary_presentation(delta)
    best: Dict[Word, IndexedRelator] = {}

    def offer(w: Word, index: int, family: str, parameter) -> None:
        old = best.get(w)
        if old is None or index < old.index:
            best[w] = IndexedRelator(w, index, family, parameter)

    for n in range(-index_bound, index_bound + 1):
        for ridx, rel in enumerate(pres.relators):
            offer(bb_phi(delta, tree, n, rel), abs(n), "base", (ridx, n))
        for e in delta.directed_edges():
            gen = delta.edge_letter(e).gen
            target = concat(
                bb_phi(delta, tree, n + 1, Word((delta.edge_letter(e),))),
                bb_phi(
                    delta, tree, n, edge_conjugation_word(delta, tree, e)
                ).inverse(),
            )
            offer(target, abs(n), "stable", (gen, n))
    return sorted(best.values(), key=lambda ir: (ir.index, str(ir.word)))


# ---------------------------------------------------------------------------
# combinatorial null-homotopies


@dataclass(frozen=True)
class NullHomotopyMove:
    kind: str  # "1-expand" | "1-collapse" | "2-expand" | "2-collapse"
    pos: int
    edges: Tuple[Edge, ...] = ()


@dataclass(frozen=True)
class CombinatorialNullHomotopy:
    start: Tuple[Edge, ...]
    moves: Tuple[NullHomotopyMove, ...]

    def __len__(self) -> int:
        return len(self.moves)


def _is_cycle(delta: FlagComplex, cyc: Sequence[Edge]) -> bool:
    if not cyc:
        return True
    for e in cyc:
        if frozenset(e) not in delta.edge_set:
            return False
    return all(cyc[i][1] == cyc[(i + 1) % len(cyc)][0] for i in range(len(cyc)))


def _triangle_cycles(delta: FlagComplex) -> List[Tuple[Edge, Edge, Edge]]:
    out = []
    for trio in delta.triangles():
        out.extend(_cycles_of_triangle(delta, trio))
    return out


def apply_null_homotopy_move(
    delta: FlagComplex, cyc: Tuple[Edge, ...], move: NullHomotopyMove
) -> Tuple[Edge, ...]:
    k = move.pos
    if not 0 <= k <= len(cyc):
        raise ValueError("position out of range")
    junction = cyc[k - 1][1] if k and cyc else None
    if move.kind == "1-expand":
        (e,) = move.edges
        if cyc and junction is not None and e[0] != (junction if k else cyc[0][0]):
            # inserting at the seam (k == 0) attaches at the cycle's start
            raise ValueError("edge does not start at the junction vertex")
        return cyc[:k] + (e, (e[1], e[0])) + cyc[k:]
    if move.kind == "1-collapse":
        if k + 1 >= len(cyc):
            raise ValueError("position out of range")
        e, f = cyc[k], cyc[k + 1]
        if f != (e[1], e[0]):
            raise ValueError("edges are not mutually reverse")
        return cyc[:k] + cyc[k + 2 :]
    if move.kind == "2-expand":
        e, f, g = move.edges
        if not _is_cycle(delta, (e, f, g)) or len({e[0], f[0], g[0]}) != 3:
            raise ValueError("edges do not form a triangle cycle")
        if cyc and e[0] != (junction if k else cyc[0][0]):
            raise ValueError("triangle does not start at the junction vertex")
        return cyc[:k] + (e, f, g) + cyc[k:]
    if move.kind == "2-collapse":
        if k + 2 > len(cyc) - 1:
            raise ValueError("position out of range")
        e, f, g = cyc[k], cyc[k + 1], cyc[k + 2]
        if not _is_cycle(delta, (e, f, g)) or len({e[0], f[0], g[0]}) != 3:
            raise ValueError("edges do not form a triangle cycle")
        return cyc[:k] + cyc[k + 3 :]
    raise ValueError(f"unknown move kind {move.kind!r}")


def replay_null_homotopy(
    delta: FlagComplex, nh: CombinatorialNullHomotopy
) -> Tuple[Edge, ...]:
    cyc = nh.start
    for i, move in enumerate(nh.moves):
        try:
            cyc = apply_null_homotopy_move(delta, cyc, move)
        except ValueError as exc:
            raise ValueError(f"move {i}: {exc}") from exc
    return cyc


def find_null_homotopy(
    delta: FlagComplex,
    cycle: Sequence[Edge],
    max_length: Optional[int] = None,
    max_states: int = 200_000,
) -> CombinatorialNullHomotopy:
    """Breadth-first search over cycles for a shortest combinatorial
    null-homotopy; collapse-only moves are tried before expansions."""
    start = tuple(cycle)
    if not _is_cycle(delta, start):
        raise ValueError("not a combinatorial cycle")
    cap = max_length if max_length is not None else len(start) + 4
    triangles = _triangle_cycles(delta)
    seen = {start: None}
    queue = deque([start])
    while queue:
        cyc = queue.popleft()
        if len(seen) > max_states:
            raise NotNullError("null-homotopy search budget exhausted")
        moves: List[Tuple[NullHomotopyMove, Tuple[Edge, ...]]] = []
        for k in range(len(cyc) - 1):
            if cyc[k + 1] == (cyc[k][1], cyc[k][0]):
                moves.append((NullHomotopyMove("1-collapse", k), None))
        for k in range(len(cyc) - 2):
            tri = (cyc[k], cyc[k + 1], cyc[k + 2])
            if len({e[0] for e in tri}) == 3 and _is_cycle(delta, tri):
                moves.append((NullHomotopyMove("2-collapse", k), None))
        if len(cyc) + 2 <= cap:
            for k in range(len(cyc) + 1):
                attach = cyc[k - 1][1] if k else (cyc[0][0] if cyc else None)
                for e in delta.directed_edges():
                    if attach is None or e[0] == attach:
                        moves.append((NullHomotopyMove("1-expand", k, (e,)), None))
        if len(cyc) + 3 <= cap:
            for k in range(len(cyc) + 1):
                attach = cyc[k - 1][1] if k else (cyc[0][0] if cyc else None)
                for tri in triangles:
                    if attach is None or tri[0][0] == attach:
                        moves.append((NullHomotopyMove("2-expand", k, tri), None))
        for move, _ in moves:
            nxt = apply_null_homotopy_move(delta, cyc, move)
            if nxt in seen:
                continue
            seen[nxt] = (cyc, move)
            if not nxt:
                chain = []
                cur = nxt
                while seen[cur] is not None:
                    prev, mv = seen[cur]
                    chain.append(mv)
                    cur = prev
                return CombinatorialNullHomotopy(start, tuple(reversed(chain)))
            queue.append(nxt)
    raise NotNullError("cycle admits no null-homotopy within the length cap")




# ---------------------------------------------------------------------------
# filling-sequence emitters


class BBModel:
    """Caches the kernel presentation, per-cycle null-homotopies, and
    transposition gadgets for one complex and spanning tree."""

    def __init__(self, delta: FlagComplex, tree: SpanningTree):
        self.delta = delta
        self.tree = tree
        self.pres = dicks_leary_presentation(delta)
        self._homotopies: Dict[Tuple[Edge, ...], CombinatorialNullHomotopy] = {}
        self._swap_fills: Dict[Tuple[Letter, Letter], DerivationSequence] = {}

    def edge_cycle(self, e: Edge) -> Tuple[Edge, ...]:
        return tuple(
            self.tree.path(self.delta.base, e[0])
            + [e]
            + self.tree.path(e[1], self.delta.base)
        )

    def null_homotopy(self, cycle: Tuple[Edge, ...]) -> CombinatorialNullHomotopy:
        if cycle not in self._homotopies:
            self._homotopies[cycle] = find_null_homotopy(self.delta, cycle)
        return self._homotopies[cycle]

    @property
    def K(self) -> int:
        """Three times the largest per-edge null-homotopy length."""
        return 3 * max(
            len(self.null_homotopy(self.edge_cycle(e)))
            for e in self.delta.directed_edges()
        )

    @property
    def L(self) -> int:
        return self.delta.diameter()

    def depth(self, v: str) -> int:
        return len(self.tree.path(self.delta.base, v))

    # -- transpositions ---------------------------------------------------

    def _commutator_fill(self, a: Letter, b: Letter) -> DerivationSequence:
        key = (a, b)
        if key not in self._swap_fills:
            w = Word((a, b, a.inverse(), b.inverse()))
            res = area_exact(
                self.pres,
                w,
                SearchBudget(max_word_length=8, max_states=300_000, max_area=4),
            )
            if res.kind != "area":
                raise ValueError(f"letters {a} and {b} have no small commutator fill")
            self._swap_fills[key] = res.witness
        return self._swap_fills[key]

    def swap(self, editor: WordEditor, pos: int) -> int:
        """Transpose editor letters at pos, pos+1 by splicing a minimal
        commutator filling (two relator moves for triangle letters)."""
        a, b = editor.word[pos], editor.word[pos + 1]
        if a == b:
            return 0
        if a.gen == b.gen and a.sign == -b.sign:
            editor.contract(pos)
            editor.expand(pos, b)
            return 0
        fill = self._commutator_fill(a, b)
        editor.insert_cancelling(pos + 2, Word((b, a)).inverse())
        editor.apply_subsequence(pos, fill)
        return fill.area

    def sort_block_pairs(self, editor: WordEditor, pos: int, count: int,
                         first: Letter) -> int:
        """Stable-sort a 2-count block of two letter kinds so `first` letters
        come leftmost."""
        cost = 0
        for i in range(pos, pos + 2 * count):
            j = i
            while j > pos and editor.word[j] == first and editor.word[j - 1] != first:
                cost += self.swap(editor, j - 1)
                j -= 1
        return cost

    # -- power-block primitives -------------------------------------------

    def collapse_pair_power(self, editor: WordEditor, pos: int, k: int) -> int:
        """Remove a^k abar^k at pos (2|k| letters), one relator per layer."""
        m = abs(k)
        for i in range(m):
            a = editor.word[pos + m - 1 - i]
            b = editor.word[pos + m - i]
            editor.relator(pos + m - 1 - i, Word((a, b)), EMPTY)
        return m

    def collapse_mutual_paths(self, editor: WordEditor, pos: int, depth: int,
                              k: int) -> int:
        """Cancel two mutually reverse tree-path power words (2*depth*|k|
        letters at pos), nested centre-out."""
        m = abs(k)
        cost = 0
        for d in range(depth):
            cost += self.collapse_pair_power(editor, pos + (depth - 1 - d) * m, k)
        return cost

    def collapse_triangle_power(self, editor: WordEditor, pos: int,
                                cyc: Tuple[Edge, Edge, Edge], k: int) -> int:
        """Remove x^k y^k z^k at pos for a triangle cycle: convert the last
        block into pairs of the first two, sort, cancel freely."""
        m = abs(k)
        if m == 0:
            return 0
        sgn = 1 if k > 0 else -1
        x = self.delta.edge_letter(cyc[0], sgn)
        y = self.delta.edge_letter(cyc[1], sgn)
        z = self.delta.edge_letter(cyc[2], sgn)
        replacement = Word((y.inverse(), x.inverse()))
        cost = 0
        for i in range(m):
            editor.relator(pos + 2 * m + 2 * i, Word((z,)), replacement)
            cost += 1
        cost += self.sort_block_pairs(editor, pos + 2 * m, m, y.inverse())
        keep = editor.word.letters[:pos] + editor.word.letters[pos + 4 * m :]
        editor.free_to(Word(keep))
        return cost

    def insert_triangle_power(self, editor: WordEditor, pos: int,
                              cyc: Tuple[Edge, Edge, Edge], k: int) -> int:
        """Insert x^k y^k z^k at pos (reverse of the collapse)."""
        if k == 0:
            return 0
        target = self.power_word(cyc, k)
        sub = WordEditor(self.pres, target)
        cost = self.collapse_triangle_power(sub, 0, cyc, k)
        editor.apply_subsequence(pos, reverse_sequence(self.pres, sub.sequence()))
        return cost

    def power_word(self, cycle: Sequence[Edge], k: int) -> Word:
        return concat(*(wpow(Word((self.delta.edge_letter(e),)), k) for e in cycle))

    def insert_pair_power(self, editor: WordEditor, pos: int, e: Edge, k: int) -> int:
        let = self.delta.edge_letter(e, 1 if k >= 0 else -1)
        bar = self.delta.reverse_letter(let)
        for i in range(abs(k)):
            editor.relator(pos + i, EMPTY, Word((let, bar)))
        return abs(k)

    def fill_cycle_power(self, editor: WordEditor, pos: int,
                         cycle: Tuple[Edge, ...], k: int) -> int:
        """Remove the k-th power word of a null-homotopic cycle at pos by
        translating its combinatorial null-homotopy move by move."""
        nh = self.null_homotopy(cycle)
        cyc = cycle
        m = abs(k)
        cost = 0
        for move in nh.moves:
            offset = pos + m * move.pos
            if move.kind == "1-collapse":
                cost += self.collapse_pair_power(editor, offset, k)
            elif move.kind == "1-expand":
                cost += self.insert_pair_power(editor, offset, move.edges[0], k)
            elif move.kind == "2-collapse":
                tri = (cyc[move.pos], cyc[move.pos + 1], cyc[move.pos + 2])
                cost += self.collapse_triangle_power(editor, offset, tri, k)
            else:
                cost += self.insert_triangle_power(editor, offset, move.edges, k)
            cyc = apply_null_homotopy_move(self.delta, cyc, move)
        return cost

    def rewrite_pair_to_edge_power(self, editor: WordEditor, pos: int, e: Edge,
                                   k: int, inverted: bool) -> int:
        """Replace the mutual tree-path pair of the edge's endpoints at pos:
        [Q(tau e, k) P(iota e, k)] becomes e^-k, or, with inverted set,
        [P(iota e, k)^-1 Q(tau e, k)^-1] becomes e^k; costs one filling of
        the edge's tree cycle at power k."""
        if k == 0:
            return 0
        cycle = self.edge_cycle(e)  # path(iota) . e . path(tau)
        shift = abs(k) * self.depth(e[0])
        cycle_word = self.power_word(cycle, k)
        rot_word = concat(cycle_word[shift:], cycle_word[:shift])
        tail = cycle_word[shift:]  # e^k Q(tau, k)
        sub = WordEditor(self.pres, rot_word)
        sub.insert_cancelling(len(rot_word), tail)
        cost = self.fill_cycle_power(sub, len(tail), cycle, k)
        sub.free_to(EMPTY)
        null_rot = sub.sequence()  # fills e^k Q(tau,k) P(iota,k)
        edge_word = Word((self.delta.edge_letter(e),))
        old_len = len(cycle_word) - abs(k)
        if inverted:
            mirrored = mirror_sequence(self.pres, null_rot)
            # mirrored fills P(iota,k)^-1 Q(tau,k)^-1 e^-k
            editor.insert_cancelling(pos + old_len, wpow(edge_word, -k))
            editor.apply_subsequence(pos, mirrored)
        else:
            editor.insert_cancelling(pos, wpow(edge_word, -k))
            editor.apply_subsequence(pos + abs(k), null_rot)
        return cost


def scheme_bound(model: BBModel, kind: str, n: int) -> int:
    """The stated area bound of each emitted scheme."""
    m = abs(n)
    K, L = model.K, model.L
    return {
        "e-ebar": (2 * L + 1) * m + 1,
        "efg": 3 * m * m + (3 * L + 6) * m + 3,
        "inverse-efg": (3 * K + 4) * m * m + (6 * L + 6) * m + 5,
        "stable": 2 * K * m * m + (3 * L * L + 2 * L + 2 * K) * m + L + K,
    }[kind]


def bb_relator_scheme(delta: FlagComplex, tree: SpanningTree, kind: str, args,
                      n: int, model: Optional[BBModel] = None
                      ) -> DerivationSequence:
    """Emit a replayable null sequence for one indexed-family member: kinds
    "e-ebar" and "stable" take a directed edge, "efg" and "inverse-efg" a
    triangle cycle; the measured area stays within scheme_bound(kind, n)."""
    model = model or BBModel(delta, tree)
    if kind == "e-ebar":
        return _scheme_edge_pair(model, tuple(args), n)
    if kind == "efg":
        return _scheme_cycle(model, tuple(args), n)
    if kind == "inverse-efg":
        return _scheme_inverse_cycle(model, tuple(args), n)
    if kind == "stable":
        return _scheme_stable(model, tuple(args), n)
    raise ValueError(f"unknown scheme kind {kind!r}")


def _scheme_edge_pair(model: BBModel, e: Edge, n: int) -> DerivationSequence:
    delta, tree = model.delta, model.tree
    ebar = (e[1], e[0])
    w = concat(
        bb_phi(delta, tree, n, Word((delta.edge_letter(e),))),
        bb_phi(delta, tree, n, Word((delta.edge_letter(ebar),))),
    )
    editor = WordEditor(model.pres, w)
    m = abs(n)
    span = abs(n + 1)
    d_i, d_t = model.depth(e[0]), model.depth(e[1])
    model.collapse_mutual_paths(editor, d_i * m + span, d_t, n)
    model.collapse_pair_power(editor, d_i * m, n + 1)
    model.collapse_mutual_paths(editor, 0, d_i, n)
    editor.free_to(EMPTY)
    return editor.sequence()


def _scheme_cycle(model: BBModel, cyc: Tuple[Edge, Edge, Edge], n: int
                  ) -> DerivationSequence:
    delta, tree = model.delta, model.tree
    m = abs(n)
    span = abs(n + 1)
    w = concat(*(bb_phi(delta, tree, n, Word((delta.edge_letter(e),))) for e in cyc))
    editor = WordEditor(model.pres, w)
    depths = [model.depth(e[0]) for e in cyc]
    # interior junctions: Q(tau_i) P(iota_{i+1}) at the same vertex
    pos = depths[0] * m + span
    pos2 = pos + 2 * depths[1] * m + span
    model.collapse_mutual_paths(editor, pos2, depths[2], n)
    model.collapse_mutual_paths(editor, pos, depths[1], n)
    # now P(iota_0) x0^{n+1} x1^{n+1} x2^{n+1} Q(iota_0)
    model.collapse_triangle_power(editor, depths[0] * m, cyc, n + 1)
    model.collapse_mutual_paths(editor, 0, depths[0], n)
    editor.free_to(EMPTY)
    return editor.sequence()



def _scheme_inverse_cycle(model: BBModel, cyc: Tuple[Edge, Edge, Edge], n: int
                          ) -> DerivationSequence:
    delta, tree = model.delta, model.tree
    w = concat(
        *(bb_phi(delta, tree, n, Word((delta.edge_letter(e, -1),))) for e in cyc)
    )
    editor = WordEditor(model.pres, w)
    if n == 0:
        editor.relator(0, w, EMPTY)
        return editor.sequence()
    m = abs(n)
    span = abs(n + 1)
    depths = [model.depth(e[0]) for e in cyc]
    # conjugate so the leading inverted path joins the trailing one; the
    # rotated core starts with the first inverse edge power
    head = editor.word[: depths[1] * m]  # Q(tau_0, n)^-1, tau_0 = iota_1
    editor.insert_cancelling(len(editor.word), head)
    core = editor.word[len(head) : len(editor.word) - len(head)]
    sub = WordEditor(model.pres, core)
    # junction pairs [P(iota_i)^-1 Q(tau_{i+1})^-1] are the endpoint pair of
    # the reverse of the preceding edge; rewrite each into its power
    pos = span
    for i in (0, 1, 2):
        back = cyc[(i + 2) % 3]
        model.rewrite_pair_to_edge_power(
            sub, pos, (back[1], back[0]), n, inverted=True
        )
        pos += m + span
    # convert the reversed-edge powers into inverse powers of the originals
    pos = span
    for i in (0, 1, 2):
        _convert_reverse_to_inverse(model, sub, pos, m)
        pos += m + span
    _fill_inverse_core(model, sub, cyc, n)
    editor.apply_subsequence(depths[1] * m, sub.sequence())
    editor.free_to(EMPTY)
    return editor.sequence()


def null_homotopy_to_sequence(
    delta: FlagComplex,
    tree: SpanningTree,
    nh: CombinatorialNullHomotopy,
    n: int,
    model: Optional[BBModel] = None,
) -> DerivationSequence:
    """Translate a combinatorial null-homotopy into a null sequence for the
    n-th power word of its start cycle: one reverse-pair relator per layer
    for the one-cell moves, and the triangle collapse for the two-cell moves;
    total area at most three times the move count times n squared."""
    final = replay_null_homotopy(delta, nh)
    if final:
        raise ValueError("the homotopy does not end at the empty cycle")
    model = model or BBModel(delta, tree)
    model._homotopies.setdefault(nh.start, nh)
    editor = WordEditor(model.pres, model.power_word(nh.start, n))
    cyc = nh.start
    m = abs(n)
    for move in nh.moves:
        offset = m * move.pos
        if move.kind == "1-collapse":
            model.collapse_pair_power(editor, offset, n)
        elif move.kind == "1-expand":
            model.insert_pair_power(editor, offset, move.edges[0], n)
        elif move.kind == "2-collapse":
            tri = (cyc[move.pos], cyc[move.pos + 1], cyc[move.pos + 2])
            model.collapse_triangle_power(editor, offset, tri, n)
        else:
            model.insert_triangle_power(editor, offset, move.edges, n)
        cyc = apply_null_homotopy_move(delta, cyc, move)
    editor.free_to(EMPTY)
    return editor.sequence()


def _convert_reverse_to_inverse(model: BBModel, editor: WordEditor, pos: int,
                                count: int) -> int:
    """Rewrite reversed-edge letters at pos into inverse letters of the
    original edges, one reverse-pair relator each."""
    for i in range(count):
        let = editor.word[pos + i]
        u, v = model.delta.letter_edge(let.gen)
        editor.relator(pos + i, Word((let,)), Word((Letter(f"{v}_{u}", -let.sign),)))
    return count


def _fill_inverse_core(model: BBModel, editor: WordEditor,
                       cyc: Tuple[Edge, Edge, Edge], n: int) -> None:
    """Fill x0^{-n-1} x2^{-n} x1^{-n-1} x0^{-n} x2^{-n-1} x1^{-n}: convert
    both middle-edge power blocks into pairs of the other two letters, sort,
    cancel freely, and close the four-letter residue with two relators."""
    m = abs(n)
    span = abs(n + 1)
    sgn = -1 if n > 0 else 1
    x0 = model.delta.edge_letter(cyc[0], sgn)
    x1 = model.delta.edge_letter(cyc[1], sgn)
    repl = Word((x1.inverse(), x0.inverse()))
    first = span  # x2^{-n} block, m letters
    for i in range(m):
        editor.relator(first + 2 * i, Word((editor.word[first + 2 * i],)), repl)
    model.sort_block_pairs(editor, first, m, x0.inverse())
    second = span + 2 * m + span + m  # x2^{-n-1} block, span letters
    for i in range(span):
        editor.relator(second + 2 * i, Word((editor.word[second + 2 * i],)), repl)
    model.sort_block_pairs(editor, second, span, x0.inverse())
    editor.free_to(free_reduce(editor.word))
    residue = editor.word
    if not len(residue):
        return
    assert len(residue) == 4, f"unexpected residue {residue}"
    pair = Word((residue[0], residue[1]))
    for gen in model.pres.generators:
        for sign in (1, -1):
            cand = Letter(gen, sign)
            try:
                find_relator_move(model.pres, 0, pair, Word((cand,)))
            except ValueError:
                continue
            editor.relator(0, pair, Word((cand,)))
            editor.relator(0, editor.word, EMPTY)
            return
    raise NotNullError(f"residue {residue} did not collapse")


def _scheme_stable(model: BBModel, e: Edge, n: int) -> DerivationSequence:
    delta, tree = model.delta, model.tree
    m = abs(n)
    span1 = abs(n + 1)
    span2 = abs(n + 2)
    let = delta.edge_letter(e)
    we = edge_conjugation_word(delta, tree, e)
    w = concat(
        bb_phi(delta, tree, n + 1, Word((let,))),
        bb_phi(delta, tree, n, we).inverse(),
    )
    editor = WordEditor(model.pres, w)
    d_i, d_t = model.depth(e[0]), model.depth(e[1])

    # the translate of the conjugation word collapses, junction by junction,
    # to P(iota, n+1) e Q(iota, n+1); do it forward, then mirror-splice
    fwd = WordEditor(model.pres, bb_phi(delta, tree, n, we))
    path_edges = tree.path(delta.base, e[0])
    letters = list(path_edges) + [e] + [(b, a) for a, b in path_edges[::-1]]
    lengths = [
        (model.depth(x[0]) * m, span1, model.depth(x[1]) * m) for x in letters
    ]
    offsets = []
    total = 0
    for li in lengths:
        offsets.append(total)
        total += sum(li)
    for j in range(len(letters) - 2, -1, -1):
        if letters[j][1] != letters[j + 1][0]:
            continue  # the seam between the edge and the return path
        junction = offsets[j] + lengths[j][0] + lengths[j][1]
        model.collapse_mutual_paths(fwd, junction, model.depth(letters[j][1]), n)
    # fwd is now P(iota, n+1) e^{n+1} [Q(tau, n) P(iota, n)] Q(iota, n+1)
    model.rewrite_pair_to_edge_power(
        fwd, d_i * span1 + span1, e, n, inverted=False
    )
    fwd.free_to(
        concat(
            tree_word(delta, tree, n + 1, delta.base, e[0]),
            Word((let,)),
            tree_word(delta, tree, n + 1, e[0], delta.base),
        )
    )
    mirrored = mirror_sequence(model.pres, fwd.sequence())
    editor.apply_subsequence(d_i * span1 + span2 + d_t * span1, mirrored)

    # word: P(i,n+1) e^{n+2} Q(t,n+1) Q(i,n+1)^-1 e^-1 P(i,n+1)^-1
    pos_q = d_i * span1 + span2 + d_t * span1
    _convert_inverse_path(model, editor, pos_q, d_i * span1)
    model.rewrite_pair_to_edge_power(
        editor, d_i * span1 + span2, e, n + 1, inverted=False
    )
    editor.free_to(EMPTY)
    return editor.sequence()


def _convert_inverse_path(model: BBModel, editor: WordEditor, pos: int,
                          count: int) -> int:
    """Turn an inverted reverse-path word Q(v,k)^-1 into the forward path
    word P(v,k), one reverse-pair relator per letter."""
    for i in range(count):
        let = editor.word[pos + i]
        u, v = model.delta.letter_edge(let.gen)
        editor.relator(pos + i, Word((let,)), Word((Letter(f"{v}_{u}", -let.sign),)))
    return count

def rarea_sample(delta: FlagComplex, tree: SpanningTree, index_bound: int,
                 budget: Optional[SearchBudget] = None, exact: bool = False
                 ) -> List[Dict]:
    """Per-index area data for every indexed relator up to the bound: the
    replayed area of the emitted scheme (an upper bound), the scheme's
    stated bound, and optionally an exact search verdict."""
    model = BBModel(delta, tree)
    pres = model.pres
    rows: List[Dict] = []
    for ir in bb_indexed_families(delta, tree, index_bound):
        n = ir.parameter[1]
        if ir.family == "stable":
            kind = "stable"
            args = delta.letter_edge(ir.parameter[0])
        else:
            rel = pres.relators[ir.parameter[0]]
            if len(rel) == 2:
                kind = "e-ebar"
                args = delta.letter_edge(rel[0].gen)
            elif rel[0].sign > 0:
                kind = "efg"
                args = tuple(delta.letter_edge(l.gen) for l in rel.letters)
            else:
                kind = "inverse-efg"
                args = tuple(delta.letter_edge(l.gen) for l in rel.letters)
        seq = bb_relator_scheme(delta, tree, kind, args, n, model)
        acct = replay_sequence(pres, seq)
        assert acct.endpoints[0] == ir.word, (kind, n, ir.word)
        assert acct.endpoints[1] == EMPTY
        row = {
            "index": ir.index,
            "family": ir.family,
            "kind": kind,
            "word": str(ir.word),
            "upper": acct.area,
            "bound": scheme_bound(model, kind, n),
        }
        if exact:
            res = area_exact(pres, ir.word, budget or SearchBudget())
            row["exact"] = res.area if res.kind == "area" else None
            row["exhausted"] = res.kind == "budget-exhausted"
        rows.append(row)
    return rows
