"""Exact decision procedures at desk scale.

Area search works on freely reduced words, with free moves folded into
relator applications, so one search step is "insert a cyclic conjugate of a
relator or its inverse, then reduce".  Exactness is always relative to the
budget's word-length cap; exhaustion is a distinguishable outcome.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import intlinalg
from .rewriting import (
    ApplyRelator,
    DerivationSequence,
    FillingExpression,
    GroupPresentation,
    contraction_moves,
    replay_sequence,
    sequence_to_expression,
)
from .words import (
    EMPTY,
    ChargeMap,
    Letter,
    Word,
    charge,
    concat,
    cyclic_conjugate,
    free_reduce,
)

__all__ = [
    "SearchBudget",
    "AreaResult",
    "DistanceResult",
    "DirectProductSpec",
    "NotNullHomotopicError",
    "MembershipUndecidableError",
    "AlphabetMismatchError",
    "area_exact",
    "find_filling",
    "dehn_sample",
    "dp_equal",
    "raag_equal",
    "raag_normal_form",
    "free_normal_form",
    "cayley_distance",
    "distortion_sample",
    "low_noise_search",
    "noise",
]


class NotNullHomotopicError(ValueError):
    pass


class MembershipUndecidableError(ValueError):
    pass


class AlphabetMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    """Caps for exhaustive searches; exhaustion is reported, never silent."""

    max_word_length: Optional[int] = None  # None: |w| + 2L + 4
    max_states: int = 2_000_000
    max_area: Optional[int] = None
    wall_clock_ms: Optional[int] = None

    def __post_init__(self):
        if self.max_word_length is not None and self.max_word_length <= 0:
            raise ValueError("max_word_length must be positive")
        if self.max_states <= 0:
            raise ValueError("max_states must be positive")
        if self.max_area is not None and self.max_area <= 0:
            raise ValueError("max_area must be positive")

    def length_cap(self, w: Word, pres: GroupPresentation) -> int:
        if self.max_word_length is not None:
            return self.max_word_length
        return len(w) + 2 * pres.max_relator_length + 4


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class AreaResult:
    kind: str  # "area" | "not-null-homotopic" | "budget-exhausted"
    area: Optional[int] = None
    witness: Optional[DerivationSequence] = None
    lower_bound: int = 0
    states: int = 0


@dataclass(frozen=True)
class DistanceResult:
    kind: str  # "distance" | "not-reached"
    distance: Optional[int] = None
    witness: Optional[Word] = None
    radius_explored: int = 0


class _Clock:
    def __init__(self, budget: SearchBudget):
        self.deadline = (
            time.monotonic() + budget.wall_clock_ms / 1000.0
            if budget.wall_clock_ms is not None
            else None
        )

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline


class _Coder:
    """Pack letters into single characters for fast search-state handling."""

    def __init__(self, pres: GroupPresentation):
        self.pres = pres
        self.letters: List[Letter] = []
        self.index: Dict[Letter, int] = {}
        for gen in pres.generators:
            for sign in (1, -1):
                let = Letter(gen, sign)
                self.index[let] = len(self.letters)
                self.letters.append(let)
        self.inv = {}
        for let, i in self.index.items():
            self.inv[chr(i)] = chr(self.index[let.inverse()])
        # insertions: every cyclic conjugate of every relator and inverse,
        # reduced for searching, plus the ApplyRelator parameters of the
        # corresponding split-0 move (which inserts the unreduced conjugate)
        self.insertions: List[Tuple[str, str, int, int, int]] = []
        seen = set()
        for rel, base in enumerate(pres.relators):
            n = len(base)
            if n == 0:
                continue
            for delta in (1, -1):
                signed = base if delta > 0 else base.inverse()
                for m in range(n):
                    full = self.encode(cyclic_conjugate(signed, m))
                    ins = self.reduce(full)
                    if not ins or ins in seen:
                        continue
                    seen.add(ins)
                    self.insertions.append((ins, full, rel, -delta, (n - m) % n))

    def encode(self, w: Word) -> str:
        return "".join(chr(self.index[let]) for let in w)

    def decode(self, s: str) -> Word:
        return Word(tuple(self.letters[ord(c)] for c in s))

    def reduce(self, s: str) -> str:
        inv = self.inv
        out: List[str] = []
        for c in s:
            if out and out[-1] == inv[c]:
                out.pop()
            else:
                out.append(c)
        return "".join(out)

    def insert_reduce(self, s: str, p: int, ins: str) -> str:
        """reduce(s[:p] + ins + s[p:]) for reduced s and ins, by cancelling
        only at the junctions (free reduction is confluent)."""
        inv = self.inv
        i, j = p, 0
        while i > 0 and j < len(ins) and s[i - 1] == inv[ins[j]]:
            i -= 1
            j += 1
        k, j2 = p, len(ins)
        while k < len(s) and j2 > j and s[k] == inv[ins[j2 - 1]]:
            k += 1
            j2 -= 1
        if j2 > j:
            return s[:i] + ins[j:j2] + s[k:]
        a, b = i, k
        while a > 0 and b < len(s) and s[a - 1] == inv[s[b]]:
            a -= 1
            b += 1
        return s[:a] + s[b:]

    def successors(self, s: str, cap: int) -> Iterable[str]:
        insert_reduce = self.insert_reduce
        for ins, _, _, _, _ in self.insertions:
            for p in range(len(s) + 1):
                t = insert_reduce(s, p, ins)
                if len(t) <= cap:
                    yield t

    def edge_moves(self, src: Word, dst: Word) -> List:
        """Explicit moves realizing one search edge src -> dst (reduced words)."""
        s, d = self.encode(src), self.encode(dst)
        for ins, full, rel, sign, rot in self.insertions:
            for p in range(len(s) + 1):
                if self.insert_reduce(s, p, ins) == d:
                    mid = s[:p] + full + s[p:]
                    if self.reduce(mid) != d:
                        continue
                    moves = [ApplyRelator(p, rel, sign, rot, 0)]
                    moves.extend(contraction_moves(self.decode(mid)))
                    return moves
        raise ValueError("states are not adjacent")


def _abelian_basis(pres: GroupPresentation) -> List[List[int]]:
    gens = list(pres.generators)
    pos = {g: i for i, g in enumerate(gens)}
    rows = []
    for rel in pres.relators:
        vec = [0] * len(gens)
        for let in rel:
            vec[pos[let.gen]] += let.sign
        rows.append(vec)
    return intlinalg.hermite_rows(rows)


def _abelian_vector(pres: GroupPresentation, w: Word) -> List[int]:
    pos = {g: i for i, g in enumerate(pres.generators)}
    vec = [0] * len(pres.generators)
    for let in w:
        vec[pos[let.gen]] += let.sign
    return vec


def area_exact(
    pres: GroupPresentation, w: Word, budget: SearchBudget = DEFAULT_BUDGET
) -> AreaResult:
    """Minimal relator-application count of any null sequence for w whose
    freely reduced intermediate words stay within the budget's length cap.

    Bidirectional breadth-first search between w and the empty word; the
    underlying move relation is symmetric, so the meet point yields a witness
    sequence, which is replay-validated before being returned.
    """
    pres.check_word(w)
    coder = _Coder(pres)
    clock = _Clock(budget)
    cap = budget.length_cap(w, pres)
    start = coder.reduce(coder.encode(w))
    if start == "":
        return AreaResult("area", 0, DerivationSequence(w, contraction_moves(w)), 0, 1)
    if len(start) > cap:
        return AreaResult("budget-exhausted", lower_bound=1, states=0)
    # quick necessary condition: the abelianized word must lie in the
    # relator lattice
    if not intlinalg.in_lattice(_abelian_basis(pres), _abelian_vector(pres, w)):
        return AreaResult("not-null-homotopic", states=0)

    dist = ({start: 0}, {"": 0})
    parent: Tuple[Dict[str, str], Dict[str, str]] = ({}, {})
    frontier = ([start], [""])
    depth = [0, 0]
    best: Optional[Tuple[int, str]] = None

    def finish(meet: str) -> AreaResult:
        fwd = []
        s = meet
        while s != start:
            fwd.append(s)
            s = parent[0][s]
        path = [start] + fwd[::-1]
        s = meet
        while s != "":
            s = parent[1][s]
            path.append(s)
        moves = list(contraction_moves(w))
        for a, b in zip(path, path[1:]):
            moves.extend(coder.edge_moves(coder.decode(a), coder.decode(b)))
        seq = DerivationSequence(w, moves)
        acct = replay_sequence(pres, seq)
        assert acct.endpoints[1] == EMPTY and acct.area == best[0]
        return AreaResult("area", best[0], seq, best[0], len(dist[0]) + len(dist[1]))

    while True:
        if best is not None and best[0] <= depth[0] + depth[1] + 1:
            return finish(best[1])
        if not frontier[0] or not frontier[1]:
            if best is not None:
                return finish(best[1])
            return AreaResult(
                "not-null-homotopic",
                lower_bound=depth[0] + depth[1] + 1,
                states=len(dist[0]) + len(dist[1]),
            )
        exhausted = (
            len(dist[0]) + len(dist[1]) > budget.max_states
            or (budget.max_area is not None and depth[0] + depth[1] + 1 > budget.max_area)
            or clock.expired()
        )
        if exhausted:
            return AreaResult(
                "budget-exhausted",
                lower_bound=depth[0] + depth[1] + 1,
                states=len(dist[0]) + len(dist[1]),
            )
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        mine, other = dist[side], dist[1 - side]
        level: List[str] = []
        d = depth[side] + 1
        for s in frontier[side]:
            for t in coder.successors(s, cap):
                if t in mine:
                    continue
                mine[t] = d
                parent[side][t] = s
                level.append(t)
                if t in other:
                    total = d + other[t]
                    if best is None or total < best[0]:
                        best = (total, t)
        frontier[side][:] = level
        depth[side] = d


def find_filling(
    pres: GroupPresentation, w: Word, budget: SearchBudget = DEFAULT_BUDGET
) -> AreaResult:
    """Greedy (length-first) search for some filling of w, not necessarily of
    minimal area; useful when only null-homotopy needs certifying."""
    import heapq

    pres.check_word(w)
    coder = _Coder(pres)
    clock = _Clock(budget)
    cap = budget.length_cap(w, pres)
    start = coder.reduce(coder.encode(w))
    if start == "":
        return AreaResult("area", 0, DerivationSequence(w, contraction_moves(w)), 0, 1)
    if not intlinalg.in_lattice(_abelian_basis(pres), _abelian_vector(pres, w)):
        return AreaResult("not-null-homotopic", states=0)
    dist = {start: 0}
    parent: Dict[str, str] = {}
    heap = [(len(start), 0, start)]
    while heap:
        if len(dist) > budget.max_states or clock.expired():
            return AreaResult("budget-exhausted", lower_bound=1, states=len(dist))
        _, d, s = heapq.heappop(heap)
        if d > dist.get(s, d):
            continue
        for t in coder.successors(s, cap):
            if t in dist:
                continue
            dist[t] = d + 1
            parent[t] = s
            if t == "":
                path = [t]
                while path[-1] != start:
                    path.append(parent[path[-1]])
                path.reverse()
                moves = list(contraction_moves(w))
                for a, b in zip(path, path[1:]):
                    moves.extend(coder.edge_moves(coder.decode(a), coder.decode(b)))
                seq = DerivationSequence(w, moves)
                acct = replay_sequence(pres, seq)
                assert acct.endpoints[1] == EMPTY
                return AreaResult("area", acct.area, seq, 0, len(dist))
            heapq.heappush(heap, (len(t), d + 1, t))
    return AreaResult("not-null-homotopic", states=len(dist))


@dataclass(frozen=True)
class DehnSample:
    kind: str  # "value" | "budget-exhausted"
    value: Optional[int] = None
    witness: Optional[Word] = None
    words_checked: int = 0


def _cyclic_key(s: str, inv: Mapping[str, str]) -> str:
    if not s:
        return s
    variants = [s[i:] + s[:i] for i in range(len(s))]
    t = "".join(inv[c] for c in reversed(s))
    variants.extend(t[i:] + t[:i] for i in range(len(t)))
    return min(variants)


def dehn_sample(
    pres: GroupPresentation, length: int, budget: SearchBudget = DEFAULT_BUDGET
) -> DehnSample:
    """Max area over null-homotopic words of length <= the given bound.

    Enumerates cyclically reduced words (area is invariant under cyclic
    conjugation, inversion and free reduction, so one representative per
    class suffices), filters by the abelianized-relator lattice, and decides
    each survivor with area_exact.
    """
    coder = _Coder(pres)
    basis = _abelian_basis(pres)
    gens = list(pres.generators)
    pos = {g: i for i, g in enumerate(gens)}
    letters = list(range(len(coder.letters)))
    inv = coder.inv
    best = 0
    best_witness: Word = EMPTY
    checked = 0
    seen = set()
    clock = _Clock(budget)

    def explore(prefix: List[int]) -> Iterable[str]:
        if prefix:
            yield "".join(map(chr, prefix))
        if len(prefix) == length:
            return
        for i in letters:
            if prefix and chr(i) == inv[chr(prefix[-1])]:
                continue
            yield from explore(prefix + [i])

    for s in explore([]):
        if clock.expired():
            return DehnSample("budget-exhausted", words_checked=checked)
        if s and inv[s[0]] == s[-1]:
            continue  # not cyclically reduced
        vec = [0] * len(gens)
        for c in s:
            let = coder.letters[ord(c)]
            vec[pos[let.gen]] += let.sign
        if not intlinalg.in_lattice(basis, vec):
            continue
        key = _cyclic_key(s, inv)
        if key in seen:
            continue
        seen.add(key)
        w = coder.decode(s)
        result = area_exact(pres, w, budget)
        checked += 1
        if result.kind == "budget-exhausted":
            return DehnSample("budget-exhausted", words_checked=checked)
        if result.kind == "area" and result.area > best:
            best, best_witness = result.area, w
    return DehnSample("value", best, best_witness, checked)


class DirectProductSpec:
    """A direct product of free groups: per-factor alphabets, the combined
    commutator relator set, and an optional charge map."""

    def __init__(
        self,
        factors: Sequence[Sequence[str]],
        theta: Optional[ChargeMap] = None,
    ):
        self.factors = tuple(tuple(f) for f in factors)
        self.factor_of: Dict[str, int] = {}
        for i, alphabet in enumerate(self.factors):
            for gen in alphabet:
                if gen in self.factor_of:
                    raise ValueError(f"generator {gen!r} occurs in two factors")
                self.factor_of[gen] = i
        self.theta = theta

    @property
    def n_factors(self) -> int:
        return len(self.factors)

    def all_generators(self) -> Tuple[str, ...]:
        return tuple(g for f in self.factors for g in f)

    def commutator_relators(self) -> List[Word]:
        rels = []
        for i in range(len(self.factors)):
            for j in range(i + 1, len(self.factors)):
                for x in self.factors[i]:
                    for y in self.factors[j]:
                        rels.append(
                            Word(
                                (
                                    Letter(x, 1),
                                    Letter(y, 1),
                                    Letter(x, -1),
                                    Letter(y, -1),
                                )
                            )
                        )
        return rels

    def presentation(self) -> GroupPresentation:
        return GroupPresentation(self.all_generators(), self.commutator_relators())

    def check_word(self, w: Word) -> None:
        extra = w.generators() - set(self.factor_of)
        if extra:
            raise AlphabetMismatchError(f"unknown generators {sorted(extra)}")

    def projection(self, w: Word, i: int) -> Word:
        return Word(tuple(let for let in w if self.factor_of[let.gen] == i))

    def normal_form(self, w: Word) -> Tuple[str, ...]:
        self.check_word(w)
        return tuple(
            str(free_reduce(self.projection(w, i))) for i in range(self.n_factors)
        )


def dp_equal(spec: DirectProductSpec, w1: Word, w2: Word) -> bool:
    """Exact word problem for a direct product of free groups: every
    per-factor projection of w1 w2^-1 must reduce to the empty word."""
    spec.check_word(w1)
    spec.check_word(w2)
    test = concat(w1, w2.inverse())
    return all(
        len(free_reduce(spec.projection(test, i))) == 0 for i in range(spec.n_factors)
    )


def _adjacency(delta) -> Mapping[str, frozenset]:
    if hasattr(delta, "adjacency"):
        return delta.adjacency
    return delta


def _pile_reduce(adj: Mapping[str, frozenset], w: Word) -> List[Letter]:
    out: List[Letter] = []
    for let in w:
        if let.gen not in adj:
            raise AlphabetMismatchError(f"unknown vertex {let.gen!r}")
        j = len(out) - 1
        cancel = None
        while j >= 0:
            prev = out[j]
            if prev.gen == let.gen:
                if prev.sign == -let.sign:
                    cancel = j
                break
            if let.gen not in adj[prev.gen]:
                break
            j -= 1
        if cancel is not None:
            out.pop(cancel)
        else:
            out.append(let)
    return out


def raag_normal_form(delta, w: Word) -> Word:
    """Left-greedy normal form in a right-angled Artin group: cancel through
    commuting letters, then emit the lexicographically least available letter
    first.  Canonical per group element."""
    adj = _adjacency(delta)
    rest = _pile_reduce(adj, w)
    out: List[Letter] = []
    while rest:
        # a letter is available iff every letter before it commutes with it
        available: List[Tuple[Tuple[str, int], int]] = []
        blocked = set()
        for i, let in enumerate(rest):
            if let.gen not in blocked:
                available.append(((let.gen, -let.sign), i))
            blocked.add(let.gen)
            blocked.update(g for g in adj if g not in adj[let.gen])
        _, idx = min(available)
        out.append(rest.pop(idx))
    return Word(out)


def raag_equal(delta, w1: Word, w2: Word) -> bool:
    """Exact word problem for the right-angled Artin group of a flag complex:
    w1 w2^-1 piles down to nothing."""
    adj = _adjacency(delta)
    return not _pile_reduce(adj, concat(w1, w2.inverse()))


def free_normal_form(w: Word) -> str:
    return str(free_reduce(w))


def cayley_distance(
    generators: Sequence[Word],
    target: Word,
    normal_form: Callable[[Word], object],
    budget: SearchBudget = DEFAULT_BUDGET,
) -> DistanceResult:
    """Word-metric distance from the identity to the target, by breadth-first
    search over products of the given generators, deduplicated through the
    supplied normal-form procedure."""
    clock = _Clock(budget)
    target_key = normal_form(target)
    id_key = normal_form(EMPTY)
    if target_key == id_key:
        return DistanceResult("distance", 0, EMPTY, 0)
    steps = []
    for g in generators:
        steps.append(g)
        steps.append(g.inverse())
    seen = {id_key}
    frontier: List[Tuple[object, Word]] = [(id_key, EMPTY)]
    radius = 0
    while frontier:
        if len(seen) > budget.max_states or clock.expired():
            return DistanceResult("not-reached", radius_explored=radius)
        radius += 1
        if budget.max_area is not None and radius > budget.max_area:
            return DistanceResult("not-reached", radius_explored=radius - 1)
        level: List[Tuple[object, Word]] = []
        for _, wrep in frontier:
            for g in steps:
                nxt = free_reduce(concat(wrep, g))
                key = normal_form(nxt)
                if key in seen:
                    continue
                seen.add(key)
                if key == target_key:
                    return DistanceResult("distance", radius, nxt, radius)
                level.append((key, nxt))
        frontier = level
    return DistanceResult("not-reached", radius_explored=radius)


@dataclass(frozen=True)
class DistortionSample:
    kind: str  # "value" | "budget-exhausted"
    value: Optional[int] = None
    table: Tuple[Tuple[str, int], ...] = ()


def distortion_sample(
    sub_generators: Sequence[Word],
    ambient_generators: Sequence[Word],
    length: int,
    normal_form: Callable[[Word], object],
    budget: SearchBudget = DEFAULT_BUDGET,
    theta: Optional[ChargeMap] = None,
    membership: Optional[Callable[[Word], bool]] = None,
) -> DistortionSample:
    """Distortion at radius `length`: the largest subgroup-metric length among
    subgroup members of the ambient ball.  Membership is decided by zero
    charge when a charge map defines the subgroup, else by the supplied
    procedure."""
    if theta is not None:
        zero = (0,) * theta.rank

        def member(w: Word) -> bool:
            return charge(theta, w) == zero

    elif membership is not None:
        member = membership
    else:
        raise MembershipUndecidableError(
            "supply a ChargeMap or a membership procedure"
        )
    clock = _Clock(budget)
    steps: List[Word] = []
    for g in ambient_generators:
        steps.append(g)
        steps.append(g.inverse())
    ball: Dict[object, Word] = {normal_form(EMPTY): EMPTY}
    frontier = [EMPTY]
    for _ in range(length):
        level = []
        for wrep in frontier:
            if len(ball) > budget.max_states or clock.expired():
                return DistortionSample("budget-exhausted")
            for g in steps:
                nxt = free_reduce(concat(wrep, g))
                key = normal_form(nxt)
                if key not in ball:
                    ball[key] = nxt
                    level.append(nxt)
        frontier = level
    members = {key: w for key, w in ball.items() if member(w)}

    sub_steps: List[Word] = []
    for g in sub_generators:
        sub_steps.append(g)
        sub_steps.append(g.inverse())
    dist: Dict[object, int] = {normal_form(EMPTY): 0}
    sub_frontier = [EMPTY]
    remaining = set(members) - set(dist)
    radius = 0
    while remaining and sub_frontier:
        if len(dist) > budget.max_states or clock.expired():
            return DistortionSample("budget-exhausted")
        radius += 1
        level = []
        for wrep in sub_frontier:
            for g in sub_steps:
                nxt = free_reduce(concat(wrep, g))
                key = normal_form(nxt)
                if key not in dist:
                    dist[key] = radius
                    level.append(nxt)
                    remaining.discard(key)
        sub_frontier = level
    if remaining:
        return DistortionSample("budget-exhausted")
    table = tuple(sorted((str(w), dist[key]) for key, w in members.items()))
    value = max((d for _, d in table), default=0)
    return DistortionSample("value", value, table)


def noise(expr: FillingExpression) -> int:
    """||u_1|| + sum ||u_i^-1 u_{i+1}|| + ||u_N|| over the conjugators."""
    conjs = [c for c, _, _ in expr.terms]
    if not conjs:
        return 0
    total = len(free_reduce(conjs[0])) + len(free_reduce(conjs[-1]))
    for a, b in zip(conjs, conjs[1:]):
        total += len(free_reduce(concat(a.inverse(), b)))
    return total


@dataclass(frozen=True)
class LowNoiseResult:
    kind: str  # "found" | "not-found"
    expression: Optional[FillingExpression] = None
    noise: Optional[int] = None
    bound: Optional[int] = None
    area: Optional[int] = None


def low_noise_search(
    pres: GroupPresentation, w: Word, budget: SearchBudget = DEFAULT_BUDGET
) -> LowNoiseResult:
    """An expression for w of minimal area N whose conjugators drift by at
    most |w| + 2LN in total.

    The minimal-area witness sequence is converted to an expression, then the
    conjugators are locally rewritten (free reduction plus appending relator
    powers, which leaves each term's value unchanged) with the total drift
    minimized by dynamic programming over the power choices.
    """
    result = area_exact(pres, w, budget)
    if result.kind == "not-null-homotopic":
        raise NotNullHomotopicError(f"{w} is not null-homotopic within the cap")
    if result.kind == "budget-exhausted":
        return LowNoiseResult("not-found")
    n = result.area
    bound = len(w) + 2 * pres.max_relator_length * n
    expr = sequence_to_expression(pres, result.witness)
    terms = [(free_reduce(c), rel, sign) for c, rel, sign in expr.terms]
    if not terms:
        return LowNoiseResult("found", FillingExpression(()), 0, bound, 0)

    powers = (-2, -1, 0, 1, 2)
    variants: List[List[Word]] = []
    for conj, rel, sign in terms:
        base = pres.relators[rel] if sign > 0 else pres.relators[rel].inverse()
        row = []
        for m in powers:
            tail = Word(base.letters * m) if m >= 0 else Word(base.inverse().letters * -m)
            row.append(free_reduce(concat(conj, tail)))
        variants.append(row)

    # dynamic programme over the power choice per term
    k = len(powers)
    costs = [[len(u) for u in variants[0]]]
    back: List[List[int]] = []
    for i in range(1, len(variants)):
        row = []
        brow = []
        for b in range(k):
            best, arg = None, 0
            for a in range(k):
                c = costs[-1][a] + len(
                    free_reduce(concat(variants[i - 1][a].inverse(), variants[i][b]))
                )
                if best is None or c < best:
                    best, arg = c, a
            row.append(best)
            brow.append(arg)
        costs.append(row)
        back.append(brow)
    finals = [costs[-1][b] + len(variants[-1][b]) for b in range(k)]
    choice = [min(range(k), key=lambda b: finals[b])]
    for brow in reversed(back):
        choice.append(brow[choice[-1]])
    choice.reverse()

    new_terms = [
        (variants[i][choice[i]], terms[i][1], terms[i][2]) for i in range(len(terms))
    ]
    out = FillingExpression(new_terms)
    got = noise(out)
    if got <= bound:
        return LowNoiseResult("found", out, got, bound, n)
    return LowNoiseResult("not-found", out, got, bound, n)
