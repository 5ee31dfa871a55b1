"""Presentations and null-homotopy witnesses.

Three witness forms are implemented: derivation sequences (chains of free
moves and relator applications), filling expressions (products of conjugated
relators), and schemes (rows of words with claimed transition areas).  The
converters between them preserve area and never increase heights.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .words import (
    EMPTY,
    ChargeMap,
    Letter,
    Word,
    charge,
    concat,
    cyclic_conjugate,
    free_reduce,
    freely_equal,
    heights,
)

__all__ = [
    "GroupPresentation",
    "FreeContract",
    "FreeExpand",
    "ApplyRelator",
    "RewriteMove",
    "DerivationSequence",
    "FillingExpression",
    "Scheme",
    "SchemeRow",
    "Accounting",
    "MalformedMoveError",
    "NotFreelyEqualError",
    "NotNullError",
    "BoundaryMismatchError",
    "InvalidSequenceError",
    "replay_sequence",
    "sequence_to_expression",
    "free_equality_sequence",
    "invert_sequence",
    "mirror_sequence",
    "reverse_sequence",
    "splice_sequence",
    "contraction_moves",
    "find_relator_move",
    "verify_scheme",
]


class MalformedMoveError(ValueError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"move {index}: {reason}")
        self.index = index
        self.reason = reason


class NotFreelyEqualError(ValueError):
    pass


class NotNullError(ValueError):
    pass


class InvalidSequenceError(ValueError):
    pass


class BoundaryMismatchError(ValueError):
    def __init__(self, discrepancy: Word):
        super().__init__(f"boundary mismatch, reduced discrepancy {discrepancy}")
        self.discrepancy = discrepancy


class GroupPresentation:
    """A finite presentation: alphabet plus an ordered relator list.

    Relators may be non-reduced words.  ``max_relator_length`` is the constant
    usually written L.
    """

    __slots__ = ("generators", "relators", "_move_cache")

    def __init__(self, generators: Iterable[str], relators: Iterable[Word] = ()):
        self.generators = tuple(dict.fromkeys(generators))
        gens = frozenset(self.generators)
        self.relators = tuple(relators)
        for rel in self.relators:
            extra = rel.generators() - gens
            if extra:
                raise ValueError(f"relator {rel} uses unknown generators {sorted(extra)}")
        self._move_cache = {}

    @property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators), default=0)

    def check_word(self, w: Word) -> None:
        extra = w.generators() - frozenset(self.generators)
        if extra:
            raise ValueError(f"word uses unknown generators {sorted(extra)}")

    def __repr__(self) -> str:
        return (
            f"GroupPresentation({len(self.generators)} generators, "
            f"{len(self.relators)} relators)"
        )


@dataclass(frozen=True)
class FreeContract:
    pos: int


@dataclass(frozen=True)
class FreeExpand:
    pos: int
    letter: Letter


@dataclass(frozen=True)
class ApplyRelator:
    """Replace r by s at pos, where r s^-1 is the rotation-rot cyclic
    conjugate of relator^sign and r consists of its first split letters."""

    pos: int
    rel: int
    sign: int
    rot: int
    split: int


RewriteMove = Union[FreeContract, FreeExpand, ApplyRelator]


def _relator_halves(pres: GroupPresentation, move: ApplyRelator) -> Tuple[Word, Word]:
    """The (replaced, replacement) pair encoded by an ApplyRelator move."""
    base = pres.relators[move.rel]
    if move.sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    signed = base if move.sign > 0 else base.inverse()
    if not 0 <= move.rot < max(1, len(signed)):
        raise ValueError("rotation out of range")
    conj = cyclic_conjugate(signed, move.rot)
    if not 0 <= move.split <= len(conj):
        raise ValueError("split out of range")
    replaced = conj[: move.split]
    replacement = conj[move.split :].inverse()
    return replaced, replacement


def apply_move(pres: GroupPresentation, w: Word, move: RewriteMove) -> Word:
    if isinstance(move, FreeContract):
        if not 0 <= move.pos <= len(w) - 2:
            raise ValueError("position out of range")
        a, b = w[move.pos], w[move.pos + 1]
        if a != b.inverse():
            raise ValueError(f"letters {a}, {b} do not cancel")
        return Word(w.letters[: move.pos] + w.letters[move.pos + 2 :])
    if isinstance(move, FreeExpand):
        if not 0 <= move.pos <= len(w):
            raise ValueError("position out of range")
        pair = (move.letter, move.letter.inverse())
        return Word(w.letters[: move.pos] + pair + w.letters[move.pos :])
    if isinstance(move, ApplyRelator):
        replaced, replacement = _relator_halves(pres, move)
        if not 0 <= move.pos <= len(w) - len(replaced):
            raise ValueError("position out of range")
        got = w[move.pos : move.pos + len(replaced)]
        if got != replaced:
            raise ValueError(f"subword {got} does not match relator part {replaced}")
        return Word(
            w.letters[: move.pos]
            + replacement.letters
            + w.letters[move.pos + len(replaced) :]
        )
    raise TypeError(f"unknown move {move!r}")


@dataclass(frozen=True)
class DerivationSequence:
    """A start word plus a replayable list of rewrite moves."""

    start: Word
    moves: Tuple[RewriteMove, ...]

    def __init__(self, start: Word, moves: Iterable[RewriteMove] = ()):
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "moves", tuple(moves))

    @property
    def area(self) -> int:
        return sum(1 for m in self.moves if isinstance(m, ApplyRelator))

    def then(self, other: "DerivationSequence") -> "DerivationSequence":
        return DerivationSequence(self.start, self.moves + other.moves)


@dataclass(frozen=True)
class FillingExpression:
    """Product of conjugated relators: terms (conjugator, relator index, sign)."""

    terms: Tuple[Tuple[Word, int, int], ...]

    def __init__(self, terms: Iterable[Tuple[Word, int, int]] = ()):
        object.__setattr__(self, "terms", tuple(terms))

    @property
    def area(self) -> int:
        return len(self.terms)

    @property
    def radius(self) -> int:
        return max((len(x) for x, _, _ in self.terms), default=0)

    def boundary(self, pres: GroupPresentation) -> Word:
        parts = []
        for conj, rel, sign in self.terms:
            base = pres.relators[rel]
            signed = base if sign > 0 else base.inverse()
            parts.append(concat(conj, signed, conj.inverse()))
        return concat(*parts) if parts else EMPTY

    def __mul__(self, other: "FillingExpression") -> "FillingExpression":
        return FillingExpression(self.terms + other.terms)

    def expr_heights(self, theta: ChargeMap) -> Tuple[int, ...]:
        best = [0] * theta.rank
        for conj, _, _ in self.terms:
            for i, h in enumerate(heights(theta, conj)):
                if h > best[i]:
                    best[i] = h
        return tuple(best)


@dataclass(frozen=True)
class SchemeRow:
    word: Word
    area: int
    heights: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class Scheme:
    """Claimed-area skeleton of a null-homotopy; the final empty row is
    implicit, so a scheme with rows (w_1..w_m) claims each transition
    w_i -> w_{i+1} (w_{m+1} empty) fillable within the row's area."""

    rows: Tuple[SchemeRow, ...]

    def __init__(self, rows: Iterable[SchemeRow]):
        object.__setattr__(self, "rows", tuple(rows))

    @property
    def total_area(self) -> int:
        return sum(r.area for r in self.rows)


@dataclass(frozen=True)
class Accounting:
    area: int
    radius: Optional[int]
    heights: Optional[Tuple[int, ...]]
    endpoints: Tuple[Word, Word]


def _relators_have_zero_charge(pres: GroupPresentation, theta: ChargeMap) -> bool:
    zero = (0,) * theta.rank
    try:
        return all(charge(theta, r) == zero for r in pres.relators)
    except Exception:
        return False


def replay_sequence(
    pres: GroupPresentation,
    seq: DerivationSequence,
    theta: Optional[ChargeMap] = None,
) -> Accounting:
    """Replay a sequence, returning its area, final word and heights.

    Heights are the per-direction maxima over every intermediate word.  They
    are reported only when every relator of the presentation has zero charge;
    otherwise the height field is None rather than a guess.
    """
    track = theta is not None and _relators_have_zero_charge(pres, theta)
    best = [0] * theta.rank if track else None
    w = seq.start
    if track:
        for i, h in enumerate(heights(theta, w)):
            best[i] = max(best[i], h)
    area = 0
    for idx, move in enumerate(seq.moves):
        try:
            w = apply_move(pres, w, move)
        except (ValueError, IndexError) as exc:
            raise MalformedMoveError(idx, str(exc)) from exc
        if isinstance(move, ApplyRelator):
            area += 1
        if track:
            for i, h in enumerate(heights(theta, w)):
                if h > best[i]:
                    best[i] = h
    return Accounting(
        area=area,
        radius=None,
        heights=tuple(best) if track else None,
        endpoints=(seq.start, w),
    )


def replay_final(pres: GroupPresentation, seq: DerivationSequence) -> Word:
    w = seq.start
    for idx, move in enumerate(seq.moves):
        try:
            w = apply_move(pres, w, move)
        except (ValueError, IndexError) as exc:
            raise MalformedMoveError(idx, str(exc)) from exc
    return w


def validate_expression(
    pres: GroupPresentation,
    expr: FillingExpression,
    w: Word,
    theta: Optional[ChargeMap] = None,
) -> Accounting:
    """Check that the expression's boundary is freely equal to w."""
    boundary = expr.boundary(pres)
    discrepancy = free_reduce(concat(boundary, w.inverse()))
    if len(discrepancy):
        raise BoundaryMismatchError(discrepancy)
    return Accounting(
        area=expr.area,
        radius=expr.radius,
        heights=expr.expr_heights(theta) if theta is not None else None,
        endpoints=(boundary, w),
    )


def contraction_moves(w: Word) -> List[FreeContract]:
    """Free contractions reducing w to its freely reduced form, in replay order."""
    moves: List[FreeContract] = []
    stack: List[Letter] = []
    for let in w:
        if stack and stack[-1] == let.inverse():
            moves.append(FreeContract(len(stack) - 1))
            stack.pop()
        else:
            stack.append(let)
    return moves


def expansion_moves_for(w: Word) -> List[FreeExpand]:
    """Free expansions building w back up from its freely reduced form."""
    contracts = contraction_moves(w)
    expands = []
    # undo contractions in reverse: a contract at p removing (x, x^-1)
    # reverses to an expand at p inserting that pair
    stack: List[Letter] = []
    removed: List[Tuple[int, Letter]] = []
    for let in w:
        if stack and stack[-1] == let.inverse():
            removed.append((len(stack) - 1, stack[-1]))
            stack.pop()
        else:
            stack.append(let)
    for pos, letter in reversed(removed):
        expands.append(FreeExpand(pos, letter))
    return expands


def free_equality_sequence(w1: Word, w2: Word) -> DerivationSequence:
    """Area-0 sequence from w1 to w2 through the common reduced form."""
    if free_reduce(w1) != free_reduce(w2):
        raise NotFreelyEqualError(f"{w1} and {w2} are not freely equal")
    moves: List[RewriteMove] = []
    moves.extend(contraction_moves(w1))
    moves.extend(expansion_moves_for(w2))
    return DerivationSequence(w1, moves)


def find_relator_move(
    pres: GroupPresentation, pos: int, replaced: Word, replacement: Word
) -> ApplyRelator:
    """Resolve (rel, sign, rot, split) so the move rewrites replaced->replacement.

    Requires replaced * replacement^-1 to be a cyclic conjugate of a relator
    or relator inverse; raises ValueError otherwise.
    """
    key = (replaced.letters, replacement.letters)
    cached = pres._move_cache.get(key)
    if cached is not None:
        rel, sign, rot = cached
        return ApplyRelator(pos, rel, sign, rot, len(replaced))
    target = concat(replaced, replacement.inverse())
    n = len(target)
    for rel, base in enumerate(pres.relators):
        if len(base) != n:
            continue
        for sign in (1, -1):
            signed = base if sign > 0 else base.inverse()
            for rot in range(max(1, n)):
                if cyclic_conjugate(signed, rot) == target:
                    pres._move_cache[key] = (rel, sign, rot)
                    return ApplyRelator(pos, rel, sign, rot, len(replaced))
    raise ValueError(
        f"no relator realizes {replaced} -> {replacement} "
        f"(needs cyclic conjugate {target})"
    )


def sequence_to_expression(
    pres: GroupPresentation, seq: DerivationSequence
) -> FillingExpression:
    """Convert a sequence converting tau to tau' into an expression for
    tau (tau')^-1 of equal area and no greater heights.

    Each relator application at a word u r v contributes one term whose
    conjugator is a prefix of the current or the next word; when both prefix
    decompositions exist the first (current-word) one is chosen.
    """
    terms: List[Tuple[Word, int, int]] = []
    w = seq.start
    for idx, move in enumerate(seq.moves):
        if isinstance(move, ApplyRelator):
            base = pres.relators[move.rel]
            signed = base if move.sign > 0 else base.inverse()
            p, q = signed[: move.rot], signed[move.rot :]
            alpha = w[: move.pos]
            if len(q) <= move.split:
                conj = concat(alpha, q)
            else:
                conj = concat(alpha, p.inverse())
            terms.append((conj, move.rel, move.sign))
        try:
            w = apply_move(pres, w, move)
        except (ValueError, IndexError) as exc:
            raise InvalidSequenceError(f"move {idx}: {exc}") from exc
    return FillingExpression(terms)


def _word_chain(pres: GroupPresentation, seq: DerivationSequence) -> List[Word]:
    chain = [seq.start]
    w = seq.start
    for move in seq.moves:
        w = apply_move(pres, w, move)
        chain.append(w)
    return chain


def mirror_sequence(
    pres: GroupPresentation, seq: DerivationSequence
) -> DerivationSequence:
    """Word-wise inversion: converts the inverse of the start word to the
    inverse of the final word, move by move, with the same area.  Height
    equality is only meaningful when every chain word has zero charge."""
    chain = _word_chain(pres, seq)
    moves: List[RewriteMove] = []
    for before, move in zip(chain, seq.moves):
        n = len(before)
        if isinstance(move, FreeContract):
            moves.append(FreeContract(n - move.pos - 2))
        elif isinstance(move, FreeExpand):
            moves.append(FreeExpand(n - move.pos, move.letter))
        else:
            replaced, replacement = _relator_halves(pres, move)
            m = len(pres.relators[move.rel])
            moves.append(
                ApplyRelator(
                    pos=n - move.pos - len(replaced),
                    rel=move.rel,
                    sign=-move.sign,
                    rot=(len(replacement) + m - move.rot) % max(1, m),
                    split=len(replaced),
                )
            )
    return DerivationSequence(seq.start.inverse(), moves)


def invert_sequence(
    pres: GroupPresentation, seq: DerivationSequence
) -> DerivationSequence:
    """Mirror of a null sequence: fills the inverse word with the same area
    and the same heights (valid since every chain word has zero charge)."""
    final = replay_final(pres, seq)
    if len(free_reduce(final)):
        raise NotNullError("sequence does not end at the empty word")
    return mirror_sequence(pres, seq)


def reverse_sequence(
    pres: GroupPresentation, seq: DerivationSequence
) -> DerivationSequence:
    """Time reversal: a sequence converting tau' back to tau, same area."""
    chain = _word_chain(pres, seq)
    moves: List[RewriteMove] = []
    for before, move in reversed(list(zip(chain, seq.moves))):
        if isinstance(move, FreeContract):
            moves.append(FreeExpand(move.pos, before[move.pos]))
        elif isinstance(move, FreeExpand):
            moves.append(FreeContract(move.pos))
        else:
            replaced, replacement = _relator_halves(pres, move)
            m = len(pres.relators[move.rel])
            moves.append(
                ApplyRelator(
                    pos=move.pos,
                    rel=move.rel,
                    sign=-move.sign,
                    rot=(m - move.rot) % max(1, m),
                    split=len(replacement),
                )
            )
    return DerivationSequence(chain[-1], moves)


def splice_sequence(seq: DerivationSequence, offset: int) -> Tuple[RewriteMove, ...]:
    """Re-base a sequence's moves to act at a positional offset inside a
    larger word (the surrounding context is untouched by every move)."""
    out: List[RewriteMove] = []
    for move in seq.moves:
        if isinstance(move, FreeContract):
            out.append(FreeContract(move.pos + offset))
        elif isinstance(move, FreeExpand):
            out.append(FreeExpand(move.pos + offset, move.letter))
        else:
            out.append(
                ApplyRelator(move.pos + offset, move.rel, move.sign, move.rot, move.split)
            )
    return tuple(out)


@dataclass(frozen=True)
class RowReport:
    index: int
    verdict: str  # "pass" | "not-null-homotopic" | "area-exceeds-claim" | "budget-exhausted"
    measured_area: Optional[int] = None


@dataclass(frozen=True)
class SchemeReport:
    rows: Tuple[RowReport, ...]
    total_area: Optional[int]

    @property
    def passed(self) -> bool:
        return all(r.verdict == "pass" for r in self.rows)


def verify_scheme(
    pres: GroupPresentation,
    scheme: Scheme,
    sequences: Optional[Sequence[DerivationSequence]] = None,
    budget=None,
) -> SchemeReport:
    """Check each row's transition claim, by replaying supplied sequences or
    by exact area search under a budget (exactly one strategy must be given).
    """
    if (sequences is None) == (budget is None):
        raise ValueError("choose exactly one strategy: sequences or budget")
    reports: List[RowReport] = []
    rows = scheme.rows
    for i, row in enumerate(rows):
        target = rows[i + 1].word if i + 1 < len(rows) else EMPTY
        if sequences is not None:
            seq = sequences[i]
            acct = replay_sequence(pres, seq)
            ok = (
                freely_equal(seq.start, row.word)
                and freely_equal(acct.endpoints[1], target)
            )
            if not ok:
                reports.append(RowReport(i, "not-null-homotopic", None))
            elif acct.area > row.area:
                reports.append(RowReport(i, "area-exceeds-claim", acct.area))
            else:
                reports.append(RowReport(i, "pass", acct.area))
        else:
            from .oracle import area_exact  # local import to avoid a cycle

            transition = concat(row.word, target.inverse())
            result = area_exact(pres, transition, budget)
            if result.kind == "area":
                if result.area <= row.area:
                    reports.append(RowReport(i, "pass", result.area))
                else:
                    reports.append(RowReport(i, "area-exceeds-claim", result.area))
            elif result.kind == "not-null-homotopic":
                reports.append(RowReport(i, "not-null-homotopic", None))
            else:
                reports.append(RowReport(i, "budget-exhausted", None))
    passed = all(r.verdict == "pass" for r in reports)
    return SchemeReport(tuple(reports), scheme.total_area if passed else None)
