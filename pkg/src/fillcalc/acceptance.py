"""The acceptance suite: one callable per criterion, each returning a verdict
with measured details.  Every tolerance is pinned here; the test module and
the command line both run exactly these checks."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from . import bestvina_brady as bb
from .constructors import (
    k32_amalgam,
    k32_presentations,
    k32_witness,
    k32_witness_filling,
)
from .oracle import (
    SearchBudget,
    area_exact,
    cayley_distance,
    dp_equal,
    find_filling,
    low_noise_search,
)
from .oracle import DirectProductSpec
from .pulldown import (
    check_phi_properties,
    compose_bounds,
    conjugation_scheme,
    flatten_expression,
    flatten_word,
    letter_conjugation_sequence,
    parse_bound,
    relator_filling,
    relator_filling_bounds,
    standard_context,
)
from .rewriting import (
    FillingExpression,
    GroupPresentation,
    Scheme,
    SchemeRow,
    replay_sequence,
    validate_expression,
    verify_scheme,
)
from .words import (
    EMPTY,
    ChargeMap,
    Letter,
    Word,
    charge,
    commutator,
    concat,
    conjugate,
    free_reduce,
    heights,
    word,
    wpow,
)

__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_all"]


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str


Z2 = GroupPresentation(("x", "y"), (word("x y x' y'"),))
SCHEME_WORD = word("x x y x' y x y x' x' y' y' y'")


def _random_word(rng, gens, max_len) -> Word:
    n = rng.randrange(max_len + 1)
    return Word(tuple(Letter(rng.choice(gens), rng.choice((1, -1))) for _ in range(n)))


def _zero_charge_word(rng, ctx, max_len) -> Word:
    w = _random_word(rng, ctx.spec.all_generators(), max_len)
    fix = []
    for k, c in enumerate(charge(ctx.theta, w), start=1):
        fix.extend(wpow(Word((ctx.e(k),)), -c).letters)
    return concat(w, Word(fix))


def check_square_area_law(trials: int = 0, seed: int = 0) -> CriterionResult:
    """Exact areas of the nested square commutators over the rank-two free
    abelian presentation."""
    values = []
    for l in (1, 2, 3):
        w = commutator(wpow(word("x"), l), wpow(word("y"), l))
        res = area_exact(Z2, w, SearchBudget(max_word_length=len(w) + 4))
        if res.kind != "area" or res.area != l * l:
            return CriterionResult(
                "z2-area-law", False, f"l={l}: got {res.kind} {res.area}"
            )
        acct = replay_sequence(Z2, res.witness)
        if acct.area != l * l or acct.endpoints[1] != EMPTY:
            return CriterionResult("z2-area-law", False, f"witness broken at l={l}")
        values.append(res.area)
    return CriterionResult("z2-area-law", True, f"areas {values} = squares")


def check_scheme_fixture(trials: int = 0, seed: int = 0) -> CriterionResult:
    """The three-row scheme fixture verifies with row areas 2, 1, 2 and the
    word itself has exact area at most 5."""
    scheme = Scheme(
        (
            SchemeRow(SCHEME_WORD, 2),
            SchemeRow(word("x x y x' y x' y' y'"), 1),
            SchemeRow(word("x x y x' x' y'"), 2),
        )
    )
    report = verify_scheme(Z2, scheme, budget=SearchBudget(max_word_length=24))
    if not report.passed or report.total_area != 5:
        return CriterionResult("scheme-fixture", False, f"rows {report.rows}")
    res = area_exact(Z2, SCHEME_WORD, SearchBudget(max_word_length=20))
    if res.kind != "area" or res.area > 5:
        return CriterionResult("scheme-fixture", False, f"exact {res.kind} {res.area}")
    lowered = Scheme((SchemeRow(SCHEME_WORD, 1),) + scheme.rows[1:])
    bad = verify_scheme(Z2, lowered, budget=SearchBudget(max_word_length=24))
    if bad.passed or bad.rows[0].verdict != "area-exceeds-claim":
        return CriterionResult("scheme-fixture", False, "lowered claim not caught")
    return CriterionResult(
        "scheme-fixture", True, f"total 5, exact area {res.area}, lowered claim caught"
    )


def check_pulldown_properties(trials: int = 1000, seed: int = 7) -> CriterionResult:
    """All six pulling-down properties on randomized words over a product of
    three rank-two free groups, in one and two directions."""
    rng = random.Random(seed)
    contexts = [standard_context(3, 2, 1), standard_context(3, 2, 2)]
    for trial in range(trials):
        ctx = contexts[trial % 2]
        k = 1 + trial % ctx.rank
        w = _random_word(rng, ctx.spec.all_generators(), 10)
        w2 = _random_word(rng, ctx.spec.all_generators(), 6)
        h = rng.randint(-3, 3)
        results = check_phi_properties(ctx, k, w, w2, h)
        if not all(results.values()):
            bad = [name for name, ok in results.items() if not ok]
            return CriterionResult(
                "pulldown-properties",
                False,
                f"trial {trial}: {bad} failed on w={w} h={h} k={k}",
            )
    return CriterionResult(
        "pulldown-properties", True, f"{trials} trials, all six clauses held"
    )


def check_flatten_words(trials: int = 500, seed: int = 11) -> CriterionResult:
    """Randomized zero-charge words flatten to words representing the same
    element with unit heights and controlled length."""
    rng = random.Random(seed)
    contexts = [standard_context(3, 2, 1), standard_context(4, 2, 2)]
    for trial in range(trials):
        ctx = contexts[trial % 2]
        w = _zero_charge_word(rng, ctx, 10)
        out = flatten_word(ctx, w)
        if not dp_equal(ctx.spec, out, w):
            return CriterionResult("flatten-words", False, f"value changed for {w}")
        if any(h > 1 for h in heights(ctx.theta, out)):
            return CriterionResult("flatten-words", False, f"heights exceed 1 for {w}")
        if len(w) and len(out) > 8 ** ctx.rank * len(w) ** (ctx.rank + 1):
            return CriterionResult("flatten-words", False, f"length bound broke for {w}")
    return CriterionResult("flatten-words", True, f"{trials} words flattened")


def check_case_emitters(trials: int = 0, seed: int = 0) -> CriterionResult:
    """Letter conversions, word conversions and the six relator-filling cases
    replay within their stated area and height bounds for all |h| <= 3."""
    cases_seen = set()
    rng = random.Random(41)
    for ctx in (standard_context(3, 2, 1), standard_context(3, 2, 2)):
        pres = ctx.presentation
        for h in range(-3, 4):
            for k in range(1, ctx.rank + 1):
                for gen in ctx.spec.all_generators():
                    for sign in (1, -1):
                        let = Letter(gen, sign)
                        seq = letter_conjugation_sequence(ctx, k, let, h)
                        acct = replay_sequence(pres, seq, ctx.theta)
                        if acct.area > 2 * (abs(h) + 1) ** 2:
                            return CriterionResult(
                                "case-emitters", False, f"letter {let} h={h}"
                            )
                        for i, height in enumerate(acct.heights, start=1):
                            if height > (abs(h) + 1 if i == k else 1):
                                return CriterionResult(
                                    "case-emitters", False, f"letter heights {let} h={h}"
                                )
                for s in pres.relators:
                    for target in (s, s.inverse()):
                        seq, case = relator_filling(ctx, k, target, h)
                        acct = replay_sequence(pres, seq, ctx.theta)
                        cases_seen.add(case)
                        area_bound, h_other, h_k = relator_filling_bounds(case, h)
                        if acct.endpoints[1] != EMPTY:
                            return CriterionResult(
                                "case-emitters", False, f"case {case} h={h} residue"
                            )
                        if acct.area > area_bound or acct.area > 7 * (abs(h) + 1) ** 2:
                            return CriterionResult(
                                "case-emitters",
                                False,
                                f"case {case} h={h}: area {acct.area} > {area_bound}",
                            )
                        for i, height in enumerate(acct.heights, start=1):
                            if height > (h_k if i == k else h_other):
                                return CriterionResult(
                                    "case-emitters",
                                    False,
                                    f"case {case} h={h}: heights {acct.heights}",
                                )
            # word-level conversion on a small random sample per h
            for _ in range(5):
                w = _random_word(rng, ctx.spec.all_generators(), 4)
                k = 1 + rng.randrange(ctx.rank)
                seq = conjugation_scheme(ctx, k, w, h)
                acct = replay_sequence(pres, seq, ctx.theta)
                hk = heights(ctx.theta, w)[k - 1]
                if acct.area > 2 * len(w) * (hk + abs(h) + 1) ** 2:
                    return CriterionResult(
                        "case-emitters", False, f"word conversion {w} h={h}"
                    )
    if cases_seen != {1, 2, 3, 4, 5, 6}:
        return CriterionResult("case-emitters", False, f"cases seen: {cases_seen}")
    return CriterionResult(
        "case-emitters", True, "all six cases, |h| <= 3, bounds hold"
    )


def check_pulldown_pipeline(trials: int = 200, seed: int = 13) -> CriterionResult:
    """Randomized expressions flatten with validated boundaries, bounded
    heights, and area within the iterated pulldown formula."""
    rng = random.Random(seed)
    contexts = [standard_context(3, 2, 1), standard_context(4, 2, 2)]
    for trial in range(trials):
        ctx = contexts[trial % 2]
        pres = ctx.presentation
        theta = ctx.theta
        r = ctx.rank
        terms = []
        for _ in range(rng.randrange(4)):
            conj = _random_word(rng, ctx.spec.all_generators(), 4)
            terms.append((conj, rng.randrange(len(pres.relators)), rng.choice((1, -1))))
        expr = FillingExpression(tuple(terms))
        w = free_reduce(expr.boundary(pres))
        out = flatten_expression(ctx, expr, w)
        try:
            acct = validate_expression(pres, out, w, theta)
        except Exception as exc:
            return CriterionResult(
                "pulldown-pipeline", False, f"trial {trial}: boundary {exc}"
            )
        for i in range(1, r + 1):
            if acct.heights[i - 1] > max(heights(theta, w)[i - 1] + 1, 2):
                return CriterionResult(
                    "pulldown-pipeline", False, f"trial {trial}: heights"
                )
        zeta = 1
        for j in range(1, r + 1):
            zeta *= max(
                heights(theta, w)[j - 1] + 1, expr.expr_heights(theta)[j - 1] + 1, 2
            ) ** 2
        bound = 7 ** (r - 1) * (7 * expr.area + 2 * r * len(w)) * zeta
        if out.area > bound:
            return CriterionResult(
                "pulldown-pipeline",
                False,
                f"trial {trial}: area {out.area} > {bound}",
            )
    return CriterionResult("pulldown-pipeline", True, f"{trials} expressions flattened")


def check_amalgam_lower_bound(trials: int = 0, seed: int = 0) -> CriterionResult:
    """Desk-scale witness areas against twice the subgroup distance, plus the
    distance bound for the squared commutator."""
    am = k32_amalgam()
    spec = DirectProductSpec(
        (("x1", "y1"), ("x2", "y2")),
        ChargeMap(1, {"x1": (1,), "y1": (0,), "x2": (1,), "y2": (0,)}),
    )
    gens = [am.middle_words[g] for g in ("p", "q", "s")]
    h1 = commutator(word("x1"), word("y1"))
    d1 = cayley_distance(gens, h1, spec.normal_form, SearchBudget(max_area=2))
    if d1.kind != "distance" or d1.distance != 1:
        return CriterionResult("amalgam-lower-bound", False, f"d_B(1,h1) = {d1}")

    details = []
    # n = 1: exact area
    w1 = k32_witness(1, 1)
    res1 = area_exact(
        am.presentation, w1, SearchBudget(max_word_length=len(w1), max_states=1_500_000)
    )
    if res1.kind != "area" or res1.area < 2 * 1 * d1.distance:
        return CriterionResult("amalgam-lower-bound", False, f"n=1: {res1.kind} {res1.area}")
    acct = replay_sequence(am.presentation, res1.witness)
    if acct.endpoints[1] != EMPTY:
        return CriterionResult("amalgam-lower-bound", False, "n=1 witness broken")
    details.append(f"n=1 exact area {res1.area} >= 2")

    # n = 2: exhaustive lower bound at the inequality threshold, plus an
    # explicit replayed filling as the upper evidence
    w2 = k32_witness(1, 2)
    need = 2 * 2 * d1.distance
    res2 = area_exact(
        am.presentation,
        w2,
        SearchBudget(max_word_length=len(w2), max_states=2_000_000, max_area=need),
    )
    if res2.kind == "area":
        ok = res2.area >= need
        details.append(f"n=2 exact area {res2.area}")
    else:
        ok = res2.lower_bound >= need
        details.append(f"n=2 area >= {res2.lower_bound} (exhaustive to depth)")
    if not ok:
        return CriterionResult("amalgam-lower-bound", False, details[-1])
    fill = k32_witness_filling(2)
    acct2 = replay_sequence(am.presentation, fill)
    if acct2.endpoints != (w2, EMPTY):
        return CriterionResult("amalgam-lower-bound", False, "n=2 filling broken")
    details.append(f"n=2 filled at area {acct2.area}")

    h2 = commutator(wpow(word("x1"), 2), wpow(word("y1"), 2))
    d2 = cayley_distance(gens, h2, spec.normal_form, SearchBudget(max_area=3))
    if d2.kind != "not-reached" or d2.radius_explored < 3:
        return CriterionResult("amalgam-lower-bound", False, f"d_B(1,h2) = {d2}")
    details.append("d_B(1,h2) >= 4")
    return CriterionResult("amalgam-lower-bound", True, "; ".join(details))


def check_tietze_evidence(trials: int = 0, seed: int = 0) -> CriterionResult:
    """Each presentation's extra relators fill over the other presentation."""
    pres = k32_presentations()
    q1, q2 = pres["q1"], pres["q2"]
    budget = SearchBudget(max_word_length=40, max_states=500_000)
    verdicts = []
    for target, extras in (
        (q1, [r for r in q2.relators if r not in q1.relators]),
        (q2, [r for r in q1.relators if r not in q2.relators]),
    ):
        for rel in extras:
            res = find_filling(target, rel, budget)
            if res.kind != "area":
                return CriterionResult(
                    "tietze-evidence", False, f"{rel} over {target}: {res.kind}"
                )
            acct = replay_sequence(target, res.witness)
            if acct.endpoints[1] != EMPTY:
                return CriterionResult("tietze-evidence", False, f"{rel}: bad witness")
            verdicts.append(acct.area)
    if len(verdicts) != 7:
        return CriterionResult("tietze-evidence", False, f"{len(verdicts)} verdicts")
    return CriterionResult(
        "tietze-evidence", True, f"7 fillings, areas {verdicts}"
    )


def check_bb_complexes(trials: int = 0, seed: int = 0) -> CriterionResult:
    """Families die in the ambient group, schemes stay within bounds, the
    sampled relational areas fit the quadratic envelope, and the composed
    bound prints the quartic."""
    from .oracle import raag_equal

    for delta, tree in (
        (bb.triangle_complex(), None),
        (bb.octahedron_complex(), None),
    ):
        tree = bb.spanning_tree(delta)
        model = bb.BBModel(delta, tree)
        for member in bb.bb_indexed_families(delta, tree, 2):
            if not raag_equal(delta, bb.edge_embedding(delta, member.word), EMPTY):
                return CriterionResult(
                    "bb-complexes", False, f"family member survives: {member.word}"
                )
        rows = bb.rarea_sample(delta, tree, 2)
        for row in rows:
            if row["upper"] > row["bound"]:
                return CriterionResult(
                    "bb-complexes",
                    False,
                    f"{row['kind']} index {row['index']}: {row['upper']} > {row['bound']}",
                )
        for idx in (0, 1, 2):
            envelope = max(
                bb.scheme_bound(model, kind, idx)
                for kind in ("e-ebar", "efg", "inverse-efg", "stable")
            )
            worst = max(r["upper"] for r in rows if r["index"] == idx)
            if worst > envelope:
                return CriterionResult(
                    "bb-complexes", False, f"index {idx}: {worst} > envelope {envelope}"
                )
    quartic = compose_bounds(
        "penetration", parse_bound("l^2"), parse_bound("l"), parse_bound("l^2")
    )
    if quartic.canonical() != "l^4":
        return CriterionResult("bb-complexes", False, f"pipeline prints {quartic}")
    return CriterionResult(
        "bb-complexes", True, "families die, schemes bounded, pipeline prints l^4"
    )


def check_bounded_noise(trials: int = 0, seed: int = 0) -> CriterionResult:
    """Every fixture word with a known exact area admits an expression within
    the drift bound."""
    ctx = standard_context(3, 2, 1)
    cross = commutator(word("e1_1"), word("e2_2"))
    conjugated = concat(cross, conjugate(cross, word("e1_2")))
    fixtures = [
        (Z2, word("x y x' y'")),
        (Z2, commutator(wpow(word("x"), 2), wpow(word("y"), 2))),
        (Z2, commutator(wpow(word("x"), 3), wpow(word("y"), 3))),
        (Z2, SCHEME_WORD),
        (ctx.presentation, cross),
        (ctx.presentation, conjugated),
    ]
    results = []
    for pres, w in fixtures:
        res = low_noise_search(
            pres, w, SearchBudget(max_word_length=len(w) + 4, max_states=1_000_000)
        )
        if res.kind != "found":
            return CriterionResult(
                "bounded-noise", False, f"{w}: noise {res.noise} > bound {res.bound}"
            )
        validate_expression(pres, res.expression, w)
        results.append((res.area, res.noise, res.bound))
    return CriterionResult(
        "bounded-noise", True, f"(area, noise, bound): {results}"
    )


def check_bound_calculators(trials: int = 0, seed: int = 0) -> CriterionResult:
    """Canonical forms of the three composed bounds."""
    l2, l1 = parse_bound("l^2"), parse_bound("l")
    got = {
        "area-radius": compose_bounds("area-radius", l2, l1, r=1).canonical(),
        "split": compose_bounds("split", l2, l2).canonical(),
        "penetration": compose_bounds("penetration", l2, l1, l2).canonical(),
    }
    want = {"area-radius": "l^4", "split": "l^5", "penetration": "l^4"}
    if got != want:
        return CriterionResult("bound-calculators", False, f"{got} != {want}")
    return CriterionResult("bound-calculators", True, str(got))


CRITERIA: Dict[str, Callable[..., CriterionResult]] = {
    "z2-area-law": check_square_area_law,
    "scheme-fixture": check_scheme_fixture,
    "pulldown-properties": check_pulldown_properties,
    "flatten-words": check_flatten_words,
    "case-emitters": check_case_emitters,
    "pulldown-pipeline": check_pulldown_pipeline,
    "amalgam-lower-bound": check_amalgam_lower_bound,
    "tietze-evidence": check_tietze_evidence,
    "bb-complexes": check_bb_complexes,
    "bounded-noise": check_bounded_noise,
    "bound-calculators": check_bound_calculators,
}


def run_criterion(name: str, **kwargs) -> CriterionResult:
    return CRITERIA[name](**kwargs)


def run_all(printer: Optional[Callable[[str], None]] = None) -> List[CriterionResult]:
    results = []
    for name, check in CRITERIA.items():
        result = check()
        results.append(result)
        if printer is not None:
            mark = "pass" if result.passed else "FAIL"
            printer(f"[{mark}] {name}: {result.detail}")
    return results
