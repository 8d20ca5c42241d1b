"""
runners.py
----------
Wordlab — Combinatorics-on-Words Workbench — Probe runners
----------------------------------------------------------
One function per runner name used in probe_registry.yaml. Every runner
takes the merged parameter dict and a ProbeContext (budget, threads,
seed) and returns

    {"verdict": str, "certificate": dict, "statistics": dict}

Verdicts: found / exhausted / budget for bounded searches, pass / fail for
exhaustive desk-scale checks, evidence for finite-prefix or bounded
explorations that prove nothing either way, infeasible when no object
exists, and "out of scope" for registered problems with no desk-scale
experiment. Runners may raise WordLabError; probes/run_probe.py turns
that into a structured error.

Key functions:
    - ProbeContext: budget, threads, seed handed to every runner
    - RUNNERS: runner name → function

Project: Wordlab — Combinatorics-on-Words Workbench
"""

from __future__ import annotations

import logging
import math
import random
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Dict, Optional

from pydantic import BaseModel, ConfigDict

from abelian import (
    AbelianPowerPredicate,
    art_dart_probe,
    avoid_long_powers_search,
    count_abelian_squares,
    letter_values,
    makela_exploration,
    makela_scan,
    strong_power_census,
    zimin_abelian_test,
)
from automata import DFA
from complexity import (
    balance_function,
    density_band,
    factor_complexity,
    min_letter_density,
    palindromic_complexity,
    rauzy_graph,
    recurrence_function,
)
from errors import DomainError, InfeasibleError
from factorizations import (
    FFactorizationSpec,
    PcpInstance,
    bounded_pcp,
    check_completeness,
    check_synchronization,
    check_uniqueness,
    combinatorial_rank,
    disjoint_x_factorizations,
    factorization_length_range,
    instance_properties,
    is_independent_system,
    morphism_quasiperiodicity_probe,
    parse_system,
    pumped_system,
    solve_word_equation,
    subsystem_equivalent,
)
from known_facts import DEFAULT_PALINDROME_BLOCK, DEFAULT_SEED, DISTINCT_SQUARES_BOUNDS, RUNS_BOUNDS
from patterns import (
    Pattern,
    as_predicate,
    circular_avoiding_lengths,
    count_self_shuffles,
    d0l_avoidance_check,
    growth_census,
    maximal_pfree_words,
    palindrome_concat_avoider,
    self_shuffle_squarefree_search,
    shuffle,
    shuffle_square_root,
    subtree_explore,
    subtree_isomorphic,
)
from repetitions import (
    PowerFreePredicate,
    completion_distance,
    count_distinct_squares_fast,
    distinct_square_census,
    duplication_closure,
    frt_probe,
    least_period,
    max_exponent,
    max_runs_census,
    rt_probe,
    square_density,
    sturmian_period_set,
)
from schemas import SearchBudget, SearchOutcome
from search import FreenessPredicate, longest_free_word
from verification import verify_pcp_solution, verify_search_outcome, verify_shuffle
from word_core import (
    Alphabet,
    CircularWord,
    PrefixOracle,
    Word,
    as_text,
    fixed_point_prefix,
    parse_morphism,
    parse_rational,
    parse_word,
)

logger = logging.getLogger(__name__)


class ProbeContext(BaseModel):
    """What every runner gets besides its parameters."""

    model_config = ConfigDict(frozen=True)

    budget: SearchBudget = SearchBudget()
    threads: int = 1
    seed: int = DEFAULT_SEED


Runner = Callable[[Dict[str, Any], ProbeContext], Dict[str, Any]]


# ── Shared helpers ───────────────────────────────────────────────────────────

def _k(params: Dict, default: int = 2) -> int:
    k = int(params.get("alphabet", default))
    if k < 1:
        raise DomainError("alphabet size must be at least 1")
    return k


def _word(text: Any, k: Optional[int] = None) -> Word:
    return parse_word(str(text), Alphabet.default(k) if k else None)


def _predicate(params: Dict, k: int) -> FreenessPredicate:
    """pattern, alpha (power-freeness) or kind (abelian family), in that order."""
    if params.get("pattern"):
        return as_predicate(Pattern.parse(str(params["pattern"])), k)
    if params.get("alpha") is not None:
        return PowerFreePredicate(params["alpha"], bool(params.get("strict", False)))
    kind = params.get("kind")
    if kind:
        values = params.get("values")
        if kind == "additive":
            if isinstance(values, dict):
                values = letter_values(Alphabet.digits(k), {str(g): int(v) for g, v in values.items()})
            elif values is None:
                values = letter_values(Alphabet.digits(k))
        return AbelianPowerPredicate(
            kind,
            int(params.get("n", 2)),
            int(params.get("min_period", 1)),
            params.get("kabelian_k"),
            values,
        )
    raise DomainError("parameters name no predicate: give pattern, alpha or kind")


def _from_outcome(outcome: SearchOutcome, **extra: Any) -> Dict[str, Any]:
    certificate = {"word": str(outcome.word) if outcome.word is not None else None,
                   "length": outcome.length}
    certificate.update(outcome.certificate)
    certificate.update(extra)
    return {"verdict": outcome.verdict, "certificate": certificate, "statistics": dict(outcome.statistics)}


def _oracle(params: Dict) -> PrefixOracle:
    if params.get("cf"):
        return PrefixOracle.sturmian([int(d) for d in params["cf"]])
    return PrefixOracle.classic(str(params.get("oracle", "fibonacci")))


def _start_letter(m, params: Dict) -> int:
    start = params.get("start")
    return m.domain.index(str(start)) if start is not None else 0


# ── Squares and runs ─────────────────────────────────────────────────────────

def squares_census(params: Dict, ctx: ProbeContext) -> Dict:
    """Exhaustive distinct-squares ≤ n check, plus optional seeded random words."""
    k = _k(params)
    n_max = int(params.get("max_length", 16))
    table = distinct_square_census(k, n_max)
    violations = {n: str(w) for n, (c, w) in table.items() if c > n}
    worst = max(table, key=lambda n: (Fraction(table[n][0], n), -n)) if table else None

    samples = int(params.get("random_samples", 0))
    sample_length = int(params.get("random_length", 64))
    rng = random.Random(ctx.seed)
    alphabet = Alphabet.default(k)
    random_violation = None
    for _ in range(samples):
        w = Word.of(alphabet, [rng.randrange(k) for _ in range(sample_length)])
        if count_distinct_squares_fast(w) > sample_length:
            random_violation = str(w)
            break

    per_length = {n: c for n, (c, _) in table.items()}
    return {
        "verdict": "pass" if not violations and random_violation is None else "fail",
        "certificate": {
            "per_length": per_length,
            "max_ratio": Fraction(table[worst][0], worst) if worst else None,
            "max_ratio_word": str(table[worst][1]) if worst else None,
            "violations": violations,
            "random_violation": random_violation,
            "outer_bounds": {
                name: all(c <= bound * n for n, c in per_length.items())
                for name, bound in DISTINCT_SQUARES_BOUNDS.items()
            },
        },
        "statistics": {
            "words": sum(k ** n for n in range(1, n_max + 1)),
            "random_samples": samples,
            "random_length": sample_length,
        },
    }


def runs_census(params: Dict, ctx: ProbeContext) -> Dict:
    k = _k(params)
    n_max = int(params.get("max_length", 16))
    fast = str(params.get("counter", "reference")) == "fast"
    table = max_runs_census(k, n_max, fast=fast)
    per_length = {n: c for n, (c, _) in table.items()}
    violations = {n: str(w) for n, (c, w) in table.items() if c > n}
    return {
        "verdict": "pass" if not violations else "fail",
        "certificate": {
            "per_length": per_length,
            "witnesses": {n: str(w) for n, (_, w) in table.items()},
            "violations": violations,
            "outer_bounds": {
                name: all(c <= bound * n for n, c in per_length.items())
                for name, bound in RUNS_BOUNDS.items()
            },
        },
        "statistics": {"words": sum(k ** n for n in range(1, n_max + 1)), "counter": "fast" if fast else "reference"},
    }


def square_density_amplifier(params: Dict, ctx: ProbeContext) -> Dict:
    """
    Smallest ratio ρ(f(w)) / ρ(w) over every word w up to max_length whose
    square density is at least the threshold. An amplifier keeps it above 1.
    """
    f = parse_morphism(str(params.get("morphism", "a->ab;b->ba")))
    if f.domain != f.codomain:
        raise DomainError("the morphism must map an alphabet to itself")
    threshold = parse_rational(params.get("threshold", "1/2"))
    max_len = int(params.get("max_length", 10))
    worst: Optional[Dict] = None
    words = candidates = 0
    for n in range(1, max_len + 1):
        for letters in product(range(f.domain.size), repeat=n):
            words += 1
            w = Word.of(f.domain, letters)
            density = square_density(w)
            if density == 0 or density < threshold:
                continue
            image = f.apply(w)
            if len(image) == 0:
                continue
            candidates += 1
            image_density = square_density(image)
            ratio = image_density / density
            if worst is None or ratio < worst["ratio"]:
                worst = {"word": str(w), "image": str(image), "word_density": density,
                         "image_density": image_density, "ratio": ratio}
    return {
        "verdict": "evidence",
        "certificate": {
            "morphism": str(f),
            "threshold": threshold,
            "candidates": candidates,
            "weakest": worst,
            "amplifies": None if worst is None else worst["ratio"] > 1,
        },
        "statistics": {"words": words, "max_length": max_len},
    }


# ── Thresholds ───────────────────────────────────────────────────────────────

def repetition_threshold(params: Dict, ctx: ProbeContext) -> Dict:
    report = rt_probe(_k(params, 3), ctx.budget, params.get("alpha"), bool(params.get("strict", True)))
    outcome = report.pop("outcome")
    result = _from_outcome(outcome, **report)
    k = report["k"]
    result["certificate"]["target_frequency"] = Fraction(1, k + 1)
    return result


def finite_repetition_threshold(params: Dict, ctx: ProbeContext) -> Dict:
    report = frt_probe(_oracle(params), params.get("alpha", "7/3"), int(params.get("horizon", 4096)))
    return {"verdict": "evidence", "certificate": report, "statistics": {"horizon": report["horizon"]}}


# ── Pattern avoidance ────────────────────────────────────────────────────────

def avoidance_search(params: Dict, ctx: ProbeContext) -> Dict:
    k = _k(params)
    predicate = _predicate(params, k)
    symmetry = params.get("symmetry")
    outcome = longest_free_word(predicate, k, ctx.budget, symmetry=symmetry)
    check = verify_search_outcome(outcome, predicate)
    return _from_outcome(outcome, predicate=str(predicate), verified=check["valid"])


def morphic_avoidance(params: Dict, ctx: ProbeContext) -> Dict:
    """D0L prefix check, or HD0L when an outer morphism is given."""
    m = parse_morphism(str(params["morphism"]))
    outer = parse_morphism(str(params["outer"])) if params.get("outer") else None
    report = d0l_avoidance_check(
        m, _start_letter(m, params), Pattern.parse(str(params["pattern"])),
        int(params.get("horizon", 200)), outer,
    )
    return {"verdict": "evidence", "certificate": report,
            "statistics": {"checked_length": report["checked_length"]}}


def circular_lengths(params: Dict, ctx: ProbeContext) -> Dict:
    k = _k(params, 3)
    n_max = int(params.get("n_max", 20))
    lengths = circular_avoiding_lengths(Pattern.parse(str(params.get("pattern", "XX"))), k, n_max)
    missing = [n for n in range(1, n_max + 1) if n not in lengths]
    return {
        "verdict": "evidence",
        "certificate": {"lengths": lengths, "missing": missing},
        "statistics": {"n_max": n_max},
    }


def maximal_pfree(params: Dict, ctx: ProbeContext) -> Dict:
    report = maximal_pfree_words(
        Pattern.parse(str(params["pattern"])), _k(params),
        int(params.get("max_length", 10)), int(params.get("limit", 20)),
    )
    report["exists"] = any(report["per_length"].values())
    return {"verdict": "evidence", "certificate": report, "statistics": {"max_length": report["max_len"]}}


def palindrome_avoider(params: Dict, ctx: ProbeContext) -> Dict:
    k = _k(params)
    outcome = palindrome_concat_avoider(
        _predicate(params, k), k, ctx.budget, int(params.get("max_block", DEFAULT_PALINDROME_BLOCK))
    )
    return _from_outcome(outcome)


def growth(params: Dict, ctx: ProbeContext) -> Dict:
    k = _k(params)
    report = growth_census(_predicate(params, k), k, int(params.get("n_max", 12)),
                           threads=ctx.threads, max_nodes=params.get("max_nodes"))
    return {
        "verdict": "evidence" if report["complete"] else "budget",
        "certificate": report,
        "statistics": {"threads": ctx.threads},
    }


def subtree(params: Dict, ctx: ProbeContext) -> Dict:
    k = _k(params)
    root = _word(params.get("root", ""), k)
    report = subtree_explore(root, _predicate(params, k), int(params.get("depth", 10)), k)
    return {"verdict": "evidence", "certificate": report, "statistics": {"nodes": report["nodes"]}}


def subtree_iso(params: Dict, ctx: ProbeContext) -> Dict:
    k = _k(params)
    u, v = _word(params["u"], k), _word(params["v"], k)
    depth = int(params.get("depth", 8))
    same = subtree_isomorphic(u, v, _predicate(params, k), depth, k)
    return {
        "verdict": "evidence",
        "certificate": {"u": str(u), "v": str(v), "depth": depth, "isomorphic": same},
        "statistics": {},
    }


# ── Shuffles ─────────────────────────────────────────────────────────────────

def self_shuffle(params: Dict, ctx: ProbeContext) -> Dict:
    u = _word(params.get("u", "abc"))
    beta = self_shuffle_squarefree_search(u)
    certificate: Dict[str, Any] = {"u": str(u), "beta": str(beta) if beta else None}
    if beta is not None:
        w = shuffle(u, u, beta)
        certificate["word"] = str(w)
        certificate["verified"] = verify_shuffle(u, u, beta, w)["valid"]
    return {"verdict": "found" if beta else "exhausted", "certificate": certificate,
            "statistics": {"sequences": math.comb(2 * len(u), len(u))}}


def shuffle_count(params: Dict, ctx: ProbeContext) -> Dict:
    report = count_self_shuffles(_word(params.get("u", "abc")))
    return {"verdict": "evidence", "certificate": report, "statistics": {"witnesses": report["witnesses"]}}


def shuffle_root(params: Dict, ctx: ProbeContext) -> Dict:
    w = _word(params["w"])
    found = shuffle_square_root(w, bool(params.get("require_squarefree", True)))
    certificate: Dict[str, Any] = {"w": str(w), "u": None, "beta": None}
    if found is not None:
        u, beta = found
        certificate.update(u=str(u), beta=str(beta), verified=verify_shuffle(u, u, beta, w)["valid"])
    return {"verdict": "found" if found else "exhausted", "certificate": certificate, "statistics": {}}


# ── Duplication and completion ───────────────────────────────────────────────

def _operations(params: Dict, default: str) -> tuple:
    ops = params.get("operations", [default])
    return tuple([ops] if isinstance(ops, str) else ops)


def duplication_language(params: Dict, ctx: ProbeContext) -> Dict:
    seed = _word(params.get("seed", "ab"))
    by_length = duplication_closure(
        seed,
        int(params.get("steps", 6)),
        int(params.get("max_length", 14)),
        operations=_operations(params, "duplication"),
        both_ends=bool(params.get("both_ends", False)),
        allow_empty_x=bool(params.get("allow_empty_x", False)),
    )
    rows = {}
    for n, words in by_length.items():
        exps = [max_exponent(w) for w in words]
        rows[n] = {
            "words": len(words),
            "min_max_exponent": min(exps),
            "cube_free": sum(1 for e in exps if e < 3),
        }
    return {
        "verdict": "evidence",
        "certificate": {"seed": str(seed), "per_length": rows},
        "statistics": {"reachable": sum(len(ws) for ws in by_length.values())},
    }


def completion_steps(params: Dict, ctx: ProbeContext) -> Dict:
    alphabet = Alphabet.from_glyphs(sorted(set(str(params["u"])) | set(str(params["w"]))))
    u, w = parse_word(str(params["u"]), alphabet), parse_word(str(params["w"]), alphabet)
    outcome = completion_distance(
        u, w, ctx.budget,
        both_ends=bool(params.get("both_ends", True)),
        operations=_operations(params, "completion"),
        allow_empty_x=bool(params.get("allow_empty_x", False)),
    )
    return _from_outcome(outcome)


# ── Abelian ──────────────────────────────────────────────────────────────────

def zimin_abelian(params: Dict, ctx: ProbeContext) -> Dict:
    results = {}
    for text in params.get("patterns", []):
        p = Pattern.parse(str(text))
        results[str(p)] = {"variables": len(p.variables), "avoided_by_zimin": zimin_abelian_test(p)}
    return {"verdict": "evidence", "certificate": {"patterns": results},
            "statistics": {"patterns": len(results)}}


def art_dart(params: Dict, ctx: ProbeContext) -> Dict:
    report = art_dart_probe(ctx.budget, params.get("grid", []), params.get("n"), params.get("r"))
    report.pop("budget", None)
    verdict = "budget" if any(row["verdict"] == "budget" for row in report["rows"]) else "evidence"
    return {"verdict": verdict, "certificate": report, "statistics": {"rows": len(report["rows"])}}


def strong_census(params: Dict, ctx: ProbeContext) -> Dict:
    k_letters = _k(params)
    n = int(params.get("n", 2))
    kabelian_k = int(params.get("kabelian_k", 1))
    rows = {}
    longest_avoider = None
    for length in range(int(params.get("min_length", 0)), int(params.get("max_length", 8)) + 1):
        row = strong_power_census(k_letters, n, length, kabelian_k)
        rows[length] = {key: row[key] for key in ("words", "classes", "classes_with_power", "strong_powers", "avoiders")}
        if row["avoiders"]:
            longest_avoider = length
    return {
        "verdict": "evidence",
        "certificate": {"alphabet": k_letters, "n": n, "k": kabelian_k, "per_length": rows,
                        "longest_length_with_avoiders": longest_avoider},
        "statistics": {"lengths": len(rows)},
    }


def morphic_power(params: Dict, ctx: ProbeContext) -> Dict:
    """First prefix of a fixed point containing an abelian-family power, if any."""
    m = parse_morphism(str(params["morphism"]))
    horizon = int(params.get("horizon", 500))
    prefix = fixed_point_prefix(m, _start_letter(m, params), horizon)
    k = m.domain.size
    predicate = _predicate(params, k)
    letters = list(prefix.letters)
    violation = None
    for i in range(1, len(letters) + 1):
        if not predicate.extends(letters[:i]):
            violation = i
            break
    return {
        "verdict": "evidence",
        "certificate": {
            "morphism": str(m),
            "predicate": str(predicate),
            "horizon": horizon,
            "free": violation is None,
            "violation_prefix": violation,
            "evidence": "finite prefix only",
        },
        "statistics": {"checked_length": len(letters)},
    }


def avoid_long_powers(params: Dict, ctx: ProbeContext) -> Dict:
    values = params.get("values")
    outcome = avoid_long_powers_search(
        _k(params, 4),
        str(params.get("kind", "abelian")),
        int(params.get("n", 2)),
        int(params.get("min_period", 1)),
        ctx.budget,
        params.get("kabelian_k"),
        {str(g): int(v) for g, v in values.items()} if isinstance(values, dict) else None,
    )
    return _from_outcome(outcome)


def abelian_square_maxima(params: Dict, ctx: ProbeContext) -> Dict:
    """Most abelian squares (distinct factors or inequivalent classes) per alphabet and length."""
    mode = str(params.get("mode", "distinct"))
    max_len = int(params.get("max_length", 8))
    table: Dict[int, Dict[int, int]] = {}
    words = 0
    for k in params.get("alphabets", [2, 3]):
        k = int(k)
        alphabet = Alphabet.default(k)
        table[k] = {}
        for n in range(1, max_len + 1):
            top = 0
            for letters in product(range(k), repeat=n):
                words += 1
                top = max(top, count_abelian_squares(Word.of(alphabet, letters), mode))
            table[k][n] = top
    sizes = sorted(table)
    binary_dominates = all(
        table[sizes[0]][n] >= table[other][n] for other in sizes[1:] for n in range(1, max_len + 1)
    ) if sizes else True
    certificate: Dict[str, Any] = {"mode": mode, "per_alphabet": table, "smallest_alphabet_dominates": binary_dominates}
    if mode == "inequivalent":
        certificate["ratio_to_n_sqrt_n"] = {
            k: {n: round(v / n ** 1.5, 4) for n, v in row.items()} for k, row in table.items()
        }
    return {"verdict": "evidence", "certificate": certificate, "statistics": {"words": words}}


def makela(params: Dict, ctx: ProbeContext) -> Dict:
    report = makela_exploration(str(params.get("outer", "0->0;1->1;3->1;4->0")),
                                int(params.get("horizon", 2000)), int(params.get("min_period", 1)))
    return {"verdict": "evidence", "certificate": report, "statistics": {"image_length": report["image_length"]}}


def makela_candidates(params: Dict, ctx: ProbeContext) -> Dict:
    report = makela_scan(int(params.get("max_image_len", 2)), int(params.get("horizon", 300)),
                         int(params.get("min_period", 6)), params.get("limit"))
    return {"verdict": "evidence", "certificate": report, "statistics": {"candidates": report["candidates"]}}


# ── Complexity ───────────────────────────────────────────────────────────────

def complexity_profile(params: Dict, ctx: ProbeContext) -> Dict:
    gen = _oracle(params)
    measure = str(params.get("measure", "factor"))
    n_max = int(params.get("n_max", 30))
    horizon = int(params.get("horizon", 10_000))
    if measure == "factor":
        profile = factor_complexity(gen, n_max, horizon)
    elif measure == "palindrome":
        profile = palindromic_complexity(gen, n_max, horizon)
    elif measure == "recurrence":
        profile = recurrence_function(gen, n_max, horizon)
    elif measure == "balance":
        profile = balance_function(gen, n_max, horizon)
    else:
        raise DomainError(f"unknown complexity measure {measure!r}")
    return {
        "verdict": "evidence",
        "certificate": {"measure": profile.measure, "tag": profile.tag, "values": profile.values,
                        "valid_up_to": profile.valid_up_to, "extras": profile.extras},
        "statistics": {"horizon": horizon},
    }


def rauzy(params: Dict, ctx: ProbeContext) -> Dict:
    gen = _oracle(params)
    order = int(params.get("order", 3))
    horizon = int(params.get("horizon", 5000))
    graph = rauzy_graph(gen, order, horizon)
    pal = palindromic_complexity(gen, order + 1, horizon)
    return {
        "verdict": "evidence",
        "certificate": {
            "tag": gen.tag,
            "order": order,
            "vertices": graph.vertices,
            "edges": [list(e) for e in graph.edges],
            "palindromic_residual": pal.extras["residual"],
        },
        "statistics": {"vertices": len(graph.vertices), "edges": len(graph)},
    }


def min_density(params: Dict, ctx: ProbeContext) -> Dict:
    k = _k(params)
    length = int(params.get("length", 20))
    predicate = _predicate(params, k)
    try:
        report = min_letter_density(predicate, length, ctx.budget, k, int(params.get("minority", 1)))
    except InfeasibleError as e:
        return {"verdict": "infeasible", "certificate": {"length": length, "reason": str(e)}, "statistics": {}}
    statistics = report.pop("statistics")
    verdict = report.pop("verdict")
    alpha = params.get("alpha")
    if alpha is not None and report["count"] is not None and length >= 1 and Fraction(str(alpha)).denominator == 1:
        n = int(Fraction(str(alpha)))
        if n >= 2:
            report["band"] = density_band(n, report["count"], length)
    return {"verdict": "pass" if verdict == "exact" else verdict, "certificate": report, "statistics": statistics}


# ── Factorizations ───────────────────────────────────────────────────────────

def _f_spec(params: Dict) -> FFactorizationSpec:
    sigma = [str(g) for g in params.get("sigma", ["a", "b"])]
    comps = params["components"]
    components = tuple(DFA.from_words([list(str(w)) for w in words], sigma) for words in comps)
    index = [str(i) for i in range(1, len(components) + 1)]
    if params.get("control_cycle"):
        control = DFA.cycle(list(str(params["control_cycle"])), index)
    elif params.get("control_words"):
        control = DFA.from_words([list(str(w)) for w in params["control_words"]], index)
    else:
        control = DFA.universal(index)
    return FFactorizationSpec(sigma=Alphabet.from_glyphs(sigma), control=control, components=components)


def f_properties(params: Dict, ctx: ProbeContext) -> Dict:
    spec = _f_spec(params)
    bound = int(params.get("bound", 8))
    certificate: Dict[str, Any] = {
        "completeness": check_completeness(spec, "exact"),
        "uniqueness": check_uniqueness(spec, bound),
        "synchronization": check_synchronization(spec, bound, params.get("window")),
    }
    samples = {}
    for text in params.get("samples", []):
        span = factorization_length_range(parse_word(str(text), spec.sigma), spec)
        samples[str(text)] = list(span) if span else None
    certificate["length_ranges"] = samples
    return {"verdict": "evidence", "certificate": certificate, "statistics": {"bound": bound}}


def sturmian_periods(params: Dict, ctx: ProbeContext) -> Dict:
    cf = [int(d) for d in params.get("cf", [1])]
    max_len = int(params.get("max_factor_length", 150))
    horizon = int(params.get("horizon", 4000))
    gen = PrefixOracle.sturmian(cf)
    text = as_text(gen.letters(horizon))
    allowed = sturmian_period_set(cf, max_len)
    bad = None
    factors = 0
    for n in range(1, max_len + 1):
        for f in sorted({text[i:i + n] for i in range(horizon - n + 1)}):
            factors += 1
            p = least_period(Word.of(gen.alphabet, tuple(ord(ch) for ch in f)))
            if p not in allowed:
                bad = {"factor": gen.alphabet.render([ord(ch) for ch in f]), "least_period": p}
                break
        if bad:
            break
    return {
        "verdict": "pass" if bad is None else "fail",
        "certificate": {"cf": cf, "period_set": allowed.values, "counterexample": bad},
        "statistics": {"factors": factors, "horizon": horizon},
    }


def quasiperiodicity(params: Dict, ctx: ProbeContext) -> Dict:
    f = parse_morphism(str(params.get("morphism", "a->aba;b->ba")))
    report = morphism_quasiperiodicity_probe(f, max_len=int(params.get("max_len", 6)),
                                             horizon=int(params.get("horizon", 0)))
    return {"verdict": "evidence", "certificate": report, "statistics": {"sample_size": report["sample_size"]}}


def disjoint_factorizations(params: Dict, ctx: ProbeContext) -> Dict:
    X = [str(x) for x in params["X"]]
    w = parse_word(str(params["word"]))
    target = CircularWord(underlying=w) if params.get("circular") else w
    report = disjoint_x_factorizations(target, X, int(params.get("max_factorizations", 2000)))
    rank = combinatorial_rank(X)
    report["rank"] = rank
    if rank["rank"] is not None:
        report["rank_bound"] = len(X) - report["maximum"] + 1
        report["rank_within_bound"] = rank["rank"] <= report["rank_bound"]
    verdict = "budget" if "budget" in (report["verdict"], rank["verdict"]) else "evidence"
    report.pop("verdict")
    return {"verdict": verdict, "certificate": report, "statistics": {"factorizations": report["factorizations"]}}


def equations(params: Dict, ctx: ProbeContext) -> Dict:
    system = parse_system(str(params["system"]))
    max_len = int(params.get("max_len", 3))
    alphabet = params.get("letters")
    solved = solve_word_equation(system, max_len, alphabet)
    independence = is_independent_system(system, max_len, alphabet)
    return {
        "verdict": "budget" if solved["verdict"] == "budget" else "evidence",
        "certificate": {
            "system": solved["system"],
            "solutions": solved["count"],
            "non_periodic": solved["non_periodic"],
            "balanced": [eq.is_balanced() for eq in system],
            "independent": independence["independent"],
            "redundant": independence["redundant"],
        },
        "statistics": {"max_len": max_len},
    }


def pumped_subsystem(params: Dict, ctx: ProbeContext) -> Dict:
    count = int(params.get("count", 4))
    system = pumped_system(str(params.get("template", "x y^{i} z = z y^{i} x")), count)
    subset = [int(i) for i in params.get("subset", range(min(2, count)))]
    max_len = int(params.get("max_len", 2))
    same = subsystem_equivalent(system, subset, max_len, params.get("letters"))
    return {
        "verdict": "evidence",
        "certificate": {"system": [str(eq) for eq in system], "subset": subset, "equivalent": same},
        "statistics": {"max_len": max_len},
    }


def pcp(params: Dict, ctx: ProbeContext) -> Dict:
    inst = PcpInstance.parse(str(params["h"]), str(params["g"]))
    outcome = bounded_pcp(inst, int(params.get("max_len", 8)), ctx.budget)
    result = _from_outcome(outcome, marked=inst.marked)
    if outcome.word is not None:
        result["certificate"]["verified"] = verify_pcp_solution(inst, outcome.word)["valid"]
    return result


def pcp_properties(params: Dict, ctx: ProbeContext) -> Dict:
    inst = PcpInstance.parse(str(params["h"]), str(params["g"]))
    report = instance_properties(inst, int(params.get("bound", 6)))
    return {"verdict": "evidence", "certificate": report, "statistics": {"bound": report["bound"]}}


def out_of_scope(params: Dict, ctx: ProbeContext) -> Dict:
    return {"verdict": "out of scope", "certificate": {}, "statistics": {}}


RUNNERS: Dict[str, Runner] = {
    "squares_census": squares_census,
    "runs_census": runs_census,
    "square_density_amplifier": square_density_amplifier,
    "repetition_threshold": repetition_threshold,
    "finite_repetition_threshold": finite_repetition_threshold,
    "avoidance_search": avoidance_search,
    "morphic_avoidance": morphic_avoidance,
    "circular_lengths": circular_lengths,
    "maximal_pfree": maximal_pfree,
    "palindrome_avoider": palindrome_avoider,
    "growth": growth,
    "subtree": subtree,
    "subtree_iso": subtree_iso,
    "self_shuffle": self_shuffle,
    "shuffle_count": shuffle_count,
    "shuffle_root": shuffle_root,
    "duplication_language": duplication_language,
    "completion_steps": completion_steps,
    "zimin_abelian": zimin_abelian,
    "art_dart": art_dart,
    "strong_census": strong_census,
    "morphic_power": morphic_power,
    "avoid_long_powers": avoid_long_powers,
    "abelian_square_maxima": abelian_square_maxima,
    "makela": makela,
    "makela_candidates": makela_candidates,
    "complexity_profile": complexity_profile,
    "rauzy": rauzy,
    "min_density": min_density,
    "f_properties": f_properties,
    "sturmian_periods": sturmian_periods,
    "quasiperiodicity": quasiperiodicity,
    "disjoint_factorizations": disjoint_factorizations,
    "equations": equations,
    "pumped_subsystem": pumped_subsystem,
    "pcp": pcp,
    "pcp_properties": pcp_properties,
    "out_of_scope": out_of_scope,
}
