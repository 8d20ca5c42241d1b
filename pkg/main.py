"""
main.py
-------
Wordlab — Combinatorics-on-Words Workbench — Command-line interface
-------------------------------------------------------------------
The `wordlab` click group. Each subcommand parses its inputs, calls one
library operation and prints the result as JSON (default), TSV or text.
Rationals print as "p/q".

Subcommands:
    generate    — prefix of a classic word or of a morphism's fixed point
    repeats     — period / max exponent / distinct squares / runs / square density
    avoid       — pattern or power freeness: check a word, circular lengths, longest search
    shuffle     — conducted shuffle, or a square-free shuffle square root
    abelian     — equivalence, powers, strong-power census, long-power avoidance;
                  `abelian makela` for the four-letter fixed point exploration
    complexity  — factor / palindrome / recurrence / balance profiles, Rauzy graphs
    factorize   — F-factorizations and their properties, quasiperiods, X-factorizations
    equations   — bounded word-equation solving and independence
    pcp         — bounded Post correspondence search and instance properties
    census      — per-length tables from a YAML config
    probe       — run a registered problem probe, or --list them

Exit codes: 0 completed, 2 a search stopped on its budget, 1 error.

Project: Wordlab — Combinatorics-on-Words Workbench
"""

import functools
import json
import logging
import os
from typing import Any, Dict, List, Optional, Tuple

import click
import yaml
from dotenv import load_dotenv

from abelian import (
    avoid_long_powers_search,
    is_additive_npower,
    is_kabelian_npower,
    is_strongly_kabelian_npower,
    kabelian_equiv,
    makela_exploration,
    parikh,
    strong_power_census,
)
from complexity import (
    balance_function,
    factor_complexity,
    palindromic_complexity,
    rauzy_graph,
    recurrence_function,
)
from errors import WordLabError
from factorizations import (
    FFactorizationSpec,
    PcpInstance,
    bounded_pcp,
    check_completeness,
    check_synchronization,
    check_uniqueness,
    combinatorial_rank,
    disjoint_x_factorizations,
    f_factorizations,
    instance_properties,
    is_code,
    is_independent_system,
    parse_system,
    quasiperiods,
    solve_word_equation,
)
from known_facts import CLASSIC_MORPHISMS, DEFAULT_SEED
from patterns import (
    Pattern,
    as_predicate,
    circular_avoiding_lengths,
    encounters,
    shuffle,
    shuffle_square_root,
)
from probes.census import census as run_census_file
from probes.run_probe import format_summary, list_probes, run_probe
from repetitions import (
    PowerFreePredicate,
    count_distinct_squares_fast,
    count_runs,
    count_runs_fast,
    distinct_squares,
    exponent,
    is_alpha_free,
    least_period,
    max_exponent,
    periods,
    square_density,
)
from schemas import ConductionSequence, SearchBudget, SearchOutcome, jsonable
from search import longest_free_word
from verification import verify_pcp_solution, verify_search_outcome, verify_shuffle
from word_core import (
    Alphabet,
    CircularWord,
    PrefixOracle,
    Word,
    classic_word,
    fixed_point_prefix,
    parse_morphism,
    parse_word,
)

load_dotenv()

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s [%(name)s] %(message)s"


# ── Output ─────────────────────────────────────────────────────────────────────

def _cell(value: Any) -> str:
    return value if isinstance(value, str) else json.dumps(value)


def render(payload: Dict[str, Any], fmt: str) -> str:
    """JSON document, key<TAB>value lines, or key: value lines."""
    data = jsonable(payload)
    if fmt == "json":
        return json.dumps(data, indent=2)
    sep = "\t" if fmt == "tsv" else ": "
    return "\n".join(f"{key}{sep}{_cell(value)}" for key, value in data.items())


def _emit(ctx: click.Context, payload: Dict[str, Any], exit_code: int = 0) -> None:
    click.echo(render(payload, ctx.obj["format"]))
    ctx.exit(exit_code)


def _outcome_payload(outcome: SearchOutcome, **extra: Any) -> Dict[str, Any]:
    payload = {"verdict": outcome.verdict, "word": outcome.word, "length": outcome.length}
    payload.update(outcome.certificate)
    payload.update(extra)
    payload["statistics"] = outcome.statistics
    return payload


def guarded(f):
    """Turn usage and library errors into a structured error payload and exit code 1."""

    @functools.wraps(f)
    def wrapper(ctx: click.Context, *args, **kwargs):
        try:
            return f(ctx, *args, **kwargs)
        except click.UsageError as e:
            _emit(ctx, {"success": False, "error": e.format_message()}, 1)
        except (WordLabError, ValueError, OSError) as e:
            logger.warning("%s failed: %s", ctx.command.name, e)
            _emit(ctx, {"success": False, "error": str(e)}, 1)

    return wrapper


def _budget(ctx: click.Context, max_length: Optional[int] = None) -> SearchBudget:
    return SearchBudget().with_overrides(
        max_length=max_length,
        max_nodes=ctx.obj["max_nodes"],
        max_seconds=ctx.obj["max_seconds"],
    )


def _shared_words(*texts: str) -> Tuple[Word, ...]:
    """Parse several words over the union of their glyphs."""
    alphabet = Alphabet.from_glyphs(sorted(set("".join(texts))) or ["a"])
    return tuple(parse_word(t, alphabet) for t in texts)


def _oracle(name: str) -> PrefixOracle:
    return PrefixOracle.classic(name)


# ── Group ──────────────────────────────────────────────────────────────────────

@click.group(name="wordlab")
@click.option("--format", "fmt", type=click.Choice(["json", "tsv", "text"]), default="json",
              show_default=True, help="Output format.")
@click.option("--threads", type=int, default=1, envvar="WORDLAB_THREADS", show_default=True,
              help="Worker threads for censuses.")
@click.option("--seed", type=int, default=DEFAULT_SEED, envvar="WORDLAB_SEED", show_default=True,
              help="Seed for randomized sampling.")
@click.option("--max-nodes", type=float, default=None, help="Search node limit (1e8 accepted).")
@click.option("--max-seconds", type=float, default=None, help="Search time limit.")
@click.option("-v", "--verbose", is_flag=True, help="INFO logging.")
@click.pass_context
def cli(ctx, fmt, threads, seed, max_nodes, max_seconds, verbose):
    """Combinatorics-on-words workbench."""
    level = "INFO" if verbose else os.getenv("WORDLAB_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format=LOG_FORMAT)
    ctx.ensure_object(dict)
    ctx.obj.update(
        format=fmt,
        threads=max(1, threads),
        seed=seed,
        max_nodes=int(max_nodes) if max_nodes is not None else None,
        max_seconds=max_seconds,
    )


# ── generate / repeats ─────────────────────────────────────────────────────────

@cli.command()
@click.option("--word", "name", default=None,
              help="Classic word: " + ", ".join(sorted(CLASSIC_MORPHISMS)) + ", sturmian(1,2), zimin(k).")
@click.option("--morphism", default=None, help='Morphism spec, e.g. "a->ab;b->a".')
@click.option("--start", default=None, help="Letter the morphism is iterated at.")
@click.option("--length", "n", type=int, default=None, help="Prefix length.")
@click.pass_context
@guarded
def generate(ctx, name, morphism, start, n):
    """Prefix of a classic word or of a fixed point."""
    if morphism:
        if n is None:
            raise click.UsageError("--length is required with --morphism")
        m = parse_morphism(morphism)
        a = m.domain.index(start) if start else 0
        w = fixed_point_prefix(m, a, n)
        source = str(m)
    elif name:
        w = classic_word(name, n)
        source = name
    else:
        raise click.UsageError("give --word or --morphism")
    _emit(ctx, {"source": source, "length": len(w), "word": w})


@cli.command()
@click.option("--op", type=click.Choice(["period", "maxexp", "squares", "runs", "density"]),
              required=True)
@click.option("--word", "text", required=True)
@click.option("--fast", is_flag=True, help="Run-based counters for squares / runs.")
@click.pass_context
@guarded
def repeats(ctx, op, text, fast):
    """Periodicity and repetition measures of one word."""
    w = parse_word(text)
    payload: Dict[str, Any] = {"word": w, "op": op}
    if op == "period":
        payload.update(least_period=least_period(w), periods=periods(w), exponent=exponent(w))
    elif op == "maxexp":
        payload["max_exponent"] = max_exponent(w)
    elif op == "squares":
        if fast:
            payload["count"] = count_distinct_squares_fast(w)
        else:
            squares = distinct_squares(w)
            payload.update(count=len(squares), squares=squares)
    elif op == "runs":
        count, runs = count_runs_fast(w) if fast else count_runs(w)
        payload["count"] = count
        payload["runs"] = [
            {"start": r.start, "end": r.end, "period": r.period, "exponent": r.exponent} for r in runs
        ]
    else:
        payload["square_density"] = square_density(w)
    _emit(ctx, payload)


# ── avoid / shuffle ────────────────────────────────────────────────────────────

@cli.command()
@click.option("--pattern", default=None, help="Pattern; uppercase letters are variables.")
@click.option("--alpha", default=None, help="Power exponent, e.g. 7/4.")
@click.option("--strict", is_flag=True, help="alpha+-freeness (exponent > alpha forbidden).")
@click.option("--alphabet", "k", type=int, default=2, show_default=True)
@click.option("--max-len", type=int, default=None, help="Target length of the search.")
@click.option("--word", "text", default=None, help="Check this word instead of searching.")
@click.option("--circular", type=int, default=None, help="List circular free lengths up to N.")
@click.option("--no-symmetry", is_flag=True, help="Do not fix the first letter.")
@click.pass_context
@guarded
def avoid(ctx, pattern, alpha, strict, k, max_len, text, circular, no_symmetry):
    """Pattern / power avoidance: word check, circular lengths, longest-word search."""
    if not pattern and alpha is None:
        raise click.UsageError("give --pattern or --alpha")
    p = Pattern.parse(pattern) if pattern else None
    if text is not None:
        w = parse_word(text)
        if p is not None:
            witness = encounters(w, p)
            _emit(ctx, {"word": w, "pattern": str(p), "encounters": witness is not None, "witness": witness})
        _emit(ctx, {"word": w, "alpha": alpha, "strict": strict, "free": is_alpha_free(w, alpha, strict)})
    if circular is not None:
        if p is None:
            raise click.UsageError("--circular needs --pattern")
        lengths = circular_avoiding_lengths(p, k, circular)
        _emit(ctx, {"pattern": str(p), "alphabet": k, "n_max": circular, "lengths": lengths,
                    "missing": [n for n in range(1, circular + 1) if n not in lengths]})
    predicate = as_predicate(p, k) if p is not None else PowerFreePredicate(alpha, strict)
    outcome = longest_free_word(predicate, k, _budget(ctx, max_len), symmetry=False if no_symmetry else None)
    check = verify_search_outcome(outcome, predicate)
    _emit(ctx, _outcome_payload(outcome, predicate=str(predicate), verified=check["valid"]),
          2 if outcome.verdict == "budget" else 0)


@cli.command(name="shuffle")
@click.option("--u", "u_text", default=None)
@click.option("--v", "v_text", default=None, help="Second word (defaults to --u).")
@click.option("--beta", default=None, help="Conduction sequence over 0/1.")
@click.option("--root", "w_text", default=None, help="Find u with w in u ⧢ u instead.")
@click.option("--any-root", is_flag=True, help="Do not require the root to be square-free.")
@click.pass_context
@guarded
def shuffle_cmd(ctx, u_text, v_text, beta, w_text, any_root):
    """Conducted shuffle u ⧢_β v, or a shuffle square root of a word."""
    if w_text is not None:
        w = parse_word(w_text)
        found = shuffle_square_root(w, require_squarefree=not any_root)
        payload: Dict[str, Any] = {"w": w, "found": found is not None, "u": None, "beta": None}
        if found is not None:
            u, b = found
            payload.update(u=u, beta=str(b), verified=verify_shuffle(u, u, b, w)["valid"])
        _emit(ctx, payload)
    if u_text is None or beta is None:
        raise click.UsageError("give --u and --beta, or --root")
    u, v = _shared_words(u_text, v_text if v_text is not None else u_text)
    b = ConductionSequence.parse(beta)
    w = shuffle(u, v, b)
    _emit(ctx, {"u": u, "v": v, "beta": str(b), "word": w, "verified": verify_shuffle(u, v, b, w)["valid"]})


# ── abelian ────────────────────────────────────────────────────────────────────

@cli.group(invoke_without_command=True)
@click.option("--op", type=click.Choice(["equiv", "power", "census", "avoid"]), default=None)
@click.option("--u", "u_text", default=None)
@click.option("--v", "v_text", default=None)
@click.option("--word", "text", default=None)
@click.option("--k", "kabelian_k", type=int, default=1, show_default=True, help="k of k-abelian.")
@click.option("--n", type=int, default=2, show_default=True, help="Power degree.")
@click.option("--min-period", type=int, default=1, show_default=True)
@click.option("--kind", type=click.Choice(["abelian", "k-abelian", "additive", "strongly-k-abelian"]),
              default="abelian", show_default=True)
@click.option("--alphabet", "k_letters", type=int, default=2, show_default=True)
@click.option("--max-len", type=int, default=None)
@click.option("--values", default=None, help='Additive digit values, e.g. "0:0,1:1,2:4".')
@click.pass_context
@guarded
def abelian(ctx, op, u_text, v_text, text, kabelian_k, n, min_period, kind, k_letters, max_len, values):
    """Abelian and k-abelian equivalence, powers, census and avoidance."""
    if ctx.invoked_subcommand is not None:
        return
    if op is None:
        raise click.UsageError("give --op or a subcommand")
    value_map = None
    if values:
        value_map = {g.strip(): int(v) for g, v in (item.split(":", 1) for item in values.split(","))}
    if op == "equiv":
        if u_text is None or v_text is None:
            raise click.UsageError("--op equiv needs --u and --v")
        u, v = _shared_words(u_text, v_text)
        _emit(ctx, {"u": u, "v": v, "k": kabelian_k, "equivalent": kabelian_equiv(u, v, kabelian_k),
                    "parikh_u": list(parikh(u).counts), "parikh_v": list(parikh(v).counts)})
    if op == "power":
        if text is None:
            raise click.UsageError("--op power needs --word")
        w = parse_word(text)
        if kind == "strongly-k-abelian":
            _emit(ctx, {"word": w, "kind": kind, "n": n, "k": kabelian_k,
                        "power": is_strongly_kabelian_npower(w, n, kabelian_k)})
        if kind == "additive":
            report = is_additive_npower(w, n, value_map)
        else:
            report = is_kabelian_npower(w, n, kabelian_k if kind == "k-abelian" else 1)
        _emit(ctx, {"word": w, "kind": kind, "n": n, "power": report is not None, "report": report})
    if op == "census":
        length = max_len if max_len is not None else 8
        row = strong_power_census(k_letters, n, length, kabelian_k)
        _emit(ctx, row)
    outcome = avoid_long_powers_search(
        k_letters, "abelian" if kind == "strongly-k-abelian" else kind, n, min_period,
        _budget(ctx, max_len), kabelian_k if kind == "k-abelian" else None, value_map,
    )
    _emit(ctx, _outcome_payload(outcome, kind=kind, n=n, min_period=min_period),
          2 if outcome.verdict == "budget" else 0)


@abelian.command()
@click.option("--outer", default="0->0;1->1;3->1;4->0", show_default=True,
              help="Morphism applied to the fixed point of 0->03, 1->43, 3->1, 4->01.")
@click.option("--horizon", type=int, default=2000, show_default=True)
@click.option("--min-period", type=int, default=1, show_default=True)
@click.pass_context
@guarded
def makela(ctx, outer, horizon, min_period):
    """Abelian cubes in an image of the four-letter fixed point."""
    _emit(ctx, makela_exploration(outer, horizon, min_period))


# ── complexity ─────────────────────────────────────────────────────────────────

@cli.command()
@click.option("--oracle", default="fibonacci", show_default=True,
              help="thue_morse, fibonacci, thue_ternary, tribonacci, makela, sturmian(1,2), constant.")
@click.option("--measure", type=click.Choice(["factor", "palindrome", "recurrence", "balance", "rauzy"]),
              default="factor", show_default=True)
@click.option("--n-max", type=int, default=50, show_default=True, help="Largest n (Rauzy: the order).")
@click.option("--horizon", type=int, default=100_000, show_default=True)
@click.pass_context
@guarded
def complexity(ctx, oracle, measure, n_max, horizon):
    """Complexity profiles of an infinite word measured on a prefix."""
    gen = _oracle(oracle)
    if measure == "rauzy":
        graph = rauzy_graph(gen, n_max, horizon)
        if ctx.obj["format"] == "text":
            click.echo(graph.edge_list())
            ctx.exit(0)
        _emit(ctx, {"tag": gen.tag, "order": n_max, "vertices": graph.vertices,
                    "edges": [list(e) for e in graph.edges]})
    measures = {
        "factor": factor_complexity,
        "palindrome": palindromic_complexity,
        "recurrence": recurrence_function,
        "balance": balance_function,
    }
    profile = measures[measure](gen, n_max, horizon)
    _emit(ctx, {"measure": profile.measure, "tag": profile.tag, "horizon": profile.horizon,
                "valid_up_to": profile.valid_up_to, "values": profile.values, "extras": profile.extras})


# ── factorize ──────────────────────────────────────────────────────────────────

FACTORIZE_OPS = ["factorizations", "completeness", "uniqueness", "synchronization",
                 "quasiperiods", "x-factorizations", "rank"]


@cli.command()
@click.option("--op", type=click.Choice(FACTORIZE_OPS), default="factorizations", show_default=True)
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="F-factorization spec JSON.")
@click.option("--word", "text", default=None)
@click.option("--mode", type=click.Choice(["bounded", "exact"]), default="bounded", show_default=True)
@click.option("--bound", type=int, default=8, show_default=True)
@click.option("--window", type=int, default=None, help="Synchronization window (searched if omitted).")
@click.option("--x", "x_words", default=None, help='Comma-separated set X, e.g. "ab,ba,abba".')
@click.option("--circular", is_flag=True, help="Read --word cyclically.")
@click.option("--limit", type=int, default=100, show_default=True, help="Most factorizations listed.")
@click.pass_context
@guarded
def factorize(ctx, op, spec_path, text, mode, bound, window, x_words, circular, limit):
    """F-factorizations, quasiperiods, X-factorizations and rank."""
    if op in ("factorizations", "completeness", "uniqueness", "synchronization"):
        if spec_path is None:
            raise click.UsageError(f"--op {op} needs --spec")
        spec = FFactorizationSpec.load(spec_path)
        if op == "completeness":
            _emit(ctx, check_completeness(spec, mode, bound))
        if op == "uniqueness":
            _emit(ctx, check_uniqueness(spec, bound))
        if op == "synchronization":
            _emit(ctx, check_synchronization(spec, bound, window))
        if text is None:
            raise click.UsageError("--op factorizations needs --word")
        w = parse_word(text, spec.sigma)
        found = f_factorizations(w, spec, limit)
        _emit(ctx, {"word": w, "count": len(found),
                    "factorizations": [{"factors": list(f), "indices": "".join(map(str, i))} for f, i in found]})
    if op == "quasiperiods":
        if text is None:
            raise click.UsageError("--op quasiperiods needs --word")
        w = parse_word(text)
        qs = quasiperiods(w)
        _emit(ctx, {"word": w, "quasiperiodic": bool(qs), "quasiperiods": qs})
    if not x_words:
        raise click.UsageError(f"--op {op} needs --x")
    X = [x.strip() for x in x_words.split(",") if x.strip()]
    if op == "rank":
        _emit(ctx, {"X": X, "code": is_code(X), "rank": combinatorial_rank(X)})
    if text is None:
        raise click.UsageError("--op x-factorizations needs --word")
    w = parse_word(text)
    target = CircularWord(underlying=w) if circular else w
    report = disjoint_x_factorizations(target, X, max(limit, 1))
    _emit(ctx, report, 2 if report.get("verdict") == "budget" else 0)


# ── equations / pcp ────────────────────────────────────────────────────────────

@cli.command()
@click.option("--system", required=True, help='Equations separated by ";", e.g. "xy = yx".')
@click.option("--max-len", type=int, default=3, show_default=True)
@click.option("--letters", default=None, help='Constant alphabet, e.g. "ab".')
@click.option("--independent", is_flag=True, help="Also test independence of the system.")
@click.pass_context
@guarded
def equations(ctx, system, max_len, letters, independent):
    """Bounded solutions of a system of word equations."""
    eqs = parse_system(system)
    alphabet = list(letters) if letters else None
    solved = solve_word_equation(eqs, max_len, alphabet)
    payload: Dict[str, Any] = dict(solved)
    payload["balanced"] = [eq.is_balanced() for eq in eqs]
    if independent:
        payload["independence"] = is_independent_system(eqs, max_len, alphabet)
    _emit(ctx, payload, 2 if solved["verdict"] == "budget" else 0)


@cli.command()
@click.option("--h", "h_spec", required=True, help='First morphism, e.g. "a->ab;b->a".')
@click.option("--g", "g_spec", required=True, help="Second morphism.")
@click.option("--max-len", type=int, default=8, show_default=True)
@click.option("--properties", "bound", type=int, default=None,
              help="Report marked / unique-continuation flags up to this length instead.")
@click.pass_context
@guarded
def pcp(ctx, h_spec, g_spec, max_len, bound):
    """Shortest x with h(x) = g(x) up to a length."""
    inst = PcpInstance.parse(h_spec, g_spec)
    if bound is not None:
        _emit(ctx, instance_properties(inst, bound))
    outcome = bounded_pcp(inst, max_len, _budget(ctx))
    extra: Dict[str, Any] = {"marked": inst.marked}
    if outcome.word is not None:
        extra["verified"] = verify_pcp_solution(inst, outcome.word)["valid"]
    _emit(ctx, _outcome_payload(outcome, **extra), 2 if outcome.verdict == "budget" else 0)


# ── census / probe ─────────────────────────────────────────────────────────────

@cli.command()
@click.argument("config", type=click.Path(dir_okay=False))
@click.option("--progress", is_flag=True, help="Show a progress bar.")
@click.pass_context
def census(ctx, config, progress):
    """Per-length table for a YAML census config."""
    fmt = ctx.obj["format"]
    out = run_census_file(config, fmt=fmt, progress=progress, threads=ctx.obj["threads"],
                          max_nodes=ctx.obj["max_nodes"])
    if out["success"]:
        click.echo(out["table"], nl=False)
    else:
        click.echo(render({"success": False, "error": out["error"]}, fmt))
    ctx.exit(out["exit_code"])


def _parse_overrides(items: Tuple[str, ...]) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {}
    for item in items:
        if "=" not in item:
            raise click.BadParameter(f"{item!r} is not key=value", param_hint="--set")
        key, raw = item.split("=", 1)
        try:
            overrides[key.strip()] = yaml.safe_load(raw)
        except yaml.YAMLError:
            overrides[key.strip()] = raw
    return overrides


@cli.command()
@click.argument("probe_id", required=False)
@click.option("--list", "list_only", is_flag=True, help="List registered probes.")
@click.option("--set", "settings", multiple=True, help="Override a default: key=value (YAML value).")
@click.option("--no-save", is_flag=True, help="Do not write report files.")
@click.option("--results-dir", default=None, help="Report directory (default WORDLAB_RESULTS_DIR or results/).")
@click.pass_context
@guarded
def probe(ctx, probe_id, list_only, settings, no_save, results_dir):
    """Run a registered problem probe."""
    fmt = ctx.obj["format"]
    if list_only:
        try:
            rows: List[Dict[str, Any]] = list_probes()
        except WordLabError as e:
            _emit(ctx, {"success": False, "error": str(e)}, 1)
        if fmt == "json":
            click.echo(json.dumps(rows, indent=2))
        else:
            sep = "\t" if fmt == "tsv" else "  "
            for row in rows:
                scope = "out of scope" if row["out_of_scope"] else row["runner"]
                click.echo(sep.join([row["id"], scope, row["title"]]))
        ctx.exit(0)
    if not probe_id:
        raise click.UsageError("give a probe id or --list")
    report = run_probe(
        probe_id,
        overrides=_parse_overrides(settings),
        results_dir=results_dir,
        save=not no_save,
        threads=ctx.obj["threads"],
        seed=ctx.obj["seed"],
        max_nodes=ctx.obj["max_nodes"],
        max_seconds=ctx.obj["max_seconds"],
    )
    if fmt == "text":
        click.echo(format_summary(report), nl=False)
    else:
        click.echo(render(report, fmt))
    ctx.exit(report["exit_code"])


if __name__ == "__main__":
    cli()
