"""Reproducible suite of every desk-scale fact the library is built to certify.

Each check returns a ``CheckResult``; ``run_checks`` runs all of them or the
ones named in ``only``.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Optional
import logging
import random

from digraphs.algebra import (
    FiniteAlgebra,
    TermTable,
    freely_generated_digraph,
    generated_digraph,
    is_compatible,
    is_congruence,
    power_algebra,
    subalgebra,
)
from digraphs.conditions import (
    IdentityWitness,
    check_identity_system,
    collapse_report,
    d_retract_check,
    free_cycle_digraph,
    rho_digraph,
    search_identity_witness,
)
from digraphs.connectivity import (
    equivalence,
    find_path,
    h_equivalence,
    hm_bound,
    radical,
    smallest_antisymmetric_oracle,
    verify_chain,
)
from digraphs.digraph import (
    Digraph,
    is_homomorphism,
    is_isomorphic,
    parse_digraph,
    power,
    random_reflexive,
    reflexive_digraphs,
)
from digraphs.errors import BudgetExceededError, DigraphsError, DomainError
from digraphs.gallery import FIG3_TEXT, bundled_algebra, gallery
from digraphs.partition import parse_partition
from digraphs.polymorph import (
    PolymorphismQuery,
    collect_polymorphisms,
    filter_check,
    is_projection,
    major_subsets,
    meet_restriction_check,
    olsak_check,
    olsak_search,
)
from digraphs.settings import Settings

logger = logging.getLogger(__name__)

RANDOM_CHAIN_DIGRAPHS = 1_000
RANDOM_AFFINE_DIGRAPHS = 50
D_ARITY3_SAMPLE = 100
SWEEP_SEED = 20240601


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")


class CheckContext:
    """Inputs shared between checks, built on first use."""

    def __init__(self, settings: Settings, fig3_text: Optional[str] = None):
        self.settings = settings
        self.fig3_text = fig3_text if fig3_text is not None else FIG3_TEXT

    @cached_property
    def fig3(self) -> Digraph:
        return parse_digraph(self.fig3_text)

    @cached_property
    def computed_fig3(self) -> Digraph:
        return free_cycle_digraph(bundled_algebra("sl2"), self.settings.free_budget).digraph

    @cached_property
    def four_vertex(self) -> list[Digraph]:
        return list(reflexive_digraphs(4))

    @cached_property
    def affine_digraphs(self) -> list[tuple[FiniteAlgebra, Digraph]]:
        """Random compatible reflexive digraphs over subalgebras of (affine Z2)^3."""
        base = power_algebra(bundled_algebra("z2aff"), 3)
        rng = random.Random(SWEEP_SEED)
        out = []
        for _ in range(RANDOM_AFFINE_DIGRAPHS):
            r = rng.randint(2, 4)
            seed = random_reflexive(r, rng.random(), seed=rng.randrange(2**32))
            embedding = rng.sample(range(base.size), r)
            sub, elements = subalgebra(base, embedding)
            position = {e: j for j, e in enumerate(elements)}
            g = generated_digraph(sub, seed, [position[e] for e in embedding])
            out.append((sub, g))
        return out


def _check_gallery(ctx: CheckContext) -> CheckResult:
    d, k = gallery("D"), gallery("K")
    expected = {
        "extreme(D)": (equivalence(d, "extreme"), "{{0,1},{2}}"),
        "strong(D)": (equivalence(d, "strong"), "{{0,1,2}}"),
        "radical(D)": (radical(d).result, "{{0,1,2}}"),
        "extreme(K)": (equivalence(k, "extreme"), "{{0,1},{2,3}}"),
        "radical(K)": (radical(k).result, "{{0,1,2,3}}"),
    }
    wrong = [f"{name}={got}" for name, (got, want) in expected.items() if got != parse_partition(want)]
    return CheckResult("gallery", not wrong, ", ".join(wrong))


def _check_chain(ctx: CheckContext) -> CheckResult:
    rng = random.Random(SWEEP_SEED)
    randoms = (
        random_reflexive(rng.randint(1, 8), rng.random(), seed=rng.randrange(2**32))
        for _ in range(RANDOM_CHAIN_DIGRAPHS)
    )
    violations = [g.name for g in (*ctx.four_vertex, *randoms) if not verify_chain(g).holds]
    return CheckResult(
        "chain",
        not violations,
        f"{len(violations)} violations" + (f", first {violations[0]}" if violations else ""),
    )


def _check_radical_oracle(ctx: CheckContext) -> CheckResult:
    mismatches = [
        g.name
        for g in ctx.four_vertex
        if radical(g).result != smallest_antisymmetric_oracle(g, ctx.settings.oracle_cap)
    ]
    return CheckResult("radical-oracle", not mismatches, f"{len(mismatches)} mismatches")


def _check_n_equivalence(ctx: CheckContext) -> CheckResult:
    n = gallery("N")
    mismatches = [
        g.name
        for g in ctx.four_vertex
        if h_equivalence(g, n, ctx.settings.budget) != equivalence(g, "extreme")
    ]
    return CheckResult("n-equivalence", not mismatches, f"{len(mismatches)} mismatches")


def _check_k_projections(ctx: CheckContext) -> CheckResult:
    k = gallery("K")
    notes = []
    passed = True
    for arity in (1, 2, 3):
        result = collect_polymorphisms(PolymorphismQuery(k, arity, True, budget=ctx.settings.budget))
        projections = sorted(filter(None, map(is_projection, result.tables)))
        ok = len(result.tables) == arity and projections == list(range(1, arity + 1))
        if result.truncated and arity == 3:
            notes.append(f"arity 3 budget-limited after {len(result.tables)} tables")
            continue
        if result.truncated or not ok:
            passed = False
        notes.append(f"arity {arity}: {len(result.tables)} tables")
    return CheckResult("k-projections", passed, "; ".join(notes))


def _d_table_ok(t: TermTable) -> bool:
    family = major_subsets(t)
    return filter_check(family) and meet_restriction_check(t, family)


def _check_d_filter(ctx: CheckContext) -> CheckResult:
    d = gallery("D")
    complete = []
    for arity in (1, 2):
        result = collect_polymorphisms(PolymorphismQuery(d, arity, True, budget=ctx.settings.budget))
        if result.truncated:
            return CheckResult("d-filter", False, f"arity {arity} enumeration budget-limited")
        complete.extend(result.tables)
    sample = collect_polymorphisms(
        PolymorphismQuery(d, 3, True, limit=D_ARITY3_SAMPLE, budget=ctx.settings.budget, seed=SWEEP_SEED)
    )
    failures = [t for t in (*complete, *sample.tables) if not _d_table_ok(t)]
    enough = len(sample.tables) >= D_ARITY3_SAMPLE or not sample.truncated
    return CheckResult(
        "d-filter",
        not failures and enough,
        f"{len(complete)} complete, {len(sample.tables)} sampled at arity 3, {len(failures)} failures",
    )


def _check_chain_meet(ctx: CheckContext) -> CheckResult:
    d, meet = gallery("D"), bundled_algebra("chain3meet")
    table = meet.op("meet").table
    ok = table.is_idempotent() and is_homomorphism(power(d, 2), d, table.table) and is_compatible(d, meet)
    return CheckResult("chain-meet", ok)


def _check_fig3(ctx: CheckContext) -> CheckResult:
    computed = ctx.computed_fig3
    weak = equivalence(computed, "weak")
    facts = {
        "seven vertices": computed.n == 7,
        "weakly connected": weak.num_blocks == 1,
        "matches stored digraph": is_isomorphic(computed, ctx.fig3),
        "no symmetric x-z path": find_path(computed, 0, 2, "symmetric") is None,
        "no z-witness up to 10": search_identity_witness(
            bundled_algebra("sl2"), "z", 10, ctx.settings.free_budget
        )
        is None,
    }
    failed = [name for name, ok in facts.items() if not ok]
    return CheckResult("fig3", not failed, ", ".join(failed))


def _check_affine_witness(ctx: CheckContext) -> CheckResult:
    z2 = bundled_algebra("z2aff")
    found = search_identity_witness(z2, "y", ctx.settings.max_n, ctx.settings.free_budget)
    explicit = IdentityWitness(
        1,
        (TermTable.projection(2, 6, 1),),
        (parity_table((3, 4, 5)),),
        (),
        "y",
    )
    ok = found is not None and found.n == 1 and check_identity_system(z2, found)
    ok = ok and check_identity_system(z2, explicit)
    return CheckResult("z2-witness", ok, f"n={found.n}" if found else "no witness")


def parity_table(coordinates: Iterable[int]) -> TermTable:
    """Sum modulo 2 of the given (0-based) coordinates of a 6-ary function."""
    coordinates = tuple(coordinates)
    cells = []
    for i in range(64):
        bits = [(i >> (5 - j)) & 1 for j in range(6)]
        cells.append(sum(bits[j] for j in coordinates) % 2)
    return TermTable(2, 6, tuple(cells))


def _check_free_extreme(ctx: CheckContext) -> CheckResult:
    fd = freely_generated_digraph(bundled_algebra("z2aff"), gallery("D"), ctx.settings.free_budget)
    ok = fd.digraph.n == 4 and equivalence(fd.digraph, "extreme").num_blocks == 1
    return CheckResult("free-extreme", ok, f"{fd.digraph.n} vertices")


def _check_olsak(ctx: CheckContext) -> CheckResult:
    projections_fail = not any(olsak_check(TermTable.projection(2, 6, i)) for i in range(6))
    facts = {
        "x1+x2+x3 is Olsak": olsak_check(parity_table((0, 1, 2))),
        "projections fail": projections_fail,
        "semilattice has one": olsak_search(bundled_algebra("sl2"), ctx.settings.term_budget) is not None,
        "sets have none": olsak_search(bundled_algebra("set2"), ctx.settings.term_budget) is None,
    }
    failed = [name for name, ok in facts.items() if not ok]
    return CheckResult("olsak", not failed, ", ".join(failed))


def _check_hm_collapse(ctx: CheckContext) -> CheckResult:
    bad = []
    for _, g in ctx.affine_digraphs:
        coincide = collapse_report(g).coincide
        bound = hm_bound(g)
        if not all(coincide.values()) or bound is None or bound > 2:
            bad.append(g.name)
    return CheckResult("hm-collapse", not bad, f"{len(bad)} of {len(ctx.affine_digraphs)} fail")


def _check_rho(ctx: CheckContext) -> CheckResult:
    expected = Digraph.from_edges(3, [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)])
    bad = [g.name for a, g in ctx.affine_digraphs if not is_compatible(rho_digraph(g), a)]
    d_ok = rho_digraph(gallery("D")).edges == expected.edges
    return CheckResult("rho", not bad and d_ok, f"{len(bad)} incompatible, rho(D) {'ok' if d_ok else 'wrong'}")


def _check_congruence(ctx: CheckContext) -> CheckResult:
    bad = []
    for a, g in ctx.affine_digraphs:
        partitions = [equivalence(g, kind) for kind in ("weak", "strong", "extreme")]
        partitions.append(radical(g).result)
        if not all(is_congruence(a, p) for p in partitions):
            bad.append(g.name)
    return CheckResult("congruence", not bad, f"{len(bad)} failures")


def _check_h_equivalence(ctx: CheckContext) -> CheckResult:
    d, k = gallery("D"), gallery("K")
    bad = []
    for _, g in ctx.affine_digraphs:
        extreme = equivalence(g, "extreme")
        budget = ctx.settings.budget
        if not (h_equivalence(g, k, budget) == h_equivalence(g, d, budget) == extreme):
            bad.append(g.name)
    return CheckResult("h-equivalence", not bad, f"{len(bad)} failures")


def _check_d_retract(ctx: CheckContext) -> CheckResult:
    budgets = (ctx.settings.free_budget, ctx.settings.budget)
    sl2 = d_retract_check(bundled_algebra("sl2"), *budgets)
    z2 = d_retract_check(bundled_algebra("z2aff"), *budgets)
    return CheckResult("d-retract", sl2 is not None and z2 is None)


def _check_negative_control(ctx: CheckContext) -> CheckResult:
    stored = ctx.fig3
    dropped = next((e for e in stored.sorted_edges() if e[0] != e[1]), None)
    if dropped is None:
        return CheckResult("negative-control", False, "stored digraph has no edge to corrupt")
    corrupted = Digraph(stored.name, stored.n, stored.edges - {dropped})
    ok = not is_isomorphic(ctx.computed_fig3, corrupted)
    return CheckResult("negative-control", ok, f"dropped edge {dropped[0]}->{dropped[1]}")


CHECKS: dict[str, Callable[[CheckContext], CheckResult]] = {
    "gallery": _check_gallery,
    "chain": _check_chain,
    "radical-oracle": _check_radical_oracle,
    "n-equivalence": _check_n_equivalence,
    "k-projections": _check_k_projections,
    "d-filter": _check_d_filter,
    "chain-meet": _check_chain_meet,
    "fig3": _check_fig3,
    "z2-witness": _check_affine_witness,
    "free-extreme": _check_free_extreme,
    "olsak": _check_olsak,
    "hm-collapse": _check_hm_collapse,
    "rho": _check_rho,
    "congruence": _check_congruence,
    "h-equivalence": _check_h_equivalence,
    "d-retract": _check_d_retract,
    "negative-control": _check_negative_control,
}


def run_checks(
    settings: Optional[Settings] = None,
    only: Optional[Iterable[str]] = None,
    fig3_text: Optional[str] = None,
) -> list[CheckResult]:
    names = list(only) if only else list(CHECKS)
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        raise DomainError(f"unknown checks {unknown}; known: {', '.join(CHECKS)}")
    ctx = CheckContext(settings or Settings(), fig3_text)
    results = []
    for name in names:
        try:
            result = CHECKS[name](ctx)
        except BudgetExceededError as e:
            result = CheckResult(name, False, f"budget-limited: {e}")
        except DigraphsError as e:
            result = CheckResult(name, False, str(e))
        logger.info(result.line())
        results.append(result)
    return results
