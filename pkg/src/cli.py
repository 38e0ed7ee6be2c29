"""Command-line front end.

Exit status: 0 success or positive answer, 1 negative answer or a falsified
instance, 2 usage/parse/domain error, 3 budget exhausted.
"""

from pathlib import Path
from typing import Any, Callable, Literal, Optional, Sequence
import argparse
import logging
import sys

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from digraphs.algebra import (
    FiniteAlgebra,
    TermTable,
    format_algebra,
    freely_generated_digraph,
    generated_digraph,
    is_compatible,
    is_congruence,
    parse_term,
    subuniverse_closure,
    term_tables,
)
from digraphs.checks import CHECKS, run_checks
from digraphs.conditions import (
    check_identity_system,
    collapse_report,
    d_retract_check,
    format_witness,
    free_cycle_report,
    parse_witness,
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
from digraphs.constants import EXIT_BUDGET, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE
from digraphs.digraph import Digraph, HomomorphismSearch, format_digraph, is_retract, power, quotient
from digraphs.errors import BudgetExceededError, DomainError, FalsifiedError, ParseError
from digraphs.gallery import algebra_from_text, digraph_from_text
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
from digraphs.report import digraph_dict, render_human, render_machine, table_dict
from digraphs.settings import Settings, configure_logging

logger = logging.getLogger("digraphs.cli")


class RunConfig(BaseModel):
    command: str
    args: dict[str, Any] = Field(default_factory=dict)
    output: Literal["human", "machine"] = "human"
    settings: Settings = Field(default_factory=Settings)


class Outcome(BaseModel):
    """What a command produced: a record, whether the answer was positive and
    optionally a hand-written human rendering."""

    record: dict[str, Any]
    positive: bool = True
    human: Optional[str] = None


# --- input helpers -------------------------------------------------------


def _read(source: str) -> str:
    if source.startswith("@"):
        return source
    try:
        return Path(source).read_text(encoding="utf-8")
    except OSError as e:
        raise DomainError(f"cannot read {source}: {e.strerror}") from e


def _digraph(source: str) -> Digraph:
    return digraph_from_text(_read(source))


def _algebra(source: str) -> FiniteAlgebra:
    return algebra_from_text(_read(source))


def _values(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.replace(",", " ").split())
    except ValueError as e:
        raise ParseError(f"expected integers, got {text!r}") from e


def _fixed(pairs: Optional[Sequence[str]]) -> dict[int, int]:
    fixed = {}
    for pair in pairs or ():
        u, sep, a = pair.partition("=")
        if not sep or not u.strip().isdigit() or not a.strip().isdigit():
            raise ParseError(f"expected --fix u=a, got {pair!r}")
        fixed[int(u)] = int(a)
    return fixed


def _term(args: dict, size: int) -> TermTable:
    if args.get("term"):
        return parse_term(_read(args["term"]))
    if args.get("table") is None or args.get("arity") is None:
        raise DomainError("give --term FILE or --table VALUES with --arity")
    return TermTable(size, args["arity"], _values(args["table"]))


# --- commands ------------------------------------------------------------


def cmd_components(args: dict, s: Settings) -> Outcome:
    g = _digraph(args["input"])
    if args["kind"] == "radical":
        trace = radical(g)
        p = trace.result
        record = {"kind": "radical", "partition": str(p), "stages": [str(x) for x in trace.stages]}
    else:
        p = equivalence(g, args["kind"])
        record = {"kind": args["kind"], "partition": str(p)}
    record["blocks"] = p.num_blocks
    return Outcome(record=record, human=str(p))


def cmd_chain(args: dict, s: Settings) -> Outcome:
    g = _digraph(args["input"])
    report = verify_chain(g)
    record = report.as_dict()
    positive = report.holds
    if args.get("oracle"):
        oracle = smallest_antisymmetric_oracle(g, s.oracle_cap)
        record["oracle"] = str(oracle)
        positive = positive and oracle == report.radical
    return Outcome(record=record, positive=positive)


def cmd_quotient(args: dict, s: Settings) -> Outcome:
    g = _digraph(args["input"])
    q = quotient(g, parse_partition(args["partition"], g.n))
    return Outcome(record=digraph_dict(q), human=format_digraph(q))


def cmd_power(args: dict, s: Settings) -> Outcome:
    p = power(_digraph(args["input"]), args["k"], s.budget)
    return Outcome(record=digraph_dict(p), human=format_digraph(p))


def cmd_homs(args: dict, s: Settings) -> Outcome:
    search = HomomorphismSearch(
        _digraph(args["source"]), _digraph(args["target"]), _fixed(args.get("fix")), s.budget
    )
    maps = []
    for phi in search:
        maps.append(list(phi.image))
        if args.get("limit") and len(maps) >= args["limit"]:
            break
    human = "\n".join(" ".join(map(str, m)) for m in maps) + f"\n# {len(maps)} maps"
    return Outcome(record={"count": len(maps), "maps": maps}, positive=bool(maps), human=human)


def cmd_retract(args: dict, s: Settings) -> Outcome:
    pair = is_retract(_digraph(args["sub"]), _digraph(args["input"]), s.budget)
    if pair is None:
        return Outcome(record={"retract": False}, positive=False)
    beta, alpha = pair
    return Outcome(
        record={"retract": True, "coretraction": list(beta.image), "retraction": list(alpha.image)}
    )


def cmd_hequiv(args: dict, s: Settings) -> Outcome:
    p = h_equivalence(_digraph(args["input"]), _digraph(args["h"]), s.budget)
    return Outcome(record={"partition": str(p), "blocks": p.num_blocks}, human=str(p))


def cmd_path(args: dict, s: Settings) -> Outcome:
    path = find_path(_digraph(args["input"]), args["source"], args["target"], args["mode"])
    if path is None:
        return Outcome(record={"found": False}, positive=False, human="no path")
    return Outcome(
        record={"found": True, "length": len(path) - 1, "path": path},
        human=" -> ".join(map(str, path)),
    )


def cmd_hmbound(args: dict, s: Settings) -> Outcome:
    bound = hm_bound(_digraph(args["input"]))
    return Outcome(record={"bound": bound}, positive=bound is not None, human=str(bound))


def cmd_closure(args: dict, s: Settings) -> Outcome:
    closed = sorted(subuniverse_closure(_algebra(args["algebra"]), args["seed"]))
    return Outcome(record={"subuniverse": closed}, human=" ".join(map(str, closed)))


def cmd_compatible(args: dict, s: Settings) -> Outcome:
    ok = is_compatible(_digraph(args["input"]), _algebra(args["algebra"]))
    return Outcome(record={"compatible": ok}, positive=ok)


def cmd_congruence(args: dict, s: Settings) -> Outcome:
    a = _algebra(args["algebra"])
    ok = is_congruence(a, parse_partition(args["partition"], a.size))
    return Outcome(record={"congruence": ok}, positive=ok)


def cmd_generate(args: dict, s: Settings) -> Outcome:
    g = generated_digraph(_algebra(args["algebra"]), _digraph(args["seed"]), args["embedding"])
    return Outcome(record=digraph_dict(g), human=format_digraph(g))


def cmd_free(args: dict, s: Settings) -> Outcome:
    fd = freely_generated_digraph(_algebra(args["algebra"]), _digraph(args["seed"]), s.free_budget)
    record = {**digraph_dict(fd.digraph), "generators": list(fd.generators)}
    human = format_digraph(fd.digraph) + "# generators " + " ".join(map(str, fd.generators)) + "\n"
    return Outcome(record=record, human=human)


def cmd_terms(args: dict, s: Settings) -> Outcome:
    a = _algebra(args["algebra"])
    tables = term_tables(a, args["arity"], args.get("idempotent", False), s.term_budget)
    shown = tables[: args["limit"]] if args.get("limit") else tables
    human = "\n".join(" ".join(map(str, t.table)) for t in shown) + f"\n# {len(tables)} tables"
    return Outcome(record={"count": len(tables), "tables": [table_dict(t) for t in shown]}, human=human)


def cmd_polymorphisms(args: dict, s: Settings) -> Outcome:
    q = PolymorphismQuery(
        _digraph(args["input"]),
        args["arity"],
        args.get("idempotent", False),
        args.get("limit"),
        s.budget,
        args.get("seed"),
    )
    result = collect_polymorphisms(q)
    if result.truncated:
        raise BudgetExceededError(
            f"{q.arity}-ary polymorphisms of {q.digraph.name}", s.budget, len(result.tables)
        )
    lines = []
    for t in result.tables:
        coordinate = is_projection(t)
        flag = f"  # projection {coordinate}" if coordinate else ""
        lines.append(" ".join(map(str, t.table)) + flag)
    lines.append(f"# {len(result.tables)} tables")
    record = {
        "count": len(result.tables),
        "tables": [table_dict(t, projection=is_projection(t)) for t in result.tables],
    }
    return Outcome(record=record, human="\n".join(lines))


def cmd_major(args: dict, s: Settings) -> Outcome:
    t = _term(args, 3)
    family = major_subsets(t)
    ok = filter_check(family)
    record = {
        "subsets": family.as_lists(),
        "filter": ok,
        "least": sorted(family.least) if family.least is not None else None,
        "meet_restriction": meet_restriction_check(t, family) if ok else None,
    }
    return Outcome(record=record, positive=ok and bool(record["meet_restriction"]))


def cmd_olsak(args: dict, s: Settings) -> Outcome:
    if args.get("algebra"):
        found = olsak_search(_algebra(args["algebra"]), s.term_budget)
        if found is None:
            return Outcome(record={"found": False}, positive=False)
        return Outcome(record={"found": True, "term": table_dict(found)})
    if args.get("size") is None and not args.get("term"):
        raise DomainError("olsak needs --algebra, --term, or --table with --size")
    ok = olsak_check(_term({**args, "arity": 6}, args.get("size") or 1))
    return Outcome(record={"olsak": ok}, positive=ok)


def cmd_identity_check(args: dict, s: Settings) -> Outcome:
    ok = check_identity_system(_algebra(args["algebra"]), parse_witness(_read(args["witness"])))
    return Outcome(record={"holds": ok}, positive=ok)


def cmd_identity_search(args: dict, s: Settings) -> Outcome:
    found = search_identity_witness(
        _algebra(args["algebra"]), args["endpoint"], args.get("max_n") or s.max_n, s.free_budget
    )
    if found is None:
        return Outcome(record={"found": False}, positive=False, human="no witness")
    return Outcome(
        record={"found": True, "n": found.n, "path": list(found.path)},
        human=format_witness(found),
    )


def cmd_rho(args: dict, s: Settings) -> Outcome:
    g = rho_digraph(_digraph(args["input"]))
    return Outcome(record=digraph_dict(g), human=format_digraph(g))


def cmd_collapse(args: dict, s: Settings) -> Outcome:
    return Outcome(record=collapse_report(_digraph(args["input"])).as_dict())


def cmd_free_cycle(args: dict, s: Settings) -> Outcome:
    report = free_cycle_report(_algebra(args["algebra"]), args["n"], s.free_budget)
    return Outcome(record=report.as_dict(), positive=report.extremely_connected)


def cmd_d_retract(args: dict, s: Settings) -> Outcome:
    pair = d_retract_check(_algebra(args["algebra"]), s.free_budget, s.budget)
    if pair is None:
        return Outcome(record={"retract": False}, positive=False)
    beta, alpha = pair
    return Outcome(
        record={"retract": True, "coretraction": list(beta.image), "retraction": list(alpha.image)}
    )


def cmd_algebra(args: dict, s: Settings) -> Outcome:
    a = _algebra(args["algebra"])
    return Outcome(record={"name": a.name, "size": a.size, "idempotent": a.is_idempotent()}, human=format_algebra(a))


def cmd_paper_check(args: dict, s: Settings) -> Outcome:
    fig3 = _read(args["fig3"]) if args.get("fig3") else None
    results = run_checks(s, args.get("only"), fig3)
    record = {r.name: {"passed": r.passed, "detail": r.detail} for r in results}
    return Outcome(
        record=record,
        positive=all(r.passed for r in results),
        human="\n".join(r.line() for r in results),
    )


COMMANDS: dict[str, Callable[[dict, Settings], Outcome]] = {
    "components": cmd_components,
    "chain": cmd_chain,
    "quotient": cmd_quotient,
    "power": cmd_power,
    "homs": cmd_homs,
    "retract": cmd_retract,
    "hequiv": cmd_hequiv,
    "path": cmd_path,
    "hmbound": cmd_hmbound,
    "closure": cmd_closure,
    "compatible": cmd_compatible,
    "congruence": cmd_congruence,
    "generate": cmd_generate,
    "free": cmd_free,
    "terms": cmd_terms,
    "polymorphisms": cmd_polymorphisms,
    "major": cmd_major,
    "olsak": cmd_olsak,
    "identity-check": cmd_identity_check,
    "identity-search": cmd_identity_search,
    "rho": cmd_rho,
    "collapse": cmd_collapse,
    "free-cycle": cmd_free_cycle,
    "d-retract": cmd_d_retract,
    "algebra": cmd_algebra,
    "paper-check": cmd_paper_check,
}


def run(config: RunConfig) -> tuple[int, str]:
    """Execute one command; returns the exit status and the text to print."""
    if config.command not in COMMANDS:
        return EXIT_USAGE, f"unknown command {config.command!r}\n"
    try:
        outcome = COMMANDS[config.command](config.args, config.settings)
    except (ParseError, DomainError) as e:
        return EXIT_USAGE, f"error: {e}\n"
    except BudgetExceededError as e:
        return EXIT_BUDGET, f"budget exceeded: {e}\n"
    except FalsifiedError as e:
        logger.error("falsified instance: %s", e)
        return EXIT_NEGATIVE, f"falsified: {e}\n"

    status = EXIT_OK if outcome.positive else EXIT_NEGATIVE
    if config.output == "machine":
        if config.command == "paper-check":
            text = "".join(
                render_machine({"check": name, **fields}) for name, fields in outcome.record.items()
            )
        else:
            text = render_machine({"command": config.command, **outcome.record})
    elif outcome.human is not None:
        text = outcome.human if outcome.human.endswith("\n") else outcome.human + "\n"
    else:
        text = render_human(outcome.record)
    return status, text


# --- argument parsing ----------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="digraphs",
        description="Connectivity equivalences, polymorphisms and free digraphs of finite algebras. "
        "Digraph and algebra arguments are file paths or @name references.",
    )
    parser.add_argument("--format", choices=["human", "machine"], default="human", dest="output")
    parser.add_argument("--budget", type=int, help="node-expansion budget")
    parser.add_argument("--free-budget", type=int, help="free algebra element cap")
    parser.add_argument("--term-budget", type=int, help="term closure cap")
    parser.add_argument("--oracle-cap", type=int, help="largest digraph for the brute-force oracle")
    parser.add_argument("--log-level", help="logging level, overrides DIGRAPHS_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    def digraph_cmd(name: str, summary: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=summary)
        p.add_argument("-i", "--input", required=True, help="digraph file or @name")
        return p

    def algebra_cmd(name: str, summary: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=summary)
        p.add_argument("-a", "--algebra", required=True, help="algebra file or @name")
        return p

    p = digraph_cmd("components", "weak, strong, extreme or radical equivalence")
    p.add_argument("--kind", choices=["weak", "strong", "extreme", "radical"], default="weak")
    p = digraph_cmd("chain", "verify extreme <= radical <= strong <= weak")
    p.add_argument("--oracle", action="store_true", help="compare radical with the brute-force oracle")
    p = digraph_cmd("quotient", "quotient by a partition")
    p.add_argument("--partition", required=True, help="e.g. {{0,1},{2}}")
    p = digraph_cmd("power", "k-th categorical power")
    p.add_argument("-k", type=int, required=True)

    p = sub.add_parser("homs", help="enumerate homomorphisms")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--fix", action="append", help="pin a vertex, u=a; repeatable")
    p.add_argument("--limit", type=int)

    p = digraph_cmd("retract", "find a retraction of the input onto --sub")
    p.add_argument("--sub", required=True)
    p = digraph_cmd("hequiv", "H-equivalence")
    p.add_argument("--h", required=True)
    p = digraph_cmd("path", "shortest path of a given mode")
    p.add_argument("--from", dest="source", type=int, required=True)
    p.add_argument("--to", dest="target", type=int, required=True)
    p.add_argument("--mode", choices=["oriented", "directed", "symmetric"], default="directed")
    digraph_cmd("hmbound", "return-path bound of a reflexive digraph")

    p = algebra_cmd("closure", "subuniverse generated by --seed")
    p.add_argument("--seed", type=int, nargs="+", required=True)
    p = digraph_cmd("compatible", "is the edge relation a subuniverse of the square")
    p.add_argument("-a", "--algebra", required=True)
    p = algebra_cmd("congruence", "is the partition a congruence")
    p.add_argument("--partition", required=True)
    p = algebra_cmd("generate", "digraph generated by an embedded seed")
    p.add_argument("--seed", required=True, help="seed digraph")
    p.add_argument("--embedding", type=int, nargs="+", required=True)
    p = algebra_cmd("free", "digraph freely generated by --seed")
    p.add_argument("--seed", required=True, help="seed digraph")
    p = algebra_cmd("terms", "term operations of a given arity")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--idempotent", action="store_true")
    p.add_argument("--limit", type=int)
    algebra_cmd("algebra", "print an algebra in text format")

    p = digraph_cmd("polymorphisms", "polymorphisms of a digraph")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--idempotent", action="store_true")
    p.add_argument("--limit", type=int)
    p.add_argument("--seed", type=int, help="shuffle value order")
    p = sub.add_parser("major", help="major subsets of an idempotent operation on D")
    p.add_argument("--term", help="term file")
    p.add_argument("--table", help="table values")
    p.add_argument("--arity", type=int)
    p = sub.add_parser("olsak", help="check or search an Olšák term")
    p.add_argument("-a", "--algebra")
    p.add_argument("--term", help="term file")
    p.add_argument("--table", help="6-ary table values")
    p.add_argument("--size", type=int)

    p = algebra_cmd("identity-check", "check a witness file")
    p.add_argument("--witness", required=True)
    p = algebra_cmd("identity-search", "search the identity chain")
    p.add_argument("--endpoint", choices=["y", "z"], default="y")
    p.add_argument("--max-n", type=int)
    digraph_cmd("rho", "rho operator")
    digraph_cmd("collapse", "which equivalences coincide")
    p = algebra_cmd("free-cycle", "free digraph of the reflexive n-cycle")
    p.add_argument("-n", type=int, required=True)
    algebra_cmd("d-retract", "retraction of the free D-digraph onto D")

    p = sub.add_parser("paper-check", help="run the reproducible check suite")
    p.add_argument("--only", action="append", choices=list(CHECKS))
    p.add_argument("--fig3", help="file replacing the stored free 3-cycle digraph over sl2")
    return parser


def config_from_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    namespace = vars(build_parser().parse_args(argv))
    overrides = {
        "budget": namespace.pop("budget"),
        "free_budget": namespace.pop("free_budget"),
        "term_budget": namespace.pop("term_budget"),
        "oracle_cap": namespace.pop("oracle_cap"),
        "log_level": namespace.pop("log_level"),
    }
    if "max_n" in namespace:
        overrides["max_n"] = namespace["max_n"]
    return RunConfig(
        command=namespace.pop("command"),
        output=namespace.pop("output"),
        args=namespace,
        settings=Settings.from_env(**overrides),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    try:
        config = config_from_args(argv)
    except ValueError as e:
        # pydantic rejects non-positive budgets and unknown log levels
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    configure_logging(config.settings)
    status, text = run(config)
    (sys.stdout if status in (EXIT_OK, EXIT_NEGATIVE) else sys.stderr).write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
