"""
Supercharacter Workflow Runner

Batch entry point: read a theory specification, then list lattice points,
build character tables, evaluate single values, count dilations, list normal
subposets or run a verification suite.

Usage:
    python run_supercharacters.py enum --spec specs/e1_polytope.json
    python run_supercharacters.py table --beta 2,1 --poset chain --format json
    python run_supercharacters.py value --beta 1,1 --poset chain "1,2:1" "1,2:1"
    python run_supercharacters.py verify --suite oracle --beta 1,1,1 --poset chain
    python run_supercharacters.py posets 4
    python run_supercharacters.py count --spec specs/e1_polytope.json --dilate 3

Results go to stdout; logs go to stderr and the log files.
Exit codes: 0 success, 1 validation error, 2 budget exceeded, 3 verification failure.
"""

import os
import sys
import argparse
from dataclasses import replace
from typing import List, Optional

# Setup paths
current_dir = os.path.dirname(os.path.abspath(__file__))
parent_dir = os.path.dirname(current_dir)  # Repo root

# Add paths for imports
sys.path.append(parent_dir)  # For libs, utils
sys.path.append(current_dir)  # For configs, src

from utils import get_logger, setup_logging
from libs.chars import char_value, char_table
from libs.errors import EnumerationLimitError, ValidationError, VerificationError
from libs.polytope import count_lattice_points, enumerate_lattice_points, parse_tableau
from libs.posets import dyck_of, enumerate_normal_subposets
from libs.qarith import as_integer
from libs.table_export import table_to_csv, table_to_json
from configs.config import SupercharacterConfig, default_config
from configs.theory_spec import TheorySpec
from src.verification.suites import SUITES, VerificationSuite

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BUDGET = 2
EXIT_VERIFICATION = 3


def build_parser() -> argparse.ArgumentParser:
    theory = argparse.ArgumentParser(add_help=False)
    theory.add_argument("--spec", help="Path to a JSON theory spec (q, beta, poset, close, budgets)")
    theory.add_argument("--q", type=int, help="Field size (prime for the oracle suites)")
    theory.add_argument("--beta", help="Composition, e.g. 4,1,2")
    theory.add_argument("--poset", help="Relations '1<3,2<3', or 'chain' / 'empty'")
    theory.add_argument("--close", action="store_true", help="Take the transitive closure of --poset first")
    theory.add_argument("--budget", type=int, help="Override the lattice and oracle budgets")

    parser = argparse.ArgumentParser(description="Supercharacter theories of unipotent polytopes")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("enum", parents=[theory], help="List the lattice points of the polytope")

    table = commands.add_parser("table", parents=[theory], help="Full character table")
    table.add_argument("--format", choices=("csv", "json"), default="csv")
    table.add_argument("--output", help="Also write the table to this file (relative to the output dir)")

    value = commands.add_parser("value", parents=[theory], help="One character value chi^lambda(u_mu)")
    value.add_argument("lam", metavar="LAMBDA", help="Tableau text 'i,j:v;...' or 0")
    value.add_argument("mu", metavar="MU", help="Tableau text 'i,j:v;...' or 0")

    verify = commands.add_parser("verify", parents=[theory], help="Run a verification suite")
    verify.add_argument("--suite", choices=SUITES, required=True)

    posets = commands.add_parser("posets", help="List the normal subposets of a chain")
    posets.add_argument("length", type=int, help="Chain length")

    count = commands.add_parser("count", parents=[theory], help="Count lattice points of the dilated polytope")
    count.add_argument("--dilate", type=int, default=1, help="Dilation factor t")

    return parser


def load_theory(args: argparse.Namespace, config: SupercharacterConfig) -> TheorySpec:
    spec = TheorySpec.from_json(args.spec) if args.spec else TheorySpec(q=config.default_q)
    spec = spec.with_overrides(q=args.q, beta=args.beta, poset=args.poset, close=args.close)
    spec.validate()
    config.lattice_budget = spec.budget("lattice", config.lattice_budget)
    config.oracle_budget = spec.budget("oracle", config.oracle_budget)
    config.orbit_budget = spec.budget("orbit", config.orbit_budget)
    if args.budget is not None:
        config.lattice_budget = args.budget
        config.oracle_budget = args.budget
    return spec


def cmd_enum(spec: TheorySpec, config: SupercharacterConfig) -> int:
    points = enumerate_lattice_points(spec.polytope(), budget=config.lattice_budget)
    print(len(points))
    for point in points:
        print(point.to_text())
    return EXIT_OK


def cmd_table(spec: TheorySpec, config: SupercharacterConfig, fmt: str, output: Optional[str]) -> int:
    table = char_table(spec.polytope(), spec.q, budget=config.lattice_budget, max_workers=config.max_workers)
    render = table_to_json if fmt == "json" else table_to_csv
    # relative paths land under output_dir
    output_path = os.path.join(config.output_dir, output) if output else None
    sys.stdout.write(render(table, output_path))
    return EXIT_OK


def cmd_value(spec: TheorySpec, lam_text: str, mu_text: str) -> int:
    poly = spec.polytope()
    lam = parse_tableau(poly, lam_text)
    mu = parse_tableau(poly, mu_text)
    print(as_integer(char_value(poly, lam, mu, spec.q), "character value"))
    return EXIT_OK


def cmd_verify(spec: TheorySpec, config: SupercharacterConfig, suite: str) -> int:
    results = VerificationSuite(spec.polytope(), spec.q, config).run(suite)
    for result in results:
        print(result.line())
    failures = [result for result in results if not result.passed]
    if failures:
        print(f"first counterexample: {failures[0].detail}")
        return EXIT_VERIFICATION
    return EXIT_OK


def cmd_posets(length: int, config: SupercharacterConfig) -> int:
    for poset in enumerate_normal_subposets(length, cap=config.poset_cap):
        rows = ",".join(str(r) for r in poset.row_lengths())
        print(f"{poset.to_text()}\trows=({rows})\tdyck={dyck_of(poset)}")
    return EXIT_OK


def cmd_count(spec: TheorySpec, config: SupercharacterConfig, dilation: int) -> int:
    if dilation < 1:
        raise ValidationError(f"--dilate must be >= 1, got {dilation}")
    count = count_lattice_points(spec.polytope(), dilation=dilation, budget=config.lattice_budget)
    print(as_integer(count, "lattice point count"))
    return EXIT_OK


def main(argv: Optional[List[str]] = None, config: Optional[SupercharacterConfig] = None) -> int:
    args = build_parser().parse_args(argv)
    config = config or replace(default_config)
    setup_logging(config.log_phase)
    logger.debug(f"Configuration: {config.get_summary()}")

    try:
        if args.command == "posets":
            return cmd_posets(args.length, config)
        spec = load_theory(args, config)
        logger.info(f"Command '{args.command}' on beta={spec.beta} poset={spec.poset} q={spec.q}")
        if args.command == "enum":
            return cmd_enum(spec, config)
        if args.command == "table":
            return cmd_table(spec, config, args.format, args.output)
        if args.command == "value":
            return cmd_value(spec, args.lam, args.mu)
        if args.command == "verify":
            return cmd_verify(spec, config, args.suite)
        return cmd_count(spec, config, args.dilate)
    except ValidationError as e:
        logger.error(f"Validation error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except EnumerationLimitError as e:
        logger.error(f"Budget exceeded: {e}")
        print(f"budget exceeded: {e} (limit {e.limit}, required {e.required})", file=sys.stderr)
        return EXIT_BUDGET
    except VerificationError as e:
        logger.error(f"Verification failed: {e}")
        print(f"verification failed: {e}", file=sys.stderr)
        if e.counterexample:
            print(f"first counterexample: {e.counterexample}")
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
