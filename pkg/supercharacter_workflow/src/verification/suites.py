"""
Verification Suites
===================

Named groups of exact checks run against one theory (beta, P, q):

- orthogonality: integrality, degree column, degree sum and the inner-product relations.
- oracle: formula table against the finite-field oracle, entry by entry, plus
  class sizes and orbit/fiber agreement.
- stats: orbit measurements of the representative functionals against
  q^dim_L, q^dim_R and q^crs.
- kernels: the kernel family P^A against all normal subposets, and the kernel
  superclasses against the supports inside F_(P^A).
- bijections: q-factorials against inversion sums, Catalan counts, Ferrers/Dyck
  round trips, normality against the dual order ideal test, bdry round trips
  and the lattice-point count families.
"""

import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..', '..')))

from libs.chars import (CharTable, canonical_kernel_tableau, char_table, inner_product,
                        kernel_poset, kernel_subgroup_family, kernel_superclasses)
from libs.errors import ValidationError
from libs.fforacle import (FqMatrix, lemma_orbit_sizes, oracle_char_table, orbit_closure,
                           partition_dual_space)
from libs.polytope import Tableau, UnipotentPolytope, count_lattice_points, enumerate_lattice_points
from libs.posets import (NormalSubposet, all_chain_refining_orders, bdry, bdry_inverse,
                         compositions_of, dyck_of, enumerate_normal_subposets, fat, ferrers_of, is_normal,
                         poset_of_dyck, poset_of_ferrers, strict_interval_poset, support_cells)
from libs.qarith import bell_numbers, catalan, inv_generating_function, q_factorial, rook_count
from libs.stats import crossings, dim_left, dim_right, size
from utils import get_logger

logger = get_logger(__name__)

SUITES = ("orthogonality", "oracle", "stats", "kernels", "bijections")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")


class VerificationSuite:
    """
    Runs the named suite on one polytope and field size.

    Args:
        poly (UnipotentPolytope): The theory under test.
        q (int): Field size (prime for the oracle and stats suites).
        config: A SupercharacterConfig supplying budgets and worker counts.
    """

    def __init__(self, poly: UnipotentPolytope, q: int, config):
        self.poly = poly
        self.q = q
        self.config = config
        self.results: List[CheckResult] = []
        self._table: Optional[CharTable] = None

    @property
    def table(self) -> CharTable:
        if self._table is None:
            self._table = char_table(self.poly, self.q, budget=self.config.lattice_budget,
                                     max_workers=self.config.max_workers)
        return self._table

    def _record(self, name: str, passed: bool, detail: str = "") -> None:
        self.results.append(CheckResult(name, passed, detail if not passed else ""))
        if not passed:
            logger.warning(f"check failed: {name}: {detail}")

    def run(self, suite: str) -> List[CheckResult]:
        runners: Dict[str, Callable[[], None]] = {
            "orthogonality": self.check_orthogonality,
            "oracle": self.check_oracle,
            "stats": self.check_stats,
            "kernels": self.check_kernels,
            "bijections": self.check_bijections,
        }
        if suite not in runners:
            raise ValidationError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
        logger.info("=" * 60)
        logger.info(f"Running suite '{suite}' on {self.poly.describe()} at q={self.q}")
        logger.info("=" * 60)
        runners[suite]()
        failed = sum(1 for r in self.results if not r.passed)
        logger.info(f"Suite '{suite}': {len(self.results) - failed} passed, {failed} failed")
        return self.results

    # --- orthogonality ---

    def check_orthogonality(self) -> None:
        table = self.table
        zero = Tableau.zero(self.poly.cells)
        self._record("integrality", all(v.denominator == 1 for row in table.values for v in row))
        degree_sum = sum(table.degrees)
        self._record("degree_sum", degree_sum == table.group_order,
                     f"sum of degrees {degree_sum} != |G| = {table.group_order}")
        self._record("class_size_sum", sum(table.class_sizes) == table.group_order,
                     f"sum of class sizes {sum(table.class_sizes)} != |G| = {table.group_order}")
        self._record("trivial_class_size", table.class_sizes[table.position(zero)] == 1,
                     f"class of the identity has size {table.class_sizes[table.position(zero)]}")
        for nu in table.index:
            for mu in table.index:
                expected = table.value(nu, zero) if nu == mu else Fraction(0)
                got = inner_product(table, nu, mu)
                if got != expected:
                    self._record("inner_products", False,
                                 f"<chi^{nu.to_text()}, chi^{mu.to_text()}> = {got}, expected {expected}")
                    return
        self._record("inner_products", True)

    # --- oracle ---

    def check_oracle(self) -> None:
        formula = self.table
        oracle = oracle_char_table(self.poly, self.q, budget=self.config.oracle_budget,
                                   max_workers=self.config.max_workers)
        mismatch = None
        for lam, formula_row, oracle_row in zip(formula.index, formula.values, oracle.values):
            for mu, a, b in zip(formula.index, formula_row, oracle_row):
                if a != b:
                    mismatch = f"chi^{lam.to_text()}(u_{mu.to_text()}): formula {a}, oracle {b}"
                    break
            if mismatch:
                break
        self._record(f"table_entries[{len(formula.index)}x{len(formula.index)}]", mismatch is None, mismatch or "")
        size_mismatch = [(mu.to_text(), a, b) for mu, a, b in
                         zip(formula.index, formula.class_sizes, oracle.class_sizes) if a != b]
        self._record("class_sizes", not size_mismatch,
                     f"superclass {size_mismatch[0][0]}: formula {size_mismatch[0][1]}, oracle {size_mismatch[0][2]}"
                     if size_mismatch else "")
        space = self.q ** len(support_cells(self.poly.beta, self.poly.poset))
        if space <= 2 ** 12:
            self.check_orbit_fibers()

    def check_orbit_fibers(self) -> None:
        fibers = partition_dual_space(self.poly, self.q, budget=self.config.oracle_budget)
        for lam, arrays in fibers.items():
            orbit = orbit_closure(FqMatrix(self.q, arrays[0]), "two-sided", self.poly.beta, self.poly.poset,
                                  self.q, group="parabolic", budget=self.config.orbit_budget)
            fiber = {FqMatrix(self.q, array) for array in arrays}
            if orbit != fiber:
                self._record("orbit_fiber_agreement", False,
                             f"fiber of {lam.to_text()} has {len(fiber)} functionals, orbit has {len(orbit)}")
                return
        self._record("orbit_fiber_agreement", True)

    # --- stats ---

    def check_stats(self) -> None:
        beta, poset, q = self.poly.beta, self.poly.poset, self.q
        for lam in enumerate_lattice_points(self.poly, budget=self.config.lattice_budget):
            measured = lemma_orbit_sizes(self.poly, lam, q, budget=self.config.orbit_budget)
            expected = {
                "rank": size(lam),
                "left": q ** dim_left(lam, beta, poset),
                "right": q ** dim_right(lam, beta, poset),
                "intersection": q ** crossings(lam, beta, poset),
            }
            for key, value in expected.items():
                if measured[key] != value:
                    self._record(f"orbit_{key}", False,
                                 f"lambda={lam.to_text()}: measured {measured[key]}, formula {value}")
                    return
            if poset.is_chain() and dim_left(lam, beta, poset) != dim_right(lam, beta, poset):
                self._record("dim_symmetry", False, f"lambda={lam.to_text()}: dim_L != dim_R on the chain")
                return
        self._record("orbit_sizes", True)

    # --- kernels ---

    def check_kernels(self) -> None:
        beta = self.poly.beta
        family = kernel_subgroup_family(beta, cap=self.config.kernel_cap)
        expected = set(enumerate_normal_subposets(beta.length, cap=self.config.poset_cap))
        self._record("kernel_family", family == expected,
                     f"family has {len(family)} posets, expected {len(expected)}")
        chain_poly = self.poly.with_chain()
        table = self.table if self.poly.poset.is_chain() else char_table(
            chain_poly, self.q, budget=self.config.lattice_budget, max_workers=self.config.max_workers)
        for poset in sorted(expected, key=lambda p: p.row_lengths()):
            generator = [canonical_kernel_tableau(beta, poset)]
            kernel = kernel_poset(beta, generator)
            found = set(kernel_superclasses(chain_poly, generator, self.q, table=table))
            inside = {mu for mu in table.index if set(mu.nonzero()) <= set(kernel.cells)}
            matches = found == inside if self.q >= 3 else inside <= found
            if kernel != poset or not matches:
                self._record("kernel_superclasses", False,
                             f"P={poset.to_text()}: P^A={kernel.to_text()}, "
                             f"{len(found)} kernel superclasses vs {len(inside)} supported in F_(P^A)")
                return
        self._record("kernel_superclasses", True)

    # --- bijections ---

    def check_bijections(self) -> None:
        for n in range(0, min(self.config.inv_cap, 6) + 1):
            inversion_sum = inv_generating_function(n, self.q, cap=self.config.inv_cap)
            if inversion_sum != q_factorial(n, self.q):
                self._record("q_factorial_inversions", False,
                             f"n={n}: inversion sum {inversion_sum}, [n]! = {q_factorial(n, self.q)}")
                return
        self._record("q_factorial_inversions", True)

        length = self.poly.beta.length
        for ell in range(0, max(length, 1) + 1):
            posets = enumerate_normal_subposets(ell, cap=self.config.poset_cap)
            if len(posets) != catalan(ell):
                self._record("catalan_count", False, f"l={ell}: {len(posets)} posets, Catalan {catalan(ell)}")
                return
            for poset in posets:
                if poset_of_ferrers(ferrers_of(poset), ell) != poset or poset_of_dyck(dyck_of(poset)) != poset:
                    self._record("round_trips", False, f"l={ell}: {poset.to_text()} does not round-trip")
                    return
        self._record("catalan_and_round_trips", True)

        for ell in range(0, min(length, 5) + 1):
            chain_intervals = strict_interval_poset(ell, NormalSubposet.chain(ell).pairs())
            for order in all_chain_refining_orders(ell):
                if is_normal(ell, order) != chain_intervals.is_upward_closed(order):
                    self._record("normal_iff_dual_order_ideal", False, f"l={ell}: relation {sorted(order)}")
                    return
        self._record("normal_iff_dual_order_ideal", True)

        beta = self.poly.beta
        self._record("bdry_round_trip", bdry(beta.size, bdry_inverse(beta)) == beta,
                     f"bdry(bdry^-1({beta.parts})) differs")

        for n in range(1, min(beta.size, 6) + 1):
            for composition in compositions_of(n):
                for poset in enumerate_normal_subposets(composition.length):
                    if not is_normal(n, fat(composition, poset)):
                        self._record("fat_preserves_normality", False,
                                     f"beta={composition.parts} P={poset.to_text()}")
                        return
        self._record("fat_preserves_normality", True)
        self._check_counting_families()

    def _check_counting_families(self) -> None:
        bells = bell_numbers(7)
        for n in range(1, 6):
            count = count_lattice_points(UnipotentPolytope.chain((1,) * n))
            if count != bells[n]:
                self._record("bell_counts", False, f"N={n}: {count} lattice points, Bell {bells[n]}")
                return
        self._record("bell_counts", True)
        for m in range(1, 4):
            star = UnipotentPolytope.build((1,) * m + (m,), [(i, m + 1) for i in range(1, m + 1)])
            count = count_lattice_points(star)
            if count != 2 ** m:
                self._record("hypercube_counts", False, f"m={m}: {count} lattice points, expected {2 ** m}")
                return
        self._record("hypercube_counts", True)
        for m in range(1, 4):
            pairs = [(i, j) for i in range(1, m + 1) for j in range(m + 1, 2 * m + 1)]
            count = count_lattice_points(UnipotentPolytope.build((1,) * (2 * m), pairs))
            if count != rook_count(m):
                self._record("rook_counts", False, f"m={m}: {count} lattice points, expected {rook_count(m)}")
                return
        self._record("rook_counts", True)
