"""
Supercharacter Formulas
=======================

Exact closed formulas for the P_beta-supercharacter theory of UT_(beta,P):

1.  The two-block line characters and the rank counts they reduce to.
2.  The full product formula, degrees (dual orbit sizes) and superclass sizes.
3.  Character tables, the canonical inner product and the B_N specialization.
4.  Superclass representatives e_mu and the kernel posets P^A.

All values are exact; every character value is checked to be an integer.
"""

import os
import sys
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import numpy as np

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from libs.errors import EnumerationLimitError, ValidationError, VerificationError
from libs.polytope import (DEFAULT_LATTICE_BUDGET, Tableau, UnipotentPolytope,
                           enumerate_lattice_points, require_member)
from libs.posets import (Composition, NormalSubposet, enumerate_normal_subposets,
                         strict_interval_poset)
from libs.qarith import _gl_order, _q_binomial, as_integer
from libs.stats import (column_reduction, crossings, dim_left, dim_right, extend, intersect,
                        loc, nestings, row_reduction, size)
from utils import get_logger

logger = get_logger(__name__)

DEFAULT_KERNEL_CAP = 6


# --- Line characters ---

def _rank_count(m: int, n: int, l: int, q: int) -> int:
    if m < 0 or n < 0 or l < 0 or l > min(m, n):
        return 0
    return _gl_order(l, q) * _q_binomial(m, l, q) * _q_binomial(n, l, q)


def rank_count(m: int, n: int, l: int, q: int) -> Fraction:
    """Number of m x n matrices of rank l over F_q; zero outside 0 <= l <= min(m, n)."""
    return Fraction(_rank_count(m, n, l, q))


def _line_char(m: int, n: int, l: int, j: int, q: int) -> int:
    if j < 0 or l < 0 or j > min(m, n) or l > min(m, n):
        return 0
    if j == 0:
        return _rank_count(m, n, l, q)
    total = 0
    for a in range(l + 1):
        b = l - a
        term = _q_binomial(j, a, q) * _rank_count(m - j, n - j, b, q)
        if term:
            total += (-1) ** a * q ** (b * j + a * (a - 1) // 2) * term
    return total


def line_char(m: int, n: int, l: int, j: int, q: int) -> Fraction:
    """
    chi^(l)_(m,n) evaluated at u_(j).

    Sum over weak compositions (a, b) of l of
    (-1)^a q^(bj + C(a,2)) [j choose a]_q * #{(m-j) x (n-j) matrices of rank b}.
    """
    return Fraction(_line_char(m, n, l, j, q))


# --- Full formula ---

def _power(q: int, exponent: int) -> Fraction:
    return Fraction(q) ** exponent


def _char_value(poly: UnipotentPolytope, lam: Tableau, mu: Tableau, q: int) -> Fraction:
    beta, poset = poly.beta, poly.poset
    product = 1
    for j, l in poly.cells:
        m, n = loc(lam, mu, beta, poset, j, l)
        product *= _line_char(m, n, lam[(j, l)], mu[(j, l)], q)
        if not product:
            return Fraction(0)
    exponent = (dim_left(lam, beta, poset) + dim_right(lam, beta, poset)
                - nestings(lam, mu, poset) - crossings(lam, beta, poset))
    value = _power(q, exponent) * product
    as_integer(value, f"chi^{lam.to_text()}(u_{mu.to_text()}) on {poly.describe()} at q={q}")
    return value


def char_value(poly: UnipotentPolytope, lam: Tableau, mu: Tableau, q: int) -> Fraction:
    """
    chi^lambda(u_mu) = q^(dim_L + dim_R) / q^(nst + crs) * prod over cells (j,l) of
    line_char(loc(j,l), lambda_jl, mu_jl).

    Raises:
        ValidationError: If lambda or mu is not a lattice point of ``poly``.
        IntegralityError: If the value is not an integer.
    """
    require_member(poly, lam, "lambda")
    require_member(poly, mu, "mu")
    return _char_value(poly, lam, mu, q)


def _orbit_product(poly: UnipotentPolytope, nu: Tableau, q: int) -> Fraction:
    beta, poset = poly.beta, poly.poset
    product = 1
    for j, l in poly.cells:
        value = nu[(j, l)]
        if not value:
            continue
        product *= (_gl_order(value, q)
                    * _q_binomial(beta[j] - row_reduction(nu, j, l), value, q)
                    * _q_binomial(beta[l] - column_reduction(nu, j, l), value, q))
    exponent = dim_left(nu, beta, poset) + dim_right(nu, beta, poset) - crossings(nu, beta, poset)
    return _power(q, exponent) * product


def degree(poly: UnipotentPolytope, lam: Tableau, q: int) -> Fraction:
    """chi^lambda(1), the size of the two-sided P_beta orbit of e*_lambda."""
    require_member(poly, lam, "lambda")
    return _orbit_product(poly, lam, q)


supercharacter_orbit_size = degree


def _superclass_count(poly: UnipotentPolytope, mu: Tableau, q: int) -> int:
    # rows of block i are filled after every later block; only corner ranks are fixed
    beta = poly.beta
    entries = mu.nonzero()
    total = 1
    for i in range(1, beta.length + 1):
        below = sum(v for (j, _), v in entries.items() if j > i)
        total *= q ** (beta[i] * below)
        used = 0
        for row, b in poly.cells:
            if row != i:
                continue
            free = beta[b] - sum(v for (j, k), v in entries.items() if k == b and j > i)
            total *= q ** (used * free) * _rank_count(beta[i] - used, free, mu[(i, b)], q)
            used += mu[(i, b)]
    return total


def superclass_size(poly: UnipotentPolytope, mu: Tableau, q: int) -> Fraction:
    """
    Number of x in ut_(beta,P) with the corner ranks of e_mu.

    Block rows are built bottom-up: row block i contributes q^(beta_i * |mu below i|)
    and, for each cell (i, b) of F_P from left to right,
    q^(e * f) * #{(beta_i - e) x f matrices of rank mu_ib}, where e is the part of
    row i of mu left of b and f = beta_b - (column b of mu below row i).
    """
    require_member(poly, mu, "mu")
    return Fraction(_superclass_count(poly, mu, q))


# --- Character tables ---

@dataclass(frozen=True)
class CharTable:
    """Square table of chi^lambda(u_mu), rows and columns in lattice enumeration order."""

    polytope: UnipotentPolytope
    q: int
    index: Tuple[Tableau, ...]
    values: Tuple[Tuple[Fraction, ...], ...]
    class_sizes: Tuple[Fraction, ...]

    def position(self, tableau: Tableau) -> int:
        try:
            return self.index.index(tableau)
        except ValueError:
            raise ValidationError(f"tableau {tableau.to_text()} is not in the table index") from None

    def value(self, lam: Tableau, mu: Tableau) -> Fraction:
        return self.values[self.position(lam)][self.position(mu)]

    @property
    def degrees(self) -> Tuple[Fraction, ...]:
        zero_column = self.position(Tableau.zero(self.polytope.cells))
        return tuple(row[zero_column] for row in self.values)

    @property
    def group_order(self) -> int:
        return self.q ** self.polytope.group_exponent

    def as_integers(self) -> List[List[int]]:
        return [[as_integer(v) for v in row] for row in self.values]


def char_table(poly: UnipotentPolytope, q: int, budget: int = DEFAULT_LATTICE_BUDGET,
               max_workers: int = 1) -> CharTable:
    """
    Every chi^lambda(u_mu) with class sizes, rows computed in parallel.

    Args:
        poly: The unipotent polytope.
        q: Field size.
        budget: Lattice enumeration budget.
        max_workers: Threads used for the rows.

    Returns:
        CharTable: The table; row order does not depend on ``max_workers``.
    """
    index = tuple(enumerate_lattice_points(poly, budget=budget))
    logger.info(f"Building character table for {poly.describe()} at q={q}: {len(index)} x {len(index)}")

    def build_row(lam: Tableau) -> Tuple[Fraction, ...]:
        return tuple(_char_value(poly, lam, mu, q) for mu in index)

    if max_workers > 1 and len(index) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            rows = tuple(executor.map(build_row, index))
    else:
        rows = tuple(build_row(lam) for lam in index)
    sizes = tuple(Fraction(_superclass_count(poly, mu, q)) for mu in index)

    table = CharTable(poly, q, index, rows, sizes)
    expected = table.group_order
    if sum(table.degrees) != expected:
        raise VerificationError(
            f"degree sum {sum(table.degrees)} != q^{poly.group_exponent} = {expected} for {poly.describe()}",
            counterexample=poly.describe())
    return table


def inner_product(table: CharTable, nu: Tableau, mu: Tableau) -> Fraction:
    """(1/|G|) * sum over superclasses of size * chi^nu * chi^mu (values are rational)."""
    row_nu = table.values[table.position(nu)]
    row_mu = table.values[table.position(mu)]
    total = sum((s * a * b for s, a, b in zip(table.class_sizes, row_nu, row_mu)), Fraction(0))
    return total / table.group_order


# --- B_N specialization ---

def bn_char_value(n: int, poset: NormalSubposet, lam: Tableau, mu: Tableau, q: int) -> Fraction:
    """
    Closed formula for beta = (1^n).

    Zero if lambda_ik * mu_ij or lambda_ik * mu_jk is nonzero for some i < j < k;
    otherwise q^(dim_L + dim_R) (q-1)^|lambda| / (q^crs q^nst (1-q)^|lambda cap mu|).
    """
    beta = Composition((1,) * n)
    poly = UnipotentPolytope(beta, poset)
    require_member(poly, lam, "lambda")
    require_member(poly, mu, "mu")
    if any(v > 1 for v in lam.values + mu.values):
        raise ValidationError("bn_char_value needs 0/1 tableaux")
    for (i, k) in lam.nonzero():
        for j in range(i + 1, k):
            if mu[(i, j)] or mu[(j, k)]:
                return Fraction(0)
    exponent = (dim_left(lam, beta, poset) + dim_right(lam, beta, poset)
                - crossings(lam, beta, poset) - nestings(lam, mu, poset))
    value = (_power(q, exponent) * Fraction(q - 1) ** size(lam)
             / Fraction(1 - q) ** size(intersect(lam, mu)))
    as_integer(value, f"B_N value chi^{lam.to_text()}(u_{mu.to_text()})")
    return value


def normalized_restriction_check(beta: Composition, poset: NormalSubposet, lam: Tableau,
                                 mu: Tableau, q: int) -> bool:
    """chi^lambda / chi^lambda(1) on UT_(beta,P) against the normalized restriction of chi^Ext(lambda)."""
    small = UnipotentPolytope(beta, poset)
    full = small.with_chain()
    ext_lam = extend(lam, full.poset)
    ext_mu = extend(mu, full.poset)
    left = char_value(small, lam, mu, q) * degree(full, ext_lam, q)
    right = char_value(full, ext_lam, ext_mu, q) * degree(small, lam, q)
    return left == right


# --- Representatives ---

def superclass_representative(poly: UnipotentPolytope, mu: Tableau) -> np.ndarray:
    """
    The 0/1 matrix e_mu (N x N, int64).

    Inside row-block i the rows for target k end at end(Q_i) - sum_{i<j<k} mu_ij;
    inside column-block k the columns for source i start at
    start(Q_k) + sum_{i<j<k} mu_jk; each mu_ik x mu_ik block holds a reversed identity.
    """
    require_member(poly, mu, "mu")
    beta = poly.beta
    pattern = np.zeros((beta.size, beta.size), dtype=np.int64)
    for (i, k), value in mu.nonzero().items():
        row_end = beta.block_end(i) - sum(mu[(i, j)] for j in range(i + 1, k))
        col_start = beta.block_start(k) + sum(mu[(j, k)] for j in range(i + 1, k))
        for t in range(value):
            pattern[row_end - value + t, col_start - 1 + value - 1 - t] = 1
    return pattern


def line_representative(m: int, n: int, j: int) -> np.ndarray:
    """(m+n) x (m+n) pattern with w_j in rows m-j+1..m, columns m+1..m+j."""
    if j < 0 or j > min(m, n):
        raise ValidationError(f"line representative needs 0 <= j <= min(m, n), got j={j} for ({m},{n})")
    pattern = np.zeros((m + n, m + n), dtype=np.int64)
    for t in range(j):
        pattern[m - j + t, m + j - 1 - t] = 1
    return pattern


# --- Kernels ---

def kernel_poset(beta: Composition, tableaux: Iterable[Tableau]) -> NormalSubposet:
    """P^A: j < k iff lambda_il = 0 for every i <= j < k <= l and every lambda in A."""
    chain = NormalSubposet.chain(beta.length)
    family = list(tableaux)
    for lam in family:
        if lam.cells != chain.cells:
            raise ValidationError(f"kernel tableaux must live on the staircase of length {beta.length}")
    support = {cell for lam in family for cell in lam.nonzero()}
    pairs = [(j, k) for j, k in chain.cells
             if not any(i <= j and k <= l for i, l in support)]
    return NormalSubposet.from_pairs(beta.length, pairs)


def canonical_kernel_tableau(beta: Composition, poset: NormalSubposet) -> Tableau:
    """Indicator of the maximal elements of sInt(chain) minus sInt(P)."""
    chain = NormalSubposet.chain(beta.length)
    intervals = strict_interval_poset(chain.size, chain.pairs())
    missing = set(chain.cells) - set(poset.cells)
    maximal = intervals.maximal_elements(missing)
    return Tableau.from_map(chain.cells, {cell: 1 for cell in maximal})


def kernel_subgroup_family(beta: Composition, cap: int = DEFAULT_KERNEL_CAP) -> Set[NormalSubposet]:
    """
    {P^A : A a set of lattice points}, closed from the canonical singletons A_P.

    P^(A union B) is the intersection of P^A and P^B, so closing the singleton
    results under unions of their A's reaches every attainable P^A.
    """
    if beta.length > cap:
        raise EnumerationLimitError(
            f"kernel_subgroup_family: length {beta.length} exceeds cap {cap}", limit=cap, required=beta.length)
    seeds: Dict[NormalSubposet, FrozenSet[Tableau]] = {
        NormalSubposet.chain(beta.length): frozenset()}
    for poset in enumerate_normal_subposets(beta.length):
        generator = frozenset([canonical_kernel_tableau(beta, poset)])
        seeds.setdefault(kernel_poset(beta, generator), generator)

    frontier = list(seeds.items())
    while frontier:
        new_items = []
        for (_, a), (_, b) in itertools.product(frontier, list(seeds.items())):
            union = a | b
            result = kernel_poset(beta, union)
            if result not in seeds:
                seeds[result] = union
                new_items.append((result, union))
        frontier = new_items
    logger.debug(f"kernel family for beta={beta.parts}: {len(seeds)} posets")
    return set(seeds)


def kernel_superclasses(poly: UnipotentPolytope, tableaux: Iterable[Tableau], q: int,
                        table: Optional[CharTable] = None) -> List[Tableau]:
    """
    Superclass labels mu with chi^lambda(u_mu) = chi^lambda(1) for every lambda in A.

    For q >= 3 these are exactly the mu supported in F_(P^A). At q = 2 a nontrivial
    line factor can take the value -1 = q - 1, so the kernel may be larger.
    """
    if not poly.poset.is_chain():
        raise ValidationError("kernel_superclasses works on the full chain")
    table = table or char_table(poly, q)
    family = list(tableaux)
    result = []
    for mu in table.index:
        if all(table.value(lam, mu) == table.value(lam, Tableau.zero(poly.cells)) for lam in family):
            result.append(mu)
    return result
