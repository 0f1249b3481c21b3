"""
Finite-Field Oracle
===================

Brute-force counterpart of the closed formulas, over a prime field F_p:

1.  Dense matrices mod p and their rank by Gaussian elimination.
2.  Corner-rank labels of algebra elements x (superclasses) and of functionals Y
    (supercharacters); labels are constant on two-sided P_beta orbits.
3.  Exhaustive scans of the support space, partitioned into label fibers.
4.  Character sums over the fibers in Z[zeta_p], and orbit closures under
    generator sets for measuring orbit sizes.

A functional y on ut_(beta,P) is stored as the matrix Y of its values on the
support cells, y(x) = sum Y_ij x_ij. The left action is (a.y)(x) = y(xa),
i.e. Y -> Y a^T, and the right action is (y.b)(x) = y(bx), i.e. Y -> b^T Y,
truncated to the support after each step.
"""

import os
import sys
import itertools
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from libs.chars import CharTable, superclass_representative
from libs.errors import EnumerationLimitError, ValidationError, VerificationError
from libs.polytope import Tableau, UnipotentPolytope, enumerate_lattice_points
from libs.posets import Cell, Composition, NormalSubposet, support_cells
from libs.qarith import CyclotomicInt
from utils import get_logger

logger = get_logger(__name__)

DEFAULT_ORACLE_BUDGET = 2 ** 24
DEFAULT_ORBIT_BUDGET = 2 ** 16


def _require_prime(q: int) -> None:
    if q < 2 or any(q % d == 0 for d in range(2, math.isqrt(q) + 1)):
        raise ValidationError(f"the finite-field oracle needs a prime q, got {q}")


@dataclass(frozen=True)
class FqElem:
    """An element of F_p."""

    prime: int
    residue: int

    def __post_init__(self):
        _require_prime(self.prime)
        object.__setattr__(self, "residue", self.residue % self.prime)

    def _other(self, other) -> int:
        if isinstance(other, FqElem):
            if other.prime != self.prime:
                raise ValidationError(f"cannot mix F_{self.prime} and F_{other.prime}")
            return other.residue
        return int(other)

    def __add__(self, other):
        return FqElem(self.prime, self.residue + self._other(other))

    def __sub__(self, other):
        return FqElem(self.prime, self.residue - self._other(other))

    def __mul__(self, other):
        return FqElem(self.prime, self.residue * self._other(other))

    def __neg__(self):
        return FqElem(self.prime, -self.residue)

    def inverse(self) -> "FqElem":
        if self.residue == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.prime}")
        return FqElem(self.prime, pow(self.residue, self.prime - 2, self.prime))

    def __truediv__(self, other):
        return self * FqElem(self.prime, self._other(other)).inverse()

    def __int__(self):
        return self.residue


def row_echelon(matrix: np.ndarray, prime: int) -> Tuple[np.ndarray, List[int]]:
    """
    Row-reduce a matrix over F_p.

    Returns:
        (R, pivot_cols): echelon form (int64) and the pivot columns; rank = len(pivot_cols).
    """
    R = np.array(matrix, dtype=np.int64) % prime
    rows, cols = R.shape
    pivot_cols: List[int] = []
    pivot_row = 0
    for col in range(cols):
        if pivot_row == rows:
            break
        candidates = np.nonzero(R[pivot_row:, col])[0]
        if candidates.size == 0:
            continue
        found = pivot_row + int(candidates[0])
        if found != pivot_row:
            R[[pivot_row, found]] = R[[found, pivot_row]]
        inverse = pow(int(R[pivot_row, col]), prime - 2, prime)
        R[pivot_row] = (R[pivot_row] * inverse) % prime
        below = R[pivot_row + 1:, col].copy()
        if below.any():
            R[pivot_row + 1:] = (R[pivot_row + 1:] - np.outer(below, R[pivot_row])) % prime
        pivot_cols.append(col)
        pivot_row += 1
    return R, pivot_cols


def rank_mod(matrix: np.ndarray, prime: int) -> int:
    if matrix.size == 0:
        return 0
    _, pivots = row_echelon(matrix, prime)
    return len(pivots)


class FqMatrix:
    """Dense matrix over F_p; cells are addressed 1-indexed as (row, col)."""

    __slots__ = ("prime", "data")

    def __init__(self, prime: int, data):
        _require_prime(prime)
        array = np.array(data, dtype=np.int64) % prime
        if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
            raise ValidationError(f"FqMatrix needs positive dimensions, got shape {array.shape}")
        self.prime = prime
        self.data = array

    @classmethod
    def zeros(cls, prime: int, rows: int, cols: Optional[int] = None) -> "FqMatrix":
        return cls(prime, np.zeros((rows, cols if cols is not None else rows), dtype=np.int64))

    @classmethod
    def identity(cls, prime: int, n: int) -> "FqMatrix":
        return cls(prime, np.eye(n, dtype=np.int64))

    @classmethod
    def from_entries(cls, prime: int, n: int, entries: Dict[Cell, int]) -> "FqMatrix":
        array = np.zeros((n, n), dtype=np.int64)
        for (r, c), value in entries.items():
            array[r - 1, c - 1] = value
        return cls(prime, array)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def entry(self, row: int, col: int) -> FqElem:
        return FqElem(self.prime, int(self.data[row - 1, col - 1]))

    def nonzero_cells(self) -> List[Cell]:
        return [(int(r) + 1, int(c) + 1) for r, c in zip(*np.nonzero(self.data))]

    def rank(self) -> int:
        return rank_mod(self.data, self.prime)

    def transpose(self) -> "FqMatrix":
        return FqMatrix(self.prime, self.data.T)

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        if other.prime != self.prime:
            raise ValidationError(f"cannot multiply over F_{self.prime} and F_{other.prime}")
        return FqMatrix(self.prime, self.data @ other.data)

    def __add__(self, other: "FqMatrix") -> "FqMatrix":
        return FqMatrix(self.prime, self.data + other.data)

    def key(self) -> bytes:
        return self.data.tobytes()

    def __eq__(self, other):
        if not isinstance(other, FqMatrix):
            return NotImplemented
        return (self.prime == other.prime and self.data.shape == other.data.shape
                and bool(np.array_equal(self.data, other.data)))

    def __hash__(self):
        return hash((self.prime, self.data.shape, self.key()))

    def __repr__(self):
        return f"FqMatrix(p={self.prime}, {self.data.tolist()})"


def rank(matrix: FqMatrix) -> int:
    """Rank over F_q."""
    return matrix.rank()


# --- Corner-rank labels ---

def _support_mask(beta: Composition, poset: NormalSubposet) -> np.ndarray:
    mask = np.zeros((beta.size, beta.size), dtype=bool)
    for r, c in support_cells(beta, poset):
        mask[r - 1, c - 1] = True
    return mask


def _check_supported(array: np.ndarray, mask: np.ndarray, what: str) -> None:
    if array.shape != mask.shape:
        raise ValidationError(f"{what} has shape {array.shape}, expected {mask.shape}")
    stray = np.argwhere((array != 0) & ~mask)
    if stray.size:
        r, c = (int(v) + 1 for v in stray[0])
        raise ValidationError(f"{what} has a nonzero entry at ({r},{c}) outside the allowed support")


def _primal_label(array: np.ndarray, beta: Composition, poset: NormalSubposet, prime: int) -> Tableau:
    length = beta.length
    cache: Dict[Tuple[int, int], int] = {}

    def corner(a: int, b: int) -> int:
        # rows from block a down, columns up to block b
        if a > length or b < 1:
            return 0
        if (a, b) not in cache:
            cache[(a, b)] = rank_mod(array[beta.block_start(a) - 1:, :beta.block_end(b)], prime)
        return cache[(a, b)]

    values = []
    for a, b in poset.cells:
        values.append(corner(a, b) - corner(a + 1, b) - corner(a, b - 1) + corner(a + 1, b - 1))
    return _as_label(poset, values)


def _dual_label(array: np.ndarray, beta: Composition, poset: NormalSubposet, prime: int) -> Tableau:
    length = beta.length
    cache: Dict[Tuple[int, int], int] = {}

    def corner(a: int, b: int) -> int:
        # rows up to block a, columns from block b on
        if a < 1 or b > length:
            return 0
        if (a, b) not in cache:
            cache[(a, b)] = rank_mod(array[:beta.block_end(a), beta.block_start(b) - 1:], prime)
        return cache[(a, b)]

    values = []
    for a, b in poset.cells:
        values.append(corner(a, b) - corner(a - 1, b) - corner(a, b + 1) + corner(a - 1, b + 1))
    return _as_label(poset, values)


def _as_label(poset: NormalSubposet, values: Sequence[int]) -> Tableau:
    if any(v < 0 for v in values):
        raise VerificationError(f"corner-rank inclusion-exclusion went negative: {list(values)}",
                                counterexample=str(list(values)))
    return Tableau(poset.cells, tuple(int(v) for v in values))


def block_label(x: FqMatrix, beta: Composition, poset: NormalSubposet, strict: bool = False) -> Tableau:
    """
    Superclass label of Id + x from the corner ranks rank(x[rows i..N, cols 1..j]),
    aggregated over blocks.

    Args:
        x: Strictly block-upper-triangular matrix.
        strict: Also require x to be supported on ut_(beta,P).
    """
    chain = NormalSubposet.chain(beta.length)
    _check_supported(x.data, _support_mask(beta, chain), "algebra element")
    if strict:
        _check_supported(x.data, _support_mask(beta, poset), "algebra element")
    return _primal_label(x.data, beta, poset, x.prime)


def dual_label(y: FqMatrix, beta: Composition, poset: NormalSubposet) -> Tableau:
    """Supercharacter label of a functional from the corner ranks rank(Y[rows 1..i, cols j..N])."""
    _check_supported(y.data, _support_mask(beta, poset), "functional")
    return _dual_label(y.data, beta, poset, y.prime)


# --- Exhaustive scans ---

def _space_size(poly: UnipotentPolytope, q: int) -> int:
    return q ** len(support_cells(poly.beta, poly.poset))


def _check_budget(poly: UnipotentPolytope, q: int, budget: int) -> None:
    required = _space_size(poly, q)
    if required > budget:
        logger.error(f"oracle scan of {poly.describe()} at q={q} needs {required} > budget {budget}")
        raise EnumerationLimitError(
            f"oracle scan of {poly.describe()} at q={q} needs {required} matrices, budget is {budget}",
            limit=budget, required=required)


def _scan(poly: UnipotentPolytope, q: int, prefix: Optional[int]) -> Iterator[np.ndarray]:
    cells = support_cells(poly.beta, poly.poset)
    size = poly.beta.size
    rows = np.array([r - 1 for r, _ in cells], dtype=np.int64)
    cols = np.array([c - 1 for _, c in cells], dtype=np.int64)
    if not cells:
        yield np.zeros((size, size), dtype=np.int64)
        return
    first = [prefix] if prefix is not None else range(q)
    for head in first:
        for tail in itertools.product(range(q), repeat=len(cells) - 1):
            array = np.zeros((size, size), dtype=np.int64)
            array[rows, cols] = (head,) + tail
            yield array


def _partition(poly: UnipotentPolytope, q: int, labeller, max_workers: int) -> Dict[Tableau, List[np.ndarray]]:
    has_cells = bool(support_cells(poly.beta, poly.poset))
    prefixes: List[Optional[int]] = list(range(q)) if has_cells else [None]

    def scan_prefix(prefix: Optional[int]) -> Dict[Tableau, List[np.ndarray]]:
        fibers: Dict[Tableau, List[np.ndarray]] = {}
        for array in _scan(poly, q, prefix):
            fibers.setdefault(labeller(array, poly.beta, poly.poset, q), []).append(array)
        return fibers

    if max_workers > 1 and len(prefixes) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            parts = list(executor.map(scan_prefix, prefixes))
    else:
        parts = [scan_prefix(prefix) for prefix in prefixes]

    merged: Dict[Tableau, List[np.ndarray]] = {}
    for part in parts:
        for label, arrays in part.items():
            merged.setdefault(label, []).extend(arrays)
    return merged


def partition_dual_space(poly: UnipotentPolytope, q: int, budget: int = DEFAULT_ORACLE_BUDGET,
                         max_workers: int = 1) -> Dict[Tableau, List[np.ndarray]]:
    """All functionals on the support, grouped by dual_label."""
    _require_prime(q)
    _check_budget(poly, q, budget)
    return _partition(poly, q, _dual_label, max_workers)


def partition_primal_space(poly: UnipotentPolytope, q: int, budget: int = DEFAULT_ORACLE_BUDGET,
                           max_workers: int = 1) -> Dict[Tableau, List[np.ndarray]]:
    """All algebra elements on the support, grouped by block_label."""
    _require_prime(q)
    _check_budget(poly, q, budget)
    return _partition(poly, q, _primal_label, max_workers)


def enumerate_dual_fiber(beta: Composition, poset: NormalSubposet, lam: Tableau, q: int,
                         budget: int = DEFAULT_ORACLE_BUDGET) -> Iterator[FqMatrix]:
    """Every functional with dual_label equal to lambda, each once."""
    _require_prime(q)
    poly = UnipotentPolytope(beta, poset)
    _check_budget(poly, q, budget)
    for array in _scan(poly, q, None):
        if _dual_label(array, beta, poset, q) == lam:
            yield FqMatrix(q, array)


def _fiber_character(arrays: Sequence[np.ndarray], pattern: np.ndarray, q: int) -> CyclotomicInt:
    counts = [0] * q
    for array in arrays:
        counts[int((array * pattern).sum()) % q] += 1
    return CyclotomicInt.from_exponent_counts(q, counts)


def oracle_char_value(beta: Composition, poset: NormalSubposet, lam: Tableau, mu: Tableau, q: int,
                      budget: int = DEFAULT_ORACLE_BUDGET) -> Fraction:
    """Sum of zeta_q^<Y, e_mu> over the lambda fiber, reduced in Z[zeta_q]."""
    poly = UnipotentPolytope(beta, poset)
    pattern = superclass_representative(poly, mu)
    fiber = [matrix.data for matrix in enumerate_dual_fiber(beta, poset, lam, q, budget)]
    return _fiber_character(fiber, pattern, q).to_exact()


def oracle_superclass_size(beta: Composition, poset: NormalSubposet, mu: Tableau, q: int,
                           budget: int = DEFAULT_ORACLE_BUDGET) -> Fraction:
    """#{x on the support : block_label(x) = mu}."""
    poly = UnipotentPolytope(beta, poset)
    fibers = partition_primal_space(poly, q, budget)
    return Fraction(len(fibers.get(mu, [])))


def oracle_char_table(poly: UnipotentPolytope, q: int, budget: int = DEFAULT_ORACLE_BUDGET,
                      max_workers: int = 1) -> CharTable:
    """
    Character table by exhaustive fiber sums, with fiber-count class sizes.

    Rows and columns follow the lattice enumeration order so the result compares
    entrywise with the formula table.
    """
    index = tuple(enumerate_lattice_points(poly))
    logger.info(f"Oracle table for {poly.describe()} at q={q}: scanning {_space_size(poly, q)} matrices twice")
    dual = partition_dual_space(poly, q, budget, max_workers)
    primal = partition_primal_space(poly, q, budget, max_workers)
    for label in set(dual) | set(primal):
        if label not in index:
            raise VerificationError(f"oracle produced label {label.to_text()} outside the lattice points",
                                    counterexample=label.to_text())
    patterns = [superclass_representative(poly, mu) for mu in index]
    rows = tuple(
        tuple(_fiber_character(dual.get(lam, []), pattern, q).to_exact() for pattern in patterns)
        for lam in index)
    sizes = tuple(Fraction(len(primal.get(mu, []))) for mu in index)
    return CharTable(poly, q, index, rows, sizes)


# --- Orbits ---

def group_generators(beta: Composition, q: int, group: str = "unipotent") -> List[np.ndarray]:
    """
    Generators Id + t e_rc of UT_beta (r, c in different blocks, r before c);
    with ``group="parabolic"`` also the Levi transvections and diagonal scalings.
    """
    _require_prime(q)
    if group not in ("unipotent", "parabolic"):
        raise ValidationError(f"group must be 'unipotent' or 'parabolic', got {group!r}")
    size = beta.size
    positions = list(support_cells(beta, NormalSubposet.chain(beta.length)))
    if group == "parabolic":
        positions += [(r, c) for block in beta.blocks() for r in block for c in block if r != c]
    generators = []
    for r, c in positions:
        for t in range(1, q):
            g = np.eye(size, dtype=np.int64)
            g[r - 1, c - 1] = t
            generators.append(g)
    if group == "parabolic":
        for r in range(size):
            for s in range(2, q):
                g = np.eye(size, dtype=np.int64)
                g[r, r] = s
                generators.append(g)
    return generators


def orbit_closure(seed: FqMatrix, side: str, beta: Composition, poset: NormalSubposet, q: int,
                  group: str = "unipotent", kind: str = "functional",
                  budget: int = DEFAULT_ORBIT_BUDGET) -> Set[FqMatrix]:
    """
    Breadth-first closure of ``seed`` under the generators.

    Args:
        seed: Functional (kind="functional") or algebra element (kind="element").
        side: "left", "right" or "two-sided".
        group: "unipotent" for UT_beta, "parabolic" for P_beta.
        budget: Largest orbit allowed.
    """
    if side not in ("left", "right", "two-sided"):
        raise ValidationError(f"side must be left, right or two-sided, got {side!r}")
    if kind not in ("functional", "element"):
        raise ValidationError(f"kind must be functional or element, got {kind!r}")
    if seed.prime != q:
        raise ValidationError(f"seed lives over F_{seed.prime}, expected F_{q}")
    mask = _support_mask(beta, poset)
    _check_supported(seed.data, mask, "orbit seed")
    generators = group_generators(beta, q, group)

    def moves(array: np.ndarray) -> Iterator[np.ndarray]:
        for g in generators:
            if kind == "functional":
                if side in ("left", "two-sided"):
                    yield np.where(mask, (array @ g.T) % q, 0)
                if side in ("right", "two-sided"):
                    yield np.where(mask, (g.T @ array) % q, 0)
            else:
                if side in ("left", "two-sided"):
                    yield (g @ array) % q
                if side in ("right", "two-sided"):
                    yield (array @ g) % q

    seen: Dict[bytes, np.ndarray] = {seed.data.tobytes(): seed.data}
    queue = deque([seed.data])
    while queue:
        current = queue.popleft()
        for image in moves(current):
            key = image.tobytes()
            if key not in seen:
                seen[key] = image
                if len(seen) > budget:
                    raise EnumerationLimitError(
                        f"orbit of size > {budget} for {beta.parts} at q={q}", limit=budget, required=len(seen))
                queue.append(image)
    return {FqMatrix(q, array) for array in seen.values()}


def lemma_orbit_sizes(poly: UnipotentPolytope, lam: Tableau, q: int,
                      budget: int = DEFAULT_ORBIT_BUDGET) -> Dict[str, int]:
    """
    Measured sizes for the representative functional of lambda:
    its rank, |UT_beta . e*|, |e* . UT_beta| and the size of their intersection.
    """
    seed = FqMatrix(q, superclass_representative(poly, lam))
    left = orbit_closure(seed, "left", poly.beta, poly.poset, q, budget=budget)
    right = orbit_closure(seed, "right", poly.beta, poly.poset, q, budget=budget)
    return {
        "rank": seed.rank(),
        "left": len(left),
        "right": len(right),
        "intersection": len(left & right),
    }
