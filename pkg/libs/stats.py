"""
Tableau statistics: size, left/right dimension, crossings, nestings, the
cellwise intersection, zero-padding to the chain and the local line
parameters loc.

In every sum the relation between consecutive indices that is not itself a
cell of the tableau being read is the chain order on block indices. Cells
outside F_P read as zero.
"""

import os
import sys
from typing import Tuple

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from libs.errors import ValidationError
from libs.polytope import Tableau
from libs.posets import Composition, NormalSubposet
from utils import get_logger

logger = get_logger(__name__)


def _check_domain(lam: Tableau, poset: NormalSubposet, name: str = "tableau") -> None:
    if lam.cells != poset.cells:
        raise ValidationError(f"{name} {lam.to_text()} is not defined on F_P = {list(poset.cells)}")


def _check_same_domain(lam: Tableau, mu: Tableau) -> None:
    if lam.cells != mu.cells:
        raise ValidationError(
            f"tableaux live on different cell domains: {list(lam.cells)} vs {list(mu.cells)}")


def size(lam: Tableau) -> int:
    """|lambda|: the sum of all entries."""
    return sum(lam.values)


def dim_left(lam: Tableau, beta: Composition, poset: NormalSubposet) -> int:
    """sum of lambda_ik * beta_j over i <_P j, j < k."""
    _check_domain(lam, poset)
    total = 0
    for (i, k), value in lam.nonzero().items():
        total += value * sum(beta[j] for j in range(i + 1, k) if poset.precedes(i, j))
    return total


def dim_right(lam: Tableau, beta: Composition, poset: NormalSubposet) -> int:
    """sum of lambda_ik * beta_j over i < j, j <_P k."""
    _check_domain(lam, poset)
    total = 0
    for (i, k), value in lam.nonzero().items():
        total += value * sum(beta[j] for j in range(i + 1, k) if poset.precedes(j, k))
    return total


def crossings(lam: Tableau, beta: Composition, poset: NormalSubposet) -> int:
    """sum of lambda_ik * lambda_jl over i < j, j <_P k, k < l."""
    _check_domain(lam, poset)
    if beta.length != poset.size:
        raise ValidationError(f"beta={beta.parts} does not match a poset on {poset.size} elements")
    entries = lam.nonzero()
    total = 0
    for (i, k), left in entries.items():
        for (j, l), right in entries.items():
            if i < j < k < l and poset.precedes(j, k):
                total += left * right
    return total


def nestings(lam: Tableau, mu: Tableau, poset: NormalSubposet) -> int:
    """Nestings of mu in lambda: sum of lambda_il * mu_jk over i < j, (j,k) in F_P, k < l."""
    _check_same_domain(lam, mu)
    _check_domain(lam, poset)
    outer = lam.nonzero()
    inner = mu.nonzero()
    total = 0
    for (i, l), a in outer.items():
        for (j, k), b in inner.items():
            if i < j and k < l:
                total += a * b
    return total


def intersect(lam: Tableau, mu: Tableau) -> Tableau:
    """(lambda cap mu)_ij = lambda_ij * mu_ij."""
    _check_same_domain(lam, mu)
    return Tableau(lam.cells, tuple(a * b for a, b in zip(lam.values, mu.values)))


def extend(lam: Tableau, chain: NormalSubposet) -> Tableau:
    """Zero-pad a tableau on F_P onto the staircase of ``chain``."""
    if not chain.is_chain():
        raise ValidationError(f"extend needs the full chain, got {chain.to_text()}")
    if not set(lam.cells) <= set(chain.cells):
        raise ValidationError(f"cells {list(lam.cells)} are not contained in the staircase D_{chain.size}")
    return Tableau.from_map(chain.cells, lam.as_dict())


def restrict(lam: Tableau, poset: NormalSubposet) -> Tableau:
    """Inverse of extend on tableaux supported inside F_P."""
    outside = {cell: v for cell, v in lam.nonzero().items() if cell not in set(poset.cells)}
    if outside:
        raise ValidationError(f"tableau {lam.to_text()} has entries outside F_P: {sorted(outside)}")
    return Tableau.from_map(poset.cells, lam.nonzero())


def row_reduction(lam: Tableau, j: int, l: int) -> int:
    """sum of lambda_jm over m > l."""
    return sum(v for (a, m), v in lam.nonzero().items() if a == j and m > l)


def column_reduction(lam: Tableau, j: int, l: int) -> int:
    """sum of lambda_il over i < j."""
    return sum(v for (i, b), v in lam.nonzero().items() if b == l and i < j)


def loc(lam: Tableau, mu: Tableau, beta: Composition, poset: NormalSubposet,
        j: int, l: int) -> Tuple[int, int]:
    """
    Local line parameters of the cell (j, l).

    Returns:
        (beta_j - sum_{j<k<l} mu_jk - sum_{m>l} lambda_jm,
         beta_l - sum_{j<k<l} mu_kl - sum_{i<j} lambda_il); entries may be non-positive.
    """
    _check_same_domain(lam, mu)
    _check_domain(lam, poset)
    if not poset.precedes(j, l):
        raise ValidationError(f"loc needs a cell of F_P, got ({j},{l}) for P = {poset.to_text()}")
    m = beta[j] - sum(mu[(j, k)] for k in range(j + 1, l)) - row_reduction(lam, j, l)
    n = beta[l] - sum(mu[(k, l)] for k in range(j + 1, l)) - column_reduction(lam, j, l)
    return m, n
