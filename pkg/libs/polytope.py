"""
Unipotent Polytopes
===================

The polytope (beta, P): nonnegative fillings of the Ferrers shape F_P whose row
and column sums are bounded by beta. Its lattice points (tableaux) index both
the superclasses and the supercharacters.
"""

import os
import sys
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from libs.errors import EnumerationLimitError, ValidationError
from libs.posets import Cell, Composition, NormalSubposet
from utils import get_logger

logger = get_logger(__name__)

DEFAULT_LATTICE_BUDGET = 10 ** 7


@dataclass(frozen=True)
class UnipotentPolytope:
    """A composition together with a normal subposet on its block indices."""

    beta: Composition
    poset: NormalSubposet

    def __post_init__(self):
        if self.beta.length != self.poset.size:
            raise ValidationError(
                f"poset on {self.poset.size} elements does not match beta={self.beta.parts} "
                f"of length {self.beta.length}")

    @classmethod
    def build(cls, beta: Union[Composition, Sequence[int]], pairs: Iterable[Sequence[int]] = (),
              close: bool = False) -> "UnipotentPolytope":
        beta = beta if isinstance(beta, Composition) else Composition(tuple(beta))
        return cls(beta, NormalSubposet.from_pairs(beta.length, pairs, close=close))

    @classmethod
    def chain(cls, beta: Union[Composition, Sequence[int]]) -> "UnipotentPolytope":
        beta = beta if isinstance(beta, Composition) else Composition(tuple(beta))
        return cls(beta, NormalSubposet.chain(beta.length))

    @property
    def cells(self) -> Tuple[Cell, ...]:
        return self.poset.cells

    @property
    def group_exponent(self) -> int:
        """log_q |UT_(beta,P)| = sum over i < j in P of beta_i * beta_j."""
        return sum(self.beta[i] * self.beta[j] for i, j in self.cells)

    def dilate(self, factor: int) -> "UnipotentPolytope":
        return UnipotentPolytope(self.beta.dilate(factor), self.poset)

    def with_chain(self) -> "UnipotentPolytope":
        return UnipotentPolytope(self.beta, NormalSubposet.chain(self.beta.length))

    def describe(self) -> str:
        return f"beta=({self.beta.to_text()}) P={self.poset.to_text()}"


@dataclass(frozen=True)
class Tableau:
    """
    A filling of a cell domain by nonnegative integers.

    Cells are kept in (row, col) order and ``values`` is aligned with them, so
    two tableaux on the same domain compare lexicographically by value vector.
    Reading a cell outside the domain returns 0.
    """

    cells: Tuple[Cell, ...]
    values: Tuple[int, ...]

    def __post_init__(self):
        cells = tuple(tuple(cell) for cell in self.cells)
        values = tuple(self.values)
        if len(cells) != len(values):
            raise ValidationError("tableau needs one value per cell")
        if list(cells) != sorted(set(cells)):
            raise ValidationError("tableau cells must be distinct and sorted by (row, col)")
        for cell, value in zip(cells, values):
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise ValidationError(f"tableau entry at {cell} must be a nonnegative integer, got {value!r}")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "values", values)

    @classmethod
    def zero(cls, cells: Iterable[Cell]) -> "Tableau":
        cells = tuple(sorted(cells))
        return cls(cells, (0,) * len(cells))

    @classmethod
    def from_map(cls, cells: Iterable[Cell], mapping: Mapping[Cell, int]) -> "Tableau":
        cells = tuple(sorted(cells))
        stray = set(mapping) - set(cells)
        if any(mapping[cell] for cell in stray):
            raise ValidationError(f"tableau entries outside the cell domain: {sorted(stray)}")
        return cls(cells, tuple(int(mapping.get(cell, 0)) for cell in cells))

    def __getitem__(self, cell: Cell) -> int:
        try:
            return self.values[self.cells.index(tuple(cell))]
        except ValueError:
            return 0

    def as_dict(self) -> Dict[Cell, int]:
        return dict(zip(self.cells, self.values))

    def nonzero(self) -> Dict[Cell, int]:
        return {cell: value for cell, value in zip(self.cells, self.values) if value}

    def is_zero(self) -> bool:
        return not any(self.values)

    def row_sum(self, row: int) -> int:
        return sum(v for (i, _), v in zip(self.cells, self.values) if i == row)

    def column_sum(self, col: int) -> int:
        return sum(v for (_, j), v in zip(self.cells, self.values) if j == col)

    def to_text(self) -> str:
        entries = self.nonzero()
        if not entries:
            return "0"
        return ";".join(f"{i},{j}:{v}" for (i, j), v in sorted(entries.items()))

    def __lt__(self, other: "Tableau") -> bool:
        return (self.cells, self.values) < (other.cells, other.values)

    def __str__(self):
        return self.to_text()


def parse_tableau(poly: UnipotentPolytope, text: str) -> Tableau:
    """Parse the 'i,j:v;...' text form ("0" is the zero tableau) onto F_P."""
    text = text.strip()
    entries: Dict[Cell, int] = {}
    if text not in ("0", ""):
        for chunk in text.split(";"):
            try:
                position, value = chunk.split(":")
                i, j = (int(token) for token in position.split(","))
                entries[(i, j)] = entries.get((i, j), 0) + int(value)
            except ValueError as exc:
                raise ValidationError(f"cannot parse tableau entry {chunk!r} in {text!r}") from exc
    domain = set(poly.cells)
    for cell, value in entries.items():
        if cell not in domain and value:
            raise ValidationError(f"tableau cell {cell} is not in F_P for {poly.describe()}")
    return Tableau.from_map(poly.cells, entries)


def contains(poly: UnipotentPolytope, point: Mapping[Cell, Union[int, Fraction]]) -> bool:
    """
    Membership of a rational point in the polytope.

    Raises:
        ValidationError: If the point is not defined on exactly F_P.
    """
    if set(point) != set(poly.cells):
        raise ValidationError(
            f"point is defined on {sorted(point)}, expected F_P = {list(poly.cells)}")
    values = {cell: Fraction(value) for cell, value in point.items()}
    if any(value < 0 for value in values.values()):
        return False
    for j in range(1, poly.beta.length + 1):
        row_total = sum(v for (a, _), v in values.items() if a == j)
        col_total = sum(v for (_, b), v in values.items() if b == j)
        if row_total > poly.beta[j] or col_total > poly.beta[j]:
            return False
    return True


def is_member(poly: UnipotentPolytope, tableau: Tableau) -> bool:
    if tableau.cells != poly.cells:
        return False
    return contains(poly, tableau.as_dict())


def require_member(poly: UnipotentPolytope, tableau: Tableau, name: str = "tableau") -> None:
    if tableau.cells != poly.cells:
        raise ValidationError(f"{name} {tableau.to_text()} lives on {list(tableau.cells)}, "
                              f"not on F_P of {poly.describe()}")
    if not contains(poly, tableau.as_dict()):
        raise ValidationError(f"{name} {tableau.to_text()} violates a row/column bound of {poly.describe()}")


def box_bounds(poly: UnipotentPolytope) -> Dict[Cell, int]:
    """Per-cell upper bound min(beta_i, beta_j)."""
    return {(i, j): min(poly.beta[i], poly.beta[j]) for i, j in poly.cells}


def lattice_point_bound(poly: UnipotentPolytope) -> int:
    """Size of the box prod (bound + 1); an upper bound on |T_P^beta|."""
    bound = 1
    for value in box_bounds(poly).values():
        bound *= value + 1
    return bound


def box_points(poly: UnipotentPolytope) -> Iterator[Dict[Cell, int]]:
    """Every integer point of the bounding box, for exhaustive cross-checks."""
    bounds = box_bounds(poly)
    cells = list(poly.cells)
    for values in itertools.product(*(range(bounds[cell] + 1) for cell in cells)):
        yield dict(zip(cells, values))


def _depth_first(poly: UnipotentPolytope, budget: int, collect: bool):
    cells = poly.cells
    row_left = {j: poly.beta[j] for j in range(1, poly.beta.length + 1)}
    col_left = dict(row_left)
    current = [0] * len(cells)
    found: List[Tableau] = []
    counters = {"nodes": 0, "points": 0}

    def visit(position: int):
        counters["nodes"] += 1
        if counters["nodes"] > budget:
            bound = lattice_point_bound(poly)
            logger.error(f"lattice enumeration of {poly.describe()} exceeded budget {budget} (box bound {bound})")
            raise EnumerationLimitError(
                f"lattice enumeration of {poly.describe()} exceeded budget {budget} nodes; "
                f"box bound is {bound}", limit=budget, required=bound)
        if position == len(cells):
            counters["points"] += 1
            if collect:
                found.append(Tableau(cells, tuple(current)))
            return
        i, j = cells[position]
        for value in range(min(row_left[i], col_left[j]) + 1):
            current[position] = value
            row_left[i] -= value
            col_left[j] -= value
            visit(position + 1)
            row_left[i] += value
            col_left[j] += value
        current[position] = 0

    visit(0)
    return found, counters["points"]


def enumerate_lattice_points(poly: UnipotentPolytope, budget: int = DEFAULT_LATTICE_BUDGET) -> List[Tableau]:
    """
    Every tableau in T_P^beta exactly once, lexicographic over cells in (row, col) order.

    Raises:
        EnumerationLimitError: If the search visits more than ``budget`` nodes.
    """
    points, _ = _depth_first(poly, budget, collect=True)
    logger.debug(f"{poly.describe()}: {len(points)} lattice points")
    return points


def count_lattice_points(poly: UnipotentPolytope, dilation: int = 1,
                         budget: int = DEFAULT_LATTICE_BUDGET) -> Fraction:
    """|T_P^(t beta)| for the dilation t."""
    target = poly.dilate(dilation) if dilation != 1 else poly
    _, count = _depth_first(target, budget, collect=False)
    return Fraction(count)
