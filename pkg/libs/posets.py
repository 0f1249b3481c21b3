"""
Posets on Block Indices
=======================

Compositions, normal subposets of a chain and the bijections around them:

1.  Normality and the strict interval poset sInt.
2.  Ferrers shapes and Dyck words for normal subposets (Catalan many).
3.  Parabolic posets: bdry and its inverse, and the fattening fat_beta.

Underlying sets are always {1..n} in natural order. Relations are given as
collections of strict pairs (i, j) meaning i precedes j.
"""

import os
import sys
import itertools
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from libs.errors import EnumerationLimitError, ValidationError
from utils import get_logger

logger = get_logger(__name__)

Cell = Tuple[int, int]
Relation = FrozenSet[Cell]

DEFAULT_POSET_CAP = 10


# --- Compositions ---

@dataclass(frozen=True)
class Composition:
    """An integer composition beta = (beta_1, ..., beta_l) with contiguous blocks Q_1..Q_l."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        for index, part in enumerate(parts, start=1):
            if not isinstance(part, int) or isinstance(part, bool) or part < 1:
                raise ValidationError(f"composition parts must be positive integers: beta_{index} = {part!r}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "Composition":
        """Parse '4,1,2' (or '(4,1,2)'); an empty string is the empty composition."""
        cleaned = text.strip().strip("()[]")
        if not cleaned:
            return cls(())
        try:
            return cls(tuple(int(token) for token in cleaned.split(",")))
        except ValueError as exc:
            raise ValidationError(f"cannot parse composition {text!r}") from exc

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __getitem__(self, index: int) -> int:
        """beta_index, 1-indexed."""
        return self.parts[index - 1]

    def block_start(self, index: int) -> int:
        return sum(self.parts[:index - 1]) + 1

    def block_end(self, index: int) -> int:
        return sum(self.parts[:index])

    def blocks(self) -> List[range]:
        """Q_1..Q_l as ranges of 1-indexed positions."""
        return [range(self.block_start(i), self.block_end(i) + 1) for i in range(1, self.length + 1)]

    def block_of(self, position: int) -> int:
        if not 1 <= position <= self.size:
            raise ValidationError(f"position {position} outside 1..{self.size}")
        running = 0
        for index, part in enumerate(self.parts, start=1):
            running += part
            if position <= running:
                return index
        raise ValidationError(f"position {position} outside 1..{self.size}")

    def dilate(self, factor: int) -> "Composition":
        if factor < 1:
            raise ValidationError(f"dilation factor must be >= 1, got {factor}")
        return Composition(tuple(factor * part for part in self.parts))

    def to_text(self) -> str:
        return ",".join(str(part) for part in self.parts)


def compositions_of(n: int) -> List[Composition]:
    """All compositions of n, ordered lexicographically by parts."""
    result = []

    def build(remaining: int, prefix: Tuple[int, ...]):
        if remaining == 0:
            result.append(Composition(prefix))
            return
        for part in range(1, remaining + 1):
            build(remaining - part, prefix + (part,))

    build(n, ())
    return result


# --- Relations ---

def _as_relation(size: int, pairs: Iterable[Sequence[int]]) -> Relation:
    relation = set()
    for pair in pairs:
        if len(pair) != 2:
            raise ValidationError(f"relation entries must be pairs, got {pair!r}")
        i, j = int(pair[0]), int(pair[1])
        if not (1 <= i <= size and 1 <= j <= size):
            raise ValidationError(f"relation pair ({i},{j}) outside 1..{size}")
        if i >= j:
            raise ValidationError(f"relation pair ({i},{j}) does not refine the chain (needs i < j)")
        relation.add((i, j))
    return frozenset(relation)


def transitive_closure(size: int, pairs: Iterable[Sequence[int]]) -> Relation:
    relation = set(_as_relation(size, pairs))
    # Warshall sweep over the middle element
    for j in range(1, size + 1):
        lower = [i for i in range(1, j) if (i, j) in relation]
        upper = [k for k in range(j + 1, size + 1) if (j, k) in relation]
        relation.update((i, k) for i in lower for k in upper)
    return frozenset(relation)


def is_transitive(size: int, pairs: Iterable[Sequence[int]]) -> bool:
    relation = _as_relation(size, pairs)
    return relation == transitive_closure(size, relation)


def _validated_order(size: int, pairs: Iterable[Sequence[int]]) -> Relation:
    relation = _as_relation(size, pairs)
    closed = transitive_closure(size, relation)
    if closed != relation:
        missing = sorted(closed - relation)[0]
        raise ValidationError(f"relation is not transitive: missing {missing[0]}<{missing[1]}")
    return relation


def is_normal(size: int, pairs: Iterable[Sequence[int]]) -> bool:
    """
    True iff every j < k in the relation has i < k for all i < j and j < l for all l > k.

    Raises:
        ValidationError: If the relation does not refine the chain or is not transitive.
    """
    relation = _validated_order(size, pairs)
    for j, k in relation:
        if any((i, k) not in relation for i in range(1, j)):
            return False
        if any((j, l) not in relation for l in range(k + 1, size + 1)):
            return False
    return True


def relation_text(pairs: Iterable[Cell]) -> str:
    ordered = sorted(pairs)
    if not ordered:
        return "{}"
    return "{" + ",".join(f"{i}<{j}" for i, j in ordered) + "}"


# --- Normal subposets ---

@dataclass(frozen=True)
class NormalSubposet:
    """A normal subposet of the chain 1 < 2 < ... < size, stored as a dense boolean table."""

    size: int
    relation: Tuple[Tuple[bool, ...], ...]

    def __post_init__(self):
        if self.size < 0:
            raise ValidationError(f"poset size must be >= 0, got {self.size}")
        table = tuple(tuple(bool(v) for v in row) for row in self.relation)
        if len(table) != self.size or any(len(row) != self.size for row in table):
            raise ValidationError(f"relation table must be {self.size}x{self.size}")
        object.__setattr__(self, "relation", table)
        pairs = self.pairs()
        if not is_normal(self.size, pairs):
            raise ValidationError(f"poset {relation_text(pairs)} is not normal in the chain on 1..{self.size}")

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[Sequence[int]], close: bool = False) -> "NormalSubposet":
        """Build from strict pairs; with ``close`` the transitive closure is taken first."""
        relation = transitive_closure(size, pairs) if close else _validated_order(size, pairs)
        table = tuple(tuple((i, j) in relation for j in range(1, size + 1)) for i in range(1, size + 1))
        return cls(size, table)

    @classmethod
    def chain(cls, size: int) -> "NormalSubposet":
        return cls.from_pairs(size, itertools.combinations(range(1, size + 1), 2))

    @classmethod
    def empty(cls, size: int) -> "NormalSubposet":
        return cls.from_pairs(size, ())

    def precedes(self, i: int, j: int) -> bool:
        if 1 <= i <= self.size and 1 <= j <= self.size:
            return self.relation[i - 1][j - 1]
        return False

    def pairs(self) -> Tuple[Cell, ...]:
        return tuple((i + 1, j + 1) for i in range(self.size) for j in range(self.size) if self.relation[i][j])

    @property
    def cells(self) -> Tuple[Cell, ...]:
        """F_P in (row, col) order."""
        return self.pairs()

    def row_lengths(self) -> Tuple[int, ...]:
        return tuple(sum(row) for row in self.relation)

    def column_heights(self) -> Tuple[int, ...]:
        return tuple(sum(self.relation[i][j] for i in range(self.size)) for j in range(self.size))

    def is_chain(self) -> bool:
        return len(self.pairs()) == self.size * (self.size - 1) // 2

    def contains(self, other: "NormalSubposet") -> bool:
        return other.size == self.size and set(other.pairs()) <= set(self.pairs())

    def to_text(self) -> str:
        return relation_text(self.pairs())

    def __str__(self):
        return self.to_text()


def ferrers_of(poset: NormalSubposet) -> FrozenSet[Cell]:
    """F_P = {(i, j) : i precedes j}."""
    return frozenset(poset.pairs())


def poset_of_ferrers(cells: Iterable[Sequence[int]], size: Optional[int] = None) -> NormalSubposet:
    """
    Inverse of ferrers_of.

    Args:
        cells: A right-justified, nested sub-shape of the staircase D_size.
        size: Number of elements; defaults to the largest index used.

    Raises:
        ValidationError: If the cells do not form such a shape.
    """
    cell_set = {(int(i), int(j)) for i, j in cells}
    if size is None:
        size = max((j for _, j in cell_set), default=0)
    for i, j in cell_set:
        if not (1 <= i < j <= size):
            raise ValidationError(f"cell ({i},{j}) is not in the staircase D_{size}")
    for i, j in cell_set:
        if j < size and (i, j + 1) not in cell_set:
            raise ValidationError(f"cells are not right-justified: ({i},{j}) present but ({i},{j + 1}) missing")
        if i > 1 and (i - 1, j) not in cell_set:
            raise ValidationError(f"rows are not nested: ({i},{j}) present but ({i - 1},{j}) missing")
    return NormalSubposet.from_pairs(size, cell_set)


def dyck_of(poset: NormalSubposet) -> str:
    """
    Dyck word in U/D with size of each.

    The j-th U is preceded by exactly c_j letters D, where c_j is the height of
    column j of F_P; a cell (i, j) lies strictly north-east of the path iff
    i <= c_j. The empty poset gives U^l D^l and the full chain (UD)^l.
    """
    heights = poset.column_heights()
    letters = []
    previous = 0
    for height in heights:
        letters.append("D" * (height - previous))
        letters.append("U")
        previous = height
    letters.append("D" * (poset.size - previous))
    return "".join(letters)


def poset_of_dyck(word: str) -> NormalSubposet:
    """Inverse of dyck_of; validates the word."""
    if set(word) - {"U", "D"}:
        raise ValidationError(f"Dyck word may only contain U and D: {word!r}")
    if len(word) % 2:
        raise ValidationError(f"Dyck word has odd length: {word!r}")
    size = len(word) // 2
    ups = downs = 0
    heights = []
    for letter in word:
        if letter == "U":
            ups += 1
            heights.append(downs)
        else:
            downs += 1
            if downs > ups:
                raise ValidationError(f"Dyck word {word!r} dips below the axis")
    if ups != size:
        raise ValidationError(f"Dyck word {word!r} is not balanced")
    cells = [(i, j) for j, height in enumerate(heights, start=1) for i in range(1, height + 1)]
    return NormalSubposet.from_pairs(size, cells)


def enumerate_normal_subposets(size: int, cap: int = DEFAULT_POSET_CAP) -> List[NormalSubposet]:
    """
    All normal subposets of the chain on ``size`` elements, ordered by the
    lexicographic order of their Ferrers row-length vectors.
    """
    if size < 0:
        raise ValidationError(f"poset size must be >= 0, got {size}")
    if size > cap:
        raise EnumerationLimitError(
            f"enumerate_normal_subposets: size {size} exceeds cap {cap}", limit=cap, required=size)

    height_vectors: List[Tuple[int, ...]] = []

    def build(prefix: Tuple[int, ...]):
        j = len(prefix) + 1
        if j > size:
            height_vectors.append(prefix)
            return
        low = prefix[-1] if prefix else 0
        for height in range(low, j):
            build(prefix + (height,))

    build(())
    posets = []
    for heights in height_vectors:
        cells = [(i, j) for j, height in enumerate(heights, start=1) for i in range(1, height + 1)]
        posets.append(NormalSubposet.from_pairs(size, cells))
    posets.sort(key=lambda poset: poset.row_lengths())
    logger.debug(f"enumerated {len(posets)} normal subposets on {size} elements")
    return posets


def all_chain_refining_orders(size: int) -> List[Relation]:
    """Every transitive relation refining the chain on 1..size (brute force)."""
    candidates = list(itertools.combinations(range(1, size + 1), 2))
    orders = []
    for mask in range(1 << len(candidates)):
        pairs = frozenset(c for bit, c in enumerate(candidates) if mask >> bit & 1)
        if is_transitive(size, pairs):
            orders.append(pairs)
    return orders


# --- Strict interval poset ---

@dataclass(frozen=True)
class IntervalPoset:
    """sInt of a strict order: its relation pairs, ordered by (j,k) <= (i,l) iff i <= j < k <= l."""

    size: int
    base: Relation
    elements: Tuple[Cell, ...]

    def _weakly_below(self, a: int, b: int) -> bool:
        return a == b or (a, b) in self.base

    def leq(self, lower: Cell, upper: Cell) -> bool:
        (j, k), (i, l) = lower, upper
        return self._weakly_below(i, j) and self._weakly_below(k, l)

    def is_upward_closed(self, subset: Iterable[Cell]) -> bool:
        members = set(subset)
        return all(upper in members
                   for lower in members for upper in self.elements if self.leq(lower, upper))

    def maximal_elements(self, subset: Iterable[Cell]) -> List[Cell]:
        members = sorted(set(subset))
        return [a for a in members if not any(b != a and self.leq(a, b) for b in members)]


def strict_interval_poset(size: int, pairs: Iterable[Sequence[int]]) -> IntervalPoset:
    relation = _validated_order(size, pairs)
    return IntervalPoset(size, relation, tuple(sorted(relation)))


# --- Parabolic posets ---

def bdry_inverse(beta: Composition) -> Relation:
    """The parabolic order on 1..N: a < b iff a's block comes before b's block."""
    relation = set()
    blocks = beta.blocks()
    for i, j in itertools.combinations(range(beta.length), 2):
        relation.update((a, b) for a in blocks[i] for b in blocks[j])
    return frozenset(relation)


def bdry(size: int, pairs: Iterable[Sequence[int]]) -> Composition:
    """Block sizes of a parabolic order on 1..size; inverse of bdry_inverse."""
    relation = _validated_order(size, pairs)
    parts = []
    run = 0
    for a in range(1, size + 1):
        run += 1
        if a == size or (a, a + 1) in relation:
            parts.append(run)
            run = 0
    beta = Composition(tuple(parts))
    if bdry_inverse(beta) != relation:
        raise ValidationError(f"relation {relation_text(relation)} is not parabolic")
    return beta


def _check_sizes(beta: Composition, poset: NormalSubposet) -> None:
    if beta.length != poset.size:
        raise ValidationError(
            f"poset on {poset.size} elements does not match composition of length {beta.length}")


def fat(beta: Composition, poset: NormalSubposet) -> Relation:
    """fat_beta(P): a < b iff a in Q_i, b in Q_j with i preceding j in P."""
    _check_sizes(beta, poset)
    blocks = beta.blocks()
    relation = set()
    for i, j in poset.pairs():
        relation.update((a, b) for a in blocks[i - 1] for b in blocks[j - 1])
    return frozenset(relation)


def support_cells(beta: Composition, poset: NormalSubposet) -> Tuple[Cell, ...]:
    """Allowed nonzero matrix coordinates of ut_(beta,P), sorted by (row, col)."""
    return tuple(sorted(fat(beta, poset)))
