"""
Tests for the closed supercharacter formulas: line characters, the product
formula, degrees and class sizes, orthogonality, restriction, the B_N
specialization, representatives and kernels.
"""

import os
import sys
import itertools
from fractions import Fraction

import numpy as np
import pytest

# Add repo root to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from libs.chars import (bn_char_value, canonical_kernel_tableau, char_table, char_value, degree,
                        inner_product, kernel_poset, kernel_subgroup_family, kernel_superclasses,
                        line_char, line_representative, normalized_restriction_check, rank_count,
                        superclass_representative, superclass_size, supercharacter_orbit_size)
from libs.errors import ValidationError
from libs.fforacle import rank_mod
from libs.polytope import Tableau, UnipotentPolytope, enumerate_lattice_points
from libs.posets import Composition, NormalSubposet, compositions_of, enumerate_normal_subposets

EXTRA_BETAS = [(2, 2), (2, 3), (3, 2), (2, 1, 1), (1, 2, 1), (1, 1, 2)]


def small_configurations(max_size=4, extra=True):
    """Every composition of N <= max_size with every normal poset, plus the extra betas."""
    betas = [c for n in range(1, max_size + 1) for c in compositions_of(n)]
    if extra:
        betas += [Composition(b) for b in EXTRA_BETAS]
    for beta in betas:
        for poset in enumerate_normal_subposets(beta.length):
            yield UnipotentPolytope(beta, poset)


def single(poly, entries):
    return Tableau.from_map(poly.cells, entries)


# --- Line characters ---

@pytest.mark.parametrize("m,n,l,q,expected", [
    (2, 2, 1, 2, 9),
    (3, 1, 0, 3, 1),
    (2, 2, 2, 2, 6),
    (2, 2, 3, 2, 0),
    (2, 2, -1, 2, 0),
    (-1, 2, 0, 2, 0),
])
def test_rank_count_values(m, n, l, q, expected):
    assert rank_count(m, n, l, q) == expected


@pytest.mark.parametrize("q", [2, 3])
def test_rank_count_matches_brute_force(q):
    for m in range(1, 4):
        for n in range(1, 4):
            counts = [0] * (min(m, n) + 1)
            for entries in itertools.product(range(q), repeat=m * n):
                counts[rank_mod(np.array(entries, dtype=np.int64).reshape(m, n), q)] += 1
            for l in range(min(m, n) + 1):
                assert line_char(m, n, l, 0, q) == counts[l], (m, n, l)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_line_char_values(q):
    assert line_char(1, 1, 1, 1, q) == -1
    assert line_char(2, 1, 1, 1, q) == -1
    assert line_char(2, 2, 1, 1, q) == q * q - q - 1
    assert line_char(2, 2, 0, 2, q) == 1


@pytest.mark.parametrize("m,n,l,j", [(2, 2, 1, 3), (2, 2, 1, -1), (2, 2, 3, 1), (2, 2, -1, 0)])
def test_line_char_guards(m, n, l, j):
    assert line_char(m, n, l, j, 2) == 0


# --- Product formula ---

def test_two_point_chain_values():
    poly = UnipotentPolytope.chain((1, 1))
    one = single(poly, {(1, 2): 1})
    zero = Tableau.zero(poly.cells)
    for q in (2, 3):
        assert char_value(poly, one, one, q) == -1
        assert char_value(poly, zero, one, q) == 1
        assert degree(poly, one, q) == q - 1
        assert superclass_size(poly, one, q) == q - 1


@pytest.mark.parametrize("q", [2, 3, 4])
def test_superclass_sizes_of_three_point_chain(q):
    # left multiplication fills the column above a rook, right multiplication the row to its right
    poly = UnipotentPolytope.chain((1, 1, 1))
    expected = {
        "0": 1,
        "2,3:1": q * (q - 1),
        "1,3:1": q - 1,
        "1,2:1": q * (q - 1),
        "1,2:1;2,3:1": q * (q - 1) ** 2,
    }
    for mu in enumerate_lattice_points(poly):
        assert superclass_size(poly, mu, q) == expected[mu.to_text()], mu.to_text()


def test_superclass_sizes_with_wider_blocks():
    chain = UnipotentPolytope.chain((2, 1, 1))
    assert superclass_size(chain, single(chain, {(2, 3): 1}), 2) == 4
    assert superclass_size(chain, single(chain, {(1, 3): 1}), 2) == 3
    star = UnipotentPolytope.build((1, 1, 1), [(1, 3), (2, 3)])
    assert superclass_size(star, single(star, {(2, 3): 1}), 3) == 6
    assert superclass_size(star, single(star, {(1, 3): 1}), 3) == 2


@pytest.mark.parametrize("q", [2, 3])
def test_superclass_sizes_sum_to_group_order(q):
    for poly in small_configurations():
        total = sum(superclass_size(poly, mu, q) for mu in enumerate_lattice_points(poly))
        assert total == q ** poly.group_exponent, poly.describe()


def test_degrees_and_class_sizes():
    poly = UnipotentPolytope.chain((2, 1))
    one = single(poly, {(1, 2): 1})
    for q in (2, 3):
        assert degree(poly, one, q) == q * q - 1
        assert supercharacter_orbit_size(poly, one, q) == q * q - 1
        assert char_value(poly, one, Tableau.zero(poly.cells), q) == q * q - 1
    square = UnipotentPolytope.chain((2, 2))
    assert superclass_size(square, single(square, {(1, 2): 1}), 2) == 9
    assert char_value(square, single(square, {(1, 2): 1}), single(square, {(1, 2): 1}), 2) == 1


def test_char_value_rejects_non_members():
    poly = UnipotentPolytope.chain((1, 1))
    too_big = single(poly, {(1, 2): 2})
    with pytest.raises(ValidationError):
        char_value(poly, too_big, Tableau.zero(poly.cells), 2)


def test_small_tables():
    body = char_table(UnipotentPolytope.chain((1, 1)), 2).as_integers()
    assert body == [[1, 1], [1, -1]]
    table = char_table(UnipotentPolytope.chain((2, 1)), 2)
    assert table.as_integers() == [[1, 1], [3, -1]]
    assert table.class_sizes == (1, 3)
    empty = char_table(UnipotentPolytope.build((2, 3), []), 3)
    assert empty.as_integers() == [[1]]


def test_table_does_not_depend_on_workers():
    poly = UnipotentPolytope.chain((2, 1, 1))
    assert char_table(poly, 2, max_workers=1) == char_table(poly, 2, max_workers=4)


@pytest.mark.parametrize("q", [2, 3])
def test_degree_sum_is_group_order(q):
    for n in range(1, 6):
        for beta in compositions_of(n):
            for poset in enumerate_normal_subposets(beta.length):
                poly = UnipotentPolytope(beta, poset)
                total = sum(degree(poly, lam, q) for lam in enumerate_lattice_points(poly))
                assert total == Fraction(q) ** poly.group_exponent, poly.describe()


@pytest.mark.parametrize("q", [2, 3])
def test_orthogonality(q):
    for poly in small_configurations():
        table = char_table(poly, q)
        assert sum(table.class_sizes) == table.group_order
        for nu in table.index:
            for mu in table.index:
                expected = degree(poly, nu, q) if nu == mu else 0
                assert inner_product(table, nu, mu) == expected, (poly.describe(), nu, mu)


def test_restriction_to_subposets():
    for poly in small_configurations():
        if poly.poset.is_chain():
            continue
        points = enumerate_lattice_points(poly)
        for lam in points:
            for mu in points:
                assert normalized_restriction_check(poly.beta, poly.poset, lam, mu, 2), \
                    (poly.describe(), lam.to_text(), mu.to_text())


@pytest.mark.parametrize("q", [2, 3])
def test_bn_specialization(q):
    for n in range(1, 6):
        for poset in enumerate_normal_subposets(n):
            poly = UnipotentPolytope(Composition((1,) * n), poset)
            points = enumerate_lattice_points(poly)
            for lam in points:
                for mu in points:
                    assert bn_char_value(n, poset, lam, mu, q) == char_value(poly, lam, mu, q)


def test_bn_vanishing_condition():
    poly = UnipotentPolytope.chain((1, 1, 1))
    lam = single(poly, {(1, 3): 1})
    mu = single(poly, {(1, 2): 1})
    assert bn_char_value(3, poly.poset, lam, mu, 2) == 0
    assert char_value(poly, lam, mu, 2) == 0


# --- Representatives ---

def test_superclass_representative_placement():
    square = UnipotentPolytope.chain((2, 2))
    assert not superclass_representative(square, Tableau.zero(square.cells)).any()
    one = superclass_representative(square, single(square, {(1, 2): 1}))
    assert [tuple(int(v) + 1 for v in cell) for cell in np.argwhere(one)] == [(2, 3)]
    two = superclass_representative(square, single(square, {(1, 2): 2}))
    assert [tuple(int(v) + 1 for v in cell) for cell in np.argwhere(two)] == [(1, 4), (2, 3)]


def test_representative_is_a_rook_placement_with_the_right_block_counts():
    poly = UnipotentPolytope.chain((2, 1, 2))
    for mu in enumerate_lattice_points(poly):
        pattern = superclass_representative(poly, mu)
        assert pattern.sum(axis=0).max(initial=0) <= 1
        assert pattern.sum(axis=1).max(initial=0) <= 1
        for i, k in poly.cells:
            rows = slice(poly.beta.block_start(i) - 1, poly.beta.block_end(i))
            cols = slice(poly.beta.block_start(k) - 1, poly.beta.block_end(k))
            assert pattern[rows, cols].sum() == mu[(i, k)]


def test_line_representative():
    assert not line_representative(2, 2, 0).any()
    assert [tuple(int(v) + 1 for v in c) for c in np.argwhere(line_representative(1, 1, 1))] == [(1, 2)]
    assert [tuple(int(v) + 1 for v in c) for c in np.argwhere(line_representative(2, 2, 1))] == [(2, 3)]
    with pytest.raises(ValidationError):
        line_representative(1, 2, 2)


# --- Kernels ---

def test_kernel_poset_extremes():
    beta = Composition((1, 1, 1))
    chain = UnipotentPolytope.chain(beta)
    assert kernel_poset(beta, []) == chain.poset
    assert kernel_poset(beta, enumerate_lattice_points(chain)) == NormalSubposet.empty(3)
    corner = single(chain, {(1, 3): 1})
    assert kernel_poset(beta, [corner]) == NormalSubposet.empty(3)
    middle = single(chain, {(1, 2): 1})
    assert kernel_poset(beta, [middle]) == NormalSubposet.from_pairs(3, [(1, 3), (2, 3)])


def test_canonical_kernel_tableau_recovers_its_poset():
    for length in range(0, 5):
        beta = Composition((1,) * length)
        for poset in enumerate_normal_subposets(length):
            assert kernel_poset(beta, [canonical_kernel_tableau(beta, poset)]) == poset


def test_kernel_family_is_every_normal_subposet():
    betas = [c for n in range(1, 6) for c in compositions_of(n) if c.length <= 4]
    betas.append(Composition((3, 1, 2, 2)))
    for beta in betas:
        assert kernel_subgroup_family(beta) == set(enumerate_normal_subposets(beta.length))


@pytest.mark.parametrize("beta", [(1, 1, 1), (2, 1), (1, 2, 1)])
def test_kernel_superclasses_are_supported_in_the_kernel_poset(beta):
    chain = UnipotentPolytope.chain(beta)
    table = char_table(chain, 3)
    for poset in enumerate_normal_subposets(chain.beta.length):
        generator = [canonical_kernel_tableau(chain.beta, poset)]
        found = set(kernel_superclasses(chain, generator, 3, table=table))
        inside = {mu for mu in table.index if set(mu.nonzero()) <= set(poset.cells)}
        assert found == inside, poset.to_text()


@pytest.mark.parametrize("beta", [(1, 1, 1), (2, 1), (1, 2, 1)])
def test_kernel_superclasses_over_f2_contain_the_kernel_poset(beta):
    chain = UnipotentPolytope.chain(beta)
    table = char_table(chain, 2)
    for poset in enumerate_normal_subposets(chain.beta.length):
        generator = [canonical_kernel_tableau(chain.beta, poset)]
        found = set(kernel_superclasses(chain, generator, 2, table=table))
        inside = {mu for mu in table.index if set(mu.nonzero()) <= set(poset.cells)}
        assert inside <= found, poset.to_text()


def test_kernel_over_f2_picks_up_the_sign_coincidence():
    chain = UnipotentPolytope.chain((1, 1, 1))
    poset = NormalSubposet.from_pairs(3, [(1, 3)])
    generator = [canonical_kernel_tableau(chain.beta, poset)]
    path = single(chain, {(1, 2): 1, (2, 3): 1})
    assert path in kernel_superclasses(chain, generator, 2)
    assert path not in kernel_superclasses(chain, generator, 3)


def test_kernel_superclasses_need_the_chain():
    poly = UnipotentPolytope.build((1, 1, 1), [(1, 3)])
    with pytest.raises(ValidationError):
        kernel_superclasses(poly, [], 2)
