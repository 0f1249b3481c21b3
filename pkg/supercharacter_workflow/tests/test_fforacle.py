"""
Tests for the finite-field oracle: ranks, corner-rank labels, fiber scans,
the exhaustive character tables and the orbit measurements.
"""

import os
import sys

import pytest

# Add repo root to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from libs.chars import char_table, superclass_representative, superclass_size
from libs.errors import EnumerationLimitError, ValidationError
from libs.fforacle import (FqElem, FqMatrix, block_label, dual_label, enumerate_dual_fiber,
                           lemma_orbit_sizes, oracle_char_table, oracle_char_value,
                           oracle_superclass_size, orbit_closure, partition_dual_space,
                           partition_primal_space, rank)
from libs.polytope import Tableau, UnipotentPolytope, enumerate_lattice_points
from libs.posets import Composition, compositions_of, enumerate_normal_subposets, support_cells
from libs.stats import crossings, dim_left, dim_right, size

EXTRA_BETAS = [(2, 2), (2, 3), (3, 2), (2, 1, 1), (1, 2, 1), (1, 1, 2)]
SUPPORT_LIMIT = {2: 12, 3: 8}


def oracle_configurations(q):
    betas = [c for n in range(1, 5) for c in compositions_of(n)] + [Composition(b) for b in EXTRA_BETAS]
    for beta in betas:
        for poset in enumerate_normal_subposets(beta.length):
            if len(support_cells(beta, poset)) <= SUPPORT_LIMIT[q]:
                yield UnipotentPolytope(beta, poset)


def test_field_elements():
    two = FqElem(3, 2)
    assert two * two == FqElem(3, 1)
    assert two + 2 == FqElem(3, 1)
    assert two.inverse() == two
    assert int(FqElem(5, 3) / FqElem(5, 2)) == 4
    with pytest.raises(ZeroDivisionError):
        FqElem(5, 0).inverse()
    with pytest.raises(ValidationError):
        FqElem(4, 1)


def test_ranks():
    assert rank(FqMatrix.zeros(2, 3)) == 0
    assert rank(FqMatrix.identity(3, 4)) == 4
    assert rank(FqMatrix(2, [[1, 1], [1, 1]])) == 1
    assert rank(FqMatrix(3, [[1, 2], [2, 1]])) == 1
    assert rank(FqMatrix(5, [[1, 2], [2, 1]])) == 2


def test_matrix_operations():
    a = FqMatrix.from_entries(3, 3, {(1, 2): 1, (2, 3): 2})
    assert a.nonzero_cells() == [(1, 2), (2, 3)]
    assert int(a.entry(2, 3)) == 2
    assert (a @ a).nonzero_cells() == [(1, 3)]
    assert a.transpose().nonzero_cells() == [(2, 1), (3, 2)]
    assert len({a, FqMatrix(3, a.data.copy())}) == 1


# --- Labels ---

def test_block_label_of_representatives():
    for poly in [UnipotentPolytope.chain((2, 1, 2)), UnipotentPolytope.build((4, 1, 2), [(1, 3), (2, 3)]),
                 UnipotentPolytope.chain((1, 2, 1))]:
        for mu in enumerate_lattice_points(poly):
            x = FqMatrix(2, superclass_representative(poly, mu))
            assert block_label(x, poly.beta, poly.poset, strict=True) == mu


def test_corner_ranks_absorb_the_enclosing_cell():
    beta = Composition((1, 1, 1))
    poly = UnipotentPolytope.chain(beta)
    path = FqMatrix.from_entries(2, 3, {(1, 2): 1, (2, 3): 1})
    full = FqMatrix.from_entries(2, 3, {(1, 2): 1, (2, 3): 1, (1, 3): 1})
    label = block_label(path, beta, poly.poset)
    assert label == Tableau.from_map(poly.cells, {(1, 2): 1, (2, 3): 1})
    assert block_label(full, beta, poly.poset) == label


def test_naive_block_ranks_are_not_orbit_invariant():
    # right multiplication by 1 + e_23 adds x_12 to x_13
    x = FqMatrix.from_entries(2, 3, {(1, 2): 1, (2, 3): 1})
    moved = x @ FqMatrix.from_entries(2, 3, {(1, 1): 1, (2, 2): 1, (3, 3): 1, (2, 3): 1})
    assert int(x.entry(1, 3)) == 0 and int(moved.entry(1, 3)) == 1
    chain = UnipotentPolytope.chain((1, 1, 1)).poset
    assert block_label(x, Composition((1, 1, 1)), chain) == block_label(moved, Composition((1, 1, 1)), chain)


def test_dual_labels():
    beta = Composition((1, 1, 1))
    poly = UnipotentPolytope.chain(beta)
    assert dual_label(FqMatrix.zeros(2, 3), beta, poly.poset).is_zero()
    y = FqMatrix.from_entries(2, 3, {(1, 3): 1, (1, 2): 1})
    assert dual_label(y, beta, poly.poset) == Tableau.from_map(poly.cells, {(1, 3): 1})
    wide = UnipotentPolytope.chain((2, 1, 2))
    single = FqMatrix.from_entries(3, 5, {(2, 4): 2})
    assert dual_label(single, wide.beta, wide.poset) == Tableau.from_map(wide.cells, {(1, 3): 1})


def test_labels_reject_entries_outside_the_support():
    poly = UnipotentPolytope.build((1, 1, 1), [(1, 3)])
    with pytest.raises(ValidationError):
        dual_label(FqMatrix.from_entries(2, 3, {(1, 2): 1}), poly.beta, poly.poset)
    with pytest.raises(ValidationError):
        block_label(FqMatrix.from_entries(2, 3, {(1, 2): 1}), poly.beta, poly.poset, strict=True)


# --- Fibers ---

def test_dual_fibers():
    line = UnipotentPolytope.chain((1, 1))
    one = Tableau.from_map(line.cells, {(1, 2): 1})
    assert len(list(enumerate_dual_fiber(line.beta, line.poset, one, 2))) == 1
    zero_fiber = list(enumerate_dual_fiber(line.beta, line.poset, Tableau.zero(line.cells), 3))
    assert zero_fiber == [FqMatrix.zeros(3, 2)]
    poly = UnipotentPolytope.chain((2, 1))
    assert len(list(enumerate_dual_fiber(poly.beta, poly.poset, Tableau.from_map(poly.cells, {(1, 2): 1}), 2))) == 3


def test_oracle_values():
    poly = UnipotentPolytope.chain((2, 2))
    one = Tableau.from_map(poly.cells, {(1, 2): 1})
    assert oracle_char_value(poly.beta, poly.poset, one, one, 2) == 1
    assert oracle_superclass_size(poly.beta, poly.poset, one, 2) == 9


def test_oracle_needs_a_prime_and_a_budget():
    poly = UnipotentPolytope.chain((2, 2))
    with pytest.raises(ValidationError):
        oracle_char_table(poly, 4)
    with pytest.raises(EnumerationLimitError):
        oracle_char_table(poly, 2, budget=8)


@pytest.mark.parametrize("q", [2, 3])
def test_superclass_sizes_match_fiber_counts(q):
    for n in range(1, 5):
        for beta in compositions_of(n):
            for poset in enumerate_normal_subposets(beta.length):
                poly = UnipotentPolytope(beta, poset)
                fibers = partition_primal_space(poly, q)
                for mu in enumerate_lattice_points(poly):
                    assert superclass_size(poly, mu, q) == len(fibers.get(mu, [])), \
                        (poly.describe(), mu.to_text())


@pytest.mark.parametrize("q", [2, 3])
def test_oracle_table_matches_formula(q):
    for poly in oracle_configurations(q):
        formula = char_table(poly, q)
        oracle = oracle_char_table(poly, q, max_workers=2)
        assert oracle.index == formula.index
        assert oracle.values == formula.values, poly.describe()
        assert oracle.class_sizes == formula.class_sizes, poly.describe()


# --- Orbits ---

ORBIT_BETAS = [(1, 1, 1), (2, 1), (1, 2), (1, 1, 1, 1)]


@pytest.mark.parametrize("beta", ORBIT_BETAS)
def test_orbit_sizes_match_statistics(beta):
    q = 2
    for poset in enumerate_normal_subposets(len(beta)):
        poly = UnipotentPolytope(Composition(beta), poset)
        for lam in enumerate_lattice_points(poly):
            measured = lemma_orbit_sizes(poly, lam, q)
            assert measured["rank"] == size(lam)
            assert measured["left"] == q ** dim_left(lam, poly.beta, poset)
            assert measured["right"] == q ** dim_right(lam, poly.beta, poset)
            assert measured["intersection"] == q ** crossings(lam, poly.beta, poset)


def test_left_and_right_orbits_differ_off_the_chain():
    poly = UnipotentPolytope.build((1, 1, 1), [(1, 3), (2, 3)])
    lam = Tableau.from_map(poly.cells, {(1, 3): 1})
    measured = lemma_orbit_sizes(poly, lam, 3)
    assert (measured["left"], measured["right"]) == (1, 3)


@pytest.mark.parametrize("beta,q", [((1, 1, 1), 2), ((2, 1), 2), ((1, 2), 3), ((2, 1, 1), 2), ((2, 2), 2)])
def test_orbits_are_label_fibers(beta, q):
    for poset in enumerate_normal_subposets(len(beta)):
        poly = UnipotentPolytope(Composition(beta), poset)
        for lam, arrays in partition_dual_space(poly, q).items():
            orbit = orbit_closure(FqMatrix(q, arrays[0]), "two-sided", poly.beta, poset, q, group="parabolic")
            assert orbit == {FqMatrix(q, array) for array in arrays}, (poly.describe(), lam.to_text())


def test_block_label_is_constant_on_element_orbits():
    poly = UnipotentPolytope.chain((2, 1, 1))
    for mu in enumerate_lattice_points(poly):
        seed = FqMatrix(2, superclass_representative(poly, mu))
        orbit = orbit_closure(seed, "two-sided", poly.beta, poly.poset, 2, group="parabolic", kind="element")
        assert {block_label(x, poly.beta, poly.poset) for x in orbit} == {mu}


@pytest.mark.parametrize("q,max_size", [(2, 4), (3, 3)])
def test_representatives_are_sparsest_in_their_superclass(q, max_size):
    for n in range(1, max_size + 1):
        for beta in compositions_of(n):
            for poset in enumerate_normal_subposets(beta.length):
                poly = UnipotentPolytope(beta, poset)
                for mu in enumerate_lattice_points(poly):
                    seed = FqMatrix(q, superclass_representative(poly, mu))
                    assert block_label(seed, beta, poset, strict=True) == mu
                    assert len(seed.nonzero_cells()) == rank(seed) == size(mu)
                    orbit = orbit_closure(seed, "two-sided", beta, poset, q, group="parabolic", kind="element")
                    assert len(orbit) == superclass_size(poly, mu, q), (poly.describe(), mu.to_text())
                    assert all(block_label(x, beta, poset) == mu for x in orbit)
                    assert min(len(x.nonzero_cells()) for x in orbit) == size(mu)


def test_orbit_closure_arguments():
    poly = UnipotentPolytope.chain((1, 1))
    seed = FqMatrix.zeros(2, 2)
    with pytest.raises(ValidationError):
        orbit_closure(seed, "up", poly.beta, poly.poset, 2)
    with pytest.raises(ValidationError):
        orbit_closure(seed, "left", poly.beta, poly.poset, 2, kind="vector")
    with pytest.raises(ValidationError):
        orbit_closure(seed, "left", poly.beta, poly.poset, 3)
    big = UnipotentPolytope.chain((2, 2))
    seed = FqMatrix(2, superclass_representative(big, Tableau.from_map(big.cells, {(1, 2): 2})))
    with pytest.raises(EnumerationLimitError):
        orbit_closure(seed, "two-sided", big.beta, big.poset, 2, group="parabolic", budget=2)


@pytest.mark.parametrize("q", [4, 9, 25, 49, 1])
def test_oracle_rejects_prime_powers_and_units(q):
    with pytest.raises(ValidationError):
        FqMatrix.zeros(q, 2)


@pytest.mark.parametrize("q", [2, 3, 7, 23])
def test_oracle_accepts_primes(q):
    assert rank(FqMatrix.identity(q, 2)) == 2
