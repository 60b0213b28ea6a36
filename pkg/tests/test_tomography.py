from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qutrit_mub import mub, states, tomography
from qutrit_mub.cyclotomic import CycMatrix, linear_combination
from qutrit_mub.mcs import enumerate_all_mcs
from qutrit_mub.partition import ExactCover, make_partition


@pytest.fixture(scope="module")
def mubs2(worked_partition):
    return mub.partition_bases(worked_partition)


def test_maximally_mixed(mubs2):
    rho = tomography.maximally_mixed(2)
    table = tomography.probabilities(rho, mubs2)
    assert all(p == Fraction(1, 9) for row in table.rows for p in row)
    assert tomography.reconstruct(table, mubs2) == rho


def test_basis_projector_rows(mubs2):
    for k, b in enumerate(mubs2):
        table = tomography.probabilities(b.projectors[4], mubs2)
        for j, row in enumerate(table.rows):
            if j == k:
                assert row == tuple(Fraction(int(i == 4)) for i in range(9))
            else:
                assert set(row) == {Fraction(1, 9)}


def test_every_worked_projector_round_trips(mubs2):
    for b in mubs2:
        for p in b.projectors:
            assert tomography.roundtrip(p, mubs2)[2]


def partition_through(m):
    catalog = enumerate_all_mcs(m.n_qutrits)
    engine = ExactCover(catalog)
    alive, uncovered = engine.start()
    seed = [catalog.index(m)]
    alive, uncovered = engine.choose(seed, alive, uncovered)
    sol = next(engine.solve(alive, uncovered, tuple(seed)))
    return make_partition(catalog[i] for i in sol)


def test_aharonov_ghz_row():
    ghz = states.ghz_basis()
    p = partition_through(ghz.source)
    bases = [ghz if m == ghz.source else mub.basis_from_mcs(m) for m in p.mcs_list]
    rho = mub.projector_of(states.aharonov())
    table = tomography.probabilities(rho, bases)
    row = table.rows[bases.index(ghz)]
    assert sorted(row) == [0] * 25 + [Fraction(1, 2)] * 2
    assert {ghz.labels[i] for i, v in enumerate(row) if v} == {(1, 2, 0), (2, 1, 0)}
    assert tomography.reconstruct(table, bases) == rho


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_mixtures_round_trip(mubs2, seed):
    rho = tomography.random_mixture(np.random.default_rng(seed), 2)
    assert rho.is_hermitian() and rho.trace() == 1
    assert tomography.roundtrip(rho, mubs2)[2]


def test_affine_in_table(mubs2):
    rng = np.random.default_rng(7)
    r1, r2 = tomography.random_mixture(rng, 2), tomography.random_mixture(rng, 2)
    t = Fraction(2, 7)
    mix = linear_combination([t, 1 - t], [r1, r2])
    t1, t2 = tomography.probabilities(r1, mubs2), tomography.probabilities(r2, mubs2)
    rows = tuple(tuple(t * a + (1 - t) * b for a, b in zip(x, y)) for x, y in zip(t1.rows, t2.rows))
    combined = tomography.ProbTable(t1.names, t1.labels, rows)
    assert combined == tomography.probabilities(mix, mubs2)
    assert tomography.reconstruct(combined, mubs2) == mix


def test_reconstruction_map(worked_partition, n1_partition, mubs2):
    assert tomography.verify_reconstruction_map(worked_partition, mubs2).ok
    assert tomography.verify_reconstruction_map(n1_partition).ok


def test_csv_round_trip(mubs2):
    rho = tomography.random_mixture(np.random.default_rng(1), 2)
    table = tomography.probabilities(rho, mubs2)
    text = table.to_csv()
    assert text.splitlines()[0] == "basis,00,01,02,10,11,12,20,21,22"
    assert "/" in text.splitlines()[1]
    assert tomography.ProbTable.from_csv(text) == table


def test_table_validation():
    with pytest.raises(tomography.TomographyError, match="sums"):
        tomography.ProbTable(("a",), ((0,), (1,), (2,)), ((Fraction(1, 2),) * 3,))
    with pytest.raises(tomography.TomographyError, match="outside"):
        tomography.ProbTable(("a",), ((0,), (1,), (2,)), ((Fraction(2), Fraction(-1), Fraction(0)),))


def test_rejects_incomplete_or_mismatched(mubs2):
    with pytest.raises(tomography.TomographyError):
        tomography.probabilities(tomography.maximally_mixed(2), mubs2[:-1])
    with pytest.raises(tomography.TomographyError):
        tomography.probabilities(tomography.maximally_mixed(1), mubs2)
    with pytest.raises(tomography.TomographyError):
        tomography.probabilities(tomography.maximally_mixed(2), mubs2[:-1] + mubs2[:1])


def test_non_hermitean_input_rejected(mubs2):
    m = CycMatrix.zeros(9)
    m.om[0, 1] = 1
    m = m + CycMatrix.identity(9).scale(Fraction(1, 9))
    with pytest.raises(tomography.TomographyError):
        tomography.probabilities(m, mubs2)
