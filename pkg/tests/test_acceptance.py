"""Acceptance criteria 1-7.  Each check is tagged with its criterion number and
the terminal summary prints one pass/fail line per criterion."""

import itertools
import json
import random
import subprocess
import sys
import textwrap
import time
from fractions import Fraction

import numpy as np
import pytest

from qutrit_mub import mub, states, tomography
from qutrit_mub.cyclotomic import CycMatrix
from qutrit_mub.factor_group import coset_columns, verify_factor_theorem
from qutrit_mub.mcs import classify, enumerate_all_mcs, from_strings
from qutrit_mub.partition import (budget_solutions, enumerate_partitions, group_by_separable,
                                  verify_coexistence)
from qutrit_mub.pauli import PauliOp, all_ops, format_op, parse_op

pytestmark = pytest.mark.usefixtures("criterion")


def timed_in_fresh_process(code: str) -> tuple[float, dict]:
    """Run ``code`` in a new interpreter (cold caches); it must set ``result``."""
    script = "import json, time\nt0 = time.perf_counter()\n" + textwrap.dedent(code) + (
        "\nprint(json.dumps({'seconds': time.perf_counter() - t0, 'result': result}))\n")
    out = subprocess.run([sys.executable, "-c", script], capture_output=True, text=True, check=True)
    doc = json.loads(out.stdout.splitlines()[-1])
    return doc["seconds"], doc["result"]


# criterion 1: one qutrit

@pytest.mark.criterion(1)
def test_one_qutrit_mcs_and_partition(n1_partition):
    assert len(enumerate_all_mcs(1)) == 4
    assert len(enumerate_partitions(1)) == 1
    assert len(n1_partition.mcs_list) == 4


@pytest.mark.criterion(1)
def test_one_qutrit_overlaps_are_one_third(n1_partition):
    bases = mub.partition_bases(n1_partition)
    for a, b in itertools.combinations(bases, 2):
        for p in a.projectors:
            for q in b.projectors:
                assert (p @ q).trace() == Fraction(1, 3)


@pytest.mark.criterion(1)
def test_one_qutrit_factor_layouts(n1_partition):
    assert coset_columns(from_strings("Z")) == {"R": {"X", "Y", "V"}, "L": {"X2", "Y2", "V2"}}
    assert coset_columns(from_strings("X")) == {"R": {"V", "Y2", "Z2"}, "L": {"V2", "Y", "Z"}}
    for k, e in enumerate(n1_partition.mcs_list):
        assert verify_factor_theorem(n1_partition, k).ok
        cols = coset_columns(e)
        squares = {format_op((parse_op(t) ** 2).canonical()) for t in cols["R"]}
        assert squares == cols["L"]
        others = [m for m in n1_partition.mcs_list if m != e]
        for col in cols.values():
            assert sorted(sum(parse_op(t) in m for t in col) for m in others) == [1, 1, 1]


@pytest.mark.criterion(1)
def test_one_qutrit_runtime():
    seconds, ok = timed_in_fresh_process("""
        from qutrit_mub import mub
        from qutrit_mub.mcs import enumerate_all_mcs
        from qutrit_mub.partition import enumerate_partitions
        from qutrit_mub.factor_group import verify_factor_theorem
        t0 = time.perf_counter()
        p = enumerate_partitions(1)[0]
        ok = len(enumerate_all_mcs(1)) == 4
        ok &= mub.verify_mutually_unbiased(mub.partition_bases(p)).ok
        ok &= all(verify_factor_theorem(p, k).ok for k in range(4))
        result = ok
    """)
    assert ok and seconds < 1.0, seconds


# criterion 2: two qutrits

@pytest.mark.criterion(2)
def test_two_qutrit_census():
    assert len(enumerate_all_mcs(2)) == 40 == (3 + 1) * (9 + 1)


@pytest.mark.criterion(2)
def test_two_qutrit_partition_count_is_48(n2_partitions):
    assert len(n2_partitions) == 48


@pytest.mark.criterion(2)
def test_two_qutrit_structure_4s_6b(n2_partitions):
    assert {str(p.structure) for p in n2_partitions} == {"4S+6B"}


@pytest.mark.criterion(2)
def test_two_qutrit_24_quartets_times_2(n2_partitions):
    groups = group_by_separable(n2_partitions)
    assert len(groups) == 24
    assert all(len(v) == 2 for v in groups.values())


@pytest.mark.criterion(2)
def test_worked_partition_overlaps_are_one_ninth(worked_bases):
    assert len(worked_bases) == 10
    for a, b in itertools.combinations(worked_bases, 2):
        for p in a.projectors:
            for q in b.projectors:
                assert (p @ q).trace() == Fraction(1, 9)


@pytest.mark.criterion(2)
def test_two_qutrit_runtime():
    seconds, ok = timed_in_fresh_process("""
        from qutrit_mub import mub
        from qutrit_mub.mcs import enumerate_all_mcs
        from qutrit_mub.partition import enumerate_partitions
        from qutrit_mub.reference import two_qutrit_partition
        ok = len(enumerate_all_mcs(2)) == 40
        parts = enumerate_partitions(2)
        ok &= all(str(p.structure) == "4S+6B" for p in parts)
        ok &= mub.verify_mutually_unbiased(mub.partition_bases(two_qutrit_partition())).ok
        result = ok
    """)
    assert ok and seconds < 30.0, seconds


# criterion 3: three qutrits

@pytest.mark.criterion(3)
def test_three_qutrit_census_and_profiles():
    catalog = enumerate_all_mcs(3)
    assert len(catalog) == 1120
    kinds = [classify(m).kind for m in catalog]  # raises on an unknown profile
    assert {k: kinds.count(k) for k in set(kinds)} == {"S": 64, "SB": 288, "G": 768}


@pytest.mark.criterion(3)
def test_three_qutrit_witnesses(witnesses):
    found = {k for k, p in witnesses.items() if p is not None}
    assert 4 in found and len(found) >= 2
    assert {str(s) for s in budget_solutions(3)} == {str(witnesses[k].structure) for k in found}
    for k in found:
        assert verify_coexistence(witnesses[k].structure).ok


@pytest.mark.criterion(3)
@pytest.mark.parametrize("k", range(5))
def test_three_qutrit_factor_theorem(witnesses, k):
    p = witnesses[k]
    assert len(p.mcs_list) == 28
    for a in range(28):
        rep = verify_factor_theorem(p, a)
        assert rep.ok, rep.violations[:3]


@pytest.mark.criterion(3)
def test_three_qutrit_runtime():
    seconds, found = timed_in_fresh_process("""
        from qutrit_mub.mcs import classify, enumerate_all_mcs
        from qutrit_mub.partition import find_partition_with_structure
        for m in enumerate_all_mcs(3):
            classify(m)
        result = [k for k in range(5) if find_partition_with_structure(k, 3) is not None]
    """)
    assert 4 in found and seconds < 600, seconds


# criterion 4: operator algebra

@pytest.mark.criterion(4)
def test_one_qutrit_multiplication_rules():
    rep = mub.one_qutrit_rules()
    assert rep.ok and rep.checked == 54, rep.failures


@pytest.mark.criterion(4)
def test_observable_gram():
    obs = mub.hermitian_observables(1)
    gram = mub.observable_gram(obs)
    assert len(obs) == 8
    assert all(gram[i][j] == (2 if i == j else 0) for i in range(8) for j in range(8))


@pytest.mark.criterion(4)
@pytest.mark.parametrize("n", [1, 2])
def test_hermitean_identities_exhaustive(n):
    rep = mub.verify_hermitian_pairs(all_ops(n))
    assert rep.ok and rep.checked, rep.failures


@pytest.mark.criterion(4)
def test_hermitean_identities_three_qutrits_sampled():
    ops = [PauliOp.from_index(3, i) for i in random.Random(2024).sample(range(1, 729), 60)]
    rep = mub.verify_hermitian_pairs(ops)
    assert rep.ok, rep.failures


# criterion 5: named states

@pytest.mark.criterion(5)
def test_expansion_shapes():
    for key, rep in states.expansion_shapes().items():
        assert rep.ok and rep.checked, (key, rep.failures)


@pytest.mark.criterion(5)
def test_aharonov_decomposition():
    # in exponent labels the singlet is G(1,2,0) - G(2,1,0)
    dec = states.aharonov_decomposition()
    assert [lab for lab, _ in dec] == [(1, 2, 0), (2, 1, 0)]
    assert [str(c) for _, c in dec] == ["1", "-1"]
    g = states.ghz_basis()
    assert g.state((1, 2, 0)) - g.state((2, 1, 0)) == states.aharonov()


@pytest.mark.criterion(5)
def test_ghz_and_bell_reduced_states(worked_bases):
    assert states.rdms_maximally_mixed(states.ghz_basis())
    assert states.rdms_maximally_mixed(states.ghz_prime())
    bells = [b for b in worked_bases if b.source.kind == "B"]
    assert len(bells) == 6
    assert all(states.rdms_maximally_mixed(b) for b in bells)


# criterion 6: tomography

@pytest.mark.criterion(6)
def test_tomography_two_qutrits(worked_partition):
    bases = mub.partition_bases(worked_partition)
    for seed in range(100):
        rho = tomography.random_mixture(np.random.default_rng(seed), 2)
        table, back, ok = tomography.roundtrip(rho, bases)
        assert ok and back == rho, seed


@pytest.mark.criterion(6)
def test_tomography_three_qutrits(witness_bases):
    bases = witness_bases[4]
    for seed in range(10):
        rho = tomography.random_mixture(np.random.default_rng(1000 + seed), 3)
        table, back, ok = tomography.roundtrip(rho, bases)
        assert ok and back == rho, seed


# criterion 7: property suite

def constructed_partitions(n1_partition, n2_partitions, witnesses):
    return [n1_partition, *n2_partitions, *(p for p in witnesses.values() if p is not None)]


@pytest.mark.criterion(7)
def test_projectors_idempotent_hermitian_complete(n1_partition, n2_partitions, witness_bases):
    groups = [mub.partition_bases(n1_partition), mub.partition_bases(n2_partitions[0]),
              *witness_bases.values()]
    for bases in groups:
        for b in bases:
            total = CycMatrix.zeros(b.dim)
            for p in b.projectors:
                assert p @ p == p
                assert p.is_hermitian()
                total = total + p
            assert total == CycMatrix.identity(b.dim)


@pytest.mark.criterion(7)
def test_operator_orthonormality_every_partition(n1_partition, n2_partitions, witnesses):
    for p in constructed_partitions(n1_partition, n2_partitions, witnesses):
        rep = mub.verify_operator_orthonormality(p)
        assert rep.ok, rep.failures[:3]


@pytest.mark.criterion(7)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_homomorphism(n):
    ops = [parse_op("I" * n)] + all_ops(n)
    if n == 3:
        ops = random.Random(7).sample(ops, 60)
    rep = mub.verify_homomorphism(ops, ops[:30])
    assert rep.ok, rep.failures[:3]
