"""The full theorem suite, as a ledger of named pass/fail entries."""

from __future__ import annotations

import itertools
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import mub, states
from .factor_group import coset_columns, label_name, label_of, verify_factor_theorem
from .mcs import TheoremViolation, classify, from_strings, enumerate_all_mcs, expected_mcs_count
from .partition import (KINDS, Partition, StructureCounts, budget_solutions,
                        enumerate_partitions, find_partition_with_structure,
                        group_by_separable, verify_coexistence)
from .pauli import all_ops, format_op, parse_op, to_matrix
from .reference import TWO_QUTRIT_ROWS, two_qutrit_partition, two_qutrit_rows
from .tomography import verify_reconstruction_map

log = logging.getLogger(__name__)

EXPECTED_PARTITIONS = {1: 1, 2: 48}
EXPECTED_QUARTETS = (24, 2)


@dataclass
class Entry:
    name: str
    ok: bool
    detail: str = ""

    def __str__(self):
        tail = f": {self.detail}" if self.detail else ""
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.name}{tail}"


class Ledger(list):
    def add(self, name: str, ok: bool, detail: str = "") -> Entry:
        e = Entry(name, bool(ok), detail)
        log.info("%s", e)
        self.append(e)
        return e

    def report(self, name: str, rep: mub.CheckReport) -> Entry:
        detail = f"{rep.checked} checked"
        if rep.failures:
            detail += f"; first failure: {rep.failures[0]}"
        return self.add(name, rep.ok, detail)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self)


def _class_census(n: int) -> dict[str, int]:
    out = dict.fromkeys(KINDS, 0)
    for m in enumerate_all_mcs(n):
        out[classify(m).kind] += 1
    return {k: v for k, v in out.items() if v}


def _census(ledger: Ledger, n: int) -> None:
    want = expected_mcs_count(n)
    got = len(enumerate_all_mcs(n))
    ledger.add("MCS census", got == want, f"{got} found, {want} expected")
    try:
        census = _class_census(n)
        ledger.add("every MCS matches a known body-count profile", True,
                   " + ".join(f"{v}{k}" for k, v in census.items()))
    except TheoremViolation as exc:
        ledger.add("every MCS matches a known body-count profile", False, str(exc))


def _partition_checks(ledger: Ledger, p: Partition, tag: str, bases=None) -> None:
    bases = bases or mub.partition_bases(p)
    orth = mub.CheckReport("")
    for b in bases:
        sub = mub.verify_orthonormal(b)
        orth.checked += sub.checked
        orth.failures += sub.failures
    ledger.report(f"{tag}: orthonormality of every basis", orth)
    ledger.report(f"{tag}: pairwise unbiasedness (overlap 1/{3**p.n_qutrits})",
                  mub.verify_mutually_unbiased(bases))
    try:
        kinds = [mub.classify_basis(b).kind for b in bases]
        ledger.add(f"{tag}: state-level classes agree with operator profiles", True,
                   str(StructureCounts(**{k: kinds.count(k) for k in KINDS})))
    except TheoremViolation as exc:
        ledger.add(f"{tag}: state-level classes agree with operator profiles", False, str(exc))
    recon = mub.CheckReport("")
    for b in bases:
        sub = mub.verify_spectral_reconstruction(b)
        recon.checked += sub.checked
        recon.failures += sub.failures
    ledger.report(f"{tag}: spectral reconstruction of every member", recon)
    ledger.report(f"{tag}: operator-basis orthonormality", mub.verify_operator_orthonormality(p))
    ledger.report(f"{tag}: tomography reconstruction map", verify_reconstruction_map(p, bases))


def _factor_checks(ledger: Ledger, parts: list[Partition], tag: str) -> None:
    total = passed = 0
    first = ""
    for p in parts:
        for k in range(len(p.mcs_list)):
            rep = verify_factor_theorem(p, k)
            total += 1
            passed += rep.ok
            if not rep.ok and not first:
                first = rep.violations[0]
    detail = f"{passed}/{total} pass" + (f"; first failure: {first}" if first else "")
    ledger.add(f"{tag}: coset factor-group theorem", passed == total, detail)


def _algebra_checks(ledger: Ledger, n: int, sample: int | None, seed: int = 0) -> None:
    ops = all_ops(n)
    if sample is not None and sample < len(ops):
        ops = random.Random(seed).sample(ops, sample)
        scope = f"{len(ops)} sampled"
    else:
        scope = "exhaustive"
    ledger.report(f"Hermitean pair identities ({scope})", mub.verify_hermitian_pairs(ops))
    with_id = [parse_op("I" * n)] + ops
    ledger.report(f"matrix representation homomorphism ({scope})",
                  mub.verify_homomorphism(with_id, with_id[: min(len(with_id), 40)]))


def verify_one() -> Ledger:
    ledger = Ledger()
    _census(ledger, 1)
    parts = enumerate_partitions(1)
    ledger.add("partition count", len(parts) == EXPECTED_PARTITIONS[1],
               f"{len(parts)} found, {EXPECTED_PARTITIONS[1]} expected")
    _partition_checks(ledger, parts[0], "one qutrit")
    _factor_checks(ledger, parts, "one-qutrit factor groups")
    layouts = {
        "Z": {"R": {"X", "Y", "V"}, "L": {"X2", "Y2", "V2"}},
        "X": {"R": {"V", "Y2", "Z2"}, "L": {"V2", "Y", "Z"}},
    }
    ok = all(coset_columns(from_strings(e, 1)) == cols for e, cols in layouts.items())
    ledger.add("one-qutrit coset columns for E = (I,Z,Z2) and E = (I,X,X2)", ok)
    ledger.report("one-qutrit E/R/L multiplication rules", mub.one_qutrit_rules())
    _algebra_checks(ledger, 1, None)
    obs = mub.hermitian_observables(1)
    try:
        gram = mub.observable_gram(obs)
        ok = all(gram[i][j] == (2 if i == j else 0) for i in range(len(obs)) for j in range(len(obs)))
        ledger.add("Tr(H_i H_j) = 2 delta_ij over the eight observables", ok, f"{len(obs)} observables")
    except TheoremViolation as exc:
        ledger.add("Tr(H_i H_j) = 2 delta_ij over the eight observables", False, str(exc))
    census = mub.spectrum_census(obs)
    ledger.add("observables split evenly between the two spectra",
               census["trinary"] == census["partner"] and not census["other"], str(census))
    return ledger


def verify_two(threads: int = 1) -> Ledger:
    ledger = Ledger()
    _census(ledger, 2)
    parts = enumerate_partitions(2, threads=threads)
    want = EXPECTED_PARTITIONS[2]
    ledger.add("partition count", len(parts) == want, f"{len(parts)} found, {want} expected")
    structures = {str(p.structure) for p in parts}
    ledger.add("every partition has structure 4S+6B", structures == {"4S+6B"}, ", ".join(sorted(structures)))
    groups = group_by_separable(parts)
    sizes = sorted({len(v) for v in groups.values()})
    ledger.add("S-quartets x completions = 24 x 2",
               len(groups) == EXPECTED_QUARTETS[0] and sizes == [EXPECTED_QUARTETS[1]],
               f"{len(groups)} quartets; completions per quartet "
               + ", ".join(f"{s}: {sum(len(v) == s for v in groups.values())}" for s in sizes))

    rows = two_qutrit_rows()
    listed = all(
        {format_op(op) for op in m.member_ops()} == {format_op(parse_op(t)) for t in row}
        for m, row in zip(rows, TWO_QUTRIT_ROWS))
    ref = two_qutrit_partition()
    ledger.add("worked two-qutrit partition: rows regenerate from their generators and partition the operators",
               listed and ref in parts)
    columns = [label_name(lab) for lab in itertools.product(range(3), repeat=2)][1:]
    placed = all(label_name(label_of(rows[0], parse_op(t))) == columns[k]
                 for row in TWO_QUTRIT_ROWS[1:] for k, t in enumerate(row))
    ledger.add("worked two-qutrit partition: every entry sits in its coset column", placed)
    bases = [mub.basis_from_mcs(m) for m in rows]
    _partition_checks(ledger, ref, "worked two-qutrit partition", bases)
    _factor_checks(ledger, parts, "all two-qutrit partitions")

    for key, rep in states.expansion_shapes(2).items():
        ledger.report(f"expansion shape: {rep.name}", rep)
    szz = states.product_basis("ZZ")
    nine = all(len(states.expand(s, szz)) == 9 for b in bases[1:] for s in b.states)
    ledger.add("every non-S(Z,Z) state of the worked partition has 9 terms in S(Z,Z)", nine)
    minimal = all(
        {k for k, v in states.expansion_lengths(b).items() if v == 3} == states.product_letters_in(b)
        and set(states.expansion_lengths(b).values()) == {3, 9}
        for b in bases if b.source.kind == "B")
    ledger.add("Bell states have 3-term expansions exactly in the product bases their MCS contains",
               minimal)
    ledger.add("Bell single-qutrit reduced states are I/3",
               all(states.rdms_maximally_mixed(b) for b in bases if b.source.kind == "B"))
    h = mub.hermitian_pair(parse_op("ZX"))
    explicit = (to_matrix(parse_op("ZX")) - to_matrix(parse_op("Z2X2"))).scale(1 / mub.I_SQRT3)
    ledger.add("H(ZX) = (ZX - Z2X2)/(i sqrt3)", h.H == explicit)
    _algebra_checks(ledger, 2, None)
    return ledger


def _witness(k: int) -> tuple[int, Partition | None]:
    return k, find_partition_with_structure(k, 3)


def verify_three(threads: int = 1, separable=(0, 1, 2, 3, 4)) -> Ledger:
    ledger = Ledger()
    _census(ledger, 3)
    sols = budget_solutions(3)
    ledger.add("operator-budget solutions", len(sols) == 5, ", ".join(map(str, sols)))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        witnesses = dict(pool.map(_witness, separable))
    found = []
    for k in sorted(witnesses):
        p = witnesses[k]
        if p is None:
            ledger.add(f"witness partition with {k}S", False, "search exhausted without a partition")
            continue
        cx = verify_coexistence(p.structure)
        ledger.add(f"witness partition with {k}S satisfies the operator budget", cx.ok, str(p.structure))
        found.append(p)
    _factor_checks(ledger, found, "three-qutrit witnesses")
    for p in found:
        _partition_checks(ledger, p, f"witness {p.structure}")

    for key, rep in states.expansion_shapes(3).items():
        ledger.report(f"expansion shape: {rep.name}", rep)
    g = states.ghz_basis()
    sxxx = states.product_basis("XXX")
    ledger.add("GHZ states need 9 terms in S(XXX)",
               all(len(states.expand(s, sxxx)) == 9 for s in g.states))
    ledger.add("GHZ single-qutrit reduced states are I/3", states.rdms_maximally_mixed(g))
    ghz0 = states.expand(g.state((0, 0, 0)), states.product_basis("ZZZ"))
    ledger.add("GHZ (0,0,0) = |000> + |111> + |222>",
               [(lab, str(c)) for lab, c in ghz0.relative()]
               == [((0, 0, 0), "1"), ((1, 1, 1), "1"), ((2, 2, 2), "1")])
    sb = states.sb_basis(1, "Z")
    cls = mub.classify_basis(sb)
    ledger.add("SB basis: qutrit 1 pure, qutrits 2 and 3 maximally mixed",
               cls.kind == "SB" and cls.pure_slots == (1,))
    dec = states.aharonov_decomposition()
    labels = [lab for lab, _ in dec]
    coeffs = [str(c) for _, c in dec]
    ledger.add("Aharonov state = G(1,2,0) - G(2,1,0) (exponent labels)",
               labels == [(1, 2, 0), (2, 1, 0)] and coeffs == ["1", "-1"],
               f"found {list(zip(labels, coeffs))}; norm^2 {mub.state_norm2(states.aharonov())}")
    a = states.aharonov()
    xxx = to_matrix(parse_op("XXX"))
    ledger.add("Aharonov state is an XXX eigenstate with eigenvalue 1", xxx @ a == a)
    _algebra_checks(ledger, 3, 40)
    return ledger


def verify_all(n: int, threads: int = 1) -> Ledger:
    if n == 1:
        return verify_one()
    if n == 2:
        return verify_two(threads)
    if n == 3:
        return verify_three(threads)
    raise ValueError("verify supports N = 1, 2, 3")

