"""Exact state tomography from a complete set of mutually unbiased bases.

With 3^N + 1 bases from a partition, the outcome probabilities
p[A][alpha] = Tr(rho P[A][alpha]) determine rho through

    rho = sum_{A, alpha} p[A][alpha] P[A][alpha] - I.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cyclotomic import CycMatrix, linear_combination, stack_flat, trace_gram
from .mcs import enumerate_all_mcs
from .mub import BasisSet, CheckReport, basis_from_mcs, partition_bases, projector_of
from .partition import Partition
from .pauli import all_ops, to_matrix


class TomographyError(ValueError):
    pass


@dataclass(frozen=True)
class ProbTable:
    """rows[A][alpha]; one row per basis, in the order of ``names``."""

    names: tuple[str, ...]
    labels: tuple[tuple[int, ...], ...]
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        for name, row in zip(self.names, self.rows):
            if len(row) != len(self.labels):
                raise TomographyError(f"row {name} has {len(row)} entries, expected {len(self.labels)}")
            if sum(row) != 1:
                raise TomographyError(f"row {name} sums to {sum(row)}")
            if any(not 0 <= p <= 1 for p in row):
                raise TomographyError(f"row {name} has an entry outside [0, 1]")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["basis", *("".join(map(str, lab)) for lab in self.labels)])
        for name, row in zip(self.names, self.rows):
            w.writerow([name, *(f"{p.numerator}/{p.denominator}" for p in row)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> ProbTable:
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        labels = tuple(tuple(int(ch) for ch in cell) for cell in header[1:])
        names, rows = [], []
        for rec in reader:
            if not rec:
                continue
            names.append(rec[0])
            rows.append(tuple(Fraction(cell) for cell in rec[1:]))
        return cls(tuple(names), labels, tuple(rows))


def _check_complement(mubs: list[BasisSet]) -> None:
    if not mubs:
        raise TomographyError("no bases given")
    n = mubs[0].n_qutrits
    if len(mubs) != 3**n + 1:
        raise TomographyError(f"need {3**n + 1} bases for {n} qutrits, got {len(mubs)}")
    seen: set[int] = set()
    for b in mubs:
        if b.n_qutrits != n:
            raise TomographyError("bases act on different qutrit counts")
        if seen & b.source.member_set:
            raise TomographyError(f"{b.name()} overlaps an earlier basis")
        seen |= b.source.member_set


def _all_projectors(mubs: list[BasisSet]) -> list[CycMatrix]:
    return [p for b in mubs for p in b.projectors]


def probabilities(rho: CycMatrix, mubs: list[BasisSet]) -> ProbTable:
    _check_complement(mubs)
    if rho.shape != (mubs[0].dim, mubs[0].dim):
        raise TomographyError(f"density matrix of shape {rho.shape} does not match dimension {mubs[0].dim}")
    traces = trace_gram([rho], _all_projectors(mubs))
    d = mubs[0].dim
    rows = []
    for k, b in enumerate(mubs):
        row = []
        for j in range(d):
            t = traces[0, k * d + j]
            if not t.is_real():
                raise TomographyError(f"Tr(rho P) is not real for {b.name()}; rho is not Hermitean")
            row.append(t.a)
        rows.append(tuple(row))
    return ProbTable(tuple(b.name() for b in mubs), mubs[0].labels, tuple(rows))


def reconstruct(table: ProbTable, mubs: list[BasisSet]) -> CycMatrix:
    _check_complement(mubs)
    if len(table.rows) != len(mubs) or len(table.labels) != mubs[0].dim:
        raise TomographyError("table shape does not match the bases")
    coeffs = [p for row in table.rows for p in row]
    rho = linear_combination(coeffs, _all_projectors(mubs)) - CycMatrix.identity(mubs[0].dim)
    if not rho.is_hermitian() or rho.trace() != 1:
        raise AssertionError("reconstruction is not a Hermitean trace-1 matrix")
    return rho


def maximally_mixed(n: int) -> CycMatrix:
    return CycMatrix.identity(3**n).scale(Fraction(1, 3**n))


def verify_reconstruction_map(p: Partition, mubs: list[BasisSet] | None = None) -> CheckReport:
    """Check sum_P Tr(U P) P - Tr(U) I = U for every Pauli matrix U.

    The Pauli matrices span all operators, so this proves the reconstruction
    formula is exact on every trace-1 input.
    """
    mubs = mubs or partition_bases(p)
    rep = CheckReport("reconstruction map on the operator basis")
    n = p.n_qutrits
    ops = all_ops(n, include_identity=True)
    mats = [to_matrix(op) for op in ops]
    projectors = _all_projectors(mubs)
    coeffs = trace_gram(mats, projectors)
    mapped = coeffs @ stack_flat(projectors)
    ident = stack_flat([CycMatrix.identity(3**n)])
    traces = CycMatrix.column([m.trace() for m in mats])
    mapped = mapped - traces @ ident
    want = stack_flat(mats)
    rep.checked = len(ops)
    if mapped != want:
        for k, op in enumerate(ops):
            row = CycMatrix(mapped.re[k:k + 1], mapped.om[k:k + 1], mapped.den)
            if row != CycMatrix(want.re[k:k + 1], want.om[k:k + 1], want.den):
                rep.failures.append(f"map does not fix {op}")
    return rep


def random_vector(rng: np.random.Generator, dim: int, bound: int = 3) -> CycMatrix:
    """Nonzero vector with small random Q(w) integer amplitudes."""
    while True:
        re = rng.integers(-bound, bound + 1, size=(dim, 1))
        om = rng.integers(-bound, bound + 1, size=(dim, 1))
        v = CycMatrix(re, om, 1)
        if not v.is_zero():
            return v


def random_mixture(rng: np.random.Generator, n: int, terms: int = 5) -> CycMatrix:
    """Convex mixture with random rational weights of random pure states.

    Components alternate between eigenstates of random MCS's and generic
    vectors with integer Q(w) amplitudes.
    """
    catalog = enumerate_all_mcs(n)
    dim = 3**n
    weights = rng.integers(1, 10, size=terms)
    total = int(weights.sum())
    parts = []
    for k in range(terms):
        if k % 2 == 0:
            m = catalog[int(rng.integers(len(catalog)))]
            b = basis_from_mcs(m)
            parts.append(b.projectors[int(rng.integers(dim))])
        else:
            parts.append(projector_of(random_vector(rng, dim)))
    return linear_combination([Fraction(int(w), total) for w in weights], parts)


def roundtrip(rho: CycMatrix, mubs: list[BasisSet]) -> tuple[ProbTable, CycMatrix, bool]:
    table = probabilities(rho, mubs)
    back = reconstruct(table, mubs)
    return table, back, back == rho

