"""Cosets of an MCS subgroup and the coset/partition correspondence.

Phases are quotiented structurally: a coset of the subgroup generated by an
MCS (with identity and all three phases) is an affine class ``v + W`` of
exponent vectors.  Each coset is labelled by its symplectic pairings with
the MCS generators, which is a group isomorphism onto Z_3^N.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mcs import Mcs
from .partition import Partition
from .pauli import PauliOp, format_op, multiply, trit_space


@dataclass(frozen=True)
class Coset:
    base_mcs: Mcs
    representative: PauliOp
    members: frozenset[int]
    label: tuple[int, ...]

    def __len__(self):
        return len(self.members)

    def is_identity(self) -> bool:
        return not any(self.label)

    def member_ops(self) -> list[PauliOp]:
        n = self.base_mcs.n_qutrits
        return [PauliOp.from_index(n, i) for i in sorted(self.members)]


def coset_labels(a: Mcs) -> np.ndarray:
    """(9^N, N) array: label of every packed operator relative to ``a``."""
    space = trit_space(a.n_qutrits)
    gens = [g.index for g in a.generators]
    return space.sym[gens, :].T.astype(np.int64)


def label_of(a: Mcs, op: PauliOp) -> tuple[int, ...]:
    return tuple(int(v) for v in coset_labels(a)[op.index])


def cosets(a: Mcs) -> list[Coset]:
    """The 3^N cosets, ordered by label; the first one is ``a`` plus the identity."""
    n = a.n_qutrits
    labels = coset_labels(a)
    groups: dict[tuple[int, ...], list[int]] = {}
    for idx, lab in enumerate(map(tuple, labels.tolist())):
        groups.setdefault(lab, []).append(idx)
    out = []
    for lab in sorted(groups):
        members = groups[lab]
        out.append(Coset(a, PauliOp.from_index(n, min(members)), frozenset(members), lab))
    return out


@dataclass
class FactorReport:
    partition: Partition
    identity_index: int
    cosets: list[Coset]
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def table(self, order: list[Mcs] | None = None) -> str:
        return coset_table(self.partition.mcs_list[self.identity_index],
                           order or [m for k, m in enumerate(self.partition.mcs_list)
                                     if k != self.identity_index])


def element_order(a: Mcs) -> list[PauliOp]:
    """Members of ``a`` plus identity, listed by generator coordinates."""
    n = a.n_qutrits
    space = trit_space(n)
    _, idx = space.coords([g.index for g in a.generators])
    return [PauliOp.from_index(n, int(i)) for i in idx]


def coset_table(e: Mcs, others: list[Mcs]) -> str:
    """Text layout: first row is ``e``; each further row is one MCS, with its
    members placed under the coset they belong to."""
    cs = cosets(e)
    labels = coset_labels(e)
    col = {c.label: k for k, c in enumerate(cs)}
    rows = [[format_op(op) for op in element_order(e)]]
    for m in others:
        row = [""] * len(cs)
        for i in m.members:
            k = col[tuple(int(v) for v in labels[i])]
            row[k] = (row[k] + " " if row[k] else "") + format_op(PauliOp.from_index(e.n_qutrits, i))
        rows.append(row)
    names = [label_name(c.label) for c in cs]
    width = max(len(s) for r in rows + [names] for s in r) + 1
    rule = "-" * (width * len(cs))
    fmt = lambda r: "".join(s.rjust(width) for s in r)  # noqa: E731
    lines = [rule, fmt(rows[0]), rule, *(fmt(r) for r in rows[1:]), rule, fmt(names), rule]
    return "\n".join(lines)


def verify_factor_theorem(p: Partition, a_index: int) -> FactorReport:
    """Check that every non-identity coset of MCS ``a_index`` meets each
    other MCS of ``p`` exactly once, and that the coset product matches
    trit-vector addition of labels."""
    if not 0 <= a_index < len(p.mcs_list):
        raise IndexError(f"MCS index {a_index} out of range")
    a = p.mcs_list[a_index]
    n = a.n_qutrits
    cs = cosets(a)
    report = FactorReport(p, a_index, cs)
    bad = report.violations
    labels = coset_labels(a)

    if len(cs) != 3**n:
        bad.append(f"{len(cs)} cosets instead of {3**n}")
    if sum(len(c) for c in cs) != 9**n:
        bad.append("cosets do not cover all operators exactly once")
    for c in cs:
        if len(c) != 3**n:
            bad.append(f"coset {c.label} has {len(c)} members")
    ident = cs[0]
    if not ident.is_identity() or ident.members != a.member_set | {0}:
        bad.append("identity coset differs from the MCS plus identity")

    for c in cs[1:]:
        for k, b in enumerate(p.mcs_list):
            if k == a_index:
                continue
            hits = len(c.members & b.member_set)
            if hits != 1:
                bad.append(f"coset {c.label} meets {b!r} in {hits} operators")

    # coset of a product is the sum of the coset labels
    for u in cs:
        for v in cs:
            w = multiply(u.representative, v.representative)
            got = tuple(int(t) for t in labels[w.index])
            want = tuple((s + t) % 3 for s, t in zip(u.label, v.label))
            if got != want:
                bad.append(f"coset product {u.label}*{v.label} gave {got}")

    # each other MCS (with identity) maps isomorphically onto the cosets
    space = trit_space(n)
    for k, b in enumerate(p.mcs_list):
        if k == a_index:
            continue
        coords, idx = space.coords([g.index for g in b.generators])
        images = labels[idx] % 3
        if len({tuple(r) for r in images.tolist()}) != 3**n:
            bad.append(f"{b!r} does not map onto every coset")
            continue
        gen_images = labels[[g.index for g in b.generators]]
        if not np.array_equal(images, (coords @ gen_images) % 3):
            bad.append(f"{b!r} -> cosets is not a homomorphism")
    return report


def label_name(label: tuple[int, ...]) -> str:
    return "".join("ERL"[v] for v in label)


def coset_columns(a: Mcs) -> dict[str, set[str]]:
    """Nonidentity cosets by name (E/R/L per generator), listing their
    phase-0 members that lie outside ``a``."""
    return {label_name(c.label): {format_op(op) for op in c.member_ops()}
            for c in cosets(a) if not c.is_identity()}
