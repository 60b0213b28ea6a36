"""Maximally commuting subsets (MCS's) as Lagrangian subspaces of Z_3^(2N).

An MCS together with the identity is an N-dimensional subspace of the
exponent space on which the symplectic form vanishes.  Enumeration walks
generator sequences in packed-index order and only keeps the greedy
(lexicographically smallest) basis of each subspace, so every subspace is
produced once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .pauli import PauliOp, format_op, symplectic_form, trit_space

MAX_ENUM_QUTRITS = 3

# body-count profiles (1-body, 2-body, ...) that identify each class
PROFILES = {
    1: {(2,): "S"},
    2: {(4, 4): "S", (0, 8): "B"},
    3: {(6, 12, 8): "S", (2, 8, 16): "SB", (0, 6, 20): "G"},
}


class McsError(ValueError):
    pass


class TheoremViolation(AssertionError):
    """A computed object contradicts a structural theorem the library relies on."""


@dataclass(frozen=True)
class EntanglementClass:
    kind: str
    profile: tuple[int, ...]
    # qutrits (1-based) carrying one-body members; only meaningful for SB
    pure_slots: tuple[int, ...] = field(default=(), compare=False)

    def __str__(self):
        return self.kind


@dataclass(frozen=True, eq=False)
class Mcs:
    n_qutrits: int
    generators: tuple[PauliOp, ...]
    members: tuple[int, ...]

    @property
    def key(self) -> tuple[int, ...]:
        return self.members

    def __eq__(self, other):
        if not isinstance(other, Mcs):
            return NotImplemented
        return self.n_qutrits == other.n_qutrits and self.members == other.members

    def __hash__(self):
        return hash((self.n_qutrits, self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, op: PauliOp) -> bool:
        return op.n_qutrits == self.n_qutrits and op.index in self.member_set

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def mask(self) -> int:
        """Bitset of members over the packed indices."""
        out = 0
        for i in self.members:
            out |= 1 << i
        return out

    def member_ops(self) -> list[PauliOp]:
        return [PauliOp.from_index(self.n_qutrits, i) for i in self.members]

    @cached_property
    def profile(self) -> tuple[int, ...]:
        body = trit_space(self.n_qutrits).body[list(self.members)]
        return tuple(int((body == k).sum()) for k in range(1, self.n_qutrits + 1))

    @cached_property
    def kind(self) -> str:
        return classify(self).kind

    def label(self) -> str:
        return "(" + ",".join(format_op(g) for g in self.generators) + ")"

    def __repr__(self):
        return f"Mcs{self.label()}"


def _members_of(n: int, gens) -> tuple[int, ...]:
    members = trit_space(n).span([g.index for g in gens])
    return tuple(int(i) for i in members if i != 0)


def span(generators) -> Mcs:
    """The MCS generated by N commuting, independent, phase-0 operators."""
    gens = tuple(generators)
    if not gens:
        raise McsError("no generators given")
    n = gens[0].n_qutrits
    if len(gens) != n:
        raise McsError(f"need exactly {n} generators for {n} qutrits, got {len(gens)}")
    for g in gens:
        if g.n_qutrits != n:
            raise McsError("generators act on different qutrit counts")
        if g.phase != 0:
            raise McsError(f"generator {format_op(g)} is not phase-0")
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            t = symplectic_form(a, b)
            if t:
                raise McsError(f"generators {format_op(a)} and {format_op(b)} "
                               f"do not commute (symplectic form {t})")
    members = _members_of(n, gens)
    if len(members) != 3**n - 1:
        raise McsError("generators are not independent")
    return Mcs(n, gens, members)


def from_strings(texts, n: int | None = None) -> Mcs:
    from .pauli import parse_op
    if isinstance(texts, str):
        texts = texts.replace(",", " ").split()
    return span(parse_op(t, n) for t in texts)


def _lagrangian_bases(n: int) -> list[list[int]]:
    space = trit_space(n)
    sym = space.sym
    found = []

    def extend(gens: list[int], members: np.ndarray, inside: np.ndarray):
        if len(gens) == n:
            found.append(list(gens))
            return
        start = gens[-1] + 1 if gens else 1
        cand = np.arange(start, space.size)
        ok = ~inside[cand]
        if gens:
            ok &= ~sym[np.ix_(cand, gens)].any(axis=1)
        cand = cand[ok]
        if not cand.size:
            return
        # v must be the smallest vector it adds to the span
        s1 = space.add(cand[:, None], members[None, :])
        s2 = space.add(space.scale(cand, 2)[:, None], members[None, :])
        keep = (s1.min(axis=1) >= cand) & (s2.min(axis=1) >= cand)
        for v, row1, row2 in zip(cand[keep], s1[keep], s2[keep]):
            new_inside = inside.copy()
            new_inside[row1] = True
            new_inside[row2] = True
            extend(gens + [int(v)], np.concatenate([members, row1, row2]), new_inside)

    inside = np.zeros(space.size, dtype=bool)
    inside[0] = True
    extend([], np.array([0]), inside)
    return found


@lru_cache(maxsize=None)
def _all_mcs(n: int) -> tuple[Mcs, ...]:
    out = []
    for gens in _lagrangian_bases(n):
        ops = tuple(PauliOp.from_index(n, g) for g in gens)
        out.append(Mcs(n, ops, _members_of(n, ops)))
    out.sort(key=lambda m: m.members)
    return tuple(out)


def enumerate_all_mcs(n: int) -> list[Mcs]:
    """Every MCS of N qutrits, sorted by member key; generators are greedy minimal."""
    if not 1 <= n <= MAX_ENUM_QUTRITS:
        raise McsError(f"enumeration supports 1..{MAX_ENUM_QUTRITS} qutrits")
    return list(_all_mcs(n))


def expected_mcs_count(n: int) -> int:
    out = 1
    for i in range(1, n + 1):
        out *= 3**i + 1
    return out


def classify(m: Mcs) -> EntanglementClass:
    n = m.n_qutrits
    if n not in PROFILES:
        raise McsError(f"classification supports 1..{MAX_ENUM_QUTRITS} qutrits")
    kind = PROFILES[n].get(m.profile)
    if kind is None:
        raise TheoremViolation(f"{m!r} has body profile {m.profile}, "
                               f"which matches no known class for N={n}")
    space = trit_space(n)
    slots = set()
    for i in m.members:
        if space.body[i] == 1:
            slots.update(int(k) + 1 for k in np.nonzero((space.x[i] != 0) | (space.z[i] != 0))[0])
    return EntanglementClass(kind, m.profile, tuple(sorted(slots)))


def mcs_containing(a: PauliOp) -> list[Mcs]:
    if a.is_identity():
        raise McsError("the identity belongs to every MCS")
    idx = a.index
    return [m for m in enumerate_all_mcs(a.n_qutrits) if idx in m.member_set]


def is_maximal(m: Mcs) -> bool:
    """No canonical operator outside ``m`` commutes with all of its members."""
    space = trit_space(m.n_qutrits)
    gens = [g.index for g in m.generators]
    commuting = ~space.sym[:, gens].any(axis=1)
    commuting[0] = False
    return set(np.nonzero(commuting)[0].tolist()) == m.member_set
