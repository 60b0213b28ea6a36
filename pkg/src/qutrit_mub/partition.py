"""Partitions of the nonidentity Pauli operators into disjoint MCS's.

A partition is an exact cover of the 9^N - 1 canonical operators by MCS
member sets.  The engine is plain Algorithm X over a boolean incidence
matrix: branch on the operator covered by the fewest live MCS's, and drop
every MCS that meets the one just chosen.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .mcs import PROFILES, Mcs, TheoremViolation, enumerate_all_mcs, trit_space

log = logging.getLogger(__name__)

SCHEMA = "qutrit-mub/1"
KINDS = ("S", "B", "SB", "G")


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class StructureCounts:
    S: int = 0
    B: int = 0
    SB: int = 0
    G: int = 0

    @property
    def total(self) -> int:
        return self.S + self.B + self.SB + self.G

    def as_dict(self) -> dict[str, int]:
        return {k: getattr(self, k) for k in KINDS}

    def __str__(self):
        return "+".join(f"{v}{k}" for k, v in self.as_dict().items() if v)


@dataclass(frozen=True, eq=False)
class Partition:
    n_qutrits: int
    mcs_list: tuple[Mcs, ...]

    @property
    def key(self) -> frozenset:
        return frozenset(m.key for m in self.mcs_list)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __len__(self):
        return len(self.mcs_list)

    def __iter__(self):
        return iter(self.mcs_list)

    @cached_property
    def structure(self) -> StructureCounts:
        return structure(self)

    def separable(self) -> tuple[Mcs, ...]:
        return tuple(m for m in self.mcs_list if m.kind == "S")

    def check(self) -> None:
        """Recount disjointness and coverage from the raw member sets."""
        n = self.n_qutrits
        if len(self.mcs_list) != 3**n + 1:
            raise TheoremViolation(f"partition has {len(self.mcs_list)} MCS's, expected {3**n + 1}")
        seen: dict[int, Mcs] = {}
        for m in self.mcs_list:
            for op in m.members:
                if op == 0:
                    raise TheoremViolation(f"{m!r} contains the identity")
                if op in seen:
                    raise TheoremViolation(f"operator {op} lies in both {seen[op]!r} and {m!r}")
                seen[op] = m
        if set(seen) != set(range(1, 9**n)):
            raise TheoremViolation("partition does not cover every nonidentity operator")

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "n": self.n_qutrits,
            "mcs": [mcs_to_json(m) for m in self.mcs_list],
            "structure": self.structure.as_dict(),
        }


def mcs_to_json(m: Mcs) -> dict:
    return {
        "generators": [str(g) for g in m.generators],
        "members": [str(op) for op in m.member_ops()],
        "class": m.kind,
        "profile": list(m.profile),
    }


def make_partition(mcs_list) -> Partition:
    mcs_list = tuple(sorted(mcs_list, key=lambda m: m.key))
    p = Partition(mcs_list[0].n_qutrits, mcs_list)
    p.check()
    return p


def structure(p: Partition) -> StructureCounts:
    counts = dict.fromkeys(KINDS, 0)
    for m in p.mcs_list:
        counts[m.kind] += 1
    return StructureCounts(**counts)


class ExactCover:
    """Algorithm X over a fixed catalog of MCS's."""

    def __init__(self, catalog: list[Mcs]):
        self.catalog = list(catalog)
        n = self.catalog[0].n_qutrits
        inc = np.zeros((len(self.catalog), 9**n), dtype=bool)
        for k, m in enumerate(self.catalog):
            inc[k, list(m.members)] = True
        self.inc = inc[:, 1:]
        self._incf = self.inc.astype(np.float32)
        self.conflict = (self._incf @ self._incf.T) > 0
        self.nodes = 0

    def start(self):
        return np.ones(len(self.catalog), dtype=bool), np.ones(self.inc.shape[1], dtype=bool)

    def choose(self, chosen, alive, uncovered):
        for c in chosen:
            if not alive[c]:
                raise ValueError(f"seed {self.catalog[c]!r} overlaps an earlier seed")
            alive = alive & ~self.conflict[c]
            uncovered = uncovered & ~self.inc[c]
        return alive, uncovered

    def branch(self, alive, uncovered):
        """Candidate set indices for the most constrained uncovered item."""
        counts = alive.astype(np.float32) @ self._incf
        counts[~uncovered] = np.inf
        item = int(np.argmin(counts))
        if counts[item] == 0:
            return np.empty(0, dtype=np.int64)
        return np.nonzero(alive & self.inc[:, item])[0]

    def solve(self, alive, uncovered, chosen=(), node_limit=None):
        """Yield every exact cover extending ``chosen`` (lists of catalog indices)."""
        self.nodes += 1
        if node_limit is not None and self.nodes > node_limit:
            raise SearchBudgetExceeded(f"exceeded {node_limit} search nodes")
        if not uncovered.any():
            yield list(chosen)
            return
        for c in self.branch(alive, uncovered):
            yield from self.solve(alive & ~self.conflict[c], uncovered & ~self.inc[c],
                                  (*chosen, int(c)), node_limit)


def enumerate_partitions(n: int, threads: int = 1) -> list[Partition]:
    """Every partition for N <= 2, sorted by their sorted MCS keys."""
    if n not in (1, 2):
        raise ValueError("full partition enumeration is only supported for N = 1, 2")
    engine = ExactCover(enumerate_all_mcs(n))
    alive, uncovered = engine.start()
    first = engine.branch(alive, uncovered)

    # branches share the read-only tables; only the node statistic races
    def subtree(c):
        a, u = engine.choose([c], alive, uncovered)
        return list(engine.solve(a, u, (int(c),)))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            groups = list(pool.map(subtree, first))
    else:
        groups = [subtree(c) for c in first]
    parts = {make_partition(engine.catalog[i] for i in sol)
             for sols in groups for sol in sols}
    return sorted(parts, key=lambda p: sorted(m.key for m in p.mcs_list))


def group_by_separable(partitions: list[Partition]) -> dict[frozenset, list[Partition]]:
    groups: dict[frozenset, list[Partition]] = {}
    for p in partitions:
        groups.setdefault(frozenset(m.key for m in p.separable()), []).append(p)
    return groups


def _disjoint_separable_seeds(catalog: list[Mcs], engine: ExactCover, k: int):
    sep = [i for i, m in enumerate(catalog) if m.kind == "S"]
    for combo in itertools.combinations(sep, k):
        if all(not engine.conflict[a, b] for a, b in itertools.combinations(combo, 2)):
            yield combo


def find_partition_with_structure(n_separable: int, n: int = 3,
                                  node_limit: int | None = None) -> Partition | None:
    """A partition with exactly ``n_separable`` separable MCS's, or None.

    The requested separable MCS's are seeded first and every other
    separable MCS is removed from the catalog, so any cover found has the
    requested count.  None means every seed was searched to exhaustion.
    """
    catalog = enumerate_all_mcs(n)
    engine = ExactCover(catalog)
    alive0, uncovered0 = engine.start()
    sep_mask = np.array([m.kind == "S" for m in catalog])
    for seed in _disjoint_separable_seeds(catalog, engine, n_separable):
        alive, uncovered = engine.choose(seed, alive0, uncovered0)
        alive &= ~sep_mask
        for sol in engine.solve(alive, uncovered, seed, node_limit):
            p = make_partition(catalog[i] for i in sol)
            s = p.structure
            if s.S != n_separable:
                raise TheoremViolation(f"search returned {s} for target {n_separable}S")
            log.info("found %s after %d nodes", s, engine.nodes)
            return p
    log.info("exhausted all seeds for %dS after %d nodes", n_separable, engine.nodes)
    return None


# -- coexistence budgets ----------------------------------------------------

@dataclass
class CoexistenceReport:
    counts: StructureCounts
    ok: bool
    lines: list[str]
    solutions: list[StructureCounts]

    def __str__(self):
        return "\n".join(self.lines)


def operator_budget(n: int) -> tuple[int, ...]:
    """How many nonidentity operators have each body count 1..N."""
    body = trit_space(n).body[1:]
    return tuple(int((body == k).sum()) for k in range(1, n + 1))


def budget_solutions(n: int = 3) -> list[StructureCounts]:
    """All class counts whose per-class operator usage exactly spends the budget."""
    budget = operator_budget(n)
    profiles = {kind: prof for prof, kind in PROFILES[n].items()}
    kinds = [k for k in KINDS if k in profiles]
    total = 3**n + 1
    out = []
    for counts in itertools.product(range(total + 1), repeat=len(kinds)):
        if sum(counts) != total:
            continue
        used = [sum(c * profiles[k][b] for c, k in zip(counts, kinds)) for b in range(n)]
        if tuple(used) == budget:
            out.append(StructureCounts(**dict(zip(kinds, counts))))
    return out


def verify_coexistence(s: StructureCounts, n: int = 3) -> CoexistenceReport:
    budget = operator_budget(n)
    profiles = {kind: prof for prof, kind in PROFILES[n].items()}
    counts = s.as_dict()
    lines = []
    ok = True
    for kind, c in counts.items():
        if c and kind not in profiles:
            ok = False
            lines.append(f"class {kind} cannot occur for N={n} (count {c})")
    for b in range(n):
        used = sum(c * profiles[k][b] for k, c in counts.items() if k in profiles)
        good = used == budget[b]
        ok &= good
        terms = " + ".join(f"{c}*{profiles[k][b]}" for k, c in counts.items() if k in profiles)
        lines.append(f"{b + 1}-body: {terms} = {used} (available {budget[b]}) "
                     f"{'ok' if good else 'FAIL'}")
    if s.total != 3**n + 1:
        ok = False
        lines.append(f"total {s.total} != {3**n + 1}")
    return CoexistenceReport(s, ok, lines, budget_solutions(n))
