"""Joint eigenbases of MCS's, their overlaps, and the Hermitean observables.

A basis is built from N generators ``g_i`` of an MCS: the projector onto
the joint eigenspace with ``g_i = w**alpha_i`` is

    P_alpha = prod_i (1/3) sum_c w**(-c alpha_i) g_i**c

which keeps every entry in Q(w) with denominator dividing 3^N.  States are
stored unnormalised (first nonzero amplitude equal to 1) together with
their exact squared norm.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .cyclotomic import (I_SQRT3, ONE, CycMatrix, CycNum, cyc_to_json,
                         linear_combination, partial_trace, trace_gram)
from .mcs import EntanglementClass, Mcs, McsError, TheoremViolation, classify, span
from .partition import SCHEMA, Partition
from .pauli import PauliError, PauliOp, dagger, format_op, multiply, to_matrix

MAX_BASIS_QUTRITS = 3


@dataclass
class CheckReport:
    name: str
    failures: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self):
        status = "pass" if self.ok else f"FAIL ({len(self.failures)})"
        return f"{self.name}: {self.checked} checked, {status}"


@dataclass(frozen=True, eq=False)
class BasisSet:
    source: Mcs
    generators: tuple[PauliOp, ...]
    labels: tuple[tuple[int, ...], ...]
    projectors: tuple[CycMatrix, ...]

    @property
    def n_qutrits(self) -> int:
        return self.source.n_qutrits

    @property
    def dim(self) -> int:
        return 3**self.n_qutrits

    def __len__(self):
        return len(self.labels)

    def index(self, label) -> int:
        return self.labels.index(tuple(label))

    def projector(self, label) -> CycMatrix:
        return self.projectors[self.index(label)]

    @cached_property
    def states(self) -> tuple[CycMatrix, ...]:
        return tuple(state_from_projector(p) for p in self.projectors)

    def state(self, label) -> CycMatrix:
        return self.states[self.index(label)]

    def norm2(self, label) -> Fraction:
        return state_norm2(self.state(label))

    def name(self) -> str:
        return "(" + ",".join(format_op(g) for g in self.generators) + ")"

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "n": self.n_qutrits,
            "generators": [format_op(g) for g in self.generators],
            "labels": ["".join(map(str, lab)) for lab in self.labels],
            "states": [[cyc_to_json(v) for v in s.column_entries()] for s in self.states],
            "norm2": [str(state_norm2(s)) for s in self.states],
            "encoding": "entry = (num/den) * (a + b*w), w = exp(2 pi i/3); exact",
        }


def state_from_projector(p: CycMatrix) -> CycMatrix:
    """Column of a rank-1 projector rescaled so its first nonzero entry is 1."""
    for j in range(p.rows):
        d = p[j, j]
        if d:
            col = CycMatrix(p.re[:, j:j + 1], p.om[:, j:j + 1], p.den)
            return col.scale(ONE / d)
    raise ValueError("zero projector")


def state_norm2(v: CycMatrix) -> Fraction:
    n = (v.dagger() @ v)[0, 0]
    assert n.is_real()
    return n.a


def projector_of(v: CycMatrix) -> CycMatrix:
    return (v @ v.dagger()).scale(Fraction(1) / state_norm2(v))


def _power_matrices(g: PauliOp) -> list[CycMatrix]:
    return [to_matrix(g**c) for c in range(3)]


def basis_from_mcs(m: Mcs, generators=None) -> BasisSet:
    """Eigenbasis of ``m`` labelled by the eigenvalue exponents of ``generators``
    (default: the generators stored on ``m``)."""
    n = m.n_qutrits
    if n > MAX_BASIS_QUTRITS:
        raise McsError(f"dense bases are limited to {MAX_BASIS_QUTRITS} qutrits")
    gens = tuple(generators) if generators is not None else m.generators
    if span(gens) != m:
        raise McsError("generators do not span the given MCS")
    third = Fraction(1, 3)
    factors = []
    for g in gens:
        powers = _power_matrices(g)
        factors.append([
            linear_combination([third * CycNum.omega(-c * alpha) for c in range(3)], powers)
            for alpha in range(3)
        ])
    labels = tuple(itertools.product(range(3), repeat=n))
    projectors = []
    for lab in labels:
        p = factors[0][lab[0]]
        for f, alpha in zip(factors[1:], lab[1:]):
            p = p @ f[alpha]
        projectors.append(p)
    basis = BasisSet(m, gens, labels, tuple(projectors))
    total = projectors[0]
    for p in projectors[1:]:
        total = total + p
    if total != CycMatrix.identity(basis.dim):
        raise TheoremViolation(f"projectors of {basis.name()} do not resolve the identity")
    return basis


def basis_from_strings(texts, n: int | None = None) -> BasisSet:
    from .mcs import from_strings
    m = from_strings(texts, n)
    return basis_from_mcs(m, m.generators)


def verify_orthonormal(b: BasisSet) -> CheckReport:
    rep = CheckReport(f"orthonormality {b.name()}")
    gram = trace_gram(list(b.projectors), list(b.projectors))
    d = len(b)
    for i in range(d):
        for j in range(d):
            want = 1 if i == j else 0
            if gram[i, j] != want:
                rep.failures.append(f"Tr(P{b.labels[i]} P{b.labels[j]}) = {gram[i, j]}")
    rep.checked = d * d
    for lab, p in zip(b.labels, b.projectors):
        if not p.is_hermitian() or p @ p != p or p.trace() != 1:
            rep.failures.append(f"P{lab} is not a trace-1 Hermitean idempotent")
    return rep


def verify_unbiased(a: BasisSet, b: BasisSet) -> CheckReport:
    if a.source.member_set & b.source.member_set:
        raise ValueError(f"{a.name()} and {b.name()} come from overlapping MCS's")
    rep = CheckReport(f"unbiasedness {a.name()} vs {b.name()}")
    gram = trace_gram(list(a.projectors), list(b.projectors))
    want = CycNum(Fraction(1, a.dim))
    for i in range(len(a)):
        for j in range(len(b)):
            if gram[i, j] != want:
                rep.failures.append(f"Tr(P{a.labels[i]} Q{b.labels[j]}) = {gram[i, j]}")
    rep.checked = len(a) * len(b)
    return rep


def verify_mutually_unbiased(bases: list[BasisSet]) -> CheckReport:
    rep = CheckReport("pairwise unbiasedness")
    for a, b in itertools.combinations(bases, 2):
        sub = verify_unbiased(a, b)
        rep.failures.extend(sub.failures)
        rep.checked += sub.checked
    return rep


def partition_bases(p: Partition) -> list[BasisSet]:
    return [basis_from_mcs(m) for m in p.mcs_list]


# -- spectral reconstruction -------------------------------------------------

def group_element(gens, coords) -> PauliOp:
    """prod_i g_i**c_i with exact phase."""
    out = PauliOp.identity(gens[0].n_qutrits)
    for g, c in zip(gens, coords):
        out = multiply(out, g**c)
    return out


def eigenvalue_matrix(n: int) -> list[list[CycNum]]:
    """eps[a][alpha] = w**(a . alpha) with a, alpha in Z_3^N (lexicographic)."""
    vecs = list(itertools.product(range(3), repeat=n))
    return [[CycNum.omega(sum(x * y for x, y in zip(a, al))) for al in vecs] for a in vecs]


def verify_spectral_reconstruction(b: BasisSet) -> CheckReport:
    """Rebuild every group element from the projectors and compare with its matrix."""
    rep = CheckReport(f"spectral reconstruction {b.name()}")
    eps = eigenvalue_matrix(b.n_qutrits)
    coords = list(itertools.product(range(3), repeat=b.n_qutrits))
    d = len(coords)
    for a, row in zip(coords, eps):
        rebuilt = linear_combination(row, list(b.projectors))
        op = group_element(b.generators, a)
        if rebuilt != to_matrix(op):
            rep.failures.append(f"coordinates {a}: sum eps P != {format_op(op)}")
        rep.checked += 1
    for i, j in itertools.product(range(d), repeat=2):
        inner = sum((x.conj() * y for x, y in zip(eps[i], eps[j])), CycNum())
        if inner != (d if i == j else 0):
            rep.failures.append(f"eps rows {i},{j} have inner product {inner}")
    return rep


def partition_operators(p: Partition) -> list[PauliOp]:
    """Identity followed by every MCS's nonidentity members, phase 0."""
    n = p.n_qutrits
    ops = [PauliOp.identity(n)]
    for m in p.mcs_list:
        ops.extend(m.member_ops())
    return ops


def verify_operator_orthonormality(p: Partition) -> CheckReport:
    """Tr(U_a^+ U_b) = d delta_ab over the whole partitioned operator set."""
    rep = CheckReport("operator-basis orthonormality")
    ops = partition_operators(p)
    mats = [to_matrix(op) for op in ops]
    gram = trace_gram([m.dagger() for m in mats], mats)
    d = 3**p.n_qutrits
    if gram != CycMatrix.identity(len(ops)).scale(d):
        for i in range(len(ops)):
            for j in range(len(ops)):
                if gram[i, j] != (d if i == j else 0):
                    rep.failures.append(f"Tr({ops[i]}^+ {ops[j]}) = {gram[i, j]}")
    rep.checked = len(ops) ** 2
    return rep


# -- Hermitean observables ---------------------------------------------------

@dataclass(frozen=True)
class HermPair:
    """H = (U - U^+)/(i sqrt3) and sqrt3 * Hbar = U + U^+ (stored scaled)."""

    source: PauliOp
    H: CycMatrix
    Hbar_sqrt3: CycMatrix

    def partner_identity_holds(self) -> bool:
        # sqrt3 Hbar = 2I - 3H^2
        ident = CycMatrix.identity(self.H.rows)
        return self.Hbar_sqrt3 == ident.scale(2) - (self.H @ self.H).scale(3)

    def exponential_identity_holds(self) -> bool:
        # U = I + (i sqrt3 / 2) H - (3/2) H^2
        ident = CycMatrix.identity(self.H.rows)
        rhs = ident + self.H.scale(I_SQRT3 * Fraction(1, 2)) - (self.H @ self.H).scale(Fraction(3, 2))
        return rhs == to_matrix(self.source)

    def h_spectrum_holds(self) -> bool:
        """H^3 = H, Tr H = 0, Tr H^2 = 2*3^(N-1): spectrum {0, +1, -1} in equal parts."""
        n = self.source.n_qutrits
        h2 = self.H @ self.H
        return (self.H.is_hermitian() and h2 @ self.H == self.H
                and self.H.trace() == 0 and h2.trace() == 2 * 3 ** (n - 1))


def hermitian_pair(u: PauliOp) -> HermPair:
    if u.is_identity():
        raise PauliError("the identity has no traceless Hermitean partner")
    um = to_matrix(u)
    ud = to_matrix(dagger(u))
    # 1/(i sqrt3) = -(w - w^2)/3
    h = (um - ud).scale(ONE / I_SQRT3)
    return HermPair(u, h, um + ud)


@dataclass(frozen=True)
class Observable:
    """A Hermitean matrix stored as ``matrix / sqrt3**sqrt3_power``."""

    name: str
    matrix: CycMatrix
    sqrt3_power: int


def hermitian_observables(n: int = 1) -> list[Observable]:
    """The H, Hbar pair for one representative of each {U, U^+} class."""
    from .pauli import all_ops
    seen = set()
    out = []
    for u in all_ops(n):
        inv = dagger(u).canonical().index
        if inv in seen or u.index in seen:
            continue
        seen.add(u.index)
        pair = hermitian_pair(u)
        out.append(Observable(f"H({format_op(u)})", pair.H, 0))
        out.append(Observable(f"Hbar({format_op(u)})", pair.Hbar_sqrt3, 1))
    return out


def observable_gram(obs: list[Observable]) -> list[list[Fraction]]:
    """Exact Tr(O_i O_j); raises if a mixed-scale product has a nonzero trace,
    which would be irrational."""
    out = []
    for a in obs:
        row = []
        for b in obs:
            t = (a.matrix @ b.matrix).trace()
            if not t.is_real():
                raise TheoremViolation(f"Tr({a.name} {b.name}) is not real")
            power = a.sqrt3_power + b.sqrt3_power
            if power % 2:
                if t:
                    raise TheoremViolation(f"Tr({a.name} {b.name}) is irrational")
                row.append(Fraction(0))
            else:
                row.append(t.a / 3 ** (power // 2))
        out.append(row)
    return out


def spectrum_kind(o: Observable) -> str:
    """'trinary' for spectrum {0, +1, -1}; 'partner' for (2, -1, -1)/sqrt3.

    Decided from exact trace moments: traceless, Tr O^2 = 2*3^(N-1), and
    Tr O^3 zero (trinary) or 2*3^(N-1)/sqrt3 (partner).
    """
    dim = o.matrix.rows
    base = Fraction(2 * dim, 3)
    m = o.matrix
    t1, t2, t3 = m.trace(), (m @ m).trace(), (m @ m @ m).trace()
    scale2 = Fraction(1, 3**o.sqrt3_power)
    if t1 != 0 or t2 * scale2 != base:
        return "other"
    if o.sqrt3_power == 0 and t3 == 0 and (m @ m @ m) == m:
        return "trinary"
    if o.sqrt3_power == 1 and t3 == 6 * (dim // 3):
        return "partner"
    return "other"


# -- state-level entanglement ----------------------------------------------

def reduced_states(p: CycMatrix, n: int) -> list[CycMatrix]:
    if n == 1:
        return [p]
    return [partial_trace(p, {i}) for i in range(1, n + 1)]


def classify_basis(b: BasisSet) -> EntanglementClass:
    """Class from single-qutrit reduced matrices; must agree with the MCS profile."""
    n = b.n_qutrits
    mixed = CycMatrix.identity(3).scale(Fraction(1, 3))
    patterns = set()
    for lab, p in zip(b.labels, b.projectors):
        pure = []
        for slot, rho in enumerate(reduced_states(p, n), start=1):
            if (rho @ rho).trace() == 1:
                pure.append(slot)
            elif rho != mixed:
                raise TheoremViolation(f"state {lab}: qutrit {slot} is neither pure nor maximally mixed")
        patterns.add(tuple(pure))
    if len(patterns) != 1:
        raise TheoremViolation(f"pure-slot pattern varies across the basis: {sorted(patterns)}")
    pure = patterns.pop()
    if len(pure) == n:
        kind = "S"
    elif not pure:
        kind = {2: "B", 3: "G"}.get(n)
    elif n == 3 and len(pure) == 1:
        kind = "SB"
    else:
        kind = None
    if kind is None:
        raise TheoremViolation(f"pure slots {pure} match no class for N={n}")
    expected = classify(b.source)
    if expected.kind != kind:
        raise TheoremViolation(f"state-level class {kind} disagrees with operator profile {expected.kind}")
    return EntanglementClass(kind, expected.profile, pure if kind == "SB" else expected.pure_slots)


# -- operator-algebra reports ------------------------------------------------

def one_qutrit_rules() -> CheckReport:
    """Products and commutators of the diagonal (E), right-cyclic (R) and
    left-cyclic (L) one-qutrit families, for all index pairs."""
    rep = CheckReport("one-qutrit E/R/L multiplication rules")
    w = CycNum.omega

    def E(l):
        return to_matrix(PauliOp(1, 0, (0,), (l % 3,)))

    def R(l):
        return to_matrix(PauliOp(1, 0, (1,), (l % 3,)))

    def L(l):
        return R(l).dagger()

    def comm(a, b):
        return a @ b - b @ a

    for l, m in itertools.product(range(3), repeat=2):
        rules = {
            "E_l E_m = E_(l+m)": (E(l) @ E(m), E(l + m)),
            "R_l R_m = w^(m-l) L_(-l-m)": (R(l) @ R(m), L(-l - m).scale(w(m - l))),
            "L_l L_m = w^(m-l) R_(-l-m)": (L(l) @ L(m), R(-l - m).scale(w(m - l))),
            "[R_l, E_m] = (1 - w^m) R_(l+m)": (comm(R(l), E(m)), R(l + m).scale(1 - w(m))),
            "[L_l, E_m] = (w^m - 1) L_(l-m)": (comm(L(l), E(m)), L(l - m).scale(w(m) - 1)),
            "[R_l, L_m] = (w^(m-l) - 1) E_(l-m)": (comm(R(l), L(m)), E(l - m).scale(w(m - l) - 1)),
        }
        for name, (got, want) in rules.items():
            rep.checked += 1
            if got != want:
                rep.failures.append(f"{name} fails at l={l}, m={m}")
    return rep


def verify_homomorphism(ops_a, ops_b) -> CheckReport:
    """to_matrix(a * b) == to_matrix(a) @ to_matrix(b), and the dagger matches."""
    rep = CheckReport("matrix representation homomorphism")
    for a in ops_a:
        ma = to_matrix(a)
        if to_matrix(dagger(a)) != ma.dagger():
            rep.failures.append(f"dagger of {a}")
        for b in ops_b:
            rep.checked += 1
            if to_matrix(multiply(a, b)) != ma @ to_matrix(b):
                rep.failures.append(f"{a} * {b}")
    return rep


def verify_hermitian_pairs(ops) -> CheckReport:
    """Partner identity, polynomial exponential form and H spectrum per op."""
    rep = CheckReport("Hermitean pair identities")
    for u in ops:
        pair = hermitian_pair(u)
        rep.checked += 1
        for what, ok in (("partner identity", pair.partner_identity_holds()),
                         ("exponential form", pair.exponential_identity_holds()),
                         ("H spectrum", pair.h_spectrum_holds())):
            if not ok:
                rep.failures.append(f"{what} fails for {format_op(u)}")
    return rep


def spectrum_census(obs: list[Observable]) -> dict[str, int]:
    out = {"trinary": 0, "partner": 0, "other": 0}
    for o in obs:
        out[spectrum_kind(o)] += 1
    return out
