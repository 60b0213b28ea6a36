"""Named entangled bases and minimal-form expansions in product bases.

State vectors stay unnormalised; an expansion coefficient ``c`` of basis
vector ``e`` in target ``psi`` satisfies ``psi = sum c e`` exactly, and the
measurement weight is ``|c|^2 |e|^2 / |psi|^2`` (rational).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cyclotomic import CycMatrix, CycNum
from .mcs import McsError, from_strings, span
from .pauli import PauliOp, parse_op
from .mub import BasisSet, CheckReport, basis_from_mcs, classify_basis, state_norm2

SINGLE_LETTERS = ("Z", "X", "Y", "V")
BELL_DEFAULT = ("ZX", "VZ")
SB_BELL_DEFAULT = ("ZX", "YZ")


@dataclass(frozen=True)
class Expansion:
    target: CycMatrix
    basis: BasisSet
    terms: tuple[tuple[tuple[int, ...], CycNum], ...]

    def __len__(self):
        return len(self.terms)

    @property
    def support(self) -> set[tuple[int, ...]]:
        return {lab for lab, _ in self.terms}

    def weights(self) -> dict[tuple[int, ...], Fraction]:
        total = state_norm2(self.target)
        return {lab: c.norm() * self.basis.norm2(lab) / total for lab, c in self.terms}

    def relative(self) -> list[tuple[tuple[int, ...], CycNum]]:
        """Coefficients divided by the first one (global phase fixed to 1)."""
        first = self.terms[0][1]
        return [(lab, c / first) for lab, c in self.terms]

    def rebuild(self) -> CycMatrix:
        out = CycMatrix.zeros(self.target.rows, 1)
        for lab, c in self.terms:
            out = out + self.basis.state(lab).scale(c)
        return out


def coefficients(state: CycMatrix, basis: BasisSet) -> list[CycNum]:
    if state.shape != (basis.dim, 1):
        raise ValueError(f"state of shape {state.shape} does not match dimension {basis.dim}")
    out = []
    for e in basis.states:
        out.append((e.dagger() @ state)[0, 0] / state_norm2(e))
    return out


def expand(state: CycMatrix, basis: BasisSet) -> Expansion:
    """Exact expansion of ``state`` in a separable basis; zero terms dropped."""
    if basis.source.kind != "S":
        raise ValueError(f"{basis.name()} is not a product basis")
    coeffs = coefficients(state, basis)
    terms = tuple((lab, c) for lab, c in zip(basis.labels, coeffs) if c)
    exp = Expansion(state, basis, terms)
    if exp.rebuild() != state:
        raise AssertionError("expansion does not reproduce its target")
    return exp


def _padded(letter_at: dict[int, str], n: int) -> str:
    return "".join(letter_at.get(i, "I") for i in range(n))


def product_basis(letters: str) -> BasisSet:
    """S basis from one letter per qutrit, e.g. ``"ZX"``; labels are the
    eigenvalue exponents of each one-qutrit factor."""
    n = len(letters)
    if not n or any(ch not in SINGLE_LETTERS for ch in letters):
        raise McsError(f"product basis needs letters from {SINGLE_LETTERS}, got {letters!r}")
    gens = [_padded({i: ch}, n) for i, ch in enumerate(letters)]
    return basis_from_mcs(from_strings(gens, n))


def bell_basis(generators=BELL_DEFAULT) -> BasisSet:
    return basis_from_mcs(from_strings(generators, 2))


def ghz_variant(flip2: bool = False, flip3: bool = False) -> BasisSet:
    """GHZ-type basis; flipping a qutrit squares every operator on it."""
    z2 = "Z2" if flip2 else "Z"
    z3 = "Z2" if flip3 else "Z"
    x2 = "X2" if flip2 else "X"
    x3 = "X2" if flip3 else "X"
    gens = (f"Z2{z2}I", f"Z2I{z3}", f"X{x2}{x3}")
    return basis_from_mcs(from_strings(gens, 3))


def ghz_basis() -> BasisSet:
    return ghz_variant()


def ghz_prime() -> BasisSet:
    return ghz_variant(flip3=True)


def ghz_variants() -> dict[tuple[bool, bool], BasisSet]:
    return {flips: ghz_variant(*flips) for flips in itertools.product((False, True), repeat=2)}


def sb_basis(pure_slot: int = 1, pure_letter: str = "Z",
             bell_generators=SB_BELL_DEFAULT) -> BasisSet:
    """One qutrit (1-based ``pure_slot``) in an eigenbasis of ``pure_letter``,
    the other two in a Bell-type basis."""
    if pure_slot not in (1, 2, 3):
        raise McsError(f"pure slot must be 1, 2 or 3, got {pure_slot}")
    if pure_letter not in SINGLE_LETTERS:
        raise McsError(f"pure letter must be one of {SINGLE_LETTERS}")
    others = [i for i in range(3) if i != pure_slot - 1]
    gens = [parse_op(_padded({pure_slot - 1: pure_letter}, 3))]
    for text in bell_generators:
        op = parse_op(text, 2)
        x, z = [0, 0, 0], [0, 0, 0]
        for src, dst in enumerate(others):
            x[dst], z[dst] = op.x[src], op.z[src]
        gens.append(PauliOp(3, 0, tuple(x), tuple(z)))
    b = basis_from_mcs(span(gens))
    if b.source.kind != "SB":
        raise McsError(f"{b.name()} is not a mixed-entanglement basis")
    return b


def aharonov() -> CycMatrix:
    """Totally antisymmetric three-qutrit state, unnormalised (norm^2 = 6)."""
    re = np.zeros((27, 1), dtype=np.int64)
    for perm in itertools.permutations(range(3)):
        inversions = sum(perm[i] > perm[j] for i, j in itertools.combinations(range(3), 2))
        re[9 * perm[0] + 3 * perm[1] + perm[2], 0] = -1 if inversions % 2 else 1
    return CycMatrix(re, np.zeros_like(re), 1)


def decompose(state: CycMatrix, basis: BasisSet) -> list[tuple[tuple[int, ...], CycNum]]:
    """Nonzero coefficients of ``state`` over any basis (not only product ones)."""
    return [(lab, c) for lab, c in zip(basis.labels, coefficients(state, basis)) if c]


def aharonov_decomposition() -> list[tuple[tuple[int, ...], CycNum]]:
    return decompose(aharonov(), ghz_basis())


def named_state(name: str, *indices: int) -> tuple[CycMatrix, BasisSet | None]:
    """Catalog lookup: bell n m, ghz n l m, ghz-prime n l m, sb slot n l m, aharonov."""
    if name == "aharonov":
        if indices:
            raise ValueError("aharonov takes no indices")
        return aharonov(), None
    arity = {"bell": 2, "ghz": 3, "ghz-prime": 3, "sb": 4}
    if name not in arity:
        raise ValueError(f"unknown state {name!r}; choose from {sorted(arity) + ['aharonov']}")
    if len(indices) != arity[name]:
        raise ValueError(f"{name} takes {arity[name]} indices")
    if name == "sb":
        basis = sb_basis(indices[0])
        label = indices[1:]
    else:
        basis = {"bell": bell_basis, "ghz": ghz_basis, "ghz-prime": ghz_prime}[name]()
        label = indices
    if any(v not in (0, 1, 2) for v in label):
        raise ValueError("labels are trits 0, 1, 2")
    return basis.state(label), basis


# -- expansion shapes --------------------------------------------------------

def _shape_check(rep: CheckReport, basis: BasisSet, product: BasisSet, support) -> None:
    for lab in basis.labels:
        exp = expand(basis.state(lab), product)
        want = support(*lab)
        rep.checked += 1
        if exp.support != want:
            rep.failures.append(f"{basis.name()} {lab}: support {sorted(exp.support)} != {sorted(want)}")
        elif set(exp.weights().values()) != {Fraction(1, len(want))}:
            rep.failures.append(f"{basis.name()} {lab}: unequal weights")


def expansion_shapes(n: int | None = None) -> dict[str, CheckReport]:
    """Minimal-form index patterns for the named bases."""
    out = {}
    k3 = range(3)
    if n in (None, 2):
        szx = product_basis("ZX")
        rep = CheckReport("Bell sums |k, n-k> in S(Z,X)")
        _shape_check(rep, bell_basis(), szx,
                     lambda a, b: {(k, (a - k) % 3) for k in k3})
        out["bell-sums"] = rep
        rep = CheckReport("Bell differences |k, n+k> in S(Z,X)")
        _shape_check(rep, bell_basis(("Z2X", "YZ2")), szx,
                     lambda a, b: {(k, (a + k) % 3) for k in k3})
        out["bell-differences"] = rep
    if n in (None, 3):
        szzz = product_basis("ZZZ")
        rep = CheckReport("GHZ |k, n+k, l+k> in S(ZZZ)")
        _shape_check(rep, ghz_basis(), szzz,
                     lambda a, b, c: {(k, (a + k) % 3, (b + k) % 3) for k in k3})
        out["ghz"] = rep
        rep = CheckReport("GHZ' |k, n+k, -l-k> in S(ZZZ)")
        _shape_check(rep, ghz_prime(), szzz,
                     lambda a, b, c: {(k, (a + k) % 3, (-b - k) % 3) for k in k3})
        out["ghz-prime"] = rep
        rep = CheckReport("SB |n, k, l-k> in S(ZZX)")
        _shape_check(rep, sb_basis(1, "Z"), product_basis("ZZX"),
                     lambda a, b, c: {(a, k, (b - k) % 3) for k in k3})
        out["sb"] = rep
    return out


def rdms_maximally_mixed(b: BasisSet) -> bool:
    return classify_basis(b).kind in ("B", "G")


def expansion_lengths(b: BasisSet) -> dict[str, int]:
    """Term count of every state of ``b`` in each product basis (must be uniform)."""
    out = {}
    for letters in itertools.product(SINGLE_LETTERS, repeat=b.n_qutrits):
        key = "".join(letters)
        product = product_basis(key)
        counts = {len(expand(s, product)) for s in b.states}
        if len(counts) != 1:
            raise AssertionError(f"{b.name()} has mixed term counts {counts} in S({key})")
        out[key] = counts.pop()
    return out


def product_letters_in(b: BasisSet) -> set[str]:
    """Letter strings P..Q for which the source MCS holds a full-weight product
    of powers of those letters."""
    from .pauli import format_op
    out = set()
    for op in b.source.member_ops():
        text = format_op(op)
        if "I" not in text:
            out.add(text.replace("2", ""))
    return out
