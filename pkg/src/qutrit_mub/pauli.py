"""N-qutrit Pauli operators in symplectic (exponent-vector) form.

An operator is ``w**phase * prod_i X_i**x_i Z_i**z_i`` with X written to the
left of Z on every qutrit, so that ``Y = XZ`` and ``V = XZ^2``.  Phase-0
operators are the canonical representatives used everywhere phases are
quotiented out.

For the search code every canonical operator is also addressed by a packed
integer index: qutrit ``i`` (0-based) contributes the base-9 digit
``3*x_i + z_i`` at weight ``9**i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cyclotomic import OMEGA, CycMatrix, kron_all

MAX_MATRIX_QUTRITS = 6

# (x, z) exponents of the letters
LETTERS = {"I": (0, 0), "Z": (0, 1), "X": (1, 0), "Y": (1, 1), "V": (1, 2)}
_FORMAT = {}
for _letter, (_x, _z) in LETTERS.items():
    _FORMAT[(_x, _z)] = _letter
    if _letter != "I":
        _FORMAT[(2 * _x % 3, 2 * _z % 3)] = _letter + "2"

_OP_RE = re.compile(r"^(?:w([012]))?((?:[IZXYV]2?)+)$")
_TOKEN_RE = re.compile(r"[IZXYV]2?")


class PauliError(ValueError):
    pass


@dataclass(frozen=True)
class PauliOp:
    n_qutrits: int
    phase: int
    x: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        if self.n_qutrits < 1:
            raise PauliError("need at least one qutrit")
        if len(self.x) != self.n_qutrits or len(self.z) != self.n_qutrits:
            raise PauliError("exponent vectors must have length n_qutrits")
        object.__setattr__(self, "phase", self.phase % 3)
        object.__setattr__(self, "x", tuple(int(v) % 3 for v in self.x))
        object.__setattr__(self, "z", tuple(int(v) % 3 for v in self.z))

    @classmethod
    def identity(cls, n: int) -> PauliOp:
        return cls(n, 0, (0,) * n, (0,) * n)

    @classmethod
    def from_index(cls, n: int, index: int) -> PauliOp:
        x, z = [], []
        for _ in range(n):
            d = index % 9
            index //= 9
            x.append(d // 3)
            z.append(d % 3)
        return cls(n, 0, tuple(x), tuple(z))

    @property
    def index(self) -> int:
        """Packed base-9 code of the phase-stripped exponent vector."""
        return sum((3 * xi + zi) * 9**i for i, (xi, zi) in enumerate(zip(self.x, self.z)))

    def canonical(self) -> PauliOp:
        if self.phase == 0:
            return self
        return PauliOp(self.n_qutrits, 0, self.x, self.z)

    def is_identity(self) -> bool:
        return not any(self.x) and not any(self.z)

    def __mul__(self, other: PauliOp) -> PauliOp:
        return multiply(self, other)

    def __pow__(self, k: int) -> PauliOp:
        out = PauliOp.identity(self.n_qutrits)
        for _ in range(k % 3):
            out = multiply(out, self)
        return out

    def __str__(self):
        return format_op(self)


def parse_op(text: str, n: int | None = None) -> PauliOp:
    """Parse ``[wK]`` followed by one token per qutrit, e.g. ``"w1Y2I"``.

    A token is a letter from ``IZXYV`` optionally followed by ``2``; the
    suffix doubles both exponents, naming the phase-0 operator in the
    square's commuting class.
    """
    m = _OP_RE.match(text.strip())
    if not m:
        raise PauliError(f"malformed operator string {text!r}")
    phase = int(m.group(1) or 0)
    tokens = _TOKEN_RE.findall(m.group(2))
    if n is not None and len(tokens) != n:
        raise PauliError(f"{text!r} has {len(tokens)} tokens, expected {n}")
    xs, zs = [], []
    for tok in tokens:
        if tok == "I2":
            raise PauliError("I2 is not a valid token")
        x, z = LETTERS[tok[0]]
        k = 2 if tok.endswith("2") else 1
        xs.append(x * k % 3)
        zs.append(z * k % 3)
    return PauliOp(len(tokens), phase, tuple(xs), tuple(zs))


def format_op(a: PauliOp) -> str:
    body = "".join(_FORMAT[(x, z)] for x, z in zip(a.x, a.z))
    return body if a.phase == 0 else f"w{a.phase}{body}"


def _check_same(a: PauliOp, b: PauliOp):
    if a.n_qutrits != b.n_qutrits:
        raise PauliError(f"qutrit count mismatch: {a.n_qutrits} vs {b.n_qutrits}")


def multiply(a: PauliOp, b: PauliOp) -> PauliOp:
    """Exact group product.  Per qutrit (X^x Z^z)(X^x' Z^z') = w^(z x') X^(x+x') Z^(z+z')."""
    _check_same(a, b)
    phase = a.phase + b.phase + sum(zi * xj for zi, xj in zip(a.z, b.x))
    return PauliOp(a.n_qutrits, phase,
                   tuple(i + j for i, j in zip(a.x, b.x)),
                   tuple(i + j for i, j in zip(a.z, b.z)))


def dagger(a: PauliOp) -> PauliOp:
    # (w^c X^x Z^z)^+ = w^-c Z^-z X^-x = w^(-c + x.z) X^-x Z^-z
    phase = -a.phase + sum(xi * zi for xi, zi in zip(a.x, a.z))
    return PauliOp(a.n_qutrits, phase, tuple(-v for v in a.x), tuple(-v for v in a.z))


def symplectic_form(a: PauliOp, b: PauliOp) -> int:
    """t with a*b = w^t * b*a."""
    _check_same(a, b)
    return sum(zi * xj - xi * zj for xi, zi, xj, zj in zip(a.x, a.z, b.x, b.z)) % 3


def commutes(a: PauliOp, b: PauliOp) -> bool:
    return symplectic_form(a, b) == 0


def body_count(a: PauliOp) -> int:
    return sum(1 for x, z in zip(a.x, a.z) if x or z)


@lru_cache(maxsize=None)
def _single_qutrit(x: int, z: int) -> CycMatrix:
    re = np.zeros((3, 3), dtype=np.int64)
    om = np.zeros((3, 3), dtype=np.int64)
    for k in range(3):
        # X^x Z^z |k> = w^(z k) |k + x>
        p = z * k % 3
        row = (k + x) % 3
        if p == 0:
            re[row, k] = 1
        elif p == 1:
            om[row, k] = 1
        else:
            re[row, k] = -1
            om[row, k] = -1
    return CycMatrix(re, om)


def to_matrix(a: PauliOp) -> CycMatrix:
    """Exact 3^N x 3^N matrix; qutrit 1 is the most significant tensor factor."""
    if a.n_qutrits > MAX_MATRIX_QUTRITS:
        raise PauliError(f"refusing to build a dense matrix for {a.n_qutrits} qutrits")
    m = kron_all([_single_qutrit(x, z) for x, z in zip(a.x, a.z)])
    if a.phase:
        m = m.scale(OMEGA ** a.phase)
    return m


def all_ops(n: int, include_identity: bool = False) -> list[PauliOp]:
    start = 0 if include_identity else 1
    return [PauliOp.from_index(n, i) for i in range(start, 9**n)]


class TritSpace:
    """Lookup tables over the 9^N packed exponent vectors of N qutrits."""

    def __init__(self, n: int):
        self.n = n
        self.size = 9**n
        idx = np.arange(self.size)
        digits = np.stack([(idx // 9**i) % 9 for i in range(n)], axis=1)
        self.x = digits // 3
        self.z = digits % 3
        self.weights = 9 ** np.arange(n)
        self.body = ((self.x != 0) | (self.z != 0)).sum(axis=1)
        self._sym = None

    @property
    def sym(self) -> np.ndarray:
        """size x size table of symplectic forms (int8)."""
        if self._sym is None:
            s = (self.z @ self.x.T - self.x @ self.z.T) % 3
            self._sym = s.astype(np.int8)
        return self._sym

    def encode(self, x, z):
        x = np.asarray(x) % 3
        z = np.asarray(z) % 3
        return (3 * x + z) @ self.weights

    def span(self, gens) -> np.ndarray:
        """Sorted indices of every combination sum_i c_i g_i (identity included)."""
        return np.unique(self.coords(gens)[1])

    def coords(self, gens) -> tuple[np.ndarray, np.ndarray]:
        """All coefficient vectors c in Z_3^k and the index of sum_i c_i g_i."""
        gens = list(gens)
        k = len(gens)
        coeffs = np.array(list(np.ndindex(*(3,) * k)), dtype=np.int64).reshape(-1, k)
        return coeffs, self.encode(coeffs @ self.x[gens], coeffs @ self.z[gens])

    def add(self, a, b):
        return self.encode(self.x[a] + self.x[b], self.z[a] + self.z[b])

    def scale(self, a, c):
        return self.encode(self.x[a] * c, self.z[a] * c)


@lru_cache(maxsize=None)
def trit_space(n: int) -> TritSpace:
    return TritSpace(n)
