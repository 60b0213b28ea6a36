"""Exact arithmetic in Q(w), w = exp(2 pi i / 3), and dense matrices over it.

A scalar ``a + b w`` is a :class:`CycNum` with rational ``a`` and ``b``.
Matrices keep two integer numerator arrays (coefficients of 1 and of w)
over one shared positive denominator, so products are integer matmuls.
Arrays run as int64 while a bound check proves that no intermediate can
overflow, and fall back to Python-int object arrays otherwise.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from numbers import Rational

import numpy as np

_LIMIT = 2**62
# integer products below this bound are exact through float64 BLAS
_FLOAT_EXACT = 2**52


class CycNum:
    """An element ``a + b*w`` of Q(w)."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("CycNum is immutable")

    @classmethod
    def coerce(cls, value) -> CycNum:
        if isinstance(value, CycNum):
            return value
        if isinstance(value, (int, Rational)):
            return cls(value, 0)
        raise TypeError(f"cannot interpret {value!r} as an element of Q(w)")

    @classmethod
    def omega(cls, power: int = 1) -> CycNum:
        power %= 3
        return (ONE, OMEGA, OMEGA2)[power]

    def __add__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return CycNum(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(-self.a, -self.b)

    def __sub__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return CycNum(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return CycNum.coerce(other) - self

    def __mul__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.a, self.b, other.a, other.b
        # w^2 = -1 - w
        bd = b * d
        return CycNum(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def conj(self) -> CycNum:
        return CycNum(self.a - self.b, -self.b)

    def norm(self) -> Fraction:
        """|x|^2, always a nonnegative rational."""
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self) -> CycNum:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(w)")
        c = self.conj()
        return CycNum(c.a / n, c.b / n)

    def __truediv__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        if other.b == 0:
            if other.a == 0:
                raise ZeroDivisionError("division by zero in Q(w)")
            return CycNum(self.a / other.a, self.b / other.a)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycNum.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_real(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __repr__(self):
        return f"CycNum({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return _coef_str(self.b) + "w"
        sign = "-" if self.b < 0 else "+"
        return f"{self.a}{sign}{_coef_str(abs(self.b))}w"

    def root_power(self) -> int | None:
        """Return k if this number equals w**k, else None."""
        for k, w in enumerate((ONE, OMEGA, OMEGA2)):
            if self == w:
                return k
        return None


def _coef_str(q: Fraction) -> str:
    if q == 1:
        return ""
    if q == -1:
        return "-"
    return f"({q})" if q.denominator != 1 else str(q)


ONE = CycNum(1, 0)
ZERO = CycNum(0, 0)
OMEGA = CycNum(0, 1)
OMEGA2 = CycNum(-1, -1)
# i*sqrt(3) = w - w^2
I_SQRT3 = CycNum(1, 2)


# -- integer array helpers -------------------------------------------------

def _maxabs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(int(v)) for v in arr.flat)
    return int(np.abs(arr).max())


def _fit(arr: np.ndarray) -> np.ndarray:
    """Store as int64 when every entry fits comfortably, else as Python ints."""
    if arr.dtype == object:
        if _maxabs(arr) < _LIMIT:
            return arr.astype(np.int64)
        return arr
    if arr.dtype != np.int64:
        arr = arr.astype(np.int64)
    return arr


def _obj(arr: np.ndarray) -> np.ndarray:
    return arr if arr.dtype == object else arr.astype(object)


def _pair_safe(*arrays, factor: int = 1) -> bool:
    if any(a.dtype == object for a in arrays):
        return False
    bound = factor
    for a in arrays:
        bound *= max(_maxabs(a), 1)
    return bound < _LIMIT


def _mm(a, b):
    k = max(a.shape[-1] if a.ndim else 1, 1)
    if a.dtype != object and b.dtype != object:
        bound = max(_maxabs(a), 1) * max(_maxabs(b), 1) * k
        if bound < _FLOAT_EXACT:
            return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
        if bound * 4 < _LIMIT:
            return a @ b
    return _obj(a) @ _obj(b)


def _scaled(a, s: int):
    if a.dtype != object and abs(s) * max(_maxabs(a), 1) * 4 < _LIMIT:
        return a * s
    return _obj(a) * s


def _cyc_matmul(ar, aw, br, bw):
    # (ar + aw w)(br + bw w) = ar br - aw bw + (ar bw + aw br - aw bw) w
    rr = _mm(ar, br)
    ww = _mm(aw, bw)
    rw = _mm(ar, bw)
    wr = _mm(aw, br)
    return rr - ww, rw + wr - ww


class CycMatrix:
    """Dense exact matrix over Q(w): ``(re + om*w) / den``."""

    __slots__ = ("re", "om", "den")

    def __init__(self, re, om, den: int = 1):
        re = np.asarray(re)
        om = np.asarray(om)
        if re.shape != om.shape or re.ndim != 2:
            raise ValueError("numerator arrays must be 2-d and the same shape")
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            re, om, den = -_obj(re), -_obj(om), -den
        g = _content(re, om, den)
        if g > 1:
            if g >= _LIMIT:
                re, om = _obj(re), _obj(om)
            re = re // g
            om = om // g
            den //= g
        self.re = _fit(re)
        self.om = _fit(om)
        self.den = den

    # construction ---------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> CycMatrix:
        cols = rows if cols is None else cols
        z = np.zeros((rows, cols), dtype=np.int64)
        return cls(z, z.copy())

    @classmethod
    def identity(cls, n: int) -> CycMatrix:
        return cls(np.eye(n, dtype=np.int64), np.zeros((n, n), dtype=np.int64))

    @classmethod
    def from_entries(cls, rows) -> CycMatrix:
        """Build from a nested list of ints, Fractions or CycNums."""
        vals = [[CycNum.coerce(v) for v in row] for row in rows]
        den = 1
        for row in vals:
            for v in row:
                den = math.lcm(den, v.a.denominator, v.b.denominator)
        re = np.array([[int(v.a * den) for v in row] for row in vals], dtype=object)
        om = np.array([[int(v.b * den) for v in row] for row in vals], dtype=object)
        return cls(re, om, den)

    @classmethod
    def column(cls, entries) -> CycMatrix:
        return cls.from_entries([[v] for v in entries])

    # basic protocol --------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.re.shape

    @property
    def rows(self) -> int:
        return self.re.shape[0]

    @property
    def cols(self) -> int:
        return self.re.shape[1]

    def __getitem__(self, idx) -> CycNum:
        i, j = idx
        return CycNum(Fraction(int(self.re[i, j]), self.den),
                      Fraction(int(self.om[i, j]), self.den))

    def entries(self) -> list[list[CycNum]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def column_entries(self, j: int = 0) -> list[CycNum]:
        return [self[i, j] for i in range(self.rows)]

    def __eq__(self, other):
        if not isinstance(other, CycMatrix):
            return NotImplemented
        return (self.shape == other.shape and self.den == other.den
                and np.array_equal(self.re, other.re)
                and np.array_equal(self.om, other.om))

    __hash__ = None

    def __repr__(self):
        return f"CycMatrix(shape={self.shape}, den={self.den})"

    def is_zero(self) -> bool:
        return not np.any(self.re) and not np.any(self.om)

    # arithmetic -------------------------------------------------------------

    def _aligned(self, other: CycMatrix):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        den = math.lcm(self.den, other.den)
        s, t = den // self.den, den // other.den
        return (_scaled(self.re, s), _scaled(self.om, s),
                _scaled(other.re, t), _scaled(other.om, t), den)

    def __add__(self, other: CycMatrix) -> CycMatrix:
        ar, aw, br, bw, den = self._aligned(other)
        return CycMatrix(ar + br, aw + bw, den)

    def __sub__(self, other: CycMatrix) -> CycMatrix:
        ar, aw, br, bw, den = self._aligned(other)
        return CycMatrix(ar - br, aw - bw, den)

    def __neg__(self) -> CycMatrix:
        return CycMatrix(-self.re, -self.om, self.den)

    def __matmul__(self, other: CycMatrix) -> CycMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        re, om = _cyc_matmul(self.re, self.om, other.re, other.om)
        return CycMatrix(re, om, self.den * other.den)

    def scale(self, c) -> CycMatrix:
        """Multiply every entry by the scalar ``c``."""
        c = CycNum.coerce(c)
        den = math.lcm(c.a.denominator, c.b.denominator)
        p, q = int(c.a * den), int(c.b * den)
        re = _scaled(self.re, p) - _scaled(self.om, q)
        om = _scaled(self.om, p) + _scaled(self.re, q) - _scaled(self.om, q)
        return CycMatrix(re, om, self.den * den)

    def __mul__(self, c):
        if isinstance(c, CycMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.scale(CycNum.coerce(1) / CycNum.coerce(c))

    def dagger(self) -> CycMatrix:
        # conj(a + b w) = (a - b) - b w
        return CycMatrix((self.re - self.om).T, (-self.om).T, self.den)

    def transpose(self) -> CycMatrix:
        return CycMatrix(self.re.T, self.om.T, self.den)

    def trace(self) -> CycNum:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        tr = int(np.trace(self.re)) if self.re.dtype != object else sum(self.re.diagonal())
        tw = int(np.trace(self.om)) if self.om.dtype != object else sum(self.om.diagonal())
        return CycNum(Fraction(int(tr), self.den), Fraction(int(tw), self.den))

    def kron(self, other: CycMatrix) -> CycMatrix:
        ar, aw, br, bw = self.re, self.om, other.re, other.om
        if not _pair_safe(ar, br, factor=4) or not _pair_safe(aw, bw, factor=4):
            ar, aw, br, bw = map(_obj, (ar, aw, br, bw))
        rr, ww = np.kron(ar, br), np.kron(aw, bw)
        re = rr - ww
        om = np.kron(ar, bw) + np.kron(aw, br) - ww
        return CycMatrix(re, om, self.den * other.den)

    def power(self, k: int) -> CycMatrix:
        if k < 0:
            raise ValueError("negative matrix powers are not supported")
        out = CycMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    # predicates ----------------------------------------------------------

    def is_hermitian(self) -> bool:
        return self.rows == self.cols and self == self.dagger()

    def is_projector(self) -> bool:
        return self.is_hermitian() and self @ self == self

    def is_scalar_identity(self, c) -> bool:
        return self == CycMatrix.identity(self.rows).scale(c)

    # partial trace ---------------------------------------------------------

    def partial_trace(self, keep, dims=None) -> CycMatrix:
        """Trace out every qutrit not listed in ``keep`` (1-based indices)."""
        return partial_trace(self, keep, dims)


def _content(re, om, den) -> int:
    vals = [den]
    if re.size:
        if re.dtype == object or om.dtype == object:
            vals.extend(int(v) for v in re.flat)
            vals.extend(int(v) for v in om.flat)
            return reduce(math.gcd, vals)
        return math.gcd(den, int(np.gcd.reduce(re, axis=None)),
                        int(np.gcd.reduce(om, axis=None)))
    return den


def _num_qutrits(dim: int) -> int:
    n = 0
    while 3**n < dim:
        n += 1
    if 3**n != dim:
        raise ValueError(f"dimension {dim} is not a power of 3")
    return n


def partial_trace(m: CycMatrix, keep, dims=None) -> CycMatrix:
    """Reduced matrix on the qutrits in ``keep`` (1-based, sorted on output).

    ``dims`` may override the per-site dimensions; by default every site is
    a qutrit and the matrix must be 3**N square.
    """
    if m.rows != m.cols:
        raise ValueError("partial trace of a non-square matrix")
    if dims is None:
        dims = (3,) * _num_qutrits(m.rows)
    n = len(dims)
    keep = sorted(set(keep))
    if not keep or len(keep) >= n or keep[0] < 1 or keep[-1] > n:
        raise ValueError(f"keep must be a nonempty proper subset of 1..{n}, got {keep}")
    out = []
    for arr in (m.re, m.om):
        t = arr.reshape(tuple(dims) * 2)
        traced = [i for i in range(n) if i + 1 not in keep]
        # trace highest axes first so lower axis numbers stay valid
        for i in reversed(traced):
            cur = t.ndim // 2
            t = np.trace(t, axis1=i, axis2=i + cur)
        k = int(np.prod([dims[i - 1] for i in keep]))
        out.append(t.reshape(k, k))
    return CycMatrix(out[0], out[1], m.den)


def kron_all(mats) -> CycMatrix:
    return reduce(lambda a, b: a.kron(b), mats)


def trace_gram(left: list[CycMatrix], right: list[CycMatrix]) -> CycMatrix:
    """Matrix of exact traces ``Tr(L_i R_j)`` for two lists of square matrices.

    Computed as one integer matmul between flattened ``L_i`` and flattened
    ``R_j^T``.
    """
    if not left or not right:
        raise ValueError("empty operand list")
    shape = left[0].shape
    for mat in (*left, *right):
        if mat.shape != shape:
            raise ValueError("all matrices must share one shape")
    lre, lom, lden = _stack([m for m in left])
    rre, rom, rden = _stack([m.transpose() for m in right])
    re, om = _cyc_matmul(lre, lom, rre.T, rom.T)
    return CycMatrix(re, om, lden * rden)


def _stack(mats: list[CycMatrix]):
    den = reduce(math.lcm, (m.den for m in mats))
    re = np.stack([_scaled(m.re, den // m.den).reshape(-1) for m in mats])
    om = np.stack([_scaled(m.om, den // m.den).reshape(-1) for m in mats])
    if re.dtype != object and om.dtype != object:
        re, om = re.astype(np.int64), om.astype(np.int64)
    return re, om, den


def stack_flat(mats: list[CycMatrix]) -> CycMatrix:
    """One row per matrix, holding its entries in row-major order."""
    return CycMatrix(*_stack(mats))


def linear_combination(coeffs, mats: list[CycMatrix]) -> CycMatrix:
    """Exact ``sum_k c_k M_k`` with CycNum/rational coefficients."""
    coeffs = [CycNum.coerce(c) for c in coeffs]
    if len(coeffs) != len(mats):
        raise ValueError("coefficient count does not match matrix count")
    shape = mats[0].shape
    cden = 1
    for c in coeffs:
        cden = math.lcm(cden, c.a.denominator, c.b.denominator)
    p = np.array([int(c.a * cden) for c in coeffs], dtype=object)
    q = np.array([int(c.b * cden) for c in coeffs], dtype=object)
    re, om, den = _stack(mats)
    p, q = _fit(p), _fit(q)
    # (p + q w)(re + om w) summed over k
    rr = _mm(p[None, :], re)
    ww = _mm(q[None, :], om)
    rw = _mm(p[None, :], om)
    wr = _mm(q[None, :], re)
    return CycMatrix((rr - ww).reshape(shape), (rw + wr - ww).reshape(shape), den * cden)


def cyc_to_json(c: CycNum) -> dict:
    """Encode ``(num/den) * (a + b w)`` with (a, b) a primitive integer pair."""
    c = CycNum.coerce(c)
    if not c:
        return {"num": 0, "den": 1, "a": 0, "b": 0}
    den = math.lcm(c.a.denominator, c.b.denominator)
    a, b = int(c.a * den), int(c.b * den)
    g = math.gcd(a, b)
    a, b = a // g, b // g
    if a < 0 or (a == 0 and b < 0):
        a, b, g = -a, -b, -g
    scale = Fraction(g, den)
    return {"num": scale.numerator, "den": scale.denominator, "a": a, "b": b}


def cyc_from_json(d: dict) -> CycNum:
    scale = Fraction(int(d["num"]), int(d["den"]))
    return CycNum(scale * int(d["a"]), scale * int(d["b"]))
