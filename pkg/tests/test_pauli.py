import itertools
from functools import reduce

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qutrit_mub.cyclotomic import CycNum
from qutrit_mub.pauli import (PauliError, PauliOp, all_ops, body_count, commutes, dagger,
                              format_op, multiply, parse_op, symplectic_form, to_matrix,
                              trit_space)

W = np.exp(2j * np.pi / 3)
# independent complex oracle: Z|n> = w^n |n>, X|n> = |n+1>
Z1 = np.diag([1, W, W**2])
X1 = np.roll(np.eye(3), 1, axis=0)


def oracle(op: PauliOp) -> np.ndarray:
    factors = [np.linalg.matrix_power(X1, x) @ np.linalg.matrix_power(Z1, z)
               for x, z in zip(op.x, op.z)]
    return W**op.phase * reduce(np.kron, factors)


def as_complex(m) -> np.ndarray:
    return np.array([[float(v.a) + float(v.b) * W for v in row] for row in m.entries()])


def ops(n):
    trits = st.tuples(*[st.integers(0, 2)] * n)
    return st.builds(lambda p, x, z: PauliOp(n, p, x, z), st.integers(0, 2), trits, trits)


def test_letters_match_definitions():
    assert np.allclose(oracle(parse_op("Y")), X1 @ Z1)
    assert np.allclose(oracle(parse_op("V")), X1 @ Z1 @ Z1)
    assert np.allclose(as_complex(to_matrix(parse_op("X"))), X1)
    assert np.allclose(as_complex(to_matrix(parse_op("Z"))), Z1)


@pytest.mark.parametrize("text", ["I", "Z", "Z2", "X", "X2", "Y", "Y2", "V", "V2"])
def test_format_round_trip_single(text):
    assert format_op(parse_op(text)) == text


def test_format_round_trip_all_two_qutrit():
    for op in all_ops(2, include_identity=True):
        assert parse_op(format_op(op)) == op


def test_squared_letters_carry_no_phase():
    # the token Y2 is the canonical X^2 Z^2; the matrix square of Y is w * Y2
    assert parse_op("Y2") == PauliOp(1, 0, (2,), (2,))
    assert parse_op("Y") ** 2 == PauliOp(1, 1, (2,), (2,))
    assert multiply(parse_op("Y"), parse_op("Y")) == parse_op("w1Y2")


def test_known_products():
    assert multiply(parse_op("Z"), parse_op("X")) == parse_op("w1Y")
    assert multiply(parse_op("X"), parse_op("Z")) == parse_op("Y")
    assert dagger(parse_op("w1Y")) == parse_op("Y2")
    assert dagger(parse_op("Y")) == parse_op("w1Y2")
    assert dagger(parse_op("ZX")) == parse_op("Z2X2")


def test_parse_errors():
    for bad in ["", "Q", "w3X", "X3", "2X", "I2"]:
        with pytest.raises(PauliError):
            parse_op(bad)
    with pytest.raises(PauliError):
        parse_op("XZ", 3)


def test_phase_prefix():
    op = parse_op("w2ZX")
    assert op.phase == 2 and op.canonical() == parse_op("ZX")
    assert str(op) == "w2ZX"


def test_multiplication_matches_oracle_exhaustively_one_qutrit():
    group = [PauliOp(1, p, (x,), (z,)) for p, x, z in itertools.product(range(3), repeat=3)]
    for a, b in itertools.product(group, repeat=2):
        assert np.allclose(oracle(multiply(a, b)), oracle(a) @ oracle(b))


@given(ops(2), ops(2))
def test_multiplication_homomorphism(a, b):
    assert np.allclose(oracle(multiply(a, b)), oracle(a) @ oracle(b))
    assert np.allclose(oracle(a * b), oracle(a) @ oracle(b))


@given(ops(3))
def test_dagger_and_matrix(a):
    assert np.allclose(oracle(dagger(a)), oracle(a).conj().T)
    assert np.allclose(as_complex(to_matrix(a)), oracle(a))


@given(ops(2), ops(2))
def test_commutation_is_symplectic(a, b):
    ma, mb = oracle(a), oracle(b)
    t = symplectic_form(a, b)
    # ab = w^(<a,b>) ba
    assert np.allclose(ma @ mb, W**t * (mb @ ma))
    assert commutes(a, b) == (t == 0)
    assert symplectic_form(b, a) == (-t) % 3


@given(ops(3), st.integers(-4, 7))
def test_powers(a, k):
    assert np.allclose(oracle(a**k), np.linalg.matrix_power(oracle(a), k % 3) if k % 3 else np.eye(27))


def test_cube_is_identity():
    for a in all_ops(2):
        assert (a**3).is_identity() and (a**3).phase == 0


def test_body_count():
    assert body_count(parse_op("IZI")) == 1
    assert body_count(parse_op("XIY2")) == 2
    assert body_count(parse_op("III")) == 0


def test_packed_index_round_trip():
    space = trit_space(2)
    for i in range(81):
        op = PauliOp.from_index(2, i)
        assert op.index == i
        assert space.body[i] == body_count(op)
    # qutrit 1 is the least significant digit
    assert parse_op("ZI").index == 1 and parse_op("IZ").index == 9


def test_sym_table_matches_form():
    space = trit_space(2)
    for i, j in itertools.product(range(81), repeat=2):
        a, b = PauliOp.from_index(2, i), PauliOp.from_index(2, j)
        assert space.sym[i, j] == symplectic_form(a, b)


def test_mixed_sizes_rejected():
    with pytest.raises(PauliError):
        multiply(parse_op("X"), parse_op("XX"))


def test_matrix_entries_are_roots_of_unity():
    m = to_matrix(parse_op("VY2"))
    nonzero = [v for row in m.entries() for v in row if v]
    assert len(nonzero) == 9
    assert all(isinstance(v, CycNum) and v.root_power() is not None for v in nonzero)
