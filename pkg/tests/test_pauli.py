from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symflow import pauli
from symflow.nummat import ContractViolation


PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_oracle(word: str) -> np.ndarray:
    return reduce(np.kron, (PAULI[ch] for ch in word))


def test_parse_single_letters():
    assert np.allclose(pauli.to_matrix(pauli.parse_pauli_sum("Z", 1)), np.diag([1, -1]))
    assert np.allclose(pauli.to_matrix(pauli.parse_pauli_sum("I", 1)), np.eye(2))


def test_parse_two_qubit_sum_kron_oracle():
    got = pauli.to_matrix(pauli.parse_pauli_sum("XX - YY", 2))
    assert np.allclose(got, kron_oracle("XX") - kron_oracle("YY"), atol=1e-14)


def test_parse_coefficients():
    p = pauli.parse_pauli_sum("0.5*XY - ZI + 2i*YY", 2)
    c = p.coeffs()
    assert c["XY"] == pytest.approx(0.5)
    assert c["ZI"] == pytest.approx(-1.0)
    assert c["YY"] == pytest.approx(2j)
    q = pauli.parse_pauli_sum("-i*Z + 1.5e-2*X", 1)
    assert q.coeffs()["Z"] == pytest.approx(-1j)
    assert q.coeffs()["X"] == pytest.approx(0.015)


def test_parse_errors():
    with pytest.raises(ValueError):
        pauli.parse_pauli_sum("XQ", 2)
    with pytest.raises(ValueError):
        pauli.parse_pauli_sum("XX", 3)
    with pytest.raises(ValueError):
        pauli.parse_pauli_sum("foo*XX", 2)
    with pytest.raises(ValueError):
        pauli.parse_pauli_sum("", 1)


def test_zero_sum_matrix():
    p = pauli.parse_pauli_sum("0*XX", 2)
    assert p.terms == ()
    assert np.allclose(pauli.to_matrix(p), np.zeros((4, 4)))


def test_swap_from_pauli_combination():
    swap = np.zeros((4, 4))
    swap[0, 0] = swap[3, 3] = swap[1, 2] = swap[2, 1] = 1.0
    p = pauli.parse_pauli_sum("0.5*II + 0.5*XX + 0.5*YY + 0.5*ZZ", 2)
    assert np.allclose(pauli.to_matrix(p), swap, atol=1e-14)
    back = pauli.pauli_decompose(swap)
    assert set(back.coeffs()) == {"II", "XX", "YY", "ZZ"}
    assert all(c == pytest.approx(0.5) for c in back.coeffs().values())


def test_decompose_identity():
    p = pauli.pauli_decompose(np.eye(2))
    assert p.terms == (("I", 1.0 + 0.0j),)


def test_decompose_random_hermitian_real_coeffs(rng):
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = (a + a.conj().T) / 2
    p = pauli.pauli_decompose(h)
    assert all(abs(c.imag) < 1e-12 for c in p.coeffs().values())
    assert np.allclose(pauli.to_matrix(p), h, atol=1e-12)


def test_decompose_rejects_bad_dimension():
    with pytest.raises(ValueError):
        pauli.pauli_decompose(np.eye(3))


@st.composite
def pauli_sums(draw):
    n = draw(st.integers(1, 3))
    n_terms = draw(st.integers(1, 4))
    coeffs = {}
    for _ in range(n_terms):
        word = "".join(draw(st.sampled_from("IXYZ")) for _ in range(n))
        mag = draw(st.floats(0.01, 10.0, allow_nan=False))
        sign = draw(st.sampled_from([1.0, -1.0]))
        kind = draw(st.sampled_from(["real", "imag"]))
        coeffs[word] = sign * mag * (1j if kind == "imag" else 1.0)
    return pauli.pauli_sum(n, coeffs)


@settings(deadline=None, max_examples=50)
@given(p=pauli_sums())
def test_parse_format_round_trip(p):
    back = pauli.parse_pauli_sum(pauli.format_pauli_sum(p), p.n_qubits)
    assert [w for w, _ in back.terms] == [w for w, _ in p.terms]
    for (_, a), (_, b) in zip(back.terms, p.terms):
        assert abs(a - b) < 1e-12


@settings(deadline=None, max_examples=30)
@given(p=pauli_sums())
def test_decompose_matrix_round_trip(p):
    back = pauli.pauli_decompose(pauli.to_matrix(p))
    assert np.allclose(pauli.to_matrix(back), pauli.to_matrix(p), atol=1e-12)


def test_unitary_decomposition_single_word():
    dec = pauli.unitary_decomposition(1j * PAULI["Z"])
    assert dec.terms == ((1j, "Z"),)


def test_unitary_decomposition_two_terms():
    z = 1j * (PAULI["X"] + PAULI["Z"]) / np.sqrt(2)
    dec = pauli.unitary_decomposition(z)
    assert len(dec.terms) == 2
    assert all(abs(abs(chi) - 1 / np.sqrt(2)) < 1e-12 for chi, _ in dec.terms)
    assert np.allclose(dec.reconstruct(), z, atol=1e-12)


def test_unitary_decomposition_swap():
    swap = pauli.to_matrix(pauli.parse_pauli_sum("0.5*II+0.5*XX+0.5*YY+0.5*ZZ", 2))
    dec = pauli.unitary_decomposition(1j * swap)
    assert len(dec.terms) == 4
    assert all(chi == pytest.approx(0.5j) for chi, _ in dec.terms)


def test_unitary_decomposition_terms_unitary_orthogonal(rng):
    z = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    z = (z - z.conj().T) / 2
    dec = pauli.unitary_decomposition(z)
    mats = [pauli.word_matrix(w) for _, w in dec.terms]
    for m in mats:
        assert np.allclose(m.conj().T @ m, np.eye(4), atol=1e-14)
    for a in range(len(mats)):
        for b in range(a + 1, len(mats)):
            assert abs(np.trace(mats[a].conj().T @ mats[b])) < 1e-12
    assert np.allclose(dec.reconstruct(), z, atol=1e-12)


def test_unitary_decomposition_rejects_hermitian():
    with pytest.raises(ContractViolation):
        pauli.unitary_decomposition(PAULI["Z"])


def test_embed():
    p = pauli.parse_pauli_sum("0.5*XY", 2)
    e = pauli.embed(p, (2, 0), 3)
    assert e.coeffs() == {"YIX": 0.5}
    with pytest.raises(ValueError):
        pauli.embed(p, (0,), 3)
