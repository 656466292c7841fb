import numpy as np
import pytest

from symflow import circuit, liealg, pauli


def random_skew(d: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a - a.conj().T) / 2.0


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return v / np.linalg.norm(v)


def random_word(n_wires: int, rng: np.random.Generator) -> str:
    return "".join(rng.choice(list("XYZ"), size=n_wires))


def random_circuit(n: int, p: int, rng: np.random.Generator,
                   n_fixed: int = 1) -> circuit.CircuitSpec:
    """Random Pauli-rotation circuit with p trainable and n_fixed frozen gates."""
    gates = []
    for j in range(p):
        k = int(rng.integers(1, min(n, 2) + 1))
        wires = tuple(int(w) for w in rng.choice(n, size=k, replace=False))
        gates.append(circuit.rotation(random_word(k, rng), wires, param=j))
    for _ in range(n_fixed):
        k = int(rng.integers(1, min(n, 2) + 1))
        wires = tuple(int(w) for w in rng.choice(n, size=k, replace=False))
        gates.append(circuit.rotation(random_word(k, rng), wires,
                                      angle=float(rng.uniform(0, 2 * np.pi))))
    rng.shuffle(gates)
    return circuit.CircuitSpec(n, tuple(gates), p)


def random_observable(n: int, rng: np.random.Generator, n_terms: int = 3) -> pauli.PauliSum:
    coeffs = {}
    for _ in range(n_terms):
        word = "".join(rng.choice(list("IXYZ"), size=n))
        coeffs[word] = coeffs.get(word, 0.0) + float(rng.standard_normal())
    return pauli.pauli_sum(n, coeffs)


def pauli_subspace(d: int, words, scales=None) -> liealg.Subspace:
    """Subspace spanned by i * (scaled Pauli-word combinations)."""
    mats = []
    for entry in words:
        m = sum(pauli.word_matrix(w) for w in ((entry,) if isinstance(entry, str) else entry))
        m = 1j * np.asarray(m, dtype=complex)
        m = m / np.sqrt(liealg.trace_inner(m, m))
        mats.append(m)
    return liealg.subspace(d, mats)


def span_of(mats, d: int) -> liealg.Subspace:
    """Subspace spanning possibly non-orthogonal skew matrices."""
    from symflow.nummat import orthonormal_rows

    rows = np.stack([liealg.coords(m, d) for m in mats])
    return liealg.subspace_from_rows(orthonormal_rows(rows), d)


def span_rows(vectors) -> np.ndarray:
    from symflow.nummat import orthonormal_rows
    from symflow.tangent import embed_real

    if not len(vectors):
        return np.zeros((0, 0))
    return orthonormal_rows(np.stack([embed_real(v) for v in vectors]))


def same_tangent_span(vecs, targets, tol: float = 1e-8) -> bool:
    """Span equality of two families of state tangents via projectors."""
    if len(vecs) != len(targets):
        return False
    if not len(vecs):
        return True
    a = span_rows(vecs)
    b = span_rows(targets)
    if a.shape != b.shape:
        return False
    return bool(np.max(np.abs(a.T @ a - b.T @ b)) < tol)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


# frequently used circuit: global_phase(t3) RX(t2) RY(t1) on one qubit
def single_qubit_example() -> circuit.CircuitSpec:
    return circuit.CircuitSpec(1, (
        circuit.rotation("Y", (0,), param=0),
        circuit.rotation("X", (0,), param=1),
        circuit.Gate(pauli.parse_pauli_sum("-I", 1), (0,), param=2),
    ), 3)


# two-qubit example: CRX(t3; control=wire1, target=wire0) RY2(t2) RY1(t1)
def two_qubit_example() -> circuit.CircuitSpec:
    crx = pauli.parse_pauli_sum("0.25*XI - 0.25*XZ", 2)
    return circuit.CircuitSpec(2, (
        circuit.rotation("Y", (0,), param=0),
        circuit.rotation("Y", (1,), param=1),
        circuit.Gate(crx, (0, 1), param=2),
    ), 3)


def su2_tensor_subspace() -> liealg.Subspace:
    return pauli_subspace(4, [("XI", "IX"), ("YI", "IY"), ("ZI", "IZ")])
