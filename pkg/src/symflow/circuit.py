"""Parametrized circuit model and exact statevector simulation.

A circuit is an ordered gate list applied left-to-right in time; gate j
implements exp(i * scale * angle * H) for a Hermitian Pauli-sum generator
H on its wires (scale defaults to -1, so standard rotations use H = P/2
and a global phase gate uses H = -I).  Effective generators, state and
cost partial derivatives, and the circuit's dynamical Lie algebra are
derived from the same model.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import liealg, pauli
from .nummat import expm_skew

DENSE_QUBIT_CAP = 10

Statevector = np.ndarray
ParamPoint = np.ndarray


@dataclass(frozen=True)
class Gate:
    """One gate: exp(i * scale * angle * H) with Hermitian generator H.

    Exactly one of ``param`` (trainable angle index) and ``angle`` (fixed
    angle) must be set.
    """

    generator: pauli.PauliSum
    wires: tuple[int, ...]
    param: int | None = None
    angle: float | None = None
    scale: float = -1.0

    def __post_init__(self):
        object.__setattr__(self, "wires", tuple(self.wires))
        if (self.param is None) == (self.angle is None):
            raise ValueError("gate needs exactly one of param index or fixed angle")
        if len(set(self.wires)) != len(self.wires):
            raise ValueError(f"repeated wires {self.wires}")
        if self.generator.n_qubits != len(self.wires):
            raise ValueError("generator qubit count does not match wires")
        if not self.generator.is_hermitian():
            raise ValueError("gate generator must be Hermitian (real coefficients)")


@dataclass(frozen=True)
class CircuitSpec:
    """Gate sequence in time order with a fixed trainable-parameter count."""

    n_qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)
    n_params: int = 0

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        seen = set()
        for g in self.gates:
            if any(not 0 <= w < self.n_qubits for w in g.wires):
                raise ValueError(f"gate wires {g.wires} out of range")
            if g.param is not None:
                if not 0 <= g.param < self.n_params:
                    raise ValueError(f"param index {g.param} out of range")
                if g.param in seen:
                    raise ValueError(f"parameter {g.param} used by more than one gate")
                seen.add(g.param)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


def rotation(word: str, wires, param: int | None = None, angle: float | None = None) -> Gate:
    """Standard Pauli rotation exp(-i * theta * P / 2)."""
    wires = tuple(wires)
    return Gate(pauli.parse_pauli_sum(word, len(wires)) * 0.5, wires,
                param=param, angle=angle)


def check_theta(c: CircuitSpec, theta) -> np.ndarray:
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.shape != (c.n_params,):
        raise ValueError(f"theta has shape {theta.shape}, expected ({c.n_params},)")
    if not np.all(np.isfinite(theta)):
        raise ValueError("theta entries must be finite")
    return theta


def gate_angle(g: Gate, theta: np.ndarray) -> float:
    return float(theta[g.param]) if g.param is not None else float(g.angle)


def gate_skew_generator(g: Gate) -> np.ndarray:
    """Local skew-Hermitian generator i * scale * H."""
    return 1j * g.scale * pauli.to_matrix(g.generator)


def gate_unitary(g: Gate, theta: np.ndarray) -> np.ndarray:
    """Local unitary exp(angle * (i * scale * H))."""
    return expm_skew(gate_skew_generator(g), gate_angle(g, theta))


def apply_local(state: Statevector, mat: np.ndarray, wires, n: int) -> Statevector:
    """Apply a 2^k x 2^k operator to the given wires of an n-qubit state."""
    wires = list(wires)
    k = len(wires)
    psi = np.asarray(state, dtype=complex).reshape([2] * n)
    psi = np.moveaxis(psi, wires, range(k))
    psi = mat @ psi.reshape(2**k, -1)
    psi = np.moveaxis(psi.reshape([2] * n), range(k), wires)
    return psi.reshape(-1)


def embed_operator(mat: np.ndarray, wires, n: int) -> np.ndarray:
    """Promote a local operator to the full 2^n-dimensional register."""
    wires = list(wires)
    k = len(wires)
    rest = [q for q in range(n) if q not in wires]
    full = np.kron(mat, np.eye(2 ** (n - k), dtype=complex))
    tensor = full.reshape([2] * (2 * n))
    perm = list(np.argsort(wires + rest))
    tensor = tensor.transpose(perm + [p + n for p in perm])
    return tensor.reshape(2**n, 2**n)


def apply_gates(c: CircuitSpec, theta, psi0: Statevector, start: int = 0,
                stop: int | None = None) -> Statevector:
    """Apply gates[start:stop] to a state, gate by gate."""
    theta = check_theta(c, theta)
    psi = np.asarray(psi0, dtype=complex)
    if psi.shape != (c.dim,):
        raise ValueError(f"state has shape {psi.shape}, expected ({c.dim},)")
    stop = len(c.gates) if stop is None else stop
    for g in c.gates[start:stop]:
        psi = apply_local(psi, gate_unitary(g, theta), g.wires, c.n_qubits)
    return psi


def apply(c: CircuitSpec, theta, psi0: Statevector) -> Statevector:
    return apply_gates(c, theta, psi0)


def build_unitary(c: CircuitSpec, theta) -> np.ndarray:
    """Full dense circuit unitary (capped at 10 qubits)."""
    if c.n_qubits > DENSE_QUBIT_CAP:
        raise ValueError(f"dense build capped at {DENSE_QUBIT_CAP} qubits")
    theta = check_theta(c, theta)
    u = np.eye(c.dim, dtype=complex)
    for g in c.gates:
        u = embed_operator(gate_unitary(g, theta), g.wires, c.n_qubits) @ u
    return u


def _unitary_range(c: CircuitSpec, theta: np.ndarray, start: int, stop: int) -> np.ndarray:
    if c.n_qubits > DENSE_QUBIT_CAP:
        raise ValueError(f"dense build capped at {DENSE_QUBIT_CAP} qubits")
    u = np.eye(c.dim, dtype=complex)
    for g in c.gates[start:stop]:
        u = embed_operator(gate_unitary(g, theta), g.wires, c.n_qubits) @ u
    return u


def _gate_index(c: CircuitSpec, j: int) -> int:
    for k, g in enumerate(c.gates):
        if g.param == j:
            return k
    raise ValueError(f"no gate is controlled by parameter {j}")


def effective_generator(c: CircuitSpec, theta, j: int, side: str = "right") -> np.ndarray:
    """Skew-Hermitian generator of the parameter-j direction of change,
    pulled to the right (U^dag dU) or left ((dU) U^dag) of the circuit."""
    theta = check_theta(c, theta)
    k = _gate_index(c, j)
    g = c.gates[k]
    kappa = embed_operator(gate_skew_generator(g), g.wires, c.n_qubits)
    if side == "right":
        u_pre = _unitary_range(c, theta, 0, k)
        return u_pre.conj().T @ kappa @ u_pre
    if side == "left":
        u_post = _unitary_range(c, theta, k, len(c.gates))
        return u_post @ kappa @ u_post.conj().T
    raise ValueError(f"side must be 'right' or 'left', got {side!r}")


def state_partial(c: CircuitSpec, theta, j: int, psi0: Statevector) -> Statevector:
    """Tangent vector d|psi(theta)>/d theta_j (zero if j drives no gate)."""
    theta = check_theta(c, theta)
    try:
        k = _gate_index(c, j)
    except ValueError:
        if 0 <= j < c.n_params:
            return np.zeros(c.dim, dtype=complex)
        raise
    g = c.gates[k]
    psi = apply_gates(c, theta, psi0, 0, k)
    psi = apply_local(psi, gate_skew_generator(g), g.wires, c.n_qubits)
    return apply_gates(c, theta, psi, k)


def expectation(state: Statevector, m: pauli.PauliSum) -> float:
    val = np.vdot(state, pauli.to_matrix(m) @ state)
    return float(val.real)


def cost(c: CircuitSpec, theta, psi0: Statevector, m: pauli.PauliSum) -> float:
    """<psi(theta)| M |psi(theta)> for a Hermitian observable M."""
    if not m.is_hermitian():
        raise ValueError("observable must be Hermitian")
    return expectation(apply(c, theta, psi0), m)


def cost_partial(c: CircuitSpec, theta, j: int, psi0: Statevector, m: pauli.PauliSum) -> float:
    """d C / d theta_j as 2 Re <psi| M |d_j psi>."""
    if not m.is_hermitian():
        raise ValueError("observable must be Hermitian")
    psi = apply(c, theta, psi0)
    dpsi = state_partial(c, theta, j, psi0)
    return float(2.0 * np.real(np.vdot(psi, pauli.to_matrix(m) @ dpsi)))


def cost_partial_commutator(c: CircuitSpec, theta, j: int, psi0: Statevector,
                            m: pauli.PauliSum) -> float:
    """Same derivative via <psi0| [M~, Omega_j] |psi0> with the conjugated
    observable M~ = U^dag M U; cross-checks the overlap route."""
    theta = check_theta(c, theta)
    u = build_unitary(c, theta)
    m_tilde = u.conj().T @ pauli.to_matrix(m) @ u
    omega = effective_generator(c, theta, j, "right")
    comm = m_tilde @ omega - omega @ m_tilde
    return float(np.real(np.vdot(psi0, comm @ np.asarray(psi0, dtype=complex))))


def cost_gradient(c: CircuitSpec, theta, psi0: Statevector, m: pauli.PauliSum) -> np.ndarray:
    return np.array([cost_partial(c, theta, j, psi0, m) for j in range(c.n_params)])


def dla(c: CircuitSpec) -> liealg.Subspace:
    """Dynamical Lie algebra: the closure of the embedded gate generators."""
    gens = [
        embed_operator(gate_skew_generator(g), g.wires, c.n_qubits) for g in c.gates
    ]
    return liealg.lie_closure(gens)


def basis_state(label: str) -> Statevector:
    """Computational basis state from a bit string, qubit 0 leftmost."""
    if not label or any(ch not in "01" for ch in label):
        raise ValueError(f"bad basis-state label {label!r}")
    n = len(label)
    psi = np.zeros(2**n, dtype=complex)
    psi[int(label, 2)] = 1.0
    return psi


def random_product_state(n: int, seed: int) -> Statevector:
    """Seeded random product state; deterministic for a given seed."""
    rng = np.random.default_rng(seed)
    psi = np.ones(1, dtype=complex)
    for _ in range(n):
        amp = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        psi = np.kron(psi, amp / np.linalg.norm(amp))
    return psi
