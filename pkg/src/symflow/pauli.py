"""Pauli-word sums: parsing, formatting, matrix construction, trace
projection, and decomposition of skew-Hermitian operators into unitary
Pauli terms.

Text grammar: ``term (("+"|"-") term)*`` with ``term = [coeff ("*")?] word``,
``coeff`` a real literal optionally suffixed by ``i``/``j`` (bare ``i``
means ``1i``), and ``word`` a string over ``{I, X, Y, Z}``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .nummat import ContractViolation, require_skew_hermitian

COEFF_PRUNE_TOL = 1e-12

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliSum:
    """Linear combination of Pauli words, canonically ordered and pruned."""

    n_qubits: int
    terms: tuple[tuple[str, complex], ...]

    def coeffs(self) -> dict[str, complex]:
        return dict(self.terms)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def is_hermitian(self, tol: float = COEFF_PRUNE_TOL) -> bool:
        return all(abs(c.imag) <= tol for _, c in self.terms)

    def is_skew_hermitian(self, tol: float = COEFF_PRUNE_TOL) -> bool:
        return all(abs(c.real) <= tol for _, c in self.terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if other.n_qubits != self.n_qubits:
            raise ValueError("qubit count mismatch")
        merged = self.coeffs()
        for word, c in other.terms:
            merged[word] = merged.get(word, 0.0) + c
        return pauli_sum(self.n_qubits, merged)

    def __mul__(self, scalar: complex) -> "PauliSum":
        return pauli_sum(self.n_qubits, {w: scalar * c for w, c in self.terms})

    __rmul__ = __mul__

    def __neg__(self) -> "PauliSum":
        return self * (-1.0)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-other)

    def __str__(self) -> str:
        return format_pauli_sum(self)


def pauli_sum(n_qubits: int, coeffs: dict[str, complex]) -> PauliSum:
    """Canonical constructor: validates words, merges, prunes, sorts."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be positive")
    clean: dict[str, complex] = {}
    for word, c in coeffs.items():
        if len(word) != n_qubits or any(ch not in "IXYZ" for ch in word):
            raise ValueError(f"bad Pauli word {word!r} for {n_qubits} qubit(s)")
        clean[word] = clean.get(word, 0.0) + complex(c)
    terms = tuple(
        (w, clean[w]) for w in sorted(clean) if abs(clean[w]) > COEFF_PRUNE_TOL
    )
    return PauliSum(n_qubits, terms)


_SIGN_SPLIT = re.compile(r"(?<![eE])([+-])")


def _parse_coeff(text: str) -> complex:
    text = text.strip()
    if text.endswith(("i", "j")):
        body = text[:-1].strip()
        return 1j * (float(body) if body else 1.0)
    return complex(float(text))


def parse_pauli_sum(text: str, n_qubits: int) -> PauliSum:
    """Parse the +/- separated Pauli-sum grammar, e.g. ``"0.5*XY - ZI"``."""
    stripped = text.strip()
    if not stripped:
        raise ValueError("empty Pauli-sum string")
    pieces = _SIGN_SPLIT.split(stripped)
    # pieces = [term, sign, term, sign, ...]; a leading sign yields an empty head
    coeffs: dict[str, complex] = {}
    sign = 1.0
    idx = 0
    if pieces[0].strip() == "":
        idx = 1
    while idx < len(pieces):
        piece = pieces[idx].strip()
        if piece in ("+", "-"):
            sign = 1.0 if piece == "+" else -1.0
            idx += 1
            continue
        m = re.fullmatch(r"(.*?)\*?\s*([IXYZ]+)", piece)
        if m is None:
            raise ValueError(f"malformed Pauli term {piece!r}")
        head, word = m.group(1).strip(), m.group(2)
        if len(word) != n_qubits:
            raise ValueError(
                f"word {word!r} has length {len(word)}, expected {n_qubits}"
            )
        try:
            coeff = _parse_coeff(head) if head else 1.0
        except ValueError as exc:
            raise ValueError(f"bad coefficient {head!r} in term {piece!r}") from exc
        coeffs[word] = coeffs.get(word, 0.0) + sign * coeff
        sign = 1.0
        idx += 1
    return pauli_sum(n_qubits, coeffs)


def _format_magnitude(c: complex) -> str:
    if abs(c.imag) <= COEFF_PRUNE_TOL:
        value, suffix = abs(c.real), ""
    elif abs(c.real) <= COEFF_PRUNE_TOL:
        value, suffix = abs(c.imag), "i"
    else:
        raise ValueError(f"coefficient {c} is neither real nor purely imaginary")
    if value == 1.0:
        return suffix
    return repr(value) + suffix


def _coeff_sign(c: complex) -> float:
    return c.imag if abs(c.imag) > COEFF_PRUNE_TOL else c.real


def format_pauli_sum(p: PauliSum) -> str:
    """Inverse of :func:`parse_pauli_sum` for real/imaginary coefficients."""
    if not p.terms:
        return "0*" + "I" * p.n_qubits
    out = []
    for pos, (word, c) in enumerate(p.terms):
        mag = _format_magnitude(c)
        body = f"{mag}*{word}" if mag and mag != "i" else (f"{mag}{word}" if mag else word)
        if mag == "i":
            body = "i*" + word
        if _coeff_sign(c) < 0:
            out.append(("-" if pos == 0 else " - ") + body)
        else:
            out.append(body if pos == 0 else " + " + body)
    return "".join(out)


@lru_cache(maxsize=4096)
def word_matrix(word: str) -> np.ndarray:
    mat = reduce(np.kron, (PAULI_1Q[ch] for ch in word))
    mat.setflags(write=False)
    return mat


def to_matrix(p: PauliSum) -> np.ndarray:
    d = p.dim
    out = np.zeros((d, d), dtype=complex)
    for word, c in p.terms:
        out += c * word_matrix(word)
    return out


@lru_cache(maxsize=8)
def all_words(n_qubits: int) -> tuple[str, ...]:
    words = [""]
    for _ in range(n_qubits):
        words = [w + ch for w in words for ch in "IXYZ"]
    return tuple(sorted(words))


def pauli_decompose(m) -> PauliSum:
    """Project a matrix onto Pauli words: coeff(P) = tr(P m) / d."""
    m = np.asarray(m, dtype=complex)
    d = m.shape[0]
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got {m.shape}")
    n = d.bit_length() - 1
    if 2**n != d:
        raise ValueError(f"dimension {d} is not a power of 2")
    coeffs = {}
    for word in all_words(n):
        c = complex(np.sum(word_matrix(word).T * m)) / d  # tr(P m)/d
        if abs(c) > COEFF_PRUNE_TOL:
            coeffs[word] = c
    return pauli_sum(n, coeffs) if coeffs else PauliSum(n, ())


@dataclass(frozen=True)
class UnitaryDecomposition:
    """Skew-Hermitian operator written as sum_l chi_l * w_l with unitary
    Pauli words w_l and purely imaginary chi_l."""

    n_qubits: int
    terms: tuple[tuple[complex, str], ...]

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((2**self.n_qubits,) * 2, dtype=complex)
        for chi, word in self.terms:
            out += chi * word_matrix(word)
        return out


def unitary_decomposition(z) -> UnitaryDecomposition:
    """Decompose a skew-Hermitian matrix into unitary Pauli words."""
    z = require_skew_hermitian(z, name="generator")
    herm = pauli_decompose(-1j * z)
    terms = []
    for word, c in herm.terms:
        if abs(c.imag) > 1e-10:
            raise ContractViolation("decomposition of -i*z has a complex coefficient")
        terms.append((1j * c.real, word))
    return UnitaryDecomposition(herm.n_qubits, tuple(terms))


def embed(p: PauliSum, wires, n_qubits: int) -> PauliSum:
    """Place a local Pauli sum on the given wires of a larger register."""
    wires = tuple(wires)
    if len(wires) != p.n_qubits:
        raise ValueError("wire count does not match the local qubit count")
    if len(set(wires)) != len(wires) or any(not 0 <= w < n_qubits for w in wires):
        raise ValueError(f"bad wires {wires} for {n_qubits} qubit(s)")
    coeffs = {}
    for word, c in p.terms:
        full = ["I"] * n_qubits
        for ch, w in zip(word, wires):
            full[w] = ch
        coeffs["".join(full)] = c
    return pauli_sum(n_qubits, coeffs) if coeffs else PauliSum(n_qubits, ())
