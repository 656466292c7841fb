"""State-space tangent machinery: vertical and equivariant tangent frames
under the two symmetry actions, the orthogonal four-way decomposition of
the unitary tangent space at a state, and the split of u(d) induced by
pulling the horizontal subspace back through the action.

The two actions differ in where the symmetry generator is inserted:
``theta`` acts at the initial state (before the circuit), ``left`` at the
output state (after the circuit).  Tangent vectors live in the real
vector space spanned by x|psi> for skew-Hermitian x, with inner product
Re<a|b>; internally they are embedded into R^{2d}.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import circuit, liealg
from .nummat import (
    ContractViolation,
    nullspace_real,
    orthonormal_rows,
    sym_orthonormalize,
)

INTERSECT_EIG_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SymmetrySpec:
    """A represented symmetry algebra plus the action it generates."""

    generators: liealg.Subspace
    action: str  # "left" or "theta"

    def __post_init__(self):
        if self.action not in ("left", "theta"):
            raise ValueError(f"action must be 'left' or 'theta', got {self.action!r}")
        if not liealg.is_subalgebra(self.generators):
            raise ContractViolation("symmetry generators are not bracket-closed")


@dataclass(frozen=True, eq=False)
class TangentFrame:
    """Raw symmetry tangents, their Gram matrix, and an orthonormal frame."""

    raw: tuple[np.ndarray, ...]
    gram: np.ndarray
    onb: tuple[np.ndarray, ...]
    rank: int


@dataclass(frozen=True, eq=False)
class StateFourDecomposition:
    """Mutually orthogonal tangent lists: purely covariant, covariant and
    equivariant, purely equivariant (vertical), and the remaining vertical
    directions."""

    cov: tuple[np.ndarray, ...]
    both: tuple[np.ndarray, ...]
    equi: tuple[np.ndarray, ...]
    vert: tuple[np.ndarray, ...]
    residual_dim: int


def real_overlap(x, y) -> float:
    """Re <x|y> on state tangents."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch {x.shape} vs {y.shape}")
    return float(np.real(np.vdot(x, y)))


def embed_real(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.concatenate([v.real, v.imag])


def unembed(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    half = r.size // 2
    return r[:half] + 1j * r[half:]


def _gram(vectors) -> np.ndarray:
    k = len(vectors)
    g = np.zeros((k, k))
    for a in range(k):
        for b in range(a, k):
            g[a, b] = g[b, a] = real_overlap(vectors[a], vectors[b])
    return g


def _frame(z_mats, c: circuit.CircuitSpec, theta, psi0, action: str) -> TangentFrame:
    psi0 = np.asarray(psi0, dtype=complex)
    if z_mats and z_mats[0].shape != (c.dim,) * 2:
        raise ValueError("symmetry generators do not match the state dimension")
    if action == "theta":
        base_raw = [z @ psi0 for z in z_mats]
        gram = _gram(base_raw)
        base_onb = sym_orthonormalize(base_raw, gram)
        raw = [circuit.apply(c, theta, v) for v in base_raw]
        onb = [circuit.apply(c, theta, v) for v in base_onb]
    else:
        psi = circuit.apply(c, theta, psi0)
        raw = [z @ psi for z in z_mats]
        gram = _gram(raw)
        onb = sym_orthonormalize(raw, gram)
    return TangentFrame(tuple(raw), gram, tuple(onb), len(onb))


def vertical_frame(sym: SymmetrySpec, c: circuit.CircuitSpec, theta, psi0) -> TangentFrame:
    """Frame of the symmetry-generated (vertical) tangent subspace."""
    return _frame(list(sym.generators.basis), c, theta, psi0, sym.action)


def equivariant_frame(sym: SymmetrySpec, c: circuit.CircuitSpec, theta, psi0) -> TangentFrame:
    """Frame of the commutant-generated (equivariant) tangent subspace."""
    comm = liealg.commutant(sym.generators)
    return _frame(list(comm.basis), c, theta, psi0, sym.action)


def state_tangent_rows(psi) -> np.ndarray:
    """Orthonormal rows spanning the unitary tangent space at a state,
    embedded in R^{2d}; this is the real orthocomplement of psi itself."""
    return nullspace_real(embed_real(psi)[None, :])


def _rows_from_tangents(vectors) -> np.ndarray:
    if not vectors:
        return np.zeros((0, 0))
    return orthonormal_rows(np.stack([embed_real(v) for v in vectors]))


def _complement_rows(rows: np.ndarray, inner: np.ndarray) -> np.ndarray:
    out = rows.copy()
    for r in inner:
        out = out - np.outer(out @ r, r)
    return orthonormal_rows(out) if out.size else out


def _projector(rows: np.ndarray, dim: int) -> np.ndarray:
    if rows.size == 0:
        return np.zeros((dim, dim))
    return rows.T @ rows


def _intersect(p_a: np.ndarray, p_b: np.ndarray) -> np.ndarray:
    """Orthonormal rows of range(p_a) intersected with range(p_b)."""
    m = p_a @ p_b @ p_a
    evals, vecs = np.linalg.eigh((m + m.T) / 2.0)
    keep = evals >= 1.0 - INTERSECT_EIG_TOL
    return vecs[:, keep].T


def state_four_decomposition(sym: SymmetrySpec, c: circuit.CircuitSpec, theta,
                             psi0) -> StateFourDecomposition:
    """Orthogonal four-way split of the unitary tangent space at the state."""
    psi0 = np.asarray(psi0, dtype=complex)
    psi = circuit.apply(c, theta, psi0)
    dim = 2 * psi.size

    t_rows = state_tangent_rows(psi)
    v_rows = _rows_from_tangents(list(vertical_frame(sym, c, theta, psi0).onb))
    e_rows = _rows_from_tangents(list(equivariant_frame(sym, c, theta, psi0).onb))
    if v_rows.size == 0:
        v_rows = np.zeros((0, dim))
    if e_rows.size == 0:
        e_rows = np.zeros((0, dim))
    h_rows = _complement_rows(t_rows, v_rows)

    p_v = _projector(v_rows, dim)
    p_e = _projector(e_rows, dim)
    p_h = _projector(h_rows, dim)
    eye = np.eye(dim)

    equi_rows = _intersect(p_e, p_v)
    both_rows = _intersect(p_e, p_h)
    cov_rows = _intersect(p_h, eye - p_e)
    vert_rows = _intersect(p_v, eye - _projector(equi_rows, dim))

    total = sum(r.shape[0] for r in (cov_rows, both_rows, equi_rows, vert_rows))
    residual = t_rows.shape[0] - total

    def tangents(rows):
        return tuple(unembed(r) for r in rows)

    return StateFourDecomposition(
        cov=tangents(cov_rows),
        both=tangents(both_rows),
        equi=tangents(equi_rows),
        vert=tangents(vert_rows),
        residual_dim=int(residual),
    )


def tangent_report(vectors, psi) -> list[str]:
    """One line per tangent: the amplitude list, plus the least-norm skew
    Pauli generator reproducing it at ``psi`` when one exists."""
    from . import pauli

    psi = np.asarray(psi, dtype=complex)
    d = psi.size
    basis = liealg.skew_basis(d)
    columns = np.stack([embed_real(e @ psi) for e in basis], axis=1)
    lines = []
    for v in vectors:
        v = np.asarray(v, dtype=complex)
        amps = np.array2string(np.round(v, 8), separator=", ")
        coeffs, *_ = np.linalg.lstsq(columns, embed_real(v), rcond=None)
        residual = np.linalg.norm(columns @ coeffs - embed_real(v))
        if residual < 1e-8 and d & (d - 1) == 0:
            gen = liealg.from_coords(coeffs, d)
            lines.append(f"{amps}  generated by {pauli.format_pauli_sum(pauli.pauli_decompose(gen))}")
        else:
            lines.append(amps)
    return lines


def _action_tangent(mat: np.ndarray, sym: SymmetrySpec, c: circuit.CircuitSpec,
                    theta, psi0: np.ndarray) -> np.ndarray:
    if sym.action == "theta":
        return circuit.apply(c, theta, mat @ psi0)
    return mat @ circuit.apply(c, theta, psi0)


def induced_algebra_split(sym: SymmetrySpec, c: circuit.CircuitSpec, theta,
                          psi0) -> tuple[liealg.Subspace, liealg.Subspace]:
    """Split u(d) by pulling the vertical/horizontal decomposition of the
    state tangent space back through the action.

    The induced vertical space u_perp collects the symmetry and commutant
    directions whose action tangents are vertical at the current state,
    minus the symmetry directions that act trivially there; u_par is its
    orthogonal complement under the trace inner product.  Zero-tangent
    directions outside the symmetry algebra therefore count as vertical
    when they are shadowed by a genuine symmetry tangent, while trivially
    acting symmetry generators never do.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    d = c.dim
    t_sub = sym.generators
    v_rows = _rows_from_tangents(list(vertical_frame(sym, c, theta, psi0).onb))
    dim_embed = 2 * d
    if v_rows.size == 0:
        v_rows = np.zeros((0, dim_embed))
    p_v = _projector(v_rows, dim_embed)

    def tangent_of(row: np.ndarray) -> np.ndarray:
        return embed_real(_action_tangent(liealg.from_coords(row, d), sym, c, theta, psi0))

    # symmetry directions acting nontrivially: t minus its stabilizer part
    t_rows = liealg.coords_rows(t_sub)
    if t_rows.shape[0]:
        t0_coeffs = nullspace_real(np.stack([tangent_of(r) for r in t_rows], axis=1))
        t0_rows = t0_coeffs @ t_rows if t0_coeffs.size else np.zeros((0, d * d))
    else:
        t0_rows = np.zeros((0, d * d))
    active_t = t_rows.copy()
    for r in t0_rows:
        active_t = active_t - np.outer(active_t @ r, r)

    # symmetry-plus-commutant directions with vertical tangents ...
    span_rows = orthonormal_rows(np.vstack([
        t_rows, liealg.coords_rows(liealg.commutant(t_sub))
    ]))
    cols = [tangent_of(r) for r in span_rows]
    proj_cols = [tau - p_v @ tau for tau in cols]  # horizontal component
    coeffs = nullspace_real(np.stack(proj_cols, axis=1))
    inter_rows = coeffs @ span_rows if coeffs.size else np.zeros((0, d * d))

    # ... restricted to the part orthogonal to the full action kernel
    full_cols = np.stack([tangent_of(r) for r in np.eye(d * d)], axis=1)
    kernel_rows = nullspace_real(full_cols)
    if inter_rows.shape[0] and kernel_rows.shape[0]:
        gram = kernel_rows @ inter_rows.T
        keep = nullspace_real(gram)
        inter_rows = keep @ inter_rows if keep.size else np.zeros((0, d * d))

    perp_rows = orthonormal_rows(np.vstack([active_t, inter_rows]))
    u_perp = liealg.subspace_from_rows(perp_rows, d)
    u_par = liealg.subspace_from_rows(nullspace_real(perp_rows), d)
    return u_par, u_perp
