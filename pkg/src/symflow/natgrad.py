"""Metrics and optimizers: the projective state-space metric, its
symmetry-projected generalization, and gradient-descent / natural-gradient
/ covariant-natural-gradient loops with trajectory recording.

The natural-gradient step keeps the explicit 1/2 prefactor
theta' = theta - lr * (1/2) * F^+ grad, rather than folding it into the
learning rate, so the projected and plain variants agree exactly when the
symmetry is the group of global phases.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import circuit, pauli, symgrad, tangent
from .nummat import pinv_psd
from .tangent import SymmetrySpec, real_overlap


@dataclass(frozen=True, eq=False)
class MetricMatrix:
    entries: np.ndarray
    kind: str  # "fubini_study" or "covariant"


@dataclass(frozen=True)
class ExpectationCost:
    """C(theta) = <psi(theta)| M |psi(theta)>."""

    observable: pauli.PauliSum


@dataclass(frozen=True)
class SquaredSumCost:
    """C(theta) = sum_M <psi(theta)| M |psi(theta)>^2."""

    observables: tuple[pauli.PauliSum, ...]


CostSpec = ExpectationCost | SquaredSumCost


@dataclass
class TraceRecord:
    iteration: int
    theta: np.ndarray
    cost: float
    grad_norm: float
    extras: dict[str, float] = field(default_factory=dict)


@dataclass
class OptTrace:
    records: list[TraceRecord] = field(default_factory=list)
    converged: bool = False

    @property
    def final(self) -> TraceRecord:
        return self.records[-1]

    def to_csv(self) -> str:
        if not self.records:
            return ""
        p = self.records[0].theta.size
        header = ["iter"] + [f"theta_{j}" for j in range(p)] + ["cost", "grad_norm"]
        header += list(self.records[0].extras)
        lines = [",".join(header)]
        for rec in self.records:
            row = [str(rec.iteration)]
            row += [repr(float(v)) for v in rec.theta]
            row += [repr(float(rec.cost)), repr(float(rec.grad_norm))]
            row += [repr(float(v)) for v in rec.extras.values()]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


def fubini_study(c: circuit.CircuitSpec, theta, psi0) -> MetricMatrix:
    """F_jk = Re<d_j psi|d_k psi> - <d_j psi|psi><psi|d_k psi>."""
    psi = circuit.apply(c, theta, psi0)
    partials = [circuit.state_partial(c, theta, j, psi0) for j in range(c.n_params)]
    p = c.n_params
    f = np.zeros((p, p))
    overlaps = [complex(np.vdot(psi, d)) for d in partials]
    for j in range(p):
        for k in range(j, p):
            val = float(np.real(np.vdot(partials[j], partials[k])))
            val -= float(np.real(np.conj(overlaps[j]) * overlaps[k]))
            f[j, k] = f[k, j] = val
    return MetricMatrix(f, "fubini_study")


def covariant_metric(sym: SymmetrySpec, c: circuit.CircuitSpec, theta, psi0) -> MetricMatrix:
    """Gram matrix of the covariant state derivatives:
    F^S_jk = Re<d_j psi|d_k psi> - sum_a Re<d_j psi|T_a> Re<T_a|d_k psi>."""
    partials = [circuit.state_partial(c, theta, j, psi0) for j in range(c.n_params)]
    frame = tangent.vertical_frame(sym, c, theta, psi0)
    p = c.n_params
    f = np.zeros((p, p))
    proj = np.zeros((len(frame.onb), p))
    for a, t in enumerate(frame.onb):
        for j in range(p):
            proj[a, j] = real_overlap(t, partials[j])
    for j in range(p):
        for k in range(j, p):
            val = float(np.real(np.vdot(partials[j], partials[k])))
            val -= float(proj[:, j] @ proj[:, k])
            f[j, k] = f[k, j] = val
    return MetricMatrix(f, "covariant")


def cost_value(spec: CostSpec, c: circuit.CircuitSpec, theta, psi0) -> float:
    if isinstance(spec, ExpectationCost):
        return circuit.cost(c, theta, psi0, spec.observable)
    psi = circuit.apply(c, theta, psi0)
    return float(sum(circuit.expectation(psi, m) ** 2 for m in spec.observables))


def cost_gradient(spec: CostSpec, c: circuit.CircuitSpec, theta, psi0) -> np.ndarray:
    if isinstance(spec, ExpectationCost):
        return circuit.cost_gradient(c, theta, psi0, spec.observable)
    psi = circuit.apply(c, theta, psi0)
    grad = np.zeros(c.n_params)
    for m in spec.observables:
        grad += 2.0 * circuit.expectation(psi, m) * circuit.cost_gradient(c, theta, psi0, m)
    return grad


def cost_covariant_gradient(spec: CostSpec, sym: SymmetrySpec, c: circuit.CircuitSpec,
                            theta, psi0) -> np.ndarray:
    """Vector of covariant derivatives D_j C; chain rule for squared sums."""
    return projected_cost_report("covariant", sym, c, theta, psi0, spec).projected


def projected_cost_report(kind: str, sym: SymmetrySpec, c: circuit.CircuitSpec,
                          theta, psi0, cost_spec: CostSpec) -> symgrad.SymGradReport:
    """Covariant or equivariant cost report for either cost form; squared
    sums combine the per-observable reports with the chain rule (the
    Gram matrix, overlaps and vector potential are observable-free)."""
    if kind not in ("covariant", "equivariant"):
        raise ValueError(f"kind must be 'covariant' or 'equivariant', got {kind!r}")
    fn = symgrad.covariant_derivative_cost if kind == "covariant" else \
        symgrad.equivariant_derivative_cost
    if isinstance(cost_spec, ExpectationCost):
        return fn(sym, c, theta, psi0, cost_spec.observable)
    psi = circuit.apply(c, theta, psi0)
    weights = [2.0 * circuit.expectation(psi, m) for m in cost_spec.observables]
    reports = [fn(sym, c, theta, psi0, m) for m in cost_spec.observables]
    first = reports[0]
    return symgrad.SymGradReport(
        m=sum(w * r.m for w, r in zip(weights, reports)),
        omega=first.omega,
        gram=first.gram,
        vector_potential=first.vector_potential,
        partial=sum(w * r.partial for w, r in zip(weights, reports)),
        projected=sum(w * r.projected for w, r in zip(weights, reports)),
    )


def qng_step(c: circuit.CircuitSpec, theta, psi0, m: pauli.PauliSum, lr: float) -> np.ndarray:
    theta = circuit.check_theta(c, theta)
    f = fubini_study(c, theta, psi0).entries
    grad = circuit.cost_gradient(c, theta, psi0, m)
    return theta - lr * 0.5 * (pinv_psd(f) @ grad)


def cqng_step(sym: SymmetrySpec, c: circuit.CircuitSpec, theta, psi0,
              m: pauli.PauliSum, lr: float) -> np.ndarray:
    """One covariant natural-gradient step
    theta' = theta - lr * (1/2) * (F^S)^+ * gradS."""
    if lr <= 0:
        raise ValueError("learning rate must be positive")
    theta = circuit.check_theta(c, theta)
    f = covariant_metric(sym, c, theta, psi0).entries
    grad = symgrad.covariant_derivative_cost(sym, c, theta, psi0, m).projected
    return theta - lr * 0.5 * (pinv_psd(f) @ grad)


def sample_theta0(n_params: int, seed: int | None) -> np.ndarray:
    """Uniform initial angles in [0, 2 pi) from a seeded generator."""
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, 2.0 * np.pi, size=n_params)


def optimize(method: str, c: circuit.CircuitSpec, theta0, psi0, cost_spec: CostSpec,
             lr: float = 0.1, max_iter: int = 2000, tol: float = 1e-9,
             sym: SymmetrySpec | None = None, seed: int | None = None,
             monitors: dict[str, Callable[[np.ndarray], float]] | None = None) -> OptTrace:
    """Run gd / qng / cqng until the driving gradient norm drops below tol.

    Records one row per visited point (including the final one reached by
    the last step).  The driving gradient is the plain gradient for gd and
    qng and the covariant gradient for cqng.
    """
    if method not in ("gd", "qng", "cqng"):
        raise ValueError(f"unknown method {method!r}")
    if method == "cqng" and sym is None:
        raise ValueError("cqng requires a symmetry")
    if lr <= 0:
        raise ValueError("learning rate must be positive")
    theta = sample_theta0(c.n_params, seed) if theta0 is None else \
        circuit.check_theta(c, theta0).copy()
    monitors = monitors or {}
    trace = OptTrace()
    for it in range(max_iter + 1):
        value = cost_value(cost_spec, c, theta, psi0)
        if method == "cqng":
            grad = cost_covariant_gradient(cost_spec, sym, c, theta, psi0)
        else:
            grad = cost_gradient(cost_spec, c, theta, psi0)
        gnorm = float(np.linalg.norm(grad))
        extras = {name: fn(theta) for name, fn in monitors.items()}
        trace.records.append(TraceRecord(it, theta.copy(), value, gnorm, extras))
        if gnorm < tol:
            trace.converged = True
            break
        if it == max_iter:
            break
        if method == "gd":
            theta = theta - lr * grad
        elif method == "qng":
            f = fubini_study(c, theta, psi0).entries
            theta = theta - lr * 0.5 * (pinv_psd(f) @ grad)
        else:
            f = covariant_metric(sym, c, theta, psi0).entries
            theta = theta - lr * 0.5 * (pinv_psd(f) @ grad)
    return trace
