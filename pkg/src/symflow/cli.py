"""Command-line frontend.

Subcommands:
  decompose  four-way split of u(d) for the problem's symmetry algebra
  grad       partial / equivariant / covariant cost derivatives at a point
  optimize   gd / qng / cqng run with a CSV trajectory and a summary line

Problems are JSON files (see README); the literal spec path ``entangling``
loads the built-in two-qubit maximal-entangling demo.  Exit codes:
0 success, 2 malformed problem, 3 algebra contract error, 4 optimizer did
not converge.  The ``SYMFLOW_TOL`` environment variable overrides the
global rank tolerance.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import circuit, liealg, natgrad, pauli, symgrad
from .nummat import ContractViolation, trace_inner
from .tangent import SymmetrySpec


class SpecError(ValueError):
    """Malformed problem specification."""


@dataclass
class OptimizerConfig:
    method: str = "gd"
    lr: float = 0.5
    max_iter: int = 2000
    tol: float = 1e-9
    seed: int | None = 0


@dataclass
class Problem:
    circuit: circuit.CircuitSpec
    initial_state_spec: object
    symmetry: SymmetrySpec | None = None
    cost: natgrad.CostSpec | None = None
    optimizer: OptimizerConfig | None = None

    def initial_state(self, seed_override: int | None = None) -> np.ndarray:
        return resolve_initial_state(
            self.initial_state_spec, self.circuit.n_qubits, seed_override
        )


def resolve_initial_state(spec, n_qubits: int, seed_override: int | None = None) -> np.ndarray:
    if isinstance(spec, str):
        if spec.startswith("random_product:"):
            seed = int(spec.split(":", 1)[1]) if seed_override is None else seed_override
            return circuit.random_product_state(n_qubits, seed)
        if len(spec) != n_qubits:
            raise SpecError(f"basis label {spec!r} has wrong length for {n_qubits} qubits")
        return circuit.basis_state(spec)
    amps = []
    for entry in spec:
        if isinstance(entry, (list, tuple)):
            if len(entry) != 2:
                raise SpecError(f"amplitude entry {entry!r} is not a [re, im] pair")
            amps.append(entry[0] + 1j * entry[1])
        else:
            amps.append(complex(entry))
    psi = np.asarray(amps, dtype=complex)
    if psi.shape != (2**n_qubits,):
        raise SpecError(f"state has {psi.size} amplitudes, expected {2 ** n_qubits}")
    norm = np.linalg.norm(psi)
    if norm < 1e-12:
        raise SpecError("state vector is zero")
    return psi / norm


def symmetry_from_strings(strings, action: str, n_qubits: int) -> SymmetrySpec:
    mats = []
    for text in strings:
        p = pauli.parse_pauli_sum(text, n_qubits)
        if not p.is_skew_hermitian():
            raise SpecError(f"symmetry generator {text!r} is not skew-Hermitian")
        mats.append(pauli.to_matrix(p))
    basis = []
    for m in mats:
        r = m.copy()
        for b in basis:
            r -= trace_inner(b, r) * b
        norm = np.sqrt(abs(trace_inner(r, r)))
        if norm > 1e-10:
            basis.append(r / norm)
    sub = liealg.subspace(2**n_qubits, basis)
    return SymmetrySpec(sub, action)


def _parse_gate(entry: dict) -> circuit.Gate:
    try:
        wires = tuple(int(w) for w in entry["wires"])
        gen = pauli.parse_pauli_sum(entry["h"], len(wires))
        return circuit.Gate(
            generator=gen,
            wires=wires,
            param=entry.get("param"),
            angle=entry.get("angle"),
            scale=float(entry.get("scale", -1.0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"bad gate entry {entry!r}: {exc}") from exc


def load_problem(path: str) -> Problem:
    if path == "entangling":
        return entangling_problem()
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot load problem file {path!r}: {exc}") from exc
    return problem_from_dict(data)


def problem_from_dict(data: dict) -> Problem:
    try:
        cdata = data["circuit"]
        gates = tuple(_parse_gate(g) for g in cdata.get("gates", []))
        c = circuit.CircuitSpec(int(cdata["n_qubits"]), gates, int(cdata["n_params"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"bad circuit block: {exc}") from exc
    n = c.n_qubits

    sym = None
    if "symmetry" in data:
        block = data["symmetry"]
        try:
            strings = block["generators"]
            action = block.get("action", "left")
        except (KeyError, TypeError) as exc:
            raise SpecError(f"bad symmetry block: {exc}") from exc
        sym = symmetry_from_strings(strings, action, n)

    cost = None
    if "observable" in data:
        entry = data["observable"]
        if isinstance(entry, str):
            m = pauli.parse_pauli_sum(entry, n)
            if not m.is_hermitian():
                raise SpecError(f"observable {entry!r} is not Hermitian")
            cost = natgrad.ExpectationCost(m)
        elif isinstance(entry, dict) and entry.get("kind") == "squared_sum":
            terms = []
            for text in entry.get("terms", []):
                m = pauli.parse_pauli_sum(text, n)
                if not m.is_hermitian():
                    raise SpecError(f"observable {text!r} is not Hermitian")
                terms.append(m)
            if not terms:
                raise SpecError("squared_sum observable needs at least one term")
            cost = natgrad.SquaredSumCost(tuple(terms))
        else:
            raise SpecError(f"bad observable entry {entry!r}")

    opt = None
    if "optimizer" in data:
        block = data["optimizer"]
        opt = OptimizerConfig(
            method=block.get("method", "gd"),
            lr=float(block.get("lr", 0.5)),
            max_iter=int(block.get("max_iter", 2000)),
            tol=float(block.get("tol", 1e-9)),
            seed=block.get("seed"),
        )
        if opt.method not in ("gd", "qng", "cqng"):
            raise SpecError(f"unknown optimizer method {opt.method!r}")
        if opt.method == "cqng" and sym is None:
            raise SpecError("cqng requires a symmetry block")

    if "initial_state" not in data:
        raise SpecError("problem needs an initial_state")
    resolve_initial_state(data["initial_state"], n)  # validate eagerly
    return Problem(c, data["initial_state"], sym, cost, opt)


def entangling_problem(seed: int = 0) -> Problem:
    """Built-in two-qubit demo: drive the first qubit's Bloch vector to
    zero, which forces the controlled-X angle to pi and maximal
    entanglement."""
    crx_gen = pauli.parse_pauli_sum("0.25*XI - 0.25*XZ", 2)  # X (x) |1><1| / 2
    gates = (
        circuit.rotation("Y", (0,), param=0),
        circuit.rotation("Y", (1,), param=1),
        circuit.Gate(crx_gen, (0, 1), param=2),
    )
    c = circuit.CircuitSpec(2, gates, 3)
    sym = symmetry_from_strings(["i*XI", "i*YI", "i*ZI"], "left", 2)
    cost = natgrad.SquaredSumCost(tuple(
        pauli.parse_pauli_sum(w, 2) for w in ("XI", "YI", "ZI")
    ))
    return Problem(c, f"random_product:{seed}", sym, cost,
                   OptimizerConfig(method="gd", lr=0.5, max_iter=2000, tol=1e-9, seed=seed))


def pre_entangler_circuit(c: circuit.CircuitSpec) -> circuit.CircuitSpec:
    """Circuit truncated just before its last multi-wire gate."""
    cut = len(c.gates)
    for k in range(len(c.gates) - 1, -1, -1):
        if len(c.gates[k].wires) > 1:
            cut = k
            break
    return circuit.CircuitSpec(c.n_qubits, c.gates[:cut], c.n_params)


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_decompose(args) -> int:
    problem = load_problem(args.spec)
    if problem.symmetry is None:
        raise SpecError("decompose needs a symmetry block")
    fd = liealg.four_decomposition(problem.symmetry.generators)
    lines = [
        f"ambient: u({problem.circuit.dim})",
        "dims: r={} commutant_centerless={} center={} symmetry_centerless={}".format(
            *fd.dims
        ),
    ]
    lines += liealg.subspace_report(fd.r, "r (purely covariant remainder)")
    lines += liealg.subspace_report(fd.ut_centerless, "commutant_centerless (equivariant and covariant)")
    lines += liealg.subspace_report(fd.center_t, "center (purely equivariant)")
    lines += liealg.subspace_report(fd.t_centerless, "symmetry_centerless (purely vertical)")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_grad(args) -> int:
    problem = load_problem(args.spec)
    c = problem.circuit
    theta = np.array([float(x) for x in args.theta.split(",")]) if args.theta else \
        np.zeros(c.n_params)
    theta = circuit.check_theta(c, theta)
    psi0 = problem.initial_state(args.seed)
    if problem.cost is None:
        raise SpecError("grad needs an observable block")

    payload: dict = {"kind": args.kind, "theta": theta.tolist()}
    if args.kind == "partial":
        payload["partial"] = natgrad.cost_gradient(problem.cost, c, theta, psi0).tolist()
    else:
        if problem.symmetry is None:
            raise SpecError(f"kind={args.kind} needs a symmetry block")
        report = natgrad.projected_cost_report(
            args.kind, problem.symmetry, c, theta, psi0, problem.cost
        )
        payload.update(json.loads(report.to_json()))
    _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_optimize(args) -> int:
    problem = load_problem(args.spec)
    if problem.cost is None or problem.optimizer is None:
        raise SpecError("optimize needs observable and optimizer blocks")
    cfg = problem.optimizer
    seed = args.seed if args.seed is not None else cfg.seed
    lr = args.lr if args.lr is not None else cfg.lr
    max_iter = args.max_iter if args.max_iter is not None else cfg.max_iter
    c = problem.circuit
    psi0 = problem.initial_state(seed)

    monitors = {}
    if c.n_qubits >= 2:
        pre = pre_entangler_circuit(c)
        x1 = pauli.parse_pauli_sum("X" + "I" * (c.n_qubits - 1), c.n_qubits)
        z2 = pauli.parse_pauli_sum("IZ" + "I" * (c.n_qubits - 2), c.n_qubits)
        monitors["X1_pre"] = lambda th: circuit.cost(pre, th, psi0, x1)
        monitors["Z2_pre"] = lambda th: circuit.cost(pre, th, psi0, z2)

    trace = natgrad.optimize(
        cfg.method, c, None, psi0, problem.cost, lr=lr, max_iter=max_iter,
        tol=cfg.tol, sym=problem.symmetry, seed=seed, monitors=monitors,
    )
    _write(trace.to_csv(), args.out or "trace.csv")

    final = trace.final
    summary = (
        f"final_cost={final.cost!r} grad_norm={final.grad_norm!r} "
        f"theta={[float(t) for t in final.theta]!r} iterations={final.iteration} "
        f"converged={trace.converged}"
    )
    for name, value in final.extras.items():
        summary += f" {name}={value!r}"
    if problem.symmetry is not None:
        a = symgrad.vector_potential(problem.symmetry, c, final.theta, psi0)
        summary += f" vector_potential={np.round(a, 10).tolist()!r}"
    print(summary)
    return 0 if trace.converged else 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symflow",
        description="Symmetry-aware derivatives of parametrized quantum circuits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dec = sub.add_parser("decompose", help="four-way split of u(d) for the symmetry")
    p_dec.add_argument("spec")
    p_dec.add_argument("--out", default=None)
    p_dec.set_defaults(func=cmd_decompose)

    p_grad = sub.add_parser("grad", help="cost derivatives at a parameter point")
    p_grad.add_argument("spec")
    p_grad.add_argument("--theta", default=None, help="comma-separated angles")
    p_grad.add_argument("--kind", choices=("partial", "equivariant", "covariant"),
                        default="partial")
    p_grad.add_argument("--seed", type=int, default=None)
    p_grad.add_argument("--out", default=None)
    p_grad.set_defaults(func=cmd_grad)

    p_opt = sub.add_parser("optimize", help="run the configured optimizer")
    p_opt.add_argument("spec")
    p_opt.add_argument("--out", default=None, help="trace CSV path (default trace.csv)")
    p_opt.add_argument("--seed", type=int, default=None)
    p_opt.add_argument("--lr", type=float, default=None)
    p_opt.add_argument("--max-iter", type=int, default=None)
    p_opt.set_defaults(func=cmd_optimize)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ContractViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (SpecError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
