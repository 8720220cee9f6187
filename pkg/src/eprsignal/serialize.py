"""JSON schema for states, observables, scenarios and reports.

One format for configs and reports keeps the determinism contract auditable:
complex numbers are [re, im] pairs, matrices are row-major nested lists, and
reports are dumped with sorted keys so equal values give equal bytes.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np

from .hilbert import BlochPoint
from .nosignal import Certificate, ChordWitness, SubspaceMeasureRecord, TraceFitRecord
from .observables import CountingObservable, power, quadratic
from .signaling import ChannelReport, Scenario, SignalReport
from .states import Ensemble, EntangledState, PureState, build_entangled


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(data) -> complex:
    if not (isinstance(data, (list, tuple)) and len(data) == 2):
        raise ValueError(f"a complex number must be a [re, im] pair, got {data!r}")
    return complex(float(data[0]), float(data[1]))


def vector_to_json(v) -> list:
    return [complex_to_json(z) for z in np.asarray(v, dtype=complex)]


def vector_from_json(data) -> np.ndarray:
    return np.array([complex_from_json(z) for z in data], dtype=complex)


def matrix_to_json(m) -> list:
    return [vector_to_json(row) for row in np.asarray(m, dtype=complex)]


def matrix_from_json(data) -> np.ndarray:
    return np.array([[complex_from_json(z) for z in row] for row in data])


def state_to_json(s: PureState) -> list:
    return vector_to_json(s.vec)


def state_from_json(data) -> PureState:
    return PureState(vector_from_json(data))


def ensemble_to_json(e: Ensemble) -> dict:
    return {
        "members": [
            {"weight": float(w), "state": state_to_json(s)}
            for w, s in zip(e.weights, e.states)
        ]
    }


def ensemble_from_json(data) -> Ensemble:
    members = data["members"]
    return Ensemble(
        np.array([m["weight"] for m in members], dtype=float),
        tuple(state_from_json(m["state"]) for m in members),
    )


def entangled_to_json(s: EntangledState) -> dict:
    return {
        "alphas": vector_to_json(s.alphas),
        "alice_basis": [state_to_json(a) for a in s.alice_basis],
        "bob_states": [state_to_json(b) for b in s.bob_states],
    }


def entangled_from_json(data) -> EntangledState:
    return build_entangled(
        vector_from_json(data["alphas"]),
        [vector_from_json(v) for v in data["alice_basis"]],
        [vector_from_json(v) for v in data["bob_states"]],
    )


def observable_to_json(f) -> dict:
    counting = isinstance(f, CountingObservable)
    inner = f.observable if counting else f
    if inner.kind == "quadratic":
        desc = {"kind": "quadratic", "F": matrix_to_json(inner.matrix)}
    elif inner.kind == "power":
        desc = {
            "kind": "power",
            "P": matrix_to_json(inner.matrix),
            "k": int(inner.exponent),
        }
    else:
        raise ValueError("only quadratic and power observables serialize")
    if counting:
        desc["counting"] = True
    return desc


def observable_from_json(data):
    kind = data.get("kind")
    if kind == "quadratic":
        obs = quadratic(matrix_from_json(data["F"]))
    elif kind == "power":
        obs = power(matrix_from_json(data["P"]), int(data["k"]))
    else:
        raise ValueError(f"unknown observable kind {kind!r}")
    if data.get("counting"):
        return CountingObservable(obs)
    return obs


def scenario_to_json(sc: Scenario) -> dict:
    return {
        "state": entangled_to_json(sc.state),
        "basis_a": [state_to_json(s) for s in sc.basis_a],
        "basis_a_prime": [state_to_json(s) for s in sc.basis_a_prime],
        "observable": observable_to_json(sc.observable),
    }


def scenario_from_json(data) -> Scenario:
    return Scenario(
        state=entangled_from_json(data["state"]),
        basis_a=tuple(state_from_json(v) for v in data["basis_a"]),
        basis_a_prime=tuple(state_from_json(v) for v in data["basis_a_prime"]),
        observable=observable_from_json(data["observable"]),
    )


def _bloch_to_json(p: BlochPoint) -> list[float]:
    return [p.x, p.y, p.z]


def witness_to_json(w) -> dict:
    if isinstance(w, ChordWitness):
        return {
            "type": "chord",
            "x1": _bloch_to_json(w.x1),
            "x2": _bloch_to_json(w.x2),
            "x1p": _bloch_to_json(w.x1p),
            "x2p": _bloch_to_json(w.x2p),
            "p1": w.p1, "p2": w.p2, "p1p": w.p1p, "p2p": w.p2p,
            "x": _bloch_to_json(w.x),
            "lhs": w.lhs, "rhs": w.rhs, "violation": w.violation,
            "values": list(w.values) if w.values is not None else None,
            "affine": w.affine,
        }
    if isinstance(w, SubspaceMeasureRecord):
        return {
            "type": "subspace-measure",
            "basis": [vector_to_json(row) for row in w.basis],
            "mu": w.mu,
            "basis_spread": w.basis_spread,
        }
    if isinstance(w, TraceFitRecord):
        return {
            "type": "trace-fit",
            "subspace_dim": w.subspace_dim,
            "mu": w.mu,
            "trace_value": w.trace_value,
            "residual": w.residual,
        }
    raise ValueError(f"cannot serialize witness of type {type(w).__name__}")


def certificate_to_json(c: Certificate) -> dict:
    out = {
        "verdict": c.verdict,
        "worst_violation": c.worst_violation,
        "tolerance": c.tolerance,
        "seed": c.seed,
        "witnesses": [witness_to_json(w) for w in c.witnesses],
    }
    if c.operator is not None:
        out["operator"] = matrix_to_json(c.operator)
    return out


def signal_report_to_json(r: SignalReport) -> dict:
    out = dataclasses.asdict(r)
    if r.convergence is not None:
        out["convergence"] = [
            {"n": n, "mc_gap": g, "pooled_stderr": s} for n, g, s in r.convergence
        ]
    else:
        out.pop("convergence")
    return out


def channel_report_to_json(r: ChannelReport) -> dict:
    return dataclasses.asdict(r)


def dumps_canonical(obj) -> str:
    """Deterministic JSON text: sorted keys, no whitespace drift, newline end."""
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=1) + "\n"
