"""Simplified noisy replay of the hardware runs.

Error model: after each CNOT, with the edge's error probability, a
uniformly random non-identity two-qubit Pauli hits its qubits; after
each single-qubit gate, likewise a random X/Y/Z; at measurement each
bit flips with its readout probability.  No decay or coherent errors
are modeled, so hardware success probabilities are qualitative anchors
only, not targets.

Every shot draws the same fixed-length randomness stream (one uniform
plus one choice per gate, one per measurement, one per readout bit), so
scaling an error rate under a common seed only grows the set of fired
errors; the monotonicity checks rely on this common-random-numbers
property.
"""

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuit import Circuit
from .oracle import SecretString
from .statevector import init_basis, simulate
from .synth import build_full_circuit
from .transpile import CouplingGraph, transpile

_PAULIS = (
    None,  # identity placeholder
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass
class NoiseProfile:
    cx_error: dict
    readout_error: tuple
    single_qubit_error: tuple
    cx_default: float = 0.0
    t1_us: tuple | None = None  # ingested but unused by the error model
    t2_us: tuple | None = None

    def __post_init__(self):
        self.cx_error = {tuple(sorted(k)): float(v) for k, v in self.cx_error.items()}
        self.readout_error = tuple(float(p) for p in self.readout_error)
        self.single_qubit_error = tuple(float(p) for p in self.single_qubit_error)
        for p in (
            *self.cx_error.values(),
            self.cx_default,
            *self.readout_error,
            *self.single_qubit_error,
        ):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability {p} outside [0, 1]")

    @property
    def num_qubits(self) -> int:
        return len(self.readout_error)

    def cx_for(self, a: int, b: int) -> float:
        return self.cx_error.get(tuple(sorted((a, b))), self.cx_default)

    def scaled(self, cx: float = 1.0, readout: float = 1.0, sq: float = 1.0) -> "NoiseProfile":
        """Scale each error family (clipped to 1); used by the rate grids."""
        clip = lambda p: min(1.0, p)
        return NoiseProfile(
            cx_error={k: clip(v * cx) for k, v in self.cx_error.items()},
            readout_error=tuple(clip(p * readout) for p in self.readout_error),
            single_qubit_error=tuple(clip(p * sq) for p in self.single_qubit_error),
            cx_default=clip(self.cx_default * cx),
            t1_us=self.t1_us,
            t2_us=self.t2_us,
        )

    @classmethod
    def zero(cls, num_qubits: int) -> "NoiseProfile":
        return cls({}, (0.0,) * num_qubits, (0.0,) * num_qubits)

    @classmethod
    def uniform(cls, num_qubits: int, cx: float, readout: float, sq: float) -> "NoiseProfile":
        return cls({}, (readout,) * num_qubits, (sq,) * num_qubits, cx_default=cx)

    @classmethod
    def quito(cls) -> "NoiseProfile":
        """Published calibration snapshot of the 5-qubit T-shape device."""
        return cls(
            cx_error={
                (0, 1): 7.401e-3,
                (1, 2): 6.435e-3,
                (1, 3): 1.044e-2,
                (3, 4): 1.890e-2,
            },
            readout_error=(3.81e-2, 4.11e-2, 7.17e-2, 3.41e-2, 3.62e-2),
            single_qubit_error=(3.23e-4, 2.90e-4, 2.74e-4, 3.44e-4, 4.57e-4),
            t1_us=(79.19, 117.96, 95.79, 107.55, 92.27),
            t2_us=(126.78, 132.4, 115.86, 22.83, 110.84),
        )

    @classmethod
    def quito_average(cls) -> "NoiseProfile":
        """Device-wide averages: CNOT 1.080e-2, readout 4.424e-2."""
        sq = sum(cls.quito().single_qubit_error) / 5
        return cls.uniform(5, cx=1.080e-2, readout=4.424e-2, sq=sq)

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseProfile":
        cx = {}
        for key, value in data.get("cx_error", {}).items():
            a, b = key.split("-")
            cx[(int(a), int(b))] = float(value)
        return cls(
            cx_error=cx,
            readout_error=tuple(data["readout_error"]),
            single_qubit_error=tuple(data.get("sq_error", [0.0] * len(data["readout_error"]))),
            cx_default=float(data.get("cx_default", 0.0)),
            t1_us=tuple(data["t1_us"]) if "t1_us" in data else None,
            t2_us=tuple(data["t2_us"]) if "t2_us" in data else None,
        )

    @classmethod
    def from_json(cls, path: str) -> "NoiseProfile":
        with open(path) as handle:
            return cls.from_dict(json.load(handle))

    def to_dict(self) -> dict:
        out = {
            "cx_error": {f"{a}-{b}": p for (a, b), p in sorted(self.cx_error.items())},
            "readout_error": list(self.readout_error),
            "sq_error": list(self.single_qubit_error),
        }
        if self.cx_default:
            out["cx_default"] = self.cx_default
        if self.t1_us is not None:
            out["t1_us"] = list(self.t1_us)
        if self.t2_us is not None:
            out["t2_us"] = list(self.t2_us)
        return out


def _seed_tuple(seed) -> tuple:
    if seed is None:
        seed = 0
    if isinstance(seed, (int, np.integer)):
        return (int(seed),)
    return tuple(int(s) for s in seed)


def run_noisy(circuit: Circuit, profile: NoiseProfile, shots: int, seed=0) -> dict[str, int]:
    """Shot histogram under stochastic Pauli injection and readout flips.

    Shot k draws from default_rng((*seed, k)), so results do not depend
    on how shots are batched or parallelized.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if circuit.width > profile.num_qubits:
        raise ValueError(
            f"profile covers {profile.num_qubits} qubits, circuit needs {circuit.width}"
        )
    width = circuit.width
    base = _seed_tuple(seed)

    site_prob = np.empty(len(circuit.gates))
    for k, g in enumerate(circuit.gates):
        if g.kind == "cx":
            site_prob[k] = profile.cx_for(g.qubits[0] - 1, g.qubits[1] - 1)
        else:
            site_prob[k] = profile.single_qubit_error[g.qubits[0] - 1]
    readout = np.array(profile.readout_error[:width])

    clean = simulate(circuit)
    clean_cum = np.cumsum(clean.probabilities())
    clean_cum[-1] = 1.0

    counts: dict[str, int] = {}
    n_sites = len(circuit.gates)
    for shot in range(shots):
        rng = np.random.default_rng(base + (shot,))
        fire_u = rng.random(n_sites)
        pick_u = rng.random(n_sites)
        meas_u = rng.random()
        read_u = rng.random(width)

        fired = fire_u < site_prob
        if fired.any():
            state = init_basis(width, 0)
            for k, g in enumerate(circuit.gates):
                state.apply_gate(g)
                if not fired[k]:
                    continue
                if g.kind == "cx":
                    choice = int(pick_u[k] * 15) + 1  # skip identity-identity
                    p1, p2 = divmod(choice, 4)
                    if p1:
                        state.apply_unitary1(g.qubits[0], _PAULIS[p1])
                    if p2:
                        state.apply_unitary1(g.qubits[1], _PAULIS[p2])
                else:
                    choice = int(pick_u[k] * 3) + 1
                    state.apply_unitary1(g.qubits[0], _PAULIS[choice])
            cum = np.cumsum(state.probabilities())
            cum[-1] = 1.0
        else:
            cum = clean_cum

        outcome = int(np.searchsorted(cum, meas_u, side="right"))
        for q in range(width):
            if read_u[q] < readout[q]:
                outcome ^= 1 << (width - 1 - q)
        key = format(outcome, f"0{width}b")
        counts[key] = counts.get(key, 0) + 1
    return counts


@dataclass
class AspReport:
    secret: str
    trials: int
    shots: int
    per_trial: tuple
    mean: float
    stddev: float

    def to_dict(self) -> dict:
        return {
            "secret": self.secret,
            "trials": self.trials,
            "shots": self.shots,
            "per_trial": list(self.per_trial),
            "mean": self.mean,
            "stddev": self.stddev,
        }


@lru_cache(maxsize=64)
def _transpiled(secret: str, graph: CouplingGraph):
    circuit = build_full_circuit(SecretString.from_string(secret))
    return transpile(circuit, graph)


def estimate_asp(
    s: SecretString,
    profile: NoiseProfile | None = None,
    trials: int = 5,
    shots: int = 8192,
    seed: int = 0,
    graph: CouplingGraph | None = None,
) -> AspReport:
    """Monte-Carlo algorithm success probability on the transpiled circuit.

    Success means the measured x bits identify the secret: an exact match
    for even n; for odd n a match on the first n-1 bits, since the final
    classical query corrects the last bit either way.
    """
    if trials < 1 or shots < 1:
        raise ValueError("trials and shots must be >= 1")
    graph = CouplingGraph.quito() if graph is None else graph
    profile = NoiseProfile.zero(graph.num_qubits) if profile is None else profile
    circuit, report = _transpiled(str(s), graph)
    mapping = report.mapping

    prefix = s.n if s.n % 2 == 0 else s.n - 1
    required = [(mapping[j], s.bits[j]) for j in range(prefix)]

    rates = []
    for trial in range(trials):
        hist = run_noisy(circuit, profile, shots, seed=(seed, trial))
        good = sum(
            c for key, c in hist.items() if all(key[pos] == str(bit) for pos, bit in required)
        )
        rates.append(good / shots)
    mean = sum(rates) / trials
    var = sum((r - mean) ** 2 for r in rates) / trials
    return AspReport(
        secret=str(s),
        trials=trials,
        shots=shots,
        per_trial=tuple(rates),
        mean=mean,
        stddev=math.sqrt(var),
    )
