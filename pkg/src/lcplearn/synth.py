"""Compile abstract operators into the basic gate set.

A +-1 diagonal is a phase function phi(b) in {0, pi}; expanding phi over
parity characters (Walsh functions) turns each nonzero coefficient into
a CNOT parity chain feeding one RZ.  Masks sharing a target qubit are
visited in Gray-code order so consecutive chains differ by one CNOT.
All diagonal equivalences are modulo global phase: the empty-mask
coefficient is dropped.
"""

import math
from dataclasses import dataclass

import numpy as np

from .circuit import CX, H, RZ, SX, X, Z, Circuit, Gate
from .oracle import SecretString, oracle_diagonal
from .quantum import AlgorithmLayout, q_shift

COEFF_TOL = 1e-12


@dataclass(frozen=True)
class WalshSpectrum:
    """Parity-character coefficients of a phase exponent function.

    coefficients[w] multiplies (-1)^(w.b); w is a subset mask laid out
    like a basis index (qubit 1 = most significant bit).
    """

    width: int
    coefficients: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """phi(b) = sum_w c_w * (-1)^(w.b), via the same transform."""
        return _walsh_transform(self.coefficients.copy())


def _walsh_transform(values: np.ndarray) -> np.ndarray:
    """In-place fast transform with kernel (-1)^popcount(w & b)."""
    n = values.shape[0]
    h = 1
    while h < n:
        for start in range(0, n, h * 2):
            for j in range(start, start + h):
                a, b = values[j], values[j + h]
                values[j] = a + b
                values[j + h] = a - b
        h *= 2
    return values


def walsh_decompose(signs: np.ndarray) -> WalshSpectrum:
    """Spectrum of phi(b) = pi * f(b) where signs[b] = (-1)^f(b)."""
    signs = np.asarray(signs, dtype=np.float64)
    n = signs.shape[0]
    if n < 2 or n & (n - 1):
        raise ValueError(f"diagonal length {n} is not a power of two")
    if not np.all(np.abs(signs) == 1.0):
        raise ValueError("diagonal entries must be +1 or -1")
    width = n.bit_length() - 1
    phi = math.pi * (1.0 - signs) / 2.0
    coeffs = _walsh_transform(phi) / n
    return WalshSpectrum(width, coeffs)


def _gray_group(
    spectrum: WalshSpectrum, target: int, tol: float
) -> list[Gate]:
    """Chain all masks whose last member qubit is `target`, sharing CNOTs.

    Control combinations walk in Gray-code order; zero coefficients are
    jumped over, falling back to the full walk if jumping costs more.
    """
    m = spectrum.width
    p_target = m - target
    n_controls = target - 1
    group = []  # (gray position, control mask in v-space, angle)
    for j in range(1 << n_controls):
        v = j ^ (j >> 1)
        w = 1 << p_target
        for p in range(n_controls):
            if (v >> p) & 1:
                w |= 1 << (p_target + 1 + p)
        coeff = spectrum.coefficients[w]
        if abs(coeff) > tol:
            group.append((j, v, -2.0 * coeff))
    if not group:
        return []

    def emit(entries) -> list[Gate]:
        gates: list[Gate] = []
        cur = 0
        for _, v, angle in entries:
            diff = cur ^ v
            for p in range(n_controls):
                if (diff >> p) & 1:
                    gates.append(CX(target - 1 - p, target))
            cur = v
            if angle is not None:
                gates.append(RZ(angle, target))
        for p in range(n_controls):
            if (cur >> p) & 1:
                gates.append(CX(target - 1 - p, target))
        return gates

    jumped = emit(group)
    # defensive: no visited subset has been found to cost more than the
    # full walk, but the walk is the guaranteed 2^controls bound
    budget = 1 << n_controls
    if sum(g.kind == "cx" for g in jumped) <= budget:
        return jumped
    angles = {j: angle for j, _, angle in group}
    full = [(j, j ^ (j >> 1), angles.get(j)) for j in range(1 << n_controls)]
    return emit(full)


def _naive_group(spectrum: WalshSpectrum, target: int, tol: float) -> list[Gate]:
    """Per-mask compute/uncompute chains, no sharing."""
    m = spectrum.width
    p_target = m - target
    gates: list[Gate] = []
    for j in range(1 << (target - 1)):
        w = 1 << p_target
        for p in range(target - 1):
            if (j >> p) & 1:
                w |= 1 << (p_target + 1 + p)
        coeff = spectrum.coefficients[w]
        if abs(coeff) <= tol:
            continue
        controls = [target - 1 - p for p in range(target - 1) if (j >> p) & 1]
        for c in controls:
            gates.append(CX(c, target))
        gates.append(RZ(-2.0 * coeff, target))
        for c in reversed(controls):
            gates.append(CX(c, target))
    return gates


def synth_diagonal(signs: np.ndarray, gray: bool = True) -> Circuit:
    """A {CX, RZ} circuit equal to diag(signs) up to global phase.

    The mask for each parity term selects a target qubit (its last
    member); RZ(-2 c_w) on the accumulated parity contributes exactly
    exp(i c_w (-1)^(w.b)) per basis state.
    """
    spectrum = walsh_decompose(signs)
    if spectrum.width > 12:
        raise ValueError("diagonal synthesis limited to 12 qubits")
    gates: list[Gate] = []
    build = _gray_group if gray else _naive_group
    for target in range(1, spectrum.width + 1):
        gates.extend(build(spectrum, target, COEFF_TOL))
    return Circuit(spectrum.width, gates)


def synth_R() -> Circuit:
    """Gate realization of the round reflection on two qubits."""
    return Circuit(2, [H(1), CX(1, 2), Z(1), X(2), H(1)])


def decompose_H() -> Circuit:
    """H as RZ(pi/2), SX, RZ(pi/2), up to global phase."""
    return Circuit(1, [RZ(math.pi / 2, 1), SX(1), RZ(math.pi / 2, 1)])


def build_full_circuit(
    s: SecretString,
    t: int | None = None,
    decompose_h: bool = False,
    gray: bool = True,
) -> Circuit:
    """The complete pre-transpilation learner circuit for secret s.

    Per round: the H pair (native or decomposed), the q-register X mask,
    the synthesized oracle, and the reflection block.  For odd n the
    last secret bit still needs the one-query classical fix-up after
    measuring; the circuit covers the quantum part only.
    """
    if s.n < 2:
        raise ValueError("circuit construction needs n >= 2")
    layout = AlgorithmLayout.for_n(s.n)
    t = layout.t if t is None else t
    if t < layout.t:
        raise ValueError(f"q register needs at least {layout.t} qubits for n={s.n}")
    n = s.n
    width = n + t
    oracle_gates = synth_diagonal(oracle_diagonal(s, t), gray=gray).gates
    h_block = decompose_H() if decompose_h else None

    gates: list[Gate] = []
    for i in range(1, layout.rounds + 1):
        for q in (2 * i - 1, 2 * i):
            if h_block is None:
                gates.append(H(q))
            else:
                gates.extend(h_block.remap({1: q}, width).gates)
        shift = q_shift(i, t)
        gates.extend(shift.remap({j: n + j for j in range(1, t + 1)}, width).gates)
        gates.extend(oracle_gates)
        gates.extend(
            synth_R().remap({1: 2 * i - 1, 2: 2 * i}, width).gates
        )
    return Circuit(width, gates)
