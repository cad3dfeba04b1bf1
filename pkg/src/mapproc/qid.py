"""The quantum information distributor (QID) processor.

One data qubit, two program qubits.  On a program state with amplitudes
alpha over the Bell-like family Xi_k = (sigma_k (x) I)|anchor>, the four
branches act as sigma_k A sigma_k with A = (1/2) sum_j alpha_j sigma_j.
Program encodings are provided for informationally complete POVMs, unitary
rotations, and the three Pauli von Neumann measurements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .qcore import ATOL, bell_anchor, bloch_expand, dag, operator_rank, pauli, tensor
from .processor import OutcomePartition, Processor, ProgramState

DATA_DIM = 2
PROGRAM_DIM = 4


def program_basis_state(k: int) -> np.ndarray:
    """k-th Bell-like program vector (sigma_k on the first qubit of the anchor)."""
    return tensor(pauli(k), np.eye(2)) @ bell_anchor()


_XI = tuple(program_basis_state(k) for k in range(4))


def qid_unitary() -> Processor:
    """Build the QID processor with the computational program basis.

    The gate is assembled directly from its branch decomposition
    (1/2) sum_{k,j} (sigma_k sigma_j sigma_k) (x) |k><Xi_j|, which is
    unitary because sum_k sigma_k X sigma_k = 2 Tr(X) I.
    """
    g = np.zeros((8, 8), dtype=complex)
    eye4 = np.eye(4, dtype=complex)
    for k in range(4):
        for j in range(4):
            branch = pauli(k) @ pauli(j) @ pauli(k)
            g += 0.5 * np.kron(branch, np.outer(eye4[k], _XI[j].conj()))
    return Processor(data_dim=DATA_DIM, program_dim=PROGRAM_DIM, gate=g)


@dataclass(frozen=True)
class QidProgram:
    """Program amplitudes over the Bell-like family, normalized to 1."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (4,):
            raise ValueError(f"QID program needs 4 amplitudes, got shape {amps.shape}")
        if abs(np.linalg.norm(amps) - 1.0) > ATOL:
            raise ValueError("QID program amplitudes must be normalized")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def state_vector(self) -> np.ndarray:
        """The two-qubit program vector sum_k alpha_k Xi_k."""
        return sum(a * xi for a, xi in zip(self.amplitudes, _XI))

    def program_state(self) -> ProgramState:
        return ProgramState.pure(self.state_vector())


@dataclass(frozen=True)
class QidPovmReport:
    """The four-outcome POVM a QID program realizes.

    ``program_operator`` is A = (1/2) sum alpha_j sigma_j; the elements are
    sigma_k (A^dagger A) sigma_k.  ``anchor_bloch`` is the Bloch vector of
    4*elements[0] - I; the POVM spans the qubit operator space exactly when
    none of its components vanishes.
    """

    program_operator: np.ndarray
    elements: tuple[np.ndarray, ...]
    anchor_bloch: np.ndarray
    informationally_complete: bool

    def bloch_points(self) -> list[tuple[str, float, float, float]]:
        """Bloch-sphere coordinates of the states 2 F_k (unit vectors when rank 1)."""
        out = []
        for k, f in enumerate(self.elements):
            # a state (I + r.sigma)/2 has Pauli coefficients r/2
            v = 2 * bloch_expand(2 * np.asarray(f)).vector
            out.append((f"F{k}", float(v[0]), float(v[1]), float(v[2])))
        return out


def qid_povm(program: QidProgram) -> QidPovmReport:
    """POVM induced by a QID program under the finest outcome partition."""
    alpha = program.amplitudes
    a_op = 0.5 * sum(alpha[j] * pauli(j) for j in range(4))
    base = dag(a_op) @ a_op
    elements = tuple(pauli(k) @ base @ pauli(k) for k in range(4))
    vec = alpha[1:]
    anchor = alpha[0] * vec.conj() + alpha[0].conjugate() * vec + 1j * np.cross(vec.conj(), vec)
    anchor = anchor.real
    ic = bool(np.all(np.abs(anchor) > ATOL)) and operator_rank(list(elements)) == 4
    return QidPovmReport(
        program_operator=a_op,
        elements=elements,
        anchor_bloch=anchor,
        informationally_complete=ic,
    )


def sic_program() -> QidProgram:
    """Program whose POVM is the symmetric informationally complete tetrahedron."""
    return QidProgram(
        amplitudes=np.array(
            [1 / np.sqrt(2), 1 / np.sqrt(6), 1 / np.sqrt(6), 1 / np.sqrt(6)], dtype=complex
        )
    )


def unitary_program(mu: np.ndarray) -> QidProgram:
    """Program applying exp(i mu . sigma) on every branch, each with probability 1/4.

    Amplitudes are alpha_0 = cos|mu| and alpha_vec = i sin|mu| mu/|mu|
    (zero vector part when mu = 0, the identity channel).
    """
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (3,):
        raise ValueError(f"rotation vector needs 3 components, got shape {mu.shape}")
    norm = float(np.linalg.norm(mu))
    amps = np.zeros(4, dtype=complex)
    amps[0] = np.cos(norm)
    if norm > 0.0:
        amps[1:] = 1j * np.sin(norm) * mu / norm
    return QidProgram(amplitudes=amps)


def pauli_measurement_program(axis: int) -> tuple[QidProgram, OutcomePartition]:
    """Program plus outcome pairing realizing the sigma_axis measurement.

    The paired coarse POVM is the two eigenprojectors of sigma_axis and the
    post-measurement states follow the projection postulate.  Outcome 0 is
    paired with outcome ``axis``; the remaining two outcomes form the other
    block.
    """
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
    amps = np.zeros(4, dtype=complex)
    amps[0] = amps[axis] = 1 / np.sqrt(2)
    others = tuple(sorted(set(range(4)) - {0, axis}))
    partition = OutcomePartition(blocks=((0, axis), others))
    return QidProgram(amplitudes=amps), partition


# --- circuit realization ------------------------------------------------

_QUBITS = 3  # 0 = data, 1 and 2 = program register


def _cnot(control: int, target: int) -> np.ndarray:
    m = np.zeros((8, 8), dtype=complex)
    for b in range(8):
        bits = [(b >> (_QUBITS - 1 - q)) & 1 for q in range(_QUBITS)]
        if bits[control]:
            bits[target] ^= 1
        b2 = sum(bit << (_QUBITS - 1 - q) for q, bit in enumerate(bits))
        m[b2, b] = 1.0
    return m

_CNOTS = ((0, 1), (0, 2), (1, 0), (2, 0))
_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_LOCALS = {"I": np.eye(2, dtype=complex), "H": _HADAMARD}


@dataclass(frozen=True)
class QidCircuit:
    """A 4-CNOT realization of the QID gate.

    ``gates`` lists (control, target) qubit pairs applied left-to-right
    (qubit 0 is the data qubit).  ``input_layer`` and ``output_layer`` are
    single-qubit basis changes ('I' or 'H') on the two program qubits
    before and after the CNOTs.  ``relabeling`` is the monomial matrix M
    (a permutation with per-outcome phases of the measured program basis)
    such that the QID gate equals (I (x) M) times the circuit unitary.
    """

    gates: tuple[tuple[int, int], ...]
    input_layer: tuple[str, str]
    output_layer: tuple[str, str]
    relabeling: np.ndarray

    def unitary(self) -> np.ndarray:
        u = self._layer(self.input_layer)
        for control, target in self.gates:
            u = _cnot(control, target) @ u
        return self._layer(self.output_layer) @ u

    @staticmethod
    def _layer(names: tuple[str, str]) -> np.ndarray:
        return np.kron(np.eye(2, dtype=complex), np.kron(_LOCALS[names[0]], _LOCALS[names[1]]))


def _monomial_program_factor(x: np.ndarray, tol: float = 1e-10) -> np.ndarray | None:
    """Return M when x = I_2 (x) M with M a monomial unitary, else None."""
    x4 = x.reshape(2, 4, 2, 4)
    m = x4[0, :, 0, :]
    for i in range(2):
        for j in range(2):
            block = x4[i, :, j, :]
            target = m if i == j else np.zeros((4, 4))
            if np.max(np.abs(block - target)) > tol:
                return None
    mags = np.abs(m)
    hot = mags > 0.5
    if not (np.all(hot.sum(axis=0) == 1) and np.all(hot.sum(axis=1) == 1)):
        return None
    if np.max(np.abs(mags[hot] - 1.0)) > tol or np.max(mags[~hot]) > tol:
        return None
    return m


def qid_circuit_search() -> QidCircuit | None:
    """Brute-force search for a 4-CNOT circuit implementing the QID gate.

    The family is finite and enumerated deterministically: every ordering
    of the four data-program CNOTs (both control directions), composed with
    I-or-H local layers on the program qubits at the input and output.  A
    candidate matches when the QID gate equals the circuit up to a
    relabeling (permutation and phases) of the measured program basis.
    Returns None when the family contains no match.
    """
    target = qid_unitary().gate
    for perm in itertools.permutations(_CNOTS):
        base = np.eye(8, dtype=complex)
        for control, t in perm:
            base = _cnot(control, t) @ base
        for in_layer in itertools.product("IH", repeat=2):
            for out_layer in itertools.product("IH", repeat=2):
                candidate = QidCircuit(
                    gates=perm,
                    input_layer=in_layer,
                    output_layer=out_layer,
                    relabeling=np.eye(4, dtype=complex),
                )
                m = _monomial_program_factor(target @ dag(candidate.unitary()))
                if m is not None:
                    return QidCircuit(
                        gates=perm,
                        input_layer=in_layer,
                        output_layer=out_layer,
                        relabeling=m,
                    )
    return None
