"""Programmability of von Neumann measurements.

Which collections of rank-1 projective measurements fit on one processor,
and how to synthesize a processor that realizes them: the joint-
programmability condition on outcome-paired bases, zero-operator padding
(always works, program space N*d), and the relaxed shift construction
(program space d, projection postulate sacrificed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import ATOL, dag, is_projector
from .processor import Processor, ProgramState, kraus_operators
from .sampling import as_generator, random_rank_one_measurement

POSTULATE_ATOL = 1e-8


class IsometryViolationError(ValueError):
    """The padded operator families cannot be completed to a unitary."""

    def __init__(self, first: int, second: int, slots: tuple[int, ...]):
        super().__init__(
            f"slot products of measurements {first} and {second} do not cancel "
            f"(offending slots {slots}); the processor map is not an isometry"
        )
        self.first = first
        self.second = second
        self.slots = slots


@dataclass(frozen=True)
class VonNeumannMeasurement:
    """Ordered complete family of d mutually orthogonal rank-1 projectors."""

    projectors: tuple[np.ndarray, ...]

    def __post_init__(self):
        projs = tuple(np.asarray(e, dtype=complex) for e in self.projectors)
        if not projs:
            raise ValueError("measurement needs at least one projector")
        d = projs[0].shape[0]
        if len(projs) != d:
            raise ValueError(f"need {d} projectors on dimension {d}, got {len(projs)}")
        total = np.zeros((d, d), dtype=complex)
        for j, e in enumerate(projs):
            if e.shape != (d, d):
                raise ValueError("projectors must share one dimension")
            if not is_projector(e, ATOL) or abs(np.trace(e).real - 1.0) > ATOL:
                raise ValueError(f"element {j} is not a rank-1 projector")
            total += e
        if np.max(np.abs(total - np.eye(d))) > ATOL:
            raise ValueError("projectors must sum to the identity")
        for j in range(d):
            for k in range(j + 1, d):
                if np.max(np.abs(projs[j] @ projs[k])) > ATOL:
                    raise ValueError(f"projectors {j} and {k} are not orthogonal")
        object.__setattr__(self, "projectors", projs)

    @classmethod
    def from_basis(cls, vectors: list[np.ndarray]) -> "VonNeumannMeasurement":
        vs = [np.asarray(v, dtype=complex) for v in vectors]
        return cls(projectors=tuple(np.outer(v, v.conj()) for v in vs))

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def basis_vector(self, k: int) -> np.ndarray:
        """Unit vector of the k-th projector (phase fixed by the largest entry)."""
        evals, evecs = np.linalg.eigh(self.projectors[k])
        v = evecs[:, int(np.argmax(evals))]
        pivot = v[int(np.argmax(np.abs(v)))]
        return v * (pivot.conjugate() / abs(pivot))


def kraus_compatibility(
    ops_a: list[np.ndarray], ops_b: list[np.ndarray], tol: float = ATOL
) -> tuple[np.ndarray, complex | None]:
    """Evaluate sum_j A_j^dagger B_j for two outcome-paired operator families.

    Two families realizable on the same processor must make this a scalar
    multiple k*I of the identity, with k the overlap of their program
    states.  Returns (S, k), with k None when S is not scalar.
    """
    if len(ops_a) != len(ops_b):
        raise ValueError("families must pair outcomes one-to-one")
    d = np.asarray(ops_a[0]).shape[0]
    s = np.zeros((d, d), dtype=complex)
    for a, b in zip(ops_a, ops_b):
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        if a.shape != (d, d) or b.shape != (d, d):
            raise ValueError("paired operators must share one dimension")
        s += dag(a) @ b
    k = complex(np.trace(s) / d)
    if np.max(np.abs(s - k * np.eye(d))) > tol:
        return s, None
    return s, k


def coprogram_condition(
    m1: VonNeumannMeasurement,
    m2: VonNeumannMeasurement,
    pairing: list[tuple[int, int]] | None = None,
    weights: list[float] | None = None,
    tol: float = ATOL,
) -> tuple[np.ndarray, complex | None]:
    """Joint-programmability operator for two measurements.

    S = sum_t w_t <e_i|g_j> |e_i><g_j| = sum_t w_t E_i G_j over the paired
    outcomes (i, j); the default pairing is by index with unit weights.
    Working with projector products keeps S independent of basis-vector
    phases.  The scalar k is present exactly when S = k*I, in which case
    programs with overlap k are admissible; otherwise the program states
    must be orthogonal.  An explicit pairing (with repetitions and
    weights) expresses realizations that spread one measurement over
    several processor outcomes.
    """
    if m1.dim != m2.dim:
        raise ValueError("measurements must share one dimension")
    if pairing is None:
        if len(m1.projectors) != len(m2.projectors):
            raise ValueError("index pairing needs equal outcome counts")
        pairing = [(j, j) for j in range(len(m1.projectors))]
    if weights is None:
        weights = [1.0] * len(pairing)
    if len(weights) != len(pairing):
        raise ValueError("weights must match the pairing length")
    d = m1.dim
    s = np.zeros((d, d), dtype=complex)
    for w, (i, j) in zip(weights, pairing):
        if not (0 <= i < len(m1.projectors) and 0 <= j < len(m2.projectors)):
            raise ValueError(f"pairing ({i}, {j}) outside the outcome ranges")
        s += w * (m1.projectors[i] @ m2.projectors[j])
    k = complex(np.trace(s) / d)
    if np.max(np.abs(s - k * np.eye(d))) > tol:
        return s, None
    return s, k


@dataclass(frozen=True)
class SlotAssignment:
    """Placement of measurement outcomes into processor outcome slots.

    Measurement alpha carries the orthonormal program state
    ``program_states[alpha]`` and its outcome j lands in processor slot
    ``slot_maps[alpha][j]``; slots it does not use hold the zero operator.
    """

    program_dim: int
    program_states: tuple[np.ndarray, ...]
    slot_maps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        states = tuple(np.asarray(v, dtype=complex) for v in self.program_states)
        if len(states) != len(self.slot_maps):
            raise ValueError("one slot map per program state required")
        for v in states:
            if v.shape != (self.program_dim,):
                raise ValueError("program states must live in the program space")
            if abs(np.linalg.norm(v) - 1.0) > ATOL:
                raise ValueError("program states must be normalized")
        for a in range(len(states)):
            for b in range(a + 1, len(states)):
                if abs(states[a].conj() @ states[b]) > ATOL:
                    raise ValueError("program states must be pairwise orthogonal")
        maps = tuple(tuple(int(s) for s in m) for m in self.slot_maps)
        for m in maps:
            if len(set(m)) != len(m):
                raise ValueError("slot maps must be injective")
            if any(s < 0 or s >= self.program_dim for s in m):
                raise ValueError("slot index outside the program space")
        object.__setattr__(self, "program_states", states)
        object.__setattr__(self, "slot_maps", maps)


def pad_with_zero_slots(measurements: list[VonNeumannMeasurement]) -> SlotAssignment:
    """Disjoint-slot assignment that works for any N measurements.

    Measurement alpha gets slots [alpha*d, (alpha+1)*d) of an N*d program
    space and the alpha-th computational program state, so all cross
    products vanish and the processor map is an isometry by construction.
    """
    if not measurements:
        raise ValueError("need at least one measurement")
    d = measurements[0].dim
    for m in measurements:
        if m.dim != d:
            raise ValueError("measurements must share one dimension")
    n = len(measurements)
    dp = n * d
    eye = np.eye(dp, dtype=complex)
    return SlotAssignment(
        program_dim=dp,
        program_states=tuple(eye[a] for a in range(n)),
        slot_maps=tuple(tuple(range(a * d, (a + 1) * d)) for a in range(n)),
    )


@dataclass(frozen=True)
class MeasurementRealization:
    """How one program of a synthesized processor performs its measurement."""

    index: int
    projectors: tuple[np.ndarray, ...]
    program_state: np.ndarray
    slot_map: tuple[int, ...]
    realized_povm: tuple[np.ndarray, ...]
    realized: bool
    postulate_compliant: bool
    relabeling: np.ndarray | None


@dataclass(frozen=True)
class SynthesisReport:
    """Synthesized processor plus per-measurement verification records."""

    processor: Processor
    unitary: bool
    completion_used: bool
    measurements: tuple[MeasurementRealization, ...]

    @property
    def gate(self) -> np.ndarray:
        return self.processor.gate


def _complete_columns(columns: list[np.ndarray], dim: int) -> list[np.ndarray]:
    """Extend orthonormal columns to a full basis, deterministic pivot order."""
    basis = list(columns)
    for p in range(dim):
        if len(basis) == dim:
            break
        e = np.zeros(dim, dtype=complex)
        e[p] = 1.0
        v = e.copy()
        for b in basis:
            v -= b * (b.conj() @ v)
        norm = np.linalg.norm(v)
        if norm > 1e-7:
            basis.append(v / norm)
    if len(basis) != dim:
        raise RuntimeError("column completion failed to span the space")
    return basis


def _assemble_gate(
    padded: list[list[np.ndarray]],
    states: tuple[np.ndarray, ...],
    d: int,
    dp: int,
) -> np.ndarray:
    """Unitary acting as psi (x) state_a -> sum_k (padded[a][k] psi) (x) |k>."""
    dim = d * dp
    eye_d = np.eye(d, dtype=complex)
    eye_p = np.eye(dp, dtype=complex)
    dom, img = [], []
    for a, state in enumerate(states):
        for i in range(d):
            dom.append(np.kron(eye_d[i], state))
            out = np.zeros(dim, dtype=complex)
            for k in range(dp):
                out += np.kron(padded[a][k] @ eye_d[i], eye_p[k])
            img.append(out)
    dom_full = _complete_columns(dom, dim)
    img_full = _complete_columns(img, dim)
    gate = np.zeros((dim, dim), dtype=complex)
    for a, b in zip(dom_full, img_full):
        gate += np.outer(b, a.conj())
    return gate


def _check_isometry(padded: list[list[np.ndarray]], d: int, dp: int) -> None:
    n = len(padded)
    for a in range(n):
        for b in range(n):
            s = np.zeros((d, d), dtype=complex)
            bad = []
            for k in range(dp):
                term = dag(padded[a][k]) @ padded[b][k]
                s += term
                if a != b and np.max(np.abs(term)) > ATOL:
                    bad.append(k)
            target = np.eye(d) if a == b else np.zeros((d, d))
            if np.max(np.abs(s - target)) > ATOL:
                raise IsometryViolationError(a, b, tuple(bad))


def _verify_realizations(
    processor: Processor,
    padded: list[list[np.ndarray]],
    measurements: list[VonNeumannMeasurement],
    assign_states: tuple[np.ndarray, ...],
    slot_maps: tuple[tuple[int, ...], ...],
    relabelings: list[np.ndarray | None],
) -> tuple[MeasurementRealization, ...]:
    d, dp = processor.data_dim, processor.program_dim
    records = []
    mixed = np.eye(d, dtype=complex) / d
    for a, m in enumerate(measurements):
        triples = kraus_operators(processor, ProgramState.pure(assign_states[a]))
        realized = [dag(op) @ op for _, _, op in triples]
        ok = all(
            np.max(np.abs(realized[slot] - dag(padded[a][slot]) @ padded[a][slot]))
            <= 10 * ATOL
            for slot in range(dp)
        )
        slot_to_outcome = {slot: j for j, slot in enumerate(slot_maps[a])}
        compliant = True
        for _, slot, op in triples:
            p = np.trace(op @ mixed @ dag(op)).real
            if p <= 1e-12:
                continue
            post = op @ mixed @ dag(op) / p
            j = slot_to_outcome.get(slot)
            if j is None or np.max(np.abs(post - m.projectors[j])) > POSTULATE_ATOL:
                compliant = False
        records.append(
            MeasurementRealization(
                index=a,
                projectors=m.projectors,
                program_state=assign_states[a],
                slot_map=slot_maps[a],
                realized_povm=tuple(realized),
                realized=ok,
                postulate_compliant=compliant,
                relabeling=relabelings[a],
            )
        )
    return tuple(records)


def build_orthogonal_processor(
    assign: SlotAssignment, measurements: list[VonNeumannMeasurement]
) -> SynthesisReport:
    """Synthesize a processor realizing each measurement from its program state.

    The slot assignment places each measurement's projectors in its slots
    (zero elsewhere); the map extends to a unitary exactly when all cross
    products between different measurements' slot operators cancel, which
    is checked first and reported as IsometryViolationError naming the
    offending measurement pair and slots.
    """
    if len(measurements) != len(assign.program_states):
        raise ValueError("one measurement per program state required")
    d = measurements[0].dim
    dp = assign.program_dim
    padded = []
    for a, m in enumerate(measurements):
        if m.dim != d:
            raise ValueError("measurements must share one dimension")
        ops = [np.zeros((d, d), dtype=complex) for _ in range(dp)]
        for j, slot in enumerate(assign.slot_maps[a]):
            ops[slot] = m.projectors[j]
        padded.append(ops)
    _check_isometry(padded, d, dp)
    gate = _assemble_gate(padded, assign.program_states, d, dp)
    proc = Processor(data_dim=d, program_dim=dp, gate=gate)
    records = _verify_realizations(
        proc, padded, measurements, assign.program_states, assign.slot_maps,
        [None] * len(measurements),
    )
    return SynthesisReport(
        processor=proc,
        unitary=True,
        completion_used=dp > len(measurements),
        measurements=records,
    )


def relaxed_pvm_processor(pvms: list[VonNeumannMeasurement]) -> SynthesisReport:
    """Shift-construction processor for up to d measurements on a d-size program.

    Measurement alpha is realized through the relabeling unitary U_alpha
    mapping its k-th basis vector to |(k + alpha) mod d>, which makes all
    cross products cancel for arbitrary inputs.  Outcome statistics are
    exact; post-measurement states are U E U^dagger, so the projection
    postulate only survives when U_alpha is trivial.
    """
    if not pvms:
        raise ValueError("need at least one measurement")
    d = pvms[0].dim
    n = len(pvms)
    if n > d:
        raise ValueError(f"shift construction fits at most d={d} measurements, got {n}")
    for m in pvms:
        if m.dim != d:
            raise ValueError("measurements must share one dimension")
    dp = d
    eye = np.eye(dp, dtype=complex)
    eye_data = np.eye(d, dtype=complex)
    padded = []
    relabelings: list[np.ndarray | None] = []
    for a, m in enumerate(pvms):
        ops = []
        u = np.zeros((d, d), dtype=complex)
        for k in range(d):
            phi = m.basis_vector(k)
            shifted = eye_data[(k + a) % d]
            ops.append(np.outer(shifted, phi.conj()))
            u += np.outer(shifted, phi.conj())
        padded.append(ops)
        relabelings.append(u)
    _check_isometry(padded, d, dp)
    gate = _assemble_gate(padded, tuple(eye[a] for a in range(n)), d, dp)
    proc = Processor(data_dim=d, program_dim=dp, gate=gate)
    slot_maps = tuple(tuple(range(d)) for _ in range(n))
    records = _verify_realizations(
        proc, padded, pvms, tuple(eye[a] for a in range(n)), slot_maps, relabelings
    )
    return SynthesisReport(
        processor=proc,
        unitary=True,
        completion_used=n < dp,
        measurements=records,
    )


def verify_projection_postulate(
    report: SynthesisReport,
    measurement: VonNeumannMeasurement,
    samples: list[np.ndarray],
) -> bool:
    """Check post-measurement states against the measurement's projectors.

    For every sample state and every outcome with probability above 1e-10,
    the conditional post-state must equal the outcome's projector within
    1e-8.  The measurement must be one the report realizes.
    """
    record = None
    for rec in report.measurements:
        if all(
            np.max(np.abs(p - q)) <= POSTULATE_ATOL
            for p, q in zip(rec.projectors, measurement.projectors)
        ):
            record = rec
            break
    if record is None:
        raise ValueError("measurement is not realized by this report")
    triples = kraus_operators(report.processor, ProgramState.pure(record.program_state))
    ops = {k: op for _, k, op in triples}
    for rho in samples:
        rho = np.asarray(rho, dtype=complex)
        for j, slot in enumerate(record.slot_map):
            op = ops[slot]
            p = np.trace(dag(op) @ op @ rho).real
            if p <= 1e-10:
                continue
            post = op @ rho @ dag(op) / p
            if np.max(np.abs(post - measurement.projectors[j])) > POSTULATE_ATOL:
                return False
    return True


@dataclass(frozen=True)
class FeasibilityViolation:
    """One broken necessary condition for a shared d-dimensional program."""

    kind: str  # "row_orthogonality" or "column_permutation"
    first: int
    second: int
    row: int | None = None


def feasibility_table_check(
    columns: list[VonNeumannMeasurement], tol: float = ATOL
) -> list[FeasibilityViolation]:
    """Necessary conditions for realizing the columns with a d-size program.

    Checks that outcome-paired vectors of different columns are orthogonal
    (row orthogonality) and that no column is an outcome permutation of
    another up to phases.  An empty result means the collection passes
    the necessary conditions; it is not a sufficiency certificate.
    """
    if not columns:
        return []
    d = columns[0].dim
    for m in columns:
        if m.dim != d:
            raise ValueError("columns must share one dimension")
    if len(columns) > d:
        raise ValueError(f"at most d={d} columns can share a d-size program")
    violations = []
    for a in range(len(columns)):
        for b in range(a + 1, len(columns)):
            for k in range(d):
                overlap = np.trace(columns[a].projectors[k] @ columns[b].projectors[k]).real
                if overlap > tol:
                    violations.append(
                        FeasibilityViolation(
                            kind="row_orthogonality", first=a, second=b, row=k
                        )
                    )
            if _is_outcome_permutation(columns[a], columns[b], tol):
                violations.append(
                    FeasibilityViolation(kind="column_permutation", first=a, second=b)
                )
    return violations


def _is_outcome_permutation(
    m1: VonNeumannMeasurement, m2: VonNeumannMeasurement, tol: float
) -> bool:
    """True when m2's projectors are m1's in some other order."""
    d = m1.dim
    matched: set[int] = set()
    for k in range(d):
        hit = None
        for j in range(d):
            if j in matched:
                continue
            if np.trace(m1.projectors[k] @ m2.projectors[j]).real > 1.0 - tol:
                hit = j
                break
        if hit is None:
            return False
        matched.add(hit)
    return True


@dataclass(frozen=True)
class PairSearchResult:
    """Outcome of a randomized hunt for a feasible distinct measurement pair."""

    dim: int
    trials: int
    hits: tuple[tuple[VonNeumannMeasurement, VonNeumannMeasurement], ...]


def search_coprogrammable_pair(
    dim: int, trials: int, seed: int | np.random.Generator
) -> PairSearchResult:
    """Randomized search for two distinct measurements passing the table check.

    Each trial draws a random measurement, then draws candidate partner
    vectors inside the orthogonal complement of each outcome (so row
    orthogonality holds by construction) and keeps the partner only when
    those vectors happen to form a measurement that is not an outcome
    permutation of the first.  No hit is expected for dim 2 or 3.
    """
    rng = as_generator(seed)
    hits = []
    for _ in range(trials):
        first = VonNeumannMeasurement(
            projectors=tuple(random_rank_one_measurement(dim, rng))
        )
        candidate = []
        for k in range(dim):
            e = first.basis_vector(k)
            comp = _orthogonal_complement(e)
            coeff = rng.normal(size=dim - 1) + 1j * rng.normal(size=dim - 1)
            v = comp @ (coeff / np.linalg.norm(coeff))
            candidate.append(v)
        overlaps = np.array([[c1.conj() @ c2 for c2 in candidate] for c1 in candidate])
        if np.max(np.abs(overlaps - np.eye(dim))) > 1e-8:
            continue
        second = VonNeumannMeasurement.from_basis(candidate)
        if not feasibility_table_check([first, second]):
            hits.append((first, second))
    return PairSearchResult(dim=dim, trials=trials, hits=tuple(hits))


def _orthogonal_complement(v: np.ndarray) -> np.ndarray:
    """Columns spanning the orthogonal complement of a unit vector."""
    d = len(v)
    mat = np.eye(d, dtype=complex) - np.outer(v, v.conj())
    _, _, vh = np.linalg.svd(mat)
    return vh[: d - 1].conj().T


@dataclass(frozen=True)
class ExtraProgramSearchResult:
    """Programs beyond the construction basis that realize some measurement."""

    trials: int
    hits: tuple[np.ndarray, ...]


def search_extra_relaxed_program(
    pvms: list[VonNeumannMeasurement], trials: int, seed: int | np.random.Generator
) -> ExtraProgramSearchResult:
    """Look for extra program states of a shift-construction processor.

    Draws random genuinely superposed program states and reports those
    whose induced outcome operators form a measurement (rank-1 orthogonal
    projectors).  Whether such states exist beyond the basis programs is
    an open question; this utility only reports what it finds.
    """
    report = relaxed_pvm_processor(pvms)
    proc = report.processor
    rng = as_generator(seed)
    hits = []
    for _ in range(trials):
        v = rng.normal(size=proc.program_dim) + 1j * rng.normal(size=proc.program_dim)
        v /= np.linalg.norm(v)
        if np.max(np.abs(v)) > 1.0 - 1e-6:
            continue
        triples = kraus_operators(proc, ProgramState.pure(v))
        povm = [dag(op) @ op for _, _, op in triples]
        if _is_rank_one_pvm(povm):
            hits.append(v)
    return ExtraProgramSearchResult(trials=trials, hits=tuple(hits))


def _is_rank_one_pvm(povm: list[np.ndarray], tol: float = 1e-8) -> bool:
    d = povm[0].shape[0]
    total = np.zeros((d, d), dtype=complex)
    for f in povm:
        if not is_projector(f, tol) or abs(np.trace(f).real - 1.0) > tol:
            return False
        total += f
    return bool(np.max(np.abs(total - np.eye(d))) <= tol)
