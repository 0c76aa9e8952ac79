"""Quantum states and quasi-states: constructors, validation, random
generation, JSON file serialization.

A quasi-state is any Hermitian trace-one operator; quantum states are the
positive-semidefinite special case.
"""

import json
from enum import Enum

import numpy as np

from .errors import InvariantViolation, ParseError
from .operators import BipartiteOperator, partial_transpose

TRACE_TOL = 1e-10
PSD_TOL = 1e-10


class Classification(Enum):
    QUANTUM_STATE = "quantum_state"
    PROPER_QUASI_STATE = "proper_quasi_state"


class PptFlag(Enum):
    PPT = "ppt"
    NPT = "npt"
    UNKNOWN = "unknown"


class QuasiState:
    """A trace-one BipartiteOperator with lazy PSD/PPT classification."""

    __slots__ = ("op", "_classification", "_ppt_flag")

    def __init__(self, op: BipartiteOperator):
        tr = op.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvariantViolation(f"trace must be 1, got {tr!r}")
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "_classification", None)
        object.__setattr__(self, "_ppt_flag", PptFlag.UNKNOWN)

    def __setattr__(self, name, value):
        raise AttributeError("QuasiState is immutable")

    @property
    def d_a(self) -> int:
        return self.op.d_a

    @property
    def d_b(self) -> int:
        return self.op.d_b

    @property
    def matrix(self):
        return self.op.matrix

    @property
    def classification(self) -> Classification:
        if self._classification is None:
            lo = float(np.linalg.eigvalsh(self.op.matrix).min())
            cls = (Classification.QUANTUM_STATE if lo >= -PSD_TOL
                   else Classification.PROPER_QUASI_STATE)
            object.__setattr__(self, "_classification", cls)
        return self._classification

    @property
    def is_state(self) -> bool:
        return self.classification is Classification.QUANTUM_STATE

    @property
    def ppt_flag(self) -> PptFlag:
        if self._ppt_flag is PptFlag.UNKNOWN:
            pt = partial_transpose(self.op)
            lo = float(np.linalg.eigvalsh(pt.matrix).min())
            flag = PptFlag.PPT if lo >= -PSD_TOL else PptFlag.NPT
            object.__setattr__(self, "_ppt_flag", flag)
        return self._ppt_flag

    def __repr__(self):
        return f"QuasiState(d_a={self.d_a}, d_b={self.d_b})"


def quasi_state(d_a: int, d_b: int, matrix) -> QuasiState:
    """Wrap a raw matrix as a QuasiState, validating all invariants."""
    return QuasiState(BipartiteOperator(d_a, d_b, matrix))


def max_entangled(d: int) -> QuasiState:
    """Standard maximally entangled state of Schmidt rank d (d=1 allowed)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    m = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            m[i * d + i, j * d + j] = 1.0 / d
    return quasi_state(d, d, m)


def _haar_unitary(n, rng):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_state(d_a: int, d_b: int, seed: int) -> QuasiState:
    """Seed-deterministic random quantum state.

    Haar-unitary conjugation of a normalized random diagonal, so the output
    is PSD with trace one.
    """
    rng = np.random.default_rng(seed)
    n = d_a * d_b
    w = rng.random(n)
    w /= w.sum()
    u = _haar_unitary(n, rng)
    return quasi_state(d_a, d_b, (u * w) @ u.conj().T)


def random_quasi_state(d_a: int, d_b: int, neg_weight: float,
                       seed: int) -> QuasiState:
    """Seed-deterministic random quasi-state with controlled negative mass.

    Draws a positive spectrum, flips about half of it to negative values
    scaled by `neg_weight`, renormalizes the trace to one, and conjugates by
    a Haar unitary. neg_weight=0 reproduces a quantum state.
    """
    if neg_weight < 0:
        raise ValueError("neg_weight must be >= 0")
    rng = np.random.default_rng(seed)
    n = d_a * d_b
    while True:
        w = rng.random(n)
        if neg_weight > 0 and n > 1:
            k = max(1, n // 2)
            idx = rng.choice(n, size=k, replace=False)
            w[idx] *= -neg_weight
        s = w.sum()
        if abs(s) >= 0.25:
            break
    w /= s
    u = _haar_unitary(n, rng)
    return quasi_state(d_a, d_b, (u * w) @ u.conj().T)


def _matrix_to_rows(m):
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def _rows_to_matrix(rows, side):
    if not isinstance(rows, list) or len(rows) != side:
        raise ParseError(f"matrix must have {side} rows")
    out = np.empty((side, side), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != side:
            raise ParseError(f"row {i} must have {side} entries")
        for j, entry in enumerate(row):
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(x, (int, float)) for x in entry)):
                raise ParseError(f"entry ({i},{j}) must be [re, im]")
            out[i, j] = complex(entry[0], entry[1])
    return out


def dump_state_json(state: QuasiState) -> str:
    """Canonical single-line JSON text for a state file (LF-terminated)."""
    payload = {
        "d_a": state.d_a,
        "d_b": state.d_b,
        "matrix": _matrix_to_rows(state.matrix),
    }
    return json.dumps(payload, ensure_ascii=False, separators=(", ", ": ")) + "\n"


def save(state: QuasiState, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_state_json(state))


def load(path) -> QuasiState:
    """Load and fully validate a state file.

    Raises ParseError for malformed JSON or inconsistent shape and
    InvariantViolation for non-Hermitian or wrong-trace content.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_state_json(text)


def parse_state_json(text: str) -> QuasiState:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ParseError("state file must be a JSON object")
    for key in ("d_a", "d_b", "matrix"):
        if key not in payload:
            raise ParseError(f"missing key {key!r}")
    d_a, d_b = payload["d_a"], payload["d_b"]
    if (not isinstance(d_a, int) or not isinstance(d_b, int)
            or isinstance(d_a, bool) or isinstance(d_b, bool)
            or d_a < 1 or d_b < 1):
        raise ParseError("d_a and d_b must be positive integers")
    m = _rows_to_matrix(payload["matrix"], d_a * d_b)
    return quasi_state(d_a, d_b, m)
