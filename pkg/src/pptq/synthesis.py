"""Construction and verification of PPT quasi-operations.

Given quasi-states rho, sigma with E_N(rho) >= E_N(sigma), builds the
explicit Hermitian-preserving trace-preserving map N with N(rho) = sigma
whose partial-transpose conjugation is completely positive. Maps are
represented by Choi matrices J = sum_ij |i><j| (x) N(|i><j|), input factor
first, input-major ordering.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ParseError, PreconditionViolated
from .negativity import log_negativity
from .operators import eigendecompose, partial_transpose
from .states import QuasiState, quasi_state, random_quasi_state

EN_PRECONDITION_TOL = 1e-12
# sigma with no negative PT mass beyond this is handled by the constant map
NEG_MASS_TOL = 1e-12

HP_TOL = 1e-10
TP_TOL = 1e-9
CP_TOL = 1e-9
PPTQ_TOL = 1e-9
MAP_TOL = 1e-8

CHOI_CONVENTION = "input-major-row-major"


class ChannelChoi:
    """Choi matrix of a linear map between bipartite spaces."""

    __slots__ = ("in_dims", "out_dims", "choi")

    def __init__(self, in_dims, out_dims, choi):
        in_dims = (int(in_dims[0]), int(in_dims[1]))
        out_dims = (int(out_dims[0]), int(out_dims[1]))
        d_in = in_dims[0] * in_dims[1]
        d_out = out_dims[0] * out_dims[1]
        m = np.asarray(choi, dtype=np.complex128)
        if m.shape != (d_in * d_out, d_in * d_out):
            raise DimensionMismatch(
                f"choi side {m.shape} does not match dims {in_dims}x{out_dims}"
            )
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "in_dims", in_dims)
        object.__setattr__(self, "out_dims", out_dims)
        object.__setattr__(self, "choi", m)

    def __setattr__(self, name, value):
        raise AttributeError("ChannelChoi is immutable")

    @property
    def d_in(self) -> int:
        return self.in_dims[0] * self.in_dims[1]

    @property
    def d_out(self) -> int:
        return self.out_dims[0] * self.out_dims[1]

    def __repr__(self):
        return f"ChannelChoi(in={self.in_dims}, out={self.out_dims})"


@dataclass(frozen=True)
class SynthesisCertificate:
    """Intermediate spectral data of the construction, kept for audit."""
    spectrum_rho_pt: object
    spectrum_sigma_pt: object
    tr_r_plus: float
    tr_r_minus: float
    tr_s_plus_tilde: float
    tr_s_minus: float
    chosen_k: int
    lambda_min: float
    branch: str = "general"


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    residual: float


@dataclass(frozen=True)
class VerificationReport:
    """Per-check verdicts; every residual is re-derivable from the Choi."""
    hp: CheckResult
    tp: CheckResult
    cp: CheckResult
    pptq: CheckResult
    maps_rho_to_sigma: CheckResult | None = None

    def all_passed(self) -> bool:
        checks = [self.hp, self.tp, self.cp, self.pptq]
        if self.maps_rho_to_sigma is not None:
            checks.append(self.maps_rho_to_sigma)
        return all(c.passed for c in checks)

    def synthesis_contract_passed(self) -> bool:
        """What a synthesized channel guarantees: HP, TP, PPTq and the
        mapping check. Raw CP is deliberately excluded; the maps are quasi-
        operations and their Choi matrices may have negative eigenvalues."""
        checks = [self.hp, self.tp, self.pptq]
        if self.maps_rho_to_sigma is not None:
            checks.append(self.maps_rho_to_sigma)
        return all(c.passed for c in checks)

    def to_dict(self) -> dict:
        out = {}
        for name in ("hp", "tp", "cp", "pptq"):
            c = getattr(self, name)
            out[name] = {"passed": c.passed, "residual": c.residual}
        if self.maps_rho_to_sigma is not None:
            c = self.maps_rho_to_sigma
            out["maps_rho_to_sigma"] = {"passed": c.passed, "residual": c.residual}
        out["all_passed"] = self.all_passed()
        out["synthesis_contract_passed"] = self.synthesis_contract_passed()
        return out


def _double_pt(choi, in_dims, out_dims):
    """Partial transpose on the B input factor and the B' output factor."""
    da, db = in_dims
    dao, dbo = out_dims
    n = da * db * dao * dbo
    t = choi.reshape(da, db, dao, dbo, da, db, dao, dbo)
    t = t.transpose(0, 5, 2, 7, 4, 1, 6, 3)
    return np.ascontiguousarray(t.reshape(n, n))


def _projector(vectors, mask):
    cols = vectors[:, mask]
    return cols @ cols.conj().T


def synthesize(rho: QuasiState, sigma: QuasiState):
    """Build the PPT quasi-operation mapping rho to sigma.

    Returns (ChannelChoi, SynthesisCertificate). Raises PreconditionViolated
    when E_N(rho) < E_N(sigma) beyond tolerance, in which case no such map
    exists at all.
    """
    en_r = log_negativity(rho).log_negativity
    en_s = log_negativity(sigma).log_negativity
    if en_r < en_s - EN_PRECONDITION_TOL:
        raise PreconditionViolated(
            f"E_N(rho)={en_r:.6f} < E_N(sigma)={en_s:.6f}"
        )

    dec_r = eigendecompose(partial_transpose(rho.op))
    dec_s = eigendecompose(partial_transpose(sigma.op))
    r = dec_r.eigenvalues
    s = dec_s.eigenvalues
    # eigenvalues within 1e-12 of zero count as positive
    pos_r = r >= -1e-12
    pos_s = s >= -1e-12
    tr_r_plus = float(r[pos_r].sum())
    tr_r_minus = float(-r[~pos_r].sum())
    k = int(np.argmax(s))  # deterministic: s is descending, so k = 0
    s_k = float(s[k])
    tilde_mask = pos_s.copy()
    tilde_mask[k] = False
    tr_s_tilde = float(s[tilde_mask].sum())
    tr_s_minus = float(-s[~pos_s].sum())

    d_in = rho.op.side
    d_out = sigma.op.side
    in_dims = (rho.d_a, rho.d_b)
    out_dims = (sigma.d_a, sigma.d_b)
    vs = dec_s.eigenvectors
    kk = np.outer(vs[:, k], vs[:, k].conj())

    if tr_s_minus <= NEG_MASS_TOL:
        # sigma^{T_B'} is (numerically) a state: constant CPTP map to it
        wc = np.maximum(s, 0.0)
        tau = (vs * wc.astype(np.complex128)) @ vs.conj().T
        tau /= np.real(np.trace(tau))
        choi_m = np.kron(np.eye(d_in, dtype=np.complex128), tau)
        cert = SynthesisCertificate(
            spectrum_rho_pt=dec_r, spectrum_sigma_pt=dec_s,
            tr_r_plus=tr_r_plus, tr_r_minus=tr_r_minus,
            tr_s_plus_tilde=tr_s_tilde, tr_s_minus=tr_s_minus,
            chosen_k=k, lambda_min=1.0, branch="constant",
        )
        choi_n = _double_pt(choi_m, in_dims, out_dims)
        return ChannelChoi(in_dims, out_dims, choi_n), cert

    vr = dec_r.eigenvectors
    p_plus = _projector(vr, pos_r)
    s_tilde = (vs * np.where(tilde_mask, s, 0.0).astype(np.complex128)) @ vs.conj().T
    s_minus = (vs * np.where(~pos_s, -s, 0.0).astype(np.complex128)) @ vs.conj().T

    route_minus = tr_r_minus <= 1e-12
    if route_minus:
        # rho has no negative PT mass; the precondition then forces
        # tr_s_minus to be tiny, and its contribution is routed into the
        # trace completion on |k><k|
        p_minus = np.zeros_like(p_plus)
        branch = "routed"
    else:
        p_minus = _projector(vr, ~pos_r)
        branch = "general"

    # Assemble J(M) on the matrix-unit basis (tr(P E_ij) = P_ji); the Choi
    # of N = T_B' . M . T_B is then the double partial transpose of J(M).
    # Evaluating on units linearizes the trace-completion coefficient.
    a_ratio = tr_s_tilde / tr_r_plus if tr_r_plus > 0 else 0.0
    b_ratio = (tr_s_minus / tr_r_minus) if not route_minus else 0.0
    choi_m = np.zeros((d_in * d_out, d_in * d_out), dtype=np.complex128)
    eye_flat = np.eye(d_in)
    for i in range(d_in):
        for j in range(d_in):
            cp_ = p_plus[j, i]
            cm_ = p_minus[j, i]
            lam = eye_flat[i, j] - cp_ * a_ratio - cm_ * b_ratio
            block = (cp_ / tr_r_plus) * s_tilde + lam * kk
            if not route_minus:
                block = block + (cm_ / tr_r_minus) * s_minus
            choi_m[i * d_out:(i + 1) * d_out, j * d_out:(j + 1) * d_out] = block

    lam_extremes = 1.0 - np.where(pos_r, a_ratio, b_ratio)
    cert = SynthesisCertificate(
        spectrum_rho_pt=dec_r, spectrum_sigma_pt=dec_s,
        tr_r_plus=tr_r_plus, tr_r_minus=tr_r_minus,
        tr_s_plus_tilde=tr_s_tilde, tr_s_minus=tr_s_minus,
        chosen_k=k, lambda_min=float(lam_extremes.min()), branch=branch,
    )
    choi_n = _double_pt(choi_m, in_dims, out_dims)
    return ChannelChoi(in_dims, out_dims, choi_n), cert


def apply_channel(ch: ChannelChoi, s: QuasiState) -> QuasiState:
    """Evaluate the map on a quasi-state via its Choi matrix."""
    if (s.d_a, s.d_b) != ch.in_dims:
        raise DimensionMismatch(
            f"state dims {(s.d_a, s.d_b)} != channel input dims {ch.in_dims}"
        )
    j4 = ch.choi.reshape(ch.d_in, ch.d_out, ch.d_in, ch.d_out)
    out = np.einsum("ij,imjn->mn", s.matrix, j4)
    return quasi_state(ch.out_dims[0], ch.out_dims[1], out)


def _apply_raw(ch: ChannelChoi, matrix):
    j4 = ch.choi.reshape(ch.d_in, ch.d_out, ch.d_in, ch.d_out)
    return np.einsum("ij,imjn->mn", matrix, j4)


def verify(ch: ChannelChoi, rho: QuasiState | None = None,
           sigma: QuasiState | None = None) -> VerificationReport:
    """Check HP, TP, CP and PPTq verdicts (plus rho -> sigma if given).

    PPTq holds iff the Choi conjugated by the partial transposes on both B
    factors is positive semidefinite. Residuals for cp/pptq are the minimum
    eigenvalues; for maps_rho_to_sigma the trace norm of the output error.
    """
    j = ch.choi
    hp_res = float(np.abs(j - j.conj().T).max())
    hp = CheckResult(hp_res <= HP_TOL, hp_res)

    j4 = j.reshape(ch.d_in, ch.d_out, ch.d_in, ch.d_out)
    tr_out = np.einsum("imjm->ij", j4)
    tp_res = float(np.abs(tr_out - np.eye(ch.d_in)).max())
    tp = CheckResult(tp_res <= TP_TOL, tp_res)

    jh = 0.5 * (j + j.conj().T)
    cp_min = float(np.linalg.eigvalsh(jh).min())
    cp = CheckResult(cp_min >= -CP_TOL, cp_min)

    jg = _double_pt(jh, ch.in_dims, ch.out_dims)
    pptq_min = float(np.linalg.eigvalsh(0.5 * (jg + jg.conj().T)).min())
    pptq = CheckResult(pptq_min >= -PPTQ_TOL, pptq_min)

    maps_check = None
    if rho is not None and sigma is not None:
        out = _apply_raw(ch, rho.matrix)
        diff = out - sigma.matrix
        dist = float(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))).sum())
        maps_check = CheckResult(dist <= MAP_TOL, dist)

    return VerificationReport(hp=hp, tp=tp, cp=cp, pptq=pptq,
                              maps_rho_to_sigma=maps_check)


@dataclass(frozen=True)
class MonotoneReport:
    trials: int
    violations: int
    worst_excess: float
    gaps: tuple = field(default=(), repr=False)

    @property
    def passed(self) -> bool:
        return self.violations == 0


def en_monotone_check(ch: ChannelChoi, trials: int, seed: int,
                      tol: float = 1e-9) -> MonotoneReport:
    """Feed random quasi-states through the channel and compare E_N in/out.

    For a genuine PPTq + TP channel no trial can raise E_N beyond `tol`;
    violating channels are detected by positive excess.
    """
    violations = 0
    worst = -np.inf
    gaps = []
    for trial in range(trials):
        x = random_quasi_state(ch.in_dims[0], ch.in_dims[1],
                               neg_weight=0.3, seed=seed + trial)
        en_in = log_negativity(x).log_negativity
        en_out = log_negativity(apply_channel(ch, x)).log_negativity
        gap = en_out - en_in
        gaps.append(gap)
        worst = max(worst, gap)
        if gap > tol:
            violations += 1
    return MonotoneReport(trials=trials, violations=violations,
                          worst_excess=float(worst), gaps=tuple(gaps))


def identity_channel(d_a: int, d_b: int) -> ChannelChoi:
    """Choi matrix of the identity map on a d_a x d_b space."""
    n = d_a * d_b
    j = np.zeros((n * n, n * n), dtype=np.complex128)
    for i in range(n):
        for jdx in range(n):
            j[i * n + i, jdx * n + jdx] = 1.0
    return ChannelChoi((d_a, d_b), (d_a, d_b), j)


def constant_channel(target: QuasiState, in_dims) -> ChannelChoi:
    """Choi matrix of the map sending every input to tr(input) * target."""
    d_in = in_dims[0] * in_dims[1]
    j = np.kron(np.eye(d_in, dtype=np.complex128), target.matrix)
    return ChannelChoi(in_dims, (target.d_a, target.d_b), j)


def transpose_channel(d_a: int, d_b: int) -> ChannelChoi:
    """Choi matrix of the partial-transpose map itself (HP and TP, not CP)."""
    n = d_a * d_b
    j = np.zeros((n * n, n * n), dtype=np.complex128)
    unit = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        for jdx in range(n):
            unit[:] = 0.0
            unit[i, jdx] = 1.0
            pt = unit.reshape(d_a, d_b, d_a, d_b).transpose(0, 3, 2, 1).reshape(n, n)
            j[i * n:(i + 1) * n, jdx * n:(jdx + 1) * n] = pt
    return ChannelChoi((d_a, d_b), (d_a, d_b), j)


def dump_channel_json(ch: ChannelChoi) -> str:
    """Canonical single-line JSON text for a channel file (LF-terminated)."""
    payload = {
        "in_dims": list(ch.in_dims),
        "out_dims": list(ch.out_dims),
        "choi": [[[float(x.real), float(x.imag)] for x in row] for row in ch.choi],
        "convention": CHOI_CONVENTION,
    }
    return json.dumps(payload, ensure_ascii=False, separators=(", ", ": ")) + "\n"


def save_channel(ch: ChannelChoi, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_channel_json(ch))


def load_channel(path) -> ChannelChoi:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ParseError("channel file must be a JSON object")
    for key in ("in_dims", "out_dims", "choi", "convention"):
        if key not in payload:
            raise ParseError(f"missing key {key!r}")
    if payload["convention"] != CHOI_CONVENTION:
        raise ParseError(f"unsupported convention {payload['convention']!r}")
    in_dims = payload["in_dims"]
    out_dims = payload["out_dims"]
    for dims in (in_dims, out_dims):
        if (not isinstance(dims, list) or len(dims) != 2
                or not all(isinstance(d, int) and d >= 1 for d in dims)):
            raise ParseError("dims must be [d_a, d_b] with positive integers")
    side = in_dims[0] * in_dims[1] * out_dims[0] * out_dims[1]
    rows = payload["choi"]
    if not isinstance(rows, list) or len(rows) != side:
        raise ParseError(f"choi must have {side} rows")
    m = np.empty((side, side), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != side:
            raise ParseError(f"choi row {i} must have {side} entries")
        for jdx, entry in enumerate(row):
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(x, (int, float)) for x in entry)):
                raise ParseError(f"choi entry ({i},{jdx}) must be [re, im]")
            m[i, jdx] = complex(entry[0], entry[1])
    return ChannelChoi(tuple(in_dims), tuple(out_dims), m)
