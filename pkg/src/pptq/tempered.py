"""Tempered negativity via bisection over certified convex feasibility.

The target quantity is sup tr(X sigma) over Hermitian witnesses X with
||X^Tb||_inf <= 1 and ||X||_inf = tr(X rho) (solved with <=, which attains
the same supremum; the objective is scale-monotone along feasible rays).
Each bisection probe runs Dykstra alternating projections among closed-form
projectable convex sets; every accepted level is certified by an explicit
witness, so the reported value is a sound lower bound even without full
convergence.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import DimensionCapExceeded, DimensionMismatch
from .operators import BipartiteOperator, tensor_power, trace_norm
from .states import QuasiState, random_state
from .negativity import log_negativity

PPT_BRACKET_TOL = 1e-9
WITNESS_TOL = 1e-6


@dataclass(frozen=True)
class SolverConfig:
    """Bisection and feasibility-solver knobs (defaults are the contract)."""
    bisect_tol: float = 1e-6
    bisect_steps: int = 200
    max_iters: int = 5000
    residual_tol: float = 1e-8
    check_every: int = 10
    stall_checks: int = 30


@dataclass(frozen=True)
class TemperedResult:
    """Solver output: value, certifying witness, residual diagnostics.

    feasibility_residuals = (r_op, r_pt, r_lin): violations of the witness
    spectral bound, the partial-transpose spectral bound, and the affine
    slice the reported value sits on.
    """
    n_tau: float
    witness: BipartiteOperator
    feasibility_residuals: tuple[float, float, float]
    iterations: int
    converged: bool
    experimental: bool = False
    t_history: tuple = field(default=(), repr=False)

    @property
    def log_n_tau(self) -> float:
        return math.log2(self.n_tau)


def _herm(m):
    return 0.5 * (m + m.conj().T)


def _op_norm(m):
    return float(np.abs(np.linalg.eigvalsh(_herm(m))).max())


def _tr_with(m, rho):
    return float(np.real(np.trace(m @ rho)))


def _sign_witness(rho_mat, d_a, d_b):
    """Damped sign witness: a certified feasible start for the diagonal solve.

    W = (sign of rho^Tb)^Tb achieves tr(W rho) = ||rho^Tb||_1 and has PT
    spectral norm exactly 1; blending toward the identity (which keeps the
    PT constraint for every blend weight) enforces ||X||_inf <= tr(X rho).
    On maximally entangled inputs no damping is needed and the start is
    already optimal.
    """
    rpt = kernels.pt_matrix(rho_mat, d_a, d_b)
    w, v = np.linalg.eigh(_herm(rpt))
    tn = float(np.abs(w).sum())
    sgn = np.where(w >= 0, 1.0, -1.0).astype(np.complex128)
    witness = kernels.pt_matrix((v * sgn) @ v.conj().T, d_a, d_b)
    eye = np.eye(rho_mat.shape[0], dtype=np.complex128)

    def feasible(alpha):
        xa = (1 - alpha) * witness + alpha * eye
        return _op_norm(xa) <= (1 - alpha) * tn + alpha + 1e-12

    if feasible(0.0):
        alpha = 0.0
    else:
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if feasible(mid):
                hi = mid
            else:
                lo = mid
        alpha = hi
    return (1 - alpha) * witness + alpha * eye, (1 - alpha) * tn + alpha


def _witness_residuals(x, rho_mat, sigma_mat, d_a, d_b, level):
    r_op = max(0.0, _op_norm(x) - _tr_with(x, rho_mat))
    r_pt = max(0.0, _op_norm(kernels.pt_matrix(x, d_a, d_b)) - 1.0)
    r_lin = abs(_tr_with(x, sigma_mat) - level)
    return r_op, r_pt, r_lin


def tempered_negativity(rho: QuasiState, cfg: SolverConfig | None = None,
                        initial_witness: BipartiteOperator | None = None
                        ) -> TemperedResult:
    """Tempered negativity of rho (sigma = rho in the cross definition).

    Bisects on t = tr(X rho) with Dykstra feasibility over the affine slice
    {tr(X rho) = t}, the spectral ball {||X||_inf <= t} and the PT spectral
    ball {||X^Tb||_inf <= 1}. Quasi-state input is accepted but flagged
    experimental (the bracket floor drops to 0 for those).
    """
    cfg = cfg or SolverConfig()
    d_a, d_b = rho.d_a, rho.d_b
    rho_mat = np.ascontiguousarray(rho.matrix)
    n = rho.op.side
    eye = np.eye(n, dtype=np.complex128)
    experimental = not rho.is_state

    hi = float(log_negativity(rho).trace_norm_pt)
    if hi <= 1.0 + PPT_BRACKET_TOL:
        # degenerate bracket: PPT input, the answer is forced
        return TemperedResult(
            n_tau=1.0, witness=BipartiteOperator(d_a, d_b, eye),
            feasibility_residuals=(0.0, 0.0, 0.0), iterations=0,
            converged=True, experimental=experimental, t_history=(1.0,),
        )

    history = []
    lo = 0.0 if experimental else 1.0
    best_x = eye.copy()
    best_val = 1.0  # the identity witness is feasible for any trace-one rho
    if best_val > lo:
        lo = best_val
        history.append(lo)
    start_x, start_val = _sign_witness(rho_mat, d_a, d_b)
    if start_val > lo:
        lo = start_val
        best_x = start_x
        history.append(lo)
    if initial_witness is not None:
        x0 = np.ascontiguousarray(initial_witness.matrix)
        r_op, r_pt, _ = _witness_residuals(x0, rho_mat, rho_mat, d_a, d_b, 0.0)
        val = _tr_with(x0, rho_mat)
        if r_op <= WITNESS_TOL and r_pt <= WITNESS_TOL and val > lo:
            lo = val
            best_x = x0
            history.append(lo)

    total_iters = 0
    steps = 0
    while hi - lo > cfg.bisect_tol and steps < cfg.bisect_steps:
        t = 0.5 * (lo + hi)
        x, feasible, its = kernels.dykstra_diag(
            best_x, rho_mat, d_a, d_b, t,
            cfg.max_iters, cfg.residual_tol, cfg.check_every, cfg.stall_checks,
        )
        total_iters += its
        if feasible:
            lo = t
            best_x = x
            history.append(lo)
        else:
            hi = t
        steps += 1
    converged = (hi - lo) <= cfg.bisect_tol

    # pin the witness onto the reported affine slice exactly
    val = _tr_with(best_x, rho_mat)
    if val > 0:
        best_x = best_x * (lo / val)
    res = _witness_residuals(best_x, rho_mat, rho_mat, d_a, d_b, lo)
    return TemperedResult(
        n_tau=float(lo), witness=BipartiteOperator(d_a, d_b, _herm(best_x)),
        feasibility_residuals=res, iterations=total_iters,
        converged=converged, experimental=experimental,
        t_history=tuple(history),
    )


def tempered_negativity_cross(sigma: QuasiState, rho: QuasiState,
                              cfg: SolverConfig | None = None,
                              initial_witness: BipartiteOperator | None = None
                              ) -> TemperedResult:
    """Tempered negativity between sigma and rho: sup tr(X sigma) with the
    witness constraints tied to rho.

    Same bisection, with the objective decoupled from the constraints: the
    probe slices {tr(X sigma) = s} and the norm bound couples to rho through
    a lifted epigraph variable u = tr(X rho).
    """
    if (sigma.d_a, sigma.d_b) != (rho.d_a, rho.d_b):
        raise DimensionMismatch(
            f"{(sigma.d_a, sigma.d_b)} vs {(rho.d_a, rho.d_b)}"
        )
    cfg = cfg or SolverConfig()
    d_a, d_b = rho.d_a, rho.d_b
    rho_mat = np.ascontiguousarray(rho.matrix)
    sigma_mat = np.ascontiguousarray(sigma.matrix)
    n = rho.op.side
    eye = np.eye(n, dtype=np.complex128)
    experimental = not (rho.is_state and sigma.is_state)

    hi = float(log_negativity(sigma).trace_norm_pt)
    lo = 1.0  # identity witness: tr(sigma) = 1
    best_x = eye.copy()
    history = [lo]
    if initial_witness is not None:
        x0 = np.ascontiguousarray(initial_witness.matrix)
        r_op, r_pt, _ = _witness_residuals(x0, rho_mat, sigma_mat, d_a, d_b, 0.0)
        val = _tr_with(x0, sigma_mat)
        if r_op <= WITNESS_TOL and r_pt <= WITNESS_TOL and val > lo:
            lo = val
            best_x = x0
            history.append(lo)
    if hi <= lo + PPT_BRACKET_TOL:
        best_u = _tr_with(best_x, rho_mat)
        res = _witness_residuals(best_x, rho_mat, sigma_mat, d_a, d_b, lo)
        return TemperedResult(
            n_tau=float(lo), witness=BipartiteOperator(d_a, d_b, _herm(best_x)),
            feasibility_residuals=res, iterations=0, converged=True,
            experimental=experimental, t_history=tuple(history),
        )

    best_u = _tr_with(best_x, rho_mat)
    total_iters = 0
    steps = 0
    while hi - lo > cfg.bisect_tol and steps < cfg.bisect_steps:
        s_level = 0.5 * (lo + hi)
        x, feasible, its = kernels.dykstra_cross(
            best_x, best_u, sigma_mat, rho_mat, d_a, d_b, s_level,
            cfg.max_iters, cfg.residual_tol, cfg.check_every, cfg.stall_checks,
        )
        total_iters += its
        if feasible:
            lo = s_level
            best_x = x
            best_u = _tr_with(x, rho_mat)
            history.append(lo)
        else:
            hi = s_level
        steps += 1
    converged = (hi - lo) <= cfg.bisect_tol

    val = _tr_with(best_x, sigma_mat)
    if val > 0:
        best_x = best_x * (lo / val)  # scaling preserves the norm coupling
    res = _witness_residuals(best_x, rho_mat, sigma_mat, d_a, d_b, lo)
    return TemperedResult(
        n_tau=float(lo), witness=BipartiteOperator(d_a, d_b, _herm(best_x)),
        feasibility_residuals=res, iterations=total_iters,
        converged=converged, experimental=experimental,
        t_history=tuple(history),
    )


@dataclass(frozen=True)
class PropertyCheck:
    holds: bool
    worst_margin: float
    trials: int
    inconclusive: int


@dataclass(frozen=True)
class PropertyReport:
    """Randomized verification of the three tempered-negativity properties:
    (a) trace-norm cap, (b) perturbation lower bound, (c) tensor-power
    supermultiplicativity at the square."""
    bound_by_trace_norm: PropertyCheck
    perturbation_bound: PropertyCheck
    tensor_supermultiplicative: PropertyCheck

    def all_hold(self) -> bool:
        return (self.bound_by_trace_norm.holds
                and self.perturbation_bound.holds
                and self.tensor_supermultiplicative.holds)


def verify_tempered_properties(rho: QuasiState, trials: int, seed: int,
                            cfg: SolverConfig | None = None,
                            tol: float = 1e-4) -> PropertyReport:
    """Check the three properties on randomized instances around rho.

    Kept to side <= 9 so the tensor square in the third property stays
    tractable. Trials whose solve does not converge count as inconclusive
    and are excluded from the margins.
    """
    if rho.op.side > 9:
        raise DimensionCapExceeded(
            f"side {rho.op.side} > 9; tensor square would be too large"
        )
    cfg = cfg or SolverConfig()
    d_a, d_b = rho.d_a, rho.d_b

    diag = tempered_negativity(rho, cfg)

    # (a) trace-norm cap on the cross value
    margins_a = []
    inconclusive_a = 0
    for i in range(trials):
        sig = random_state(d_a, d_b, seed + 1000 + i)
        res = tempered_negativity_cross(sig, rho, cfg)
        if not res.converged:
            inconclusive_a += 1
            continue
        cap = float(log_negativity(sig).trace_norm_pt)
        margins_a.append(cap - res.n_tau)

    # (b) perturbation lower bound
    margins_b = []
    inconclusive_b = 0
    for i in range(trials):
        delta = 0.05 + 0.25 * (i / max(trials - 1, 1))
        tau = random_state(d_a, d_b, seed + 2000 + i)
        sig_m = (1 - delta) * rho.matrix + delta * tau.matrix
        sig = QuasiState(BipartiteOperator(d_a, d_b, sig_m))
        eps = trace_norm(BipartiteOperator(d_a, d_b, sig.matrix - rho.matrix))
        if eps >= 1.0:
            continue
        res = tempered_negativity_cross(sig, rho, cfg,
                                        initial_witness=diag.witness)
        if not res.converged or not diag.converged:
            inconclusive_b += 1
            continue
        margins_b.append(res.n_tau - (1 - eps) * diag.n_tau)

    # (c) tensor-square supermultiplicativity
    margins_c = []
    inconclusive_c = 0
    rho2 = QuasiState(tensor_power(rho.op, 2))
    witness2 = tensor_power(diag.witness, 2)
    res2 = tempered_negativity(rho2, cfg, initial_witness=witness2)
    if not (res2.converged and diag.converged):
        inconclusive_c += 1
    else:
        margins_c.append(res2.n_tau - diag.n_tau ** 2)

    def check(margins, inconclusive, n_trials):
        if not margins:
            return PropertyCheck(holds=inconclusive == 0, worst_margin=float("nan"),
                                 trials=n_trials, inconclusive=inconclusive)
        worst = float(min(margins))
        return PropertyCheck(holds=worst >= -tol, worst_margin=worst,
                             trials=n_trials, inconclusive=inconclusive)

    return PropertyReport(
        bound_by_trace_norm=check(margins_a, inconclusive_a, trials),
        perturbation_bound=check(margins_b, inconclusive_b, trials),
        tensor_supermultiplicative=check(margins_c, inconclusive_c, 1),
    )
