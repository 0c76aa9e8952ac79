"""Exact manipulation rates, reversibility products, and the inequality
chain linking the tempered bound, the asymptotic costs, and log-negativity.
"""

import math
from dataclasses import dataclass, field

from .errors import DimensionCapExceeded, ZeroNegativityTarget
from .negativity import (log_negativity, one_shot_exact_cost,
                         one_shot_exact_distillable)
from .states import QuasiState
from .tempered import SolverConfig, TemperedResult, tempered_negativity

ZERO_EN_TOL = 1e-12
DEFAULT_TABLE_DEPTH = 12


@dataclass(frozen=True)
class OneShotRow:
    n: int
    distill_d: int
    cost_d: int
    distill_rate: float
    cost_rate: float


def one_shot_table(s: QuasiState, depth: int = DEFAULT_TABLE_DEPTH):
    rows = []
    for n in range(1, depth + 1):
        log_d, d = one_shot_exact_distillable(s, n)
        log_c, c = one_shot_exact_cost(s, n)
        rows.append(OneShotRow(n=n, distill_d=d, cost_d=c,
                               distill_rate=log_d / n, cost_rate=log_c / n))
    return tuple(rows)


@dataclass(frozen=True)
class RateReport:
    en_rho: float
    en_sigma: float
    ratio_forward: float
    ratio_backward: float
    reversibility_product: float
    one_shot_table: tuple = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "en_rho": self.en_rho,
            "en_sigma": self.en_sigma,
            "ratio_forward": self.ratio_forward,
            "ratio_backward": self.ratio_backward,
            "reversibility_product": self.reversibility_product,
            "one_shot_table": [
                {
                    "n": r.n,
                    "distill_d": _json_int(r.distill_d),
                    "cost_d": _json_int(r.cost_d),
                    "distill_rate": r.distill_rate,
                    "cost_rate": r.cost_rate,
                }
                for r in self.one_shot_table
            ],
        }


def _json_int(d: int):
    # JSON consumers cannot be trusted with integers beyond 64 bits
    return d if d < 2 ** 63 else str(d)


def conversion_ratio(rho: QuasiState, sigma: QuasiState,
                     depth: int = DEFAULT_TABLE_DEPTH) -> RateReport:
    """Asymptotic exact conversion ratios in both directions.

    The forward ratio is E_N(rho)/E_N(sigma); a zero-negativity denominator
    in either direction makes that ratio unbounded and raises
    ZeroNegativityTarget instead of inventing a number.
    """
    en_r = log_negativity(rho).log_negativity
    en_s = log_negativity(sigma).log_negativity
    if en_s <= ZERO_EN_TOL:
        raise ZeroNegativityTarget(
            f"E_N(sigma)={en_s!r} is zero; forward ratio is unbounded"
        )
    if en_r <= ZERO_EN_TOL:
        raise ZeroNegativityTarget(
            f"E_N(rho)={en_r!r} is zero; backward ratio is unbounded"
        )
    forward = en_r / en_s
    backward = en_s / en_r
    return RateReport(
        en_rho=en_r, en_sigma=en_s,
        ratio_forward=forward, ratio_backward=backward,
        reversibility_product=forward * backward,
        one_shot_table=one_shot_table(rho, depth),
    )


def exact_rates(rho: QuasiState) -> tuple[float, float]:
    """Exact distillable entanglement and exact cost; both collapse to E_N.

    Returned as a pair so callers see the identity explicitly.
    """
    en = log_negativity(rho).log_negativity
    return en, en


@dataclass(frozen=True)
class ChainReport:
    """Numerically checkable links of the rate inequality chain.

    The asymptotic vanishing-error quantities are not computable objects;
    they are reported as intervals (cost in [e_n_tau, e_n], distillable
    pinned to [e_n, e_n]), never as point estimates.
    """
    e_n_tau: float
    e_n: float
    n_tau: float
    cost_interval: tuple[float, float]
    distill_interval: tuple[float, float]
    one_shot_distill_rates: tuple
    one_shot_cost_rates: tuple
    chain_holds: bool
    status: str  # "ok" or "inconclusive"
    margins: dict
    tempered: TemperedResult | None = field(repr=False, default=None)

    def to_dict(self) -> dict:
        return {
            "e_n_tau": self.e_n_tau,
            "e_n": self.e_n,
            "n_tau": self.n_tau,
            "cost_interval": list(self.cost_interval),
            "distill_interval": list(self.distill_interval),
            "one_shot_distill_rates": list(self.one_shot_distill_rates),
            "one_shot_cost_rates": list(self.one_shot_cost_rates),
            "chain_holds": self.chain_holds,
            "status": self.status,
            "margins": dict(self.margins),
        }


def chain_report(rho: QuasiState, cfg: SolverConfig | None = None,
                 depth: int = DEFAULT_TABLE_DEPTH,
                 tempered_tol: float = 1e-6) -> ChainReport:
    """Evaluate every checkable link of the rate chain for one state."""
    if rho.op.side > 9:
        raise DimensionCapExceeded(
            f"side {rho.op.side} > 9 is beyond the tempered solver preset"
        )
    cfg = cfg or SolverConfig()
    temp = tempered_negativity(rho, cfg)
    e_n = log_negativity(rho).log_negativity
    e_n_tau = math.log2(temp.n_tau)
    table = one_shot_table(rho, depth)
    distill_rates = tuple(r.distill_rate for r in table)
    cost_rates = tuple(r.cost_rate for r in table)

    margins = {
        "tempered_le_en": e_n - e_n_tau,
        "distill_below_en": min(e_n - r for r in distill_rates),
        "cost_above_en": min(r - e_n for r in cost_rates),
        "one_shot_gap": min(
            1.0 / row.n - max(abs(row.distill_rate - e_n), abs(row.cost_rate - e_n))
            for row in table
        ),
    }
    chain_holds = (
        margins["tempered_le_en"] >= -tempered_tol
        and margins["distill_below_en"] >= -1e-9
        and margins["cost_above_en"] >= -1e-9
        and margins["one_shot_gap"] >= -1e-12
    )
    status = "ok" if temp.converged else "inconclusive"
    return ChainReport(
        e_n_tau=e_n_tau, e_n=e_n, n_tau=temp.n_tau,
        cost_interval=(e_n_tau, e_n), distill_interval=(e_n, e_n),
        one_shot_distill_rates=distill_rates, one_shot_cost_rates=cost_rates,
        chain_holds=chain_holds, status=status, margins=margins,
        tempered=temp,
    )
