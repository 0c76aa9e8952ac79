"""Logarithmic negativity and the one-shot exact quantities it determines.

Logarithms are base two throughout.
"""

import math
import warnings
from dataclasses import dataclass

from .errors import NegativeNegativity
from .operators import partial_transpose, trace_norm
from .states import QuasiState

SNAP_TOL = 1e-12
# beyond this exponent neighbouring log2(k) values are closer than the snap
# band, so snapping is meaningless
SNAP_MAX_EXPONENT = 39.0


@dataclass(frozen=True)
class NegativityValue:
    """log_negativity in bits and the trace norm it is the log of."""
    log_negativity: float
    trace_norm_pt: float


def log_negativity(s: QuasiState) -> NegativityValue:
    """E_N(s) = log2 of the trace norm of the partial transpose."""
    tn = trace_norm(partial_transpose(s.op))
    return NegativityValue(math.log2(tn), tn)


def _snap_pow2(x: float):
    """Integer k with |x - log2 k| <= SNAP_TOL, or None."""
    if x > SNAP_MAX_EXPONENT:
        return None
    k = round(2.0 ** x)
    if k >= 1 and abs(x - math.log2(k)) <= SNAP_TOL:
        return k
    return None


def _pow2_floor(x: float) -> int:
    k = _snap_pow2(x)
    if k is not None:
        return k
    if x < 0:
        return 0
    if x <= 62:
        return math.floor(2.0 ** x)
    # large exponents: exact integer arithmetic on the 53-bit mantissa
    i = math.floor(x)
    scaled = (2.0 ** (x - i)) * 2.0 ** 52
    return math.floor(scaled) << (int(i) - 52)


def _pow2_ceil(x: float) -> int:
    k = _snap_pow2(x)
    if k is not None:
        return k
    if x < 0:
        return 1
    if x <= 62:
        return math.ceil(2.0 ** x)
    i = math.floor(x)
    scaled = (2.0 ** (x - i)) * 2.0 ** 52
    return math.ceil(scaled) << (int(i) - 52)


def one_shot_exact_distillable(s: QuasiState, n: int) -> tuple[float, int]:
    """Largest Schmidt rank d reachable from n copies, with log2 d.

    d = floor(2^(n*E_N)) clamped to >= 1; values within 1e-12 of an exact
    log2-integer snap to that integer, so E_N = log2 3 at n = 2 yields 9.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    en = log_negativity(s).log_negativity
    if en < -SNAP_TOL:
        warnings.warn(
            "negative log-negativity input; clamping distillable rank to 1",
            stacklevel=2,
        )
    d = max(_pow2_floor(n * en), 1)
    return math.log2(d), d


def one_shot_exact_cost(s: QuasiState, n: int) -> tuple[float, int]:
    """Smallest Schmidt rank d that can prepare n copies, with log2 d."""
    if n < 1:
        raise ValueError("n must be >= 1")
    en = log_negativity(s).log_negativity
    return _one_shot_cost_from_en(en, n)


def _one_shot_cost_from_en(en: float, n: int) -> tuple[float, int]:
    if en < -SNAP_TOL:
        raise NegativeNegativity(
            f"cost is ill-posed for E_N = {en!r} < 0"
        )
    d = max(_pow2_ceil(n * en), 1)
    return math.log2(d), d
