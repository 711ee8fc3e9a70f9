"""Regularity and dimension analysis of the interpolation function.

Predicts the Holder exponent from the model constants, measures cell
oscillations on refined grids, turns them into box counts with the
per-cell vertical-stack covering, and regresses an empirical box
dimension against the analytic bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import CapacityError, HypothesisError, PreconditionError
from .gasket import locate
from .grids import product_values
from .model import FifModel

#: Hausdorff dimension of the product of two gaskets, 2 log3/log2
PRODUCT_DIMENSION = 2.0 * math.log(3.0) / math.log(2.0)

#: largest number of cell-pairs an oscillation table may hold
CELL_BUDGET = 10**7

#: default exponent loss reported in the borderline scaling case
DEFAULT_MU = 0.01


@dataclass(frozen=True)
class HolderReport:
    """Predicted Holder regularity and the constants feeding it.

    Coordinates are not rescaled to diameter one; exponents and slopes are
    scale invariant, only the (unreported) multiplicative constants shift.
    """

    a: float
    alpha_sup: float
    delta: float
    s_h: float
    s_alpha: float
    s: float
    case_id: int
    exponent: float
    mu: float  # only meaningful in case 2
    lam: float  # only meaningful in case 3
    k_h: float
    k_alpha: float


def holder_predict(model: FifModel, mu: float = DEFAULT_MU) -> HolderReport:
    """Case analysis of the regularity of f.

    Case 1 (alpha_sup < 2^-N): exponent s; case 2 (equality): s - mu for a
    small default mu; case 3 (alpha_sup > 2^-N): exponent
    s - 1 + ln(alpha_sup)/ln(a) < 1.
    """
    a = model.a
    delta = model.alpha_sup / a
    s = min(model.s_h, model.s_alpha)
    lam = float("nan")
    if model.alpha_sup < a:
        case_id, exponent = 1, s
    elif model.alpha_sup == a:
        case_id, exponent = 2, s - mu
    else:
        case_id = 3
        lam = s - 1.0 + math.log(model.alpha_sup) / math.log(a)
        exponent = lam
    return HolderReport(
        a=a,
        alpha_sup=model.alpha_sup,
        delta=delta,
        s_h=model.s_h,
        s_alpha=model.s_alpha,
        s=s,
        case_id=case_id,
        exponent=exponent,
        mu=mu if case_id == 2 else float("nan"),
        lam=lam,
        k_h=model.k_h,
        k_alpha=model.k_alpha,
    )


class OscillationTable:
    """Sampled oscillation of f over every cell-pair of one level.

    values[i, j] is the max-min of f over the sampled points of the
    cell-pair (word i, word j), words in lexicographic order.  Sampling is
    a lower bound on the true oscillation; the bias is one-sided.
    """

    def __init__(self, level: int, values: np.ndarray, samples_per_cell: int):
        self.level = level
        self.values = values
        self.samples_per_cell = samples_per_cell

    @staticmethod
    def word_index(w: str) -> int:
        i = 0
        for ch in w:
            i = 3 * i + int(ch) - 1
        return i

    def r(self, omega: str, eta: str) -> float:
        return float(self.values[self.word_index(omega), self.word_index(eta)])

    def max(self) -> float:
        return float(self.values.max())

    def total(self) -> float:
        return float(self.values.sum())


def oscillation(
    model: FifModel, n: int, samples_per_cell: int = 9
) -> OscillationTable:
    """Oscillation table at level n from exact grid values.

    The nine corner-pair vertices of each cell-pair are always included;
    asking for more samples refines each cell dyadically and uses all
    vertices of the refinement, again evaluated exactly, so deeper tables
    are monotone against coarser ones.
    """
    if n < 1:
        raise PreconditionError("level must be >= 1")
    if samples_per_cell < 9:
        raise PreconditionError("samples_per_cell must be at least 9")
    if 9**n > CELL_BUDGET:
        raise CapacityError(f"9^{n} cell-pairs exceed the budget of {CELL_BUDGET}")
    r = 0
    while (3 * (3**r + 1) // 2) ** 2 < samples_per_cell:
        r += 1
    nn = model.n
    depth = nn * -(-(n + r) // nn)
    fg1, fg2, f = product_values(model, depth)
    s1 = fg1.lift(fg1.cells[n + r].reshape(3**n, -1), n + r, depth)
    s2 = fg2.lift(fg2.cells[n + r].reshape(3**n, -1), n + r, depth)
    cells = 3**n
    k1 = s1.shape[1]
    values = np.empty((cells, cells))
    s2flat = s2.reshape(-1)
    chunk = max(1, int(4e6 // (cells * k1 * k1)))
    for lo in range(0, cells, chunk):
        hi = min(lo + chunk, cells)
        sub = f[np.ix_(s1[lo:hi].reshape(-1), s2flat)]
        sub = sub.reshape(hi - lo, k1, cells, k1)
        values[lo:hi] = sub.max(axis=(1, 3)) - sub.min(axis=(1, 3))
    return OscillationTable(n, values, k1 * k1)


@dataclass(frozen=True)
class BoxCountRecord:
    level: int
    delta: float
    count: int


def _common_side(model: FifModel) -> float:
    return max(model.gasket1.side, model.gasket2.side)


def box_count(model: FifModel, n: int, table: OscillationTable) -> BoxCountRecord:
    """Number of delta-boxes covering the graph, delta = 2^-n * side.

    One vertical stack of boxes per cell-pair: 1 + ceil(R / delta) boxes,
    matching the covering that drives the upper dimension bound.
    """
    if table.level != n:
        raise PreconditionError(
            f"table level {table.level} does not match requested level {n}"
        )
    side = _common_side(model)
    delta = 2.0**-n * side
    stacks = 1 + np.ceil(table.values * (2.0**n / side)).astype(np.int64)
    return BoxCountRecord(level=n, delta=delta, count=int(stacks.sum()))


@dataclass(frozen=True)
class DimensionReport:
    lower: float
    upper: float
    slope: float
    std_error: float
    levels: tuple


def estimate_box_dimension(records) -> DimensionReport:
    """Least-squares slope of log(count) against n log 2.

    Unweighted regression over the provided levels; the analytic bound
    fields are left unset (see dimension_bounds)."""
    records = list(records)
    if len(records) < 3:
        raise PreconditionError("need at least 3 box-count records")
    if len({rec.level for rec in records}) != len(records):
        raise PreconditionError("box-count records must have distinct levels")
    x = np.array([rec.level * math.log(2.0) for rec in records])
    y = np.array([math.log(rec.count) for rec in records])
    fit = stats.linregress(x, y)
    return DimensionReport(
        lower=float("nan"),
        upper=float("nan"),
        slope=float(fit.slope),
        std_error=float(fit.stderr),
        levels=tuple(records),
    )


def dimension_bounds(model: FifModel) -> tuple:
    """(lower, upper) analytic bounds on the graph dimension.

    Valid only when alpha_sup < 2^-N; the lower bound is the dimension of
    the product domain itself, the upper bound 1 - s plus that."""
    if model.alpha_sup >= model.a:
        raise HypothesisError(
            f"dimension bounds need alpha_sup < 2^-N "
            f"({model.alpha_sup} >= {model.a})"
        )
    s = min(model.s_h, model.s_alpha)
    return PRODUCT_DIMENSION, 1.0 - s + PRODUCT_DIMENSION


@dataclass(frozen=True)
class HolderFit:
    exponent: float
    std_error: float
    degenerate: bool
    levels: tuple


def holder_fit(
    model: FifModel, n_min: int, n_max: int, samples_per_cell: int = 9
) -> HolderFit:
    """Empirical Holder exponent from the decay of the worst cell
    oscillation: slope of log(max R) against log(2^-n).

    Sampling under-estimates oscillation, so a fit above the predicted
    exponent is acceptable (the prediction is an upper bound on
    oscillation decay, checked one-sidedly)."""
    if n_min >= n_max or n_min < 1:
        raise PreconditionError("need 1 <= n_min < n_max")
    levels = range(n_min, n_max + 1)
    maxima = [oscillation(model, n, samples_per_cell).max() for n in levels]
    if all(m == 0.0 for m in maxima):
        return HolderFit(float("inf"), 0.0, True, tuple(levels))
    x = np.array([-n * math.log(2.0) for n in levels])
    y = np.log(np.array(maxima))
    fit = stats.linregress(x, y)
    return HolderFit(float(fit.slope), float(fit.stderr), False, tuple(levels))


def box_count_cloud(model: FifModel, samples, n: int) -> int:
    """Independent box count from a chaos-game point cloud.

    Bins samples by their containing cell-pair (cell-adapted horizontal
    boxes, since gasket cells are not axis aligned) and applies the same
    vertical-stack rule to the empirical value range per bin.  Cross-check
    oracle only; under-counts slightly when a bin is under-sampled."""
    side = _common_side(model)
    bins = {}
    g1, g2 = model.gasket1, model.gasket2
    for sm in samples:
        key = (locate(g1, sm.t, n), locate(g2, sm.s, n))
        lohi = bins.get(key)
        if lohi is None:
            bins[key] = [sm.value, sm.value]
        else:
            if sm.value < lohi[0]:
                lohi[0] = sm.value
            elif sm.value > lohi[1]:
                lohi[1] = sm.value
    factor = 2.0**n / side
    return sum(1 + math.ceil((hi - lo) * factor) for lo, hi in bins.values())
