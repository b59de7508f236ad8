"""Water-filling power allocation over subcarriers for fixed IRS coefficients.

p_n = (1/c_u - 1/c_n)^+ with the cut-off CNR c_u chosen so that the powers
sum to the budget.  The water level is found exactly by the sorted
active-set method; no bisection tolerance enters downstream tests.
"""

from dataclasses import dataclass
import numpy as np

from .model import PowerAllocation

# CNRs below this are treated as exactly zero to avoid overflow in 1/c_n.
_CNR_FLOOR = 1e-300


@dataclass(frozen=True)
class WaterfillResult:
    p: PowerAllocation
    cutoff: float           # water level 1/c_u (inf CNR cut-off if degenerate)
    active_set: np.ndarray  # indices with p_n > 0
    degenerate: bool = False

    @property
    def cutoff_cnr(self) -> float:
        """The cut-off CNR c_u itself."""
        return np.inf if self.degenerate else 1.0 / self.cutoff


def waterfill(c: np.ndarray, total_power: float) -> WaterfillResult:
    """Water-fill ``total_power`` over channels with CNRs ``c``.

    Returns the optimal powers, the water level and the active set.  An
    all-zero CNR vector yields the degenerate all-zero allocation.
    """
    c = np.asarray(c, dtype=np.float64)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("c must be a nonempty vector")
    if not np.all(np.isfinite(c)):
        raise ValueError("c must be finite")
    if np.min(c) < 0:
        raise ValueError("CNRs must be nonnegative")
    if total_power <= 0:
        raise ValueError("total_power must be > 0")

    usable = c > _CNR_FLOOR
    if not np.any(usable):
        p = np.zeros_like(c)
        return WaterfillResult(p=PowerAllocation(p), cutoff=0.0,
                               active_set=np.empty(0, dtype=np.intp),
                               degenerate=True)

    idx = np.flatnonzero(usable)
    order = idx[np.argsort(-c[idx], kind="stable")]
    inv = 1.0 / c[order]
    # Water level if the k best channels are active:
    #   level_k = (P + sum_{i<k} 1/c_i) / k.
    # Valid iff level_k > 1/c_{k-1}; the largest such k is optimal.
    levels = (total_power + np.cumsum(inv)) / np.arange(1, order.size + 1)
    k = int(np.max(np.flatnonzero(levels > inv))) + 1
    level = levels[k - 1]

    p = np.zeros_like(c)
    active = order[:k]
    # p_i = level - inv_i, rearranged to avoid cancellation when the
    # inverse CNRs dwarf the budget: sum the inv differences first, then
    # add the (possibly tiny) budget.
    s = inv[:k].sum()
    p_active = (total_power + (s - k * inv[:k])) / k
    # exact budget up to one rounding, regardless of the inv magnitudes
    p[active] = p_active * (total_power / p_active.sum())
    return WaterfillResult(p=PowerAllocation(p), cutoff=float(level),
                           active_set=np.sort(active))
