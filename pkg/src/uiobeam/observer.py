"""Online execution of a designed observer: one-step-ahead position
prediction, unknown-input reconstruction through the generic pseudo-inverse,
performance output, and empirical monitors for the certified bounds.

The input estimate at step k needs the k+1 prediction, so the runtime emits
W^_k with one-step latency. A runtime instance is single-owner and stepped
sequentially; separate instances (per-level comparison runs) need no
coordination.
"""

from dataclasses import dataclass

import numpy as np

from .dynamics import Measurement, simulate_truth
from .errors import ShapeError
from .linalg import pinv_full_col_rank

# Steps discarded before the steady-state bound monitors start recording;
# ~5x the time constant of the slowest reference gain.
DEFAULT_TRANSIENT_CUTOFF = 50


@dataclass(frozen=True)
class ObserverState:
    """Predicted stacked positions (m) at time index k."""

    xhat: np.ndarray
    k: int

    def __post_init__(self):
        object.__setattr__(self, "xhat", np.asarray(self.xhat, float))
        if not np.all(np.isfinite(self.xhat)):
            raise ShapeError("observer state contains non-finite entries")


def predict(obs, gains, y):
    """Prediction step X^_{k+1} = Q X^_k + L Y_k; the time index advances."""
    if isinstance(y, Measurement):
        if y.k != obs.k:
            raise ShapeError(f"measurement index {y.k} != observer index {obs.k}")
        y = y.y
    y = np.asarray(y, float)
    if y.shape != obs.xhat.shape:
        raise ShapeError(f"measurement shape {y.shape} != state shape {obs.xhat.shape}")
    return ObserverState(xhat=gains.q @ obs.xhat + gains.l @ y, k=obs.k + 1)


@dataclass(frozen=True)
class InputEstimator:
    """Reconstruction operator for the unknown input: G = [B_T; 0] stacked
    over the state and output residuals, with its Moore-Penrose pseudo-inverse
    precomputed through the generic normal-equation path."""

    g: np.ndarray
    g_pinv: np.ndarray

    @classmethod
    def from_b_t(cls, b_t):
        b_t = np.asarray(b_t, float)
        if b_t.ndim == 1:
            b_t = np.diag(b_t)
        n = b_t.shape[0]
        g = np.vstack([b_t, np.zeros((n, n))])
        return cls(g=g, g_pinv=pinv_full_col_rank(g))


def estimate_input(est, xhat_next, xhat, y):
    """Unknown-input estimate W^_k = pinv(G) [X^_{k+1} - X^_k; Y_k - X^_k]
    (m/s). For G = [B_T; 0] this equals B_T^{-1} (X^_{k+1} - X^_k), reproduced
    here through the generic pseudo-inverse."""
    xhat_next = np.asarray(xhat_next, float)
    xhat = np.asarray(xhat, float)
    y = np.asarray(y, float)
    if not xhat_next.shape == xhat.shape == y.shape:
        raise ShapeError("prediction/measurement vectors must share one shape")
    return est.g_pinv @ np.concatenate([xhat_next - xhat, y - xhat])


@dataclass(frozen=True)
class PerformanceOutput:
    """Tracking error E = X^ - X (m) and performance output Z^ = H E."""

    e: np.ndarray
    z: np.ndarray


def performance_output(gains, xhat, x_true):
    e = np.asarray(xhat, float) - np.asarray(x_true, float)
    return PerformanceOutput(e=e, z=gains.h @ e)


class BoundMonitor:
    """Running check of the certified steady-state bounds.

    Tracks gamma_w = sup_k ||W_k|| from ground truth and, from
    transient_cutoff onward, the worst ||Z^_k|| and ||W^_k - W_k||. The
    certified inequalities are ||Z^_k|| <= gamma * gamma_w and
    ||W^_k - W_k|| <= 3 * gamma * gamma_w.
    """

    def __init__(self, gamma, transient_cutoff=DEFAULT_TRANSIENT_CUTOFF):
        self.gamma = float(gamma)
        self.transient_cutoff = int(transient_cutoff)
        self.gamma_w = 0.0
        self.worst_state_err = 0.0
        self.worst_input_err = 0.0
        self._last_k = None

    def update(self, perf, w_true, w_hat, k):
        """Fold in one step; k must increase across calls."""
        if self._last_k is not None and k <= self._last_k:
            raise ShapeError(f"monitor requires increasing k, got {k} after {self._last_k}")
        self._last_k = k
        self.gamma_w = max(self.gamma_w, float(np.linalg.norm(w_true)))
        if k >= self.transient_cutoff:
            self.worst_state_err = max(self.worst_state_err, float(np.linalg.norm(perf.z)))
            if w_hat is not None:
                err = float(np.linalg.norm(np.asarray(w_hat) - np.asarray(w_true)))
                self.worst_input_err = max(self.worst_input_err, err)
        return self

    @property
    def state_bound(self):
        return self.gamma * self.gamma_w

    @property
    def input_bound(self):
        return 3.0 * self.gamma * self.gamma_w

    @property
    def state_ok(self):
        return self.worst_state_err <= self.state_bound

    @property
    def input_ok(self):
        return self.worst_input_err <= self.input_bound


def monitor_bounds(mon, perf, w_true, w_hat, k):
    """Functional alias for BoundMonitor.update."""
    return mon.update(perf, w_true, w_hat, k)


def track(scenario, model, gains, horizon, gamma=np.nan, init="measurement",
          transient_cutoff=DEFAULT_TRANSIENT_CUTOFF):
    """Run truth + observer for ``horizon`` steps and collect everything the
    harness needs.

    gamma is the certified performance level feeding the bound monitor.
    init: 'measurement' starts the observer at Y_0, 'zero' at the origin.
    Returns a dict with X/XHAT (horizon+1, 2N), Y/W/WHAT (horizon, 2N),
    E/Z (horizon+1, 2N) and the filled BoundMonitor.
    """
    xs, ws, ys = simulate_truth(scenario, model, horizon)
    n2 = xs.shape[1]
    xhat = np.empty_like(xs)
    if init == "measurement":
        xhat[0] = ys[0]
    elif init == "zero":
        xhat[0] = np.zeros(n2)
    else:
        raise ShapeError(f"unknown observer init {init!r}")
    what = np.empty_like(ws)
    est = InputEstimator.from_b_t(scenario.b_t)
    mon = BoundMonitor(gamma=gamma, transient_cutoff=transient_cutoff)
    for k in range(horizon):
        state = ObserverState(xhat=xhat[k], k=k)
        xhat[k + 1] = predict(state, gains, Measurement(y=ys[k], k=k)).xhat
        what[k] = estimate_input(est, xhat[k + 1], xhat[k], ys[k])
        perf = performance_output(gains, xhat[k], xs[k])
        mon.update(perf, ws[k], what[k], k)
    errs = xhat - xs
    zs = errs @ gains.h.T
    return {
        "X": xs, "Y": ys, "W": ws, "XHAT": xhat, "WHAT": what,
        "E": errs, "Z": zs, "monitor": mon,
    }
