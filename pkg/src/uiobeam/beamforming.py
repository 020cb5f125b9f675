"""Uniform-linear-array steering, zero-forcing precoding, angular position
recovery, line-of-sight channel application and link quality evaluation.

Conventions: steering entry m is exp(j*(2pi/lambda)*d*m*sin(theta)). The
precoder F = A*(theta^) (A^T(theta^) A*(theta^))^-1 zero-forces against the
transposed steering rows, so the effective transmit-side channel row at the
true angle is a^T(theta) (a conjugation absorbed into the steering
definition); perfect angle estimates then give exactly zero inter-stream
interference. Spectral efficiency is log2(1 + SINR) per stream with matched
unit-norm combining b(theta^)/sqrt(N_U).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError, DegenerateGeometryError, ShapeError
from .linalg import solve_hermitian

SPEED_OF_LIGHT = 299_792_458.0
# Minimum pairwise |sin(theta_i) - sin(theta_j)| for a strict zero-forcing solve.
MIN_SIN_GAP = 1e-3
# Diagonal loading (relative to M_CE) used by the fallback when angles collide.
FALLBACK_RIDGE = 1e-4
# Amplitude floor before conversion to dB so exact nulls stay finite in output.
PATTERN_FLOOR = 1e-16


@dataclass(frozen=True)
class ArrayConfig:
    """Array geometry: M_CE antennas on the central UAV, N_U per served UAV,
    spacing in metres (default half wavelength)."""

    m_ce: int
    n_u: int
    wavelength: float
    spacing: float = None
    carrier_hz: float = None
    bandwidth_hz: float = None

    def __post_init__(self):
        if self.m_ce < 1 or self.n_u < 1:
            raise ShapeError("antenna counts must be positive")
        if self.n_u > self.m_ce:
            raise ShapeError(f"N_U={self.n_u} must not exceed M_CE={self.m_ce}")
        if not self.wavelength > 0:
            raise ShapeError("wavelength must be positive")
        if self.spacing is None:
            object.__setattr__(self, "spacing", 0.5 * self.wavelength)
        if not self.spacing > 0:
            raise ShapeError("spacing must be positive")

    @classmethod
    def at_carrier(cls, m_ce, n_u, carrier_hz, spacing=None, bandwidth_hz=None):
        lam = SPEED_OF_LIGHT / carrier_hz
        return cls(m_ce=m_ce, n_u=n_u, wavelength=lam, spacing=spacing,
                   carrier_hz=carrier_hz, bandwidth_hz=bandwidth_hz)


def steering_vector(cfg, theta, count=None):
    """ULA steering vector toward azimuth theta with ``count`` elements
    (defaults to M_CE): entry m = exp(j*(2pi/lambda)*d*m*sin(theta))."""
    if count is None:
        count = cfg.m_ce
    if count < 1:
        raise ShapeError("element count must be positive")
    phase = (2.0 * np.pi / cfg.wavelength) * cfg.spacing * np.sin(theta)
    return np.exp(1j * phase * np.arange(count))


def steering_matrix(cfg, thetas, count=None):
    """Stacked steering vectors, one column per angle."""
    thetas = np.atleast_1d(np.asarray(thetas, float))
    return np.column_stack([steering_vector(cfg, t, count) for t in thetas])


@dataclass(frozen=True)
class BeamformerMatrix:
    """Zero-forcing precoder F with the steering matrix A and the angle
    estimates it was built from."""

    f: np.ndarray
    a: np.ndarray
    theta: np.ndarray


def beamformer(cfg, thetas, min_sin_gap=MIN_SIN_GAP, ridge=0.0):
    """Zero-forcing precoder F = A*(A^T A*)^{-1} at the angle estimates.

    Raises ConditioningError (naming the colliding pair) when two angles are
    closer than ``min_sin_gap`` in sine. With ridge > 0 the gap check is
    skipped and the Gram matrix is diagonally loaded by ridge*M_CE, trading
    exact nulls for a bounded-norm precoder near collisions.
    """
    thetas = np.atleast_1d(np.asarray(thetas, float))
    sines = np.sin(thetas)
    if ridge == 0.0:
        for i in range(thetas.size):
            for j in range(i + 1, thetas.size):
                gap = abs(sines[i] - sines[j])
                if gap < min_sin_gap:
                    raise ConditioningError(
                        f"steering angles {i} and {j} collide: "
                        f"|sin gap| = {gap:.3e} < {min_sin_gap:.0e}"
                    )
    a = steering_matrix(cfg, thetas, cfg.m_ce)
    gram = a.T @ a.conj()
    if ridge > 0.0:
        gram = gram + ridge * cfg.m_ce * np.eye(thetas.size)
    f = a.conj() @ solve_hermitian(gram, np.eye(thetas.size, dtype=complex))
    return BeamformerMatrix(f=f, a=a, theta=thetas)


def safe_beamformer(cfg, thetas, min_sin_gap=MIN_SIN_GAP, ridge=FALLBACK_RIDGE):
    """Strict zero-forcing when well conditioned, diagonally-loaded fallback
    at angle collisions (the orbit geometry crosses equal sines twice per
    revolution per UAV pair, so long runs need this)."""
    try:
        return beamformer(cfg, thetas, min_sin_gap=min_sin_gap)
    except ConditioningError:
        return beamformer(cfg, thetas, ridge=ridge)


def angular_position(u, u_p):
    """Azimuth of a UAV at u seen from u_p as arccos((x - x_p)/range), in
    [0, pi]. Cannot distinguish points below the x-axis; see
    signed_angular_position for the quadrant-aware variant."""
    u = np.asarray(u, float)
    u_p = np.asarray(u_p, float)
    delta = u - u_p
    r = float(np.linalg.norm(delta))
    if r < 1e-12:
        raise DegenerateGeometryError("UAV coincides with the central UAV")
    return float(np.arccos(np.clip(delta[0] / r, -1.0, 1.0)))


def signed_angular_position(u, u_p):
    """Quadrant-aware azimuth in (-pi, pi]; round-trips exactly for points
    placed at a known angle."""
    u = np.asarray(u, float)
    u_p = np.asarray(u_p, float)
    delta = u - u_p
    if float(np.linalg.norm(delta)) < 1e-12:
        raise DegenerateGeometryError("UAV coincides with the central UAV")
    return float(np.arctan2(delta[1], delta[0]))


def angles_from_positions(x_stacked, center, signed=True):
    """Per-UAV azimuths from a stacked position vector."""
    positions = np.asarray(x_stacked, float).reshape(-1, 2)
    fn = signed_angular_position if signed else angular_position
    return np.array([fn(p, center) for p in positions])


@dataclass(frozen=True)
class ChannelRealization:
    """Line-of-sight channel snapshot: complex coefficient, true azimuth and
    range per UAV, plus the per-antenna noise power."""

    h: np.ndarray
    sigma2: float
    theta: np.ndarray
    ranges: np.ndarray

    def __post_init__(self):
        if self.sigma2 < 0:
            raise ShapeError("noise power must be non-negative")

    @classmethod
    def line_of_sight(cls, cfg, positions, center, sigma2, phase_mode="range", rng=None):
        """Free-space coefficient h_i = (lambda / (4 pi r_i)) e^{j phi_i};
        phase_mode 'range' uses the propagation phase -2 pi r / lambda
        (deterministic), 'random' draws phi from a seeded generator."""
        positions = np.asarray(positions, float).reshape(-1, 2)
        deltas = positions - np.asarray(center, float)
        ranges = np.linalg.norm(deltas, axis=1)
        if np.any(ranges < 1e-12):
            raise DegenerateGeometryError("UAV coincides with the central UAV")
        theta = np.arctan2(deltas[:, 1], deltas[:, 0])
        if phase_mode == "range":
            phases = -2.0 * np.pi * ranges / cfg.wavelength
        elif phase_mode == "random":
            if rng is None:
                raise ShapeError("phase_mode='random' needs a generator")
            phases = rng.uniform(0.0, 2.0 * np.pi, size=ranges.size)
        else:
            raise ShapeError(f"unknown phase_mode {phase_mode!r}")
        h = (cfg.wavelength / (4.0 * np.pi * ranges)) * np.exp(1j * phases)
        return cls(h=h, sigma2=float(sigma2), theta=theta, ranges=ranges)


def default_noise_power(cfg, total_power, n_streams, ref_range, target_snr_db):
    """Noise power giving the stated per-stream SNR at ref_range under ideal
    zero-forcing with well-separated angles."""
    h_ref = cfg.wavelength / (4.0 * np.pi * ref_range)
    return total_power * h_ref**2 / (n_streams * 10.0 ** (target_snr_db / 10.0))


def apply_channel(cfg, chan, f, s_hat, rng):
    """Received vectors r_i (one row per UAV, N_U entries each):

        r_i = (1/sqrt(M_CE N_U)) h_i b(theta_i) (a^T(theta_i) F s^) + nu_i

    with nu_i circular complex Gaussian, variance sigma2 per entry, drawn
    from ``rng``."""
    f = np.asarray(f, complex)
    s_hat = np.asarray(s_hat, complex)
    n = chan.h.size
    if f.shape != (cfg.m_ce, n) or s_hat.shape != (n,):
        raise ShapeError(
            f"F shape {f.shape} / symbol shape {s_hat.shape} inconsistent with "
            f"{n} UAVs and M_CE={cfg.m_ce}"
        )
    scale = 1.0 / np.sqrt(cfg.m_ce * cfg.n_u)
    tx = f @ s_hat
    out = np.empty((n, cfg.n_u), dtype=complex)
    for i in range(n):
        row = steering_vector(cfg, chan.theta[i], cfg.m_ce)
        b = steering_vector(cfg, chan.theta[i], cfg.n_u)
        noise = np.sqrt(chan.sigma2 / 2.0) * (
            rng.standard_normal(cfg.n_u) + 1j * rng.standard_normal(cfg.n_u)
        )
        out[i] = scale * chan.h[i] * b * (row @ tx) + noise
    return out


def equal_power_allocation(bf, total_power):
    """Uniform per-stream power p with p * sum_j ||f_j||^2 = total_power."""
    norms = np.sum(np.abs(bf.f) ** 2)
    return np.full(bf.f.shape[1], total_power / norms)


def _gain_matrix(cfg, chan, bf, power):
    """Post-combining link gains g_ij from stream j into UAV i's matched
    combiner b(theta^_i)/sqrt(N_U)."""
    power = np.asarray(power, float)
    n = chan.h.size
    if bf.f.shape[1] != n or power.shape != (n,):
        raise ShapeError("beamformer/power dimensions inconsistent with the channel")
    a_true = steering_matrix(cfg, chan.theta, cfg.m_ce)
    t = a_true.T @ bf.f
    b_hat = steering_matrix(cfg, bf.theta, cfg.n_u)
    b_true = steering_matrix(cfg, chan.theta, cfg.n_u)
    combine = np.sum(b_hat.conj() * b_true, axis=0) / np.sqrt(cfg.n_u)
    scale = 1.0 / np.sqrt(cfg.m_ce * cfg.n_u)
    return scale * chan.h[:, None] * combine[:, None] * t * np.sqrt(power)[None, :]


@dataclass(frozen=True)
class LinkReport:
    """Per-UAV link quality: SINR (linear and dB), spectral efficiency in
    bit/s/Hz, and the full post-combining gain matrix g_ij."""

    sinr: np.ndarray
    sinr_db: np.ndarray
    se: np.ndarray
    g: np.ndarray


def link_report(cfg, chan, bf, power):
    """Analytic SINR_i = |g_ii|^2 / (sum_{j != i} |g_ij|^2 + sigma2) and
    SE_i = log2(1 + SINR_i)."""
    g = _gain_matrix(cfg, chan, bf, power)
    sig = np.abs(np.diag(g)) ** 2
    interference = np.sum(np.abs(g) ** 2, axis=1) - sig
    sinr = sig / (interference + chan.sigma2)
    with np.errstate(divide="ignore"):
        sinr_db = 10.0 * np.log10(np.maximum(sinr, 1e-300))
    return LinkReport(sinr=sinr, sinr_db=sinr_db, se=np.log2(1.0 + sinr), g=g)


def draw_link_samples(n_uavs, sigma2, rng, n_draws):
    """Shared random draws for the empirical SINR estimate: unit-modulus
    symbols and post-combining noise samples of variance sigma2."""
    symbols = np.exp(2j * np.pi * rng.random((n_draws, n_uavs)))
    noise = np.sqrt(sigma2 / 2.0) * (
        rng.standard_normal((n_draws, n_uavs)) + 1j * rng.standard_normal((n_draws, n_uavs))
    )
    return symbols, noise


def empirical_link_se(cfg, chan, bf, power, symbols, noise):
    """Spectral efficiency with the interference-plus-noise power estimated
    from explicit draws (paired comparisons reuse one draw for all modes):
    the residual after removing the known in-stream term is averaged over
    draws."""
    g = _gain_matrix(cfg, chan, bf, power)
    y = symbols @ g.T + noise
    resid = y - symbols * np.diag(g)[None, :]
    var = np.mean(np.abs(resid) ** 2, axis=0)
    sinr = np.abs(np.diag(g)) ** 2 / np.maximum(var, 1e-300)
    return np.log2(1.0 + sinr)


def beam_pattern(cfg, f, theta_grid):
    """Per-beam transmit pattern |a^T(theta) f_i| over the grid, normalized to
    each beam's own maximum, in dB (amplitudes floored at PATTERN_FLOOR so
    exact zero-forcing nulls stay finite)."""
    theta_grid = np.asarray(theta_grid, float)
    if np.any(np.abs(theta_grid) >= np.pi / 2):
        raise ShapeError("pattern grid must lie within (-pi/2, pi/2)")
    f = np.asarray(f, complex)
    a_grid = steering_matrix(cfg, theta_grid, cfg.m_ce)
    response = np.abs(a_grid.T @ f)
    peaks = np.max(response, axis=0)
    normalized = np.maximum(response / peaks[None, :], PATTERN_FLOOR)
    return 20.0 * np.log10(normalized)


def half_power_width(theta_grid, gain_db):
    """Main-lobe width (rad) between the -3 dB crossings around the peak of a
    single beam's pattern, linearly interpolated between grid points."""
    theta_grid = np.asarray(theta_grid, float)
    gain_db = np.asarray(gain_db, float)
    peak = int(np.argmax(gain_db))
    level = -3.0102999566398120  # 10*log10(2)

    def crossing(direction):
        i = peak
        while 0 <= i + direction < gain_db.size and gain_db[i + direction] > level:
            i += direction
        if not 0 <= i + direction < gain_db.size:
            raise ShapeError("pattern grid does not bracket the -3 dB points")
        g0, g1 = gain_db[i], gain_db[i + direction]
        frac = (level - g0) / (g1 - g0)
        return theta_grid[i] + frac * (theta_grid[i + direction] - theta_grid[i])

    return abs(crossing(+1) - crossing(-1))


class AngleProvider:
    """Steering-angle source per step for the three operating modes.

    'truth' returns the true angles; 'uio' returns angles derived from the
    observer's predicted positions; 'echo_baseline' mimics echo-based sensing
    that loses its update inside blockage windows, holding the last angles
    seen before the window (the initial angles if blocked from the start).
    Windows are [t_start, t_end) in seconds; t = k * dt.
    """

    MODES = ("uio", "echo_baseline", "truth")

    def __init__(self, mode, blockage_windows=(), dt=1.0):
        if mode not in self.MODES:
            raise ShapeError(f"unknown angle provider mode {mode!r}")
        self.mode = mode
        self.windows = [(float(t0), float(t1)) for t0, t1 in blockage_windows]
        self.dt = float(dt)
        self._held = None

    def blocked(self, k):
        t = k * self.dt
        return any(t0 <= t < t1 for t0, t1 in self.windows)

    def angles(self, k, true_angles, predicted_angles=None):
        true_angles = np.asarray(true_angles, float)
        if self.mode == "truth":
            return true_angles
        if self.mode == "uio":
            if predicted_angles is None:
                raise ShapeError("uio mode needs predicted angles")
            return np.asarray(predicted_angles, float)
        if self.blocked(k):
            if self._held is None:
                self._held = true_angles.copy()
            return self._held
        self._held = true_angles.copy()
        return true_angles
