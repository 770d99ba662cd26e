"""Pulse envelopes, mixing angle and Hamiltonian assembly for two-tone driving.

All couplings are angular frequencies in rad/s (hbar = 1 absorbed), times in
seconds.  The two Gaussian tones address the 0-1 and 1-2 transitions; the
auxiliary 0-2 coupling is available either as an ideal direct term or as its
two-photon realization in a doubly-rotating frame at detuning ``delta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .majorana import (
    JX,
    JY,
    JZ,
    SQRT2,
    MajoranaStar,
    QutritState,
    angular_distance,
    dark_state,
    stars_of,
)

MODES = ("stirap", "twophoton", "sastirap", "cd_ideal")

# Dimensionless slopes of the dynamical phase corrections: the level shifts
# produced by the two-photon drive integrate to these multiples of the mixing
# angle swept since t_start (epsilon_nk / hbar = k_nk * dTheta/dt).
STARK_SLOPES = {"01": 2.0 * SQRT2, "12": -5.0 / SQRT2, "02": -1.0 / SQRT2}

# Unitary to the frame where the two-tone coupling becomes a rotating
# magnetic field: rows/columns ordered on the computational basis.
R_FRAME = np.array(
    [[1, 0, 1], [0, SQRT2, 0], [1j, 0, -1j]], dtype=complex
) / SQRT2


@dataclass(frozen=True)
class DriveConfig:
    """Pinned parameters of one drive protocol.

    Parameters
    ----------
    sigma : float
        Common standard deviation of both Gaussian envelopes (s).
    ts : float
        Delay of the 1-2 pulse peak relative to the 0-1 peak (s); negative
        values give the counterintuitive ordering.
    amp01, amp12 : float
        Peak Rabi couplings (rad/s).
    t_start, t_end : float
        Integration window (s).
    n_steps : int
        Number of uniform integration intervals (>= 2).
    mode : str
        One of 'stirap', 'twophoton', 'sastirap', 'cd_ideal'.
    delta : float
        Two-photon frame detuning (rad/s); required positive for the
        'twophoton' and 'sastirap' modes.
    phi01, phi12, phi02 : float
        Static drive phases (rad).  The default gauge phi01 = phi12 = 0,
        phi02 = pi/2 makes the auxiliary coupling purely imaginary and the
        two-photon phase (phi02 - pi)/2 = -pi/4.
    stark_correction : bool
        Apply the dynamical phase corrections compensating the level shifts
        of the two-photon drive (only meaningful with a two-photon term).
    """

    sigma: float
    ts: float
    amp01: float
    amp12: float
    t_start: float
    t_end: float
    n_steps: int
    mode: str = "stirap"
    delta: float = 0.0
    phi01: float = 0.0
    phi12: float = 0.0
    phi02: float = field(default=math.pi / 2)
    stark_correction: bool = False

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if not self.sigma > 0.0:
            raise ConfigError("sigma must be positive")
        if self.n_steps < 2:
            raise ConfigError("n_steps must be at least 2")
        if not self.t_start < self.t_end:
            raise ConfigError("t_start must precede t_end")
        if self.amp01 < 0.0 or self.amp12 < 0.0:
            raise ConfigError("peak couplings must be non-negative")
        if self.mode in ("twophoton", "sastirap") and not self.delta > 0.0:
            raise ConfigError(f"mode {self.mode!r} requires a positive detuning delta")

    @property
    def dt(self) -> float:
        return (self.t_end - self.t_start) / self.n_steps

    @property
    def phi_2ph(self) -> float:
        return (self.phi02 - math.pi) / 2.0

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_steps + 1)

    def half_step_times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, 2 * self.n_steps + 1)


@dataclass(frozen=True)
class HamiltonianSample:
    """One 3x3 Hermitian Hamiltonian sample (rad/s) with its time tag."""

    matrix: np.ndarray
    t: float

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        assert self.hermiticity_residual < 1e-12

    @property
    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))


@dataclass(frozen=True)
class HamiltonianGrid:
    """Hamiltonian samples on the half-step lattice of a config's time grid."""

    times: np.ndarray
    values: np.ndarray  # (2*n_steps + 1, 3, 3)
    clipped_cd_samples: int = 0


# ---------------------------------------------------------------------------
# envelopes and mixing angle


def envelopes(cfg: DriveConfig, t):
    """Instantaneous Rabi couplings (Omega01, Omega12) at time(s) t."""
    tt = np.asarray(t, dtype=float)
    om01 = cfg.amp01 * np.exp(-(tt**2) / (2.0 * cfg.sigma**2))
    om12 = cfg.amp12 * np.exp(-((tt - cfg.ts) ** 2) / (2.0 * cfg.sigma**2))
    if np.ndim(t) == 0:
        return float(om01), float(om12)
    return om01, om12


def mixing_angle(cfg: DriveConfig, t):
    """Mixing angle Theta = atan2(Omega01, Omega12) in [0, pi/2] and its rate.

    The rate uses the analytic Gaussian derivatives,
    dTheta/dt = (dOmega01 Omega12 - Omega01 dOmega12) / (Omega01^2 + Omega12^2),
    and is defined as 0 where both envelopes vanish (e.g. zero amplitudes or
    underflowed tails).
    """
    tt = np.asarray(t, dtype=float)
    om01, om12 = envelopes(cfg, tt)
    theta = np.arctan2(om01, om12)
    d01 = -(tt / cfg.sigma**2) * om01
    d12 = -((tt - cfg.ts) / cfg.sigma**2) * om12
    den = om01 * om01 + om12 * om12
    safe = np.where(den > 0.0, den, 1.0)
    theta_dot = np.where(den > 0.0, (d01 * om12 - om01 * d12) / safe, 0.0)
    if np.ndim(t) == 0:
        return float(theta), float(theta_dot)
    return theta, theta_dot


def adiabaticity_ratio(cfg: DriveConfig, t):
    """Local adiabaticity scalar a(t) = dTheta/dt / sqrt(Omega01^2 + Omega12^2)."""
    om01, om12 = envelopes(cfg, t)
    _, theta_dot = mixing_angle(cfg, t)
    omega = np.sqrt(np.asarray(om01) ** 2 + np.asarray(om12) ** 2)
    out = np.where(omega > 0.0, theta_dot / np.where(omega > 0.0, omega, 1.0), np.inf)
    if np.ndim(t) == 0:
        return float(out)
    return out


def dark_population_rate(cfg: DriveConfig, t):
    """Rate dp0/dt = -dp2/dt = -dTheta/dt sin(2 Theta) for ideal dark following."""
    theta, theta_dot = mixing_angle(cfg, t)
    out = -np.asarray(theta_dot) * np.sin(2.0 * np.asarray(theta))
    if np.ndim(t) == 0:
        return float(out)
    return out


def two_photon_rabi(cfg: DriveConfig, t):
    """Effective coupling |Omega_2ph| = sqrt(sqrt(2) delta Omega02), Omega02 floored at 0."""
    _, theta_dot = mixing_angle(cfg, t)
    om_cd = np.clip(2.0 * np.asarray(theta_dot), 0.0, None)
    out = np.sqrt(SQRT2 * cfg.delta * om_cd)
    if np.ndim(t) == 0:
        return float(out)
    return out


def stark_phases(cfg: DriveConfig, t):
    """Dynamically corrected phases (phi01, phi12, phi02) at time(s) t.

    Integrating the second-order level shifts of the two-photon drive gives
    phase corrections proportional to the mixing angle swept since t_start:
    the three slopes are +2 sqrt(2), -5/sqrt(2) and -1/sqrt(2).
    """
    theta, _ = mixing_angle(cfg, t)
    theta0, _ = mixing_angle(cfg, cfg.t_start)
    swept = np.asarray(theta) - theta0
    p01 = cfg.phi01 + STARK_SLOPES["01"] * swept
    p12 = cfg.phi12 + STARK_SLOPES["12"] * swept
    p02 = cfg.phi02 + STARK_SLOPES["02"] * swept
    if np.ndim(t) == 0:
        return float(p01), float(p12), float(p02)
    return p01, p12, p02


# ---------------------------------------------------------------------------
# Hamiltonian terms (vectorized over a time array)


def _drive_phases(cfg: DriveConfig, tt: np.ndarray):
    if cfg.stark_correction and cfg.mode in ("twophoton", "sastirap"):
        return stark_phases(cfg, tt)
    shape = np.shape(tt)
    return (
        np.full(shape, cfg.phi01),
        np.full(shape, cfg.phi12),
        np.full(shape, cfg.phi02),
    )


def _term_two_tone(cfg: DriveConfig, tt: np.ndarray, p01, p12) -> np.ndarray:
    om01, om12 = envelopes(cfg, tt)
    h = np.zeros((tt.size, 3, 3), dtype=complex)
    h[:, 0, 1] = 0.5 * om01 * np.exp(1j * p01)
    h[:, 1, 2] = 0.5 * om12 * np.exp(1j * p12)
    return h


def _term_cd_ideal(cfg: DriveConfig, tt: np.ndarray, p02) -> np.ndarray:
    _, theta_dot = mixing_angle(cfg, tt)
    h = np.zeros((tt.size, 3, 3), dtype=complex)
    h[:, 0, 2] = theta_dot * np.exp(1j * p02)  # (1/2) * Omega02 with Omega02 = 2 dTheta/dt
    return h


def _term_two_photon(cfg: DriveConfig, tt: np.ndarray, p02) -> tuple[np.ndarray, int]:
    if not cfg.delta > 0.0:
        raise ConfigError("two-photon term requires a positive detuning delta")
    _, theta_dot = mixing_angle(cfg, tt)
    om_cd = 2.0 * theta_dot
    clipped = int(np.count_nonzero(om_cd < 0.0))
    rabi = np.sqrt(SQRT2 * cfg.delta * np.clip(om_cd, 0.0, None))
    p2ph = (np.asarray(p02) - math.pi) / 2.0
    h = np.zeros((tt.size, 3, 3), dtype=complex)
    h[:, 0, 1] = 0.5 * rabi * np.exp(1j * (p2ph - cfg.delta * tt))
    h[:, 1, 2] = 0.5 * SQRT2 * rabi * np.exp(1j * (p2ph + cfg.delta * tt))
    return h, clipped


def _close_hermitian(h: np.ndarray) -> np.ndarray:
    h[:, 1, 0] = h[:, 0, 1].conj()
    h[:, 2, 1] = h[:, 1, 2].conj()
    h[:, 2, 0] = h[:, 0, 2].conj()
    return h


def _assemble(cfg: DriveConfig, tt: np.ndarray) -> tuple[np.ndarray, int]:
    p01, p12, p02 = _drive_phases(cfg, tt)
    clipped = 0
    if cfg.mode == "stirap":
        h = _term_two_tone(cfg, tt, p01, p12)
    elif cfg.mode == "cd_ideal":
        h = _term_two_tone(cfg, tt, p01, p12) + _term_cd_ideal(cfg, tt, p02)
    elif cfg.mode == "twophoton":
        h, clipped = _term_two_photon(cfg, tt, p02)
    else:  # sastirap
        h2, clipped = _term_two_photon(cfg, tt, p02)
        h = _term_two_tone(cfg, tt, p01, p12) + h2
    return _close_hermitian(h), clipped


def _sample(cfg: DriveConfig, t: float, builder) -> HamiltonianSample:
    tt = np.array([float(t)])
    h = builder(tt)
    return HamiltonianSample(_close_hermitian(h)[0], float(t))


def h_stirap(cfg: DriveConfig, t: float) -> HamiltonianSample:
    """Two-tone coupling (hbar/2)[Om01 e^{i phi01}|0><1| + Om12 e^{i phi12}|1><2|] + h.c."""
    p01, p12, _ = _drive_phases(cfg, np.array([float(t)]))
    return _sample(cfg, t, lambda tt: _term_two_tone(cfg, tt, p01, p12))


def h_cd_ideal(cfg: DriveConfig, t: float) -> HamiltonianSample:
    """Ideal auxiliary coupling (hbar/2) Omega02 e^{i phi02}|0><2| + h.c., Omega02 = 2 dTheta/dt."""
    _, _, p02 = _drive_phases(cfg, np.array([float(t)]))
    return _sample(cfg, t, lambda tt: _term_cd_ideal(cfg, tt, p02))


def h_twophoton(cfg: DriveConfig, t: float) -> HamiltonianSample:
    """Doubly-rotating-frame two-photon drive realizing the auxiliary coupling."""
    _, _, p02 = _drive_phases(cfg, np.array([float(t)]))
    return _sample(cfg, t, lambda tt: _term_two_photon(cfg, tt, p02)[0])


def h_sastirap(cfg: DriveConfig, t: float) -> HamiltonianSample:
    """Sum of the two-tone and two-photon samples at t (phase-corrected if enabled)."""
    tt = np.array([float(t)])
    p01, p12, p02 = _drive_phases(cfg, tt)
    h = _term_two_tone(cfg, tt, p01, p12) + _term_two_photon(cfg, tt, p02)[0]
    return HamiltonianSample(_close_hermitian(h)[0], float(t))


def hamiltonian(cfg: DriveConfig, t: float) -> HamiltonianSample:
    """Mode-dispatched Hamiltonian sample at time t."""
    h, _ = _assemble(cfg, np.array([float(t)]))
    return HamiltonianSample(h[0], float(t))


def hamiltonian_grid(cfg: DriveConfig) -> HamiltonianGrid:
    """Samples on the half-step lattice used by the fixed-step integrator."""
    tt = cfg.half_step_times()
    h, clipped = _assemble(cfg, tt)
    return HamiltonianGrid(times=tt, values=h, clipped_cd_samples=clipped)


# ---------------------------------------------------------------------------
# rotating-frame verification identities


@dataclass(frozen=True)
class RFrameResiduals:
    """Rotating-frame identity residuals at one time.

    Matrix residuals are Frobenius norms relative to the coupling scale
    (an absolute tolerance in rad/s would be meaningless at Omega ~ 1e8/s);
    ``dark_stars`` is an angular distance in radians.
    """

    two_tone: float
    cd: float
    dark_stars: float

    @property
    def max(self) -> float:
        return max(self.two_tone, self.cd, self.dark_stars)


def _relative_residual(got: np.ndarray, want: np.ndarray) -> float:
    scale = max(float(np.linalg.norm(got)), float(np.linalg.norm(want)))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(got - want)) / scale


def r_frame_check(cfg: DriveConfig, t: float) -> RFrameResiduals:
    """Verify the rotating-frame form of the couplings at time t.

    In the R frame the two-tone term is (Omega/2)(sin(T) Jx + cos(T) Jy)
    with Omega = sqrt(Om01^2 + Om12^2), the ideal auxiliary term is
    -(Omega02/2) Jz, and the dark state's stars sit on the equator at
    (+-sin T, +-cos T, 0).  Requires the default gauge.
    """
    if cfg.phi01 != 0.0 or cfg.phi12 != 0.0 or cfg.phi02 != math.pi / 2:
        raise ConfigError("rotating-frame identities assume the default gauge")
    om01, om12 = envelopes(cfg, t)
    theta, theta_dot = mixing_angle(cfg, t)
    omega = math.hypot(om01, om12)

    base = DriveConfig(
        sigma=cfg.sigma,
        ts=cfg.ts,
        amp01=cfg.amp01,
        amp12=cfg.amp12,
        t_start=cfg.t_start,
        t_end=cfg.t_end,
        n_steps=cfg.n_steps,
        mode="stirap",
        phi01=cfg.phi01,
        phi12=cfg.phi12,
        phi02=cfg.phi02,
    )
    h0 = h_stirap(base, t).matrix
    hcd = h_cd_ideal(base, t).matrix
    rot = R_FRAME
    h0_r = rot.conj().T @ h0 @ rot
    hcd_r = rot.conj().T @ hcd @ rot
    target = 0.5 * omega * (math.sin(theta) * JX + math.cos(theta) * JY)
    res_two_tone = _relative_residual(h0_r, target)
    res_cd = _relative_residual(hcd_r, -theta_dot * JZ)  # (Omega02/2) Jz, Omega02 = 2 dTheta/dt

    psi_r = rot.conj().T @ dark_state(theta).vector
    got = stars_of(QutritState.from_vector(psi_r))
    want1 = MajoranaStar.from_cart(np.array([math.sin(theta), math.cos(theta), 0.0]))
    want2 = MajoranaStar.from_cart(np.array([-math.sin(theta), -math.cos(theta), 0.0]))
    keep = angular_distance(got.s1, want1) + angular_distance(got.s2, want2)
    swap = angular_distance(got.s1, want2) + angular_distance(got.s2, want1)
    if swap < keep:
        star_res = max(angular_distance(got.s1, want2), angular_distance(got.s2, want1))
    else:
        star_res = max(angular_distance(got.s1, want1), angular_distance(got.s2, want2))
    return RFrameResiduals(res_two_tone, res_cd, float(star_res))
