"""Fixed-step time evolution of the driven qutrit, closed and open.

Both integrators use the classic 4th-order scheme on the uniform grid of the
drive config, sampling the Hamiltonian analytically at the substep midpoints.
No renormalization is applied during integration: norm (or trace) drift is a
diagnostic, and drift beyond 1e-6 raises an instability error.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .drive import DriveConfig, hamiltonian_grid, mixing_angle
from .errors import IntegrationInstabilityError, PositivityWarning
from .majorana import (
    J_STACK,
    SQRT2,
    MajoranaConstellation,
    QutritState,
    angular_distance,
    concurrence,
    stars_of,
)

INSTABILITY_THRESHOLD = 1e-6
POSITIVITY_TOLERANCE = 1e-6


@dataclass(frozen=True)
class DecoherenceRates:
    """Relaxation and pure-dephasing rates (1/s) of the three-level system.

    gamma10 / gamma21 are the downward relaxation rates of |1> and |2>;
    gphi* are pure dephasing rates on the corresponding coherences.
    """

    gamma10: float = 0.0
    gamma21: float = 0.0
    gphi10: float = 0.0
    gphi21: float = 0.0
    gphi20: float = 0.0

    def __post_init__(self) -> None:
        for name in ("gamma10", "gamma21", "gphi10", "gphi21", "gphi20"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def is_zero(self) -> bool:
        return not any(
            (self.gamma10, self.gamma21, self.gphi10, self.gphi21, self.gphi20)
        )

    def dephasing_matrix(self) -> np.ndarray:
        """Symmetric coherence-decay rates gamma_jk (zero diagonal)."""
        g10 = 0.5 * self.gamma10 + self.gphi10
        g20 = 0.5 * self.gamma21 + self.gphi20
        g21 = 0.5 * (self.gamma10 + self.gamma21) + self.gphi21
        return np.array([[0.0, g10, g20], [g10, 0.0, g21], [g20, g21, 0.0]])


@dataclass(frozen=True)
class DensityMatrix:
    """3x3 Hermitian, unit-trace, positive density matrix."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (3, 3):
            raise ValueError("density matrix must be 3x3")
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise ValueError("density matrix not Hermitian within 1e-10")
        if abs(np.trace(m).real - 1.0) > 1e-8:
            raise ValueError("density matrix trace differs from 1 beyond 1e-8")
        if np.linalg.eigvalsh(m).min() < -1e-9:
            raise ValueError("density matrix has an eigenvalue below -1e-9")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pure(cls, state: QutritState) -> "DensityMatrix":
        v = state.vector
        return cls(np.outer(v, v.conj()))

    @property
    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


@dataclass(eq=False)
class TrajectoryRecord:
    """Time series of a single evolution plus per-step derived metrics.

    ``kind`` is 'pure' or 'lindblad'.  For pure runs ``states`` holds the
    state vectors and ``stars``/``eta``/``concurrence`` the continuity-paired
    constellation data; for open runs ``rhos`` holds the density matrices and
    the star-related fields are None (see ``mixedrep`` for the multi-sphere
    decomposition).
    """

    kind: str
    cfg: DriveConfig
    times: np.ndarray
    populations: np.ndarray
    theta: np.ndarray
    jvec: np.ndarray
    fid_dark: np.ndarray
    infid_bright: np.ndarray
    drift: np.ndarray
    clipped_cd_samples: int
    states: np.ndarray | None = None
    rhos: np.ndarray | None = None
    stars: np.ndarray | None = None
    eta: np.ndarray | None = None
    concurrence: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.times)

    def metrics_at(self, step: int) -> dict:
        """One metric row; star fields are None for open-system records."""
        row = {
            "time": float(self.times[step]),
            "p0": float(self.populations[step, 0]),
            "p1": float(self.populations[step, 1]),
            "p2": float(self.populations[step, 2]),
            "theta_mix": float(self.theta[step]),
            "jx": float(self.jvec[step, 0]),
            "jy": float(self.jvec[step, 1]),
            "jz": float(self.jvec[step, 2]),
            "fid_dark": float(self.fid_dark[step]),
            "infid_bright": float(self.infid_bright[step]),
            "eta": None,
            "concurrence": None,
            "stars": None,
        }
        if self.stars is not None:
            row["eta"] = float(self.eta[step])
            row["concurrence"] = float(self.concurrence[step])
            row["stars"] = self.stars[step].copy()
        return row


def pair_stars(
    previous: MajoranaConstellation, current: MajoranaConstellation
) -> MajoranaConstellation:
    """Order current's stars to minimize total angular motion since previous.

    Ties keep the existing order, so repeated pairing of identical
    constellations is the identity.
    """
    keep = angular_distance(previous.s1, current.s1) + angular_distance(
        previous.s2, current.s2
    )
    swap = angular_distance(previous.s1, current.s2) + angular_distance(
        previous.s2, current.s1
    )
    if swap < keep:
        return MajoranaConstellation(current.s2, current.s1)
    return current


# ---------------------------------------------------------------------------
# integrators


def _integrate_schrodinger(h: np.ndarray, psi0: np.ndarray, dt: float) -> np.ndarray:
    n = (h.shape[0] - 1) // 2
    out = np.empty((n + 1, 3), dtype=complex)
    out[0] = psi0
    psi = psi0
    half = 0.5 * dt
    for k in range(n):
        h0 = h[2 * k]
        hm = h[2 * k + 1]
        h1 = h[2 * k + 2]
        k1 = -1j * (h0 @ psi)
        k2 = -1j * (hm @ (psi + half * k1))
        k3 = -1j * (hm @ (psi + half * k2))
        k4 = -1j * (h1 @ (psi + dt * k3))
        psi = psi + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        out[k + 1] = psi
    return out


def _integrate_lindblad(
    h: np.ndarray, rho0: np.ndarray, dt: float, rates: DecoherenceRates
) -> np.ndarray:
    gamma = rates.dephasing_matrix()
    # population flow of the relaxation ladder |2> -> |1> -> |0>
    flow_from_1 = np.diag([rates.gamma10, -rates.gamma10, 0.0])
    flow_from_2 = np.diag([0.0, rates.gamma21, -rates.gamma21])

    def rhs(hmat: np.ndarray, rho: np.ndarray) -> np.ndarray:
        d = -1j * (hmat @ rho - rho @ hmat)
        d = d - gamma * rho  # off-diagonal decay (gamma has zero diagonal)
        d = d + rho[1, 1].real * flow_from_1 + rho[2, 2].real * flow_from_2
        return d

    n = (h.shape[0] - 1) // 2
    out = np.empty((n + 1, 3, 3), dtype=complex)
    out[0] = rho0
    rho = rho0
    half = 0.5 * dt
    for k in range(n):
        h0 = h[2 * k]
        hm = h[2 * k + 1]
        h1 = h[2 * k + 2]
        k1 = rhs(h0, rho)
        k2 = rhs(hm, rho + half * k1)
        k3 = rhs(hm, rho + half * k2)
        k4 = rhs(h1, rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        out[k + 1] = rho
    return out


# ---------------------------------------------------------------------------
# metric extraction


def _dark_bright_frames(theta: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    c, s = np.cos(theta), np.sin(theta)
    zeros = np.zeros_like(theta)
    dark = np.stack([c, zeros, -s], axis=1)
    n_plus = np.stack([s / SQRT2, np.full_like(theta, 1.0 / SQRT2), c / SQRT2], axis=1)
    n_minus = np.stack([s / SQRT2, np.full_like(theta, -1.0 / SQRT2), c / SQRT2], axis=1)
    return dark, n_plus, n_minus


def _paired_star_track(states: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = states.shape[0]
    stars = np.empty((n, 2, 3))
    eta = np.empty(n)
    conc = np.empty(n)
    prev: MajoranaConstellation | None = None
    for i in range(n):
        con = stars_of(QutritState.from_vector(states[i]))
        if prev is not None:
            con = pair_stars(prev, con)
        stars[i, 0] = con.s1.cart
        stars[i, 1] = con.s2.cart
        eta[i] = con.eta
        conc[i] = concurrence(con)
        prev = con
    return stars, eta, conc


def evolve_pure(cfg: DriveConfig, psi0: QutritState) -> TrajectoryRecord:
    """Integrate i d|psi>/dt = H(t)|psi> over the config grid.

    Raises IntegrationInstabilityError when the norm drifts by more than
    1e-6, which signals a too-coarse grid for the sampled couplings.
    """
    grid = hamiltonian_grid(cfg)
    if grid.clipped_cd_samples:
        warnings.warn(
            f"auxiliary coupling clipped at zero on {grid.clipped_cd_samples} samples",
            stacklevel=2,
        )
    states = _integrate_schrodinger(grid.values, psi0.vector, cfg.dt)
    norms = np.sqrt(np.sum(np.abs(states) ** 2, axis=1))
    drift = np.abs(norms - 1.0)
    if drift.max() > INSTABILITY_THRESHOLD:
        raise IntegrationInstabilityError(
            f"norm drift {drift.max():.3e} exceeds {INSTABILITY_THRESHOLD:.0e}; "
            "increase n_steps"
        )

    times = cfg.times()
    theta, _ = mixing_angle(cfg, times)
    dark, n_plus, n_minus = _dark_bright_frames(theta)
    populations = np.abs(states) ** 2
    fid_dark = np.abs(np.sum(dark.conj() * states, axis=1)) ** 2
    infid = (
        np.abs(np.sum(n_plus.conj() * states, axis=1)) ** 2
        + np.abs(np.sum(n_minus.conj() * states, axis=1)) ** 2
    )
    jvec = np.einsum("ti,kij,tj->tk", states.conj(), J_STACK, states).real
    stars, eta, conc = _paired_star_track(states)
    return TrajectoryRecord(
        kind="pure",
        cfg=cfg,
        times=times,
        populations=populations,
        theta=np.asarray(theta),
        jvec=jvec,
        fid_dark=fid_dark,
        infid_bright=infid,
        drift=drift,
        clipped_cd_samples=grid.clipped_cd_samples,
        states=states,
        stars=stars,
        eta=eta,
        concurrence=conc,
    )


def evolve_lindblad(
    cfg: DriveConfig, rates: DecoherenceRates, rho0: DensityMatrix
) -> TrajectoryRecord:
    """Integrate the Lindblad master equation over the config grid.

    The dissipator is relaxation |2> -> |1> -> |0> plus pure dephasing of
    each coherence; the trace is conserved to rounding.  A warning is issued
    if any step's smallest eigenvalue falls below -1e-6.
    """
    grid = hamiltonian_grid(cfg)
    rhos = _integrate_lindblad(grid.values, rho0.matrix, cfg.dt, rates)
    traces = np.einsum("tii->t", rhos).real
    drift = np.abs(traces - 1.0)
    if drift.max() > INSTABILITY_THRESHOLD:
        raise IntegrationInstabilityError(
            f"trace drift {drift.max():.3e} exceeds {INSTABILITY_THRESHOLD:.0e}; "
            "increase n_steps"
        )
    min_eig = float(np.linalg.eigvalsh(rhos).min())
    if min_eig < -POSITIVITY_TOLERANCE:
        warnings.warn(
            f"density matrix eigenvalue reached {min_eig:.3e}",
            PositivityWarning,
            stacklevel=2,
        )

    times = cfg.times()
    theta, _ = mixing_angle(cfg, times)
    dark, n_plus, n_minus = _dark_bright_frames(theta)
    populations = np.einsum("tii->ti", rhos).real
    fid_dark = np.einsum("ti,tij,tj->t", dark.conj(), rhos, dark).real
    infid = (
        np.einsum("ti,tij,tj->t", n_plus.conj(), rhos, n_plus).real
        + np.einsum("ti,tij,tj->t", n_minus.conj(), rhos, n_minus).real
    )
    jvec = np.einsum("kij,tji->tk", J_STACK, rhos).real
    return TrajectoryRecord(
        kind="lindblad",
        cfg=cfg,
        times=times,
        populations=populations,
        theta=np.asarray(theta),
        jvec=jvec,
        fid_dark=fid_dark,
        infid_bright=infid,
        drift=drift,
        clipped_cd_samples=grid.clipped_cd_samples,
        rhos=rhos,
    )


def max_pairing_jump(record: TrajectoryRecord) -> float:
    """Largest per-step angular motion of either paired star (run diagnostic)."""
    if record.stars is None:
        raise ValueError("pairing diagnostic needs a pure-state record")
    dots = np.einsum("tsk,tsk->ts", record.stars[1:], record.stars[:-1])
    return float(np.arccos(np.clip(dots, -1.0, 1.0)).max())
