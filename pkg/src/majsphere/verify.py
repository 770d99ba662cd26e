"""Self-contained invariant suite behind the ``verify`` CLI subcommand.

Each check recomputes a representation identity or integrates against an
independent oracle and reports pass/fail with its runtime.  ``perturb`` names
a single check whose data is deliberately corrupted; a healthy build must
then report exactly that check as failed (a hook for testing the harness
itself).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import drive, dynamics, majorana, mixedrep, tomography
from .presets import resolve

_PERTURBATION = 1e-5


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    seconds: float
    detail: str


def _haar_state(rng: np.random.Generator) -> majorana.QutritState:
    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    return majorana.QutritState.from_vector(v)


def _random_density(rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    m = g @ g.conj().T
    return m / np.trace(m).real


def _rodrigues(axis: np.ndarray, angle: float) -> np.ndarray:
    k = axis / np.linalg.norm(axis)
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + math.sin(angle) * kx + (1 - math.cos(angle)) * (kx @ kx)


def _spin_rotation(axis: np.ndarray, angle: float) -> np.ndarray:
    k = axis / np.linalg.norm(axis)
    h = k[0] * majorana.JX + k[1] * majorana.JY + k[2] * majorana.JZ
    w, v = np.linalg.eigh(h)
    return v @ np.diag(np.exp(-1j * angle * w)) @ v.conj().T


def _check_round_trip(rng, corrupt):
    worst = 1.0
    for _ in range(2000):
        psi = _haar_state(rng)
        con = majorana.stars_of(psi)
        if corrupt:
            s1 = majorana.MajoranaStar(con.s1.theta + _PERTURBATION, con.s1.phi)
            con = majorana.MajoranaConstellation(s1, con.s2)
        worst = min(worst, psi.fidelity(majorana.state_of(con)))
    return worst > 1 - 1e-9, f"min round-trip fidelity {worst:.3e}"


def _check_rotation_covariance(rng, corrupt):
    worst = 0.0
    worst_state = 0.0
    for _ in range(200):
        psi = _haar_state(rng)
        axis = rng.normal(size=3)
        angle = rng.uniform(0, 2 * math.pi)
        rotated = majorana.QutritState.from_vector(_spin_rotation(axis, angle) @ psi.vector)
        got = majorana.stars_of(rotated)
        rot = _rodrigues(axis, angle + (_PERTURBATION if corrupt else 0.0))
        base = majorana.stars_of(psi)
        want = majorana.MajoranaConstellation(
            majorana.MajoranaStar.from_cart(rot @ base.s1.cart),
            majorana.MajoranaStar.from_cart(rot @ base.s2.cart),
        )
        # state-level covariance holds for every draw
        worst_state = max(worst_state, 1.0 - rotated.fidelity(majorana.state_of(want)))
        # star positions of a near-double root carry sqrt(eps) conditioning,
        # so the positional comparison skips nearly coincident stars
        if base.eta < 1e-4:
            continue
        paired = dynamics.pair_stars(want, got)
        worst = max(
            worst,
            majorana.angular_distance(paired.s1, want.s1),
            majorana.angular_distance(paired.s2, want.s2),
        )
    ok = worst < 1e-8 and worst_state < 1e-9
    return ok, f"max star mismatch {worst:.3e} rad, state infidelity {worst_state:.3e}"


def _check_spin_equivalence(rng, corrupt):
    worst = 0.0
    for _ in range(2000):
        psi = _haar_state(rng)
        op = majorana.spin_average(psi).vec
        geo = majorana.spin_average_geometric(majorana.stars_of(psi)).vec
        if corrupt:
            geo = geo + _PERTURBATION
        worst = max(worst, float(np.max(np.abs(op - geo))))
    return worst < 1e-10, f"max |<J>_geo - <J>_op| {worst:.3e}"


def _check_spin_magnitude(rng, corrupt):
    worst = 0.0
    for _ in range(2000):
        psi = _haar_state(rng)
        con = majorana.stars_of(psi)
        half = 0.5 * con.eta
        expected = 2 * abs(math.cos(half)) / (1 + math.cos(half) ** 2)
        got = majorana.spin_average(psi).norm
        if corrupt:
            got += _PERTURBATION
        worst = max(worst, abs(got - expected))
    return worst < 1e-10, f"max | |<J>| - closed form | {worst:.3e}"


def _check_concurrence_purity(rng, corrupt):
    worst = 0.0
    for _ in range(2000):
        psi = _haar_state(rng)
        con = majorana.stars_of(psi)
        q1, q2, norm = majorana.symmetrized_qubits(con)
        two_qubit = norm * (np.kron(q1, q2) + np.kron(q2, q1))
        rho = np.outer(two_qubit, two_qubit.conj())
        red = np.einsum("abcb->ac", rho.reshape(2, 2, 2, 2))
        purity = np.trace(red @ red).real
        via_purity = math.sqrt(max(2.0 * (1.0 - purity), 0.0))
        closed = majorana.concurrence(con)
        if corrupt:
            closed += _PERTURBATION
        worst = max(worst, abs(via_purity - closed))
    return worst < 1e-10, f"max concurrence mismatch {worst:.3e}"


def _check_dark_star_closed_form(rng, corrupt):
    worst = 0.0
    for theta_mix in np.linspace(0.0, math.pi / 2, 200, endpoint=False):
        x, z = majorana.dark_star_xz(float(theta_mix))
        if corrupt:
            x += _PERTURBATION
        con = majorana.stars_of(majorana.dark_state(float(theta_mix)))
        want = majorana.MajoranaConstellation(
            majorana.MajoranaStar.from_cart(np.array([x, 0.0, z])),
            majorana.MajoranaStar.from_cart(np.array([-x, 0.0, z])),
        )
        paired = dynamics.pair_stars(want, con)
        worst = max(
            worst,
            float(np.max(np.abs(paired.s1.cart - want.s1.cart))),
            float(np.max(np.abs(paired.s2.cart - want.s2.cart))),
        )
    return worst < 1e-10, f"max coordinate deviation {worst:.3e}"


def _check_j_operator_identities(rng, corrupt):
    worst = 0.0
    for _ in range(500):
        psi = _haar_state(rng)
        poly = majorana.to_polynomial(psi)
        for which, mat in majorana.J_MATRICES.items():
            applied = majorana.j_operator_on_polynomial(which, poly)
            w = mat @ psi.vector
            direct = majorana.polynomial_from_amplitudes(w[0], w[1], w[2])
            diff = np.max(np.abs(applied.coefficients - direct.coefficients))
            if corrupt:
                diff += _PERTURBATION
            worst = max(worst, float(diff))
    return worst < 1e-12, f"max coefficient mismatch {worst:.3e}"


def _check_r_frame(rng, corrupt):
    cfg = resolve("stirap-fig3a").drive
    worst = 0.0
    for t in np.linspace(cfg.t_start, cfg.t_end, 50):
        res = drive.r_frame_check(cfg, float(t))
        value = res.max + (_PERTURBATION if corrupt else 0.0)
        worst = max(worst, value)
    return worst < 1e-10, f"max rotating-frame residual {worst:.3e}"


def _check_theta_dot_fd(rng, corrupt):
    cfg = resolve("stirap-fig3a").drive
    h = 1e-12
    worst = 0.0
    for t in np.linspace(cfg.t_start + 2 * h, cfg.t_end - 2 * h, 1000):
        t = float(t)
        _, analytic = drive.mixing_angle(cfg, t)
        tp, _ = drive.mixing_angle(cfg, t + h)
        tm, _ = drive.mixing_angle(cfg, t - h)
        fd = (tp - tm) / (2 * h)
        if corrupt:
            fd *= 1 + _PERTURBATION
        worst = max(worst, abs(fd - analytic) / abs(analytic))
    return worst < 1e-6, f"max relative error {worst:.3e}"


def _check_stark_quadrature(rng, corrupt):
    cfg = resolve("sastirap-fig5").drive
    slopes = drive.STARK_SLOPES

    def rate(label):
        return lambda t: slopes[label] * drive.mixing_angle(cfg, t)[1]

    worst = 0.0
    for t in np.linspace(cfg.t_start, cfg.t_end, 7)[1:]:
        t = float(t)
        closed = drive.stark_phases(cfg, t)
        for idx, label in enumerate(("01", "12", "02")):
            base = (cfg.phi01, cfg.phi12, cfg.phi02)[idx]
            integral, _ = quad(rate(label), cfg.t_start, t, limit=200)
            got = closed[idx] + (_PERTURBATION if corrupt else 0.0)
            worst = max(worst, abs(got - (base + integral)))
    return worst < 1e-8, f"max phase deviation {worst:.3e} rad"


def _check_rabi_pulse(rng, corrupt):
    omega = 2 * math.pi * 20e6
    cfg = drive.DriveConfig(
        sigma=1.0,  # effectively flat envelope over the pulse
        ts=0.0,
        amp01=omega,
        amp12=0.0,
        t_start=0.0,
        t_end=math.pi / omega,
        n_steps=2000,
        mode="stirap",
    )
    record = dynamics.evolve_pure(cfg, majorana.QutritState(1, 0, 0))
    err = abs(record.populations[-1, 1] - 1.0) + (_PERTURBATION if corrupt else 0.0)
    return err < 1e-8, f"pi-pulse transfer error {err:.3e}"


def _check_exponential_decay(rng, corrupt):
    gamma = 2e6
    cfg = drive.DriveConfig(
        sigma=1.0,
        ts=0.0,
        amp01=0.0,
        amp12=0.0,
        t_start=0.0,
        t_end=400e-9,
        n_steps=400,
        mode="stirap",
    )
    rates = dynamics.DecoherenceRates(gamma10=gamma)
    rho0 = dynamics.DensityMatrix(np.diag([0.0, 1.0, 0.0]).astype(complex))
    record = dynamics.evolve_lindblad(cfg, rates, rho0)
    expected = np.exp(-gamma * record.times)
    err = float(np.max(np.abs(record.populations[:, 1] - expected)))
    if corrupt:
        err += _PERTURBATION
    return err < 1e-6, f"max decay-law error {err:.3e}"


def _check_cd_following(rng, corrupt):
    preset = resolve("cd-ideal")
    theta0, _ = drive.mixing_angle(preset.drive, preset.drive.t_start)
    record = dynamics.evolve_pure(preset.drive, majorana.dark_state(theta0))
    infid = float(np.max(1.0 - record.fid_dark))
    if corrupt:
        infid += _PERTURBATION
    return infid < 1e-6, f"max dark-state infidelity {infid:.3e}"


def _check_mixed_reconstruction(rng, corrupt):
    worst = 0.0
    dark_ref = majorana.dark_state(0.3)
    for _ in range(300):
        rho = _random_density(rng)
        triple = mixedrep.decompose(rho, dark_ref)
        back = mixedrep.reconstruct(triple)
        if corrupt:
            back = back + _PERTURBATION
        worst = max(worst, float(np.max(np.abs(back - rho))))
        worst = max(worst, abs(triple.purity - np.trace(rho @ rho).real))
    return worst < 1e-10, f"max reconstruction error {worst:.3e}"


def _check_mixed_spin(rng, corrupt):
    worst = 0.0
    dark_ref = majorana.dark_state(0.3)
    for _ in range(300):
        rho = _random_density(rng)
        triple = mixedrep.decompose(rho, dark_ref)
        geo = mixedrep.mixed_spin_average(triple).vec
        direct = np.einsum("kij,ji->k", majorana.J_STACK, rho).real
        if corrupt:
            geo = geo + _PERTURBATION
        worst = max(worst, float(np.max(np.abs(geo - direct))))
    return worst < 1e-10, f"max mixed <J> mismatch {worst:.3e}"


def _check_tomography_identity(rng, corrupt):
    cfg = drive.DriveConfig(
        sigma=20e-9,
        ts=0.0,
        amp01=0.0,
        amp12=0.0,
        t_start=0.0,
        t_end=10e-9,
        n_steps=10,
        mode="stirap",
    )
    pm = tomography.run_process(cfg)
    want = np.zeros((9, 9), dtype=complex)
    want[0, 0] = 1.0
    err = float(np.max(np.abs(pm.matrix - want)))
    if corrupt:
        err += _PERTURBATION
    return err < 1e-10, f"identity-channel deviation {err:.3e}"


def _check_nonadiabatic_coupling(rng, corrupt):
    cfg = resolve("stirap-fig3a").drive
    h = 1e-12
    worst = 0.0
    for t in np.linspace(cfg.t_start, cfg.t_end, 200):
        t = float(t)
        theta, theta_dot = drive.mixing_angle(cfg, t)
        plus, _ = majorana.bright_states(theta)
        dp = majorana.dark_state(drive.mixing_angle(cfg, t + h)[0]).vector
        dm = majorana.dark_state(drive.mixing_angle(cfg, t - h)[0]).vector
        coupling = abs(np.vdot(plus.vector, (dp - dm) / (2 * h)))
        expected = theta_dot / math.sqrt(2.0)
        if corrupt:
            coupling *= 1 + _PERTURBATION
        worst = max(worst, abs(coupling - expected) / expected)
    return worst < 1e-6, f"max relative deviation {worst:.3e}"


def _check_pairing_continuity(rng, corrupt):
    record = dynamics.evolve_pure(
        resolve("stirap-fig3a").drive, majorana.QutritState(1, 0, 0)
    )
    jump = dynamics.max_pairing_jump(record)
    if corrupt:
        jump += 0.2
    return jump < 0.2, f"max per-step star motion {jump:.3f} rad"


CHECKS = {
    "round-trip": _check_round_trip,
    "rotation-covariance": _check_rotation_covariance,
    "spin-equivalence": _check_spin_equivalence,
    "spin-magnitude": _check_spin_magnitude,
    "concurrence-purity": _check_concurrence_purity,
    "dark-star-closed-form": _check_dark_star_closed_form,
    "j-operator-identities": _check_j_operator_identities,
    "r-frame-residuals": _check_r_frame,
    "theta-dot-finite-difference": _check_theta_dot_fd,
    "stark-quadrature": _check_stark_quadrature,
    "rabi-pi-pulse": _check_rabi_pulse,
    "exponential-decay": _check_exponential_decay,
    "cd-following": _check_cd_following,
    "mixed-reconstruction": _check_mixed_reconstruction,
    "mixed-spin-average": _check_mixed_spin,
    "tomography-identity": _check_tomography_identity,
    "nonadiabatic-coupling": _check_nonadiabatic_coupling,
    "pairing-continuity": _check_pairing_continuity,
}


def run_checks(seed: int = 20260809, perturb: str | None = None) -> list[CheckResult]:
    if perturb is not None and perturb not in CHECKS:
        raise ValueError(f"unknown check {perturb!r}; known: {', '.join(CHECKS)}")
    results = []
    for name, fn in CHECKS.items():
        rng = np.random.default_rng(seed)
        start = time.perf_counter()
        passed, detail = fn(rng, corrupt=(name == perturb))
        results.append(
            CheckResult(
                name=name,
                passed=bool(passed),
                seconds=time.perf_counter() - start,
                detail=detail,
            )
        )
    return results
