"""Multi-sphere Majorana representation of mixed qutrit states.

A mixed state is spectrally decomposed into three orthogonal pure states
with weights (lambda_d, lambda_e, lambda_f); each eigenvector's two stars
live on a sphere whose radius is its weight.  The 'd' label tracks the
eigenvector closest to a supplied reference state (the instantaneous dark
state along a drive); 'e' and 'f' follow by descending weight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import DensityMatrix, TrajectoryRecord, pair_stars
from .majorana import (
    MajoranaConstellation,
    MajoranaStar,
    QutritState,
    SpinVector,
    _canonical_gauge,
    dark_state,
    qubit_star,
    spin_average_geometric,
    stars_of,
)

LABELS = ("d", "e", "f")
DEGENERACY_GAP = 1e-9


@dataclass(frozen=True)
class WeightedConstellation:
    """One spectral component: weight (sphere radius), stars and label.

    ``j_contrib`` is this component's share of the total angular momentum,
    weight * 2(S1+S2)/(3+S1.S2); the shares of a triple sum to Tr(rho J).
    """

    weight: float
    state: QutritState
    constellation: MajoranaConstellation
    label: str
    j_contrib: SpinVector


@dataclass(frozen=True)
class SpectralTriple:
    """Ordered (d, e, f) components of one density matrix."""

    parts: tuple[WeightedConstellation, WeightedConstellation, WeightedConstellation]
    degenerate: bool

    def __iter__(self):
        return iter(self.parts)

    @property
    def weights(self) -> np.ndarray:
        return np.array([p.weight for p in self.parts])

    @property
    def purity(self) -> float:
        return float(np.sum(self.weights**2))


def _component(weight: float, vec: np.ndarray, label: str) -> WeightedConstellation:
    state = QutritState.from_vector(_canonical_gauge(vec))
    con = stars_of(state)
    contrib = spin_average_geometric(con)
    return WeightedConstellation(
        weight=float(weight),
        state=state,
        constellation=con,
        label=label,
        j_contrib=SpinVector(
            weight * contrib.jx, weight * contrib.jy, weight * contrib.jz
        ),
    )


def decompose(rho: DensityMatrix | np.ndarray, dark_ref: QutritState) -> SpectralTriple:
    """Spectral decomposition with dark-reference labeling.

    'd' goes to the eigenvector with the largest overlap |<chi|dark_ref>|^2;
    the remaining two are 'e', 'f' by descending weight, falling back to
    overlap order when their weights are degenerate (gap < 1e-9).  The
    ``degenerate`` flag is set whenever any eigenvalue pair is that close.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    w, v = np.linalg.eigh(m)
    ref = dark_ref.vector
    overlap = np.abs(v.conj().T @ ref) ** 2
    order = sorted(range(3), key=lambda i: -overlap[i])
    d_idx = order[0]
    rest = [i for i in range(3) if i != d_idx]
    gaps = [abs(w[0] - w[1]), abs(w[0] - w[2]), abs(w[1] - w[2])]
    degenerate = min(gaps) < DEGENERACY_GAP
    if abs(w[rest[0]] - w[rest[1]]) < DEGENERACY_GAP:
        rest.sort(key=lambda i: -overlap[i])
    else:
        rest.sort(key=lambda i: -w[i])
    parts = (
        _component(w[d_idx], v[:, d_idx], "d"),
        _component(w[rest[0]], v[:, rest[0]], "e"),
        _component(w[rest[1]], v[:, rest[1]], "f"),
    )
    return SpectralTriple(parts=parts, degenerate=degenerate)


def mixed_spin_average(triple: SpectralTriple) -> SpinVector:
    """Total <J> = sum of the per-sphere contributions; equals Tr(rho J)."""
    jx = sum(p.j_contrib.jx for p in triple.parts)
    jy = sum(p.j_contrib.jy for p in triple.parts)
    jz = sum(p.j_contrib.jz for p in triple.parts)
    return SpinVector(jx, jy, jz)


def reconstruct(triple: SpectralTriple) -> np.ndarray:
    """Sum of weight * |chi><chi| over the triple."""
    out = np.zeros((3, 3), dtype=complex)
    for p in triple.parts:
        v = p.state.vector
        out += p.weight * np.outer(v, v.conj())
    return out


@dataclass(eq=False)
class MixedTrajectory:
    """Per-step spectral triples of an open-system trajectory.

    Star rows are continuity-paired within each label; ``lambdas`` and the
    star block are ordered (d, e, f).
    """

    times: np.ndarray
    lambdas: np.ndarray  # (n+1, 3)
    stars: np.ndarray  # (n+1, 3, 2, 3)
    j_contribs: np.ndarray  # (n+1, 3, 3)
    purity: np.ndarray
    dark_fidelity: np.ndarray
    degenerate: np.ndarray
    eigenvectors: np.ndarray  # (n+1, 3 labels, 3 amplitudes)


def mixed_trajectory(record: TrajectoryRecord) -> MixedTrajectory:
    """Decompose every step of a Lindblad record against the instantaneous dark state."""
    if record.kind != "lindblad" or record.rhos is None:
        raise ValueError("mixed_trajectory needs an open-system record")
    n = len(record.times)
    lambdas = np.empty((n, 3))
    stars = np.empty((n, 3, 2, 3))
    contribs = np.empty((n, 3, 3))
    degenerate = np.empty(n, dtype=bool)
    eigenvectors = np.empty((n, 3, 3), dtype=complex)
    prev_cons: list[MajoranaConstellation | None] = [None, None, None]
    prev_states: list[QutritState | None] = [None, None, None]

    for i in range(n):
        triple = decompose(record.rhos[i], dark_state(float(record.theta[i])))
        parts = list(triple.parts)
        # within weight degeneracy of e/f, keep the previous step's frame
        if (
            triple.degenerate
            and prev_states[1] is not None
            and abs(parts[1].weight - parts[2].weight) < DEGENERACY_GAP
        ):
            keep = abs(prev_states[1].overlap(parts[1].state)) ** 2 + abs(
                prev_states[2].overlap(parts[2].state)
            ) ** 2
            swap = abs(prev_states[1].overlap(parts[2].state)) ** 2 + abs(
                prev_states[2].overlap(parts[1].state)
            ) ** 2
            if swap > keep:
                e, f = parts[2], parts[1]
                parts[1] = WeightedConstellation(
                    e.weight, e.state, e.constellation, "e", e.j_contrib
                )
                parts[2] = WeightedConstellation(
                    f.weight, f.state, f.constellation, "f", f.j_contrib
                )
        degenerate[i] = triple.degenerate
        for k, part in enumerate(parts):
            con = part.constellation
            if prev_cons[k] is not None:
                con = pair_stars(prev_cons[k], con)
            prev_cons[k] = con
            prev_states[k] = part.state
            lambdas[i, k] = part.weight
            stars[i, k, 0] = con.s1.cart
            stars[i, k, 1] = con.s2.cart
            contribs[i, k] = part.j_contrib.vec
            eigenvectors[i, k] = part.state.vector

    purity = np.einsum("tij,tji->t", record.rhos, record.rhos).real
    return MixedTrajectory(
        times=record.times,
        lambdas=lambdas,
        stars=stars,
        j_contribs=contribs,
        purity=purity,
        dark_fidelity=record.fid_dark,
        degenerate=degenerate,
        eigenvectors=eigenvectors,
    )


def qubit_spectral_pair(rho2: np.ndarray) -> tuple[tuple[float, MajoranaStar], tuple[float, MajoranaStar]]:
    """Two-level analogue: weights (1+-r)/2 with antipodal single stars.

    Provided as the illustrative spin-1/2 case of the multi-sphere picture;
    the returned pairs are ordered by descending weight.
    """
    m = np.asarray(rho2, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError("expected a 2x2 density matrix")
    w, v = np.linalg.eigh(m)
    pairs = [
        (float(w[i]), qubit_star(_canonical_gauge(v[:, i]))) for i in range(2)
    ]
    pairs.sort(key=lambda p: -p[0])
    return pairs[0], pairs[1]
