"""Majorana-sphere representation of qutrit (spin-1) pure states.

Conventions
-----------
The computational basis {|0>, |1>, |2>} is identified with the spin-1 basis
|j=1, m> via m = +1, 0, -1, so |0> sits at the North Pole of the sphere.
A pure state with amplitudes (c0, c1, c2) maps to the quadratic

    P(z) = a0 z^2 + a1 z + a2,  a0 = c0/sqrt(2),  a1 = -c1,  a2 = c2/sqrt(2),

whose two complex roots, sent through an inverse stereographic projection
taken from the South Pole, are the two Majorana stars.  A vanishing leading
coefficient means a root at infinity, i.e. a star exactly on the South Pole;
both a0 and a1 vanishing puts a double star there.

Angular momentum uses hbar = 1 throughout, with Jz = diag(+1, 0, -1) on the
computational basis.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

SQRT2 = math.sqrt(2.0)
TWO_PI = 2.0 * math.pi

# Spin-1 operators on {|0>, |1>, |2>} = {m=+1, m=0, m=-1}.
JX = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / SQRT2
JY = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / SQRT2
JZ = np.diag([1.0, 0.0, -1.0]).astype(complex)
J_MATRICES = {"x": JX, "y": JY, "z": JZ}
J_STACK = np.stack([JX, JY, JZ])

# Relative magnitude below which a leading polynomial coefficient is treated
# as exactly zero, placing the corresponding star on the South Pole.
_POLE_CUTOFF = 1e-12

# Relative magnitude below which an amplitude counts as zero when fixing the
# global-phase gauge (first nonzero amplitude real positive).
_GAUGE_CUTOFF = 1e-12


@dataclass(frozen=True)
class QutritState:
    """Normalized pure state c0|0> + c1|1> + c2|2>.

    The constructor rescales the amplitudes to unit norm; a zero vector is
    rejected.  Instances are immutable and safe to share between tasks.
    """

    c0: complex
    c1: complex
    c2: complex

    def __post_init__(self) -> None:
        c0, c1, c2 = complex(self.c0), complex(self.c1), complex(self.c2)
        norm = math.sqrt(abs(c0) ** 2 + abs(c1) ** 2 + abs(c2) ** 2)
        if not norm > 0.0:
            raise ValueError("cannot normalize a zero state vector")
        object.__setattr__(self, "c0", c0 / norm)
        object.__setattr__(self, "c1", c1 / norm)
        object.__setattr__(self, "c2", c2 / norm)

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "QutritState":
        v = np.asarray(vec, dtype=complex).reshape(3)
        return cls(v[0], v[1], v[2])

    @property
    def vector(self) -> np.ndarray:
        v = np.array([self.c0, self.c1, self.c2])
        assert abs(np.vdot(v, v).real - 1.0) < 1e-9
        return v

    @property
    def populations(self) -> np.ndarray:
        return np.array([abs(self.c0) ** 2, abs(self.c1) ** 2, abs(self.c2) ** 2])

    def overlap(self, other: "QutritState") -> complex:
        return (
            self.c0.conjugate() * other.c0
            + self.c1.conjugate() * other.c1
            + self.c2.conjugate() * other.c2
        )

    def fidelity(self, other: "QutritState") -> float:
        return abs(self.overlap(other)) ** 2


@dataclass(frozen=True)
class MajoranaPolynomial:
    """Coefficients of P(z) = a0 z^2 + a1 z + a2."""

    a0: complex
    a1: complex
    a2: complex

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.a0, self.a1, self.a2])


@dataclass(frozen=True)
class MajoranaStar:
    """A point on the unit sphere, stored as colatitude/longitude.

    theta is clamped to [0, pi] and phi normalized to [0, 2*pi); the
    Cartesian unit vector is derived once at construction.
    """

    theta: float
    phi: float

    def __post_init__(self) -> None:
        theta = min(max(float(self.theta), 0.0), math.pi)
        phi = float(self.phi) % TWO_PI
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)
        st = math.sin(theta)
        object.__setattr__(self, "x", st * math.cos(phi))
        object.__setattr__(self, "y", st * math.sin(phi))
        object.__setattr__(self, "z", math.cos(theta))

    @classmethod
    def from_root(cls, zeta: complex | None) -> "MajoranaStar":
        """Inverse stereographic projection of a polynomial root.

        ``None`` encodes a root at infinity (star on the South Pole).
        """
        if zeta is None:
            return cls(math.pi, 0.0)
        return cls(2.0 * math.atan(abs(zeta)), cmath.phase(zeta) % TWO_PI)

    @classmethod
    def from_cart(cls, vec: np.ndarray) -> "MajoranaStar":
        x, y, z = (float(c) for c in vec)
        r = math.sqrt(x * x + y * y + z * z)
        if not r > 0.0:
            raise ValueError("zero vector has no direction")
        return cls(math.acos(min(max(z / r, -1.0), 1.0)), math.atan2(y, x))

    @property
    def cart(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def root(self) -> complex | None:
        """Stereographic image tan(theta/2) e^{i phi}; None on the South Pole."""
        if math.pi - self.theta < 1e-12:
            return None
        return math.tan(0.5 * self.theta) * cmath.exp(1j * self.phi)


def angular_distance(a: MajoranaStar, b: MajoranaStar) -> float:
    # chord form: acos of a near-unit dot product cannot resolve angles
    # below sqrt(eps), while 2*asin(chord/2) is accurate near zero
    chord = 0.5 * math.sqrt(
        (a.x - b.x) ** 2 + (a.y - b.y) ** 2 + (a.z - b.z) ** 2
    )
    return 2.0 * math.asin(min(chord, 1.0))


@dataclass(frozen=True)
class MajoranaConstellation:
    """Two Majorana stars plus their separation angle eta = arccos(S1.S2).

    The pair is logically unordered; a definite order only carries meaning
    when assigned by trajectory-continuity pairing (see ``dynamics``).
    """

    s1: MajoranaStar
    s2: MajoranaStar

    def __post_init__(self) -> None:
        object.__setattr__(self, "eta", angular_distance(self.s1, self.s2))

    @property
    def stars(self) -> tuple[MajoranaStar, MajoranaStar]:
        return (self.s1, self.s2)

    @property
    def cart(self) -> np.ndarray:
        return np.array([self.s1.cart, self.s2.cart])


def constellations_close(
    a: MajoranaConstellation, b: MajoranaConstellation, tol: float = 1e-8
) -> bool:
    """Unordered star match within an angular tolerance (min-cost pairing)."""
    keep = angular_distance(a.s1, b.s1) + angular_distance(a.s2, b.s2)
    swap = angular_distance(a.s1, b.s2) + angular_distance(a.s2, b.s1)
    if keep <= swap:
        return angular_distance(a.s1, b.s1) < tol and angular_distance(a.s2, b.s2) < tol
    return angular_distance(a.s1, b.s2) < tol and angular_distance(a.s2, b.s1) < tol


@dataclass(frozen=True)
class SpinVector:
    """Real expectation values of (Jx, Jy, Jz); |<J>| <= 1 for any pure state."""

    jx: float
    jy: float
    jz: float

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.jx, self.jy, self.jz])

    @property
    def norm(self) -> float:
        return math.sqrt(self.jx**2 + self.jy**2 + self.jz**2)


# ---------------------------------------------------------------------------
# state <-> polynomial <-> stars


def polynomial_from_amplitudes(c0: complex, c1: complex, c2: complex) -> MajoranaPolynomial:
    """Coefficient map for raw (possibly unnormalized) amplitudes."""
    return MajoranaPolynomial(c0 / SQRT2, -c1, c2 / SQRT2)


def to_polynomial(state: QutritState) -> MajoranaPolynomial:
    return polynomial_from_amplitudes(state.c0, state.c1, state.c2)


def _stable_quadratic_roots(a: complex, b: complex, c: complex) -> tuple[complex, complex]:
    """Both roots of a z^2 + b z + c = 0 with a != 0.

    Uses q = -(b + s*sqrt(disc))/2 with the sign s chosen so that the two
    terms do not cancel, then the Vieta companion c/q; this keeps roots of
    very different magnitude (stars near opposite poles) accurate.
    """
    disc = b * b - 4.0 * a * c
    sq = cmath.sqrt(disc)
    if (b.real * sq.real + b.imag * sq.imag) >= 0.0:
        q = -0.5 * (b + sq)
    else:
        q = -0.5 * (b - sq)
    z1 = q / a
    if q != 0.0:
        z2 = c / q
    else:
        z2 = -b / a - z1
    return z1, z2


def polynomial_roots(poly: MajoranaPolynomial) -> tuple[complex | None, complex | None]:
    """Roots of the Majorana polynomial; ``None`` marks a root at infinity."""
    mags = (abs(poly.a0), abs(poly.a1), abs(poly.a2))
    scale = max(mags)
    if scale == 0.0:
        raise ValueError("zero polynomial has no star representation")
    if mags[0] <= _POLE_CUTOFF * scale:
        if mags[1] <= _POLE_CUTOFF * scale:
            return None, None
        return complex(-poly.a2 / poly.a1), None
    return _stable_quadratic_roots(complex(poly.a0), complex(poly.a1), complex(poly.a2))


def stars_of(state: QutritState) -> MajoranaConstellation:
    """Majorana constellation of a pure qutrit state."""
    z1, z2 = polynomial_roots(to_polynomial(state))
    return MajoranaConstellation(MajoranaStar.from_root(z1), MajoranaStar.from_root(z2))


def _canonical_gauge(vec: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first nonzero amplitude is real positive."""
    norm = np.linalg.norm(vec)
    for component in vec:
        if abs(component) > _GAUGE_CUTOFF * norm:
            return vec * (component.conjugate() / abs(component))
    return vec


def state_of(constellation: MajoranaConstellation) -> QutritState:
    """Unique pure state (canonical global phase) for two stars.

    Stars on the South Pole drop the corresponding polynomial factor,
    reducing the degree; both on the South Pole gives |2>.
    """
    roots = [constellation.s1.root(), constellation.s2.root()]
    finite = [z for z in roots if z is not None]
    if len(finite) == 2:
        z1, z2 = finite
        vec = np.array([SQRT2, z1 + z2, SQRT2 * z1 * z2])
    elif len(finite) == 1:
        vec = np.array([0.0, -1.0, -SQRT2 * finite[0]])
    else:
        vec = np.array([0.0, 0.0, 1.0])
    return QutritState.from_vector(_canonical_gauge(vec))


def separation(constellation: MajoranaConstellation) -> float:
    """Angular distance eta between the two stars, in [0, pi]."""
    return constellation.eta


def concurrence(constellation: MajoranaConstellation) -> float:
    """Entanglement of the symmetrized two-qubit form: sin^2(eta/2)/(1+cos^2(eta/2))."""
    half = 0.5 * constellation.eta
    return math.sin(half) ** 2 / (1.0 + math.cos(half) ** 2)


def spin_average(state: QutritState) -> SpinVector:
    """Operator expectation values <Jx>, <Jy>, <Jz>."""
    v = state.vector
    out = np.einsum("i,kij,j->k", v.conj(), J_STACK, v).real
    return SpinVector(float(out[0]), float(out[1]), float(out[2]))


def spin_average_geometric(constellation: MajoranaConstellation) -> SpinVector:
    """Geometric <J> = 2 (S1 + S2) / (3 + S1.S2) from the star positions alone."""
    s1, s2 = constellation.s1, constellation.s2
    dot = min(max(s1.x * s2.x + s1.y * s2.y + s1.z * s2.z, -1.0), 1.0)
    scale = 2.0 / (3.0 + dot)
    return SpinVector(scale * (s1.x + s2.x), scale * (s1.y + s2.y), scale * (s1.z + s2.z))


# ---------------------------------------------------------------------------
# dark / bright eigenstates of the two-tone coupling


def dark_state(theta_mix: float) -> QutritState:
    """Zero-energy eigenstate cos(T)|0> - sin(T)|2> of the two-tone coupling."""
    return QutritState(math.cos(theta_mix), 0.0, -math.sin(theta_mix))


def bright_states(theta_mix: float) -> tuple[QutritState, QutritState]:
    """The pair |n+/-> = [sin(T)|0> + cos(T)|2>]/sqrt(2) +/- |1>/sqrt(2)."""
    s, c = math.sin(theta_mix), math.cos(theta_mix)
    plus = QutritState(s / SQRT2, 1.0 / SQRT2, c / SQRT2)
    minus = QutritState(s / SQRT2, -1.0 / SQRT2, c / SQRT2)
    return plus, minus


def dark_star_xz(theta_mix: float) -> tuple[float, float]:
    """Closed-form Cartesian (x, z) of the dark-state stars (+-x, 0, z)."""
    c, s = math.cos(theta_mix), math.sin(theta_mix)
    x = math.sqrt(max(2.0 * math.sin(2.0 * theta_mix), 0.0)) / (c + s)
    z = (c - s) / (c + s)
    return x, z


def dark_fidelity(state: QutritState, theta_mix: float) -> float:
    """|<state|dark>|^2 evaluated from the star coordinates alone.

    Closed form in the star angles (theta_k, phi_k) and the mixing angle;
    agrees with the direct inner product to ~1e-12.
    """
    con = stars_of(state)
    t1, p1 = con.s1.theta, con.s1.phi
    t2, p2 = con.s2.theta, con.s2.phi
    c2t, s2t = math.cos(2.0 * theta_mix), math.sin(2.0 * theta_mix)
    num = (
        1.0
        + (math.cos(t1) + math.cos(t2)) * c2t
        + math.cos(t1) * math.cos(t2)
        - math.sin(t1) * math.sin(t2) * s2t * math.cos(p1 + p2)
    )
    den = 2.0 * (1.0 + math.cos(0.5 * con.eta) ** 2)
    return min(max(num / den, 0.0), 1.0)


def intermediate_population_geometric(state: QutritState) -> float:
    """Population of |1> from the root sum: |c0|^2 |z1 + z2|^2 / 2.

    Falls back to the direct |c1|^2 when |c0|^2 < 1e-12, where the root-sum
    form is ill-conditioned.
    """
    p0 = abs(state.c0) ** 2
    if p0 < 1e-12:
        return abs(state.c1) ** 2
    z1, z2 = polynomial_roots(to_polynomial(state))
    return p0 * abs(z1 + z2) ** 2 / 2.0


# ---------------------------------------------------------------------------
# operator action in the polynomial picture


def j_operator_on_polynomial(which: str, poly: MajoranaPolynomial) -> MajoranaPolynomial:
    """Apply Jx, Jy or Jz as a differential operator in the root variable.

    Jx -> (-2z + z^2 d/dz - d/dz)/2, Jy -> (-2z + z^2 d/dz + d/dz)/(2i),
    Jz -> -1 + z d/dz.  On quadratics these are the linear maps below, and
    the result is exactly the polynomial of J|psi> under the coefficient map.
    """
    a0, a1, a2 = poly.a0, poly.a1, poly.a2
    if which == "x":
        return MajoranaPolynomial(-0.5 * a1, -(a0 + a2), -0.5 * a1)
    if which == "y":
        return MajoranaPolynomial(0.5j * a1, -1j * (a0 - a2), -0.5j * a1)
    if which == "z":
        return MajoranaPolynomial(a0, 0.0, -a2)
    raise ValueError(f"unknown operator {which!r}; expected 'x', 'y' or 'z'")


# ---------------------------------------------------------------------------
# symmetrized two-qubit picture


def symmetrized_qubits(
    constellation: MajoranaConstellation,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Two spin-1/2 amplitude pairs whose Bloch vectors are the stars.

    Returns (qubit1, qubit2, normalization) such that

        |Psi> = normalization * (|q1>|q2> + |q2>|q1>)

    reproduces the qutrit state in the symmetric two-qubit subspace, with
    normalization = 1/sqrt(2 [1 + cos^2(eta/2)]).
    """
    qubits = []
    for star in constellation.stars:
        qubits.append(
            np.array(
                [
                    math.cos(0.5 * star.theta),
                    math.sin(0.5 * star.theta) * cmath.exp(1j * star.phi),
                ]
            )
        )
    norm = 1.0 / math.sqrt(2.0 * (1.0 + math.cos(0.5 * constellation.eta) ** 2))
    return qubits[0], qubits[1], norm


def qubit_star(amplitudes: np.ndarray) -> MajoranaStar:
    """Single Majorana star (Bloch vector) of a spin-1/2 state (c_up, c_down)."""
    v = np.asarray(amplitudes, dtype=complex).reshape(2)
    norm = np.linalg.norm(v)
    if not norm > 0.0:
        raise ValueError("zero qubit vector")
    if abs(v[0]) <= _POLE_CUTOFF * norm:
        return MajoranaStar(math.pi, 0.0)
    return MajoranaStar.from_root(complex(v[1] / v[0]))
