"""States, coin fields and exact one-step evolution for 1D discrete-time quantum walks.

The walker carries a two-level coin; one step of the walk is U = S·C where C
rotates the coin at every site and S shifts the |+1> component right and the
|-1> component left.  Every geometry is realized on a periodic ring:

* ``cycle``          -- a plain ring of D sites;
* ``wire``           -- a ring whose two end sites hold totally reflecting
                        coins (|theta| = pi/2), so no amplitude ever crosses
                        the seam between them;
* ``truncated-line`` -- a ring large enough that the light cone of the
                        initial state never reaches the seam, which makes the
                        finite simulation exactly equal to the infinite-line
                        walk up to a recorded horizon ``t_max``.

Amplitudes are stored as per-site complex pairs ``(a_x, b_x)`` with ``a``
multiplying the right-moving coin basis state |+1> and ``b`` the left-moving
|-1>.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CoinParams",
    "Geometry",
    "CoinField",
    "WalkerState",
    "WireLeakError",
    "coin_matrix",
    "apply_coin",
    "apply_step",
    "evolve",
    "position_distribution",
    "overlap",
    "fold_angle",
]

#: reflecting-coin seam leakage tolerance (per step, amplitude magnitude)
SEAM_TOL = 1e-13


class WireLeakError(RuntimeError):
    """Raised when amplitude crosses the seam of a reflecting-end wire."""


def fold_angle(x: float | np.ndarray) -> float | np.ndarray:
    """Fold an angle (radians) into the principal zone (-pi, pi]."""
    y = np.mod(np.asarray(x) + np.pi, 2 * np.pi) - np.pi
    y = np.where(y == -np.pi, np.pi, y)
    return float(y) if np.isscalar(x) or np.ndim(x) == 0 else y


@dataclass(frozen=True)
class CoinParams:
    """Four angles (theta, delta, zeta, sigma) defining a U(2) coin at a site.

    ``theta`` is normalized into (-pi, pi] on construction; ``sign(theta)``
    labels the topological phase of a homogeneous walk built from this coin.
    """

    theta: float
    delta: float = 0.0
    zeta: float = 0.0
    sigma: float = 0.0

    def __post_init__(self) -> None:
        for name in ("theta", "delta", "zeta", "sigma"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"coin angle {name} must be finite")
        object.__setattr__(self, "theta", fold_angle(self.theta))

    @property
    def phase_sign(self) -> int:
        """Topological phase label of the gapped homogeneous walk: sign(theta)."""
        return int(np.sign(self.theta))


def coin_matrix(p: CoinParams) -> np.ndarray:
    """Return the 2x2 unitary coin matrix for the given angles.

    The convention is

        e^{-i delta} [[ e^{i zeta} cos(theta),           e^{i(zeta+sigma)} sin(theta)],
                      [-e^{-i(zeta+sigma)} sin(theta),   e^{-i zeta} cos(theta)      ]]

    so (delta, zeta, sigma, theta) = 0 gives the identity and theta = pi/2
    gives the totally reflecting coin [[0, 1], [-1, 0]].
    """
    c, s = np.cos(p.theta), np.sin(p.theta)
    m = np.array(
        [
            [np.exp(1j * p.zeta) * c, np.exp(1j * (p.zeta + p.sigma)) * s],
            [-np.exp(-1j * (p.zeta + p.sigma)) * s, np.exp(-1j * p.zeta) * c],
        ],
        dtype=np.complex128,
    )
    return np.exp(-1j * p.delta) * m


@dataclass(frozen=True)
class Geometry:
    """Lattice layout: ring size D plus the mapping to line coordinates.

    ``origin_offset`` maps ring index i in [0, D) to the line coordinate
    x = i + origin_offset used by the interface/wire formulas.  For a
    truncated line, ``t_max`` records the horizon up to which the periodic
    embedding is exactly equivalent to the infinite lattice.
    """

    kind: str  # "cycle" | "wire" | "truncated-line"
    size: int
    origin_offset: int = 0
    t_max: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("cycle", "wire", "truncated-line"):
            raise ValueError(f"unknown geometry kind {self.kind!r}")
        if self.size < 2:
            raise ValueError("geometry needs at least 2 sites")
        if self.kind == "truncated-line" and self.t_max is None:
            raise ValueError("truncated-line geometry requires t_max")

    @classmethod
    def cycle(cls, size: int) -> "Geometry":
        return cls("cycle", size)

    @classmethod
    def wire(cls, size: int) -> "Geometry":
        # end sites sit at both extremes of x, adjacent across the seam
        return cls("wire", size, origin_offset=-((size - 1) // 2))

    @classmethod
    def line(cls, t_max: int, support_radius: int = 0) -> "Geometry":
        """Ring embedding of the infinite line, exact for ``t <= t_max``.

        The radius satisfies R >= t_max + support_radius + 1 so that no
        amplitude from an initial state supported on |x| <= support_radius
        can reach the seam within the horizon.
        """
        radius = t_max + support_radius + 1
        return cls("truncated-line", 2 * radius + 1, origin_offset=-radius, t_max=t_max)

    @classmethod
    def line_of_radius(cls, radius: int, t_max: int | None = None) -> "Geometry":
        return cls("truncated-line", 2 * radius + 1, origin_offset=-radius,
                   t_max=radius if t_max is None else t_max)

    def coordinates(self) -> np.ndarray:
        """Line coordinate x of every ring index."""
        return np.arange(self.size) + self.origin_offset

    def index_of(self, x: int) -> int:
        i = x - self.origin_offset
        if not 0 <= i < self.size:
            raise IndexError(f"coordinate x={x} outside geometry")
        return i


@dataclass(frozen=True)
class CoinField:
    """Per-site coin assignment on a geometry, tagged with its scenario."""

    geometry: Geometry
    coins: tuple[CoinParams, ...]
    scenario: str = "custom"

    def __post_init__(self) -> None:
        if len(self.coins) != self.geometry.size:
            raise ValueError("coin list length must equal geometry size")
        if self.geometry.kind == "wire":
            left, right = self.coins[0], self.coins[-1]
            for end in (left, right):
                if abs(abs(end.theta) - np.pi / 2) > 1e-12:
                    raise ValueError("wire end coins must have |theta| = pi/2")

    # -- scenario constructors -------------------------------------------------

    @classmethod
    def homogeneous(cls, geometry: Geometry, params: CoinParams) -> "CoinField":
        return cls(geometry, (params,) * geometry.size, scenario="homogeneous")

    @classmethod
    def interface(
        cls,
        geometry: Geometry,
        theta_minus: float,
        theta_plus: float,
        delta: float = 0.0,
        zeta: float = 0.0,
        sigma: float = 0.0,
    ) -> "CoinField":
        """Two half-lines glued at x = 0: theta_minus for x < 0, theta_plus for x >= 0."""
        coins = tuple(
            CoinParams(theta_minus if x < 0 else theta_plus, delta, zeta, sigma)
            for x in geometry.coordinates()
        )
        return cls(geometry, coins, scenario="interface")

    @classmethod
    def two_segment_cycle(
        cls,
        size: int,
        d: int,
        theta_a: float,
        theta_b: float,
        delta: float = 0.0,
        zeta: float = 0.0,
        sigma: float = 0.0,
    ) -> "CoinField":
        """Cycle split into a segment of d sites (theta_a) and D-d sites (theta_b)."""
        if not 1 <= d < size:
            raise ValueError("segment length d must satisfy 1 <= d < D")
        geometry = Geometry.cycle(size)
        coins = tuple(
            CoinParams(theta_a if i < d else theta_b, delta, zeta, sigma)
            for i in range(size)
        )
        return cls(geometry, coins, scenario="cycle-two-segment" if d > 1 else "defect")

    @classmethod
    def single_defect(
        cls,
        geometry: Geometry,
        theta_a: float,
        theta_b: float,
        delta: float = 0.0,
        zeta: float = 0.0,
        sigma: float = 0.0,
    ) -> "CoinField":
        """Homogeneous theta_b background with a single theta_a coin at x = 0."""
        coins = tuple(
            CoinParams(theta_a if x == 0 else theta_b, delta, zeta, sigma)
            for x in geometry.coordinates()
        )
        return cls(geometry, coins, scenario="defect")

    @classmethod
    def wire(
        cls,
        size: int,
        theta,
        end_sign_left: int = -1,
        end_sign_right: int = -1,
        delta: float = 0.0,
        zeta: float = 0.0,
        sigma: float = 0.0,
    ) -> "CoinField":
        """Finite wire: reflecting coins (theta = +-pi/2) at both ends.

        ``theta`` may be a scalar (homogeneous bulk) or a sequence of D-2
        bulk angles.  The end signs select the topological phase of the
        reflectors relative to the bulk.
        """
        geometry = Geometry.wire(size)
        thetas = np.full(size - 2, theta, dtype=float) if np.isscalar(theta) else np.asarray(theta, dtype=float)
        if thetas.shape != (size - 2,):
            raise ValueError(f"expected {size - 2} bulk angles, got {thetas.shape}")
        coins = (
            (CoinParams(end_sign_left * np.pi / 2, delta, zeta, sigma),)
            + tuple(CoinParams(t, delta, zeta, sigma) for t in thetas)
            + (CoinParams(end_sign_right * np.pi / 2, delta, zeta, sigma),)
        )
        scenario = "wire" if np.isscalar(theta) else "random-bulk-wire"
        return cls(geometry, coins, scenario=scenario)

    @classmethod
    def random_bulk_wire(
        cls,
        size: int,
        theta_range: tuple[float, float],
        rng: np.random.Generator,
        end_sign: int = -1,
        delta: float = 0.0,
        zeta: float = 0.0,
        sigma: float = 0.0,
    ) -> "CoinField":
        """Wire with i.i.d. uniform bulk angles; all bulk coins share one phase."""
        lo, hi = theta_range
        thetas = rng.uniform(lo, hi, size - 2)
        return cls.wire(size, thetas, end_sign, end_sign, delta, zeta, sigma)

    # -- cached evolution arrays ----------------------------------------------

    def coin_entries(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Per-site coin matrix entries (c00, c01, c10, c11) as D-vectors."""
        mats = np.array([coin_matrix(p) for p in self.coins])
        return mats[:, 0, 0], mats[:, 0, 1], mats[:, 1, 0], mats[:, 1, 1]

    def thetas(self) -> np.ndarray:
        return np.array([p.theta for p in self.coins])


@dataclass
class WalkerState:
    """Complex amplitude pair (a_x, b_x) per site of a geometry."""

    geometry: Geometry
    a: np.ndarray
    b: np.ndarray
    normalized: bool = True

    def __post_init__(self) -> None:
        self.a = np.asarray(self.a, dtype=np.complex128)
        self.b = np.asarray(self.b, dtype=np.complex128)
        if self.a.shape != (self.geometry.size,) or self.b.shape != (self.geometry.size,):
            raise ValueError("amplitude arrays must have one entry per site")
        if self.normalized and abs(self.norm() - 1.0) > 1e-12:
            raise ValueError(f"state marked normalized but norm is {self.norm()!r}")

    @classmethod
    def basis_state(
        cls, geometry: Geometry, x: int, coin: Sequence[complex] = (1.0, 0.0)
    ) -> "WalkerState":
        """State fully localized at line coordinate ``x`` with the given coin spinor."""
        ca, cb = complex(coin[0]), complex(coin[1])
        n = np.hypot(abs(ca), abs(cb))
        a = np.zeros(geometry.size, dtype=np.complex128)
        b = np.zeros(geometry.size, dtype=np.complex128)
        i = geometry.index_of(x)
        a[i] = ca / n
        b[i] = cb / n
        return cls(geometry, a, b)

    @classmethod
    def from_vector(cls, geometry: Geometry, v: np.ndarray, normalized: bool = True) -> "WalkerState":
        """Unpack a flat length-2D vector ordered (a_0, b_0, a_1, b_1, ...)."""
        v = np.asarray(v, dtype=np.complex128)
        return cls(geometry, v[0::2].copy(), v[1::2].copy(), normalized=normalized)

    def to_vector(self) -> np.ndarray:
        v = np.empty(2 * self.geometry.size, dtype=np.complex128)
        v[0::2] = self.a
        v[1::2] = self.b
        return v

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.a) ** 2 + np.abs(self.b) ** 2)))

    def normalize(self) -> "WalkerState":
        n = self.norm()
        return WalkerState(self.geometry, self.a / n, self.b / n)

    def copy(self) -> "WalkerState":
        return WalkerState(self.geometry, self.a.copy(), self.b.copy(), self.normalized)


def position_distribution(state: WalkerState) -> np.ndarray:
    """Site probabilities p_x = |a_x|^2 + |b_x|^2, ordered like the coordinates."""
    return np.abs(state.a) ** 2 + np.abs(state.b) ** 2


def overlap(s1: WalkerState, s2: WalkerState) -> complex:
    """Inner product <s1|s2> (conjugate-linear in the first argument)."""
    if s1.geometry != s2.geometry:
        raise ValueError("overlap requires matching geometries")
    return complex(np.vdot(s1.a, s2.a) + np.vdot(s1.b, s2.b))


def apply_coin(state: WalkerState, field: CoinField) -> WalkerState:
    """Rotate the coin at every site: (a_x, b_x) -> C_x (a_x, b_x)."""
    if field.geometry != state.geometry:
        raise ValueError("coin field geometry does not match state geometry")
    c00, c01, c10, c11 = field.coin_entries()
    a = c00 * state.a + c01 * state.b
    b = c10 * state.a + c11 * state.b
    return WalkerState(state.geometry, a, b, normalized=state.normalized)


def apply_step(state: WalkerState) -> WalkerState:
    """Shift a_x to site x+1 and b_x to site x-1, periodically."""
    return WalkerState(
        state.geometry,
        np.roll(state.a, 1),
        np.roll(state.b, -1),
        normalized=state.normalized,
    )


def evolve(
    state: WalkerState,
    field: CoinField,
    steps: int,
    record: bool = False,
    check_seam: bool = True,
):
    """Apply ``steps`` walk steps U = S.C to the state.

    Parameters
    ----------
    state, field :
        Initial state and the coin field; geometries must match.
    steps : int
        Number of steps; for a truncated line it must not exceed ``t_max``.
    record : bool
        When true, also return the trajectory of position distributions as
        an array of shape (steps + 1, D) including the initial distribution.
    check_seam : bool
        For wires, assert each step that the amplitude about to cross the
        seam between the two reflecting end sites is below 1e-13.

    Returns
    -------
    WalkerState, or (WalkerState, ndarray) when ``record`` is set.
    """
    if field.geometry != state.geometry:
        raise ValueError("coin field geometry does not match state geometry")
    geo = state.geometry
    if geo.kind == "truncated-line" and steps > geo.t_max:
        raise ValueError(
            f"horizon exceeded: {steps} steps > t_max={geo.t_max}; "
            "enlarge the truncated line"
        )
    c00, c01, c10, c11 = field.coin_entries()
    a, b = state.a.copy(), state.b.copy()
    wire = geo.kind == "wire" and check_seam
    traj = [np.abs(a) ** 2 + np.abs(b) ** 2] if record else None
    for t in range(steps):
        na = c00 * a + c01 * b
        nb = c10 * a + c11 * b
        if wire:
            # crossing amplitudes: post-coin b at the left end wraps to the
            # right end, post-coin a at the right end wraps to the left end
            leak = max(abs(nb[0]), abs(na[-1]))
            if leak > SEAM_TOL:
                raise WireLeakError(
                    f"seam-crossing amplitude {leak:.3e} at step {t + 1}; "
                    "wire setup is invalid (check end coins and initial support)"
                )
        a = np.roll(na, 1)
        b = np.roll(nb, -1)
        if record:
            traj.append(np.abs(a) ** 2 + np.abs(b) ** 2)
    out = WalkerState(geo, a, b, normalized=state.normalized)
    if record:
        return out, np.array(traj)
    return out
