"""Quasienergy spectra of finite walks by dense diagonalization of U = S.C.

The one-step operator of a D-site walk is a 2D x 2D unitary; its eigenvalues
lie on the unit circle and define quasienergies omega = -arg(lambda) in the
first Floquet zone (-pi, pi].  The unitary is diagonalized directly (LAPACK
complex eigensolver); forming an effective Hamiltonian log is never needed
because the Floquet fold is a scalar operation on the eigenvalue argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .core import CoinField, Geometry, WalkerState, coin_matrix, position_distribution

__all__ = [
    "SpectralResult",
    "EigenPair",
    "LocalizationFit",
    "TwoSegmentScenario",
    "build_unitary",
    "diagonalize",
    "sweep_parameter",
    "localization_length_fit",
    "inverse_participation_ratio",
    "gap_state_filter",
    "pair_splitting",
]

#: eigenvalues closer than this in omega are treated as one degenerate cluster
DEGENERACY_TOL = 1e-9


def build_unitary(field: CoinField) -> np.ndarray:
    """Dense 2D x 2D matrix of one walk step on the field's ring.

    Basis ordering is site-major: index 2x holds the right-mover amplitude
    a_x, index 2x+1 the left-mover b_x.  The matrix action agrees exactly
    with ``apply_step(apply_coin(state))``.
    """
    D = field.geometry.size
    n = 2 * D
    U = np.zeros((n, n), dtype=np.complex128)
    for i, p in enumerate(field.coins):
        c = coin_matrix(p)
        ip1 = (i + 1) % D
        im1 = (i - 1) % D
        # a-row of the coin lands on site i+1, b-row on site i-1
        U[2 * ip1, 2 * i] = c[0, 0]
        U[2 * ip1, 2 * i + 1] = c[0, 1]
        U[2 * im1 + 1, 2 * i] = c[1, 0]
        U[2 * im1 + 1, 2 * i + 1] = c[1, 1]
    return U


class EigenPair(NamedTuple):
    omega: float
    vector: WalkerState
    ipr: float
    residual: float


@dataclass
class SpectralResult:
    """Full eigendecomposition of a one-step walk unitary.

    ``quasienergies`` are sorted ascending (ties broken by descending IPR);
    eigenvectors are normalized WalkerStates aligned with the energies.
    Degenerate clusters (|d omega| < 1e-9) are re-orthonormalized, so any
    basis of a degenerate subspace may be returned; downstream code must not
    rely on a particular gauge.
    """

    geometry: Geometry
    quasienergies: np.ndarray
    eigenvectors: list[WalkerState]
    residuals: np.ndarray
    ipr: np.ndarray

    def __len__(self) -> int:
        return len(self.quasienergies)

    def pairs(self) -> list[EigenPair]:
        return [
            EigenPair(float(w), v, float(q), float(r))
            for w, v, q, r in zip(self.quasienergies, self.eigenvectors, self.ipr, self.residuals)
        ]


def inverse_participation_ratio(state: WalkerState) -> float:
    """IPR = sum_x p_x^2; about 1.5/D for extended states, O(1/xi) for localized."""
    p = position_distribution(state)
    p = p / p.sum()
    return float(np.sum(p * p))


def diagonalize(target, geometry: Geometry | None = None) -> SpectralResult:
    """Eigendecomposition of a walk unitary (or of a coin field's unitary).

    Parameters
    ----------
    target : CoinField or (2D, 2D) complex ndarray
        The field (preferred; carries its geometry) or an explicit unitary.
    geometry : Geometry, optional
        Required when passing a bare matrix.

    Raises
    ------
    ValueError if the matrix is not unitary to 1e-10 or the eigensolver
    leaves a residual above 1e-10.
    """
    if isinstance(target, CoinField):
        geometry = target.geometry
        U = build_unitary(target)
    else:
        U = np.asarray(target, dtype=np.complex128)
        if geometry is None:
            geometry = Geometry.cycle(U.shape[0] // 2)
    n = U.shape[0]
    if np.abs(U @ U.conj().T - np.eye(n)).max() > 1e-10:
        raise ValueError("matrix is not unitary within tolerance")

    lam, V = np.linalg.eig(U)
    omega = -np.angle(lam)
    omega[omega == -np.pi] = np.pi
    V = V / np.linalg.norm(V, axis=0, keepdims=True)

    order = np.argsort(omega, kind="stable")
    omega = omega[order]
    V = V[:, order]

    # re-orthonormalize clusters that the solver returned non-orthogonal
    i = 0
    while i < n:
        j = i + 1
        while j < n and omega[j] - omega[i] < DEGENERACY_TOL:
            j += 1
        if j - i > 1:
            block = V[:, i:j]
            gram = block.conj().T @ block
            if np.abs(gram - np.eye(j - i)).max() > 1e-12:
                q, _ = np.linalg.qr(block)
                V[:, i:j] = q
                for k in range(i, j):
                    lam_k = np.vdot(V[:, k], U @ V[:, k])
                    omega[k] = -np.angle(lam_k)
        i = j

    residuals = np.linalg.norm(U @ V - V * np.exp(-1j * omega), axis=0)
    if residuals.max() > 1e-10:
        raise ValueError(f"eigensolver residual {residuals.max():.3e} above 1e-10")

    vectors = [WalkerState.from_vector(geometry, V[:, k]) for k in range(n)]
    iprs = np.array([inverse_participation_ratio(v) for v in vectors])

    # deterministic ordering: ascending omega, ties by descending IPR
    order = np.lexsort((-iprs, np.round(omega / DEGENERACY_TOL) * DEGENERACY_TOL))
    return SpectralResult(
        geometry=geometry,
        quasienergies=omega[order],
        eigenvectors=[vectors[k] for k in order],
        residuals=residuals[order],
        ipr=iprs[order],
    )


class LocalizationFit(NamedTuple):
    xi: float
    slope: float
    n_sites: int
    exponential: bool


def localization_length_fit(
    state: WalkerState,
    center: int,
    min_prob: float = 1e-12,
    exclude_nearest: int = 2,
    max_radius: int | None = None,
) -> LocalizationFit:
    """Least-squares localization length of a (putative) exponentially bound state.

    Fits log-amplitude 0.5*log(p_x) against the distance |x - center| over
    sites with p_x above ``min_prob``, excluding the ``exclude_nearest``
    sites closest to the center, and returns xi = -1/slope in sites.  A
    slope magnitude below 1e-3 per site flags the state as non-exponential
    (extended).

    Raises
    ------
    ValueError if fewer than 4 usable sites remain.
    """
    p = position_distribution(state)
    xs = state.geometry.coordinates()
    r = np.abs(xs - center)
    usable = p > min_prob
    if max_radius is not None:
        usable &= r <= max_radius
    idx = np.where(usable)[0]
    if len(idx) > exclude_nearest:
        drop = idx[np.argsort(r[idx], kind="stable")[:exclude_nearest]]
        usable[drop] = False
    idx = np.where(usable)[0]
    if len(idx) < 4:
        raise ValueError(f"only {len(idx)} usable sites; need at least 4 to fit")
    slope = np.polyfit(r[idx], 0.5 * np.log(p[idx]), 1)[0]
    exponential = abs(slope) >= 1e-3
    xi = -1.0 / slope if exponential else np.inf
    return LocalizationFit(float(xi), float(slope), len(idx), bool(exponential))


def gap_state_filter(
    result: SpectralResult,
    window: tuple[float, float],
    ipr_threshold: float | None = None,
) -> list[EigenPair]:
    """Localized eigenpairs with quasienergy inside ``window``.

    The IPR threshold defaults to 2/D: ring band states sit near 1.5/D while
    gap states bi-localized at two boundaries reach about 2.5/D, and
    one-sided edge states are far higher.
    """
    lo, hi = window
    if not (-np.pi <= lo < hi <= np.pi):
        raise ValueError("window must lie inside (-pi, pi]")
    if ipr_threshold is None:
        ipr_threshold = 2.0 / result.geometry.size
    return [
        pair
        for pair in result.pairs()
        if lo <= pair.omega <= hi and pair.ipr > ipr_threshold
    ]


def pair_splitting(result: SpectralResult, omega_target: float) -> tuple[float, float]:
    """Quasienergy gap of the two eigenvalues closest to ``omega_target``.

    Returns (splitting, mean offset from target); used to track how the
    degeneracy of a boundary pair breaks with segment size.
    """
    w = result.quasienergies
    order = np.argsort(np.abs(w - omega_target), kind="stable")[:2]
    pair = np.sort(w[order])
    return float(pair[1] - pair[0]), float(pair.mean() - omega_target)


@dataclass(frozen=True)
class TwoSegmentScenario:
    """Cycle with a theta_A segment of d sites in a theta_B background."""

    size: int = 42
    d: int = 21
    theta_b: float = np.pi / 4
    delta: float = -np.pi / 2
    zeta: float = -np.pi / 2
    sigma: float = 0.0

    def field(self, theta_a: float) -> CoinField:
        return CoinField.two_segment_cycle(
            self.size, self.d, theta_a, self.theta_b, self.delta, self.zeta, self.sigma
        )


def sweep_parameter(
    scenario: TwoSegmentScenario,
    theta_a_grid: Sequence[float],
) -> list[tuple[float, SpectralResult]]:
    """Diagonalize the scenario for every theta_A on the grid.

    Output ordering is deterministic: grid order, and within each result the
    sorted-omega convention of :func:`diagonalize`.
    """
    return [
        (float(theta_a), diagonalize(scenario.field(float(theta_a))))
        for theta_a in theta_a_grid
    ]
