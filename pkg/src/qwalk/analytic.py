"""Closed-form eigenstates and transcendental quantization of finite walks.

Three families are covered:

* interface-localized states of two half-lines with opposite-sign theta,
  with energies omega = delta + eta, eta in {0, pi};
* gap and band eigenstates of a finite wire with reflecting ends, from the
  recursive amplitude equations: a single scalar quantization condition in
  omega (gap) or in the Bloch momentum k (band), plus explicit amplitude
  formulas, unified over odd/even site counts via zeta_size in {1, 2};
* the symmetry operators Omega (particle-hole), Lambda (sublattice),
  Pi (parity), Gamma (chiral) and the phase-dressed Omega' that generate
  the quasienergy quartet {omega, -omega, omega - pi, pi - omega}.

Conventions: a wire of D sites uses line coordinates with reflecting coins
at x = x_left and x = x_left + D - 1.  For odd D the bulk is -L..L with
L = (D-3)/2 and zeta_size = 1; for even D the bulk is -L+1..L with
L = (D-2)/2 and zeta_size = 2.  Z = L + 1 - zeta_size/2.

The gap quantization is solved in a log-transformed form,

    log1p(-sin w) - log cos w = log1p(sin chi) - log cos chi + log tanh(kZ),

which stays perfectly conditioned even when the root is below 1e-20 (deep
wires at large theta), where the raw tangent form loses all precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import (
    CoinField,
    Geometry,
    WalkerState,
    evolve,
    fold_angle,
    overlap,
    position_distribution,
)

__all__ = [
    "InterfaceStateSpec",
    "InterfaceState",
    "AnalyticGapSolution",
    "AnalyticBandSolution",
    "localization_length",
    "interface_state",
    "tail_probability",
    "decompose_initial",
    "DecompositionResult",
    "k0_rate",
    "solve_gap",
    "approx_gap_energy",
    "gap_eigenvector",
    "solve_band",
    "band_eigenvector",
    "seam_channel_pair",
    "wire_spectrum",
    "symmetry_apply",
    "symmetry_matrix",
    "confined_mask",
    "gap_quartet",
    "rabi_gap_prediction",
    "RabiGapPrediction",
    "wire_half_length",
]


class MarginalGapError(ValueError):
    """Raised at the measure-zero marginal case cos(omega) = cos(theta)."""


# ---------------------------------------------------------------------------
# interface-localized states
# ---------------------------------------------------------------------------

def localization_length(theta: float) -> float:
    """Decay length xi(theta) = 1/ln(cos theta / (1 - sin theta)) in sites.

    Positive for theta > 0, negative for theta < 0; |xi| is the e-folding
    length of the amplitude.  Diverges at the gapless points theta in {0, pi}.
    """
    denom = np.log(np.cos(theta) / (1.0 - np.sin(theta)))
    if denom == 0.0:
        raise ValueError("localization length diverges at theta = 0")
    return 1.0 / denom


@dataclass(frozen=True)
class InterfaceStateSpec:
    """Parameters of a sharp interface: theta_minus < 0 < theta_plus."""

    theta_minus: float
    theta_plus: float
    delta: float = 0.0
    zeta: float = 0.0
    sigma: float = 0.0
    eta: float = 0.0  # 0 or pi

    def __post_init__(self) -> None:
        if not (self.theta_minus < 0.0 < self.theta_plus):
            raise ValueError("interface requires theta_minus < 0 < theta_plus")
        for th in (self.theta_minus, self.theta_plus):
            if abs(np.sin(th)) < 1e-12 or abs(abs(th) - np.pi) < 1e-12:
                raise ValueError("gapless coin (theta in {0, pi}) has no bound state")
        if self.eta not in (0.0, np.pi):
            raise ValueError("eta must be 0 or pi")


@dataclass
class InterfaceState:
    """Normalized interface-localized eigenstate on a truncated line."""

    state: WalkerState
    xi_plus: float
    xi_minus: float  # positive e-folding length of the x < 0 side
    norm_constant: float
    omega: float
    truncation_radius: int


def interface_state(spec: InterfaceStateSpec, radius: int | None = None) -> InterfaceState:
    """Construct the bound state of a sharp interface, truncated at ``radius``.

    The two-branch amplitudes are

        a_x = e^{i (zeta + eta) x} e^{-x / xi_side},
        b_x = -e^{-1 / xi_side} e^{-i sigma} a_x,

    with xi_side = xi(theta_plus) for x >= 0 and xi(theta_minus) for x < 0.
    The sigma phase on the left-mover is site-independent; it is fixed by the
    phase-dressing that maps any uniform-phase coin onto the real-coin walk
    (the same dressing used by the wire eigenstates), and one step of the
    exact evolution reproduces the state to machine precision times
    e^{-i (delta + eta)}.

    The default radius is 40 * max(|xi|), which keeps the discarded tail mass
    below 1e-12 (checked; a ValueError reports a too-small radius).
    """
    xi_p = localization_length(spec.theta_plus)
    xi_m = localization_length(spec.theta_minus)
    if radius is None:
        radius = int(np.ceil(40.0 * max(xi_p, -xi_m)))
    if radius < np.ceil(20.0 * max(xi_p, -xi_m)):
        raise ValueError("truncation radius below 20 localization lengths")

    geometry = Geometry.line_of_radius(radius)
    xs = geometry.coordinates()
    xi = np.where(xs >= 0, xi_p, xi_m)
    amp = np.exp(1j * (spec.zeta + spec.eta) * xs) * np.exp(-xs / xi)
    a = amp.astype(np.complex128)
    b = -np.exp(-1.0 / xi) * np.exp(-1j * spec.sigma) * amp

    # analytic norm of the untruncated state and the discarded tail mass
    norm_constant = 1.0 / np.sin(spec.theta_plus) - 1.0 / np.sin(spec.theta_minus)
    q_p = np.exp(-2.0 / xi_p)
    q_m = np.exp(+2.0 / xi_m)  # both q in (0, 1)
    tail = (1 + q_p) / (1 - q_p) * q_p ** (radius + 1) + (1 + q_m) / (1 - q_m) * q_m ** (radius + 1)
    if tail / norm_constant > 1e-12:
        raise ValueError(f"tail mass beyond radius is {tail / norm_constant:.2e} > 1e-12")

    n = np.sqrt(np.sum(np.abs(a) ** 2 + np.abs(b) ** 2))
    state = WalkerState(geometry, a / n, b / n)
    return InterfaceState(
        state=state,
        xi_plus=xi_p,
        xi_minus=-xi_m,
        norm_constant=norm_constant,
        omega=fold_angle(spec.delta + spec.eta),
        truncation_radius=radius,
    )


def tail_probability(theta_minus: float, theta_plus: float, x: float) -> float:
    """Small-theta tail law p(x) = exp(-2 |x| |theta_side|).

    Accurate in the small-angle regime (|theta| <= pi/10 or so) where the
    localization length approaches 1/theta; the side is chosen by sign(x).
    """
    th = theta_plus if x >= 0 else theta_minus
    return float(np.exp(-2.0 * abs(x) * abs(th)))


@dataclass
class DecompositionResult:
    c: complex
    band_weight: float
    overlap_eta0: complex
    overlap_etapi: complex
    consistent: bool


def decompose_initial(
    state: WalkerState,
    eta0_state: WalkerState,
    etapi_state: WalkerState,
    tol: float = 1e-10,
) -> DecompositionResult:
    """Split a state into the two interface-localized modes plus a band rest.

    For an initial state localized at the interface site both overlaps are
    equal; then the state is c|psi_0> + c|psi_pi> + sqrt(1 - 2|c|^2)|band>
    and ``band_weight`` = 1 - 2|c|^2.  When the overlaps differ by more than
    ``tol`` the decomposition does not apply; both raw overlaps are returned
    with ``consistent`` set to False and band_weight = 1 - |c0|^2 - |cpi|^2.
    """
    c0 = overlap(eta0_state, state)
    cpi = overlap(etapi_state, state)
    consistent = abs(c0 - cpi) <= tol
    if consistent:
        band = 1.0 - 2.0 * abs(c0) ** 2
        return DecompositionResult(c0, float(band), c0, cpi, True)
    band = 1.0 - abs(c0) ** 2 - abs(cpi) ** 2
    return DecompositionResult(c0, float(band), c0, cpi, False)


# ---------------------------------------------------------------------------
# finite wire: gap state
# ---------------------------------------------------------------------------

def wire_half_length(size: int) -> tuple[int, int]:
    """(L, zeta_size) of a D-site wire: odd D -> ((D-3)/2, 1), even D -> ((D-2)/2, 2)."""
    if size % 2:
        return (size - 3) // 2, 1
    return (size - 2) // 2, 2


def k0_rate(theta: float) -> float:
    """Asymptotic decay rate k0 = ln((1 + sin theta)/cos theta) of the gap state."""
    return float(np.log((1.0 + np.sin(theta)) / np.cos(theta)))


def approx_gap_energy(theta: float, L: int, zeta_size: int = 1) -> float:
    """Leading-order gap energy: 2 tan(theta) ((1+sin)/cos)^(zeta_size-3) e^(-2 k0 L)."""
    g = (1.0 + np.sin(theta)) / np.cos(theta)
    return float(2.0 * np.tan(theta) * g ** (zeta_size - 3) * np.exp(-2.0 * k0_rate(theta) * L))


@dataclass
class AnalyticGapSolution:
    """Positive-energy gap root of a reflecting-end wire and its parameters."""

    theta: float
    L: int
    zeta_size: int
    omega: float
    k: float
    k0: float
    chi: float
    phi: float
    phi0: float
    mu: int
    z: int
    residual: float

    @property
    def Z(self) -> float:
        return self.L + 1.0 - self.zeta_size / 2.0


def _gap_condition_log(omega: float, theta: float, Z: float) -> float:
    """log[(1-sin w)/cos w] - log[(1+sin chi)/cos chi] - log tanh(kZ).

    Decreasing in omega; the unique gap root is its zero.  All terms are
    evaluated through log1p/expm1 so the equation keeps full relative
    precision when omega and 1 - tanh(kZ) underflow the 1e-16 scale.
    """
    s, c = np.sin(theta), np.cos(theta)
    so = np.sin(omega)
    ratio = np.cos(omega) / c
    if ratio <= 1.0:
        raise MarginalGapError("cos(omega) <= cos(theta): outside the gap sector")
    k = np.arccosh(ratio)
    eps = np.exp(-2.0 * k * Z)
    lhs = np.log1p(-so) - np.log(np.cos(omega))
    schi = so / s
    rhs_phi = np.log1p(schi) - 0.5 * np.log1p(-schi * schi)
    rhs_tanh = np.log1p(-2.0 * eps / (1.0 + eps))
    return lhs - rhs_phi - rhs_tanh


def solve_gap(theta: float, L: int, zeta_size: int = 1) -> AnalyticGapSolution:
    """Solve the gap quantization condition for the positive root in (0, theta).

    The scalar condition is tan(omega/2 - pi/4) = -tan(chi/2 + pi/4) tanh(kZ)
    with sin(chi) = sin(omega)/sin(theta) and cosh(k) = cos(omega)/cos(theta);
    k and chi are eliminated and the remaining equation in omega is bracketed
    and refined by Brent's method in the log-transformed form (module header).

    Raises
    ------
    ValueError if no sign change exists in the gap (invalid inputs) or at the
    marginal point cos(omega) = cos(theta).
    """
    if not 0.0 < theta < np.pi / 2:
        raise ValueError("gap solver requires 0 < theta < pi/2")
    if L < 1:
        raise ValueError("need L >= 1")
    if zeta_size not in (1, 2):
        raise ValueError("zeta_size must be 1 (odd wire) or 2 (even wire)")
    Z = L + 1.0 - zeta_size / 2.0
    w0 = approx_gap_energy(theta, L, zeta_size)

    lo = w0 * 1e-6
    hi = min(0.999_999 * theta, max(w0 * 1e3, 1e-3 * theta))
    f_lo = _gap_condition_log(lo, theta, Z)
    f_hi = _gap_condition_log(hi, theta, Z)
    if f_lo <= 0.0 or f_hi >= 0.0:
        # fall back to a log-spaced scan of the whole gap
        grid = np.exp(np.linspace(np.log(w0 * 1e-12), np.log(0.999_999 * theta), 400))
        vals = np.array([_gap_condition_log(w, theta, Z) for w in grid])
        sgn = np.sign(vals)
        flips = np.where(sgn[:-1] * sgn[1:] < 0)[0]
        if len(flips) == 0:
            raise ValueError(
                f"no gap root found for theta={theta}, L={L}, zeta_size={zeta_size}"
            )
        lo, hi = grid[flips[0]], grid[flips[0] + 1]

    omega = brentq(
        _gap_condition_log, lo, hi, args=(theta, Z), xtol=5e-324, rtol=8.9e-16
    )
    residual = abs(_gap_condition_log(omega, theta, Z))
    k = float(np.arccosh(np.cos(omega) / np.cos(theta)))
    chi = float(np.arcsin(np.sin(omega) / np.sin(theta)))
    sol = AnalyticGapSolution(
        theta=theta,
        L=L,
        zeta_size=zeta_size,
        omega=float(omega),
        k=k,
        k0=k0_rate(theta),
        chi=chi,
        phi=chi / 2.0 + np.pi / 4.0,
        phi0=w0 / (2.0 * np.sin(theta)),
        mu=+1,
        z=-1,
        residual=float(residual),
    )
    if residual > 1e-12:
        raise ValueError(f"gap root residual {residual:.3e} above 1e-12")
    return sol


def _wire_vector(
    geometry: Geometry,
    a_of_x,
    zeta: float,
    sigma: float,
) -> WalkerState:
    """Assemble (a_x, b_x = a*_{x+1}) on a wire, dress with uniform phases.

    The end sites carry a single live amplitude each: a = 0 at the left end
    and b = 0 at the right end, which is what confines the state.
    """
    xs = geometry.coordinates()
    x_left, x_right = xs[0], xs[-1]
    a = np.zeros(geometry.size, dtype=np.complex128)
    b = np.zeros(geometry.size, dtype=np.complex128)
    for i, x in enumerate(xs):
        if x > x_left:
            a[i] = a_of_x(x)
        if x < x_right:
            b[i] = np.conj(a_of_x(x + 1))
    dress = np.exp(1j * zeta * xs)
    a *= dress
    b *= dress * np.exp(-1j * sigma)
    n = np.sqrt(np.sum(np.abs(a) ** 2 + np.abs(b) ** 2))
    return WalkerState(geometry, a / n, b / n)


def gap_eigenvector(
    sol: AnalyticGapSolution,
    zeta: float = 0.0,
    sigma: float = 0.0,
) -> WalkerState:
    """Normalized gap eigenstate built from the solved (omega, k, phi).

    Bulk amplitudes follow

        a_x = e^{-i pi/4} ( e^{k (x - zeta_size/2) + i phi}
                          + e^{-(k (x - zeta_size/2) + i phi)} ),
        b_x = a*_{x+1},

    then the uniform-phase dressing a_x -> e^{i zeta x} a_x,
    b_x -> e^{i zeta x} e^{-i sigma} b_x lifts the real-coin solution to the
    general coin.  The confining boundary conditions (no a on the left end,
    no b on the right end) are built in structurally.
    """
    geometry = _wire_geometry(sol.L, sol.zeta_size)
    k, phi, half = sol.k, sol.phi, sol.zeta_size / 2.0

    def a_of_x(x: float) -> complex:
        u = k * (x - half)
        return np.exp(-1j * np.pi / 4) * (np.exp(u + 1j * phi) + np.exp(-(u + 1j * phi)))

    return _wire_vector(geometry, a_of_x, zeta, sigma)


def _wire_geometry(L: int, zeta_size: int) -> Geometry:
    size = 2 * L + 3 if zeta_size == 1 else 2 * L + 2
    return Geometry.wire(size)


# ---------------------------------------------------------------------------
# finite wire: band states
# ---------------------------------------------------------------------------

@dataclass
class AnalyticBandSolution:
    """One positive-energy band root (parity mu) of a reflecting-end wire."""

    theta: float
    L: int
    zeta_size: int
    omega: float
    k: float
    mu: int
    chi: float
    psi: float
    residual: float

    @property
    def Z(self) -> float:
        return self.L + 1.0 - self.zeta_size / 2.0


def _band_condition(k: float, theta: float, Z: float, mu: int) -> float:
    """Pole-free form of the band quantization condition.

    The raw condition tan(w/2 + pi/4) sqrt((sin w + s)/(sin w - s))
    = -tan(kZ + (1+mu) pi/4) is multiplied through by the cosines and the
    square root, leaving an analytic function of k on (0, pi) whose simple
    zeros are exactly the band roots.
    """
    s = np.sin(theta)
    om = np.arccos(np.cos(theta) * np.cos(k))
    A = om / 2.0 + np.pi / 4.0
    B = k * Z + (1 + mu) * np.pi / 4.0
    inner = max(np.sin(om) - s, 0.0)
    return np.sin(A) * np.sqrt(np.sin(om) + s) * np.cos(B) + np.cos(A) * np.sqrt(inner) * np.sin(B)


def solve_band(theta: float, L: int, zeta_size: int = 1) -> list[AnalyticBandSolution]:
    """All positive-energy band roots, omega in (theta, pi - theta).

    For each parity mu the condition is scanned over 8 D brackets in
    k in (0, pi) (roots are near-uniform in k, so this always brackets every
    one) and refined by Brent.  Negative-energy partners follow from the
    particle-hole map and are generated by the quartet, not re-solved.
    The expected count is D - 3 for a D-site wire; a mismatch against the
    full diagonalization indicates an invalid input.
    """
    if not 0.0 < theta < np.pi / 2:
        raise ValueError("band solver requires 0 < theta < pi/2")
    Z = L + 1.0 - zeta_size / 2.0
    size = 2 * L + 3 if zeta_size == 1 else 2 * L + 2
    ks = np.linspace(0.0, np.pi, 8 * size + 1)[1:-1]
    out: list[AnalyticBandSolution] = []
    for mu in (+1, -1):
        vals = np.array([_band_condition(k, theta, Z, mu) for k in ks])
        for i in range(len(ks) - 1):
            if vals[i] == 0.0:
                root = float(ks[i])
            elif vals[i] * vals[i + 1] < 0.0:
                root = brentq(
                    _band_condition, ks[i], ks[i + 1], args=(theta, Z, mu),
                    xtol=1e-15, rtol=8.9e-16,
                )
            else:
                continue
            om = float(np.arccos(np.cos(theta) * np.cos(root)))
            chi = float(np.arcsin(np.sin(theta) / np.sin(om)))
            psi = float(
                np.arctan(np.tan(root * Z + (1 + mu) * np.pi / 4.0) * np.cos(chi) / (1.0 + np.sin(chi)))
            )
            out.append(
                AnalyticBandSolution(
                    theta=theta,
                    L=L,
                    zeta_size=zeta_size,
                    omega=om,
                    k=float(root),
                    mu=mu,
                    chi=chi,
                    psi=psi,
                    residual=abs(_band_condition(root, theta, Z, mu)),
                )
            )
    out.sort(key=lambda s: s.omega)
    for sol in out:
        if sol.residual > 1e-10:
            raise ValueError(f"band root residual {sol.residual:.3e} above 1e-10")
    expected = size - 3
    if len(out) != expected:
        raise ValueError(
            f"found {len(out)} positive band roots, expected {expected} for D={size}"
        )
    return out


def band_eigenvector(
    sol: AnalyticBandSolution,
    zeta: float = 0.0,
    sigma: float = 0.0,
) -> WalkerState:
    """Normalized band eigenstate for one positive root.

    Bulk amplitudes are

        a_x = e^{i pi/4} sum_{+-} sqrt(1 +- cos chi)
                         e^{+- i (k (x - zeta_size/2) + phi)},

    with phi = (1 + mu) pi/4, dressed and confined as for the gap state.
    """
    geometry = _wire_geometry(sol.L, sol.zeta_size)
    k, chi, half = sol.k, sol.chi, sol.zeta_size / 2.0
    phi = (1 + sol.mu) * np.pi / 4.0
    cp = np.sqrt(1.0 + np.cos(chi))
    cm = np.sqrt(1.0 - np.cos(chi))

    def a_of_x(x: float) -> complex:
        u = k * (x - half) + phi
        return np.exp(1j * np.pi / 4) * (cp * np.exp(1j * u) + cm * np.exp(-1j * u))

    return _wire_vector(geometry, a_of_x, zeta, sigma)


def seam_channel_pair(
    size: int,
    delta: float = 0.0,
    zeta: float = 0.0,
    sigma: float = 0.0,
) -> list[tuple[float, WalkerState]]:
    """The two ring-embedding eigenstates living on the reflecting end channels.

    Embedding a wire on a ring leaves a two-dimensional invariant subspace
    spanned by the right-mover on the left end and the left-mover on the
    right end; the reflecting coins swap them through the seam, giving exact
    eigenstates at omega = delta -+ pi/2.  They complete the 2D-state count
    of the ring unitary and are excluded from the wire-confined block.
    """
    geometry = Geometry.wire(size)
    lam_phase = np.exp(-1j * (zeta + sigma))
    out = []
    for sign in (+1, -1):
        # eigenvalue +-i e^{-i delta}; omega = delta -+ pi/2
        a = np.zeros(size, dtype=np.complex128)
        b = np.zeros(size, dtype=np.complex128)
        a[0] = 1.0 / np.sqrt(2.0)
        b[-1] = -1j * sign * lam_phase / np.sqrt(2.0)
        omega = fold_angle(delta - sign * np.pi / 2.0)
        out.append((float(omega), WalkerState(geometry, a, b)))
    return out


# ---------------------------------------------------------------------------
# symmetries and the quasienergy quartet
# ---------------------------------------------------------------------------

def confined_mask(geometry: Geometry) -> np.ndarray:
    """Boolean mask of the wire-confined block of the flat 2D-vector basis.

    Drops the right-mover at the left end and the left-mover at the right
    end, the two channels that hop through the ring seam.
    """
    if geometry.kind != "wire":
        return np.ones(2 * geometry.size, dtype=bool)
    keep = np.ones(2 * geometry.size, dtype=bool)
    keep[0] = False
    keep[-1] = False
    return keep


def symmetry_matrix(
    which: str,
    geometry: Geometry,
    zeta: float = 0.0,
    sigma: float = 0.0,
) -> tuple[np.ndarray, bool]:
    """Matrix of a symmetry operator in the flat basis.

    Returns (M, antiunitary): a unitary acts as v -> M v, an antiunitary as
    v -> M conj(v).  Operators:

    * ``omega``        -- particle-hole (plain complex conjugation; M = I),
    * ``omega_prime``  -- conjugation dressed by e^{2 i zeta x} and
                          diag(1, e^{-2 i sigma}), for uniform-phase coins,
    * ``lambda``       -- sublattice sign (-1)^x,
    * ``pi``           -- reflection times sigma_y; for even site counts the
                          reflection center shifts to x -> 1 - x,
    * ``gamma``        -- chiral operator S (I x sigma_x).
    """
    D = geometry.size
    xs = geometry.coordinates()
    if which == "omega":
        return np.eye(2 * D, dtype=np.complex128), True
    if which == "omega_prime":
        d = np.empty(2 * D, dtype=np.complex128)
        d[0::2] = np.exp(2j * zeta * xs)
        d[1::2] = np.exp(2j * zeta * xs) * np.exp(-2j * sigma)
        return np.diag(d), True
    if which == "lambda":
        d = np.repeat((-1.0) ** np.abs(xs), 2).astype(np.complex128)
        return np.diag(d), False
    if which == "pi":
        center_shift = 0 if D % 2 else 1  # odd: x -> -x, even: x -> 1 - x
        sy = np.array([[0.0, -1j], [1j, 0.0]])
        M = np.zeros((2 * D, 2 * D), dtype=np.complex128)
        for i, x in enumerate(xs):
            xr = center_shift - x
            j = int(np.where(xs == xr)[0][0])
            M[2 * j : 2 * j + 2, 2 * i : 2 * i + 2] = sy
        return M, False
    if which == "gamma":
        sx = np.array([[0.0, 1.0], [1.0, 0.0]])
        M = np.zeros((2 * D, 2 * D), dtype=np.complex128)
        for i in range(D):
            ip1, im1 = (i + 1) % D, (i - 1) % D
            # S after sigma_x: a_out[x+1] = b_in[x], b_out[x-1] = a_in[x]
            M[2 * ip1, 2 * i + 1] = 1.0
            M[2 * im1 + 1, 2 * i] = 1.0
        return M, False
    raise ValueError(f"unknown symmetry {which!r}")


def symmetry_apply(
    which: str,
    state: WalkerState,
    zeta: float = 0.0,
    sigma: float = 0.0,
) -> WalkerState:
    """Apply one of the symmetry operators to a state (sitewise, fast path)."""
    xs = state.geometry.coordinates()
    a, b = state.a, state.b
    if which == "omega":
        return WalkerState(state.geometry, np.conj(a), np.conj(b), state.normalized)
    if which == "omega_prime":
        ph = np.exp(2j * zeta * xs)
        return WalkerState(
            state.geometry,
            ph * np.conj(a),
            ph * np.exp(-2j * sigma) * np.conj(b),
            state.normalized,
        )
    if which == "lambda":
        sign = (-1.0) ** np.abs(xs)
        return WalkerState(state.geometry, sign * a, sign * b, state.normalized)
    if which == "pi":
        M, _ = symmetry_matrix("pi", state.geometry)
        return WalkerState.from_vector(state.geometry, M @ state.to_vector(), state.normalized)
    if which == "gamma":
        # sigma_x swaps the coin components, then the shift moves them
        return WalkerState(state.geometry, np.roll(b, 1), np.roll(a, -1), state.normalized)
    raise ValueError(f"unknown symmetry {which!r}")


def gap_quartet(
    state: WalkerState,
    omega: float,
    field: CoinField,
    residual_tol: float = 1e-10,
) -> list[tuple[float, WalkerState]]:
    """Generate the four-fold family {omega, -omega, omega-pi, pi-omega}.

    Applies the dressed particle-hole map, the sublattice sign and their
    product to an eigenstate at ``omega`` and verifies every output is an
    eigenstate of the walk at the mapped energy (one exact step, residual
    below ``residual_tol``).  Raises if the input itself fails the check.
    Valid for uniform-phase coin fields with delta = 0.
    """
    zeta = field.coins[0].zeta
    sigma = field.coins[0].sigma
    phs_state = symmetry_apply("omega_prime", state, zeta, sigma)
    lam_state = symmetry_apply("lambda", state)
    both = symmetry_apply("lambda", phs_state)
    members = [
        (fold_angle(omega), state),
        (fold_angle(-omega), phs_state),
        (fold_angle(omega - np.pi), lam_state),
        (fold_angle(np.pi - omega), both),
    ]
    for w, st in members:
        res = eigenstate_residual(st, field, w)
        if res > residual_tol:
            raise ValueError(f"quartet member at omega={w:+.6f} has residual {res:.3e}")
    return members


def eigenstate_residual(state: WalkerState, field: CoinField, omega: float) -> float:
    """|| U psi - e^{-i omega} psi || via one exact evolution step."""
    stepped = evolve(state, field, 1, check_seam=False)
    lam = np.exp(-1j * omega)
    return float(
        np.sqrt(
            np.sum(np.abs(stepped.a - lam * state.a) ** 2)
            + np.sum(np.abs(stepped.b - lam * state.b) ** 2)
        )
    )


# ---------------------------------------------------------------------------
# assembled wire spectrum and the Rabi gap
# ---------------------------------------------------------------------------

def wire_spectrum(
    theta: float,
    size: int,
    zeta: float = 0.0,
    sigma: float = 0.0,
    delta: float = 0.0,
) -> list[tuple[float, WalkerState, str]]:
    """Every eigenpair of the ring-embedded wire, fully in closed form.

    Returns 2D triples (omega, state, label): the gap quartet from the
    transcendental gap root, the positive band roots with their particle-hole
    partners, and the two seam-channel states.  A uniform delta shifts all
    quasienergies without changing the eigenvectors.
    """
    L, zc = wire_half_length(size)
    # verify against the delta = 0 field; a uniform delta multiplies the
    # unitary by a global phase, shifting every omega without touching vectors
    field0 = CoinField.wire(size, theta, -1, -1, 0.0, zeta, sigma)

    out: list[tuple[float, WalkerState, str]] = []
    gap = solve_gap(theta, L, zc)
    vg = gap_eigenvector(gap, zeta, sigma)
    quartet = gap_quartet(vg, gap.omega, field0)
    for (w, st), lab in zip(quartet, ("gap", "gap:-w", "gap:w-pi", "gap:pi-w")):
        out.append((fold_angle(w + delta), st, lab))

    for sol in solve_band(theta, L, zc):
        vb = band_eigenvector(sol, zeta, sigma)
        out.append((fold_angle(sol.omega + delta), vb, f"band:mu={sol.mu:+d}"))
        vminus = symmetry_apply("omega_prime", vb, zeta, sigma)
        out.append((fold_angle(-sol.omega + delta), vminus, f"band:-w:mu={sol.mu:+d}"))

    out.extend((w, st, "seam") for w, st in seam_channel_pair(size, delta, zeta, sigma))
    out.sort(key=lambda t: t[0])
    return out


@dataclass
class RabiGapPrediction:
    """Gap splitting of a reflecting-end wire and the resulting Rabi period."""

    theta: float
    size: int
    omega: float
    delta_omega: float          # 2 * exact gap root
    period: float               # 2 pi / delta_omega
    delta_omega_approx: float   # 2 * leading-order omega_0
    delta_omega_main_text: float  # closed form with exponent -2D, for comparison


def rabi_gap_prediction(theta: float, size: int) -> RabiGapPrediction:
    """Exact and approximate energy splitting of the wire's central gap pair.

    ``delta_omega`` doubles the transcendental gap root (the pair sits at
    +-omega).  Two closed forms are reported side by side: the leading-order
    approximation with exponent e^{-2 k0 L}, which tracks the exact root,
    and the variant with exponent -2D in the size itself, which differs by
    orders of magnitude and is kept only for comparison.
    """
    L, zc = wire_half_length(size)
    sol = solve_gap(theta, L, zc)
    g = (1.0 + np.sin(theta)) / np.cos(theta)
    main_text = 2.0 * np.sin(2.0 * theta) / (1.0 + np.sin(theta)) ** 2 * g ** (-2.0 * size)
    return RabiGapPrediction(
        theta=theta,
        size=size,
        omega=sol.omega,
        delta_omega=2.0 * sol.omega,
        period=2.0 * np.pi / (2.0 * sol.omega),
        delta_omega_approx=2.0 * approx_gap_energy(theta, L, zc),
        delta_omega_main_text=float(main_text),
    )
