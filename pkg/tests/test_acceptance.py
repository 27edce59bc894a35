"""Acceptance suite: one test per acceptance criterion, at the stated
tolerances, each printing a single PASS/FAIL line (run with ``pytest -v -s``).

Known limitations are documented inline where a stated bound conflicts with
the exactly-computed physics; the corresponding assertions are kept at the
stated values and fail honestly rather than being loosened.
"""

import time

import numpy as np
import pytest

from qwalk import (
    CoinField,
    CoinParams,
    Geometry,
    InterfaceStateSpec,
    WalkerState,
    approx_gap_energy,
    build_unitary,
    diagonalize,
    eigenstate_residual,
    evolve,
    gap_quartet,
    interface_state,
    k0_rate,
    localization_length,
    localization_length_fit,
    position_distribution,
    run_cycle_spectrum,
    run_defect_scan,
    run_disorder_rabi,
    run_interface_evolution,
    run_rabi_transport,
    solve_gap,
    symmetry_matrix,
    wire_spectrum,
)
from qwalk.analytic import confined_mask
from qwalk.spectral import pair_splitting


def report(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:02d} [{'PASS' if ok else 'FAIL'}] {detail}")


# ---------------------------------------------------------------------------
# 1. unitarity & bipartite parity
# ---------------------------------------------------------------------------

def test_c01_unitarity_and_parity():
    t0 = time.perf_counter()
    # 1000 steps on the 301-site ring
    geo = Geometry.cycle(301)
    fld = CoinField.homogeneous(geo, CoinParams(np.pi / 4))
    start = WalkerState.basis_state(geo, 150, (1, 1j))  # even site
    final, traj = evolve(start, fld, 1000, record=True)
    norm_dev = abs(final.norm() - 1.0)

    # exact bipartite parity before the light cone wraps the odd-size ring
    # (wraps at t = 151; past that the ring mixes the sublattices, so the
    # exact check at t = 1000 runs on a ring satisfying D >= 2 t + 1 + 1)
    xs = np.arange(301)
    max_pre_wrap = 0.0
    for t in range(2, 151, 2):
        odd = (np.abs(xs - 150) % 2) == 1
        max_pre_wrap = max(max_pre_wrap, traj[t][odd].max())

    geo2 = Geometry.line(1000)
    fld2 = CoinField.homogeneous(geo2, CoinParams(np.pi / 4))
    start2 = WalkerState.basis_state(geo2, 0, (1, 1j))
    final2, traj2 = evolve(start2, fld2, 1000, record=True)
    xs2 = geo2.coordinates()
    odd2 = np.abs(xs2) % 2 == 1
    max_even_t = traj2[0::2][:, odd2].max()
    elapsed = time.perf_counter() - t0

    ok = norm_dev < 1e-10 and max_pre_wrap == 0.0 and max_even_t == 0.0 and elapsed < 1.0
    report(1, ok, f"|norm-1|={norm_dev:.2e}, odd-site max (pre-wrap ring)={max_pre_wrap:.1e}, "
                  f"(line, t<=1000)={max_even_t:.1e}, runtime={elapsed:.2f}s")
    assert norm_dev < 1e-10
    assert max_pre_wrap == 0.0
    assert max_even_t == 0.0
    assert elapsed < 1.0


# ---------------------------------------------------------------------------
# 2. interface eigenstate
# ---------------------------------------------------------------------------

def test_c02_interface_eigenstate():
    worst = 0.0
    for eta in (0.0, np.pi):
        spec = InterfaceStateSpec(-np.pi / 4, np.pi / 4, sigma=np.pi / 6, eta=eta)
        st = interface_state(spec, radius=200)
        fld = CoinField.interface(st.state.geometry, -np.pi / 4, np.pi / 4, sigma=np.pi / 6)
        worst = max(worst, eigenstate_residual(st.state, fld, st.omega))
    st = interface_state(InterfaceStateSpec(-np.pi / 4, np.pi / 4, sigma=np.pi / 6), radius=200)
    fit = localization_length_fit(st.state, center=0)
    xi_target = localization_length(np.pi / 4)
    rel = abs(fit.xi - xi_target) / xi_target
    ok = worst < 1e-10 and rel < 0.05
    report(2, ok, f"max residual={worst:.2e}, xi fit={fit.xi:.4f} vs {xi_target:.4f} ({rel:.2%})")
    assert worst < 1e-10
    assert rel < 0.05


# ---------------------------------------------------------------------------
# 3. trapped oscillation
# ---------------------------------------------------------------------------

def test_c03_trapped_oscillation():
    # window: innermost central sites (|x| <= 1).  A window as wide as the
    # whole trapped state conserves its mass and averages the sublattice
    # alternation away (lag-2 autocorrelation 0.97 at |x| <= 3); the
    # period-2 oscillation itself lives at the interface cell.
    run = run_interface_evolution(
        -np.pi / 4, np.pi / 4, sigma=np.pi / 6, steps=150, window_radius=1
    )
    w = run.central_window[50:151]
    corr = float(np.corrcoef(w[:-2], w[2:])[0, 1])
    d = np.diff(w)
    alternates = bool(np.all(np.sign(d[:-1]) == -np.sign(d[1:])))
    ok = corr > 0.99 and alternates
    report(3, ok, f"lag-2 autocorrelation={corr:.5f} (window |x|<=1), strict alternation={alternates}")
    assert alternates
    assert corr > 0.99


# ---------------------------------------------------------------------------
# 4. tail law
# ---------------------------------------------------------------------------

def test_c04_tail_law():
    # stated protocol: t = 150, even-site fit over |x| in [10, 60], within
    # 5 percent of -2|theta| on each side.  The band background at t = 150
    # still dominates the bound-state tail beyond |x| of about 40 (the law
    # emerges cleanly at larger t or smaller fit windows); measured slopes
    # at the stated protocol sit far outside 5 percent, and this test
    # records that fact rather than loosening the bound.
    run = run_interface_evolution(-np.pi / 40, np.pi / 80, sigma=np.pi / 6, steps=150)
    xs = run.coordinates
    p = run.final_distribution
    results = {}
    for side, theta in (("right", np.pi / 80), ("left", np.pi / 40)):
        if side == "right":
            sel = (xs >= 10) & (xs <= 60) & (xs % 2 == 0)
        else:
            sel = (xs <= -10) & (xs >= -60) & (xs % 2 == 0)
        slope = np.polyfit(np.abs(xs[sel]), np.log(p[sel]), 1)[0]
        results[side] = (slope, -2 * theta, abs(slope - (-2 * theta)) / (2 * theta))
    ok = all(rel < 0.05 for _, _, rel in results.values())
    detail = ", ".join(
        f"{side}: slope={s:.4f} target={t:.4f} ({rel:.1%})"
        for side, (s, t, rel) in results.items()
    )
    report(4, ok, detail)
    for side, (slope, target, rel) in results.items():
        assert rel < 0.05, (
            f"{side} side: fitted slope {slope:.4f} vs {target:.4f} deviates {rel:.1%} "
            "(band background contaminates |x| > 40 at t = 150; see decisions ledger)"
        )


# ---------------------------------------------------------------------------
# 5. two-segment cycle spectra
# ---------------------------------------------------------------------------

def test_c05_cycle_spectra():
    t0 = time.perf_counter()
    grid = np.linspace(-np.pi / 2, -np.pi / 4, 100)
    spec1 = run_cycle_spectrum(42, 1, theta_a_grid=grid)
    spec21 = run_cycle_spectrum(42, 21, theta_a_grid=grid)
    elapsed = time.perf_counter() - t0

    def splitting(omegas, target):
        order = np.argsort(np.abs(omegas - target))[:2]
        pair = np.sort(omegas[order])
        return pair[1] - pair[0], abs(pair.mean() - target)

    # at theta_A = -pi/2: two gap pairs at +-pi/2, d = 21 splitting < 1e-6
    split_props = []
    for target in (np.pi / 2, -np.pi / 2):
        s, off = splitting(spec21.omegas[0], target)
        split_props.append((s, off))
    pairs_ok = all(s < 1e-6 and off < 1e-6 for s, off in split_props)

    # strict ordering d=1 > d=21 across the grid; the exact -pi/2 endpoint is
    # excluded: there the defect reflects totally and decouples the ring, so
    # the d=1 pair is degenerate below eigensolver resolution (ledgered)
    s1 = np.array([splitting(spec1.omegas[i], np.pi / 2)[0] for i in range(1, 100)])
    s21 = np.array([splitting(spec21.omegas[i], np.pi / 2)[0] for i in range(1, 100)])
    ordering_ok = bool(np.all(s1 > s21))

    ok = pairs_ok and ordering_ok and elapsed < 30.0
    report(5, ok, f"d=21 splittings at -pi/2: {split_props[0][0]:.2e}/{split_props[1][0]:.2e}, "
                  f"d=1 > d=21 at all 99 interior points: {ordering_ok}, runtime={elapsed:.1f}s")
    assert pairs_ok
    assert ordering_ok
    assert elapsed < 30.0


# ---------------------------------------------------------------------------
# 6. anti-localization
# ---------------------------------------------------------------------------

def test_c06_anti_localization():
    scan = run_defect_scan([np.pi / 3, -np.pi / 3], theta_b=np.pi / 4, steps=150)
    xs = scan.coordinates
    i0 = int(np.where(xs == 0)[0][0])
    anti = scan.distributions[0]
    loc = scan.distributions[1]
    anti_ok = anti[i0] < 0.5 * (anti[i0 - 2] + anti[i0 + 2])
    loc_ok = loc[i0] > loc[i0 - 2] and loc[i0] > loc[i0 + 2]
    ok = anti_ok and loc_ok
    report(6, ok, f"theta_A=+pi/3: p(0)={anti[i0]:.2e} < mean(p(+-2))={(anti[i0-2]+anti[i0+2])/2:.2e}; "
                  f"theta_A=-pi/3: p(0)={loc[i0]:.2e} > p(+-2)={loc[i0-2]:.2e}")
    assert anti_ok
    assert loc_ok


# ---------------------------------------------------------------------------
# 7. appendix solver oracle equivalence
# ---------------------------------------------------------------------------

def test_c07_wire_solver_oracle_equivalence():
    theta, size = np.pi / 10, 21
    fld = CoinField.wire(size, theta)
    numeric = np.sort(diagonalize(fld).quasienergies)
    full = wire_spectrum(theta, size)
    analytic = np.sort([w for w, _, _ in full])
    count_ok = len(analytic) == len(numeric) == 2 * size
    max_dev = float(np.abs(analytic - numeric).max())
    worst_res = max(eigenstate_residual(v, fld, w) for w, v, _ in full)
    ok = count_ok and max_dev < 1e-9 and worst_res < 1e-9
    report(7, ok, f"42/42 energies matched, max |d omega|={max_dev:.2e}, "
                  f"max eigenvector residual={worst_res:.2e}")
    assert count_ok
    assert max_dev < 1e-9
    assert worst_res < 1e-9


# ---------------------------------------------------------------------------
# 8. gap scaling
# ---------------------------------------------------------------------------

THETAS_FIG20 = (np.pi / 20, np.pi / 6, np.pi / 4, np.pi / 3, 2 * np.pi / 5)


def test_c08_gap_scaling_approximation():
    worst = 0.0
    for theta in THETAS_FIG20:
        for L in range(5, 15):
            sol = solve_gap(theta, L)
            worst = max(worst, abs(sol.omega / approx_gap_energy(theta, L) - 1.0))
    ok = worst < 0.1
    report(8, ok, f"omega_0 vs exact root, worst relative deviation {worst:.2%} (L >= 5)")
    assert worst < 0.1


def test_c08_gap_scaling_slopes():
    # ln(omega_exact) versus L in [4, 14], regression slope within 2 percent
    # of -2 k0.  At theta = pi/20 the exact root still carries finite-size
    # curvature over this range (slope deviation 3.2 percent; it reaches
    # 2 percent only for L of about 8 and up), so that theta fails the
    # stated bound; the solver itself is verified against diagonalization
    # to 1e-12 above.  Kept at the stated tolerance (see decisions ledger).
    Ls = np.arange(4, 15)
    deviations = {}
    for theta in THETAS_FIG20:
        ws = [solve_gap(float(theta), int(L)).omega for L in Ls]
        slope = np.polyfit(Ls, np.log(ws), 1)[0]
        deviations[theta] = abs(slope - (-2 * k0_rate(theta))) / (2 * k0_rate(theta))
    ok = all(rel < 0.02 for rel in deviations.values())
    detail = ", ".join(f"theta={t:.3f}: {rel:.2%}" for t, rel in deviations.items())
    report(8, ok, "slope deviations: " + detail)
    for theta, rel in deviations.items():
        assert rel < 0.02, (
            f"theta={theta:.4f}: regression slope deviates {rel:.2%} from -2 k0 over "
            "L in [4, 14] (finite-size curvature of the exact root; ledgered)"
        )


# ---------------------------------------------------------------------------
# 9. Rabi transport
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def rabi_run():
    t0 = time.perf_counter()
    run = run_rabi_transport(21, np.pi / 10)
    return run, time.perf_counter() - t0


def test_c09_rabi_transport(rabi_run):
    run, elapsed = rabi_run
    conf_ok = run.confinement > 1 - 1e-9
    period_rel = abs(run.period_estimate - run.period_predicted) / run.period_predicted
    ok = conf_ok and period_rel < 0.01 and elapsed < 10.0
    report(9, ok, f"min(p_L+p_R)={run.confinement:.12f}, delta_omega={run.delta_omega:.3e}, "
                  f"period={run.period_estimate:.1f} vs 2pi/dw={run.period_predicted:.1f} "
                  f"({period_rel:.3%}), runtime={elapsed:.1f}s")
    assert conf_ok
    assert period_rel < 0.01
    assert elapsed < 10.0


def test_c09_rabi_center_probability(rabi_run):
    # stated bound: centre-of-wire probability < 1e-3 throughout.  The gap
    # pair itself puts 1.14e-3 on the central site at D = 21, theta = pi/10
    # (every state of the two-level subspace does), so the bound is exceeded
    # by 14 percent at t = 0 already; kept at the stated value (ledgered).
    run, _ = rabi_run
    peak = float(run.center_probability.max())
    ok = peak < 1e-3
    report(9, ok, f"max centre-site probability {peak:.3e} (stated bound 1e-3)")
    assert peak < 1e-3, (
        f"centre-of-wire probability reaches {peak:.3e}; the gap-pair profile "
        "itself carries 1.14e-3 at the central site (see decisions ledger)"
    )


# ---------------------------------------------------------------------------
# 10. symmetry suite
# ---------------------------------------------------------------------------

def test_c10_symmetry_suite():
    fld = CoinField.wire(21, np.pi / 10)
    U = build_unitary(fld)
    geo = fld.geometry
    n = 2 * geo.size

    devs = {}
    for name in ("omega", "lambda", "pi", "gamma"):
        M, anti = symmetry_matrix(name, geo)
        square = M @ np.conj(M) if anti else M @ M
        devs[f"{name}^2"] = np.abs(square - np.eye(n)).max()

    lam, _ = symmetry_matrix("lambda", geo)
    pi_m, _ = symmetry_matrix("pi", geo)
    gam, _ = symmetry_matrix("gamma", geo)
    keep = confined_mask(geo)
    anti_dev_full = np.abs(lam @ U @ lam + U)
    # sublattice anticommutation: exact on the wire block; the two seam
    # channels of the odd ring embedding violate it structurally (ledgered)
    devs["lambda-anticommute(confined)"] = anti_dev_full[np.ix_(keep, keep)].max()
    devs["pi-commute"] = np.abs(pi_m @ U @ pi_m.conj().T - U).max()
    devs["gamma-inverts"] = np.abs(gam @ U @ gam.conj().T - U.conj().T).max()
    devs["omega-phs"] = np.abs(np.conj(U) - U).max()

    matrix_ok = all(v < 1e-12 for v in devs.values())

    # general-coin quartet, zeta = 0.3, sigma = 0.5
    fld2 = CoinField.wire(21, np.pi / 10, -1, -1, 0.0, 0.3, 0.5)
    res2 = diagonalize(fld2)
    plus = min((p for p in res2.pairs() if p.omega > 0), key=lambda p: p.omega)
    members = gap_quartet(plus.vector, plus.omega, fld2, residual_tol=1e-9)
    targets = [plus.omega, -plus.omega, plus.omega - np.pi, np.pi - plus.omega]
    quartet_dev = 0.0
    for (w, st), target in zip(members, targets):
        folded = np.mod(target + np.pi, 2 * np.pi) - np.pi
        folded = np.pi if folded == -np.pi else folded
        quartet_dev = max(quartet_dev, abs(w - folded))
        quartet_dev = max(quartet_dev, eigenstate_residual(st, fld2, w))
    quartet_ok = quartet_dev < 1e-9

    ok = matrix_ok and quartet_ok
    worst = max(devs.items(), key=lambda kv: kv[1])
    report(10, ok, f"worst matrix identity: {worst[0]}={worst[1]:.2e}; "
                   f"general-coin quartet deviation {quartet_dev:.2e}")
    assert matrix_ok, devs
    assert quartet_ok


# ---------------------------------------------------------------------------
# 11. disorder robustness
# ---------------------------------------------------------------------------

def test_c11_disorder_robustness():
    good = 0
    periods = []
    for seed in range(50):
        r = run_disorder_rabi(21, (0.0, np.pi / 5), seed=seed, steps=200, initial_mode="pair")
        if r.found_pair and r.analysis.confinement > 0.8:
            good += 1
            periods.append(r.analysis.period_predicted)
    dispersion = float(np.std(periods))
    ok = good >= 45 and dispersion > 0.0
    report(11, ok, f"{good}/50 realizations with a gap pair and confinement > 0.8; "
                   f"period std {dispersion:.0f} steps")
    assert good >= 45
    assert dispersion > 0.0
