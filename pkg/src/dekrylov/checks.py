"""Verification suite: every acceptance-grade numerical claim as a check.

Each check cross-validates independent routes to the same quantity
(closed form vs dense brute force vs tridiagonal propagation vs exact
log-domain summation) and reports the worst measured deviation next to
its tolerance.  ``run_checks("quick")`` finishes in seconds and sticks
to reduced grids around the small-L oracles; ``run_checks("full")``
runs everything, including the L = 500 scans, well inside ten minutes.
"""

from __future__ import annotations

import math
import os
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import doubled, lanczos, lintri, models, oracle, wigner
from .errors import ArgumentError
from .evolve import (
    complexity,
    moments_from_tridiag,
    propagate,
    renyi2_dense,
    renyi2_tridiag,
    survival_moments_nn,
)
from .models import ModelKind, ModelSpec, analytic_lanczos


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one acceptance check."""

    number: int
    name: str
    passed: bool
    detail: str
    elapsed: float


def _profile_complexity(psi):
    psi = np.asarray(psi, dtype=float)
    return float(np.arange(psi.size) @ (psi * psi)) / float(psi @ psi)


def check_channel_exponential(quick=False):
    """Composed channels equal prefactor * exp(-tau H) on the doubled space.

    Three routes: per-bond/per-pair diagonal products, the explicit Kraus
    expansion as a dense superoperator, and a generic matrix exponential.
    """
    max_len = 4 if quick else 6
    worst = 0.0
    cases = 0
    for length in range(2, max_len + 1):
        nn = ModelSpec(kind=ModelKind.NN, length=length)
        for p in (0.0, 0.1, 0.2, 0.3, 0.45):
            worst = max(worst, oracle.channel_vs_exponential(nn, p))
            cases += 1
        if length % 2 == 0:
            ir = ModelSpec(kind=ModelKind.IR, length=length)
            for tau in (0.0, 0.3, 0.7, 1.2, 2.0):
                worst = max(worst, oracle.channel_vs_exponential(ir, tau))
                cases += 1
    for length in range(2, 5):
        nn = ModelSpec(kind=ModelKind.NN, length=length)
        tau = doubled.tau_from_p(0.3)
        dev = doubled.effective_hamiltonian_check(
            models.build_nn_channel(length, 0.3),
            np.diag(oracle.doubled_hamiltonian_diagonal(nn)),
            math.exp(-(length - 1) * tau),
            tau,
        )
        worst = max(worst, dev)
        cases += 1
        if length % 2 == 0:
            ir = ModelSpec(kind=ModelKind.IR, length=length)
            dev = doubled.effective_hamiltonian_check(
                models.build_ir_channel(length, 0.7),
                np.diag(oracle.doubled_hamiltonian_diagonal(ir)),
                1.0,
                0.7,
            )
            worst = max(worst, dev)
            cases += 1
    for spec in (
        ModelSpec(kind=ModelKind.NN, length=2),
        ModelSpec(kind=ModelKind.NN, length=3),
        ModelSpec(kind=ModelKind.IR, length=2),
    ):
        worst = max(worst, oracle.expm_elementwise_vs_generic(spec, 0.5))
        cases += 1
    return worst <= 1e-12, (
        f"max |channel - prefactor exp(-tau H)| = {worst:.2e} "
        f"over {cases} channel instances (tol 1e-12)"
    )


def check_lanczos_closed_forms(quick=False):
    """Dense Gram-Schmidt and iterative Lanczos match the closed forms."""
    lengths = (4, 6, 8) if quick else (4, 6, 8, 10, 12)
    worst = 0.0
    for length in lengths:
        for kind in (ModelKind.NN, ModelKind.IR):
            spec = ModelSpec(kind=kind, length=length)
            expected = analytic_lanczos(spec)
            dense = oracle.dense_krylov(spec)
            if len(dense.a) != expected.krylov_dim:
                return False, (
                    f"{kind.value} L={length}: dense Krylov dimension "
                    f"{len(dense.a)} != {expected.krylov_dim}"
                )
            worst = max(
                worst,
                float(np.max(np.abs(dense.a - expected.tridiag.diag))),
                float(np.max(np.abs(dense.b - expected.tridiag.offdiag))),
            )
            op = lanczos.operator_from_diagonal(models.reduced_diagonal(spec))
            seed = models.reduced_initial_state(spec).amplitudes
            iterative = lanczos.run_lanczos(op, seed)
            if not iterative.terminated or len(iterative.a) != expected.krylov_dim:
                return False, (
                    f"{kind.value} L={length}: recursion closed at dimension "
                    f"{len(iterative.a)} (terminated={iterative.terminated}), "
                    f"expected {expected.krylov_dim}"
                )
            worst = max(
                worst,
                float(np.max(np.abs(iterative.a - expected.tridiag.diag))),
                float(np.max(np.abs(iterative.b - expected.tridiag.offdiag))),
            )
        # Third route for NN: the dual transverse-field image on L-1 links.
        ham, seed = models.kw_transform_nn(length)
        dual = lanczos.run_lanczos(lanczos.operator_from_dense(ham), seed)
        expected = analytic_lanczos(ModelSpec(kind=ModelKind.NN, length=length))
        if not dual.terminated or len(dual.a) != length:
            return False, f"dual image at L={length} closed at {len(dual.a)} != {length}"
        worst = max(
            worst,
            float(np.max(np.abs(dual.a - expected.tridiag.diag))),
            float(np.max(np.abs(dual.b - expected.tridiag.offdiag))),
        )
    return worst <= 1e-9, (
        f"max coefficient deviation {worst:.2e} over L in {lengths}, "
        "three routes, exact Krylov dimensions (tol 1e-9)"
    )


def check_nn_closed_forms(quick=False):
    """Tridiagonal propagation reproduces the NN binomial wavepacket."""
    lengths = (10,) if quick else (10, 100)
    taus = np.linspace(0.0, 3.0, 31)
    worst_psi = 0.0
    worst_k = 0.0
    plateau_dev = 0.0
    for length in lengths:
        spec = analytic_lanczos(ModelSpec(kind=ModelKind.NN, length=length))
        dec = lintri.eig_tridiag(spec.tridiag)
        for tau in taus:
            state = lintri.expm_from_eig(dec, float(tau))
            closed = models.psi_nn_analytic(length, float(tau))
            worst_psi = max(worst_psi, float(np.max(np.abs(state.psi - closed.psi))))
            worst_k = max(
                worst_k, abs(complexity(state) - models.k_nn_analytic(length, float(tau)))
            )
        plateau = complexity(lintri.expm_from_eig(dec, 5.0)) / (length - 1)
        plateau_dev = max(plateau_dev, abs(plateau - 0.5))
    passed = worst_psi <= 1e-10 and worst_k <= 1e-8 and plateau_dev <= 1e-3
    return passed, (
        f"max |psi - closed form| = {worst_psi:.2e} (tol 1e-10), "
        f"max |K - (L-1) lambda| = {worst_k:.2e} (tol 1e-8), "
        f"plateau |K/(L-1) - 1/2| = {plateau_dev:.2e} at tau=5 (tol 1e-3)"
    )


def check_ir_exact_amplitudes(quick=False):
    """Signed-log exact IR amplitudes equal tridiagonal propagation."""
    lengths = (8, 40) if quick else (8, 40, 100)
    taus = np.linspace(0.0, 3.0, 31)
    passed = True
    parts = []
    for length in lengths:
        spec = analytic_lanczos(ModelSpec(kind=ModelKind.IR, length=length))
        dec = lintri.eig_tridiag(spec.tridiag)
        dev = 0.0
        for tau in taus:
            psi_tri = lintri.expm_from_eig(dec, float(tau)).psi
            psi_exact = wigner.psi_ir_exact_profile(length, float(tau))
            dev = max(dev, float(np.max(np.abs(psi_tri - psi_exact))))
        tol = 1e-6 if length >= 100 else 1e-8
        passed = passed and dev <= tol
        parts.append(f"L={length}: {dev:.2e} (tol {tol:g})")
    return passed, "max |psi_tridiag - psi_exact| over tau in [0,3]: " + ", ".join(parts)


def check_area_law_convergence(quick=False):
    """Finite-L complexity converges to tau^2/(2(1-2 tau)) below the transition."""
    lengths = (100, 200, 500)
    passed = True
    parts = []
    pinned = None
    for tau in (0.1, 0.2, 0.3, 0.4):
        target = models.area_law_k(tau)
        gaps = [
            abs(_profile_complexity(wigner.psi_ir_exact_profile(length, tau)) - target)
            for length in lengths
        ]
        if not all(gaps[i] > gaps[i + 1] for i in range(len(gaps) - 1)):
            passed = False
        if tau == 0.3:
            pinned = gaps[-1]
        parts.append(f"tau={tau:g}: {gaps[0]:.1e} > {gaps[1]:.1e} > {gaps[2]:.1e}")
    passed = passed and pinned is not None and pinned <= 2e-3
    return passed, (
        "gaps |K_L - K_area| over L=(100,200,500): "
        + "; ".join(parts)
        + f"; pinned gap at (L=500, tau=0.3) = {pinned:.2e} (tol 2e-3)"
    )


def check_volume_law_plateau(quick=False):
    """K = L/4 exactly for the flat profile; tridiagonal K/L -> 1/4 at large tau."""
    worst_exact = 0.0
    worst_float = 0.0
    for length in (4, 100, 500):
        total = sum(n * math.comb(length, 2 * n) for n in range(length // 2 + 1))
        if Fraction(total, 2 ** (length - 1)) != Fraction(length, 4):
            return False, f"exact rational identity fails at L={length}"
        worst_exact = max(
            worst_exact,
            abs(float(Fraction(total, 2 ** (length - 1))) - models.volume_law_k(length)),
        )
        profile = wigner.psi_ir_asymptotic_profile(length)
        worst_float = max(
            worst_float,
            abs(_profile_complexity(profile) - models.volume_law_k(length)),
        )
    lengths = (100,) if quick else (100, 200)
    worst_plateau = 0.0
    for length in lengths:
        spec = analytic_lanczos(ModelSpec(kind=ModelKind.IR, length=length))
        worst_plateau = max(
            worst_plateau, abs(complexity(propagate(spec, 10.0)) / length - 0.25)
        )
    passed = worst_exact <= 1e-10 and worst_float <= 1e-9 and worst_plateau <= 0.02
    return passed, (
        f"identity dev {worst_exact:.1e} (tol 1e-10, rational equality exact), "
        f"log-gamma profile route {worst_float:.2e} (tol 1e-9), "
        f"tridiagonal |K/L - 1/4| at tau=10: {worst_plateau:.2e} (tol 0.02)"
    )


def check_crossover_sharpening(quick=False):
    """The K/L slope peak grows with L and sits near tau = 1/2 at L = 500."""
    lengths = (50, 100, 200, 500)
    taus = np.arange(0.29, 0.7101, 0.005)
    max_slopes = []
    peak_taus = []
    for length in lengths:
        k_norm = np.array(
            [
                _profile_complexity(wigner.psi_ir_exact_profile(length, float(tau)))
                for tau in taus
            ]
        ) / length
        slopes = (k_norm[2:] - k_norm[:-2]) / (taus[2:] - taus[:-2])
        peak = int(np.argmax(slopes))
        max_slopes.append(float(slopes[peak]))
        peak_taus.append(float(taus[peak + 1]))
    increasing = all(a < b for a, b in zip(max_slopes, max_slopes[1:]))
    in_window = 0.45 <= peak_taus[-1] <= 0.60
    return increasing and in_window, (
        "max d(K/L)/dtau = "
        + " -> ".join(f"{s:.3f}" for s in max_slopes)
        + f" over L={lengths} (strictly increasing); "
        f"argmax at L=500: tau = {peak_taus[-1]:.3f} (window [0.45, 0.60])"
    )


def check_renyi2_diagnostics(quick=False):
    """chi(0) = 1/L; route agreement; IR curves cross, NN curves do not."""
    worst_zero = 0.0
    for length in range(4, 15, 2):
        for kind in (ModelKind.NN, ModelKind.IR):
            model = ModelSpec(kind=kind, length=length)
            worst_zero = max(worst_zero, abs(renyi2_dense(model, 0.0) - 1.0 / length))
        spec = analytic_lanczos(ModelSpec(kind=ModelKind.IR, length=length))
        chi0 = renyi2_tridiag(spec, propagate(spec, 0.0))
        worst_zero = max(worst_zero, abs(chi0 - 1.0 / length))

    route_lengths = (4, 6, 8) if quick else (4, 6, 8, 10, 12)
    worst_route = 0.0
    for length in route_lengths:
        model = ModelSpec(kind=ModelKind.IR, length=length)
        spec = analytic_lanczos(model)
        dec = lintri.eig_tridiag(spec.tridiag)
        for tau in np.linspace(0.0, 5.0, 26):
            chi_tri = renyi2_tridiag(spec, lintri.expm_from_eig(dec, float(tau)))
            worst_route = max(worst_route, abs(chi_tri - renyi2_dense(model, float(tau))))

    lengths = (8, 10, 12) if quick else (8, 10, 12, 14)
    taus_ir = np.linspace(0.0, 5.0, 201 if quick else 501)
    ir_curves = {
        length: np.array(
            [renyi2_dense(ModelSpec(kind=ModelKind.IR, length=length), float(t)) for t in taus_ir]
        )
        for length in lengths
    }
    crossings_ok = True
    crossing_taus = []
    for i, small in enumerate(lengths):
        for large in lengths[i + 1 :]:
            diff = ir_curves[small] - ir_curves[large]
            flips = np.nonzero(np.sign(diff[:-1]) * np.sign(diff[1:]) < 0)[0]
            if flips.size != 1:
                crossings_ok = False
                continue
            j = int(flips[0])
            t_cross = taus_ir[j] + (taus_ir[j + 1] - taus_ir[j]) * diff[j] / (
                diff[j] - diff[j + 1]
            )
            crossing_taus.append(float(t_cross))
            if not 0.3 <= t_cross <= 0.8:
                crossings_ok = False

    taus_nn = np.linspace(0.0, 3.0, 301)
    nn_curves = {
        length: np.array(
            [renyi2_dense(ModelSpec(kind=ModelKind.NN, length=length), float(t)) for t in taus_nn]
        )
        for length in lengths
    }
    min_gap = math.inf
    for i, small in enumerate(lengths):
        for large in lengths[i + 1 :]:
            min_gap = min(min_gap, float(np.min(nn_curves[small] - nn_curves[large])))

    passed = (
        worst_zero <= 1e-10
        and worst_route <= 1e-9
        and crossings_ok
        and min_gap > 0.0
    )
    window = (
        f"[{min(crossing_taus):.2f}, {max(crossing_taus):.2f}]" if crossing_taus else "none"
    )
    return passed, (
        f"chi(0) dev {worst_zero:.1e} (tol 1e-10); tridiag vs dense {worst_route:.1e} "
        f"(tol 1e-9); IR pairwise crossings at tau in {window} (window [0.3, 0.8]); "
        f"NN min pairwise gap {min_gap:.1e} > 0 on [0, 3]"
    )


def check_moment_consistency(quick=False):
    """Exact integer survival moments equal the tridiagonal moments."""
    lengths = (6, 10) if quick else (6, 10, 30)
    worst = 0.0
    for length in lengths:
        exact = survival_moments_nn(length, 10)
        if exact[0] != 1.0 or exact[1] != 0.0 or exact[2] != float(length - 1):
            return False, (
                f"NN L={length}: low moments {exact[:3]} != (1, 0, L-1) exactly"
            )
        spec = analytic_lanczos(ModelSpec(kind=ModelKind.NN, length=length))
        tri = moments_from_tridiag(spec.tridiag, 10)
        worst = max(
            worst,
            float(np.max(np.abs(exact - tri) / np.maximum(np.abs(exact), 1.0))),
        )
    for length in (8, 12):
        model = ModelSpec(kind=ModelKind.IR, length=length)
        diag = models.reduced_diagonal(model)
        dense_mu = np.array([float(np.mean(diag**n)) for n in range(11)])
        tri = moments_from_tridiag(analytic_lanczos(model).tridiag, 10)
        worst = max(
            worst,
            float(np.max(np.abs(dense_mu - tri) / np.maximum(np.abs(dense_mu), 1.0))),
        )
    return worst <= 1e-10, (
        f"max relative moment deviation {worst:.2e} for n <= 10 "
        "(tol 1e-10; mu_0, mu_1, mu_2 exact)"
    )


def check_wigner_layer(quick=False):
    """Orthonormality, route agreement, the m = s column, and symmetries."""
    theta = 0.5 * math.pi
    spins = (0.5, 5.0, 20.0) if quick else (0.5, 5.0, 20.0, 100.0)
    worst_orth = 0.0
    for s in spins:
        two_s = int(round(2 * s))
        dmat = np.stack(
            [
                wigner.wigner_column_stable(s, s - c, theta).entries
                for c in range(two_s + 1)
            ],
            axis=1,
        )
        gram = dmat.T @ dmat
        worst_orth = max(worst_orth, float(np.max(np.abs(gram - np.eye(two_s + 1)))))

    route_spins = (0.5, 1.0, 2.5, 5.0) if quick else (0.5, 1.0, 2.5, 5.0, 7.5, 10.0)
    worst_route = 0.0
    worst_column = 0.0
    for s in route_spins:
        two_s = int(round(2 * s))
        for angle in (0.5 * math.pi, 0.4, 1.9):
            cos_half = math.cos(0.5 * angle)
            sin_half = math.sin(0.5 * angle)
            for c in range(two_s + 1):
                column = wigner.wigner_column_stable(s, s - c, angle).entries
                for r in range(two_s + 1):
                    direct = wigner.wigner_d(s, s - r, s - c, angle)
                    worst_route = max(worst_route, abs(direct - column[r]))
                    if c == 0:
                        closed = (
                            math.sqrt(math.comb(two_s, two_s - r))
                            * cos_half ** (two_s - r)
                            * sin_half**r
                        )
                        worst_column = max(worst_column, abs(direct - closed))

    worst_sym = 0.0
    for s in (1.0, 2.5, 6.0):
        two_s = int(round(2 * s))
        magnetics = [s - i for i in range(two_s + 1)]
        for mp in magnetics:
            for m in magnetics:
                base = wigner.wigner_d(s, mp, m, 0.7)
                parity = (-1.0) ** round(mp - m)
                worst_sym = max(
                    worst_sym,
                    abs(base - wigner.wigner_d(s, m, mp, -0.7)),
                    abs(base - parity * wigner.wigner_d(s, m, mp, 0.7)),
                    abs(base - parity * wigner.wigner_d(s, -mp, -m, 0.7)),
                )
    passed = (
        worst_orth <= 1e-10
        and worst_route <= 1e-11
        and worst_column <= 1e-12
        and worst_sym <= 1e-11
    )
    return passed, (
        f"column orthonormality {worst_orth:.1e} (tol 1e-10, s up to {max(spins):g}); "
        f"spectral vs factorial-sum {worst_route:.1e} (tol 1e-11); "
        f"m = s column closed form {worst_column:.1e} (tol 1e-12); "
        f"symmetry identities {worst_sym:.1e} (tol 1e-11)"
    )


def check_error_state_interpretation(quick=False):
    """Every Krylov vector is an n-error state orthogonal to lower spans."""
    if quick:
        cases = ((ModelKind.NN, 4), (ModelKind.IR, 4), (ModelKind.IR, 6))
    else:
        cases = (
            (ModelKind.NN, 4),
            (ModelKind.NN, 6),
            (ModelKind.IR, 4),
            (ModelKind.IR, 6),
            (ModelKind.IR, 8),
        )
    checked = 0
    for kind, length in cases:
        spec = ModelSpec(kind=kind, length=length)
        for n in range(analytic_lanczos(spec).krylov_dim):
            if not oracle.error_state_interpretation_check(spec, n):
                return False, (
                    f"{kind.value} L={length}: Krylov vector {n} is not an "
                    "n-error state"
                )
            checked += 1
    return True, (
        f"all {checked} Krylov vectors lie in their n-error span and are "
        "orthogonal to the fewer-error span (tol 1e-8)"
    )


def check_cli_determinism(quick=False):
    """cmd_evolve output is byte-identical across thread counts and reruns."""
    from . import cli  # imported lazily; cli itself imports this module

    base = [
        "evolve",
        "--model",
        "ir",
        "--lengths",
        "8,12",
        "--tau",
        "0:2:101",
        "--format",
        "csv",
    ]
    blobs = []
    with tempfile.TemporaryDirectory() as tmp:
        for run, threads in enumerate(("1", "8", "8")):
            path = os.path.join(tmp, f"run{run}.csv")
            code = cli.main(base + ["--threads", threads, "--out", path])
            if code != 0:
                return False, f"cmd_evolve exited with code {code}"
            with open(path, "rb") as handle:
                blobs.append(handle.read())
    if blobs[0] == blobs[1] == blobs[2]:
        return True, (
            f"byte-identical CSV ({len(blobs[0])} bytes) across --threads 1/8 "
            "and a repeated run"
        )
    return False, "outputs differ across thread counts"


CHECKS = (
    (1, "channel equals imaginary-time propagator", check_channel_exponential),
    (2, "Lanczos coefficients match closed forms", check_lanczos_closed_forms),
    (3, "NN wavepacket and complexity closed forms", check_nn_closed_forms),
    (4, "IR exact amplitudes vs tridiagonal propagation", check_ir_exact_amplitudes),
    (5, "area-law complexity convergence", check_area_law_convergence),
    (6, "volume-law plateau K = L/4", check_volume_law_plateau),
    (7, "crossover slope sharpens with L", check_crossover_sharpening),
    (8, "Renyi-2 correlator diagnostics", check_renyi2_diagnostics),
    (9, "survival moment consistency", check_moment_consistency),
    (10, "Wigner rotation layer", check_wigner_layer),
    (11, "Krylov vectors are n-error states", check_error_state_interpretation),
    (12, "CLI output is thread-count independent", check_cli_determinism),
)

# The quick level skips the L = 500 scans (5, 7) and the CLI round trip (12).
QUICK_NUMBERS = frozenset({1, 2, 3, 4, 6, 8, 9, 10, 11})


def run_checks(level="full"):
    """Run the verification suite at ``level`` in {"quick", "full"}."""
    if level not in ("quick", "full"):
        raise ArgumentError(f"level must be 'quick' or 'full', got {level!r}")
    quick = level == "quick"
    results = []
    for number, name, fn in CHECKS:
        if quick and number not in QUICK_NUMBERS:
            continue
        started = time.perf_counter()
        try:
            passed, detail = fn(quick=quick)
        except Exception as err:  # a crashed check is a failed check
            passed, detail = False, f"raised {type(err).__name__}: {err}"
        results.append(
            CheckResult(
                number=number,
                name=name,
                passed=passed,
                detail=detail,
                elapsed=time.perf_counter() - started,
            )
        )
    return results
