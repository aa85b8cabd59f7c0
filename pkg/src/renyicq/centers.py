"""Weighted divergence centers and radii of gcq channels.

The headline solvers iterate the center fixed-point maps with adaptive
damping; nothing here assumes the iteration contracts, so every solve is
guarded by a direct-minimization fallback and results carry an explicit
``converged`` flag plus a fixed-point residual.  A brute-force oracle
(`oracle_grid_center`) provides an independent check at small dimension.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import backend
from .channels import GcqChannel, InputDistribution, average_output, lifted_state
from .divergences import RenyiParams, classify_region, d_alpha_z, q_alpha_z, umegaki
from .exceptions import SingularInputError
from .operators import (
    SUPPORT_RTOL,
    DensityOperator,
    HermitianOperator,
    herm,
    support_power,
    support_projection,
    trace_norm,
)

FIXED_POINT = "fixed_point"
CLOSED_FORM_Z1 = "closed_form_z1"
DIRECT_MINIMIZATION = "direct_minimization"
ORACLE_GRID = "oracle_grid"

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10000

# Damping schedule: start at min(1, 1/alpha) (the multiplier of the
# linearized map is 1-alpha on commuting directions), halve on stalls down
# to 2^-10, and for alpha << 1 switch to guarded extrapolation ~ 1/alpha.
_GAMMA_FLOOR = 2.0 ** -10
_GAMMA_CAP = 50.0


@dataclass
class CenterResult:
    """Outcome of a center solve.

    ``residual`` is the trace-norm fixed-point defect at the returned
    center; ``converged`` implies residual <= tol.  ``heuristic`` marks
    solves outside the proven parameter region.
    """

    center: HermitianOperator
    value: float
    iterations: int
    residual: float
    converged: bool
    method: str
    heuristic: bool = False


# ---------------------------------------------------------------------------
# Shared machinery
# ---------------------------------------------------------------------------

def _compressed_problem(w: GcqChannel, p: InputDistribution, params: RenyiParams):
    """Restrict the solve to ran W(P)^0 and pre-power the outputs."""
    avg = average_output(w, p)
    wa, va = avg.eig
    keep = wa > float(wa[-1]) * SUPPORT_RTOL
    iso = va[:, keep]
    symbols = p.support
    probs = np.array([p.probability(s) for s in symbols])
    a, z = params.alpha, params.z
    wpows = np.stack(
        [iso.conj().T @ support_power(w.output(s), a / z).mat @ iso for s in symbols]
    )
    sigma0 = iso.conj().T @ avg.mat @ iso
    sigma0 = 0.5 * (sigma0 + sigma0.conj().T)
    w_traces = np.array([w.output(s).trace() for s in symbols])
    return iso, symbols, probs, wpows, sigma0, w_traces


def _assemble(kind, phi_d, phi_t, probs, q):
    if kind == "D":
        tr = float(np.trace(phi_d).real)
        if abs(tr - 1.0) > 1e-12:
            phi_d = phi_d / tr
        return phi_d
    if kind == "Qbar":
        return phi_t / float(probs @ q)
    return phi_t


def _run_fixed_point(wpows, probs, sigma0, z, spow, alpha, tol, max_iter, kind):
    """Damped iteration of one of the three center maps on the compressed space.

    Returns (sigma, iterations, trace-norm residual, converged).
    """
    normalized = kind in ("D", "Qbar")
    k = sigma0.shape[0]
    sqrt_k = math.sqrt(k)
    sigma = np.array(sigma0, dtype=complex)
    if normalized:
        sigma = sigma / float(np.trace(sigma).real)
    gamma = min(1.0, 1.0 / alpha)
    prev_sigma = None
    prev_res = math.inf
    stall = 0
    it = 0
    while it < max_iter:
        it += 1
        phi_d, phi_t, q = backend.center_sweep(sigma, wpows, probs, z, spow)
        if q.min() <= 0.0:
            raise SingularInputError(
                "a supported symbol has vanishing overlap with the iterate"
            )
        phi = _assemble(kind, phi_d, phi_t, probs, q)
        diff = phi - sigma
        res_f = float(np.linalg.norm(diff))
        scale = 1.0 if normalized else max(1.0, abs(float(np.trace(sigma).real)))
        if res_f * sqrt_k <= tol * scale:
            return sigma, it, trace_norm(diff), True
        if res_f <= tol * scale:
            tn = trace_norm(diff)
            if tn <= tol * scale:
                return sigma, it, tn, True

        if prev_sigma is not None and res_f > prev_res * 1.25 and gamma > _GAMMA_FLOOR:
            sigma = prev_sigma
            prev_sigma = None
            gamma = max(0.5 * gamma, _GAMMA_FLOOR)
            stall = 0
            continue

        if res_f >= prev_res * (1.0 - 1e-3):
            stall += 1
        else:
            stall = 0
        if stall >= 10:
            gamma = max(0.5 * gamma, _GAMMA_FLOOR)
            stall = 0
        if alpha < 0.1 and gamma == 1.0 and it >= 40:
            gamma = min(1.0 / alpha, _GAMMA_CAP)

        prev_sigma = sigma
        prev_res = res_f
        sigma = sigma + gamma * diff
        sigma = 0.5 * (sigma + sigma.conj().T)
        if gamma > 1.0:
            wv, vv = np.linalg.eigh(sigma)
            sigma = (vv * np.clip(wv, 0.0, None)) @ vv.conj().T
        if normalized:
            sigma = sigma / float(np.trace(sigma).real)

    phi_d, phi_t, q = backend.center_sweep(sigma, wpows, probs, z, spow)
    phi = _assemble(kind, phi_d, phi_t, probs, q)
    return sigma, it, trace_norm(phi - sigma), False


def _pack_cholesky(sigma):
    k = sigma.shape[0]
    jitter = max(float(np.trace(sigma).real), 1.0) * 1e-12
    ell = np.linalg.cholesky(sigma + jitter * np.eye(k))
    parts = [ell.diagonal().real]
    for i in range(1, k):
        parts.append(ell[i, :i].real)
        parts.append(ell[i, :i].imag)
    return np.concatenate(parts)


def _unpack_cholesky(theta, k):
    ell = np.zeros((k, k), dtype=complex)
    ell[np.diag_indices(k)] = theta[:k]
    pos = k
    for i in range(1, k):
        re = theta[pos:pos + i]
        pos += i
        im = theta[pos:pos + i]
        pos += i
        ell[i, :i] = re + 1j * im
    return ell @ ell.conj().T


def _nm_minimize(objective, k, starts, maxfev=20000, fatol=1e-14, xatol=1e-10):
    best_x, best_f = None, math.inf
    for s in starts:
        res = optimize.minimize(
            objective,
            _pack_cholesky(s),
            method="Nelder-Mead",
            options={"maxfev": maxfev, "xatol": xatol, "fatol": fatol},
        )
        if res.fun < best_f:
            best_x, best_f = res.x, res.fun
    return _unpack_cholesky(best_x, k), best_f


def _fallback_starts(sigma_last, sigma0, k, seed=7):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    rand = g @ g.conj().T
    rand /= float(np.trace(rand).real)
    return [sigma_last, sigma0, np.eye(k) / k, rand]


def _embed(iso, sigma):
    return iso @ sigma @ iso.conj().T


def weighted_divergence(w: GcqChannel, p: InputDistribution, params: RenyiParams,
                        sigma) -> float:
    """F(sigma) = sum_x P(x) D_{alpha,z}(W(x) || sigma)."""
    sigma = herm(sigma)
    total = 0.0
    for sym, prob in p.items():
        if prob == 0.0:
            continue
        total += prob * d_alpha_z(w.output(sym), sigma, params)
    return total


def _signed_q_radius(w, p, params, sigma) -> float:
    """chi_Qbar evaluated at sigma: s(alpha) * sum_x P(x) Q(W(x)||sigma)."""
    acc = 0.0
    for sym, prob in p.items():
        if prob == 0.0:
            continue
        acc += prob * q_alpha_z(w.output(sym), sigma, params)
    return params.s * acc


def _require_finite_z(params, op):
    params.require_not_one(op)
    if params.is_log_euclidean:
        raise ValueError(f"{op} requires finite z; use solve_center_direct for z=inf")


# ---------------------------------------------------------------------------
# Fixed-point maps (public, full-space, single step)
# ---------------------------------------------------------------------------

def _check_support_match(sigma, w, p):
    proj_sigma = support_projection(herm(sigma)).mat
    proj_avg = support_projection(average_output(w, p)).mat
    if float(np.linalg.norm(proj_sigma - proj_avg)) > 1e-6:
        raise ValueError("sigma must have the same support as W(P)")


def _map_terms(w, p, params, sigma):
    a, z = params.alpha, params.z
    shalf = support_power(herm(sigma), (1.0 - a) / (2.0 * z)).mat
    terms = []
    for sym, prob in p.items():
        if prob == 0.0:
            continue
        wpow = support_power(w.output(sym), a / z).mat
        inner = shalf @ wpow @ shalf
        g = support_power(HermitianOperator(inner), z)
        qx = g.trace()
        if qx <= 0.0:
            raise SingularInputError(f"Q vanished for supported symbol {sym!r}")
        terms.append((prob, qx, g.mat))
    return terms


def fixed_point_map_D(w: GcqChannel, p: InputDistribution, params: RenyiParams,
                      sigma: DensityOperator) -> DensityOperator:
    """One application of the per-symbol-normalized center map.

    Phi(sigma) = sum_x P(x) Q_x^{-1} (sigma^{(1-a)/2z} W(x)^{a/z}
    sigma^{(1-a)/2z})^z; analytically trace preserving, renormalized only if
    roundoff drifts the trace by more than 1e-12.
    """
    _require_finite_z(params, "fixed_point_map_D")
    _check_support_match(sigma, w, p)
    acc = np.zeros((w.dim, w.dim), dtype=complex)
    for prob, qx, g in _map_terms(w, p, params, sigma):
        acc += (prob / qx) * g
    tr = float(np.trace(acc).real)
    if abs(tr - 1.0) > 1e-12:
        acc = acc / tr
    return DensityOperator(acc)


def fixed_point_map_Qbar(w: GcqChannel, p: InputDistribution, params: RenyiParams,
                         sigma: DensityOperator) -> DensityOperator:
    """One application of the globally-normalized center map."""
    _require_finite_z(params, "fixed_point_map_Qbar")
    _check_support_match(sigma, w, p)
    acc = np.zeros((w.dim, w.dim), dtype=complex)
    tau = 0.0
    for prob, qx, g in _map_terms(w, p, params, sigma):
        acc += prob * g
        tau += prob * qx
    return DensityOperator(acc / tau)


def fixed_point_map_tsallis(w: GcqChannel, p: InputDistribution, params: RenyiParams,
                            sigma: HermitianOperator) -> HermitianOperator:
    """One application of the unnormalized (PSD power-mean) map."""
    _require_finite_z(params, "fixed_point_map_tsallis")
    acc = np.zeros((w.dim, w.dim), dtype=complex)
    a, z = params.alpha, params.z
    shalf = support_power(herm(sigma), (1.0 - a) / (2.0 * z)).mat
    for sym, prob in p.items():
        if prob == 0.0:
            continue
        wpow = support_power(w.output(sym), a / z).mat
        inner = shalf @ wpow @ shalf
        acc += prob * support_power(HermitianOperator(inner), z).mat
    return HermitianOperator(acc)


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------

def _solve_common(w, p, params, tol, max_iter, sigma0, kind, fallback=True):
    iso, symbols, probs, wpows, sig0c, w_traces = _compressed_problem(w, p, params)
    k = sig0c.shape[0]
    a, z = params.alpha, params.z
    spow = (1.0 - a) / (2.0 * z)
    normalized = kind in ("D", "Qbar")
    if sigma0 is not None:
        sig_start = iso.conj().T @ herm(sigma0).mat @ iso
        sig_start = 0.5 * (sig_start + sig_start.conj().T)
    else:
        sig_start = sig0c
    if normalized:
        sig_start = sig_start / float(np.trace(sig_start).real)

    sigma, iters, residual, ok = _run_fixed_point(
        wpows, probs, sig_start, z, spow, a, tol, max_iter, kind
    )
    method = FIXED_POINT
    if not ok and fallback:
        sigma_nm, _ = _nm_minimize(
            _compressed_objective(kind, wpows, probs, z, spow, a, w_traces, normalized),
            k,
            _fallback_starts(sigma, sig0c, k),
        )
        if normalized:
            sigma_nm = sigma_nm / float(np.trace(sigma_nm).real)
        obj = _compressed_objective(kind, wpows, probs, z, spow, a, w_traces, False)
        if obj(_pack_cholesky(sigma_nm)) < obj(_pack_cholesky(sigma)):
            sigma = sigma_nm
            method = DIRECT_MINIMIZATION
        phi_d, phi_t, q = backend.center_sweep(sigma, wpows, probs, z, spow)
        residual = trace_norm(_assemble(kind, phi_d, phi_t, probs, q) - sigma)
        scale = 1.0 if normalized else max(1.0, abs(float(np.trace(sigma).real)))
        ok = residual <= tol * scale
    return iso, sigma, iters, residual, ok, method


def _compressed_objective(kind, wpows, probs, z, spow, alpha, w_traces, normalize):
    sign = -1.0 if alpha < 1.0 else 1.0

    def objective(theta):
        k = wpows.shape[1]
        sigma = _unpack_cholesky(theta, k)
        tr = float(np.trace(sigma).real)
        if tr <= 0.0 or not np.isfinite(tr):
            return 1e300
        if normalize or kind in ("D", "Qbar"):
            sig = sigma / tr
        else:
            sig = sigma
        q = backend.q_sweep(sig, wpows, z, spow)
        if kind == "D":
            if q.min() <= 0.0:
                return 1e300
            return float(np.sum(probs * np.log(q / w_traces)) / (alpha - 1.0))
        if kind == "Qbar":
            return sign * float(probs @ q)
        # Tsallis: minimized over unnormalized PSD sigma
        return float(
            (alpha * (probs @ w_traces) + (1.0 - alpha) * tr - probs @ q) / (1.0 - alpha)
        )

    return objective


def solve_center_D(w: GcqChannel, p: InputDistribution, params: RenyiParams,
                   tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                   sigma0=None, fallback: bool = True) -> CenterResult:
    """Weighted divergence center and radius chi_{alpha,z}(W, P).

    Damped fixed-point iteration from W(P) restricted to its support, with a
    direct-minimization fallback.  Outside the proven parameter region the
    result is stamped ``heuristic``.
    """
    _require_finite_z(params, "solve_center_D")
    report = classify_region(params)
    heuristic = not (report.in_Gamma_D and report.second_arg_convex_D)
    iso, sigma, iters, residual, ok, method = _solve_common(
        w, p, params, tol, max_iter, sigma0, "D", fallback
    )
    center = DensityOperator(_embed(iso, sigma))
    value = weighted_divergence(w, p, params, center)
    return CenterResult(center, value, iters, residual, ok, method, heuristic)


def solve_center_Qbar(w: GcqChannel, p: InputDistribution, params: RenyiParams,
                      tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                      sigma0=None, fallback: bool = True) -> CenterResult:
    """Weighted Q-bar center; ``value`` is the signed radius chi_Qbar."""
    _require_finite_z(params, "solve_center_Qbar")
    report = classify_region(params)
    heuristic = not (report.in_Gamma_Qbar and report.second_arg_convex_Qbar)
    iso, sigma, iters, residual, ok, method = _solve_common(
        w, p, params, tol, max_iter, sigma0, "Qbar", fallback
    )
    center = DensityOperator(_embed(iso, sigma))
    value = _signed_q_radius(w, p, params, center)
    return CenterResult(center, value, iters, residual, ok, method, heuristic)


def solve_center_tsallis(w: GcqChannel, p: InputDistribution, params: RenyiParams,
                         tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                         sigma0=None, fallback: bool = True) -> CenterResult:
    """PSD Tsallis center (unnormalized) and the Tsallis radius.

    At the fixed point Tr sigma* equals the weighted Q-value, and
    sigma*/Tr sigma* is the Q-bar center.
    """
    _require_finite_z(params, "solve_center_tsallis")
    report = classify_region(params)
    heuristic = not (report.in_Gamma_Qbar and report.second_arg_convex_Qbar)
    iso, sigma, iters, residual, ok, method = _solve_common(
        w, p, params, tol, max_iter, sigma0, "T", fallback
    )
    center = HermitianOperator(_embed(iso, sigma))
    normalized = DensityOperator(center.mat)
    signed = _signed_q_radius(w, p, params, normalized)
    tr_wp = average_output(w, p).trace()
    a = params.alpha
    value = (a / (1.0 - a)) * (tr_wp - signed ** (1.0 / a))
    return CenterResult(center, value, iters, residual, ok, method, heuristic)


def closed_form_center_z1(w: GcqChannel, p: InputDistribution, alpha: float) -> CenterResult:
    """Power-mean center at z = 1: omega = (sum_x P(x) W(x)^alpha)^(1/alpha).

    The normalized omega is the unique Q-bar center; ``value`` is the signed
    radius s(alpha) (Tr omega)^alpha, directly comparable with
    solve_center_Qbar at z = 1.
    """
    if alpha <= 0 or alpha == 1.0:
        raise ValueError("closed_form_center_z1 needs alpha in (0, inf) away from 1")
    params = RenyiParams.petz(alpha)
    acc = np.zeros((w.dim, w.dim), dtype=complex)
    for sym, prob in p.items():
        if prob == 0.0:
            continue
        acc += prob * support_power(w.output(sym), alpha).mat
    omega = support_power(HermitianOperator(acc), 1.0 / alpha)
    tr = omega.trace()
    center = DensityOperator(omega.mat / tr)
    value = params.s * tr ** alpha
    residual = trace_norm(fixed_point_map_Qbar(w, p, params, center).mat - center.mat)
    return CenterResult(center, value, 0, residual, True, CLOSED_FORM_Z1)


def solve_center_direct(w: GcqChannel, p: InputDistribution, params: RenyiParams,
                        maxfev: int = 40000, seed: int = 7) -> CenterResult:
    """Direct minimization of F(sigma) over states (works for z = inf too)."""
    params.require_not_one("solve_center_direct")
    d = w.dim

    def objective(theta):
        sigma = _unpack_cholesky(theta, d)
        tr = float(np.trace(sigma).real)
        if tr <= 0.0 or not np.isfinite(tr):
            return 1e300
        val = weighted_divergence(w, p, params, HermitianOperator(sigma / tr))
        return val if math.isfinite(val) else 1e300

    avg = average_output(w, p)
    starts = _fallback_starts(avg.mat / avg.trace(), avg.mat / avg.trace(), d, seed)
    sigma, value = _nm_minimize(objective, d, starts, maxfev)
    center = DensityOperator(sigma)
    report = classify_region(params)
    return CenterResult(
        center, weighted_divergence(w, p, params, center), 0, math.nan, False,
        DIRECT_MINIMIZATION,
        heuristic=not (report.in_Gamma_D and report.second_arg_convex_D),
    )


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_BLOCH_RMAX = 1.0 - 1e-9


def _bloch_objective(w: GcqChannel, p: InputDistribution, params: RenyiParams):
    """Vectorized F over Bloch vectors via closed-form 2x2 spectral algebra."""
    a, z = params.alpha, params.z
    p2 = (1.0 - a) / z
    terms = []
    for sym, prob in p.items():
        if prob == 0.0:
            continue
        m = support_power(w.output(sym), a / z).mat
        m0 = 0.5 * float(np.trace(m).real)
        mvec = np.array([0.5 * float(np.trace(m @ s).real) for s in _PAULI])
        detm = m0 * m0 - float(mvec @ mvec)
        terms.append((prob, float(w.output(sym).trace()), m0, mvec, detm))

    def f(points):
        pts = np.atleast_2d(points)
        r = np.linalg.norm(pts, axis=1)
        lam_p = 0.5 * (1.0 + r)
        lam_m = 0.5 * (1.0 - r)
        ap = lam_p ** p2
        am = lam_m ** p2
        coef_i = 0.5 * (ap + am)
        coef_n = 0.5 * (ap - am)
        nhat = pts / np.maximum(r, 1e-300)[:, None]
        det_s = (lam_p * lam_m) ** p2
        total = np.zeros(len(pts))
        for prob, tr_w, m0, mvec, detm in terms:
            tr_a = 2.0 * (coef_i * m0 + coef_n * (nhat @ mvec))
            det_a = detm * det_s
            disc = np.sqrt(np.maximum(tr_a * tr_a - 4.0 * det_a, 0.0))
            lp = np.maximum(0.5 * (tr_a + disc), 0.0)
            lm = np.maximum(0.5 * (tr_a - disc), 0.0)
            q = np.where(lp > 0, lp ** z, 0.0) + np.where(lm > 0, lm ** z, 0.0)
            with np.errstate(divide="ignore"):
                total += prob * (np.log(q) - math.log(tr_w)) / (a - 1.0)
        return np.where(np.isfinite(total), total, 1e300)

    return f


def _state_from_bloch(r):
    rx, ry, rz = r
    return DensityOperator(0.5 * np.array(
        [[1.0 + rz, rx - 1j * ry], [rx + 1j * ry, 1.0 - rz]], dtype=complex
    ))


_CUBE = np.array([(i, j, k) for i in (-1, 0, 1) for j in (-1, 0, 1) for k in (-1, 0, 1)],
                 dtype=float)


def oracle_grid_center(w: GcqChannel, p: InputDistribution, params: RenyiParams,
                       resolution: float = 2e-3, coarse: float = 0.05) -> CenterResult:
    """Brute-force minimization of F(sigma), independent of the solvers.

    d = 2 with finite z: exhaustive grid over the Bloch ball at spacing
    ``coarse``, then a halving pattern search until the step is below
    ``resolution`` (value error ~ resolution^2).  Otherwise: multistart
    compass search over a Cholesky factorization.
    """
    params.require_not_one("oracle_grid_center")
    if w.dim == 2 and not params.is_log_euclidean:
        f = _bloch_objective(w, p, params)
        axis = np.arange(-1.0, 1.0 + coarse / 2.0, coarse)
        grid = np.array(np.meshgrid(axis, axis, axis)).reshape(3, -1).T
        grid = grid[np.linalg.norm(grid, axis=1) <= _BLOCH_RMAX]
        vals = f(grid)
        best = grid[int(np.argmin(vals))]
        evals = len(grid)
        step = coarse
        while step > resolution:
            step *= 0.5
            cand = best[None, :] + step * _CUBE
            norms = np.linalg.norm(cand, axis=1)
            over = norms > _BLOCH_RMAX
            cand[over] *= (_BLOCH_RMAX / norms[over])[:, None]
            cv = f(cand)
            best = cand[int(np.argmin(cv))]
            evals += len(cand)
        center = _state_from_bloch(best)
        value = weighted_divergence(w, p, params, center)
        return CenterResult(center, value, evals, step, True, ORACLE_GRID)

    # Self-contained compass search; no scipy, no shared solver machinery.
    d = w.dim

    def objective(theta):
        sigma = _unpack_cholesky(theta, d)
        tr = float(np.trace(sigma).real)
        if tr <= 0.0:
            return 1e300
        val = weighted_divergence(w, p, params, HermitianOperator(sigma / tr))
        return val if math.isfinite(val) else 1e300

    rng = np.random.default_rng(0)
    avg = average_output(w, p)
    starts = [avg.mat / avg.trace(), np.eye(d) / d]
    for _ in range(2):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        s = g @ g.conj().T
        starts.append(s / float(np.trace(s).real))
    best_theta, best_val, evals = None, math.inf, 0
    for s in starts:
        theta = _pack_cholesky(s)
        val = objective(theta)
        step = 0.3
        while step > 1e-5:
            improved = False
            for i in range(len(theta)):
                for sgn in (1.0, -1.0):
                    cand = theta.copy()
                    cand[i] += sgn * step
                    cv = objective(cand)
                    evals += 1
                    if cv < val - 1e-15:
                        theta, val = cand, cv
                        improved = True
            if not improved:
                step *= 0.5
        if val < best_val:
            best_theta, best_val = theta, val
    sigma = _unpack_cholesky(best_theta, d)
    center = DensityOperator(sigma / float(np.trace(sigma).real))
    value = weighted_divergence(w, p, params, center)
    return CenterResult(center, value, evals, math.nan, True, ORACLE_GRID)


# ---------------------------------------------------------------------------
# Radii built on the solvers
# ---------------------------------------------------------------------------

def divergence_radius(w: GcqChannel, params: RenyiParams, tol: float = 1e-6,
                      max_rounds: int = 500, eta: float = 1.0, **solver_kw):
    """Unweighted radius inf_sigma sup_x D(W(x)||sigma).

    Multiplicative-weights ascent on the input law against the inner
    weighted-center solve; exits when the sup-vs-average gap is below tol.
    Returns (radius, center, worst_P).
    """
    report = classify_region(params)
    if not report.second_arg_convex_D:
        warnings.warn("divergence_radius outside the proven convexity region is heuristic")
    symbols = w.alphabet
    weights = np.full(len(symbols), 1.0 / len(symbols))
    warm = None
    prev_gap = math.inf
    best = None
    for _ in range(max_rounds):
        p_t = InputDistribution(dict(zip(symbols, weights)))
        res = solve_center_D(w, p_t, params, sigma0=warm, **solver_kw)
        warm = res.center
        dvals = np.array([d_alpha_z(w.output(s), res.center, params) for s in symbols])
        radius_up = float(dvals.max())
        gap = radius_up - res.value
        if best is None or radius_up < best[0]:
            best = (radius_up, res.center, p_t)
        if gap <= tol:
            return radius_up, res.center, p_t
        if gap > prev_gap + 1e-12:
            eta = max(eta / 2.0, 1.0 / 64.0)
        prev_gap = gap
        shifted = eta * (dvals - dvals.max())
        weights = weights * np.exp(shifted)
        weights = np.maximum(weights, 1e-300)
        weights /= weights.sum()
    warnings.warn(f"divergence_radius: gap {prev_gap:.2e} above tol after {max_rounds} rounds")
    return best


def weighted_radius_beta(w: GcqChannel, p: InputDistribution, params: RenyiParams,
                         beta: float, tol: float = 1e-8, maxfev: int = 60000) -> float:
    """(P, beta)-weighted radius: min over states of the P-weighted beta-norm
    of x -> D(W(x)||sigma).

    beta = 1 coincides with the weighted center value; beta = inf minimizes a
    log-sum-exp softened max but reports the exact max at the minimizer.
    Divergences are assumed nonnegative (cq channels).
    """
    if beta < 1.0:
        raise ValueError("beta must be >= 1")
    supp = p.support
    probs = np.array([p.probability(s) for s in supp])
    temp = 1e3

    def dvals(sigma):
        return np.array([d_alpha_z(w.output(s), sigma, params) for s in supp])

    def objective(theta):
        sigma = _unpack_cholesky(theta, w.dim)
        tr = float(np.trace(sigma).real)
        if tr <= 0.0:
            return 1e300
        dv = dvals(HermitianOperator(sigma / tr))
        if not np.all(np.isfinite(dv)):
            return 1e300
        dv = np.maximum(dv, 0.0)
        if math.isinf(beta):
            m = dv.max()
            return m + math.log(float(np.sum(np.exp(temp * (dv - m))))) / temp
        return float(np.sum(probs * dv ** beta) ** (1.0 / beta))

    anchor = solve_center_D(w, p, params)
    starts = _fallback_starts(anchor.center.mat, average_output(w, p).mat, w.dim)
    sigma, _ = _nm_minimize(objective, w.dim, starts, maxfev,
                            fatol=min(1e-14, tol * 1e-4))
    sigma = sigma / float(np.trace(sigma).real)
    dv = np.maximum(dvals(HermitianOperator(sigma)), 0.0)
    if math.isinf(beta):
        return float(dv.max())
    return float(np.sum(probs * dv ** beta) ** (1.0 / beta))


def holevo_quantity(w: GcqChannel, p: InputDistribution):
    """(sum_x P(x) D(W(x)||W(P)), W(P)); exact, no iteration."""
    avg = average_output(w, p)
    center = DensityOperator(avg.mat)
    value = sum(prob * umegaki(w.output(sym), center)
                for sym, prob in p.items() if prob > 0.0)
    return float(value), center


def mutual_information(w: GcqChannel, p: InputDistribution, params: RenyiParams,
                       **solver_kw) -> float:
    """I_{alpha,z}(W,P) = (1/(alpha-1)) log s(alpha) chi_Qbar(W,P)."""
    if params.alpha == 1.0:
        return holevo_quantity(w, p)[0]
    res = solve_center_Qbar(w, p, params, **solver_kw)
    return math.log(params.s * res.value) / (params.alpha - 1.0)


def mutual_information_direct(w: GcqChannel, p: InputDistribution, params: RenyiParams,
                              maxfev: int = 40000) -> float:
    """inf_sigma D(lifted(W,P) || blockdiag P x sigma) by direct search."""
    params.require_not_one("mutual_information_direct")
    joint = lifted_state(w, p)
    supp = p.support
    pvec = np.array([p.probability(s) for s in supp])
    d = w.dim

    def objective(theta):
        sigma = _unpack_cholesky(theta, d)
        tr = float(np.trace(sigma).real)
        if tr <= 0.0:
            return 1e300
        ref = HermitianOperator(np.kron(np.diag(pvec), sigma / tr))
        val = d_alpha_z(joint, ref, params)
        return val if math.isfinite(val) else 1e300

    avg = average_output(w, p)
    starts = _fallback_starts(avg.mat / avg.trace(), avg.mat / avg.trace(), d)
    _, value = _nm_minimize(objective, d, starts, maxfev)
    return float(value)


def stationarity_residual(w: GcqChannel, p: InputDistribution, params: RenyiParams,
                          center: DensityOperator, n_directions: int = 5,
                          step: float = 1e-5, rng=None) -> float:
    """Max |directional derivative| of F at the center along random traceless
    Hermitian directions inside the center's support (projected to states)."""
    rng = np.random.default_rng(0) if rng is None else rng
    wc, vc = herm(center).eig
    keep = wc > float(wc[-1]) * SUPPORT_RTOL
    iso = vc[:, keep]
    k = iso.shape[1]
    worst = 0.0
    for _ in range(n_directions):
        g = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        g = 0.5 * (g + g.conj().T)
        g -= np.trace(g).real / k * np.eye(k)
        norm = float(np.linalg.norm(g))
        if norm == 0.0:
            continue
        y = iso @ (g / norm) @ iso.conj().T
        plus = DensityOperator(center.mat + step * y)
        minus = DensityOperator(center.mat - step * y)
        fp = weighted_divergence(w, p, params, plus)
        fm = weighted_divergence(w, p, params, minus)
        worst = max(worst, abs(fp - fm) / (2.0 * step))
    return worst
