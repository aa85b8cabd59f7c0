"""Operational exponent curves built on the weighted-center solvers.

All rates and exponents are in nats.  The one-dimensional suprema over the
order parameter run on a log-spaced grid with golden-section refinement
around the grid argmax; the alpha -> 1 and alpha -> infinity endpoints use
their exact formulas (relative entropy and max-relative entropy).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .centers import (
    _fallback_starts,
    _nm_minimize,
    _pack_cholesky,
    _unpack_cholesky,
    solve_center_D,
)
from .channels import GcqChannel, InputDistribution, TypeClass, average_output
from .divergences import RenyiParams, d_alpha_z, q_alpha_z, umegaki
from .exceptions import NonConvergenceError
from .operators import DensityOperator, herm, support_projection

DEFAULT_ALPHA_MAX = 64.0
DEFAULT_GRID_POINTS = 40
DEFAULT_REFINE_ITERS = 20
SP_ALPHA_MIN = 1e-3


@dataclass
class ExponentCurve:
    """Exponent values over a rate grid, with the maximizing order per rate."""

    rates: np.ndarray
    values: np.ndarray
    maximizing_alpha: np.ndarray
    params: str = ""


@dataclass
class PsiCurve:
    """Log-moment values on an order grid with one-sided slopes at 1."""

    alphas: np.ndarray
    values: np.ndarray
    deriv_left: float
    deriv_right: float


@dataclass
class ConvexityReport:
    u: np.ndarray
    values: np.ndarray
    violations: np.ndarray
    max_violation: float


class RadiusCache:
    """Memoized chi_alpha evaluations with warm-started solves.

    ``rule`` picks z = alpha ("sandwiched") or z = 1 ("petz"); the alpha ->
    infinity endpoint (max-relative-entropy radius) is solved once by direct
    minimization.
    """

    def __init__(self, w: GcqChannel, p: InputDistribution, rule: str = "sandwiched",
                 tol: float = 1e-10, max_iter: int = 20000):
        if rule not in ("sandwiched", "petz"):
            raise ValueError(f"unknown rule {rule!r}")
        self.w = w
        self.p = p
        self.rule = rule
        self.tol = tol
        self.max_iter = max_iter
        self._results = {}
        self._chi_inf = None

    def _params(self, alpha: float) -> RenyiParams:
        return RenyiParams(alpha, alpha if self.rule == "sandwiched" else 1.0)

    def result(self, alpha: float):
        res = self._results.get(alpha)
        if res is not None:
            return res
        warm = None
        if self._results:
            nearest = min(self._results, key=lambda a: abs(a - alpha))
            warm = self._results[nearest].center
        res = solve_center_D(self.w, self.p, self._params(alpha),
                             tol=self.tol, max_iter=self.max_iter, sigma0=warm)
        if not res.converged:
            raise NonConvergenceError(
                f"center solve did not converge at alpha={alpha}, "
                f"z={self._params(alpha).z} (residual {res.residual:.2e})"
            )
        self._results[alpha] = res
        return res

    def chi(self, alpha: float) -> float:
        return self.result(alpha).value

    def chi_inf(self) -> float:
        """Weighted max-relative-entropy radius (the alpha -> inf endpoint).

        The top eigenvalue is smoothed through a temperature ladder of
        stable log-sum-exp surrogates (bias <= log(d)/T), then the exact
        nonsmooth objective is polished by a shrinking pattern search.
        """
        if self._chi_inf is None:
            w, p = self.w, self.p
            supp = p.support
            probs = np.array([p.probability(s) for s in supp])
            d = w.dim
            mats = [w.output(s).mat for s in supp]

            def log_spectrum(theta):
                sigma = _unpack_cholesky(theta, d)
                tr = float(np.trace(sigma).real)
                if tr <= 0.0 or not np.isfinite(tr):
                    return None
                sigma = sigma / tr
                wv, vv = np.linalg.eigh(sigma)
                floor = max(float(wv[-1]), 1e-300) * 1e-15
                if wv[0] <= floor:
                    return None
                inv_half = (vv * wv ** -0.5) @ vv.conj().T
                out = []
                for m in mats:
                    lam = np.linalg.eigvalsh(inv_half @ m @ inv_half)
                    out.append(np.log(np.maximum(lam, 1e-300)))
                return out

            def smoothed(theta, temp):
                spectra = log_spectrum(theta)
                if spectra is None:
                    return 1e300
                total = 0.0
                for weight, loglam in zip(probs, spectra):
                    m = loglam.max()
                    total += weight * (m + math.log(
                        float(np.sum(np.exp(temp * (loglam - m))))) / temp)
                return total

            def exact(theta):
                spectra = log_spectrum(theta)
                if spectra is None:
                    return 1e300
                return float(sum(weight * loglam.max()
                                 for weight, loglam in zip(probs, spectra)))

            if self._results:
                top = max(self._results)
                start = self._results[top].center.mat
            else:
                avg = average_output(w, p)
                start = avg.mat / avg.trace()
            theta = None
            for temp in (50.0, 500.0, 5e3, 5e4, 5e5):
                obj = lambda th, t=temp: smoothed(th, t)
                if theta is None:
                    sigma, _ = _nm_minimize(obj, d, _fallback_starts(start, start, d),
                                            maxfev=40000)
                else:
                    sigma, _ = _nm_minimize(obj, d, [_unpack_cholesky(theta, d)],
                                            maxfev=20000)
                theta = _pack_cholesky(sigma / float(np.trace(sigma).real))
            value = exact(theta)
            step = 1e-3
            while step > 1e-8:
                improved = False
                for i in range(len(theta)):
                    for sgn in (1.0, -1.0):
                        cand = theta.copy()
                        cand[i] += sgn * step
                        cv = exact(cand)
                        if cv < value - 1e-15:
                            theta, value = cand, cv
                            improved = True
                if not improved:
                    step *= 0.5
            self._chi_inf = float(value)
        return self._chi_inf


def _golden_max(f, lo, hi, iters):
    """Golden-section maximum on [lo, hi]; returns the best probe seen."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    best_x, best_f = lo, f(lo)
    fh = f(hi)
    if fh > best_f:
        best_x, best_f = hi, fh
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
        for x, fx in ((c, fc), (d, fd)):
            if fx > best_f:
                best_x, best_f = x, fx
    return best_x, best_f


def _sandwiched_grid(alpha_max, grid_points):
    return 1.0 + np.geomspace(1e-3, alpha_max - 1.0, grid_points)


def sc_exponent(w: GcqChannel, p: InputDistribution, rate: float,
                cache: RadiusCache | None = None,
                alpha_max: float = DEFAULT_ALPHA_MAX,
                grid_points: int = DEFAULT_GRID_POINTS,
                refine_iters: int = DEFAULT_REFINE_ITERS):
    """Strong converse exponent sup_{alpha>1} (1-1/alpha)(R - chi*_alpha).

    Returns (value, argmax_alpha); argmax_alpha is 1.0 when the supremum
    clamps to zero and inf when the max-relative-entropy endpoint dominates.
    Orders whose center solve fails are dropped with a warning.
    """
    if rate <= 0.0:
        raise ValueError("rate must be positive")
    cache = cache or RadiusCache(w, p, "sandwiched")

    def g_of_u(u):
        if u <= 0.0:
            return 0.0
        alpha = 1.0 / (1.0 - u)
        try:
            return u * (rate - cache.chi(alpha))
        except NonConvergenceError:
            return -math.inf

    us, gs = [0.0], [0.0]
    for alpha in _sandwiched_grid(alpha_max, grid_points):
        try:
            chi = cache.chi(alpha)
        except NonConvergenceError as exc:
            warnings.warn(f"dropping alpha={alpha:.6g}: {exc}")
            continue
        us.append((alpha - 1.0) / alpha)
        gs.append((1.0 - 1.0 / alpha) * (rate - chi))
    if len(us) == 1:
        raise NonConvergenceError("no sandwiched radius evaluation converged")
    g_inf = rate - cache.chi_inf()

    j = int(np.argmax(gs))
    lo = us[max(j - 1, 0)]
    hi = us[min(j + 1, len(us) - 1)]
    u_star, g_star = _golden_max(g_of_u, lo, hi, refine_iters)
    if g_inf >= g_star:
        value, argmax = g_inf, math.inf
    else:
        value, argmax = g_star, 1.0 / (1.0 - u_star)
    if value <= 0.0:
        return 0.0, 1.0
    return float(value), float(argmax)


def sc_curve(w: GcqChannel, p: InputDistribution, rates,
             cache: RadiusCache | None = None, **kw) -> ExponentCurve:
    """Strong converse exponent over a rate grid, sharing one radius cache."""
    cache = cache or RadiusCache(w, p, "sandwiched")
    rates = np.asarray(list(rates), dtype=float)
    values = np.zeros_like(rates)
    argmax = np.zeros_like(rates)
    for i, r in enumerate(rates):
        values[i], argmax[i] = sc_exponent(w, p, float(r), cache=cache, **kw)
    return ExponentCurve(rates, values, argmax,
                         params="strong converse exponent (sandwiched radius)")


def cutoff_rate(w: GcqChannel, p: InputDistribution, kappa: float,
                cache: RadiusCache | None = None) -> float:
    """Generalized cutoff rate C_kappa = chi*_{1/(1-kappa)}."""
    if not 0.0 < kappa < 1.0:
        raise ValueError("kappa must lie in (0, 1)")
    cache = cache or RadiusCache(w, p, "sandwiched")
    return cache.chi(1.0 / (1.0 - kappa))


def sphere_packing_bound(w: GcqChannel, p: InputDistribution, rate: float,
                         cache: RadiusCache | None = None,
                         alpha_min: float = SP_ALPHA_MIN,
                         grid_points: int = DEFAULT_GRID_POINTS,
                         refine_iters: int = DEFAULT_REFINE_ITERS) -> float:
    """sup_{0<alpha<1} ((alpha-1)/alpha)(R - chi_{alpha,1}), clamped at 0.

    The supremum may diverge as alpha -> 0; the grid is floored at
    ``alpha_min`` and a warning is emitted when the argmax sits there.
    """
    if rate <= 0.0:
        raise ValueError("rate must be positive")
    cache = cache or RadiusCache(w, p, "petz")

    def g(alpha):
        try:
            return (alpha - 1.0) / alpha * (rate - cache.chi(alpha))
        except NonConvergenceError:
            return -math.inf

    grid = np.geomspace(alpha_min, 1.0 - 1e-6, grid_points)
    gs = [g(a) for a in grid]
    if not np.isfinite(gs).any():
        raise NonConvergenceError("no Petz radius evaluation converged")
    j = int(np.argmax(gs))
    lo = grid[max(j - 1, 0)]
    hi = grid[min(j + 1, len(grid) - 1)]
    a_star, g_star = _golden_max(g, lo, hi, refine_iters)
    if j == 0:
        warnings.warn(
            "sphere-packing supremum attained at the alpha grid floor; "
            "the true supremum may be +inf"
        )
    return max(0.0, float(g_star))


def _petz_divergence_alpha0(rho, sigma) -> float:
    """alpha -> 0 limit of the Petz divergence: -log Tr rho^0 sigma."""
    overlap = float(np.trace(support_projection(herm(rho)).mat @ herm(sigma).mat).real)
    if overlap <= 0.0:
        return math.inf
    return -math.log(overlap)


def _weighted_petz(w, p, avg, alpha) -> float:
    total = 0.0
    for sym, prob in p.items():
        if prob == 0.0:
            continue
        if alpha == 0.0:
            total += prob * _petz_divergence_alpha0(w.output(sym), avg)
        elif alpha == 1.0:
            total += prob * umegaki(w.output(sym), avg)
        else:
            total += prob * d_alpha_z(w.output(sym), avg, RenyiParams.petz(alpha))
    return total


def _random_coding_sup(w, p, rate, penalty, grid_points=41,
                       refine_iters=DEFAULT_REFINE_ITERS):
    avg = DensityOperator(average_output(w, p).mat)

    def g(alpha):
        return (alpha - 1.0) * (rate - _weighted_petz(w, p, avg, alpha) + penalty)

    grid = np.linspace(0.0, 1.0, grid_points)
    gs = [g(a) for a in grid]
    j = int(np.argmax(gs))
    lo = grid[max(j - 1, 0)]
    hi = grid[min(j + 1, len(grid) - 1)]
    _, g_star = _golden_max(g, lo, hi, refine_iters)
    return max(0.0, float(g_star))


def random_coding_exponent(w: GcqChannel, p: InputDistribution, rate: float) -> float:
    """Achievable error exponent sup_{0<=alpha<=1} (alpha-1)(R - sum_x P(x)
    D_{alpha,1}(W(x)||W(P)))."""
    if rate <= 0.0:
        raise ValueError("rate must be positive")
    return _random_coding_sup(w, p, rate, 0.0)


def finite_n_random_coding_bound(w: GcqChannel, p_n: TypeClass, rate: float) -> float:
    """Blocklength-n achievability exponent for a constant-composition code;
    the type-counting penalty |supp| log(n+1)/n enters the bracket."""
    if rate <= 0.0:
        raise ValueError("rate must be positive")
    penalty = len(p_n.support) * math.log(p_n.n + 1.0) / p_n.n
    return _random_coding_sup(w, p_n.as_distribution, rate, penalty)


def finite_n_converse_bound(w: GcqChannel, p_n: TypeClass, rate: float,
                            params: RenyiParams | None = None, sigma=None,
                            cache: RadiusCache | None = None) -> float:
    """Upper bound on (1/n) log P_s for constant-composition codes at ``rate``.

    With ``sigma`` (and ``params``, z = alpha > 1) the single-order bound
    -(1-1/alpha)[R - sum_x P_n(x) D_{alpha,alpha}(W(x)||sigma)] is returned;
    with only ``params`` the order is kept but the center is optimized; with
    neither, the bound is optimized over alpha > 1.  Always <= 0.
    """
    p = p_n.as_distribution
    if sigma is not None:
        if params is None:
            raise ValueError("sigma requires params fixing the order alpha")
        a = params.alpha
        if a <= 1.0:
            raise ValueError("the converse bound needs alpha > 1")
        total = sum(prob * d_alpha_z(w.output(sym), herm(sigma), RenyiParams.sandwiched(a))
                    for sym, prob in p.items() if prob > 0.0)
        return -max(0.0, (1.0 - 1.0 / a) * (rate - total))
    if params is not None:
        a = params.alpha
        if a <= 1.0:
            raise ValueError("the converse bound needs alpha > 1")
        cache = cache or RadiusCache(w, p, "sandwiched")
        return -max(0.0, (1.0 - 1.0 / a) * (rate - cache.chi(a)))
    value, _ = sc_exponent(w, p, rate, cache=cache)
    return -value


def psi_curve(first_with_weights, second, alphas) -> PsiCurve:
    """Weighted log-moment curve of a matched family of state pairs.

    ``first_with_weights`` is a list of (state, weight); ``second`` the
    matched reference states.  For orders <= 1 the plain power trace is
    used, beyond 1 the sandwiched form.  One-sided difference quotients at 1
    (step 1e-4) estimate the weighted relative-entropy slope.
    """
    pairs = list(first_with_weights)
    refs = list(second)
    if len(pairs) != len(refs):
        raise ValueError("state lists must be matched")

    def psi(alpha):
        total = 0.0
        for (rho, weight), sigma in zip(pairs, refs):
            rho, sigma = herm(rho), herm(sigma)
            if alpha == 1.0:
                val = float(np.trace(support_projection(sigma).mat @ rho.mat).real)
            elif alpha < 1.0:
                val = q_alpha_z(rho, sigma, RenyiParams.petz(alpha))
            else:
                val = q_alpha_z(rho, sigma, RenyiParams.sandwiched(alpha))
            if val <= 0.0 or math.isinf(val):
                return math.inf if val > 0 else -math.inf
            total += weight * math.log(val)
        return total

    alphas = np.asarray(list(alphas), dtype=float)
    values = np.array([psi(a) for a in alphas])
    h = 1e-4
    psi_1 = psi(1.0)
    deriv_left = (psi_1 - psi(1.0 - h)) / h
    deriv_right = (psi(1.0 + h) - psi_1) / h
    return PsiCurve(alphas, values, float(deriv_left), float(deriv_right))


def clipped_trace(rho, sigma, t: float) -> float:
    """Tr (rho - t sigma)_+ : total weight of the positive part."""
    rho, sigma = herm(rho), herm(sigma)
    if rho.dim != sigma.dim:
        raise ValueError("dimension mismatch")
    w = np.linalg.eigvalsh(rho.mat - t * sigma.mat)
    return float(np.sum(w[w > 0.0]))


def convexity_probe(w: GcqChannel, p: InputDistribution, u_grid=None,
                    cache: RadiusCache | None = None) -> ConvexityReport:
    """Midpoint-convexity check of u -> u * chi*_{1/(1-u)} on a uniform grid."""
    if u_grid is None:
        u_grid = np.linspace(0.1, 0.9, 17)
    u = np.asarray(list(u_grid), dtype=float)
    if len(u) < 3:
        raise ValueError("need at least 3 grid points")
    if not np.allclose(np.diff(u), u[1] - u[0], rtol=0.0, atol=1e-12):
        raise ValueError("midpoint check needs a uniform grid")
    if u[0] <= 0.0 or u[-1] >= 1.0:
        raise ValueError("u grid must lie inside (0, 1)")
    cache = cache or RadiusCache(w, p, "sandwiched")
    f = np.array([ui * cache.chi(1.0 / (1.0 - ui)) for ui in u])
    violations = f[1:-1] - 0.5 * (f[:-2] + f[2:])
    return ConvexityReport(u, f, violations, float(violations.max()))
