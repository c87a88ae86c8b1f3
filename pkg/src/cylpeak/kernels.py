"""Correlation kernels: continuous finite-temperature Bessel/Airy kernels,
their zero-temperature closed forms, and the discrete contour kernel of the
shift-mixed cylindric process.

Numerical scheme notes
----------------------
* The finite-temperature Bessel kernel integral (after u = v^2)

      K(x,y) = e^{-(x+y)/2} int_0^inf 2v J_a(2v sX) J_a(2v sY) / (1+v^{2N}) dv,
      sX = e^{-x/2}, sY = e^{-y/2},

  is split into Gauss panels on [0, V0] plus four contour rays rotated into
  the complex v-plane at V0 (one per Hankel branch pair H^{s}H^{s'}), where
  each branch decays either exponentially or like v^{-2N-1}.  This makes the
  slowly decaying N = 1 tail exact to quadrature accuracy instead of cutting
  it off.
* The discrete kernel is a double circle integral with integer powers of z
  and w once sqrt(w/z) is absorbed; the trapezoid rule in both angles is a
  2-D DFT, so one FFT of the integrand grid yields all matrix entries of a
  given parameter set at once.
* The vertical-line (Gamma-ratio) form of the limiting Bessel kernel is
  evaluated with the Fermi identity's pi inside the sine and with the Gamma
  ratio arranged so both line factors decay; see bessel_limit_contour_kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ContourError, DomainError, InfeasibleContour, PrecisionError, QuadratureFailure
from . import special as sp

__all__ = [
    "ModelParams",
    "ContourSpec",
    "QuadratureSpec",
    "ft_bessel_kernel",
    "hard_edge_bessel_exp",
    "ft_airy_kernel",
    "airy_kernel_zero_temp",
    "make_contour",
    "discrete_cylindric_kernel",
    "discrete_kernel_matrix",
    "bessel_limit_contour_kernel",
]

PI = math.pi


# ---------------------------------------------------------------------------
# Parameter types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelParams:
    """Model parameters (a, q, N) with 0 < q < 1, 0 < a <= 1, a q < 1."""

    a: float
    q: float
    n: int
    t_shift: float = 1.0

    def __post_init__(self):
        if not (0 < self.q < 1):
            raise DomainError("q must lie in (0, 1)")
        if not (0 < self.a <= 1):
            raise DomainError("a must lie in (0, 1]")
        if not self.a * self.q < 1:
            raise DomainError("aq must be < 1")
        if self.n < 1:
            raise DomainError("n must be >= 1")
        if self.t_shift <= 0:
            raise DomainError("t_shift must be positive")


@dataclass(frozen=True)
class ContourSpec:
    """Circle radii for the double contour integral and trapezoid order."""

    rz: float
    rw: float
    m_points: int

    def validate(self, params: ModelParams) -> None:
        q, n, a = params.q, params.n, params.a
        ratio = self.rz / self.rw
        if not (1.0 < ratio < q ** (-n)):
            raise ContourError(f"rz/rw = {ratio:g} outside (1, q^-N = {q**(-n):g})")
        if not self.rz < (a * q) ** (-0.5):
            raise ContourError(f"rz = {self.rz:g} >= (aq)^-1/2 = {(a*q)**(-0.5):g}")
        if not self.rw > (a * q) ** 0.5:
            raise ContourError(f"rw = {self.rw:g} <= (aq)^1/2 = {(a*q)**0.5:g}")
        if self.m_points < 64:
            raise ContourError("m_points must be >= 64")


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy controls for the continuous-kernel quadratures."""

    rel_tol: float = 1e-9
    max_panels: int = 4000
    tail_tol: float = 1e-10

    def __post_init__(self):
        if self.rel_tol <= 0 or self.max_panels <= 0 or self.tail_tol <= 0:
            raise ValueError("QuadratureSpec fields must be positive")


DEFAULT_QUAD = QuadratureSpec()

_GL8 = np.polynomial.legendre.leggauss(8)
_GL16 = np.polynomial.legendre.leggauss(16)
_GL48 = np.polynomial.legendre.leggauss(48)
_GL96 = np.polynomial.legendre.leggauss(96)


def _panel_nodes(edges: np.ndarray, rule) -> tuple[np.ndarray, np.ndarray]:
    gx, gw = rule
    mid = 0.5 * (edges[:-1] + edges[1:])
    hal = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + hal[:, None] * gx[None, :]).ravel()
    wts = (hal[:, None] * gw[None, :]).ravel()
    return nodes, wts


# ---------------------------------------------------------------------------
# Finite-temperature Bessel kernel
# ---------------------------------------------------------------------------

_ASYM_ARG = 18.0  # Bessel argument beyond which the Hankel branches are used


def _bessel_head_edges(sx_max: float, sx_min: float, v0: float, n_temp: int) -> np.ndarray:
    """Panel edges on [0, v0]: oscillation-resolving near 0, geometric far out,
    and refined across the Fermi shoulder at v = 1 (width ~ 1/(2N))."""
    kappa = 2.0 * (sx_max + sx_min)  # fastest oscillation wavenumber in v
    shoulder = 0.5 / n_temp
    win_lo, win_hi = 1.0 - 8.0 * shoulder, 1.0 + 8.0 * shoulder
    edges = [0.0]
    v = 0.0
    while v < v0:
        step = max(0.25, 0.4 * v)
        if kappa > 0:
            step = min(step, 0.45 * 2.0 * PI / kappa)
        if win_lo <= v < win_hi:
            step = min(step, max(shoulder, 1e-4))
        elif 0.2 < v < 3.0:
            step = min(step, 0.4)
        if v < win_lo < v + step:
            step = win_lo - v  # land exactly on the shoulder window
        v = min(v + step, v0)
        edges.append(v)
    return np.array(edges)


def _bessel_tail_rays(alpha, sX, sY, n2, v0, rule):
    """Sum of the four rotated Hankel-branch rays from v0 to infinity.

    The integrand 2v J J/(1+v^{2N}) splits via J = (H^+ + H^-)/2 into four
    analytic pieces; each ray runs vertically from v0 in its decaying
    direction.  Branch pairs with slow (algebraic) decay use a tan-map.
    """
    gx, gw = rule
    total = 0.0 + 0.0j
    coeffs = sp._hankel_coeffs(alpha, 30)
    for sa in (+1, -1):
        for sb in (+1, -1):
            rate = sa * sX + sb * sY
            direction = 1.0 if rate > 0 else (-1.0 if rate < 0 else 1.0)
            t_scale = v0 if rate == 0 else min(v0, 3.0 / abs(rate))
            phi = (gx + 1.0) * (PI / 4.0)
            wphi = gw * (PI / 4.0)
            t = t_scale * np.tan(phi)
            dt = t_scale / np.cos(phi) ** 2
            v = v0 + 1j * direction * t
            za = 2.0 * v * sX
            zb = 2.0 * v * sY
            g = sp.hankel_pair_product(alpha, za, zb, sa, sb, coeffs) / 4.0
            g = g * 2.0 * v / (1.0 + v ** (2 * n2))
            total += np.sum(wphi * dt * g) * (1j * direction)
    return total


def _bessel_tail_mixed(alpha, s_small, s_big, n2, v0, rule):
    """Tail when only the larger argument is in its asymptotic regime.

    Requires s_small <= s_big/4 (route selection guarantees it), so the
    product decays at least like e^{-1.5 s_big t} along either ray and the
    small-argument factor, kept as a whole Bessel power series, never leaves
    its convergence ball.  The big factor splits into H^+ (up) and H^- (down).
    """
    gx, gw = rule
    coeffs = sp._hankel_coeffs(alpha, 30)
    total = 0.0 + 0.0j
    rate = s_big - s_small
    t_cap = 20.0 / rate  # e^{-2 rate t_cap} = e^{-40}
    edges = t_cap * np.array([0.0, 0.05, 0.1, 0.2, 0.4, 0.7, 1.0])
    for sb in (+1, -1):
        direction = float(sb)
        t, dt = _panel_nodes(edges, rule)
        v = v0 + 1j * direction * t
        zb = 2.0 * v * s_big
        # single Hankel branch, exponent written explicitly
        series = np.zeros_like(zb)
        tk = np.ones_like(zb)
        ib = sb * 1j
        for k in range(len(coeffs)):
            series = series + coeffs[k] * tk
            tk = tk * (ib / zb)
            if np.max(np.abs(tk)) < 1e-17:
                break
        hb = np.sqrt(2.0 / (PI * zb)) * np.exp(1j * sb * (zb - alpha * PI / 2 - PI / 4)) * series
        ja = sp.bessel_j_complex_series(alpha, 2.0 * v * s_small)
        g = 0.5 * hb * ja * 2.0 * v / (1.0 + v ** (2 * n2))
        total += np.sum(dt * g) * (1j * direction)
    return total


def _ft_bessel_integral(x, y, alpha, n_temp, quad, refine=1):
    """The v-integral of the finite-temperature Bessel kernel (no prefactor)."""
    sX = math.exp(-x / 2.0)
    sY = math.exp(-y / 2.0)
    s_big, s_small = max(sX, sY), min(sX, sY)
    n2 = n_temp
    # can the Fermi factor alone end the integral before oscillation matters?
    # envelope bound: int_V^inf 2v v^{-2N} dv = V^{2-2N}/(N-1)
    v_fermi = None
    if n_temp >= 2:
        v_fermi = (quad.tail_tol * (n_temp - 1)) ** (1.0 / (2.0 - 2.0 * n_temp))
    mixed = s_small < 0.25 * s_big
    if v_fermi is not None and 2.0 * v_fermi * s_big < _ASYM_ARG:
        v0 = v_fermi
        tail = 0.0
        tail_err = quad.tail_tol
    elif mixed:
        # only the big argument reaches its asymptotic regime at the cut; the
        # capped mixed rays then keep the small argument inside |z| <= 18
        v0 = max(2.0, _ASYM_ARG / (2.0 * s_big))
        tail = None
    else:
        # push the cut until both arguments are asymptotic (cost <= 4x panels)
        v0 = max(2.0, _ASYM_ARG / (2.0 * s_small))
        tail = None
    edges = _bessel_head_edges(s_big, s_small, v0, n_temp)
    if refine > 1:
        edges = np.interp(
            np.linspace(0, len(edges) - 1, (len(edges) - 1) * refine + 1),
            np.arange(len(edges)),
            edges,
        )
    if len(edges) > quad.max_panels:
        raise QuadratureFailure("panel budget exceeded in ft_bessel_kernel")
    nodes, wts = _panel_nodes(edges, _GL16)
    ja = sp.bessel_j_vec(alpha, 2.0 * nodes * sX)
    jb = sp.bessel_j_vec(alpha, 2.0 * nodes * sY)
    head = float(np.sum(wts * 2.0 * nodes * ja * jb / (1.0 + nodes ** (2 * n2))))
    # coarse re-evaluation for the error estimate
    nodes8, wts8 = _panel_nodes(edges, _GL8)
    ja8 = sp.bessel_j_vec(alpha, 2.0 * nodes8 * sX)
    jb8 = sp.bessel_j_vec(alpha, 2.0 * nodes8 * sY)
    head8 = float(np.sum(wts8 * 2.0 * nodes8 * ja8 * jb8 / (1.0 + nodes8 ** (2 * n2))))
    err = abs(head - head8)
    if tail is None:
        rule = _GL48 if refine == 1 else _GL96
        if mixed:
            tail_c = _bessel_tail_mixed(alpha, s_small, s_big, n2, v0, rule)
        else:
            tail_c = _bessel_tail_rays(alpha, sX, sY, n2, v0, rule)
        tail = tail_c.real
        tail_err = abs(tail_c.imag)
    return head + tail, err + tail_err


def ft_bessel_kernel(
    x: float,
    y: float,
    alpha: float,
    n_temp: int,
    quad: QuadratureSpec = DEFAULT_QUAD,
    return_error: bool = False,
):
    """Finite-temperature Bessel kernel in exponential coordinates.

    K(x,y) = e^{-x/2-y/2} int_0^inf J_a(2 sqrt(u e^-x)) J_a(2 sqrt(u e^-y))
                                  / (1 + u^N) du.
    """
    if n_temp < 1:
        raise DomainError("n_temp must be >= 1")
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    if x + y > 240.0:
        # |K| <= e^{-(x+y)/2} * int du/(1+u^N) < 1e-52; negligible for any determinant
        return (0.0, math.exp(-(x + y) / 2.0) * PI) if return_error else 0.0
    pref = math.exp(-(x + y) / 2.0)
    val, err = _ft_bessel_integral(x, y, alpha, n_temp, quad)
    if err > max(quad.rel_tol * max(abs(val), 1e-6), 1e-14):
        val2, err2 = _ft_bessel_integral(x, y, alpha, n_temp, quad, refine=2)
        if abs(val2 - val) > max(quad.rel_tol * max(abs(val2), 1e-6), 1e-13) * 50:
            raise QuadratureFailure(
                f"ft_bessel_kernel({x},{y}): refinement moved the value by {abs(val2-val):.2e}"
            )
        val, err = val2, max(err2, abs(val2 - val))
    out = pref * val
    return (out, pref * err) if return_error else out


def ft_bessel_kernel_matrix(xs, alpha, n_temp, quad=DEFAULT_QUAD):
    """Symmetric matrix [K(x_i, x_j)] for the Nystrom discretization."""
    xs = np.asarray(xs, dtype=float)
    m = len(xs)
    K = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            K[i, j] = K[j, i] = ft_bessel_kernel(float(xs[i]), float(xs[j]), alpha, n_temp, quad)
    return K


def hard_edge_bessel_exp(x: float, y: float, alpha: float) -> float:
    """Zero-temperature (hard-edge) limit e^{-x/2-y/2} B_a(e^-x, e^-y).

    B_a(X,Y) = [J_a(2 sqrt X) sqrt(Y) J_a'(2 sqrt Y)
                - sqrt(X) J_a'(2 sqrt X) J_a(2 sqrt Y)] / (X - Y);
    the diagonal is the analytic limit J_a'^2 + (1 - a^2/(4X)) J_a^2.
    """
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    X = math.exp(-x)
    Y = math.exp(-y)
    pref = math.exp(-(x + y) / 2.0)
    if abs(X - Y) < 1e-9 * max(X, Y, 1e-300):
        Xm = 0.5 * (X + Y)
        z = 2.0 * math.sqrt(Xm)
        if z == 0.0:
            return pref * (1.0 if alpha == 0 else 0.0)
        J = sp.bessel_j(alpha, z)
        Jp = sp.bessel_j_prime(alpha, z)
        return pref * (Jp * Jp + (1.0 - alpha * alpha / (4.0 * Xm)) * J * J)
    zx = 2.0 * math.sqrt(X)
    zy = 2.0 * math.sqrt(Y)
    num = sp.bessel_j(alpha, zx) * math.sqrt(Y) * sp.bessel_j_prime(alpha, zy) - math.sqrt(
        X
    ) * sp.bessel_j_prime(alpha, zx) * sp.bessel_j(alpha, zy)
    return pref * num / (X - Y)


# ---------------------------------------------------------------------------
# Finite-temperature Airy kernel
# ---------------------------------------------------------------------------

def _airy_edges(lo: float, hi: float, beta: float, xymin: float) -> np.ndarray:
    shoulder = max(0.25 / beta, 1e-3)
    win = 6.0 * shoulder
    edges = [lo]
    v = lo
    while v < hi:
        arg = xymin + v
        step = 0.5
        if arg < -1.0:
            step = min(step, 0.4 * PI / math.sqrt(-arg))  # Ai oscillation wavelength
        if -win <= v < win:
            step = min(step, shoulder)  # Fermi shoulder at v = 0, width ~ 1/beta
        if v < -win < v + step:
            step = -win - v
        v = min(v + step, hi)
        edges.append(v)
    return np.array(edges)


def ft_airy_kernel(
    x: float,
    y: float,
    beta: float,
    quad: QuadratureSpec = DEFAULT_QUAD,
    return_error: bool = False,
):
    """Finite-temperature Airy kernel
    K(x,y) = int_-inf^inf e^{beta v}/(1+e^{beta v}) Ai(x+v) Ai(y+v) dv.
    """
    if beta <= 0:
        raise DomainError("beta must be positive")
    xymin = min(x, y)
    # right cutoff from Ai decay: Ai(z)^2 ~ e^{-4/3 z^{3/2}}
    z_r = (0.75 * math.log(1.0 / quad.tail_tol)) ** (2.0 / 3.0) + 2.0
    v_hi = z_r - xymin
    # left cutoff from the Fermi factor; Airy envelope adds |z|^{-1/4} decay only
    v_lo = -(math.log(1.0 / quad.tail_tol) / beta + 5.0 / beta + 2.0)
    base_edges = _airy_edges(v_lo, v_hi, beta, xymin)
    if len(base_edges) > quad.max_panels:
        raise QuadratureFailure("panel budget exceeded in ft_airy_kernel")

    def evaluate(edges, rule):
        nodes, wts = _panel_nodes(edges, rule)
        aix, _ = sp.airy_ai_vec(x + nodes)
        aiy, _ = sp.airy_ai_vec(y + nodes)
        with np.errstate(over="ignore"):
            fermi = 1.0 / (1.0 + np.exp(-beta * nodes))
        return float(np.sum(wts * fermi * aix * aiy))

    val = evaluate(base_edges, _GL16)
    err = abs(val - evaluate(base_edges, _GL8)) + 2.0 * quad.tail_tol
    if err > max(quad.rel_tol * max(abs(val), 1e-6), 1e-14):
        # the GL8 comparison overstates the GL16 error; verify by subdivision
        fine = np.interp(
            np.linspace(0, len(base_edges) - 1, 2 * len(base_edges) - 1),
            np.arange(len(base_edges)),
            base_edges,
        )
        val2 = evaluate(fine, _GL16)
        if abs(val2 - val) > 50 * max(quad.rel_tol * max(abs(val2), 1e-6), 1e-13):
            raise QuadratureFailure(
                f"ft_airy_kernel({x},{y}): refinement moved the value by {abs(val2-val):.2e}"
            )
        val, err = val2, max(abs(val2 - val), 2.0 * quad.tail_tol)
    return (val, err) if return_error else val


def ft_airy_kernel_matrix(xs, beta, quad=DEFAULT_QUAD):
    """Symmetric matrix [K(x_i, x_j)] via one shared node set (Gram form).

    All pairs share the integration variable, so the matrix is
    A^T diag(w * fermi) A with A_ki = Ai(x_i + v_k); one vectorized Airy
    evaluation and a GEMM replace m^2/2 scalar quadratures.  A panel-doubling
    check guards the shared-node resolution.
    """
    xs = np.asarray(xs, dtype=float)
    xmin = float(np.min(xs))
    z_r = (0.75 * math.log(1.0 / quad.tail_tol)) ** (2.0 / 3.0) + 2.0
    v_hi = z_r - xmin
    v_lo = -(math.log(1.0 / quad.tail_tol) / beta + 5.0 / beta + 2.0)
    edges = _airy_edges(v_lo, v_hi, beta, xmin)

    def build(e):
        nodes, wts = _panel_nodes(e, _GL16)
        with np.errstate(over="ignore"):
            fermi = 1.0 / (1.0 + np.exp(-beta * nodes))
        A = sp.airy_ai_vec(xs[:, None] + nodes[None, :])[0]
        return (A * (wts * fermi)[None, :]) @ A.T

    K = build(edges)
    fine = np.interp(
        np.linspace(0, len(edges) - 1, 2 * len(edges) - 1), np.arange(len(edges)), edges
    )
    K2 = build(fine)
    if np.max(np.abs(K2 - K)) > 1e-7:
        raise QuadratureFailure("airy kernel matrix panels under-resolved")
    return K2


def airy_kernel_zero_temp(x: float, y: float) -> float:
    """Airy kernel [Ai(x)Ai'(y) - Ai'(x)Ai(y)]/(x-y); diagonal Ai'^2 - x Ai^2."""
    if abs(x - y) < 1e-7:
        m = 0.5 * (x + y)
        ai, aip = sp.airy_ai_vec(np.array([m]))
        return float(aip[0] ** 2 - m * ai[0] ** 2)
    ai, aip = sp.airy_ai_vec(np.array([x, y]))
    return float((ai[0] * aip[1] - aip[0] * ai[1]) / (x - y))


def airy_kernel_zero_temp_matrix(xs):
    xs = np.asarray(xs, dtype=float)
    ai, aip = sp.airy_ai_vec(xs)
    X = xs[:, None]
    Y = xs[None, :]
    diff = X - Y
    with np.errstate(divide="ignore", invalid="ignore"):
        K = (ai[:, None] * aip[None, :] - aip[:, None] * ai[None, :]) / diff
    diag = aip**2 - xs * ai**2
    near = np.abs(diff) < 1e-7
    mid = 0.5 * (X + Y)
    if np.any(near):
        ai_m, aip_m = sp.airy_ai_vec(mid[near])
        K[near] = aip_m**2 - mid[near] * ai_m**2
    np.fill_diagonal(K, diag)
    return K


# ---------------------------------------------------------------------------
# Discrete contour kernel (shift-mixed cylindric process)
# ---------------------------------------------------------------------------

def make_contour(params: ModelParams, k_scale: int = 0) -> ContourSpec:
    """Contour radii at the log-midpoints of the allowed windows.

    Target ratio rz/rw = q^{-N/2} (the midpoint of (1, q^-N)), shrunk if the
    F-factor windows rz < (aq)^{-1/2}, rw > (aq)^{1/2} demand it; m_points
    covers Fourier extraction at order k_scale plus an aliasing margin set by
    the Laurent decay gap of the integrand.
    """
    if k_scale < 0:
        raise DomainError("k_scale must be >= 0")
    q, n, a = params.q, params.n, params.a
    lr_target = -0.5 * n * math.log(q)  # log of ratio window midpoint
    bz = -0.5 * math.log(a * q)  # upper bound for log rz (= -lower bound for log rw)
    margin = 1e-3 * min(1.0, bz)
    # require log rz <= bz - margin and log rw >= -bz + margin with the ratio fixed
    lr = min(lr_target, 2.0 * (bz - margin) * 0.9999)
    if lr <= 0:
        raise InfeasibleContour("contour windows are empty")
    lz = min(lr / 2.0, bz - margin)
    lw = lz - lr
    if lw < -bz + margin:
        lz = min(bz - margin, lr + (-bz + margin))
        lw = lz - lr
        if lw < -bz + margin - 1e-15:
            raise InfeasibleContour("cannot center the contour ratio inside the windows")
    # aliasing margin: Laurent decay gap = min distance (in log radius) from the
    # integration circles to the nearest singularity
    gap = min(lr, -n * math.log(q) - lr, bz - lz, lw + bz)
    extra = int(math.ceil(46.0 / max(gap, 1e-12)))
    m = max(256, 4 * k_scale, k_scale + extra)
    m = 1 << int(math.ceil(math.log2(m)))  # power of two for the FFT
    spec = ContourSpec(rz=math.exp(lz), rw=math.exp(lw), m_points=m)
    spec.validate(params)
    return spec


@lru_cache(maxsize=6)  # tables at small eps reach ~100 MB; keep the cache shallow
def _kernel_table(params: ModelParams, contour: ContourSpec):
    """FFT table of the double contour integral on the given circles.

    Returns T with K(k,k') = rz^{-(k+1/2)} rw^{(k'+1/2)} T[p % m, (-p') % m],
    p = k + 1/2, p' = k' + 1/2 (integers for half-integer k, k').
    """
    contour.validate(params)
    a, q, n, t = params.a, params.q, params.n, params.t_shift
    u = q**n
    m = contour.m_points
    rz, rw = contour.rz, contour.rw
    theta = 2.0 * PI * np.arange(m) / m
    zs = rz * np.exp(1j * theta)
    ws = rw * np.exp(1j * theta)
    saq = math.sqrt(a * q)

    def F(zv):
        return sp.q_pochhammer_inf(saq / zv, q) / sp.q_pochhammer_inf(saq * zv, q)

    Fz = F(zs)
    Fw = F(ws)
    rd = (rz / rw) * np.exp(1j * theta)
    kap = (
        sp.q_pochhammer_inf(u, u) ** 2
        * sp.jacobi_theta3(t * rd, u)
        / (sp.theta_mult(1.0 / rd, u) * sp.jacobi_theta3(complex(t), u))
    )
    idx = (np.arange(m)[:, None] - np.arange(m)[None, :]) % m
    G = (Fz[:, None] / Fw[None, :]) * kap[idx]
    return np.fft.fft2(G) / (m * m)


def _entry_from_table(T, contour: ContourSpec, k, kp):
    m = contour.m_points
    p = int(round(k + 0.5))
    pp = int(round(kp + 0.5))
    if not (abs(p) < m // 2 and abs(pp) < m // 2):
        raise ContourError("requested order exceeds the Fourier resolution of the table")
    lo = contour.rz ** (-p) * contour.rw ** (pp)
    return lo * T[p % m, (-pp) % m]


def discrete_cylindric_kernel(
    k: float,
    kp: float,
    params: ModelParams,
    contour: ContourSpec | None = None,
    check: bool = False,
) -> float:
    """Discrete kernel K(k, k') of the shift-mixed process at half-integers.

    Evaluated by spectrally accurate trapezoid sums on the two circles via a
    cached FFT table; the imaginary part must vanish to 1e-10 relative and is
    discarded.  ``check=True`` re-evaluates on a doubled grid and raises
    PrecisionError if the value moves by more than 1e-9.
    """
    if abs((k - 0.5) - round(k - 0.5)) > 1e-9 or abs((kp - 0.5) - round(kp - 0.5)) > 1e-9:
        raise DomainError("positions must be half-integers")
    if contour is None:
        contour = make_contour(params, k_scale=int(max(abs(k), abs(kp))) + 8)
    T = _kernel_table(params, contour)
    val = _entry_from_table(T, contour, k, kp)
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise PrecisionError(f"kernel entry K({k},{kp}) has imaginary part {val.imag:.2e}")
    if check:
        bigger = ContourSpec(contour.rz, contour.rw, contour.m_points * 2)
        val2 = _entry_from_table(_kernel_table(params, bigger), bigger, k, kp)
        if abs(val2 - val) > 1e-9 * max(1.0, abs(val)):
            raise PrecisionError(
                f"doubling m_points moved K({k},{kp}) by {abs(val2 - val):.2e}"
            )
    return float(val.real)


def discrete_kernel_matrix(params: ModelParams, contour: ContourSpec, ks) -> np.ndarray:
    """Matrix [K(k_i, k_j)] pulled from the FFT table in one pass."""
    T = _kernel_table(params, contour)
    ks = np.asarray(ks, dtype=float)
    mt = len(ks)
    out = np.empty((mt, mt))
    mx = 0.0
    for i in range(mt):
        for j in range(mt):
            v = _entry_from_table(T, contour, ks[i], ks[j])
            out[i, j] = v.real
            mx = max(mx, abs(v.imag) / max(1.0, abs(v.real)))
    if mx > 1e-10:
        raise PrecisionError(f"kernel matrix has relative imaginary parts up to {mx:.2e}")
    return out


# ---------------------------------------------------------------------------
# Limiting contour kernel (vertical Gamma-ratio lines)
# ---------------------------------------------------------------------------

def _sigma_rule(n_temp: float, eta: float, tail_tol: float):
    """Panels for the difference variable of the two vertical lines."""
    smax = (n_temp / PI) * math.log(16.0 / (eta * tail_tol))
    edges = [0.0]
    step = min(0.25 * n_temp, 0.5)
    while edges[-1] < smax:
        edges.append(min(edges[-1] + step, smax))
        step *= 1.4
    nodes, wts = _panel_nodes(np.array(edges), _GL16)
    return np.concatenate([nodes, -nodes]), np.concatenate([wts, wts])


def bessel_limit_contour_kernel(
    x: float,
    y: float,
    alpha: float,
    n_temp: int,
    eta: float = 0.25,
    tail_tol: float = 1e-9,
) -> float:
    """Vertical-line (Gamma-ratio) form of the finite-temperature Bessel kernel.

    (2 pi i)^{-2} times the double integral over Re zeta = +eta, Re omega =
    -eta of

        f(omega) e^{y omega} / (f(zeta) e^{x zeta}) * pi/(N sin(pi (zeta-omega)/N)),
        f(z) = Gamma((alpha+1)/2 + z) / Gamma((alpha+1)/2 - z).

    Two corrections relative to the naive display are load-bearing and are
    verified against ft_bessel_kernel: the factor pi inside the sine (forced
    by the Fermi integral identity int e^{sv}/(1+e^{Nv}) dv = pi/(N sin(pi
    s/N))), and the Gamma ratio arranged so both line factors decay (the
    other arrangement carries a non-decaying pinch mode and diverges).
    """
    if n_temp < 1:
        raise DomainError("n_temp must be >= 1")
    c = (alpha + 1.0) / 2.0
    eta = min(eta, 0.45 * c, 0.45 * n_temp)
    sn, sw = _sigma_rule(float(n_temp), eta, tail_tol)
    kap = PI / (n_temp * np.sin(PI * (2.0 * eta + 1j * sn) / n_temp))

    def g_of_mu(mu: np.ndarray) -> np.ndarray:
        z = eta + 1j * (mu[:, None] + sn[None, :] / 2.0)
        w = -eta + 1j * (mu[:, None] - sn[None, :] / 2.0)
        lf = (sp.log_gamma(c + w) - sp.log_gamma(c - w)) - (
            sp.log_gamma(c + z) - sp.log_gamma(c - z)
        )
        return (np.exp(lf - x * z + y * w) * kap[None, :] * sw[None, :]).sum(axis=1)

    delta = x - y
    gx, gw = _GL16

    def octave_sum(a_, b_):
        # sub-panels keep the e^{-i delta mu} rotation resolved
        sub = max(1, int(abs(delta) * (b_ - a_) / 1.5) + 1)
        acc = 0.0 + 0.0j
        for kseg in range(sub):
            p_ = a_ + (b_ - a_) * kseg / sub
            q_ = a_ + (b_ - a_) * (kseg + 1) / sub
            m_, h_ = 0.5 * (p_ + q_), 0.5 * (q_ - p_)
            acc += np.sum(g_of_mu(m_ + h_ * gx) * (h_ * gw))
        return acc

    total = octave_sum(0.0, 1.0)
    if abs(delta) > 0.1:
        # run to where the rotation dominates, then two-term integration by parts
        T2 = 80.0 / abs(delta)
        total += octave_sum(1.0, max(T2, 2.0))
        T2 = max(T2, 2.0)
        d = 0.25 / abs(delta)
        g0 = g_of_mu(np.array([T2 - d, T2, T2 + d]))
        B = g0 * np.exp(1j * delta * np.array([T2 - d, T2, T2 + d]))
        Bp = (B[2] - B[0]) / (2 * d)
        total += np.exp(-1j * delta * T2) * (B[1] / (1j * delta) - Bp / (1j * delta) ** 2)
    else:
        # slow or no rotation: octaves with a geometric-remainder estimate
        lo, hi = 1.0, 2.0
        segs = []
        for _ in range(24):
            seg = octave_sum(lo, hi)
            total += seg
            segs.append(seg)
            lo, hi = hi, 2.0 * hi
            if len(segs) >= 3 and abs(segs[-1]) < 1e-5:
                r = abs(segs[-1]) / max(abs(segs[-2]), 1e-300)
                if r < 0.95:
                    total += segs[-1] * r / (1.0 - r)
                    break
        else:
            raise QuadratureFailure("mu integration did not converge")
    return float((2.0 * total.real) / (4.0 * PI * PI))
