"""Directional entropy from the stationarity system of the generating function.

For a direction alpha = cot(theta) the entropy is ``-ln x0 - a ln y0`` with
``a = alpha - s0`` and ``(x0, y0)`` the positive solution of

    H(x, y) = 0,    a * x * H_x = y * H_y

for which A(x0, y0) = x0 * sum_j y0^j A_{s0+j} has spectral radius 1.  The
solver does not attack this system directly.  It bisects on the drift
``y * rho'(y) / rho(y)`` of the spectral radius of sum_j y^j A_{s0+j}, which is
nondecreasing in y, and then reads x0 = 1 / rho(y0).  This always lands on the
Perron (minimal) branch.  The polynomial system is only used afterwards as a
residual check.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import mpmath
import numpy as np

from .errors import BracketFailure, DegenerateEntry, NonPrimitive
from .genfun import BivarPoly, denominator_H, eval_with_partials, numerator_matrix
from .symbolic_graph import (
    RotationInterval,
    WeightedGraph,
    primitivity_exponent,
    rotation_interval,
)

Y_MIN, Y_MAX = 1e-12, 1e12
BISECTION_STEPS = 200
ENDPOINT_MARGIN = 1e-9
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class DirectionSpec:
    alpha_true: float | Fraction
    alpha_shifted: float
    theta: float

    @classmethod
    def of(cls, graph: WeightedGraph, alpha) -> "DirectionSpec":
        if isinstance(alpha, DirectionSpec):
            return alpha
        if isinstance(alpha, str):
            alpha = Fraction(alpha)
        return cls(alpha, float(alpha) - graph.s0, arccot(float(alpha)))


def arccot(a: float) -> float:
    """Principal branch into (0, pi)."""
    return math.atan2(1.0, a)


@dataclass(frozen=True)
class DirectionSolution:
    alpha_true: float | Fraction
    alpha_shifted: float
    x0: float
    y0: float
    entropy: float
    Q_value: float = float("nan")
    residual_H: float = float("nan")
    residual_stationarity: float = float("nan")
    spectral_radius: float = float("nan")  # of A(x0, y0); 1 at a minimal solution
    status: str = "ok"  # "ok", "boundary" or "AlphaOutsideInterval"
    flags: dict = field(default_factory=dict)

    @property
    def theta(self) -> float:
        return arccot(float(self.alpha_true))

    @property
    def on_boundary(self) -> bool:
        return self.status == "boundary"


@dataclass(frozen=True)
class _GraphData:
    interval: RotationInterval
    H: BivarPoly
    N: list
    layers: list
    primitive: bool


@lru_cache(maxsize=64)
def _prepare(graph: WeightedGraph) -> _GraphData:
    return _GraphData(
        interval=rotation_interval(graph),
        H=denominator_H(graph),
        N=numerator_matrix(graph),
        layers=[L.astype(float) for L in graph.layers],
        primitive=primitivity_exponent(graph.A) is not None,
    )


def _perron_dense(M: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    w, V = np.linalg.eig(M)
    k = int(np.argmax(w.real))
    lam = float(w[k].real)
    r = np.abs(V[:, k].real)
    wl, U = np.linalg.eig(M.T)
    kl = int(np.argmax(wl.real))
    l = np.abs(U[:, kl].real)
    return lam, l, r


def layer_spectral_radius(graph: WeightedGraph, y: float) -> tuple[float, float]:
    """(rho(y), drift(y)) for sum_j y^j A_{s0+j}.

    drift(y) = y rho'(y) / rho(y) = l Ã r / (l M r) with Ã = sum_j j y^j A_{s0+j}.
    """
    data = _prepare(graph)
    if not data.primitive:
        raise NonPrimitive("transition matrix is not primitive")
    if y <= 0:
        raise ValueError("y must be positive")
    M = np.zeros((graph.p, graph.p))
    Mt = np.zeros_like(M)
    for j, L in enumerate(data.layers):
        yj = y ** j
        M += yj * L
        Mt += j * yj * L
    lam, l, r = _perron_dense(M)
    drift = float(l @ Mt @ r) / float(l @ M @ r)
    return lam, drift


def Q_value(H: BivarPoly, x: float, y: float) -> float:
    _, Hx, Hy, Hxx, Hyy, Hxy = eval_with_partials(H, x, y)
    return (-x * Hx * (y * Hy) ** 2 - y * Hy * (x * Hx) ** 2
            - y ** 2 * x ** 2 * (Hy ** 2 * Hxx + Hx ** 2 * Hyy - 2 * Hx * Hy * Hxy))


def _boundary(graph, data, d: DirectionSpec, at_low: bool) -> DirectionSolution:
    y = Y_MIN if at_low else Y_MAX
    rho, _ = layer_spectral_radius(graph, y)
    # one-sided limit of ln rho(y) - a ln y, read off at the end of the bracket
    entropy = max(0.0, math.log(rho) - d.alpha_shifted * math.log(y))
    return DirectionSolution(d.alpha_true, d.alpha_shifted, 1.0 / rho, y, entropy,
                             status="boundary", flags={"on_boundary": True})


def solve_direction(graph: WeightedGraph, alpha) -> DirectionSolution:
    """Solve the stationarity system for one direction (alpha = cot theta, unshifted)."""
    d = DirectionSpec.of(graph, alpha)
    data = _prepare(graph)
    lo, hi = float(data.interval.lo), float(data.interval.hi)
    a_true = float(d.alpha_true)
    if a_true < lo - ENDPOINT_MARGIN or a_true > hi + ENDPOINT_MARGIN:
        return DirectionSolution(d.alpha_true, d.alpha_shifted, float("nan"), float("nan"), 0.0,
                                 status="AlphaOutsideInterval", flags={"outside_interval": True})
    if abs(a_true - lo) <= ENDPOINT_MARGIN:
        return _boundary(graph, data, d, at_low=True)
    if abs(a_true - hi) <= ENDPOINT_MARGIN:
        return _boundary(graph, data, d, at_low=False)

    a = d.alpha_shifted
    u_lo, u_hi = math.log(Y_MIN), math.log(Y_MAX)
    if layer_spectral_radius(graph, Y_MIN)[1] > a or layer_spectral_radius(graph, Y_MAX)[1] < a:
        raise BracketFailure(f"drift does not reach {a} inside y in [{Y_MIN}, {Y_MAX}]")
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (u_lo + u_hi)
        if mid in (u_lo, u_hi):
            break
        if layer_spectral_radius(graph, math.exp(mid))[1] < a:
            u_lo = mid
        else:
            u_hi = mid
    y0 = math.exp(0.5 * (u_lo + u_hi))
    rho, _ = layer_spectral_radius(graph, y0)
    x0 = 1.0 / rho

    Hv, Hx, Hy, *_ = eval_with_partials(data.H, x0, y0)
    Q = Q_value(data.H, x0, y0)
    diag = [float(data.N[i][i](x0, y0)) for i in range(graph.p)]
    spec_rad = _perron_dense(x0 * graph.weighted_matrix(y0))[0]
    flags = {
        "f_nonzero_diag": any(abs(v) > 1e-12 for v in diag),
        "Q_nonzero": abs(Q) > 1e-12,
        "on_boundary": False,
    }
    return DirectionSolution(
        d.alpha_true, a, x0, y0,
        entropy=-math.log(x0) - a * math.log(y0),
        Q_value=Q,
        residual_H=abs(Hv),
        residual_stationarity=abs(a * x0 * Hx - y0 * Hy),
        spectral_radius=spec_rad,
        flags=flags,
    )


def log_asymptotic_count(graph: WeightedGraph, entry: tuple[int, int], alpha, n: int) -> float:
    """Natural log of the smooth-point asymptotic for the coefficient of x^n y^(a n)."""
    sol = solve_direction(graph, alpha)
    if sol.status != "ok":
        raise DegenerateEntry(f"no interior solution (status {sol.status})")
    data = _prepare(graph)
    i, j = entry
    f = float(data.N[i][j](sol.x0, sol.y0))
    _, Hx, *_ = eval_with_partials(data.H, sol.x0, sol.y0)
    Q = sol.Q_value
    if abs(f) <= 1e-12 or abs(Q) <= 1e-12:
        raise DegenerateEntry(f"f(x0,y0) = {f}, Q(x0,y0) = {Q}")
    ratio = -sol.x0 * Hx / (n * Q)
    if f < 0 or ratio <= 0:
        raise DegenerateEntry("asymptotic prefactor is not positive")
    a = sol.alpha_shifted
    return (math.log(f) - 0.5 * math.log(2 * math.pi) - n * math.log(sol.x0)
            - a * n * math.log(sol.y0) + 0.5 * math.log(ratio))


def asymptotic_count(graph: WeightedGraph, entry: tuple[int, int], alpha, n: int) -> mpmath.mpf:
    """Leading-order estimate of the count of n+1 letter words i -> j with weight alpha*n.

    Returned as an mpmath float since it overflows doubles for moderate n.
    """
    return mpmath.exp(mpmath.mpf(log_asymptotic_count(graph, entry, alpha, n)))


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class EntropyCurve:
    solutions: tuple[DirectionSolution, ...]
    interval: RotationInterval

    @property
    def alphas(self) -> np.ndarray:
        return np.array([float(s.alpha_true) for s in self.solutions])

    @property
    def entropies(self) -> np.ndarray:
        return np.array([s.entropy for s in self.solutions])


def thread_count() -> int:
    raw = os.environ.get("ROTOR_THREADS")
    if not raw:
        return 1
    n = int(raw)
    if n < 1:
        raise ValueError("ROTOR_THREADS must be a positive integer")
    return n


def chebyshev_grid(lo: float, hi: float, samples: int) -> list[float]:
    """Chebyshev nodes of the first kind on (lo, hi), ascending, endpoints excluded."""
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return [mid - half * math.cos((2 * k + 1) * math.pi / (2 * samples)) for k in range(samples)]


def entropy_curve(graph: WeightedGraph, samples: int, threads: Optional[int] = None) -> EntropyCurve:
    if samples < 2:
        raise ValueError("samples must be >= 2")
    data = _prepare(graph)
    lo, hi = data.interval.lo, data.interval.hi
    if lo == hi:
        return EntropyCurve((solve_direction(graph, lo),), data.interval)
    grid = chebyshev_grid(float(lo), float(hi), samples)
    threads = thread_count() if threads is None else threads

    def solve(a):
        try:
            return solve_direction(graph, a)
        except BracketFailure:
            return DirectionSolution(a, a - graph.s0, float("nan"), float("nan"), float("nan"),
                                     status="BracketFailure", flags={"bracket_failure": True})

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            sols = list(pool.map(solve, grid))
    else:
        sols = [solve(a) for a in grid]
    return EntropyCurve(tuple(sols), data.interval)


@dataclass(frozen=True)
class MaxDirection:
    alpha_max: float
    theta_max: float
    h_top: float
    lam: float


def max_entropy_direction(graph: WeightedGraph) -> MaxDirection:
    """Direction whose directional entropy equals the topological entropy (y0 = 1).

    alpha_max = (l Ã r) / (l A r) + s0, with l, r the Perron vectors of A and
    Ã = sum_j j A_{s0+j}.
    """
    lam, drift = layer_spectral_radius(graph, 1.0)
    alpha = drift + graph.s0
    return MaxDirection(alpha, arccot(alpha), math.log(lam), lam)
