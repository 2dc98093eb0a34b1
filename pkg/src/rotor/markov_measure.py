"""Direction-dependent Markov measures built from Perron data of A(x0, y0)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NoConvergence, NonPrimitive, ZeroNotSimple
from .symbolic_graph import WeightedGraph, primitivity_exponent

POWER_MAX_ITER = 100_000
POWER_TOL = 1e-14


@dataclass(frozen=True)
class PerronData:
    """Dominant eigenvalue with positive left/right eigenvectors, ``l @ r == 1``."""

    lam: float
    l: np.ndarray
    r: np.ndarray
    iterations: int = 0

    def raw(self) -> tuple[np.ndarray, np.ndarray]:
        """Vectors rescaled so that their first components equal 1."""
        return self.l / self.l[0], self.r / self.r[0]


def perron(M, max_iter: int = POWER_MAX_ITER, tol: float = POWER_TOL) -> PerronData:
    """Power iteration on both sides, with the two-sided Rayleigh quotient for lambda.

    Stops once both eigen-residuals fall below ``tol * lambda``.
    """
    M = np.asarray(M, dtype=float)
    if (M < 0).any() or primitivity_exponent(M) is None:
        raise NonPrimitive("matrix is not nonnegative primitive")
    p = M.shape[0]
    r = np.full(p, 1.0 / np.sqrt(p))
    l = r.copy()
    lam = 0.0
    for it in range(1, max_iter + 1):
        Mr = M @ r
        lM = l @ M
        lam = float(l @ Mr) / float(l @ r)
        r = Mr / np.linalg.norm(Mr)
        l = lM / np.linalg.norm(lM)
        res_r = np.linalg.norm(M @ r - lam * r)
        res_l = np.linalg.norm(l @ M - lam * l)
        if max(res_r, res_l) <= tol * lam:
            break
    else:
        raise NoConvergence(f"power iteration did not converge in {max_iter} steps")
    lam = float(l @ M @ r) / float(l @ r)
    r = r / r.sum()
    l = l / float(l @ r)
    return PerronData(lam, l, r, it)


@dataclass(frozen=True)
class MarkovMeasure:
    Pi: np.ndarray
    q: np.ndarray
    x0: float
    y0: float
    alpha: float  # true (unshifted) direction

    @property
    def support(self) -> np.ndarray:
        return (self.Pi > 0).astype(np.int64)


def build_measure(graph: WeightedGraph, solution) -> MarkovMeasure:
    """Pi_jk = a_jk r_k / r_j from the Perron data of A(x0, y0)."""
    if solution.status != "ok":
        raise ValueError(f"no interior solution to build a measure from (status {solution.status})")
    a = solution.x0 * graph.weighted_matrix(solution.y0)
    pd = perron(a)
    # dividing by lam (== 1 up to rounding) keeps rows exactly stochastic
    Pi = a * pd.r[None, :] / (pd.lam * pd.r[:, None])
    q = pd.l * pd.r
    return MarkovMeasure(Pi, q, solution.x0, solution.y0, float(solution.alpha_true))


def measure_entropy(measure: MarkovMeasure) -> float:
    """-sum_jk q_j Pi_jk ln Pi_jk in nats."""
    P = measure.Pi
    mask = P > 0
    terms = np.zeros_like(P)
    terms[mask] = P[mask] * np.log(P[mask])
    return float(-(measure.q[:, None] * terms).sum())


def cylinder_measure(measure: MarkovMeasure, word: Sequence[int]) -> float:
    val = float(measure.q[word[0]])
    for a, b in zip(word, word[1:]):
        val *= float(measure.Pi[a, b])
    return val


def expected_drift(measure: MarkovMeasure, graph: WeightedGraph) -> float:
    """Mean edge weight sum_jk q_j Pi_jk k_jk (true weights)."""
    total = 0.0
    for i, j, k in graph.edges:
        total += measure.q[i] * measure.Pi[i, j] * k
    return float(total)


def null_vectors(B) -> tuple[np.ndarray, np.ndarray, float]:
    """(l, r, beta) for a matrix with a simple zero eigenvalue; l @ r == 1.

    beta is the product of the nonzero eigenvalues.
    """
    B = np.asarray(B, dtype=float)
    eig = np.linalg.eigvals(B)
    order = np.argsort(np.abs(eig))
    if abs(eig[order[0]]) >= 1e-9:
        raise ZeroNotSimple("matrix is not singular")
    if len(eig) > 1 and abs(eig[order[1]]) <= 1e-6:
        raise ZeroNotSimple("zero eigenvalue is not simple")
    beta = np.prod(np.delete(eig, order[0]))
    U, _, Vh = np.linalg.svd(B)
    r = Vh[-1]
    l = U[:, -1]
    lr = float(l @ r)
    if abs(lr) < 1e-12:
        raise ZeroNotSimple("left and right null vectors are orthogonal")
    return l / lr, r, float(np.real(beta))


def det_derivative_check(B, X, eps: float = 1e-6) -> tuple[float, float]:
    """Directional derivative of det at B along X: central difference vs beta * (l X r)."""
    B = np.asarray(B, dtype=float)
    X = np.asarray(X, dtype=float)
    l, r, beta = null_vectors(B)
    lhs = (np.linalg.det(B + eps * X) - np.linalg.det(B - eps * X)) / (2 * eps)
    rhs = beta * float(l @ X @ r)
    return float(lhs), rhs
