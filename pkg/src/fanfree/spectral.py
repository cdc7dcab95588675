"""Certified spectral radius and Perron vector.

Every iterate ``x > 0`` gives Collatz-Wielandt bounds

    min_u (Ax)_u / x_u  <=  lambda(G)  <=  max_u (Ax)_u / x_u

for a connected graph, so the enclosure is valid at every step, not just at
convergence.  Iteration starts with power steps on ``A + I`` (the shift keeps
bipartite graphs from oscillating) and then switches to inverse iteration
with shift ``sigma`` just above the current upper bound.  For
``sigma > lambda(G)`` the matrix ``(sigma I - A)^{-1}`` is entrywise positive,
so iterates stay positive and the certificate never lapses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError, ParameterError, StructureError
from .graph import Graph

DEFAULT_TOL = 1e-10
TIE_TOL = 1e-12
_EPS = np.finfo(float).eps
_POWER_WARMUP = 8


@dataclass(frozen=True)
class SpectralCertificate:
    lambda_lo: float
    lambda_hi: float
    perron: np.ndarray = field(repr=False)
    iterations: int
    residual: float
    component: tuple[int, ...] = field(repr=False)
    connected: bool = True

    @property
    def width(self) -> float:
        return self.lambda_hi - self.lambda_lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lambda_lo + self.lambda_hi)

    @property
    def u_star(self) -> int:
        return extremal_vertex(self.perron)

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lambda_lo - slack <= value <= self.lambda_hi + slack

    def above(self, other: "SpectralCertificate") -> bool:
        """Certified strict increase: this enclosure lies entirely above ``other``."""
        return self.lambda_lo > other.lambda_hi

    def to_dict(self) -> dict:
        return {
            "lambda_lo": self.lambda_lo,
            "lambda_hi": self.lambda_hi,
            "iterations": self.iterations,
            "residual": self.residual,
            "connected": self.connected,
            "component": list(self.component),
            "perron": [float(v) for v in self.perron],
        }


def _cw_bounds(a: np.ndarray, x: np.ndarray, max_deg: int) -> tuple[float, float, np.ndarray]:
    y = a @ x
    ratios = y / x
    lo = float(ratios.min())
    hi = float(ratios.max())
    # rounding in a sum of <= max_deg positive terms plus one division
    pad = (max_deg + 2) * _EPS * max(abs(hi), 1.0)
    return float(lo - pad), float(hi + pad), y


def _component_radius(a: np.ndarray, tol: float, budget: int) -> tuple[float, float, np.ndarray, int, float]:
    nc = a.shape[0]
    if nc == 1:
        return 0.0, 0.0, np.ones(1), 0, 0.0
    deg = a.sum(axis=1)
    max_deg = int(deg.max())
    x = deg / np.linalg.norm(deg)
    eye = np.eye(nc)
    best = (-math.inf, math.inf, x)
    stall = 0
    for it in range(1, budget + 1):
        lo, hi, y = _cw_bounds(a, x, max_deg)
        if hi - lo < best[1] - best[0]:
            best = (lo, hi, x)
            stall = 0
        else:
            stall += 1
        if hi - lo <= tol:
            theta = float(x @ y)
            res = float(np.linalg.norm(y - theta * x))
            return lo, hi, x, it, res
        if stall > 25:
            break
        x_new = None
        if it > _POWER_WARMUP:
            sigma = hi + max(hi - lo, 4 * _EPS * max(hi, 1.0))
            try:
                z = np.linalg.solve(sigma * eye - a, x)
            except np.linalg.LinAlgError:
                z = None
            if z is not None and np.all(np.isfinite(z)) and np.all(z > 0):
                x_new = z
        if x_new is None:
            x_new = y + x
        x = x_new / np.linalg.norm(x_new)
    lo, hi, x = best
    raise BudgetError(
        f"no enclosure of width <= {tol:g} within {budget} iterations "
        f"(best [{lo!r}, {hi!r}])",
        best=(lo, hi),
    )


def iteration_budget(n: int) -> int:
    return int(100 * n * math.log(n + 1) + 1000)


def spectral_radius(g: Graph, tol: float = DEFAULT_TOL) -> SpectralCertificate:
    """Certified enclosure of the largest adjacency eigenvalue of ``g``.

    Disconnected graphs are handled per component; the Perron vector is
    reported on the achieving component (lowest-indexed on ties) and is zero
    elsewhere, with ``connected=False``.
    """
    if not tol > 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    if g.n == 0:
        raise ParameterError("spectral radius of the empty graph is undefined")
    comps = g.components()
    budget = iteration_budget(g.n)
    results = []
    for comp in comps:
        a = g.induced(comp).adjacency_matrix()
        results.append((comp, _component_radius(a, tol, budget)))
    # achieving component: largest upper bound, first in vertex order on ties
    best_i = 0
    for i, (_, r) in enumerate(results):
        if r[1] > results[best_i][1][1]:
            best_i = i
    comp, (lo_c, hi_c, xc, iters, res) = results[best_i]
    lo = max(r[0] for _, r in results)
    hi = max(r[1] for _, r in results)
    x = np.zeros(g.n)
    x[comp] = xc
    return SpectralCertificate(
        lambda_lo=lo,
        lambda_hi=hi,
        perron=x,
        iterations=sum(r[3] for _, r in results),
        residual=res,
        component=tuple(comp),
        connected=len(comps) == 1,
    )


def perron_vector(g: Graph, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Positive unit Perron vector of a connected graph."""
    if not g.is_connected():
        raise StructureError("Perron vector requires a connected graph; select a component first")
    return spectral_radius(g, tol).perron


def extremal_vertex(x: np.ndarray) -> int:
    """Lowest index among entries within ``TIE_TOL`` of the maximum."""
    top = float(np.max(x))
    return int(np.flatnonzero(x >= top - TIE_TOL)[0])


def conjecture_bound(k: int, m: int) -> float:
    """``(k - 1 + sqrt(4m - k^2 + 1)) / 2``; for ``k = 2`` this is ``(1 + sqrt(4m - 3)) / 2``."""
    rad = 4 * m - k * k + 1
    if rad < 0:
        raise ParameterError(f"4m - k^2 + 1 = {rad} < 0 for k={k}, m={m}")
    return (k - 1 + math.sqrt(rad)) / 2


def closed_form_join_lambda(k: int, s: int) -> float:
    """Spectral radius of ``K_k v sK_1``: the largest root of ``x^2 - (k-1)x - ks``."""
    if k < 2:
        raise ParameterError(f"k must be >= 2, got {k}")
    if s < 1:
        raise ParameterError(f"s must be >= 1, got {s}")
    return ((k - 1) + math.sqrt((k - 1) ** 2 + 4 * k * s)) / 2
