"""Decomposition around the extremal vertex and the structural audit.

For a connected graph with Perron vector ``x`` and extremal vertex ``u*``:
``U = N(u*)``, ``W = V \\ N[u*]``, ``U0`` the isolated vertices of ``G[U]``
and ``U+ = U \\ U0``.  Each nontrivial component ``H`` of ``G[U]`` gets a
shape label and the surplus

    gamma(H) = sum_{u in H} (d_H(u) - 1) x_u / x_{u*} - e(H).

The audit evaluates the counting inequalities and the structural
conclusions that hold for the spectral maximizer at large ``m``.  On other
graphs they are diagnostics only: a ``False`` is information, not an error.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvariantError, ParameterError, StructureError
from .graph import Graph, _bits, canonical_form, complete, cycle
from .patterns import contains_fan
from .spectral import DEFAULT_TOL, SpectralCertificate, spectral_radius

AUDIT_TOL = 1e-9
RATIO_SLACK = 1e-12

# upper bounds on gamma by shape
GAMMA_BOUND = {
    "star": -1,
    "double_star": -1,
    "star_plus_edge": 0,
    "C4": 0,
    "K4_minus_e": 1,
    "K4": 2,
}


@dataclass(frozen=True)
class ShapeClass:
    tag: str
    params: tuple[int, ...] = ()

    def __str__(self) -> str:
        if self.params:
            return f"{self.tag}({','.join(map(str, self.params))})"
        return self.tag

    @property
    def gamma_bound(self) -> float | None:
        return GAMMA_BOUND.get(self.tag)


_SMALL_SHAPES = {}


def _small_shapes() -> dict[bytes, ShapeClass]:
    if not _SMALL_SHAPES:
        k4 = complete(4)
        _SMALL_SHAPES[canonical_form(cycle(4))] = ShapeClass("C4")
        _SMALL_SHAPES[canonical_form(k4.remove_edges([(0, 1)]))] = ShapeClass("K4_minus_e")
        _SMALL_SHAPES[canonical_form(k4)] = ShapeClass("K4")
    return _SMALL_SHAPES


def classify_component(h: Graph) -> ShapeClass:
    """Match ``h`` against star, double star, star plus edge, C4, K4-e, K4."""
    if h.n < 2:
        raise StructureError("classify_component needs at least two vertices")
    if not h.is_connected():
        raise StructureError("classify_component needs a connected graph")
    n, m = h.n, h.m
    degs = h.degrees()
    top = max(degs)
    if m == n - 1:
        if top == n - 1:
            return ShapeClass("star", (n - 1,))
        inner = [v for v in range(n) if degs[v] > 1]
        if len(inner) == 2:
            a, b = sorted(d - 1 for d in (degs[inner[0]], degs[inner[1]]))
            return ShapeClass("double_star", (a, b))
        return ShapeClass("other")
    if m == n and top == n - 1 and n >= 3:
        # a dominating vertex plus exactly one edge among the leaves
        return ShapeClass("star_plus_edge", (n - 1,))
    if n == 4:
        shape = _small_shapes().get(canonical_form(h))
        if shape is not None:
            return shape
    return ShapeClass("other")


def gamma(h: Graph, ratios) -> float:
    """``sum (d_H(u) - 1) * ratio_u - e(H)`` with ratios in ``(0, 1]``."""
    r = np.asarray(ratios, dtype=float)
    if r.shape != (h.n,):
        raise ParameterError(f"expected {h.n} ratios, got shape {r.shape}")
    if np.any(r <= 0) or np.any(r > 1 + RATIO_SLACK):
        raise ParameterError("ratios must lie in (0, 1]")
    d = np.array(h.degrees(), dtype=float)
    return float(((d - 1) * r).sum() - h.m)


@dataclass
class Component:
    vertices: list[int]
    shape: ShapeClass
    gamma: float
    edges: int
    w_neighbors: list[int]

    def to_dict(self) -> dict:
        return {
            "vertices": self.vertices,
            "shape": str(self.shape),
            "gamma": self.gamma,
            "edges": self.edges,
            "W_H": self.w_neighbors,
        }


@dataclass
class Decomposition:
    u_star: int
    U: list[int]
    W: list[int]
    U0: list[int]
    U_plus: list[int]
    W0: list[int]
    components: list[Component]
    e_U: int
    e_W: int
    e_UW: int
    ratios: np.ndarray = field(repr=False)
    certificate: SpectralCertificate = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "u_star": self.u_star,
            "U": self.U,
            "W": self.W,
            "U0": self.U0,
            "U_plus": self.U_plus,
            "W0": self.W0,
            "e_U": self.e_U,
            "e_W": self.e_W,
            "e_UW": self.e_UW,
            "components": [c.to_dict() for c in self.components],
        }


def decompose(g: Graph, tol: float = DEFAULT_TOL) -> Decomposition:
    if not g.is_connected():
        raise StructureError("decomposition requires a connected graph")
    cert = spectral_radius(g, tol)
    x = cert.perron
    us = cert.u_star
    ratios = x / x[us]
    rows = g.rows
    u_mask = rows[us]
    w_mask = ((1 << g.n) - 1) & ~u_mask & ~(1 << us)
    U = list(_bits(u_mask))
    W = list(_bits(w_mask))
    U0 = [u for u in U if not rows[u] & u_mask]
    U_plus = [u for u in U if rows[u] & u_mask]
    W0 = [w for w in W if not rows[w] & w_mask]
    e_U = sum((rows[u] & u_mask).bit_count() for u in U) // 2
    e_W = sum((rows[w] & w_mask).bit_count() for w in W) // 2
    e_UW = sum((rows[u] & w_mask).bit_count() for u in U)
    gu = g.induced(U)
    comps = []
    for comp in gu.components():
        if len(comp) < 2:
            continue
        verts = [U[i] for i in comp]
        h = gu.induced(comp)
        w_nb = 0
        for v in verts:
            w_nb |= rows[v] & w_mask
        comps.append(Component(
            vertices=verts,
            shape=classify_component(h),
            gamma=gamma(h, ratios[verts]),
            edges=h.m,
            w_neighbors=list(_bits(w_nb)),
        ))
    if g.m != len(U) + e_U + e_UW + e_W:
        raise InvariantError("edge partition identity failed")  # pragma: no cover
    return Decomposition(us, U, W, U0, U_plus, W0, comps, e_U, e_W, e_UW, ratios, cert)


@dataclass
class LemmaCheck:
    name: str
    holds: bool
    residual: float

    def to_dict(self) -> dict:
        return {"name": self.name, "holds": self.holds, "residual": self.residual}


@dataclass
class LemmaAudit:
    m: int
    k: int
    lambda_lo: float
    lambda_hi: float
    hypothesis_holds: bool
    equality_gap: float
    walk_lhs: float
    walk_rhs: float
    e_W_bound_slack: float
    decomposition: Decomposition
    lemmas: list[LemmaCheck]

    def lemma(self, name: str) -> LemmaCheck:
        for c in self.lemmas:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def gammas(self) -> list[float]:
        return [c.gamma for c in self.decomposition.components]

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "lambda": [self.lambda_lo, self.lambda_hi],
            "hypothesis_holds": self.hypothesis_holds,
            "equality_gap": self.equality_gap,
            "walk_count_inequality": {"lhs": self.walk_lhs, "rhs": self.walk_rhs},
            "e_W_bound_slack": self.e_W_bound_slack,
            "decomposition": self.decomposition.to_dict(),
            "lemmas": [c.to_dict() for c in self.lemmas],
        }


def _shape_absent(d: Decomposition, tag: str) -> tuple[bool, float]:
    count = sum(1 for c in d.components if c.shape.tag == tag)
    return count == 0, float(count)


def audit(g: Graph, k: int = 6, tol: float = DEFAULT_TOL) -> LemmaAudit:
    """Evaluate the counting inequalities and structural conclusions on ``g``.

    ``hypothesis_holds`` reports ``lambda^2 - lambda >= m - 1``, the premise
    under which the first inequality is derived; read the other checks
    together with it.
    """
    witness = contains_fan(g, k)
    if witness is not None:
        raise StructureError(f"graph contains F_{k} (hub {witness.hub}, path {list(witness.path)})")
    d = decompose(g, tol)
    lam = d.certificate.mid
    m = g.m
    r = d.ratios
    rows = g.rows
    u_mask = 0
    for u in d.U:
        u_mask |= 1 << u
    d_u = {v: (rows[v] & u_mask).bit_count() for v in range(g.n)}

    gap = float(lam * lam - lam - (m - 1))
    u0_sum = float(sum(r[u] for u in d.U0))
    w_term = float(sum(d_u[w] * r[w] for w in d.W))
    lhs = float(sum((d_u[u] - 1) * r[u] for u in d.U_plus)) + w_term
    rhs = d.e_U + d.e_UW + d.e_W + u0_sum - 1
    gammas = [c.gamma for c in d.components]
    gamma_sum = sum(gammas)
    slack2 = gamma_sum - u0_sum + 1 - d.e_W

    checks = [
        LemmaCheck("hypothesis_lambda_sq", bool(gap >= -AUDIT_TOL), float(gap)),
        LemmaCheck("walk_count_inequality", lhs - rhs >= -AUDIT_TOL, lhs - rhs),
        LemmaCheck("e_W_bound", slack2 >= -AUDIT_TOL, slack2),
        LemmaCheck("e_U_at_least_4", d.e_U >= 4, float(d.e_U - 4)),
    ]
    others = sum(1 for c in d.components if c.shape.tag == "other")
    checks.append(LemmaCheck("shape_menu", others == 0, float(others)))
    worst = max((c.gamma - c.shape.gamma_bound for c in d.components if c.shape.gamma_bound is not None),
                default=0.0)
    checks.append(LemmaCheck("gamma_within_shape_bound", worst <= AUDIT_TOL, worst))
    gmax = max(gammas, default=0.0)
    checks.append(LemmaCheck("gamma_nonpositive", gmax <= AUDIT_TOL, gmax))
    for tag, label in (("K4", "no_K4"), ("K4_minus_e", "no_K4_minus_e")):
        ok, res = _shape_absent(d, tag)
        checks.append(LemmaCheck(label, ok, res))
    checks.append(LemmaCheck("e_W_zero", d.e_W == 0, float(d.e_W)))
    for tag, label in (("C4", "no_C4"), ("star_plus_edge", "no_star_plus_edge")):
        ok, res = _shape_absent(d, tag)
        checks.append(LemmaCheck(label, ok, res))
    single = len(d.components) == 1
    g_res = abs(d.components[0].gamma + 1) if single else float("inf")
    signature = single and g_res <= AUDIT_TOL and not d.U0 and not d.W
    checks.append(LemmaCheck("equality_signature", signature, g_res if single else float(len(d.components))))
    return LemmaAudit(
        m=m,
        k=k,
        lambda_lo=d.certificate.lambda_lo,
        lambda_hi=d.certificate.lambda_hi,
        hypothesis_holds=bool(gap >= -AUDIT_TOL),
        equality_gap=float(gap),
        walk_lhs=lhs,
        walk_rhs=rhs,
        e_W_bound_slack=slack2,
        decomposition=d,
        lemmas=checks,
    )


def neighborhood_shapes(g: Graph, u: int) -> list[ShapeClass]:
    """Shapes of the nontrivial components of ``G[N(u)]``."""
    nb = g.neighbors(u)
    sub = g.induced(nb)
    return [classify_component(sub.induced(c)) for c in sub.components() if len(c) >= 2]
