"""Hill climbing over F_k-free graphs with a fixed number of edges.

The move set is the Perron-vector edge rotation: pick a target ``u`` and a
source ``v``, and move the edges ``v v_i`` (``v_i`` in ``N(v) \\ N[u]``) to
``u v_i``.  When ``x_u >= x_v`` for the Perron vector ``x`` the spectral radius
strictly increases, so proposals are restricted to that direction and the
search only has to police fan-freeness and connectivity.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

from .enumerate import min_vertices
from .errors import FeasibilityError, InvariantError, MoveError, ParameterError, StructureError
from .graph import Graph, _bits, canon_limit, canonical_form, to_graph6
from .patterns import contains_fan, fan_hubs_for_new_edges, is_fan_free
from .spectral import DEFAULT_TOL, TIE_TOL, SpectralCertificate, spectral_radius

SEED_TRIES = 2000
MAX_TARGETS = 6
SIDEWAYS_LIMIT = 10


@dataclass(frozen=True)
class RotationMove:
    u: int
    v: int
    S: tuple[int, ...]

    def legal_for(self, g: Graph, allow_empty: bool = False) -> None:
        if self.u == self.v:
            raise MoveError("target and source coincide (u == v)")
        if not (0 <= self.u < g.n and 0 <= self.v < g.n):
            raise MoveError(f"move vertices out of range for n={g.n}")
        if not self.S and not allow_empty:
            raise MoveError("S must be non-empty")
        if len(set(self.S)) != len(self.S):
            raise MoveError(f"S has repeated vertices: {self.S}")
        if self.u in self.S:
            raise MoveError("u must not be in S")
        allowed = g.rows[self.v] & ~g.rows[self.u] & ~(1 << self.u)
        for w in self.S:
            if not allowed >> w & 1:
                raise MoveError(f"vertex {w} is not in N(v) \\ N[u]")


def rotate(g: Graph, move: RotationMove, allow_empty: bool = False) -> Graph:
    """``G - {v v_i} + {u v_i}``.  The vertex set is kept; ``v`` may end up isolated."""
    if not g.is_connected():
        raise StructureError("rotation is defined on connected graphs")
    move.legal_for(g, allow_empty)
    if not move.S:
        return g
    return g.remove_edges((move.v, w) for w in move.S).add_edges((move.u, w) for w in move.S)


def random_connected_graph(n: int, m: int, rng: random.Random) -> Graph:
    """Random spanning tree on ``n`` vertices plus ``m - n + 1`` random extra edges."""
    if not n - 1 <= m <= n * (n - 1) // 2:
        raise ParameterError(f"no connected graph with n={n}, m={m}")
    perm = list(range(n))
    rng.shuffle(perm)
    edges = {tuple(sorted((perm[i], perm[rng.randrange(i)]))) for i in range(1, n)}
    missing = [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in edges]
    edges.update(rng.sample(missing, m - len(edges)))
    return Graph.from_edges(n, edges)


def random_fan_free_seed(m: int, k: int, rng: random.Random, tries: int = SEED_TRIES) -> Graph:
    if m < 1:
        raise FeasibilityError(f"no connected graph with m={m} edges and no isolated vertices")
    lo, hi = min_vertices(m), m + 1
    for _ in range(tries):
        g = random_connected_graph(rng.randint(lo, hi), m, rng)
        if is_fan_free(g, k):
            return g
    raise FeasibilityError(f"no F_{k}-free seed with m={m} found in {tries} attempts")


def _tabu_key(g: Graph) -> bytes:
    # canonical forms are only available up to the canonicalization cap
    return canonical_form(g) if g.n <= canon_limit() else to_graph6(g).encode()


def _moves(g: Graph, x) -> Iterator[RotationMove]:
    order = sorted(range(g.n), key=lambda w: (-x[w], w))
    u_star = order[0]
    targets = [u_star] + [w for w in order if w != u_star][: MAX_TARGETS - 1]
    sources = sorted(range(g.n), key=lambda w: (x[w], w))
    for u in targets:
        for v in sources:
            if v == u or x[u] < x[v] - TIE_TOL:
                continue
            cand = sorted(_bits(g.rows[v] & ~g.rows[u] & ~(1 << u)), key=lambda w: (-x[w], w))
            if not cand:
                continue
            subsets: list[tuple[int, ...]] = [(w,) for w in cand]
            subsets += list(combinations(cand, 2))
            if len(cand) > 2:
                subsets.append(tuple(cand))
            for S in subsets:
                yield RotationMove(u, v, S)


def _apply(g: Graph, move: RotationMove, k: int) -> Graph | None:
    """Rotated graph with isolated vertices dropped, or None if it leaves the search space."""
    h = g.remove_edges((move.v, w) for w in move.S).add_edges((move.u, w) for w in move.S)
    if contains_fan(h, k, hubs=fan_hubs_for_new_edges(h, [(move.u, w) for w in move.S]), witness=False):
        return None
    h = h.drop_isolated()
    return h if h.is_connected() else None


@dataclass
class ClimbResult:
    best: Graph
    certificate: SpectralCertificate
    moves_accepted: int
    sideways: int
    seed_graph: str


def hill_climb(g: Graph, k: int, budget: int, tol: float = DEFAULT_TOL) -> ClimbResult:
    seed_g6 = to_graph6(g)
    cert = spectral_radius(g, tol)
    tabu = {_tabu_key(g)}
    accepted = sideways = 0
    best, best_cert = g, cert
    while accepted < budget:
        improving = None
        plateau = None
        for move in _moves(g, cert.perron):
            h = _apply(g, move, k)
            if h is None:
                continue
            hc = spectral_radius(h, tol)
            if hc.above(cert):
                improving = (h, hc)
                break
            if plateau is None and sideways < SIDEWAYS_LIMIT and hc.lambda_hi >= cert.lambda_lo:
                key = _tabu_key(h)
                if key not in tabu:
                    plateau = (h, hc, key)
        if improving is not None:
            g, cert = improving
            tabu.add(_tabu_key(g))
        elif plateau is not None:
            g, cert, key = plateau
            tabu.add(key)
            sideways += 1
        else:
            break
        accepted += 1
        if cert.lambda_lo > best_cert.lambda_hi:
            best, best_cert = g, cert
    return ClimbResult(best, best_cert, accepted, sideways, seed_g6)


@dataclass
class SearchReport:
    m: int
    k: int
    best: Graph
    certificate: SpectralCertificate
    restarts_used: int
    moves_accepted: int
    seed: int
    restart_lambdas: list[float] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "restarts_used": self.restarts_used,
            "moves_accepted": self.moves_accepted,
            "seed": self.seed,
        }

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "best": to_graph6(self.best),
            "n": self.best.n,
            "lambda": [self.certificate.lambda_lo, self.certificate.lambda_hi],
            "restarts_used": self.restarts_used,
            "moves_accepted": self.moves_accepted,
            "seed": self.seed,
            "restart_lambdas": self.restart_lambdas,
        }


def _restart(args) -> ClimbResult:
    m, k, budget, seed, r, tol = args
    rng = random.Random(f"{seed}:{r}")
    return hill_climb(random_fan_free_seed(m, k, rng), k, budget, tol)


def _merge_key(res: ClimbResult) -> bytes:
    return _tabu_key(res.best)


def local_search(m: int, k: int, restarts: int = 20, budget: int = 500, seed: int = 0,
                 jobs: int = 1, tol: float = DEFAULT_TOL) -> SearchReport:
    """Best-of-restarts hill climbing; the report depends only on the arguments, not on ``jobs``."""
    if m < 1:
        raise FeasibilityError(f"no graph with m={m} edges and no isolated vertices")
    if restarts < 1:
        raise ParameterError(f"restarts must be >= 1, got {restarts}")
    if budget < 0:
        raise ParameterError(f"budget must be >= 0, got {budget}")
    if k < 3:
        raise ParameterError(f"fan order k must be >= 3, got {k}")
    tasks = [(m, k, budget, seed, r, tol) for r in range(restarts)]
    if jobs > 1 and restarts > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_restart, tasks))
    else:
        results = [_restart(t) for t in tasks]
    top = max(res.certificate.lambda_lo for res in results)
    tied = [res for res in results if res.certificate.lambda_hi >= top]
    winner = min(tied, key=_merge_key)
    if winner.best.m != m or not is_fan_free(winner.best, k):
        raise InvariantError("search best failed re-validation")
    return SearchReport(
        m=m,
        k=k,
        best=winner.best,
        certificate=winner.certificate,
        restarts_used=restarts,
        moves_accepted=sum(res.moves_accepted for res in results),
        seed=seed,
        restart_lambdas=[float(res.certificate.lambda_hi) for res in results],
    )


def _random_legal_move(g: Graph, x, rng: random.Random) -> RotationMove | None:
    pairs = []
    for u in range(g.n):
        for v in range(g.n):
            if u != v and x[u] >= x[v] - TIE_TOL and g.rows[v] & ~g.rows[u] & ~(1 << u):
                pairs.append((u, v))
    if not pairs:
        return None
    u, v = rng.choice(pairs)
    cand = list(_bits(g.rows[v] & ~g.rows[u] & ~(1 << u)))
    size = rng.randint(1, len(cand))
    return RotationMove(u, v, tuple(sorted(rng.sample(cand, size))))


def check_rotation_lemma(trials: int = 500, n_range: tuple[int, int] = (4, 12), seed: int = 0,
                         tol: float = DEFAULT_TOL) -> dict:
    """Sample rotations with ``x_u >= x_v`` and certify that the spectral radius rises.

    ``certified_increase``: the new enclosure lies strictly above the old one.
    ``violation``: the new enclosure lies at or below the old one.
    ``inconclusive``: the enclosures overlap.
    """
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    lo_n, hi_n = n_range
    if lo_n < 3 or hi_n < lo_n:
        raise ParameterError(f"bad vertex range {n_range}")
    rng = random.Random(seed)
    counts = {"certified_increase": 0, "inconclusive": 0, "violation": 0}
    examples: list[dict] = []
    done = 0
    while done < trials:
        n = rng.randint(lo_n, hi_n)
        m = rng.randint(n - 1, n * (n - 1) // 2)
        g = random_connected_graph(n, m, rng)
        cert = spectral_radius(g, tol)
        move = _random_legal_move(g, cert.perron, rng)
        if move is None:
            continue
        h = rotate(g, move)
        hc = spectral_radius(h, tol)
        if hc.above(cert):
            counts["certified_increase"] += 1
        elif hc.lambda_hi <= cert.lambda_lo:
            counts["violation"] += 1
            examples.append({"graph6": to_graph6(g), "u": move.u, "v": move.v, "S": list(move.S)})
        else:
            counts["inconclusive"] += 1
        done += 1
    return {"trials": trials, **counts, "violations": examples}
