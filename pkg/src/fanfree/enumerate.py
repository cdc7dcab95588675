"""Isomorph-free generation of connected graphs by edge count.

Level ``m`` is built from level ``m - 1`` by adding one edge, either between
two existing vertices or to a new pendant vertex.  A child is kept only if
its *canonical last edge* (the greatest removable edge under its canonical
labeling) leads back to the parent's isomorphism class; siblings are
deduplicated by canonical form.  Every connected graph has exactly one
canonical parent, so each class is produced exactly once.

With a fan order ``k`` the generation is pruned to ``F_k``-free graphs.  This
is sound because deleting an edge never creates a fan, so the canonical
parent of an ``F_k``-free graph is itself ``F_k``-free.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Callable, Iterable

from .errors import CapacityError, InvariantError, ParameterError
from .graph import Graph, canon_limit, canonical_form, canonical_labeling, disjoint_union, from_graph6, to_graph6
from .patterns import contains_fan, fan_hubs_for_new_edges, is_fan_free
from .spectral import DEFAULT_TOL, conjecture_bound, spectral_radius

EXHAUSTIVE_MAX_M = 10
BOUND_SLACK = 1e-9
CSV_HEADER = ["k", "m", "n", "graph6", "lambda_lo", "lambda_hi", "bound", "satisfies_bound", "method"]


def min_vertices(m: int) -> int:
    """Smallest ``n`` with ``C(n, 2) >= m``."""
    n = max(2, math.ceil((1 + math.sqrt(1 + 8 * m)) / 2))
    while n > 2 and (n - 1) * (n - 2) // 2 >= m:
        n -= 1
    return n


@dataclass(frozen=True)
class EnumSpec:
    m: int
    k: int | None = None
    n_min: int | None = None
    n_max: int | None = None
    connected_only: bool = True

    def __post_init__(self):
        if self.m < 1:
            raise ParameterError(f"m must be >= 1, got {self.m}")
        if self.k is not None and self.k < 3:
            raise ParameterError(f"fan order k must be >= 3, got {self.k}")
        if self.n_min is None:
            object.__setattr__(self, "n_min", min_vertices(self.m))
        if self.n_max is None:
            object.__setattr__(self, "n_max", self.m + 1 if self.connected_only else 2 * self.m)
        if self.n_min < 2:
            raise ParameterError(f"n_min must be >= 2, got {self.n_min}")
        if self.n_max < self.n_min:
            raise ParameterError(f"empty vertex window [{self.n_min}, {self.n_max}]")

    def check_capacity(self) -> None:
        limit = canon_limit()
        # disconnected mode canonicalizes components only, each with <= m+1 vertices
        need = self.n_max if self.connected_only else min(self.n_max, self.m + 1)
        if need > limit:
            raise CapacityError(
                f"enumeration needs canonical labeling up to n={need}, above the cap {limit} "
                f"(set FANFREE_MAX_N to raise it)"
            )


def _canonical_parent_code(canon: Graph) -> bytes:
    """Canonical form of the graph left after deleting the canonical last edge."""
    rows = canon.rows
    for i, j in sorted(canon.edges(), reverse=True):
        di, dj = rows[i].bit_count(), rows[j].bit_count()
        reduced = canon.remove_edges([(i, j)])
        if dj == 1 or di == 1:
            leaf = j if dj == 1 else i
            keep = [v for v in range(canon.n) if v != leaf]
            return canonical_form(reduced.induced(keep))
        if reduced.is_connected():
            return canonical_form(reduced)
    raise InvariantError("connected graph with >= 2 edges has no removable edge")  # pragma: no cover


def _children(n: int, rows: tuple[int, ...], pcode: bytes, k: int | None, n_max: int) -> list[tuple[bytes, tuple[int, ...], int]]:
    parent = Graph(n, rows)
    cands: list[tuple[Graph, tuple[int, int]]] = []
    for i in range(n):
        for j in range(i + 1, n):
            if not rows[i] >> j & 1:
                cands.append((parent.add_edges([(i, j)]), (i, j)))
    if n < n_max:
        for i in range(n):
            grown = Graph(n + 1, rows[:i] + (rows[i] | 1 << n,) + rows[i + 1 :] + (1 << i,))
            cands.append((grown, (i, n)))
    out: dict[bytes, Graph] = {}
    for child, e in cands:
        if k is not None and contains_fan(child, k, hubs=fan_hubs_for_new_edges(child, [e]), witness=False):
            continue
        code, order = canonical_labeling(child)
        if code in out:
            continue
        canon = child.relabel(order)
        if _canonical_parent_code(canon) == pcode:
            out[code] = canon
    return [(code, g.rows, g.n) for code, g in out.items()]


def _children_task(args):
    return [c for parent in args[0] for c in _children(*parent, *args[1:])]


_LEVELS: dict[tuple[int, int | None, int], tuple[tuple[bytes, Graph], ...]] = {}


def _level(m: int, k: int | None, n_max: int, jobs: int = 1) -> tuple[tuple[bytes, Graph], ...]:
    """All connected classes with ``m`` edges and ``n <= n_max``, sorted by canonical form.

    Levels are memoised per process; ``jobs`` only affects how the work is
    split, never the result.
    """
    key = (m, k, n_max)
    hit = _LEVELS.get(key)
    if hit is not None:
        return hit
    if m == 1:
        g = Graph.from_edges(2, [(0, 1)])
        level = ((canonical_form(g), g),)
    else:
        prev = _level(m - 1, k, n_max, jobs)
        parents = [(g.n, g.rows, code) for code, g in prev]
        if jobs > 1 and len(parents) > 4 * jobs:
            chunks = [parents[i::jobs] for i in range(jobs)]
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                batches = list(ex.map(_children_task, [(c, k, n_max) for c in chunks]))
        else:
            batches = [_children_task((parents, k, n_max))]
        found: dict[bytes, Graph] = {}
        for batch in batches:
            for code, rows, n in batch:
                if code in found:
                    raise InvariantError("two canonical parents produced the same class")
                found[code] = Graph(n, rows)
        level = tuple(sorted(found.items()))
    _LEVELS[key] = level
    return level


def connected_classes(spec: EnumSpec, jobs: int = 1) -> list[Graph]:
    spec.check_capacity()
    if not spec.connected_only:
        raise ParameterError("connected_classes needs connected_only=True")
    return [g for _, g in _level(spec.m, spec.k, spec.n_max, max(1, jobs)) if spec.n_min <= g.n]


def _partitions(m: int, largest: int | None = None) -> Iterable[tuple[int, ...]]:
    largest = m if largest is None else largest
    if m == 0:
        yield ()
        return
    for first in range(min(m, largest), 0, -1):
        for rest in _partitions(m - first, first):
            yield (first,) + rest


def all_classes(spec: EnumSpec, jobs: int = 1) -> list[Graph]:
    """Classes with ``m`` edges and no isolated vertices; disconnected ones are composed from components."""
    if spec.connected_only:
        return connected_classes(spec, jobs)
    spec.check_capacity()
    keyed = []
    for parts in _partitions(spec.m):
        pools = {}
        for p in set(parts):
            pools[p] = list(_level(p, spec.k, p + 1, max(1, jobs)))
        counts = {p: parts.count(p) for p in pools}
        choices = [list(combinations_with_replacement(pools[p], counts[p])) for p in sorted(counts)]
        for combo in product(*choices):
            comps = [item for group in combo for item in group]
            n = sum(g.n for _, g in comps)
            if not spec.n_min <= n <= spec.n_max:
                continue
            key = b"|".join(sorted(code for code, _ in comps))
            keyed.append((key, disjoint_union(*(g for _, g in comps))))
    keyed.sort(key=lambda t: t[0])
    return [g for _, g in keyed]


def enumerate_connected(spec: EnumSpec, visit: Callable[[Graph], None] | None = None, jobs: int = 1) -> int:
    """Visit one representative per isomorphism class; return the class count.

    Representatives are canonically labeled and visited in canonical-form
    order, so the sequence does not depend on ``jobs``.
    """
    spec.check_capacity()
    graphs = all_classes(spec, jobs)
    if visit is not None:
        for g in graphs:
            visit(g)
    return len(graphs)


# -- verification records -----------------------------------------------


def conjecture_index(fan_order: int) -> int:
    """The ``k`` with ``fan_order`` in ``{2k+1, 2k+2}``."""
    return (fan_order - 1) // 2


@dataclass
class Maximizer:
    graph6: str
    n: int
    lambda_lo: float
    lambda_hi: float


@dataclass
class VerificationRecord:
    k: int
    fan: int
    m: int
    maximizers: list[Maximizer]
    lambda_lo: float
    lambda_hi: float
    bound: float
    satisfies_bound: bool
    method: str
    details: dict = field(default_factory=dict)

    def graphs(self) -> list[Graph]:
        return [from_graph6(x.graph6) for x in self.maximizers]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "fan": self.fan,
            "m": self.m,
            "maximizers": [vars(x) for x in self.maximizers],
            "lambda": [self.lambda_lo, self.lambda_hi],
            "bound": self.bound,
            "satisfies_bound": self.satisfies_bound,
            "method": self.method,
            "details": self.details,
        }


def _record(k: int, fan: int, m: int, best: list[tuple[Graph, object]], method: str, details=None) -> VerificationRecord:
    lo = max(c.lambda_lo for _, c in best)
    hi = max(c.lambda_hi for _, c in best)
    bound = conjecture_bound(k, m)
    return VerificationRecord(
        k=k,
        fan=fan,
        m=m,
        maximizers=[Maximizer(to_graph6(g), g.n, c.lambda_lo, c.lambda_hi) for g, c in best],
        lambda_lo=lo,
        lambda_hi=hi,
        bound=bound,
        satisfies_bound=hi <= bound + BOUND_SLACK,
        method=method,
        details=details or {},
    )


def max_lambda_over_class(m: int, k: int, jobs: int = 1, tol: float = DEFAULT_TOL) -> VerificationRecord:
    """Exhaustive spectral maximum over connected ``F_k``-free graphs with ``m`` edges.

    Co-maximizers are every graph whose enclosure reaches the best lower
    bound, so certified ties are never dropped.
    """
    spec = EnumSpec(m=m, k=k)
    certified = []
    for g in connected_classes(spec, jobs):
        certified.append((g, spectral_radius(g, tol)))
    if not certified:
        raise InvariantError(f"no connected F_{k}-free graph with {m} edges")  # pragma: no cover
    top_lo = max(c.lambda_lo for _, c in certified)
    best = [(g, c) for g, c in certified if c.lambda_hi >= top_lo]
    for g, _ in best:
        if not is_fan_free(g, k):
            raise InvariantError(f"maximizer {to_graph6(g)} contains F_{k}")
    return _record(conjecture_index(k), k, m, best, "exhaustive", {"classes": len(certified)})


def verify_table(k: int, m_list: Iterable[int], fan: int | None = None, jobs: int = 1,
                 exhaustive_max_m: int = EXHAUSTIVE_MAX_M, restarts: int = 20,
                 budget: int = 500, seed: int = 0) -> list[VerificationRecord]:
    """One record per ``m`` for the conjecture at index ``k`` (fan order ``2k+2`` by default)."""
    from .optimize import local_search

    fan = 2 * k + 2 if fan is None else fan
    if conjecture_index(fan) != k:
        raise ParameterError(f"fan order {fan} does not belong to conjecture index k={k}")
    out = []
    for m in m_list:
        if m <= exhaustive_max_m:
            out.append(max_lambda_over_class(m, fan, jobs))
        else:
            rep = local_search(m, fan, restarts=restarts, budget=budget, seed=seed, jobs=jobs)
            out.append(_record(k, fan, m, [(rep.best, rep.certificate)], "search", rep.summary()))
    return out


def records_to_csv(records: Iterable[VerificationRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        for x in r.maximizers:
            w.writerow([r.k, r.m, x.n, x.graph6, repr(x.lambda_lo), repr(x.lambda_hi),
                        repr(r.bound), str(r.satisfies_bound).lower(), r.method])
    return buf.getvalue()
