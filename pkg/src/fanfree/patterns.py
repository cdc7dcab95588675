"""Path and fan subgraph detection.

A graph contains ``F_k = K_1 v P_{k-1}`` exactly when some vertex has a
``P_{k-1}`` (as a subgraph, not necessarily induced) inside its
neighbourhood, so fan detection reduces to bounded path search in each
neighbourhood subgraph.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import InvariantError
from .graph import Graph, _bits

MEMO_COMPONENT_LIMIT = 20


@dataclass(frozen=True)
class FanWitness:
    hub: int
    path: tuple[int, ...]

    def check(self, g: Graph) -> None:
        verts = (self.hub, *self.path)
        if len(set(verts)) != len(verts):
            raise InvariantError(f"fan witness repeats a vertex: {verts}")
        for v in self.path:
            if not g.has_edge(self.hub, v):
                raise InvariantError(f"fan witness hub {self.hub} not adjacent to {v}")
        for a, b in zip(self.path, self.path[1:]):
            if not g.has_edge(a, b):
                raise InvariantError(f"fan witness path edge {a}-{b} missing")

    def to_dict(self) -> dict:
        return {"hub": self.hub, "path": list(self.path)}


def neighborhood_subgraph(g: Graph, u: int) -> tuple[Graph, list[int]]:
    """``G[N(u)]`` together with the map from its labels back to ``g``."""
    if not 0 <= u < g.n:
        raise IndexError(f"vertex {u} out of range for n={g.n}")
    labels = g.neighbors(u)
    return g.induced(labels), labels


def _find_path(rows, comp_mask: int, t: int, memo: bool) -> list[int] | None:
    """DFS for a simple path on ``t`` vertices inside one component."""
    starts = sorted(_bits(comp_mask), key=lambda v: -(rows[v] & comp_mask).bit_count())
    dead: set[tuple[int, int]] = set()

    def extend(v: int, used: int, length: int) -> list[int] | None:
        if length == t:
            return [v]
        if memo and (v, used) in dead:
            return None
        cand = rows[v] & comp_mask & ~used
        # longest-first: prefer neighbours with more free neighbours
        for w in sorted(_bits(cand), key=lambda x: -(rows[x] & comp_mask & ~used).bit_count()):
            tail = extend(w, used | (1 << w), length + 1)
            if tail is not None:
                return [v] + tail
        if memo:
            dead.add((v, used))
        return None

    for s in starts:
        found = extend(s, 1 << s, 1)
        if found is not None:
            return found
    return None


def find_path(g: Graph, t: int) -> list[int] | None:
    """A path on ``t`` vertices in ``g`` (as a subgraph), or None."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if t > g.n:
        return None
    if t == 1:
        return [0]
    rows = g.rows
    for comp in g.components():
        if len(comp) < t:
            continue
        mask = 0
        for v in comp:
            mask |= 1 << v
        # a component with an edge count below t-1 cannot host P_t
        if sum((rows[v] & mask).bit_count() for v in comp) // 2 < t - 1:
            continue
        found = _find_path(rows, mask, t, memo=len(comp) <= MEMO_COMPONENT_LIMIT)
        if found is not None:
            return found
    return None


def has_path_on(g: Graph, t: int) -> bool:
    return find_path(g, t) is not None


def contains_fan(g: Graph, k: int, hubs: Iterable[int] | None = None,
                 witness: bool = True) -> FanWitness | bool | None:
    """Look for ``F_k`` in ``g``.

    Returns a validated :class:`FanWitness` (or ``True`` when
    ``witness=False``) if one exists, else ``None``.  ``hubs`` restricts the
    candidate hub vertices, which is how incremental callers check only the
    fans that a newly added edge could create.
    """
    if k < 3:
        raise ValueError("fan order k must be >= 3")
    cand = range(g.n) if hubs is None else set(hubs)
    order = sorted((u for u in cand if g.degree(u) >= k - 1), key=lambda u: (-g.degree(u), u))
    for u in order:
        sub, labels = neighborhood_subgraph(g, u)
        p = find_path(sub, k - 1)
        if p is None:
            continue
        if not witness:
            return True
        w = FanWitness(u, tuple(labels[i] for i in p))
        w.check(g)
        return w
    return None


def is_fan_free(g: Graph, k: int) -> bool:
    return contains_fan(g, k, witness=False) is None


def is_triangle_free(g: Graph) -> bool:
    rows = g.rows
    for u in range(g.n):
        for v in _bits(rows[u] >> (u + 1) << (u + 1)):
            if rows[u] & rows[v]:
                return False
    return True


def fan_hubs_for_new_edges(g: Graph, edges: Iterable[tuple[int, int]]) -> set[int]:
    """Hubs of every fan in ``g`` that could use one of ``edges``.

    An ``F_k`` through edge ``ab`` has its hub at ``a``, at ``b``, or at a
    common neighbour of both.
    """
    hubs: set[int] = set()
    for a, b in edges:
        hubs.update((a, b))
        hubs.update(_bits(g.rows[a] & g.rows[b]))
    return hubs
