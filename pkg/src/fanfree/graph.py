"""Immutable simple graphs with bit-packed adjacency rows.

Row ``i`` of a :class:`Graph` is a Python int whose bit ``j`` is set iff ``ij``
is an edge.  Python ints are arbitrary precision, so rows for ``n > 64`` are
multi-word without any extra bookkeeping.

Vertex labelings of the named families are fixed (see :func:`construct`) so
that tests and audits can refer to vertices by index.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, FeasibilityError, FormatError, ParameterError

MAX_N = 512
DEFAULT_CANON_LIMIT = 16


def canon_limit() -> int:
    """Vertex cap for canonical labeling; ``FANFREE_MAX_N`` overrides it."""
    raw = os.environ.get("FANFREE_MAX_N")
    if raw is None:
        return DEFAULT_CANON_LIMIT
    try:
        value = int(raw)
    except ValueError:
        raise ParameterError(f"FANFREE_MAX_N must be an integer, got {raw!r}") from None
    if not 1 <= value <= MAX_N:
        raise ParameterError(f"FANFREE_MAX_N must lie in [1, {MAX_N}], got {value}")
    return value


def _bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ParameterError(f"expected {self.n} adjacency rows, got {len(self.rows)}")
        if self.n > MAX_N:
            raise CapacityError(f"n={self.n} exceeds the vertex cap {MAX_N}")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise ParameterError("vertex count must be non-negative")
        if n > MAX_N:
            raise CapacityError(f"n={n} exceeds the vertex cap {MAX_N}")
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ParameterError(f"loop at vertex {u}; graphs are simple")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int = 0) -> "Graph":
        return cls(n, (0,) * n)

    # -- basic queries ------------------------------------------------

    @cached_property
    def m(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def neighbors(self, u: int) -> list[int]:
        return list(_bits(self.rows[u]))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.rows[u] >> (u + 1) << (u + 1))]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def adjacency_matrix(self):
        import numpy as np

        a = np.zeros((self.n, self.n))
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1.0
        return a

    # -- derived graphs -----------------------------------------------

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph; vertex ``i`` of the result is ``vertices[i]``."""
        index = {v: i for i, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            r = 0
            for w in _bits(self.rows[v]):
                j = index.get(w)
                if j is not None:
                    r |= 1 << j
            rows.append(r)
        return Graph(len(vertices), tuple(rows))

    def relabel(self, order: Sequence[int]) -> "Graph":
        """Graph whose vertex ``i`` is this graph's vertex ``order[i]``."""
        return self.induced(order)

    def add_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = list(self.rows)
        for u, v in edges:
            if u == v:
                raise ParameterError("loops are not allowed")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(self.n, tuple(rows))

    def remove_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = list(self.rows)
        for u, v in edges:
            rows[u] &= ~(1 << v)
            rows[v] &= ~(1 << u)
        return Graph(self.n, tuple(rows))

    def drop_isolated(self) -> "Graph":
        keep = [v for v in range(self.n) if self.rows[v]]
        return self if len(keep) == self.n else self.induced(keep)

    def components(self) -> list[list[int]]:
        seen = 0
        comps = []
        for s in range(self.n):
            if seen >> s & 1:
                continue
            comp = 1 << s
            frontier = comp
            while frontier:
                nxt = 0
                for v in _bits(frontier):
                    nxt |= self.rows[v]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            comps.append(list(_bits(comp)))
        return comps

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    def validate(self) -> None:
        """Bitwise check of symmetry and zero diagonal."""
        for u, r in enumerate(self.rows):
            if r >> u & 1:
                raise ParameterError(f"loop at vertex {u}")
            if r >> self.n:
                raise ParameterError(f"row {u} has bits beyond n={self.n}")
            for v in _bits(r):
                if not self.rows[v] >> u & 1:
                    raise ParameterError(f"asymmetric adjacency at ({u}, {v})")

    def __str__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# -- named families ---------------------------------------------------

_ARITY = {
    "complete": 1,
    "path": 1,
    "cycle": 1,
    "star": 1,
    "star_plus_edge": 1,
    "double_star": 2,
    "fan": 1,
    "empty": 1,
    "complete_bipartite": 2,
}


@dataclass(frozen=True)
class GraphFamily:
    """A named family member, e.g. ``GraphFamily("double_star", (2, 3))``.

    Labelings:
      complete(n)            0..n-1
      path(n)                0-1-...-(n-1)
      cycle(n)               0-1-...-(n-1)-0
      star(r)                center 0, leaves 1..r
      star_plus_edge(r)      star(r) plus the leaf edge 1-2
      double_star(a, b)      spine 0-1; pendants 2..a+1 on 0, a+2..a+b+1 on 1
      fan(k)                 hub 0 joined to the path 1-2-...-(k-1)
      empty(n)               n isolated vertices
      complete_bipartite(a, b)  parts 0..a-1 and a..a+b-1
    """

    tag: str
    params: tuple[int, ...]

    def __post_init__(self):
        if self.tag not in _ARITY:
            raise ParameterError(f"unknown family {self.tag!r}; choose from {sorted(_ARITY)}")
        if len(self.params) != _ARITY[self.tag]:
            raise ParameterError(
                f"{self.tag} takes {_ARITY[self.tag]} parameter(s), got {len(self.params)}"
            )
        if any(not isinstance(p, int) or p < 0 for p in self.params):
            raise ParameterError(f"{self.tag} parameters must be non-negative integers")
        lower = {
            "path": (1, "path n>=1"),
            "cycle": (3, "cycle n>=3"),
            "star_plus_edge": (2, "star_plus_edge r>=2"),
            "fan": (3, "fan k>=3"),
        }
        if self.tag in lower:
            lo, msg = lower[self.tag]
            if self.params[0] < lo:
                raise ParameterError(f"violates {msg}: got {self.params[0]}")
        if self.tag == "double_star" and min(self.params) < 1:
            raise ParameterError(f"violates double_star a,b>=1: got {self.params}")


def construct(family: GraphFamily) -> Graph:
    tag, p = family.tag, family.params
    if tag == "complete":
        n = p[0]
        return Graph.from_edges(n, combinations(range(n), 2))
    if tag == "path":
        n = p[0]
        return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))
    if tag == "cycle":
        n = p[0]
        return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))
    if tag == "star":
        r = p[0]
        return Graph.from_edges(r + 1, ((0, i) for i in range(1, r + 1)))
    if tag == "star_plus_edge":
        r = p[0]
        return Graph.from_edges(r + 1, [(0, i) for i in range(1, r + 1)] + [(1, 2)])
    if tag == "double_star":
        a, b = p
        edges = [(0, 1)]
        edges += [(0, i) for i in range(2, a + 2)]
        edges += [(1, i) for i in range(a + 2, a + b + 2)]
        return Graph.from_edges(a + b + 2, edges)
    if tag == "fan":
        k = p[0]
        edges = [(0, i) for i in range(1, k)] + [(i, i + 1) for i in range(1, k - 1)]
        return Graph.from_edges(k, edges)
    if tag == "empty":
        return Graph.empty(p[0])
    if tag == "complete_bipartite":
        a, b = p
        return Graph.from_edges(a + b, ((i, a + j) for i in range(a) for j in range(b)))
    raise ParameterError(f"unknown family {tag!r}")  # pragma: no cover


def complete(n: int) -> Graph:
    return construct(GraphFamily("complete", (n,)))


def path(n: int) -> Graph:
    return construct(GraphFamily("path", (n,)))


def cycle(n: int) -> Graph:
    return construct(GraphFamily("cycle", (n,)))


def star(r: int) -> Graph:
    return construct(GraphFamily("star", (r,)))


def star_plus_edge(r: int) -> Graph:
    return construct(GraphFamily("star_plus_edge", (r,)))


def double_star(a: int, b: int) -> Graph:
    return construct(GraphFamily("double_star", (a, b)))


def fan(k: int) -> Graph:
    return construct(GraphFamily("fan", (k,)))


def complete_bipartite(a: int, b: int) -> Graph:
    return construct(GraphFamily("complete_bipartite", (a, b)))


def join(g: Graph, h: Graph) -> Graph:
    """Disjoint union plus every cross edge; ``g``'s vertices come first."""
    n = g.n + h.n
    if n > MAX_N:
        raise CapacityError(f"join has {n} vertices, above the cap {MAX_N}")
    g_mask = (1 << g.n) - 1
    h_mask = ((1 << h.n) - 1) << g.n
    rows = [r | h_mask for r in g.rows] + [(r << g.n) | g_mask for r in h.rows]
    return Graph(n, tuple(rows))


def disjoint_union(*graphs: Graph) -> Graph:
    rows: list[int] = []
    offset = 0
    for g in graphs:
        rows.extend(r << offset for r in g.rows)
        offset += g.n
    if offset > MAX_N:
        raise CapacityError(f"union has {offset} vertices, above the cap {MAX_N}")
    return Graph(offset, tuple(rows))


def extremal_graph(k: int, m: int) -> Graph:
    """``K_k`` joined with ``s`` isolated vertices, ``s = m/k - (k-1)/2``."""
    if k < 2:
        raise ParameterError(f"k must be >= 2, got {k}")
    base = k * (k - 1) // 2
    num = m - base
    if num <= 0 or num % k:
        # feasible m are base + k*s for s >= 1
        s_lo, s_hi = num // k, max(1, -(-num // k))
        feasible = [base + k * s for s in (s_lo, s_hi) if s >= 1]
        hint = "nearest feasible m: " + ", ".join(map(str, sorted(set(feasible))))
        raise FeasibilityError(
            f"m={m} infeasible for k={k}: s = m/k - (k-1)/2 = {m / k - (k - 1) / 2:g} "
            f"is not a positive integer; {hint}"
        )
    s = num // k
    return join(complete(k), Graph.empty(s))


# -- graph6 -----------------------------------------------------------

_G6_HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def to_graph6(g: Graph) -> str:
    bits = []
    for j in range(1, g.n):
        row = g.rows[j]
        for i in range(j):
            bits.append(row >> i & 1)
    bits.extend([0] * (-len(bits) % 6))
    out = [_encode_n(g.n)]
    for i in range(0, len(bits), 6):
        v = 0
        for b in bits[i : i + 6]:
            v = (v << 1) | b
        out.append(chr(v + 63))
    return "".join(out)


def from_graph6(text: str) -> Graph:
    s = text.strip()
    base = 0
    if s.startswith(_G6_HEADER):
        base = len(_G6_HEADER)
        s = s[base:]
    for i, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise FormatError(f"invalid graph6 character {ch!r}", base + i)
    if not s:
        raise FormatError("empty graph6 string", base)
    vals = [ord(c) - 63 for c in s]
    if vals[0] != 63:
        n, pos = vals[0], 1
    elif len(vals) >= 2 and vals[1] == 63:
        if len(vals) < 8:
            raise FormatError("truncated long-form vertex count", base + len(vals))
        n = 0
        for v in vals[2:8]:
            n = (n << 6) | v
        pos = 8
    else:
        if len(vals) < 4:
            raise FormatError("truncated vertex count", base + len(vals))
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        pos = 4
    if n > MAX_N:
        raise CapacityError(f"graph6 declares n={n}, above the cap {MAX_N}")
    nbits = n * (n - 1) // 2
    need = -(-nbits // 6)
    payload = vals[pos:]
    if len(payload) < need:
        raise FormatError(f"truncated payload: need {need} bytes, got {len(payload)}", base + len(vals))
    if len(payload) > need:
        raise FormatError(f"trailing bytes after {need}-byte payload", base + pos + need)
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = payload[k // 6]
            if byte >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    if need and nbits % 6:
        pad = 6 - nbits % 6
        if payload[-1] & ((1 << pad) - 1):
            raise FormatError("nonzero padding bits", base + pos + need - 1)
    return Graph(n, tuple(rows))


def read_graph6_lines(lines: Iterable[str]) -> list[Graph]:
    return [from_graph6(line) for line in lines if line.strip()]


# -- canonical labeling -----------------------------------------------


def _refine(rows: Sequence[int], cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition.

    Cells are split by the vector of neighbour counts into every cell; split
    pieces are ordered by that vector, which keeps the result
    isomorphism-invariant.
    """
    while True:
        masks = []
        for c in cells:
            mk = 0
            for v in c:
                mk |= 1 << v
            masks.append(mk)
        out: list[list[int]] = []
        changed = False
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in c:
                r = rows[v]
                sig = tuple((r & mk).bit_count() for mk in masks)
                groups.setdefault(sig, []).append(v)
            if len(groups) == 1:
                out.append(c)
            else:
                changed = True
                out.extend(groups[sig] for sig in sorted(groups))
        cells = out
        if not changed:
            return cells


def _code(rows: Sequence[int], order: Sequence[int]) -> tuple[int, ...]:
    pos = {v: i for i, v in enumerate(order)}
    code = []
    for v in order:
        r = 0
        for w in _bits(rows[v]):
            r |= 1 << pos[w]
        code.append(r)
    return tuple(code)


def _search(rows, cells, best):
    for idx, c in enumerate(cells):
        if len(c) > 1:
            break
    else:
        order = [c[0] for c in cells]
        code = _code(rows, order)
        if best[0] is None or code > best[0]:
            best[0] = code
            best[1] = order
        return
    tried: list[int] = []
    for v in c:
        bv = 1 << v
        # swapping twins is an automorphism fixing everything else, so their
        # subtrees yield identical codes
        if any((rows[v] & ~(1 << t)) == (rows[t] & ~bv) for t in tried):
            continue
        tried.append(v)
        rest = [w for w in c if w != v]
        child = cells[:idx] + [[v], rest] + cells[idx + 1 :]
        _search(rows, _refine(rows, child), best)


_CANON_CACHE: dict[tuple[int, ...], tuple[bytes, tuple[int, ...]]] = {}
_CANON_CACHE_MAX = 200_000


def canonical_labeling(g: Graph) -> tuple[bytes, tuple[int, ...]]:
    """Canonical code and ordering: vertex ``order[i]`` gets canonical label ``i``."""
    limit = canon_limit()
    if g.n > limit:
        raise CapacityError(f"canonical labeling limited to n<={limit}, got n={g.n}")
    hit = _CANON_CACHE.get(g.rows)
    if hit is not None:
        return hit
    rows = g.rows
    degs = [r.bit_count() for r in rows]
    by_deg: dict[int, list[int]] = {}
    for v in range(g.n):
        by_deg.setdefault(degs[v], []).append(v)
    cells = _refine(rows, [by_deg[d] for d in sorted(by_deg)])
    best: list = [None, None]
    if g.n:
        _search(rows, cells, best)
        order = tuple(best[1])
    else:
        order = ()
    canon = g.relabel(order)
    result = (to_graph6(canon).encode("ascii"), order)
    if len(_CANON_CACHE) >= _CANON_CACHE_MAX:
        _CANON_CACHE.clear()
    _CANON_CACHE[g.rows] = result
    return result


def canonical_form(g: Graph) -> bytes:
    """Bytes equal for two graphs iff they are isomorphic (graph6 of the canonical relabeling)."""
    return canonical_labeling(g)[0]


def canonical_graph(g: Graph) -> Graph:
    return g.relabel(canonical_labeling(g)[1])


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.m != h.m or sorted(g.degrees()) != sorted(h.degrees()):
        return False
    return canonical_form(g) == canonical_form(h)
