"""Homogeneous (Cayley) graphs, induced subgraphs, and strong convexity.

Distances come from the word metric: right translation x -> x*h is a graph
automorphism of any Cayley graph under left-generator edges, so
d(x, y) = |y * x^-1| and one BFS from the identity fixes the whole matrix.
The per-source BFS equivalence is exercised in the test suite.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CriterionMismatch, DisconnectedSubgraph, NotInvariant
from .groups import FiniteGroup, GeneratorSet, check_invariance, word_lengths


@dataclass(frozen=True, eq=False)
class HomogeneousGraph:
    """Cayley graph of `group` under the symmetric generating set `gens`."""

    group: FiniteGroup
    gens: GeneratorSet
    act: np.ndarray        # (k, n): act[ai, x] = gens[ai] * x
    dist: np.ndarray       # (n, n) word-metric distances
    diameter: int

    @property
    def n_vertices(self) -> int:
        return self.group.order

    @property
    def degree(self) -> int:
        return len(self.gens)

    def adjacency(self, x: int):
        """List of (a, ax) pairs over the generating set."""
        return [(a, int(self.act[i, x])) for i, a in enumerate(self.gens)]

    def full_subgraph(self) -> "ConvexSubgraph":
        return induce_subgraph(self, range(self.n_vertices))

    def __repr__(self):
        return (f"HomogeneousGraph({self.group.name}, k={self.degree}, "
                f"D={self.diameter})")


def build_cayley(group: FiniteGroup, gens: GeneratorSet) -> HomogeneousGraph:
    """Cayley graph with the full distance matrix.

    Requires conjugation invariance a K a^-1 = K so that left translations
    are automorphisms and vertex-transitive distance holds.
    """
    if not check_invariance(group, gens):
        raise NotInvariant(
            "generating set is not conjugation-invariant; "
            "this toolkit only handles invariant homogeneous graphs")
    ks = np.asarray(list(gens), dtype=np.int64)
    act = group.table[ks, :].astype(np.int32)
    wl = word_lengths(group, gens)
    # d(x, y) = |y * x^-1|; entry [x, y] = wl[table[y, inv(x)]]
    ginv = group.table[:, group.inverse]     # [y, x] -> y * x^-1
    dist = wl[ginv].T.astype(np.int32)
    return HomogeneousGraph(group=group, gens=gens, act=_ro(act),
                            dist=_ro(dist), diameter=int(dist.max()))


def _ro(arr):
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ConvexSubgraph:
    """Induced subgraph with boundary data and intra-subgraph distances.

    `vset` holds sorted host vertex ids; vertex functions downstream are
    arrays over local indices 0..|S|-1.
    """

    host: HomogeneousGraph
    vset: np.ndarray            # (m,) host ids, sorted
    boundary: np.ndarray        # host ids adjacent to but outside vset
    boundary_edges: np.ndarray  # (e, 2) host-id pairs, >=1 end in vset
    nbr_local: np.ndarray       # (k, m): local index of a*v, or -1 if outside
    dist_S: np.ndarray          # (m, m) shortest paths within S
    diameter_S: int
    _pos: np.ndarray = field(repr=False)  # host id -> local index or -1

    @property
    def n_vertices(self) -> int:
        return self.vset.size

    @property
    def group(self) -> FiniteGroup:
        return self.host.group

    @property
    def gens(self) -> GeneratorSet:
        return self.host.gens

    def local(self, host_id: int) -> int:
        return int(self._pos[host_id])

    def k_x(self, i: int):
        """Generator elements a with a*v_i inside S (the set K_x)."""
        keep = self.nbr_local[:, i] >= 0
        return [a for a, k in zip(self.host.gens, keep) if k]

    @property
    def degrees(self) -> np.ndarray:
        """Degree within S per local vertex."""
        return (self.nbr_local >= 0).sum(axis=0)

    @property
    def boundary_degree(self) -> np.ndarray:
        """Number of boundary edges per local vertex (the induced potential)."""
        return (self.nbr_local < 0).sum(axis=0)

    @property
    def is_full(self) -> bool:
        return self.vset.size == self.host.n_vertices

    def adjacency_matrix(self) -> np.ndarray:
        """Dense 0/1 adjacency within S."""
        m = self.n_vertices
        adj = np.zeros((m, m), dtype=np.uint8)
        for ai in range(self.nbr_local.shape[0]):
            cols = self.nbr_local[ai]
            rows = np.arange(m)
            keep = cols >= 0
            adj[rows[keep], cols[keep]] = 1
        return adj

    def host_dist(self) -> np.ndarray:
        """Host distances restricted to S (local indexing)."""
        return self.host.dist[np.ix_(self.vset, self.vset)]

    def __repr__(self):
        return (f"ConvexSubgraph(|S|={self.n_vertices}, D={self.diameter_S}, "
                f"host={self.host!r})")


def induce_subgraph(host: HomogeneousGraph, vset) -> ConvexSubgraph:
    """Induced subgraph with boundary, boundary edges, K_x and distances."""
    vset = np.unique(np.asarray(list(vset), dtype=np.int32))
    if vset.size == 0:
        raise DisconnectedSubgraph("vertex set is empty")
    if vset.min() < 0 or vset.max() >= host.n_vertices:
        raise ValueError("vertex ids out of range")

    pos = np.full(host.n_vertices, -1, dtype=np.int32)
    pos[vset] = np.arange(vset.size, dtype=np.int32)

    nbr_host = host.act[:, vset]            # (k, m) host ids
    nbr_local = pos[nbr_host]               # -1 where outside S

    outside = nbr_host[nbr_local < 0]
    boundary = np.unique(outside)

    # edges with at least one end in S, as sorted (min, max) host pairs
    m = vset.size
    src = np.broadcast_to(vset, nbr_host.shape)
    pairs = np.stack([np.minimum(src, nbr_host).ravel(),
                      np.maximum(src, nbr_host).ravel()], axis=1)
    boundary_edges = np.unique(pairs, axis=0)

    if m == host.n_vertices:
        dist_s = host.dist.copy()
    else:
        adj = np.zeros((m, m), dtype=bool)
        ar = np.arange(m)
        for ai in range(nbr_local.shape[0]):
            keep = nbr_local[ai] >= 0
            adj[ar[keep], nbr_local[ai][keep]] = True
        dist_s = _all_pairs_bfs(adj)
        if (dist_s < 0).any():
            raise DisconnectedSubgraph(
                f"{int((dist_s[0] < 0).sum())} vertices unreachable within S")

    return ConvexSubgraph(host=host, vset=_ro(vset), boundary=_ro(boundary),
                          boundary_edges=_ro(boundary_edges),
                          nbr_local=_ro(nbr_local.astype(np.int32)),
                          dist_S=_ro(dist_s.astype(np.int32)),
                          diameter_S=int(dist_s.max()), _pos=_ro(pos))


def _all_pairs_bfs(adj: np.ndarray) -> np.ndarray:
    """All-pairs shortest paths by frontier expansion; -1 if unreachable."""
    m = adj.shape[0]
    dist = np.full((m, m), -1, dtype=np.int32)
    np.fill_diagonal(dist, 0)
    reached = np.eye(m, dtype=bool)
    frontier = np.eye(m, dtype=bool)
    level = 0
    while frontier.any():
        level += 1
        frontier = (frontier @ adj) & ~reached
        dist[frontier] = level
        reached |= frontier
    return dist


@dataclass(frozen=True)
class ConvexityResult:
    convex: bool
    witness: Optional[tuple]      # (x, y, via) host ids; via outside S
    criterion2: bool
    criterion2_witness: Optional[tuple]
    sp2_closure: bool
    sp2_witness: Optional[tuple]

    def __bool__(self):
        return self.convex


def is_strongly_convex(sub: ConvexSubgraph) -> ConvexityResult:
    """Decide strong convexity: every host geodesic between members stays in S.

    Criterion 1 is the geodesic test itself (an outside vertex v with
    d(x,v) + d(v,y) = d(x,y) is a witness). The generator criterion and the
    shortest-path closure property are evaluated alongside; both are implied
    by convexity, so a convex set failing either raises CriterionMismatch.
    The converse implication genuinely fails on some non-convex sets (e.g. a
    half cycle), so no error is raised in that direction.
    """
    host = sub.host
    vset = sub.vset
    hd = sub.host_dist()

    witness = None
    if not sub.is_full:
        outside = np.setdiff1d(np.arange(host.n_vertices, dtype=np.int32),
                               vset, assume_unique=False)
        dv = host.dist[np.ix_(vset, outside)]
        dw = host.dist[np.ix_(outside, vset)]
        for j, v in enumerate(outside):
            through = dv[:, j][:, None] + dw[j, :][None, :]
            bad = np.argwhere(through == hd)
            if bad.size:
                x, y = bad[0]
                witness = (int(vset[x]), int(vset[y]), int(v))
                break
    convex = witness is None

    crit2, crit2_wit = _criterion2(sub)
    sp2, sp2_wit = _sp2_closure(sub)

    if convex and not crit2:
        raise CriterionMismatch(
            f"convex subgraph violates the generator criterion at {crit2_wit}")
    if convex and not sp2:
        raise CriterionMismatch(
            f"convex subgraph violates shortest-path closure at {sp2_wit}")

    return ConvexityResult(convex=convex, witness=witness, criterion2=crit2,
                           criterion2_witness=crit2_wit, sp2_closure=sp2,
                           sp2_witness=sp2_wit)


def _criterion2(sub: ConvexSubgraph):
    """For x in the boundary: distinct a, b with ax, bx in S need b^-1 a in K."""
    host = sub.host
    group = host.group
    gens = list(host.gens)
    kset = set(gens)
    for x in sub.boundary:
        ins = [a for a in gens if sub._pos[host.group.table[a, x]] >= 0]
        for a in ins:
            for b in ins:
                if a == b:
                    continue
                if group.mul(group.inv(b), a) not in kset:
                    return False, (int(x), int(a), int(b))
    return True, None


def _sp2_closure(sub: ConvexSubgraph):
    """If x, ax, y in S and d(ax, y) = d(x, y) + 1 then ay must be in S."""
    host = sub.host
    vset = sub.vset
    hd = sub.host_dist()
    for ai, a in enumerate(host.gens):
        ax_local = sub.nbr_local[ai]          # local index of a*x or -1
        have = np.nonzero(ax_local >= 0)[0]
        if have.size == 0:
            continue
        # rows: x with ax in S; columns: all y in S
        cond = hd[ax_local[have], :] == hd[have, :] + 1
        ay_out = ax_local < 0                 # a*y outside S, per local y
        bad = cond & ay_out[None, :]
        if bad.any():
            xi, yi = np.argwhere(bad)[0]
            return False, (int(vset[have[xi]]), int(vset[yi]), int(a))
    return True, None


def convex_closure(host: HomogeneousGraph, seed) -> np.ndarray:
    """Smallest strongly convex vertex set containing `seed` (host ids)."""
    current = set(int(v) for v in seed)
    dist = host.dist
    while True:
        vs = np.fromiter(current, dtype=np.int64)
        outside = np.setdiff1d(np.arange(host.n_vertices), vs)
        if outside.size == 0:
            break
        dxv = dist[np.ix_(vs, outside)]
        dvy = dist[np.ix_(outside, vs)]
        dxy = dist[np.ix_(vs, vs)]
        added = False
        for j, v in enumerate(outside):
            if (dxv[:, j][:, None] + dvy[j, :][None, :] == dxy).any():
                current.add(int(v))
                added = True
        if not added:
            break
    return np.array(sorted(current), dtype=np.int32)
