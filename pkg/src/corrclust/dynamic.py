"""Fully dynamic maintenance of the modified-pivot clustering under edge flips.

The state mirrors a static run driven by the same tape: `elim` maps every
vertex to the pivot that clusters it in rank-greedy order, neighbor sets
are split per vertex into those clustered no later (`nminus`, keyed by
eliminator rank) and strictly later (`nplus`, keyed by id), and per-pivot
membership of the ejection set D and absorption set A is kept as
sigma-ordered lists so the capped subsamples are always the list prefix.

Absorption is tracked with per-pair claim bits: claim (u, v) is set iff v
is a pivot, u outlives v's iteration, and u's remaining neighborhood is
within the absorb threshold of C_v.  The pivot absorbing u is then the
minimum-rank claimant, which reproduces the global first-come-first-served
A set of the static run without storing it.

The contract is equivalence: after build and after every flip, the derived
clustering equals a fresh static run on the current graph with the same
tape.  Update time is a measured property, not an asserted one; where a
purely local repair would be fragile the engine re-derives state for the
affected ranks.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from heapq import heappop, heappush

import numpy as np
from sortedcontainers import SortedList, SortedSet

from .graph import Graph
from .pivot import absorb_threshold, eject_threshold, subsample_cap
from .tape import Params, RandomTape

Key = tuple[float, int]


@dataclass
class UpdateStats:
    affected: int  # vertices whose eliminator changed
    micros: float
    touched: int  # predicate evaluations + structure rebuilds performed


class DynamicState:
    """Modified-pivot clustering maintained under edge-label flips."""

    def __init__(self, g: Graph, tape: RandomTape, p: Params):
        if tape.n != g.n:
            raise ValueError("tape does not cover all vertices")
        self.g = g.copy()
        self.tape = tape
        self.params = p
        self.n = g.n
        self._sample_rng = np.random.default_rng(
            np.uint64((tape.seed ^ 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF)
        )
        self._touched = 0

        self.elim: list[int] = [-1] * self.n
        self.pivots: SortedList = SortedList()  # keys of current pivots
        self.nminus: list[SortedList] = [SortedList() for _ in range(self.n)]
        self.nplus: list[SortedSet] = [SortedSet() for _ in range(self.n)]
        self.c_members: dict[int, set[int]] = {}
        self.d_list: dict[int, SortedList] = {}
        self.a_list: dict[int, SortedList] = {}
        self.claims: list[SortedList] = [SortedList() for _ in range(self.n)]
        self.pairs_by_pivot: dict[int, set[int]] = {}
        self._build()

    # -- rank helpers ------------------------------------------------------

    def key(self, v: int) -> Key:
        return self.tape.pi_key(v)

    def elim_key(self, v: int) -> Key:
        return self.key(self.elim[v])

    def skey(self, v: int) -> Key:
        return self.tape.sigma_key(v)

    # -- neighborhood counting against the iteration-time graph -----------

    def count_common_and_symdiff(self, u: int, v: int) -> tuple[int, int]:
        """(|N_i(u) & C_v|, |N_i(u) ^ C_v|) for pivot v's iteration.

        Requires that u is still present at v's iteration, i.e. its
        eliminator rank is at least v's.  Runs in O(log n) via the
        rank-keyed neighbor split.
        """
        kv = self.key(v)
        lst = self.nminus[u]
        lo = lst.bisect_left((kv, -1))
        hi = lst.bisect_left((kv, self.n))
        inter = hi - lo
        remaining_deg = len(self.nplus[u]) + (len(lst) - lo)
        csize = len(self.c_members[v])
        self._touched += 1
        return inter, remaining_deg + csize - 2 * inter

    def _in_d(self, u: int, v: int) -> bool:
        inter, _ = self.count_common_and_symdiff(u, v)
        return inter <= eject_threshold(self.params.delta, len(self.c_members[v]))

    def _claim_predicate(self, u: int, v: int) -> bool:
        """Absorption claim: u outlives v's iteration and is a near-twin of C_v."""
        if not self.elim_key(u) > self.key(v):
            return False
        thr = absorb_threshold(self.params.epsilon, len(self.c_members[v]))
        if thr < 0:
            return False
        _, delta = self.count_common_and_symdiff(u, v)
        return delta <= thr

    # -- claim bookkeeping -------------------------------------------------

    def _set_claim(self, u: int, v: int, bit: bool) -> None:
        kv = self.key(v)
        cl = self.claims[u]
        present = kv in cl
        if bit == present:
            return
        old_head = cl[0] if cl else None
        if bit:
            cl.add(kv)
            self.pairs_by_pivot.setdefault(v, set()).add(u)
        else:
            cl.remove(kv)
            self.pairs_by_pivot[v].discard(u)
        new_head = cl[0] if cl else None
        if old_head != new_head:
            su = self.skey(u)
            if old_head is not None:
                self.a_list[old_head[1]].remove(su)
            if new_head is not None:
                self.a_list.setdefault(new_head[1], SortedList()).add(su)

    def absorber(self, u: int) -> int | None:
        """The pivot whose A set u belongs to, if any (minimum-rank claimant)."""
        cl = self.claims[u]
        return cl[0][1] if cl else None

    # -- cold start --------------------------------------------------------

    def _build(self) -> None:
        g, n = self.g, self.n
        for v in self.tape.pivot_order():
            if self.elim[v] == -1:
                self.elim[v] = v
                for u in g.adj[v]:
                    if self.elim[u] == -1:
                        self.elim[u] = v
        for v in range(n):
            if self.elim[v] == v:
                self.pivots.add(self.key(v))
                self.c_members[v] = set()
        for v in range(n):
            self.c_members[self.elim[v]].add(v)
        for v in range(n):
            self._resplit_neighbors(v)
        for kv in self.pivots:
            v = kv[1]
            self._rebuild_d(v)
            self.a_list.setdefault(v, SortedList())
            self._rediscover_claims(v, exact=True)

    def _resplit_neighbors(self, v: int) -> None:
        ke = self.elim_key(v)
        self.nminus[v] = SortedList(
            (self.elim_key(u), u) for u in self.g.adj[v] if self.elim_key(u) <= ke
        )
        self.nplus[v] = SortedSet(
            u for u in self.g.adj[v] if self.elim_key(u) > ke
        )
        self._touched += 1

    def _rebuild_d(self, v: int) -> None:
        self.d_list[v] = SortedList(
            self.skey(u) for u in self.c_members[v] if u != v and self._in_d(u, v)
        )

    def sampled_A_discovery(self, v: int, rng=None, exact: bool = False) -> set[int]:
        """Candidate superset for v's absorption claims.

        Takes the union of later-clustered neighborhoods over a sample of
        C_v's members; any vertex within the absorb threshold is adjacent
        to most of C_v, so it is caught with overwhelming probability.
        With exact=True the whole of C_v is scanned instead.
        """
        if self.elim[v] != v:
            raise ValueError(f"{v} is not a pivot")
        members = sorted(self.c_members[v])
        if exact or len(members) <= 8:
            sample = members
        else:
            rng = rng if rng is not None else self._sample_rng
            size = min(len(members), max(24, 3 * int(math.log2(self.n)) + 1))
            idx = rng.choice(len(members), size=size, replace=False)
            sample = [members[i] for i in idx]
        out: set[int] = set()
        for x in sample:
            out.update(self.nplus[x])
        return out

    def _rediscover_claims(self, v: int, exact: bool = False) -> None:
        for u in list(self.pairs_by_pivot.get(v, ())):
            self._set_claim(u, v, False)
        self.pairs_by_pivot.setdefault(v, set())
        if absorb_threshold(self.params.epsilon, len(self.c_members[v])) < 0:
            return
        for u in self.sampled_A_discovery(v, exact=exact):
            if self._claim_predicate(u, v):
                self._set_claim(u, v, True)

    # -- queries -----------------------------------------------------------

    def query_cluster(self, u: int) -> int:
        """Current cluster id of u: pivot id for pivot clusters, n + u for singletons."""
        a = self.absorber(u)
        if a is not None:
            cap = subsample_cap(self.params.delta, len(self.c_members[a]))
            if self.a_list[a].index(self.skey(u)) < cap:
                return a
            return self.n + u
        v = self.elim[u]
        if u != v:
            cap = subsample_cap(self.params.delta, len(self.c_members[v]))
            sk = self.skey(u)
            if sk in self.d_list[v] and self.d_list[v].index(sk) < cap:
                return self.n + u
        return v

    def assignment(self) -> list[int]:
        return [self.query_cluster(u) for u in range(self.n)]

    # Pointer views: for each maintained set, the pivot whose copy of that
    # set the vertex currently belongs to, or None.

    def I_C(self, u: int) -> int:
        return self.elim[u]

    def I_D(self, u: int) -> int | None:
        v = self.elim[u]
        if u != v and self.skey(u) in self.d_list[v]:
            return v
        return None

    def I_Dprime(self, u: int) -> int | None:
        v = self.I_D(u)
        if v is None:
            return None
        cap = subsample_cap(self.params.delta, len(self.c_members[v]))
        return v if self.d_list[v].index(self.skey(u)) < cap else None

    def I_A(self, u: int) -> int | None:
        return self.absorber(u)

    def I_Aprime(self, u: int) -> int | None:
        a = self.absorber(u)
        if a is None:
            return None
        cap = subsample_cap(self.params.delta, len(self.c_members[a]))
        return a if self.a_list[a].index(self.skey(u)) < cap else None

    def I_A_pair(self, u: int, v: int) -> bool:
        return self.key(v) in self.claims[u]

    # -- updates -----------------------------------------------------------

    def apply_update(self, a: int, b: int) -> UpdateStats:
        """Flip the label of (a, b) and repair all structures."""
        t0 = time.perf_counter()
        self._touched = 0
        self.g.flip_edge(a, b)  # validates the pair
        g = self.g

        # Eliminator cascade, processed in increasing rank so every
        # evaluation sees final pivot statuses below it.
        old_elim: dict[int, int] = {}
        heap: list[tuple[Key, int]] = [(self.key(a), a), (self.key(b), b)]
        processed: set[int] = set()
        while heap:
            kw, w = heappop(heap)
            if w in processed:
                continue
            processed.add(w)
            best: int | None = None
            for x in g.adj[w]:
                if self.elim[x] == x and self.key(x) < kw:
                    if best is None or self.key(x) < self.key(best):
                        best = x
            new_e = best if best is not None else w
            cur = self.elim[w]
            if new_e != cur:
                old_elim[w] = cur
                status_change = (cur == w) != (new_e == w)
                self.elim[w] = new_e
                if status_change:
                    for x in g.adj[w]:
                        if self.key(x) > kw:
                            heappush(heap, (self.key(x), x))

        affected = set(old_elim)

        # Neighbor splits: rebuild for every relabeled vertex and both flip
        # endpoints, then reposition their entries in untouched neighbors.
        rebuilt = affected | {a, b}
        for w in rebuilt:
            self._resplit_neighbors(w)
        for w in rebuilt:
            ke_old = self.key(old_elim.get(w, self.elim[w]))
            ke_new = self.elim_key(w)
            for x in g.adj[w]:
                if x in rebuilt:
                    continue
                kx = self.elim_key(x)
                if ke_old <= kx:
                    self.nminus[x].discard((ke_old, w))
                else:
                    self.nplus[x].discard(w)
                if ke_new <= kx:
                    self.nminus[x].add((ke_new, w))
                else:
                    self.nplus[x].add(w)

        # Pivot roster and cluster membership.
        demoted: list[int] = []
        for w in affected:
            was_pivot = old_elim[w] == w
            is_pivot = self.elim[w] == w
            if was_pivot and not is_pivot:
                self.pivots.remove(self.key(w))
                demoted.append(w)
            elif is_pivot and not was_pivot:
                self.pivots.add(self.key(w))
                self.c_members.setdefault(w, set())
                self.a_list.setdefault(w, SortedList())
        for w in affected:
            self.c_members[old_elim[w]].discard(w)
            self.c_members.setdefault(self.elim[w], set()).add(w)
        for e in demoted:
            assert not self.c_members[e], "demoted pivot still owns members"
            for u in list(self.pairs_by_pivot.get(e, ())):
                self._set_claim(u, e, False)
            assert not self.a_list.get(e), "demoted pivot still absorbs vertices"
            for store in (self.c_members, self.d_list, self.a_list, self.pairs_by_pivot):
                store.pop(e, None)

        # Pivots whose cluster contents (and thus thresholds) moved.
        dirty: set[int] = {self.elim[a], self.elim[b]}
        for w in affected:
            dirty.add(old_elim[w])
            dirty.add(self.elim[w])
        dirty = {v for v in dirty if self.elim[v] == v}
        for v in dirty:
            self._rebuild_d(v)
            self._rediscover_claims(v)

        # Claim sweeps: the flip endpoints and every relabeled vertex get a
        # full re-evaluation against all earlier-rank pivots; neighbors of
        # relabeled vertices are re-checked for the rank window their
        # presence flipped in.
        swept = affected | {a, b}
        for x in swept:
            self._sweep_all_claims(x)
        for w in affected:
            lo = min(self.key(old_elim[w]), self.elim_key(w))
            hi = max(self.key(old_elim[w]), self.elim_key(w))
            for x in g.adj[w]:
                if x in swept:
                    continue
                kx = self.elim_key(x)
                for kv in self.pivots.irange(lo, hi):
                    if kv < kx:
                        v = kv[1]
                        self._set_claim(x, v, self._claim_predicate(x, v))

        return UpdateStats(
            affected=len(affected),
            micros=(time.perf_counter() - t0) * 1e6,
            touched=self._touched,
        )

    def _sweep_all_claims(self, x: int) -> None:
        kx = self.elim_key(x)
        for kv in list(self.claims[x]):
            if kv >= kx:
                self._set_claim(x, kv[1], False)
        for kv in self.pivots.irange(None, kx, inclusive=(True, False)):
            v = kv[1]
            if v == x:
                continue
            self._set_claim(x, v, self._claim_predicate(x, v))


def build(g: Graph, tape: RandomTape, p: Params) -> DynamicState:
    """Cold-start the dynamic structures from the current graph."""
    return DynamicState(g, tape, p)
