"""Per-round cluster formation and routing for the DR protocol and the
LEACH / LEACH-C baselines.

All planners map an alive-node snapshot and a 1-based round index to a
RoundPlan: who is CH, who sends to whom, and where each CH forwards.
A destination of ``None`` means the base station.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .geometry import (
    FieldPartition,
    Point,
    RegionKind,
    cr_neighbor_ncrs,
    inward_adjacent_ncr,
)

# Corner nodes equidistant from two candidates within this tolerance are
# tie-broken by residual energy.
DISTANCE_TIE_EPS = 1e-9


class ProtocolKind(Enum):
    DR = "dr"
    LEACH = "leach"
    LEACH_C = "leach-c"


@dataclass
class Node:
    id: int
    pos: Point
    energy: float
    alive: bool
    region: int


@dataclass(frozen=True)
class RoundPlan:
    round: int
    # region id -> CH node id (DR only; empty for the baselines)
    ch_assignments: dict[int, int]
    # sender node id -> CH node id, or None for the BS
    memberships: dict[int, Optional[int]]
    # CH node id -> next-hop CH node id, or None for the BS
    ch_next_hop: dict[int, Optional[int]]

    @property
    def cluster_heads(self) -> set[int]:
        return set(self.ch_next_hop)


def _region_rosters(fp: FieldPartition, nodes: list[Node]) -> dict[int, list[Node]]:
    """Full per-NCR rosters (alive and dead), distance-ranked to the region
    midpoint, ties by node id. Only non-central NCRs host CHs."""
    rosters: dict[int, list[Node]] = {}
    for node in nodes:
        region = fp.region(node.region)
        if region.kind is RegionKind.NON_CORNER:
            rosters.setdefault(region.id, []).append(node)
    for region_id, members in rosters.items():
        mid = fp.region(region_id).midpoint
        members.sort(key=lambda nd: (nd.pos.distance_to(mid), nd.id))
    return rosters


def dr_select_chs(fp: FieldPartition, nodes: list[Node], round_index: int) -> dict[int, int]:
    """One CH per non-central NCR: the alive node at cyclic distance rank
    (round-1) mod population, skipping dead nodes forward."""
    chs: dict[int, int] = {}
    for region_id, roster in _region_rosters(fp, nodes).items():
        start = (round_index - 1) % len(roster)
        for step in range(len(roster)):
            candidate = roster[(start + step) % len(roster)]
            if candidate.alive:
                chs[region_id] = candidate.id
                break
    return chs


def dr_build_plan(fp: FieldPartition, nodes: list[Node], round_index: int) -> RoundPlan:
    chs = dr_select_chs(fp, nodes, round_index)
    by_id = {node.id: node for node in nodes}

    memberships: dict[int, Optional[int]] = {}
    for node in nodes:
        if not node.alive:
            continue
        region = fp.region(node.region)
        if region.kind is RegionKind.CENTRAL:
            memberships[node.id] = None
        elif region.kind is RegionKind.NON_CORNER:
            ch = chs.get(region.id)
            if ch is not None and ch != node.id:
                memberships[node.id] = ch
        else:
            memberships[node.id] = _corner_destination(fp, node, chs, by_id)

    ch_next_hop: dict[int, Optional[int]] = {}
    for region_id, ch_id in chs.items():
        ring = fp.region(region_id).ring
        if ring == 1:
            ch_next_hop[ch_id] = None
        else:
            # Same-side inward CH; direct to BS if that region has none.
            ch_next_hop[ch_id] = chs.get(inward_adjacent_ncr(region_id, fp))

    return RoundPlan(round_index, chs, memberships, ch_next_hop)


def _corner_destination(fp: FieldPartition, node: Node, chs: dict[int, int],
                        by_id: dict[int, Node]) -> Optional[int]:
    """Nearest of {BS, the two edge-adjacent same-ring NCR CHs}; a distance
    tie goes to the CH with more residual energy (the BS beats any tie)."""
    # (distance, destination, residual energy) with the BS as an
    # inexhaustible candidate.
    candidates: list[tuple[float, Optional[int], float]] = [
        (node.pos.distance_to(fp.center), None, math.inf)
    ]
    for ncr_id in cr_neighbor_ncrs(node.region, fp):
        ch_id = chs.get(ncr_id)
        if ch_id is not None:
            ch = by_id[ch_id]
            candidates.append((node.pos.distance_to(ch.pos), ch_id, ch.energy))
    best_dist = min(dist for dist, _, _ in candidates)
    tied = [c for c in candidates if c[0] <= best_dist + DISTANCE_TIE_EPS]
    tied.sort(key=lambda c: (-c[2], c[1] if c[1] is not None else -1))
    return tied[0][1]


@dataclass
class LeachState:
    """Election history and RNG stream for one LEACH run."""
    p: float
    rng: np.random.Generator
    last_elected: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise ValueError(f"CH probability must be in (0, 1), got {self.p}")


def leach_build_plan(nodes: list[Node], round_index: int, state: LeachState) -> RoundPlan:
    """Classic distributed LEACH election: eligible nodes draw against the
    rotating threshold; CHs transmit directly to the BS.

    Eligibility is epoch-scoped: a node that served as CH sits out until the
    threshold resets (round mod floor(1/p) == 0), so every node serves about
    once per epoch.
    """
    epoch = int(1 / state.p)
    threshold = state.p / (1 - state.p * (round_index % epoch))
    epoch_start = (round_index // epoch) * epoch

    chs: list[Node] = []
    for node in sorted(nodes, key=lambda nd: nd.id):
        if not node.alive:
            continue
        last = state.last_elected.get(node.id)
        if last is not None and last >= epoch_start:
            continue
        if state.rng.random() < threshold:
            chs.append(node)
            state.last_elected[node.id] = round_index

    memberships: dict[int, Optional[int]] = {}
    ch_ids = {ch.id for ch in chs}
    for node in nodes:
        if not node.alive or node.id in ch_ids:
            continue
        if not chs:
            memberships[node.id] = None  # no CH this round: direct to BS
        else:
            nearest = min(chs, key=lambda ch: (node.pos.distance_to(ch.pos), ch.id))
            memberships[node.id] = nearest.id

    return RoundPlan(round_index, {}, memberships, {ch_id: None for ch_id in ch_ids})


def leach_c_build_plan(nodes: list[Node], round_index: int, p: float) -> RoundPlan:
    """Centralized baseline: the BS picks k = max(1, round(p * alive)) CHs
    from the above-mean-energy candidates by greedy facility selection on
    total squared member distance."""
    if not 0 < p < 1:
        raise ValueError(f"CH probability must be in (0, 1), got {p}")
    alive = sorted((nd for nd in nodes if nd.alive), key=lambda nd: nd.id)
    if not alive:
        return RoundPlan(round_index, {}, {}, {})

    pos = np.array([(nd.pos.x, nd.pos.y) for nd in alive])
    energies = np.array([nd.energy for nd in alive])
    d2 = ((pos[:, None, :] - pos[None, :, :]) ** 2).sum(axis=2)

    candidates = np.flatnonzero(energies >= energies.mean())
    k = min(max(1, round(p * len(alive))), len(candidates))

    chosen: list[int] = []
    cost = np.full(len(alive), np.inf)
    for _ in range(k):
        remaining = np.array([c for c in candidates if c not in chosen])
        totals = np.minimum(cost[None, :], d2[remaining]).sum(axis=1)
        pick = remaining[int(np.argmin(totals))]  # ties: lowest node id
        chosen.append(int(pick))
        cost = np.minimum(cost, d2[pick])

    ch_ids = {alive[i].id for i in chosen}
    memberships: dict[int, Optional[int]] = {}
    for i, node in enumerate(alive):
        if node.id in ch_ids:
            continue
        nearest = min(chosen, key=lambda c: (d2[i, c], alive[c].id))
        memberships[node.id] = alive[nearest].id

    return RoundPlan(round_index, {}, memberships, {ch_id: None for ch_id in ch_ids})
