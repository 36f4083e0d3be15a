"""Bipartite rule/symptom graph and its fixed, deterministic layout.

Rule nodes (circles in the UI) connect to symptom nodes (rectangles):
antecedent symptoms point into the rule, the rule points out to its
consequents. The layout is classical MDS on all-pairs graph distances
followed by a fixed number of deterministic force-refinement sweeps, so
high-degree nodes land centrally and the picture is stable across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyRuleList

DEFAULT_REFINE_ITERATIONS = 300
MIN_NODE_SEPARATION = 1e-3
COMPONENT_GUTTER = 2.0

DEFAULT_RADIUS_RANGE = (6.0, 18.0)


def symptom_node_id(symptom: str) -> str:
    return f"s:{symptom}"


def rule_node_id(rule_id: int) -> str:
    return f"r:{rule_id}"


@dataclass(frozen=True)
class RuleGraph:
    symptom_nodes: tuple  # node ids, sorted
    rule_nodes: tuple  # (node_id, rule_id, support, lift) in rule order
    edges: tuple  # (from_id, to_id), antecedent->rule and rule->consequent


@dataclass(frozen=True)
class LayoutResult:
    positions: dict  # node_id -> (x, y)
    seed: int
    bbox: tuple  # (xmin, ymin, xmax, ymax)
    stress: float  # Kruskal stress-1 of the MDS embedding vs graph distances


def build_graph(rules) -> RuleGraph:
    """Graph of the retained rules; only symptoms they mention appear."""
    if not rules:
        raise EmptyRuleList("cannot build a graph from zero rules")
    symptoms = set()
    rule_nodes = []
    edges = []
    for rule in rules:
        rid = rule_node_id(rule.rule_id)
        rule_nodes.append((rid, rule.rule_id, rule.support, rule.lift))
        for sym in sorted(rule.antecedent):
            symptoms.add(sym)
            edges.append((symptom_node_id(sym), rid))
        for sym in sorted(rule.consequent):
            symptoms.add(sym)
            edges.append((rid, symptom_node_id(sym)))
    return RuleGraph(
        tuple(symptom_node_id(s) for s in sorted(symptoms)),
        tuple(rule_nodes),
        tuple(edges),
    )


def rules_from_graph(g: RuleGraph):
    """Recover {rule_id: (antecedent set, consequent set)} from the edges."""
    out = {rule_id: (set(), set()) for _, rule_id, _, _ in g.rule_nodes}
    ids = {node_id: rule_id for node_id, rule_id, _, _ in g.rule_nodes}
    for a, b in g.edges:
        if b in ids:
            out[ids[b]][0].add(a.removeprefix("s:"))
        else:
            out[ids[a]][1].add(b.removeprefix("s:"))
    return out


def _node_order(g: RuleGraph):
    return list(g.symptom_nodes) + [rid for rid, _, _, _ in g.rule_nodes]


def _adjacency(g: RuleGraph, index):
    adj = [[] for _ in index]
    for a, b in g.edges:
        ia, ib = index[a], index[b]
        adj[ia].append(ib)
        adj[ib].append(ia)
    return adj


def graph_distances(g: RuleGraph):
    """All-pairs shortest-path hop counts (direction ignored), inf across
    components. Returns (node order, distance matrix)."""
    nodes = _node_order(g)
    index = {n: i for i, n in enumerate(nodes)}
    adj = _adjacency(g, index)
    n = len(nodes)
    dist = np.full((n, n), np.inf)
    for start in range(n):
        dist[start, start] = 0.0
        frontier = [start]
        depth = 0
        while frontier:
            depth += 1
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if not np.isfinite(dist[start, v]):
                        dist[start, v] = depth
                        nxt.append(v)
            frontier = nxt
    return nodes, dist


def _classical_mds(dist: np.ndarray) -> np.ndarray:
    """2-D classical MDS of a finite distance matrix."""
    n = dist.shape[0]
    if n == 1:
        return np.zeros((1, 2))
    j = np.eye(n) - np.ones((n, n)) / n
    b = -0.5 * j @ (dist**2) @ j
    eigvals, eigvecs = np.linalg.eigh(b)
    order = np.argsort(eigvals)[::-1]
    coords = np.zeros((n, 2))
    for c in range(min(2, n)):
        lam = eigvals[order[c]]
        if lam > 0:
            v = eigvecs[:, order[c]]
            if v[int(np.argmax(np.abs(v)))] < 0:
                v = -v
            coords[:, c] = v * math.sqrt(lam)
    return coords


def kruskal_stress(coords: np.ndarray, dist: np.ndarray) -> float:
    """Stress-1 of an embedding against target distances."""
    n = dist.shape[0]
    if n < 2:
        return 0.0
    num = 0.0
    den = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            d_emb = float(np.hypot(*(coords[i] - coords[j])))
            num += (d_emb - dist[i, j]) ** 2
            den += dist[i, j] ** 2
    return math.sqrt(num / den) if den > 0 else 0.0


def _refine(coords: np.ndarray, dist: np.ndarray, iterations: int) -> np.ndarray:
    """Deterministic stress-reducing sweeps (SMACOF-style majorization)."""
    n = coords.shape[0]
    if n < 2 or iterations == 0:
        return coords
    pos = coords.copy()
    for _ in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        d_emb = np.sqrt((delta**2).sum(axis=2))
        np.fill_diagonal(d_emb, 1.0)
        np.maximum(d_emb, 1e-12, out=d_emb)
        ratio = dist / d_emb
        np.fill_diagonal(ratio, 0.0)
        b = -ratio
        np.fill_diagonal(b, ratio.sum(axis=1))
        pos = (b @ pos) / n
    return pos


def layout(g: RuleGraph, seed: int = 0, refine_iterations: int = DEFAULT_REFINE_ITERATIONS) -> LayoutResult:
    """Fixed layout: per-component classical MDS on graph distances, then
    bounded deterministic refinement; components tiled left to right.

    Identical (g, seed) always produce identical positions; the seed only
    drives symmetry-breaking jitter and overlap displacement directions.
    """
    nodes, dist = graph_distances(g)
    n = len(nodes)
    index = {node: i for i, node in enumerate(nodes)}
    rng = np.random.default_rng(seed)

    # components, each led by its smallest node index
    unassigned = set(range(n))
    components = []
    while unassigned:
        start = min(unassigned)
        comp = sorted(i for i in unassigned if np.isfinite(dist[start, i]))
        components.append(comp)
        unassigned.difference_update(comp)

    positions = np.zeros((n, 2))
    stresses = []
    x_cursor = 0.0
    for comp in components:
        sub = dist[np.ix_(comp, comp)]
        coords = _classical_mds(sub)
        stresses.append(kruskal_stress(coords, sub))
        if refine_iterations and len(comp) > 2:
            coords = coords + rng.normal(0.0, 1e-6, coords.shape)
            coords = _refine(coords, sub, refine_iterations)
        xmin, ymin = coords.min(axis=0) if len(comp) else (0.0, 0.0)
        coords[:, 0] += x_cursor - xmin
        coords[:, 1] -= ymin
        x_cursor = coords[:, 0].max() + COMPONENT_GUTTER
        for local, i in enumerate(comp):
            positions[i] = coords[local]

    # enforce minimum separation: displace the later node (id order)
    order = sorted(range(n), key=lambda i: nodes[i])
    for _ in range(3):
        moved = False
        for a_pos in range(n):
            for b_pos in range(a_pos + 1, n):
                i, j = order[a_pos], order[b_pos]
                if np.hypot(*(positions[i] - positions[j])) < MIN_NODE_SEPARATION:
                    angle = rng.uniform(0.0, 2.0 * math.pi)
                    positions[j] += MIN_NODE_SEPARATION * np.array(
                        [math.cos(angle), math.sin(angle)]
                    )
                    moved = True
        if not moved:
            break

    pos_map = {node: (float(positions[index[node], 0]), float(positions[index[node], 1])) for node in nodes}
    xs = positions[:, 0]
    ys = positions[:, 1]
    bbox = (float(xs.min()), float(ys.min()), float(xs.max()), float(ys.max()))
    mean_stress = float(np.mean(stresses)) if stresses else 0.0
    return LayoutResult(pos_map, seed, bbox, mean_stress)


def node_visuals(support, lift, support_range, lift_range, radius_range=DEFAULT_RADIUS_RANGE):
    """Linear size/shade scales: radius tracks support, shade (0..1) tracks lift.

    Degenerate ranges (all rules equal) map to the midpoint.
    """
    r_min, r_max = radius_range
    s_lo, s_hi = support_range
    l_lo, l_hi = lift_range
    if s_hi > s_lo:
        radius = r_min + (r_max - r_min) * float((support - s_lo) / (s_hi - s_lo))
    else:
        radius = (r_min + r_max) / 2.0
    if l_hi > l_lo:
        shade = float((lift - l_lo) / (l_hi - l_lo))
    else:
        shade = 0.5
    return radius, shade
