"""Greedy depth-first local tree search with checkpoint bookkeeping.

The local search grows a tree of fixed-length edges from a root toward a
goal.  Checkpoints (the root plus every node with two or more children)
store back-propagated subtree statistics: progress counters, collision
points, and node counts.  Those records drive the node-culling gate and the
gradient-steered edge extension.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .geometry import Config, Region, dist, hvs, proj, proj_scalar, unit
from .params import SprintParams
from .world import CollisionOracle


class LocalStatus(enum.Enum):
    REACHED = "Reached"
    EXHAUSTED = "Exhausted"


@dataclass
class LocalNode:
    id: int
    config: Config
    parent: int | None
    children: list[int] = field(default_factory=list)
    is_checkpoint: bool = False
    # cached at insertion so checkpoint snapshots never re-measure the tree
    d_goal: float = 0.0
    d_root: float = 0.0
    # checkpoint ids on the root -> node path, node included when it is one
    cp_chain: tuple[int, ...] = ()

    @property
    def child_count(self) -> int:
        return len(self.children)


@dataclass
class CheckpointRecord:
    """Subtree statistics held at one checkpoint node.

    samples_since_exploit / samples_since_explore count collision-check
    samples since the subtree last improved its best distance-to-goal /
    max distance-from-root.
    """

    best_goal_dist: float
    max_root_dist: float
    samples_since_exploit: int = 0
    samples_since_explore: int = 0
    subtree_node_count: int = 1
    obs_points: deque = field(default_factory=deque)


@dataclass
class LocalResult:
    status: LocalStatus
    path: np.ndarray | None
    samples_used: int


class LocalTree:
    """Search tree rooted at the region's first endpoint, aiming at the second."""

    def __init__(self, root: Config, goal: Config, params: SprintParams):
        self.root = root
        self.goal = goal
        self.params = params
        self.nodes: list[LocalNode] = []
        self.records: dict[int, CheckpointRecord] = {}
        n = LocalNode(id=0, config=root, parent=None, is_checkpoint=True,
                      d_goal=dist(root, goal), d_root=0.0, cp_chain=(0,))
        self.nodes.append(n)
        self.records[0] = CheckpointRecord(
            best_goal_dist=n.d_goal, max_root_dist=0.0,
            obs_points=deque(maxlen=params.k_obs),
        )

    def add_node(self, config: Config, parent: int) -> int:
        nid = len(self.nodes)
        p = self.nodes[parent]
        self.nodes.append(LocalNode(id=nid, config=config, parent=parent,
                                    d_goal=dist(config, self.goal),
                                    d_root=dist(config, self.root),
                                    cp_chain=p.cp_chain))
        p.children.append(nid)
        return nid

    def ancestors(self, node_id: int):
        """Yield node ids from node_id up to and including the root."""
        cur: int | None = node_id
        while cur is not None:
            yield cur
            cur = self.nodes[cur].parent

    def checkpoint_path(self, node_id: int) -> list[int]:
        """Checkpoint ids on the path node_id -> root (inclusive of both ends)."""
        return list(reversed(self.nodes[node_id].cp_chain))

    def subtree_ids(self, node_id: int) -> list[int]:
        out = []
        todo = [node_id]
        while todo:
            i = todo.pop()
            out.append(i)
            todo.extend(self.nodes[i].children)
        return out

    def path_to_root(self, node_id: int) -> np.ndarray:
        """Configs from root to node_id as an (n, d) array."""
        chain = list(self.ancestors(node_id))
        chain.reverse()
        return np.array([self.nodes[i].config for i in chain])


def subtree_sigma(n: int, params: SprintParams) -> float:
    """Culling-Gaussian standard deviation, widened for small subtrees."""
    if n < 1:
        raise ValueError("subtree node count must be >= 1")
    return params.c_base * (1.0 + params.sigma_slack * math.exp(-n / params.n_scale))


def valid_node(node_id: int, tree: LocalTree, params: SprintParams) -> bool:
    """Gate a node for extension: every checkpoint on its root path must show
    recent exploitation or exploration progress."""
    records = tree.records
    for cp in tree.nodes[node_id].cp_chain:
        rec = records[cp]
        x = min(rec.samples_since_exploit, rec.samples_since_explore)
        c = subtree_sigma(rec.subtree_node_count, params)
        g = math.exp(-(x * x) / (2.0 * c * c))
        if g < params.kappa:
            return False
    return True


def collision_points(node_id: int, tree: LocalTree) -> list[Config]:
    """Collision points stored at the nearest ancestor checkpoint of node_id."""
    chain = tree.nodes[node_id].cp_chain
    if not chain:
        raise AssertionError("root must be a checkpoint")
    return list(tree.records[chain[-1]].obs_points)


def backprop_progress(tree: LocalTree, new_node_id: int) -> None:
    """Propagate a freshly inserted free node's progress to every checkpoint
    on its path to the root."""
    node = tree.nodes[new_node_id]
    d_goal = node.d_goal
    d_root = node.d_root
    eps = tree.params.eps_prog_eff
    for cp in node.cp_chain:
        rec = tree.records[cp]
        rec.subtree_node_count += 1
        if d_goal < rec.best_goal_dist - eps:
            rec.best_goal_dist = d_goal
            rec.samples_since_exploit = 0
        else:
            rec.samples_since_exploit += 1
        if d_root > rec.max_root_dist + eps:
            rec.max_root_dist = d_root
            rec.samples_since_explore = 0
        else:
            rec.samples_since_explore += 1


def backprop_collision(tree: LocalTree, node_id: int, q_obs: Config) -> None:
    """Store an observed collision point at every checkpoint on the path
    node_id -> root; a collision is a sample without progress."""
    for cp in tree.nodes[node_id].cp_chain:
        rec = tree.records[cp]
        rec.obs_points.append(q_obs.copy())
        rec.samples_since_exploit += 1
        rec.samples_since_explore += 1


def promote_checkpoint(tree: LocalTree, node_id: int) -> None:
    """Label a node that just gained its second child as a checkpoint, with a
    fresh record snapshotting its current subtree."""
    node = tree.nodes[node_id]
    if node.is_checkpoint:
        return
    ids = tree.subtree_ids(node_id)
    nodes = tree.nodes
    node.is_checkpoint = True
    node.cp_chain = node.cp_chain + (node_id,)
    for i in ids:
        if i != node_id:
            n = nodes[i]
            n.cp_chain = nodes[n.parent].cp_chain + ((i,) if n.is_checkpoint else ())
    tree.records[node_id] = CheckpointRecord(
        best_goal_dist=min(nodes[i].d_goal for i in ids),
        max_root_dist=max(nodes[i].d_root for i in ids),
        subtree_node_count=len(ids),
        obs_points=deque(maxlen=tree.params.k_obs),
    )


def grad_g1(q_x: Config, q_p: Config) -> Config:
    """Straight-line pull along the predecessor edge direction."""
    return unit(q_x - q_p)


def grad_g2(q_c: Config, q_goal: Config, lam: float) -> Config:
    """Goal pull, strengthened as the candidate nears the goal."""
    diff = q_goal - q_c
    n = math.sqrt(diff.dot(diff))
    if n == 0.0:
        return np.zeros_like(q_c)
    psi2 = math.exp(-(n * n) / (4.0 * lam * lam)) + 1.0
    return psi2 * (diff / n)


def grad_g3(q_x: Config, q_c: Config, obs: list[Config], lam: float,
            rng: np.random.Generator) -> Config:
    """Mean repulsion away from nearby observed collision points.

    Points projecting behind q_x are gated out; a point landing exactly on
    the segment pushes in a random unit direction.
    """
    if not obs:
        raise ValueError("grad_g3 requires at least one collision point")
    region = Region(q_x, q_c)
    total = np.zeros_like(q_c)
    for q_obs in obs:
        s = proj_scalar(q_obs, region)
        gate = hvs(s)
        if gate == 0.0:
            continue
        p = proj(q_obs, region)
        diff = p - q_obs
        n = math.sqrt(diff.dot(diff))
        psi32 = 5.0 * math.exp(-(n * n) / (4.0 * lam * lam))
        if n == 0.0:
            direction = rng.normal(size=q_c.shape[0])
            direction /= np.linalg.norm(direction)
        else:
            direction = diff / n
        total += psi32 * direction
    return total / len(obs)


def _virtual_root_predecessor(tree: LocalTree) -> Config:
    # one step behind the root, opposite the goal direction, so the first
    # extension's straight-line term points at the goal
    return tree.root - tree.params.lam * unit(tree.goal - tree.root)


def local_edge(node_id: int, tree: LocalTree, obs: list[Config],
               params: SprintParams, rng: np.random.Generator) -> Config:
    """Gradient-ascent steered candidate for the next edge endpoint; the
    returned candidate always sits at distance lam from the extend node."""
    lam = params.lam
    node = tree.nodes[node_id]
    q_x = node.config
    if node.parent is None:
        q_p = _virtual_root_predecessor(tree)
    else:
        q_p = tree.nodes[node.parent].config
    q_c = q_x + (q_x - q_p)
    if obs:
        q_c = q_c + rng.uniform(-lam / 100.0, lam / 100.0, size=q_x.shape[0])
    g1 = grad_g1(q_x, q_p)
    eta = params.eta_eff
    for _ in range(params.ascent_iters):
        g = params.w1_l * g1 + params.w2_l * grad_g2(q_c, tree.goal, lam)
        if obs:
            g = g + params.w3_l * grad_g3(q_x, q_c, obs, lam, rng)
        q_c = q_c + eta * g
        step = q_c - q_x
        n = math.sqrt(step.dot(step))
        if n == 0.0:
            step, n = g1, 1.0
        q_c = q_x + lam * (step / n)
    return q_c


def _finish_path(tree: LocalTree, node_id: int) -> np.ndarray:
    pts = tree.path_to_root(node_id)
    last = pts[-1]
    if not np.array_equal(last, tree.goal):
        pts = np.vstack([pts, tree.goal])
    return pts


def local_search(root: Config, goal: Config, oracle: CollisionOracle,
                 params: SprintParams, rng: np.random.Generator,
                 budget: int | None = None,
                 gate_fn=None, edge_fn=None) -> LocalResult:
    """Run one local search over the region [root, goal].

    Pops extend nodes off a LIFO stack, gates them through the culling
    heuristic, extends with the gradient-steered candidate, and
    back-propagates progress or collision information.  Terminates Reached
    when a free node lands within lam of the goal and a metered endpoint
    check of the goal passes (the short terminal edge carries no interior
    checks), or Exhausted when the stack empties or the budget runs out.

    gate_fn/edge_fn override the culling and extension heuristics; used by
    the ablation harness.
    """
    if np.array_equal(root, goal):
        raise ValueError("local search requires root != goal")
    if budget is None:
        budget = params.max_local_samples
    else:
        budget = min(budget, params.max_local_samples)
    start_count = oracle.sample_count
    tree = LocalTree(root, goal, params)

    goal_reach = params.lam * (1.0 + 1e-9)  # tolerance for exact-multiple spans
    if dist(root, goal) <= goal_reach and oracle.is_free(goal):
        return LocalResult(LocalStatus.REACHED, np.vstack([root, goal]), 1)

    stack: list[tuple[int, int]] = [(0, params.r_retry)]
    reached: int | None = None
    while stack:
        if oracle.sample_count - start_count >= budget:
            break
        node_id, retries = stack.pop()
        if gate_fn is not None:
            ok = gate_fn(node_id, tree, params, rng)
        else:
            ok = valid_node(node_id, tree, params)
        if not ok:
            continue
        obs = collision_points(node_id, tree)
        if edge_fn is not None:
            q_c = edge_fn(node_id, tree, obs, params, rng)
        else:
            q_c = local_edge(node_id, tree, obs, params, rng)
        if oracle.is_free(q_c):
            child = tree.add_node(q_c, node_id)
            backprop_progress(tree, child)
            if tree.nodes[node_id].child_count >= 2:
                promote_checkpoint(tree, node_id)
            if retries - 1 > 0:
                # parent stays reachable below the new branch for backtracking
                stack.append((node_id, retries - 1))
            if tree.nodes[child].d_goal <= goal_reach and oracle.is_free(goal):
                reached = child
                break
            stack.append((child, params.r_retry))
        else:
            backprop_collision(tree, node_id, q_c)
            if retries - 1 > 0:
                stack.append((node_id, retries - 1))

    samples_used = oracle.sample_count - start_count
    if reached is not None:
        return LocalResult(LocalStatus.REACHED, _finish_path(tree, reached), samples_used)
    return LocalResult(LocalStatus.EXHAUSTED, None, samples_used)
