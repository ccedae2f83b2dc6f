"""RRT and RRT-Connect baselines sharing the instrumented oracle."""

from __future__ import annotations

import time

import numpy as np
from scipy.spatial import cKDTree

from .geometry import Config, dist, polyline_length, unit
from .global_planner import PlanResult, PlanStatus
from .params import BaselineParams
from .world import CollisionOracle


class KdTree:
    """Incremental exact nearest-neighbor index.

    Backed by a periodically rebuilt scipy kd-tree plus a brute-force buffer
    of recent insertions, so queries stay exact while insertion stays cheap.
    """

    def __init__(self, dim: int, rebuild_every: int = 256):
        self.dim = dim
        self.rebuild_every = rebuild_every
        self._pts = np.empty((rebuild_every, dim))
        self._size = 0
        self._tree: cKDTree | None = None
        self._tree_size = 0

    def __len__(self) -> int:
        return self._size

    def point(self, i: int) -> Config:
        if not 0 <= i < self._size:
            raise IndexError(i)
        return self._pts[i]

    def insert(self, q: Config) -> int:
        if q.shape[0] != self.dim:
            raise ValueError("point dimension mismatch")
        if self._size == self._pts.shape[0]:
            grown = np.empty((2 * self._size, self.dim))
            grown[: self._size] = self._pts
            self._pts = grown
        self._pts[self._size] = q
        self._size += 1
        if self._size - self._tree_size >= self.rebuild_every:
            self._tree = cKDTree(self._pts[: self._size].copy())
            self._tree_size = self._size
        return self._size - 1

    def nearest(self, q: Config) -> int:
        if self._size == 0:
            raise ValueError("nearest query on an empty tree")
        best_d = np.inf
        best_i = -1
        if self._tree is not None:
            d, i = self._tree.query(q)
            best_d, best_i = float(d), int(i)
        if self._tree_size < self._size:
            buf = self._pts[self._tree_size : self._size]
            diff = buf - q
            dd = np.einsum("ij,ij->i", diff, diff)
            j = int(np.argmin(dd))
            if float(dd[j]) < best_d * best_d:
                best_i = self._tree_size + j
        return best_i


def kd_nearest(tree: KdTree, q: Config) -> int:
    """Id of the exact Euclidean nearest stored point."""
    return tree.nearest(q)


def _steer(q_from: Config, q_to: Config, step: float) -> Config | None:
    diff = q_to - q_from
    n = float(np.linalg.norm(diff))
    if n == 0.0:
        return None
    if n <= step:
        return q_to
    return q_from + step * (diff / n)


def _chain_path(configs: list[Config], parents: list[int], end: int) -> list[Config]:
    out = []
    cur = end
    while cur != -1:
        out.append(configs[cur])
        cur = parents[cur]
    out.reverse()
    return out


def _result(path_pts: list[Config] | None, total: int, t0: float) -> PlanResult:
    wall = time.perf_counter() - t0
    if path_pts is None:
        return PlanResult(PlanStatus.BUDGET_EXHAUSTED, None, total, wall, float("nan"))
    path = np.array(path_pts)
    return PlanResult(PlanStatus.SOLVED, path, total, wall, polyline_length(path))


def rrt_plan(q_init: Config, q_goal: Config, oracle: CollisionOracle,
             params: BaselineParams, rng: np.random.Generator) -> PlanResult:
    """Goal-biased RRT with fixed-step extension and per-step point checks."""
    t0 = time.perf_counter()
    start_count = oracle.sample_count
    if not oracle.is_free(q_init):
        raise ValueError("q_init is in collision")
    if not oracle.is_free(q_goal):
        raise ValueError("q_goal is in collision")
    lo, hi = oracle.scene.lower, oracle.scene.upper

    configs = [q_init]
    parents = [-1]
    kd = KdTree(oracle.scene.dim)
    kd.insert(q_init)
    edges: list[np.ndarray] = []

    path_pts = None
    while oracle.sample_count - start_count < params.max_samples:
        if rng.random() < params.goal_bias:
            q_rand = q_goal
        else:
            q_rand = rng.uniform(lo, hi)
        ni = kd.nearest(q_rand)
        q_new = _steer(configs[ni], q_rand, params.step)
        if q_new is None:
            continue
        if not oracle.is_free(q_new):
            continue
        configs.append(q_new)
        parents.append(ni)
        kd.insert(q_new)
        edges.append(np.vstack([configs[ni], q_new]))
        if dist(q_new, q_goal) <= params.step:
            pts = _chain_path(configs, parents, len(configs) - 1)
            if not np.array_equal(pts[-1], q_goal):
                pts.append(q_goal)
            path_pts = pts
            break
    res = _result(path_pts, oracle.sample_count - start_count, t0)
    res.tree_edges = edges
    return res


class _Tree:
    def __init__(self, root: Config, dim: int):
        self.configs = [root]
        self.parents = [-1]
        self.kd = KdTree(dim)
        self.kd.insert(root)

    def add(self, q: Config, parent: int) -> int:
        self.configs.append(q)
        self.parents.append(parent)
        self.kd.insert(q)
        return len(self.configs) - 1


def rrt_connect_plan(q_init: Config, q_goal: Config, oracle: CollisionOracle,
                     params: BaselineParams, rng: np.random.Generator) -> PlanResult:
    """Bidirectional RRT with the greedy connect heuristic."""
    t0 = time.perf_counter()
    start_count = oracle.sample_count
    if not oracle.is_free(q_init):
        raise ValueError("q_init is in collision")
    if not oracle.is_free(q_goal):
        raise ValueError("q_goal is in collision")
    lo, hi = oracle.scene.lower, oracle.scene.upper
    dim = oracle.scene.dim

    ta = _Tree(q_init, dim)
    tb = _Tree(q_goal, dim)
    a_is_start = True
    edges: list[np.ndarray] = []

    def budget_left() -> bool:
        return oracle.sample_count - start_count < params.max_samples

    def extend(tree: _Tree, target: Config) -> int | None:
        ni = tree.kd.nearest(target)
        q_new = _steer(tree.configs[ni], target, params.step)
        if q_new is None:
            return ni if np.array_equal(tree.configs[ni], target) else None
        if not oracle.is_free(q_new):
            return None
        idx = tree.add(q_new, ni)
        edges.append(np.vstack([tree.configs[ni], q_new]))
        return idx

    path_pts = None
    while budget_left():
        q_rand = rng.uniform(lo, hi)
        ia = extend(ta, q_rand)
        if ia is not None:
            q_new = ta.configs[ia]
            # greedily connect the other tree toward the new node
            ib = None
            cur = tb.kd.nearest(q_new)
            while budget_left():
                q_step = _steer(tb.configs[cur], q_new, params.step)
                if q_step is None:
                    ib = cur
                    break
                if not oracle.is_free(q_step):
                    break
                cur = tb.add(q_step, cur)
                edges.append(np.vstack([tb.configs[tb.parents[cur]], q_step]))
                if np.array_equal(q_step, q_new):
                    ib = cur
                    break
            if ib is not None:
                pa = _chain_path(ta.configs, ta.parents, ia)
                pb = _chain_path(tb.configs, tb.parents, ib)
                pb.reverse()
                if np.array_equal(pa[-1], pb[0]):
                    pb = pb[1:]
                pts = pa + pb
                if not a_is_start:
                    pts.reverse()
                path_pts = pts
                break
        ta, tb = tb, ta
        a_is_start = not a_is_start
    res = _result(path_pts, oracle.sample_count - start_count, t0)
    res.tree_edges = edges
    return res
