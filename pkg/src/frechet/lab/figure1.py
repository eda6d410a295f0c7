"""Star-tree instance on which the inductive mean stalls away from the barycenter."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..rng import make_rng
from ..solvers import StepSchedule, iterated_barycenter
from ..spaces import TreeSpace, build_figure1_tree


@dataclass
class Figure1Report:
    p_grid: list
    adversarial: dict
    permutation_quantiles: dict = field(default_factory=dict)
    non_vanishing: bool = True


def adversarial_distance(p, arms=(1.0, 1.0, 1.0)):
    """``d(iterated barycenter, root)`` for the leaf-by-leaf order with harmonic steps."""
    tree, pts = build_figure1_tree(p, arms)
    space = TreeSpace(tree)
    b = iterated_barycenter(space, pts, StepSchedule.harmonic()).result
    return space.distance(b, tree.node("root"))


def figure1_regression(p_grid=(10, 100), seed=0, n_perm=100, arms=(1.0, 1.0, 1.0)) -> Figure1Report:
    """Adversarial distances and random-permutation distance quantiles per ``p``."""
    adv, quant = {}, {}
    for i, p in enumerate(p_grid):
        tree, pts = build_figure1_tree(p, arms)
        space = TreeSpace(tree)
        root = tree.node("root")
        adv[p] = space.distance(iterated_barycenter(space, pts).result, root)
        rng = make_rng(seed, i)
        d = np.array([
            space.distance(iterated_barycenter(space, space.take(pts, rng.permutation(len(pts)))).result, root)
            for _ in range(n_perm)
        ])
        quant[p] = {q: float(np.quantile(d, q)) for q in (0.1, 0.5, 0.9)}
    ok = True
    if 10 in adv and 100 in adv:
        ok = adv[100] >= 0.9 * adv[10]
    return Figure1Report(list(p_grid), adv, quant, ok)
