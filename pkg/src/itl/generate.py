"""Seed-deterministic random frames and models.

All randomness flows from the explicit seed of each call; equal seeds give
byte-identical documents.  Generated structures always pass validation: the
"coarsened" policy merges random classes of the canonical assignment and then
propagates every merge to all earlier moments, which is the minimal repair
that restores backward coherence.
"""

from __future__ import annotations

import random

from .structures import (
    Frame, IndistFunction, Model, Point, Tree, points, undividedness_indist,
)

INDIST_POLICIES = ("undividedness", "coarsened")


def random_tree(seed: int, n_moments: int, branching: int = 2) -> Tree:
    """A random forest: mostly one tree, occasionally extra roots."""
    if n_moments < 1:
        raise ValueError("n_moments must be >= 1")
    if branching < 1:
        raise ValueError("branching must be >= 1")
    rng = random.Random(seed)
    moments = [f"m{i}" for i in range(n_moments)]
    edges = []
    child_count = {moments[0]: 0}
    for m in moments[1:]:
        open_parents = [p for p, c in child_count.items() if c < branching]
        if not open_parents or rng.random() < 0.08:
            child_count[m] = 0  # new root
            continue
        parent = rng.choice(sorted(open_parents))
        child_count[parent] += 1
        child_count[m] = 0
        edges.append((parent, m))
    return Tree(tuple(moments), tuple(edges))


def coarsened_indist(seed: int, tree: Tree) -> IndistFunction:
    """Randomly merge classes of the canonical assignment, propagating every
    merge downward so that backward coherence is preserved."""
    rng = random.Random(seed)
    base = undividedness_indist(tree)
    blocks: dict[str, list[set[str]]] = {
        m: [set(b) for b in base.classes_at[m]] for m in tree.moment_set
    }

    def merge(moment: str, i: int, j: int) -> None:
        i, j = min(i, j), max(i, j)
        blocks[moment][i] |= blocks[moment][j]
        del blocks[moment][j]

    def merge_leaves(moment: str, a: str, b: str) -> None:
        ia = next(i for i, blk in enumerate(blocks[moment]) if a in blk)
        ib = next(i for i, blk in enumerate(blocks[moment]) if b in blk)
        if ia != ib:
            merge(moment, ia, ib)

    by_depth = sorted(tree.moment_set,
                      key=lambda m: (-len(tree.ancestors[m]), m))
    for t in by_depth:
        while len(blocks[t]) > 1 and rng.random() < 0.4:
            i, j = rng.sample(range(len(blocks[t])), 2)
            merge(t, i, j)
        for block in blocks[t]:
            anchor = min(block)
            for other in block:
                if other != anchor:
                    for s in tree.ancestors[t]:
                        merge_leaves(s, anchor, other)

    return IndistFunction({
        m: tuple(tuple(sorted(b)) for b in sorted(bs, key=min))
        for m, bs in blocks.items()
    })


def gen_random_frame(seed: int, n_moments: int, branching: int = 2,
                     indist_policy: str = "undividedness") -> Frame:
    if indist_policy not in INDIST_POLICIES:
        raise ValueError(f"indist_policy must be one of {INDIST_POLICIES}")
    rng = random.Random(seed)
    tree = random_tree(rng.randrange(2 ** 32), n_moments, branching)
    if indist_policy == "undividedness":
        indist = undividedness_indist(tree)
    else:
        indist = coarsened_indist(rng.randrange(2 ** 32), tree)
    return Frame(tree, indist)


def gen_random_model(seed: int, n_moments: int, branching: int = 2,
                     indist_policy: str = "undividedness",
                     n_atoms: int = 2) -> Model:
    """A random model; the frame always passes validation."""
    rng = random.Random(seed)
    frame = gen_random_frame(rng.randrange(2 ** 32), n_moments, branching,
                             indist_policy)
    valuation: dict[str, frozenset[Point]] = {}
    pts = points(frame)
    for k in range(n_atoms):
        chosen = frozenset(p for p in pts if rng.random() < 0.35)
        valuation[f"p{k}"] = chosen
    return Model(frame, valuation)
