"""Finite branching-time structures.

Trees are given by their immediate-successor edges; the strict order on
moments is the transitive closure of the edges.  A history is a maximal
linearly ordered set of moments; on a finite tree histories correspond
one-to-one with the order-maximal moments ("leaves"), so a history is
identified by its leaf and materialized as the leaf's down-set.  An
indistinguishability assignment partitions, at every moment, the histories
passing through it, and may only merge classes when moving down the tree.
An evaluation point is a pair of a moment and one class of histories at it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import InvalidPointError


@dataclass(frozen=True, eq=False)
class Tree:
    """A finite set of moments ordered by the transitive closure of edges.

    ``edges`` are (parent, child) pairs of immediate succession.  No root is
    required; a forest of disjoint chains and trees is a valid input.
    """

    moments: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    @cached_property
    def moment_set(self) -> frozenset[str]:
        return frozenset(self.moments)

    @cached_property
    def _nodes(self) -> tuple[str, ...]:
        # Declared moments plus any edge endpoints, so that validation can
        # reason about malformed inputs without key errors.
        extra = {m for e in self.edges for m in e} - self.moment_set
        return tuple(sorted(self.moment_set | extra))

    @cached_property
    def children_map(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {m: [] for m in self._nodes}
        for parent, child in self.edges:
            if child not in out[parent]:
                out[parent].append(child)
        return {m: tuple(sorted(cs)) for m, cs in out.items()}

    @cached_property
    def parents_map(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {m: [] for m in self._nodes}
        for parent, child in self.edges:
            if parent not in out[child]:
                out[child].append(parent)
        return {m: tuple(sorted(ps)) for m, ps in out.items()}

    @cached_property
    def descendants(self) -> dict[str, frozenset[str]]:
        """Strict descendants of each node (cycle-tolerant closure)."""
        out = {}
        children = self.children_map
        for start in self._nodes:
            seen: set[str] = set()
            stack = list(children[start])
            while stack:
                node = stack.pop()
                if node in seen:
                    continue
                seen.add(node)
                stack.extend(children[node])
            out[start] = frozenset(seen)
        return out

    @cached_property
    def ancestors(self) -> dict[str, frozenset[str]]:
        out = {}
        parents = self.parents_map
        for start in self._nodes:
            seen: set[str] = set()
            stack = list(parents[start])
            while stack:
                node = stack.pop()
                if node in seen:
                    continue
                seen.add(node)
                stack.extend(parents[node])
            out[start] = frozenset(seen)
        return out

    @cached_property
    def leaves(self) -> tuple[str, ...]:
        """Order-maximal moments, sorted."""
        return tuple(m for m in sorted(self.moment_set) if not self.children_map[m])

    def lt(self, a: str, b: str) -> bool:
        """The strict order: a < b."""
        return b in self.descendants[a]

    def down_set(self, m: str) -> frozenset[str]:
        return self.ancestors[m] | {m}


@dataclass(frozen=True)
class History:
    """A maximal linearly ordered set of moments, identified by its leaf."""

    leaf: str
    moments: frozenset[str]


@dataclass(frozen=True, eq=False)
class IndistFunction:
    """Per-moment partition of the histories (named by leaf) through it.

    Blocks are kept as given; canonical (frozenset) views live on Frame.
    """

    classes_at: dict[str, tuple[tuple[str, ...], ...]]


@dataclass(frozen=True)
class Point:
    """An evaluation point: a moment plus one class of histories through it.

    The class is stored as the frozenset of the leaves of its histories; the
    canonical representative is the lexicographically smallest leaf.
    """

    moment: str
    block: frozenset[str]

    @property
    def class_rep(self) -> str:
        return min(self.block)

    def text(self) -> str:
        return f"{self.moment}/{self.class_rep}"

    def __repr__(self) -> str:  # compact, for test output
        return f"Point({self.moment}/{{{','.join(sorted(self.block))}}})"


def point_key(p: Point) -> tuple[str, str]:
    """Canonical sort key for points."""
    return (p.moment, p.class_rep)


@dataclass(frozen=True, eq=False)
class Frame:
    tree: Tree
    indist: IndistFunction

    # -- canonical derived views (assume a valid frame) --

    @cached_property
    def blocks_at(self) -> dict[str, tuple[frozenset[str], ...]]:
        out = {}
        for m in sorted(self.tree.moment_set):
            blocks = [frozenset(b) for b in self.indist.classes_at.get(m, ())]
            out[m] = tuple(sorted((b for b in blocks if b), key=min))
        return out

    @cached_property
    def block_of(self) -> dict[tuple[str, str], frozenset[str]]:
        """(moment, leaf) -> the class at that moment containing the history."""
        out = {}
        for m, blocks in self.blocks_at.items():
            for block in blocks:
                for leaf in block:
                    out[(m, leaf)] = block
        return out

    @cached_property
    def histories(self) -> tuple[History, ...]:
        tree = self.tree
        return tuple(History(leaf, tree.down_set(leaf)) for leaf in tree.leaves)

    @cached_property
    def histories_through_map(self) -> dict[str, tuple[History, ...]]:
        out: dict[str, list[History]] = {m: [] for m in self.tree.moment_set}
        for h in self.histories:
            for m in h.moments:
                out[m].append(h)
        return {m: tuple(hs) for m, hs in out.items()}

    @cached_property
    def point_list(self) -> tuple[Point, ...]:
        pts = []
        for m in sorted(self.tree.moment_set):
            for block in self.blocks_at[m]:
                pts.append(Point(m, block))
        return tuple(pts)

    @cached_property
    def point_index(self) -> dict[Point, int]:
        return {p: i for i, p in enumerate(self.point_list)}

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self.point_list)) - 1

    def mask_of(self, pts) -> int:
        index = self.point_index
        mask = 0
        for p in pts:
            i = index.get(p)
            if i is None:
                raise InvalidPointError(
                    f"{p.text()} is not a point of the frame")
            mask |= 1 << i
        return mask

    # -- quantifier domains for the clause-by-clause semantics --
    #
    # The "hist" tables are read off the histories and classes exactly as the
    # evaluation clauses quantify; the "rel" tables are read off the derived
    # point relations.  The two are computed along different paths on purpose:
    # their agreement is what the equivalence battery checks.

    @cached_property
    def hist_future_masks(self) -> tuple[int, ...]:
        return tuple(
            _fold_masks(chains) for chains in self.future_chains
        )

    @cached_property
    def future_chains(self) -> tuple[tuple[int, ...], ...]:
        """Per point, per history of its class: later points along it."""
        tree, index = self.tree, self.point_index
        out = []
        for p in self.point_list:
            chains = []
            for leaf in sorted(p.block):
                chain = 0
                for s in tree.down_set(leaf):
                    if tree.lt(p.moment, s):
                        chain |= 1 << index[Point(s, self.block_of[(s, leaf)])]
                chains.append(chain)
            out.append(tuple(chains))
        return tuple(out)

    @cached_property
    def hist_past_masks(self) -> tuple[int, ...]:
        tree, index = self.tree, self.point_index
        out = []
        for p in self.point_list:
            mask = 0
            for leaf in p.block:
                for s in tree.down_set(leaf):
                    if tree.lt(s, p.moment):
                        mask |= 1 << index[Point(s, self.block_of[(s, leaf)])]
            out.append(mask)
        return tuple(out)

    @cached_property
    def hist_class_masks(self) -> tuple[int, ...]:
        index = self.point_index
        out = []
        for p in self.point_list:
            mask = 0
            for block in self.blocks_at[p.moment]:
                mask |= 1 << index[Point(p.moment, block)]
            out.append(mask)
        return tuple(out)

    @cached_property
    def rel_successor_masks(self) -> tuple[int, ...]:
        pts = self.point_list
        out = []
        for p in pts:
            mask = 0
            for j, q in enumerate(pts):
                if precedes(self, p, q):
                    mask |= 1 << j
            out.append(mask)
        return tuple(out)

    @cached_property
    def rel_predecessor_masks(self) -> tuple[int, ...]:
        pts = self.point_list
        out = []
        for p in pts:
            mask = 0
            for j, q in enumerate(pts):
                if precedes(self, q, p):
                    mask |= 1 << j
            out.append(mask)
        return tuple(out)

    @cached_property
    def rel_same_moment_masks(self) -> tuple[int, ...]:
        pts = self.point_list
        out = []
        for p in pts:
            mask = 0
            for j, q in enumerate(pts):
                if same_moment(self, p, q):
                    mask |= 1 << j
            out.append(mask)
        return tuple(out)


def _fold_masks(masks) -> int:
    out = 0
    for m in masks:
        out |= m
    return out


@dataclass(frozen=True, eq=False)
class Model:
    frame: Frame
    valuation: dict[str, frozenset[Point]]


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    witness: dict

    def to_doc(self) -> dict:
        return {"kind": self.kind, "message": self.message, "witness": self.witness}


@dataclass(frozen=True)
class Report:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> tuple[str, ...]:
        return tuple(v.kind for v in self.violations)

    def to_doc(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_doc() for v in self.violations]}


def _tree_violations(tree: Tree) -> list[Violation]:
    out = []
    if not tree.moments:
        out.append(Violation(
            "empty-structure", "the structure declares no moments", {}))
        return out

    seen_moments: set[str] = set()
    for m in tree.moments:
        if m in seen_moments:
            out.append(Violation(
                "duplicate-moment", f"moment {m!r} is declared twice",
                {"moment": m}))
        seen_moments.add(m)

    seen_edges: set[tuple[str, str]] = set()
    for edge in tree.edges:
        if edge in seen_edges:
            out.append(Violation(
                "duplicate-edge", f"edge {list(edge)} appears twice",
                {"edge": list(edge)}))
        seen_edges.add(edge)
        for endpoint in edge:
            if endpoint not in tree.moment_set:
                out.append(Violation(
                    "unknown-moment",
                    f"edge {list(edge)} mentions undeclared moment {endpoint!r}",
                    {"edge": list(edge), "moment": endpoint}))

    for m in sorted(tree._nodes):
        if m in tree.descendants[m]:
            out.append(Violation(
                "cycle", f"moment {m!r} lies on a cycle of the order",
                {"moment": m}))

    # Two distinct edge-parents of one child: if they are incomparable the
    # order is not downward linear; if comparable, the edge from the farther
    # parent does not encode immediate succession.
    for child in sorted(tree._nodes):
        parents = tree.parents_map[child]
        for i in range(len(parents)):
            for j in range(i + 1, len(parents)):
                b, c = parents[i], parents[j]
                if tree.lt(b, c):
                    out.append(Violation(
                        "non-immediate-edge",
                        f"edge [{b!r}, {child!r}] skips intermediate moment {c!r}",
                        {"edge": [b, child], "skipped": c}))
                elif tree.lt(c, b):
                    out.append(Violation(
                        "non-immediate-edge",
                        f"edge [{c!r}, {child!r}] skips intermediate moment {b!r}",
                        {"edge": [c, child], "skipped": b}))
                else:
                    out.append(Violation(
                        "downward-linearity",
                        f"moments {b!r} and {c!r} are incomparable predecessors "
                        f"of {child!r}",
                        {"predecessors": [b, c], "moment": child}))
    return out


def _indist_violations(frame: Frame) -> list[Violation]:
    out = []
    tree = frame.tree
    declared = tree.moment_set
    classes_at = frame.indist.classes_at

    for m in sorted(set(classes_at) - declared):
        out.append(Violation(
            "indist-extra-moment",
            f"indistinguishability is declared at unknown moment {m!r}",
            {"moment": m}))
    for m in sorted(declared - set(classes_at)):
        out.append(Violation(
            "indist-missing-moment",
            f"no indistinguishability partition is declared at moment {m!r}",
            {"moment": m}))

    through: dict[str, set[str]] = {m: set() for m in declared}
    for leaf in tree.leaves:
        for m in tree.down_set(leaf):
            through[m].add(leaf)

    partitions_ok = True
    for m in sorted(declared):
        blocks = classes_at.get(m, ())
        placed: set[str] = set()
        for block in blocks:
            if not block:
                partitions_ok = False
                out.append(Violation(
                    "empty-block", f"empty class at moment {m!r}", {"moment": m}))
            for leaf in block:
                if leaf not in through[m]:
                    partitions_ok = False
                    out.append(Violation(
                        "partition-coverage",
                        f"{leaf!r} is not the leaf of a history through {m!r}",
                        {"moment": m, "extraneous": leaf}))
                elif leaf in placed:
                    partitions_ok = False
                    out.append(Violation(
                        "partition-overlap",
                        f"history {leaf!r} appears in two classes at {m!r}",
                        {"moment": m, "leaf": leaf}))
                placed.add(leaf)
        for leaf in sorted(through[m] - placed):
            partitions_ok = False
            out.append(Violation(
                "partition-coverage",
                f"history {leaf!r} through {m!r} is in no class",
                {"moment": m, "missing": leaf}))

    if not partitions_ok:
        return out

    # Backward coherence: histories sharing a class at t share one at every
    # earlier moment.
    block_of = frame.block_of
    for t in sorted(declared):
        for block in frame.blocks_at[t]:
            leaves = sorted(block)
            for s in sorted(tree.ancestors[t]):
                anchor = leaves[0]
                for other in leaves[1:]:
                    if block_of[(s, anchor)] is not block_of[(s, other)]:
                        out.append(Violation(
                            "backward-coherence",
                            f"histories {anchor!r} and {other!r} share a class "
                            f"at {t!r} but not at earlier moment {s!r}",
                            {"histories": [anchor, other],
                             "merged_at": t, "split_at": s}))
    return out


def validate_frame(frame: Frame) -> Report:
    """Check every frame invariant; violations are data, not exceptions."""
    violations = _tree_violations(frame.tree)
    if not violations:
        violations = _indist_violations(frame)
    return Report(tuple(violations))


def validate_model(model: Model) -> Report:
    violations = list(validate_frame(model.frame).violations)
    if not violations:
        index = model.frame.point_index
        for atom in sorted(model.valuation):
            for p in sorted(model.valuation[atom], key=point_key):
                if p not in index:
                    violations.append(Violation(
                        "valuation-invalid-point",
                        f"valuation of {atom!r} names {p.text()}, which is not "
                        f"a point of the frame",
                        {"atom": atom, "point": p.text()}))
    return Report(tuple(violations))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def histories(tree: Tree) -> tuple[History, ...]:
    """All maximal chains, one per order-maximal moment, sorted by leaf."""
    return tuple(History(leaf, tree.down_set(leaf)) for leaf in tree.leaves)


def histories_through(frame: Frame, moment: str) -> tuple[History, ...]:
    if moment not in frame.tree.moment_set:
        raise InvalidPointError(f"unknown moment {moment!r}")
    return frame.histories_through_map[moment]


def points(frame: Frame) -> tuple[Point, ...]:
    """All evaluation points in canonical order (moment, then class rep)."""
    return frame.point_list


def precedes(frame: Frame, p: Point, q: Point) -> bool:
    """Strict temporal order on points: earlier moment, broader class."""
    return frame.tree.lt(p.moment, q.moment) and p.block >= q.block


def same_moment(frame: Frame, p: Point, q: Point) -> bool:
    """Equivalence of points sharing a moment (their classes both live there)."""
    return p.moment == q.moment


def future_points(frame: Frame, moment: str, leaf: str) -> tuple[Point, ...]:
    """Points (s, class of the history named by leaf) strictly after moment."""
    tree = frame.tree
    out = []
    for s in sorted(tree.down_set(leaf)):
        if tree.lt(moment, s):
            out.append(Point(s, frame.block_of[(s, leaf)]))
    return tuple(out)


def undividedness_indist(tree: Tree) -> IndistFunction:
    """The canonical assignment: histories are indistinguishable at a moment
    exactly when they still share some strictly later moment.

    Through a moment with children, histories group by the child they pass
    through; a childless moment carries the single history it ends.
    """
    classes: dict[str, tuple[tuple[str, ...], ...]] = {}
    leaves = tree.leaves
    for m in sorted(tree.moment_set):
        children = tree.children_map[m]
        if not children:
            classes[m] = ((m,),)
            continue
        blocks = []
        for child in children:
            under = tuple(sorted(
                l for l in leaves if l == child or child in tree.ancestors[l]))
            blocks.append(under)
        classes[m] = tuple(blocks)
    return IndistFunction(classes)
