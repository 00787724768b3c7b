"""Bisimulations between pointed models.

A relation between the point sets of two models is a bisimulation for a pair
of anchor points when it links the anchors and every related pair agrees on
all atoms (PV) and satisfies back-and-forth conditions for the strict order
(G-f/G-b), its converse (H-f/H-b) and the same-moment relation (L-f/L-b); in
mode "LF" two history-matching conditions (F-f/F-b) are added for the weak
future operator.

The greatest relation satisfying the per-pair conditions is computed by
deleting violating pairs until a fixpoint; since every condition only asks
for the existence of related witnesses, deletion is monotone and the fixpoint
is the unique greatest such relation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidPointError
from .formula import And, Atom, F, Formula, G, H, L, Not
from .semantics import Evaluator
from .structures import (
    Model, Point, Report, Violation,
    future_points, point_key, points, precedes, same_moment,
)

CONDITIONS = ("PV", "G-f", "G-b", "H-f", "H-b", "L-f", "L-b")
LF_CONDITIONS = ("F-f", "F-b")


def conditions_for(mode: str) -> tuple[str, ...]:
    """The per-pair conditions plus the anchor condition, in reporting order."""
    return CONDITIONS + (LF_CONDITIONS if mode == "LF" else ()) + ("B",)


@dataclass(frozen=True)
class PointRelation:
    pairs: frozenset[tuple[Point, Point]]

    def sorted_pairs(self) -> list[tuple[Point, Point]]:
        return sorted(self.pairs, key=lambda pq: (point_key(pq[0]), point_key(pq[1])))


def _pair_text(pair: tuple[Point, Point]) -> list[str]:
    return [pair[0].text(), pair[1].text()]


def _pair_violations(src: Model, dst: Model, pairs: frozenset,
                     pair: tuple[Point, Point], mode: str) -> list[Violation]:
    """Failures of the per-pair conditions for one related pair."""
    p, q = pair
    out = []

    atoms = sorted(set(src.valuation) | set(dst.valuation))
    for atom in atoms:
        if (p in src.valuation.get(atom, frozenset())) != \
                (q in dst.valuation.get(atom, frozenset())):
            out.append(Violation(
                "PV", f"{p.text()} and {q.text()} disagree on atom {atom!r}",
                {"pair": _pair_text(pair), "atom": atom}))
            break

    src_pts = points(src.frame)
    dst_pts = points(dst.frame)

    forward = (
        ("G-f", lambda f, a, b: precedes(f, a, b), "successor"),
        ("H-f", lambda f, a, b: precedes(f, b, a), "predecessor"),
        ("L-f", same_moment, "same-moment point"),
    )
    for kind, rel, noun in forward:
        for r in sorted((r for r in src_pts if rel(src.frame, p, r)), key=point_key):
            if not any(rel(dst.frame, q, r2) and (r, r2) in pairs for r2 in dst_pts):
                out.append(Violation(
                    kind,
                    f"{noun} {r.text()} of {p.text()} has no related "
                    f"counterpart for {q.text()}",
                    {"pair": _pair_text(pair), "witness_point": r.text()}))
                break

    backward = (
        ("G-b", lambda f, a, b: precedes(f, a, b), "successor"),
        ("H-b", lambda f, a, b: precedes(f, b, a), "predecessor"),
        ("L-b", same_moment, "same-moment point"),
    )
    for kind, rel, noun in backward:
        for r2 in sorted((r2 for r2 in dst_pts if rel(dst.frame, q, r2)),
                         key=point_key):
            if not any(rel(src.frame, p, r) and (r, r2) in pairs for r in src_pts):
                out.append(Violation(
                    kind,
                    f"{noun} {r2.text()} of {q.text()} has no related "
                    f"counterpart for {p.text()}",
                    {"pair": _pair_text(pair), "witness_point": r2.text()}))
                break

    if mode == "LF":
        out.extend(_weak_future_pair_violations(src, dst, pairs, pair))
    return out


def _weak_future_pair_violations(src: Model, dst: Model, pairs: frozenset,
                                 pair: tuple[Point, Point]) -> list[Violation]:
    p, q = pair
    out = []

    def tracks(h: str, h2: str) -> bool:
        # Every later point along h has a related later point along h2.
        futures2 = future_points(dst.frame, q.moment, h2)
        for r in future_points(src.frame, p.moment, h):
            if not any((r, r2) in pairs for r2 in futures2):
                return False
        return True

    for h2 in sorted(q.block):
        if not any(tracks(h, h2) for h in sorted(p.block)):
            out.append(Violation(
                "F-f",
                f"no history of {p.text()} tracks history {h2!r} of {q.text()}",
                {"pair": _pair_text(pair), "target_history": h2}))
            break

    def covered(h: str, h2: str) -> bool:
        # Every later point along h2 has a related later point along h.
        futures = future_points(src.frame, p.moment, h)
        for r2 in future_points(dst.frame, q.moment, h2):
            if not any((r, r2) in pairs for r in futures):
                return False
        return True

    for h in sorted(p.block):
        if not any(covered(h, h2) for h2 in sorted(q.block)):
            out.append(Violation(
                "F-b",
                f"history {h!r} of {p.text()} is tracked by no history of "
                f"{q.text()}",
                {"pair": _pair_text(pair), "history": h}))
            break
    return out


def _require_valid_pairs(src: Model, dst: Model, pairs) -> None:
    src_index = src.frame.point_index
    dst_index = dst.frame.point_index
    for p, q in pairs:
        if p not in src_index:
            raise InvalidPointError(f"{p.text()} is not a point of the source model")
        if q not in dst_index:
            raise InvalidPointError(f"{q.text()} is not a point of the target model")


def check_bisimulation(src: Model, dst: Model, relation: PointRelation,
                       anchor: tuple[Point, Point], mode: str = "LF") -> Report:
    """Check every related pair, then (last) that the anchors are linked, so
    the report separates "not a bisimulation" from "does not link the anchors".
    """
    _require_valid_pairs(src, dst, relation.pairs)
    _require_valid_pairs(src, dst, [anchor])
    violations = []
    for pair in relation.sorted_pairs():
        violations.extend(_pair_violations(src, dst, relation.pairs, pair, mode))
    if anchor not in relation.pairs:
        violations.append(Violation(
            "B", f"the relation does not link the anchors "
                 f"{anchor[0].text()} and {anchor[1].text()}",
            {"anchor": _pair_text(anchor)}))
    return Report(tuple(violations))


def greatest_bisimulation(src: Model, dst: Model, mode: str = "LF") -> PointRelation:
    """Greatest relation satisfying PV and all back-and-forth conditions.

    Any pair it contains makes it a bisimulation anchored there.  The result
    may be empty.
    """
    atoms = sorted(set(src.valuation) | set(dst.valuation))

    def pv_agree(p: Point, q: Point) -> bool:
        return all((p in src.valuation.get(a, frozenset())) ==
                   (q in dst.valuation.get(a, frozenset())) for a in atoms)

    current = {
        (p, q)
        for p in points(src.frame) for q in points(dst.frame)
        if pv_agree(p, q)
    }
    changed = True
    while changed:
        changed = False
        for pair in sorted(current, key=lambda pq: (point_key(pq[0]), point_key(pq[1]))):
            if _pair_violations(src, dst, frozenset(current), pair, mode):
                current.discard(pair)
                changed = True
    return PointRelation(frozenset(current))


def bisimilar(src: Model, p: Point, dst: Model, q: Point, mode: str = "LF") -> bool:
    _require_valid_pairs(src, dst, [(p, q)])
    return (p, q) in greatest_bisimulation(src, dst, mode).pairs


def find_distinguishing_formula(src: Model, p: Point, dst: Model, q: Point,
                                mode: str = "LF", max_depth: int = 4) -> Formula | None:
    """Breadth-first search for a formula the two points disagree on.

    Searches depth by depth over formulas built from at most two atoms drawn
    from the valuations, collapsing formulas that already have the same
    extensions on both models (such formulas distinguish nothing a shallower
    representative does not, so the collapse preserves completeness per
    depth).  Returns None when depth max_depth cannot distinguish the points.
    """
    _require_valid_pairs(src, dst, [(p, q)])
    atoms = sorted(set(src.valuation) | set(dst.valuation))[:2] or ["p"]
    ev_src = Evaluator(src, mode=mode)
    ev_dst = Evaluator(dst, mode=mode)
    i = src.frame.point_index[p]
    j = dst.frame.point_index[q]

    ops = [Not, G, H, L] + ([F] if mode == "LF" else [])

    def signature(phi: Formula) -> tuple[int, int]:
        return ev_src.extension_mask(phi), ev_dst.extension_mask(phi)

    def distinguishes(sig: tuple[int, int]) -> bool:
        return (sig[0] >> i & 1) != (sig[1] >> j & 1)

    seen: set[tuple[int, int]] = set()
    levels: list[list[Formula]] = [[]]

    def consider(phi: Formula, level: list[Formula]) -> Formula | None:
        sig = signature(phi)
        if distinguishes(sig):
            return phi
        if sig not in seen:
            seen.add(sig)
            level.append(phi)
        return None

    for name in atoms:
        hit = consider(Atom(name), levels[0])
        if hit is not None:
            return hit

    for _depth in range(1, max_depth + 1):
        prev = levels[-1]
        shallower = [phi for lv in levels[:-1] for phi in lv]
        new: list[Formula] = []
        for op in ops:
            for phi in prev:
                hit = consider(op(phi), new)
                if hit is not None:
                    return hit
        for a in prev:
            for b in prev:
                hit = consider(And(a, b), new)
                if hit is not None:
                    return hit
        for a in prev:
            for b in shallower:
                for candidate in (And(a, b), And(b, a)):
                    hit = consider(candidate, new)
                    if hit is not None:
                        return hit
        if not new:
            break
        levels.append(new)
    return None
