"""Structure-preserving point maps between frames and models.

A point map is total on the source frame's points and is checked against
forward and back conditions for the derived relations: the forward condition
and back condition for the strict order (G-f, G-b), the back condition for
its converse (H-b), and both for the same-moment relation (L-f, L-b).  In
mode "LF" two further conditions (F-f, F-b) tie the histories of a class to
the histories of its image class, matching the weak-future operator.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import limits
from .errors import BoundExceededError
from .structures import (
    Frame, Model, Point, Report, Violation,
    future_points, point_key, points, precedes, same_moment,
)

FRAME_CONDITIONS = ("G-f", "G-b", "H-b", "L-f", "L-b")
LF_CONDITIONS = ("F-f", "F-b")


def conditions_for(mode: str, model_level: bool = False) -> tuple[str, ...]:
    """The conditions a map check covers, in reporting order."""
    out = FRAME_CONDITIONS + (LF_CONDITIONS if mode == "LF" else ())
    return out + (("PV",) if model_level else ())


@dataclass(frozen=True, eq=False)
class PointMap:
    """A total function from source points to target points."""

    mapping: dict[Point, Point]

    def __call__(self, p: Point) -> Point:
        return self.mapping[p]

    def image(self) -> frozenset[Point]:
        return frozenset(self.mapping.values())

    def is_surjective_onto(self, dst: Frame) -> bool:
        return self.image() == frozenset(points(dst))


def _require_total(src: Frame, dst: Frame, f: PointMap) -> None:
    src_pts = set(points(src))
    missing = src_pts - set(f.mapping)
    if missing:
        sample = min(missing, key=point_key)
        raise ValueError(f"map is not total: no image for {sample.text()}")
    extra = set(f.mapping) - src_pts
    if extra:
        sample = min(extra, key=point_key)
        raise ValueError(f"map defined on foreign point {sample.text()}")
    dst_index = dst.point_index
    for q in f.mapping.values():
        if q not in dst_index:
            raise ValueError(f"image {q.text()} is not a point of the target frame")


def _pair_text(p: Point, q: Point) -> list[str]:
    return [p.text(), q.text()]


def check_frame_pmorphism(src: Frame, dst: Frame, f: PointMap,
                          mode: str = "LF") -> Report:
    """Per-condition check; at most one minimal witness per failed condition."""
    _require_total(src, dst, f)
    src_pts = sorted(points(src), key=point_key)
    dst_pts = sorted(points(dst), key=point_key)
    violations = []

    def fail(kind: str, message: str, witness: dict) -> None:
        violations.append(Violation(kind, message, witness))

    # G-f: the order is carried forward.
    done = False
    for p in src_pts:
        for q in src_pts:
            if precedes(src, p, q) and not precedes(dst, f(p), f(q)):
                fail("G-f",
                     f"{p.text()} precedes {q.text()} but the images do not",
                     {"pair": _pair_text(p, q),
                      "images": _pair_text(f(p), f(q))})
                done = True
                break
        if done:
            break

    # G-b: successors of an image are hit by images of successors.
    done = False
    for p in src_pts:
        for q2 in dst_pts:
            if precedes(dst, f(p), q2):
                if not any(precedes(src, p, q) and f(q) == q2 for q in src_pts):
                    fail("G-b",
                         f"{q2.text()} succeeds the image of {p.text()} but no "
                         f"successor of {p.text()} maps onto it",
                         {"point": p.text(), "target": q2.text()})
                    done = True
                    break
        if done:
            break

    # H-b: predecessors of an image are hit by images of predecessors.
    done = False
    for p in src_pts:
        for q2 in dst_pts:
            if precedes(dst, q2, f(p)):
                if not any(precedes(src, q, p) and f(q) == q2 for q in src_pts):
                    fail("H-b",
                         f"{q2.text()} precedes the image of {p.text()} but no "
                         f"predecessor of {p.text()} maps onto it",
                         {"point": p.text(), "target": q2.text()})
                    done = True
                    break
        if done:
            break

    # L-f: sharing a moment is carried forward.
    done = False
    for p in src_pts:
        for q in src_pts:
            if same_moment(src, p, q) and not same_moment(dst, f(p), f(q)):
                fail("L-f",
                     f"{p.text()} and {q.text()} share a moment but their "
                     f"images do not",
                     {"pair": _pair_text(p, q),
                      "images": _pair_text(f(p), f(q))})
                done = True
                break
        if done:
            break

    # L-b: points at the image's moment are hit from the source moment.
    done = False
    for p in src_pts:
        for q2 in dst_pts:
            if same_moment(dst, f(p), q2):
                if not any(same_moment(src, p, q) and f(q) == q2 for q in src_pts):
                    fail("L-b",
                         f"{q2.text()} shares a moment with the image of "
                         f"{p.text()} but is not the image of any point at "
                         f"{p.moment!r}",
                         {"point": p.text(), "target": q2.text()})
                    done = True
                    break
        if done:
            break

    if mode == "LF":
        violations.extend(_weak_future_violations(src, dst, f, src_pts))
    return Report(tuple(violations))


def _weak_future_violations(src: Frame, dst: Frame, f: PointMap,
                            src_pts) -> list[Violation]:
    out = []

    def matches(p: Point, h: str, q2: Point, h2: str) -> bool:
        # Every later point along h maps onto some later point along h2.
        futures2 = set(future_points(dst, q2.moment, h2))
        for r in future_points(src, p.moment, h):
            if f(r) not in futures2:
                return False
        return True

    # F-f: each history of the image class is covered by some source history.
    for p in src_pts:
        q2 = f(p)
        for h2 in sorted(q2.block):
            if not any(matches(p, h, q2, h2) for h in sorted(p.block)):
                out.append(Violation(
                    "F-f",
                    f"no history of {p.text()} tracks target history {h2!r} "
                    f"of {q2.text()}",
                    {"point": p.text(), "target_history": h2}))
                break
        else:
            continue
        break

    def covers(p: Point, h: str, q2: Point, h2: str) -> bool:
        # Every later point along h2 is the image of a later point along h.
        images = {f(r) for r in future_points(src, p.moment, h)}
        for r2 in future_points(dst, q2.moment, h2):
            if r2 not in images:
                return False
        return True

    # F-b: each source history is tracked by some history of the image class.
    for p in src_pts:
        q2 = f(p)
        for h in sorted(p.block):
            if not any(covers(p, h, q2, h2) for h2 in sorted(q2.block)):
                out.append(Violation(
                    "F-b",
                    f"history {h!r} of {p.text()} is tracked by no history "
                    f"of {q2.text()}",
                    {"point": p.text(), "history": h}))
                break
        else:
            continue
        break
    return out


def check_model_pmorphism(src: Model, dst: Model, f: PointMap,
                          mode: str = "LF") -> Report:
    """Frame conditions plus valuation agreement (PV) on every atom in use."""
    report = check_frame_pmorphism(src.frame, dst.frame, f, mode)
    violations = list(report.violations)
    atoms = sorted(set(src.valuation) | set(dst.valuation))
    done = False
    for p in sorted(points(src.frame), key=point_key):
        for atom in atoms:
            here = p in src.valuation.get(atom, frozenset())
            there = f(p) in dst.valuation.get(atom, frozenset())
            if here != there:
                violations.append(Violation(
                    "PV",
                    f"{p.text()} and its image {f(p).text()} disagree on "
                    f"atom {atom!r}",
                    {"point": p.text(), "atom": atom}))
                done = True
                break
        if done:
            break
    return Report(tuple(violations))


def check_set_characterization(src: Frame, dst: Frame, f: PointMap) -> bool:
    """Image of each relational neighborhood equals the neighborhood of the image.

    Checked for the strict order, its converse, and the same-moment relation;
    an independent characterization of the mode-L map conditions.
    """
    _require_total(src, dst, f)
    src_pts = points(src)
    dst_pts = points(dst)

    relations = (
        lambda frame, a, b: precedes(frame, a, b),
        lambda frame, a, b: precedes(frame, b, a),
        same_moment,
    )
    for p in src_pts:
        for rel in relations:
            image_side = {f(q) for q in src_pts if rel(src, p, q)}
            target_side = {q2 for q2 in dst_pts if rel(dst, f(p), q2)}
            if image_side != target_side:
                return False
    return True


def search_pmorphisms(src: Frame, dst: Frame, mode: str = "LF",
                      surjective: bool = False, bound: int | None = None):
    """Enumerate the total maps passing check_frame_pmorphism, in canonical order.

    Backtracks over assignments in canonical point order, pruning as soon as
    an already-assigned pair violates a forward condition.
    """
    bound = limits.resolve(bound, limits.DEFAULT_SEARCH_BOUND)
    src_pts = sorted(points(src), key=point_key)
    dst_pts = sorted(points(dst), key=point_key)
    if len(src_pts) > bound or len(dst_pts) > bound:
        raise BoundExceededError(
            f"search over {len(src_pts)} -> {len(dst_pts)} points exceeds the "
            f"bound of {bound} points per side")

    n = len(src_pts)
    assignment: list[Point] = []

    def compatible(i: int, candidate: Point) -> bool:
        p = src_pts[i]
        for j in range(i):
            q, fq = src_pts[j], assignment[j]
            if precedes(src, p, q) and not precedes(dst, candidate, fq):
                return False
            if precedes(src, q, p) and not precedes(dst, fq, candidate):
                return False
            if same_moment(src, p, q) and not same_moment(dst, candidate, fq):
                return False
        return True

    def emit():
        mapping = dict(zip(src_pts, assignment))
        candidate = PointMap(mapping)
        if surjective and not candidate.is_surjective_onto(dst):
            return None
        if check_frame_pmorphism(src, dst, candidate, mode).ok:
            return candidate
        return None

    def walk(i: int):
        if i == n:
            found = emit()
            if found is not None:
                yield found
            return
        if surjective:
            unhit = len(set(dst_pts) - set(assignment))
            if unhit > n - i:
                return
        for candidate in dst_pts:
            if compatible(i, candidate):
                assignment.append(candidate)
                yield from walk(i + 1)
                assignment.pop()

    yield from walk(0)


def pullback_valuation(dst_valuation: dict[str, frozenset[Point]],
                       f: PointMap) -> dict[str, frozenset[Point]]:
    """Preimage valuation: a source point gets an atom iff its image has it.

    The resulting model pair satisfies condition PV by construction.
    """
    return {
        atom: frozenset(p for p, q in f.mapping.items() if q in pts)
        for atom, pts in dst_valuation.items()
    }
