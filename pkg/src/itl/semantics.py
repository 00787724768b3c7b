"""Model checking under the two presentations of the semantics.

The clause-by-clause ("hist") evaluator quantifies over histories of the
current class and moments along them; the relational ("rel") evaluator
quantifies over the derived point relations instead.  The two provably agree
on G/H/L; F is always evaluated by its history clause, which is the only one
given for it.

Extensions (the set of points where a subformula holds) are computed bottom
up as bitmasks over the frame's canonical point order, which realizes the
per-(point, subformula) memoization within one evaluation.
"""

from __future__ import annotations

from itertools import product

from . import limits
from .errors import BoundExceededError, InvalidPointError, LanguageError
from .formula import And, Atom, F, Formula, G, H, L, Not, atoms_of, check_mode, contains_f
from .structures import Frame, Model, Point


class Evaluator:
    """Evaluates formulas on one model under one route (hist or rel)."""

    def __init__(self, model: Model, relational: bool = False, mode: str = "LF",
                 atom_masks: dict[str, int] | None = None):
        check_mode(mode)
        frame = model.frame
        self.model = model
        self.mode = mode
        self.relational = relational
        self._n = len(frame.point_list)
        self._full = frame.full_mask
        self._index = frame.point_index
        if relational:
            self._g = frame.rel_successor_masks
            self._h = frame.rel_predecessor_masks
            self._l = frame.rel_same_moment_masks
        else:
            self._g = frame.hist_future_masks
            self._h = frame.hist_past_masks
            self._l = frame.hist_class_masks
        self._chains = frame.future_chains
        if atom_masks is None:
            atom_masks = {
                atom: frame.mask_of(pts) for atom, pts in model.valuation.items()
            }
        self._atom_masks = atom_masks
        self._memo: dict[Formula, int] = {}

    def extension_mask(self, formula: Formula) -> int:
        memo = self._memo
        cached = memo.get(formula)
        if cached is not None:
            return cached
        if isinstance(formula, Atom):
            out = self._atom_masks.get(formula.name, 0)
        elif isinstance(formula, Not):
            out = self._full ^ self.extension_mask(formula.sub)
        elif isinstance(formula, And):
            out = self.extension_mask(formula.left) & self.extension_mask(formula.right)
        elif isinstance(formula, G):
            out = self._box(self._g, self.extension_mask(formula.sub))
        elif isinstance(formula, H):
            out = self._box(self._h, self.extension_mask(formula.sub))
        elif isinstance(formula, L):
            out = self._box(self._l, self.extension_mask(formula.sub))
        elif isinstance(formula, F):
            if self.mode == "L":
                raise LanguageError("'F' is not in language L")
            out = self._weak_future(self.extension_mask(formula.sub))
        else:
            raise TypeError(f"not a formula: {formula!r}")
        memo[formula] = out
        return out

    def _box(self, targets, sub_mask: int) -> int:
        missing = self._full ^ sub_mask
        out = 0
        bit = 1
        for i in range(self._n):
            if targets[i] & missing == 0:
                out |= bit
            bit <<= 1
        return out

    def _weak_future(self, sub_mask: int) -> int:
        out = 0
        bit = 1
        for i in range(self._n):
            for chain in self._chains[i]:
                if chain & sub_mask == 0:
                    break
            else:
                out |= bit
            bit <<= 1
        return out

    def extension(self, formula: Formula) -> frozenset[Point]:
        mask = self.extension_mask(formula)
        pts = self.model.frame.point_list
        return frozenset(pts[i] for i in range(self._n) if mask >> i & 1)

    def holds(self, point: Point, formula: Formula) -> bool:
        i = self._index.get(point)
        if i is None:
            raise InvalidPointError(f"{point.text()} is not a point of the model")
        return bool(self.extension_mask(formula) >> i & 1)


def _check_formula_mode(formula: Formula, mode: str) -> None:
    check_mode(mode)
    if mode == "L" and contains_f(formula):
        raise LanguageError("'F' is not in language L")


def eval_hist(model: Model, point: Point, formula: Formula, mode: str = "LF") -> bool:
    """Truth at a point by the history-quantifying clauses."""
    _check_formula_mode(formula, mode)
    return Evaluator(model, relational=False, mode=mode).holds(point, formula)


def eval_rel(model: Model, point: Point, formula: Formula, mode: str = "LF") -> bool:
    """Truth at a point quantifying over the derived point relations."""
    _check_formula_mode(formula, mode)
    return Evaluator(model, relational=True, mode=mode).holds(point, formula)


def model_valid(model: Model, formula: Formula, mode: str = "LF") -> bool:
    """True when the formula holds at every point of the model."""
    _check_formula_mode(formula, mode)
    ev = Evaluator(model, mode=mode)
    return ev.extension_mask(formula) == model.frame.full_mask


def model_sat(model: Model, formula: Formula, mode: str = "LF") -> Point | None:
    """The canonically first point satisfying the formula, if any."""
    _check_formula_mode(formula, mode)
    ev = Evaluator(model, mode=mode)
    mask = ev.extension_mask(formula)
    for i, p in enumerate(model.frame.point_list):
        if mask >> i & 1:
            return p
    return None


def _valuation_space(frame: Frame, formula: Formula, max_enum: int | None):
    atoms = sorted(atoms_of(formula))
    n = len(frame.point_list)
    bound = limits.resolve(max_enum, limits.DEFAULT_VALUATION_BOUND)
    if n * len(atoms) > bound:
        raise BoundExceededError(
            f"enumerating valuations needs 2**{n * len(atoms)} cases, "
            f"above the bound 2**{bound}")
    return atoms, n


def _extension_under(frame: Frame, atom_masks: dict[str, int],
                     formula: Formula, mode: str) -> int:
    ev = Evaluator(Model(frame, {}), mode=mode, atom_masks=atom_masks)
    return ev.extension_mask(formula)


def frame_valid(frame: Frame, formula: Formula, mode: str = "LF",
                max_enum: int | None = None) -> bool:
    """Exact frame validity by enumerating all valuations of the formula's atoms."""
    _check_formula_mode(formula, mode)
    atoms, n = _valuation_space(frame, formula, max_enum)
    full = frame.full_mask
    for assignment in product(range(1 << n), repeat=len(atoms)):
        masks = dict(zip(atoms, assignment))
        if _extension_under(frame, masks, formula, mode) != full:
            return False
    return True


def frame_sat(frame: Frame, formula: Formula, mode: str = "LF",
              max_enum: int | None = None):
    """First (valuation, point) satisfying the formula in the frame, or None.

    Valuations are enumerated in increasing order of the atom masks over the
    canonical point order, so the witness is deterministic.
    """
    _check_formula_mode(formula, mode)
    atoms, n = _valuation_space(frame, formula, max_enum)
    pts = frame.point_list
    for assignment in product(range(1 << n), repeat=len(atoms)):
        masks = dict(zip(atoms, assignment))
        ext = _extension_under(frame, masks, formula, mode)
        if ext:
            point = next(pts[i] for i in range(n) if ext >> i & 1)
            valuation = {
                a: frozenset(pts[i] for i in range(n) if m >> i & 1)
                for a, m in masks.items()
            }
            return valuation, point
    return None
