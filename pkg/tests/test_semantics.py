import pytest
from hypothesis import given, strategies as st

from itl.catalog import (
    catalog_frames, f1_model, frame_fork, frame_fork_split,
    random_valuation, small_catalog_frames,
)
from itl.documents import resolve_point
from itl.errors import BoundExceededError, InvalidPointError, LanguageError
from itl.formula import parse, random_formula
from itl.generate import gen_random_model
from itl.semantics import (
    Evaluator, eval_hist, eval_rel, frame_sat, frame_valid, model_sat,
    model_valid,
)
from itl.structures import Model, Point, points
from oracles import naive_eval


def fork_point(model_or_frame, moment, rep):
    frame = getattr(model_or_frame, "frame", model_or_frame)
    return resolve_point(frame, moment, rep)


# ---------------------------------------------------------------------------
# the separation example and other frozen cases
# ---------------------------------------------------------------------------

def test_f1_weak_vs_strong_future():
    model = f1_model()
    root = fork_point(model, "r", "a")
    for evaluate in (eval_hist, eval_rel):
        assert evaluate(model, root, parse("f p"))
        assert not evaluate(model, root, parse("F p"))
    # the oracle agrees
    assert naive_eval(model, root, parse("f p"))
    assert not naive_eval(model, root, parse("F p"))


def test_leaf_vacuity():
    model = f1_model()
    leaf = fork_point(model, "a", "a")
    assert eval_hist(model, leaf, parse("G q"))
    assert not eval_hist(model, leaf, parse("F q"))


def test_rel_successor_witness():
    model = f1_model()
    root = fork_point(model, "r", "a")
    assert not eval_rel(model, root, parse("G ~p"))


def test_rel_class_quantification():
    frame = frame_fork_split()
    ra = fork_point(frame, "r", "a")
    rb = fork_point(frame, "r", "b")
    model = Model(frame, {"p": frozenset({ra, rb})})
    assert eval_rel(model, ra, parse("L p"))
    assert eval_hist(model, ra, parse("L p"))
    thinner = Model(frame, {"p": frozenset({ra})})
    assert not eval_rel(thinner, ra, parse("L p"))


def test_past_vacuity_at_minimal_points():
    model = f1_model()
    root = fork_point(model, "r", "a")
    assert eval_hist(model, root, parse("H q"))
    assert eval_rel(model, root, parse("H q"))


def test_model_valid_tautology():
    model = f1_model()
    assert model_valid(model, parse("p | ~p"))


def test_model_sat_witnesses():
    model = f1_model()
    assert model_sat(model, parse("p")) == fork_point(model, "a", "a")
    assert not model_valid(model, parse("p"))
    assert model_sat(model, parse("F p")) is None


def test_eval_errors():
    model = f1_model()
    root = fork_point(model, "r", "a")
    with pytest.raises(LanguageError):
        eval_hist(model, root, parse("F p"), mode="L")
    foreign = Point("r", frozenset({"zz"}))
    with pytest.raises(InvalidPointError):
        eval_hist(model, foreign, parse("p"))


# ---------------------------------------------------------------------------
# agreement with the brute-force oracle and between the two routes
# ---------------------------------------------------------------------------

@given(seed=st.integers(0, 20_000))
def test_both_routes_match_the_naive_oracle(seed):
    model = gen_random_model(seed, 1 + seed % 5, branching=3,
                             indist_policy="coarsened", n_atoms=2)
    phi = random_formula(seed, 3, ("p0", "p1"), mode="LF")
    for point in points(model.frame):
        expected = naive_eval(model, point, phi)
        assert eval_hist(model, point, phi) == expected
        assert eval_rel(model, point, phi) == expected


@given(seed=st.integers(0, 20_000))
def test_hist_equals_rel_on_random_models(seed):
    model = gen_random_model(seed, 1 + seed % 6, branching=3, n_atoms=2)
    phi = random_formula(seed + 1, 4, ("p0", "p1"), mode="L")
    hist = Evaluator(model, relational=False, mode="L")
    rel = Evaluator(model, relational=True, mode="L")
    assert hist.extension_mask(phi) == rel.extension_mask(phi)


def test_abbreviation_theorems_on_f1():
    model = f1_model()
    for point in points(model.frame):
        for surface, expansion in (("P p", "~H ~p"), ("f p", "~G ~p"),
                                   ("M p", "~L ~p"), ("g p", "~F ~p")):
            assert eval_hist(model, point, parse(surface)) == \
                eval_hist(model, point, parse(expansion))


# ---------------------------------------------------------------------------
# frame validity
# ---------------------------------------------------------------------------

def test_frame_valid_tautology_everywhere():
    for name, frame in small_catalog_frames().items():
        assert frame_valid(frame, parse("G (p -> p)")), name


def test_class_box_is_reflexive():
    for name, frame in small_catalog_frames().items():
        assert frame_valid(frame, parse("L p -> p")), name


def test_atoms_do_not_spread_across_a_class():
    frame = frame_fork_split()
    assert not frame_valid(frame, parse("p -> L p"))
    found = frame_sat(frame, parse("p & ~L p"))
    assert found is not None
    valuation, witness = found
    assert witness in valuation["p"]


def test_frame_valid_bound():
    frame = catalog_frames()["wide"]  # 5 points
    phi = parse("p & q & r & s & t")  # 25 > 20
    with pytest.raises(BoundExceededError):
        frame_valid(frame, phi)
    with pytest.raises(BoundExceededError):
        frame_sat(frame, phi)


def test_frame_valid_bound_env_override(monkeypatch):
    frame = catalog_frames()["wide"]
    phi = parse("p & q & r & s & t")
    monkeypatch.setenv("ITL_MAX_ENUM", "25")
    assert not frame_valid(frame, phi)
    monkeypatch.setenv("ITL_MAX_ENUM", "10")
    with pytest.raises(BoundExceededError):
        frame_valid(frame, phi)
    # explicit argument beats the environment
    assert not frame_valid(frame, phi, max_enum=30)


def test_frame_valid_no_atoms_edge_case():
    frame = frame_fork()
    assert frame_valid(frame, parse("G (p | ~p) & H (p | ~p)"))


@given(seed=st.integers(0, 300))
def test_frame_validity_implies_model_validity(seed):
    frames = list(small_catalog_frames().values())
    frame = frames[seed % len(frames)]
    phi = random_formula(seed, 2, ("p",), mode="L")
    if frame_valid(frame, phi):
        model = Model(frame, random_valuation(seed, frame, atoms=("p",)))
        assert model_valid(model, phi)


def test_points_without_successors_satisfy_all_boxes():
    model = f1_model()
    for point in points(model.frame):
        if not any(model.frame.rel_successor_masks[
                model.frame.point_index[point]] >> i & 1
                for i in range(len(points(model.frame)))):
            assert eval_hist(model, point, parse("G (p & ~p)"))
