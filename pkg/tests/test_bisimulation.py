import pytest
from hypothesis import given, strategies as st

from itl.bisimulation import (
    PointRelation, bisimilar, check_bisimulation, find_distinguishing_formula,
    greatest_bisimulation,
)
from itl.catalog import (
    catalog_frames, f1_model, frame_chain2, frame_fork, frame_single,
    random_valuation,
)
from itl.documents import resolve_point
from itl.errors import InvalidPointError
from itl.formula import G, Atom, enumerate_formulas
from itl.generate import gen_random_model
from itl.morphisms import PointMap, pullback_valuation
from itl.semantics import eval_hist, eval_rel
from itl.structures import Model, Point, points


def pt(model_or_frame, moment, rep):
    frame = getattr(model_or_frame, "frame", model_or_frame)
    return resolve_point(frame, moment, rep)


def graph_of(f: PointMap) -> PointRelation:
    return PointRelation(frozenset(f.mapping.items()))


def collapse_models():
    fork, chain = frame_fork(), frame_chain2()
    f = PointMap({
        pt(fork, "r", "a"): pt(chain, "r", "a"),
        pt(fork, "a", "a"): pt(chain, "a", "a"),
        pt(fork, "b", "b"): pt(chain, "a", "a"),
    })
    dst = Model(chain, {"p": frozenset({pt(chain, "a", "a")})})
    src = Model(fork, pullback_valuation(dst.valuation, f))
    return src, dst, f


# ---------------------------------------------------------------------------
# checking
# ---------------------------------------------------------------------------

def test_identity_relation_is_a_bisimulation():
    model = f1_model()
    identity = PointRelation(frozenset((p, p) for p in points(model.frame)))
    anchor = (pt(model, "r", "a"), pt(model, "r", "a"))
    assert check_bisimulation(model, model, identity, anchor, "LF").ok


def test_pmorphism_graph_is_a_bisimulation():
    src, dst, f = collapse_models()
    anchor = (pt(src, "r", "a"), pt(dst, "r", "a"))
    assert check_bisimulation(src, dst, graph_of(f), anchor, "LF").ok


def test_nonleaf_related_to_leaf_fails_forward():
    chain = frame_chain2()
    model = Model(chain, {})
    relation = PointRelation(frozenset({(pt(chain, "r", "a"),
                                         pt(chain, "a", "a"))}))
    report = check_bisimulation(model, model, relation,
                                (pt(chain, "r", "a"), pt(chain, "a", "a")), "L")
    assert "G-f" in report.kinds()
    gf = next(v for v in report.violations if v.kind == "G-f")
    assert gf.witness["witness_point"] == "a/a"


def test_weak_future_back_failure_reported_with_witness():
    # dropping the b-side pair from the collapse graph leaves the source
    # history b untracked by any target history
    fork, chain = frame_fork(), frame_chain2()
    src, dst = Model(fork, {}), Model(chain, {})
    sparse = PointRelation(frozenset({
        (pt(fork, "r", "a"), pt(chain, "r", "a")),
        (pt(fork, "a", "a"), pt(chain, "a", "a")),
    }))
    report = check_bisimulation(src, dst, sparse,
                                (pt(fork, "r", "a"), pt(chain, "r", "a")), "LF")
    assert "F-b" in report.kinds()
    witness = next(v for v in report.violations if v.kind == "F-b").witness
    assert witness == {"pair": ["r/a", "r/a"], "history": "b"}
    # replay: every target history has a later point with no related later
    # point along the witness history
    from itl.structures import future_points

    q = pt(chain, "r", "a")
    futures_b = future_points(fork, "r", "b")
    for leaf in q.block:
        assert any(
            not any((r, r2) in sparse.pairs for r in futures_b)
            for r2 in future_points(chain, "r", leaf))


def test_anchor_condition_reported_separately():
    model = f1_model()
    identity = PointRelation(frozenset(
        (p, p) for p in points(model.frame) if p.moment != "r"))
    anchor = (pt(model, "r", "a"), pt(model, "r", "a"))
    report = check_bisimulation(model, model, identity, anchor, "L")
    assert report.kinds()[-1] == "B"


def test_invalid_points_rejected():
    model = f1_model()
    foreign = Point("zz", frozenset({"zz"}))
    relation = PointRelation(frozenset({(foreign, foreign)}))
    with pytest.raises(InvalidPointError):
        check_bisimulation(model, model, relation, (foreign, foreign), "L")


# ---------------------------------------------------------------------------
# the greatest bisimulation
# ---------------------------------------------------------------------------

def test_two_single_point_models_fully_related():
    single = Model(frame_single(), {})
    rel = greatest_bisimulation(single, single, "LF")
    assert len(rel.pairs) == 1


def test_chain_root_and_leaf_not_bisimilar():
    model = Model(frame_chain2(), {})
    rel = greatest_bisimulation(model, model, "LF")
    assert {(a.text(), b.text()) for a, b in rel.pairs} == \
        {("r/a", "r/a"), ("a/a", "a/a")}
    assert bisimilar(model, pt(model, "r", "a"), model, pt(model, "r", "a"))
    assert not bisimilar(model, pt(model, "r", "a"), model, pt(model, "a", "a"))


def test_greatest_contains_pmorphism_graph():
    src, dst, f = collapse_models()
    rel = greatest_bisimulation(src, dst, "LF")
    assert graph_of(f).pairs <= rel.pairs


def test_greatest_output_passes_check_at_every_anchor():
    src, dst, _ = collapse_models()
    rel = greatest_bisimulation(src, dst, "LF")
    for pair in rel.sorted_pairs():
        assert check_bisimulation(src, dst, rel, pair, "LF").ok


def test_readding_any_deleted_pair_breaks_a_condition():
    model = Model(frame_chain2(), {})
    rel = greatest_bisimulation(model, model, "L")
    everything = {(p, q) for p in points(model.frame)
                  for q in points(model.frame)}
    for pair in everything - rel.pairs:
        extended = PointRelation(rel.pairs | {pair})
        assert not check_bisimulation(model, model, extended, pair, "L").ok


def test_union_of_bisimulations_satisfies_pair_conditions():
    model = f1_model()
    identity = PointRelation(frozenset((p, p) for p in points(model.frame)))
    rel = greatest_bisimulation(model, model, "LF")
    union = PointRelation(identity.pairs | rel.pairs)
    anchor = (pt(model, "r", "a"), pt(model, "r", "a"))
    assert check_bisimulation(model, model, union, anchor, "LF").ok


@given(seed=st.integers(0, 60))
def test_greatest_bisimulation_matches_brute_force(seed):
    # oracle: the union of every relation whose pairs all satisfy the
    # per-pair conditions, found by enumerating all relations outright
    from itertools import combinations

    src = gen_random_model(seed, 1 + seed % 3, n_atoms=1)
    dst = gen_random_model(seed + 77, 1 + (seed + 1) % 3, n_atoms=1)
    sp, dp = points(src.frame), points(dst.frame)
    universe = [(p, q) for p in sp for q in dp]
    if len(universe) > 9:
        return
    satisfying = []
    for size in range(1, len(universe) + 1):
        for chosen in combinations(universe, size):
            rel = PointRelation(frozenset(chosen))
            anchor = next(iter(chosen))
            report = check_bisimulation(src, dst, rel, anchor, "LF")
            if all(v.kind == "B" for v in report.violations):
                satisfying.append(rel.pairs)
    expected = frozenset().union(*satisfying) if satisfying else frozenset()
    assert greatest_bisimulation(src, dst, "LF").pairs == expected


@given(seed=st.integers(0, 500))
def test_greatest_bisimulation_pairs_agree_on_small_corpus(seed):
    src = gen_random_model(seed, 1 + seed % 4, n_atoms=1)
    dst = gen_random_model(seed + 1, 1 + (seed + 1) % 4, n_atoms=1)
    rel = greatest_bisimulation(src, dst, "LF")
    corpus = enumerate_formulas(("p0",), 2, "LF")
    for p, q in rel.pairs:
        for phi in corpus:
            assert eval_hist(src, p, phi) == eval_hist(dst, q, phi)


# ---------------------------------------------------------------------------
# distinguishing formulas
# ---------------------------------------------------------------------------

def test_bisimilar_points_cannot_be_distinguished():
    src, dst, f = collapse_models()
    phi = find_distinguishing_formula(src, pt(src, "r", "a"),
                                      dst, pt(dst, "r", "a"),
                                      mode="LF", max_depth=4)
    assert phi is None


def test_root_vs_leaf_distinguished_by_successor_formula():
    model = Model(frame_chain2(), {})
    phi = find_distinguishing_formula(model, pt(model, "r", "a"),
                                      model, pt(model, "a", "a"),
                                      mode="L", max_depth=2)
    assert phi == G(Atom("p"))
    assert eval_hist(model, pt(model, "r", "a"), phi) != \
        eval_hist(model, pt(model, "a", "a"), phi)


def test_atom_difference_found_at_depth_zero():
    frame = frame_fork()
    a = pt(frame, "a", "a")
    src = Model(frame, {"p": frozenset({a})})
    dst = Model(frame, {"p": frozenset()})
    phi = find_distinguishing_formula(src, a, dst, a, mode="L", max_depth=3)
    assert phi == Atom("p")


@given(seed=st.integers(0, 300))
def test_found_formulas_genuinely_distinguish(seed):
    frames = list(catalog_frames().values())
    frame_a = frames[seed % len(frames)]
    frame_b = frames[(seed // 7) % len(frames)]
    src = Model(frame_a, random_valuation(seed, frame_a, atoms=("p",)))
    dst = Model(frame_b, random_valuation(seed + 3, frame_b, atoms=("p",)))
    p = points(frame_a)[seed % len(points(frame_a))]
    q = points(frame_b)[(seed // 3) % len(points(frame_b))]
    phi = find_distinguishing_formula(src, p, dst, q, mode="LF", max_depth=3)
    # a None result asserts nothing about bisimilarity (no converse is claimed)
    if phi is not None:
        assert eval_hist(src, p, phi) != eval_hist(dst, q, phi)
        assert eval_rel(src, p, phi) != eval_rel(dst, q, phi)
        assert not bisimilar(src, p, dst, q, mode="LF")
