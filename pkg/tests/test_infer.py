import math

import pytest

from hardcoref.fixtures import make_document
from hardcoref.infer import (SYSTEMS, InfeasibleConstraints, LinkAssignment, SchemaConstraint, best_left_links,
                             bll_decode, generate_constraints, ilp_decode, knowledge_score, objective_of,
                             read_predictions, run_system, solve_links, write_predictions)
from hardcoref.kb import KnowledgeBase, PolarityLexicon, Type1Store
from hardcoref.model import ModelError, ModelWeights, train_blmp

FISH = make_document("f", ["The/DET fish/NOUN@a ate/VERB the/DET worm/NOUN@b because/SCONJ "
                           "it/PRON@a! was/AUX hungry/ADJ ./PUNCT"])
BEAT = make_document("b", ["Sam/PROPN@a beat/VERB Wendy/PROPN@b because/SCONJ he/PRON@a! "
                           "trained/VERB hard/ADV ./PUNCT"])
DOGS = make_document("d", ["The/DET dog/NOUN@a chased/VERB the/DET cat/NOUN@b ./PUNCT",
                           "The/DET dog/NOUN@a barked/VERB ./PUNCT"])


def force(u, v):
    return SchemaConstraint("force", u, v)


def forbid(u, v):
    return SchemaConstraint("forbid", u, v)


def test_all_scores_below_null_gives_singletons():
    scores = [[], [-1.0], [-0.5, 0.0]]
    assert best_left_links(scores) == [None, None, None]
    assert solve_links(scores) == ([None, None, None], 0.0)


def test_hand_weights(empty_kb):
    w = ModelWeights.zeros()
    w.weights[w.index["bias"]] = -1.0
    w.weights[w.index["head_match"]] = 3.0
    # dog->dog scores -1 + 3, every other pair -1
    a = bll_decode(DOGS, w, empty_kb)
    assert a.links == [None, None, 0]
    assert a.objective == 2.0
    assert a.clusters == [[0, 2], [1]]
    assert ilp_decode(DOGS, w, empty_kb).links == a.links


def test_force_overrides_model():
    scores = [[], [5.0], [4.0, 1.0]]
    assert solve_links(scores)[0] == [None, 0, 0]
    links, value = solve_links(scores, [force(2, 1)])
    assert links == [None, 0, 1] and value == 6.0


def test_forbid_removes_choice():
    scores = [[], [5.0], [4.0, 1.0]]
    assert solve_links(scores, [forbid(2, 0)])[0] == [None, 0, 1]
    assert solve_links(scores, [forbid(2, 0), forbid(2, 1)])[0] == [None, 0, None]


@pytest.mark.parametrize("constraints", [
    [force(2, 1), forbid(2, 1)],
    [force(2, 1), force(2, 0)],
    [force(1, 2)],
    [SchemaConstraint("maybe", 2, 1)],
])
def test_infeasible_constraints(constraints):
    with pytest.raises((InfeasibleConstraints, ValueError)):
        solve_links([[], [1.0], [1.0, 1.0]], constraints)


def test_ties_prefer_null_then_closest():
    assert solve_links([[], [0.0], [2.0, 2.0]])[0] == [None, None, 1]


def test_no_knowledge_no_constraints(empty_kb):
    assert generate_constraints(FISH, empty_kb) == []


def test_force_from_type1_margin():
    kb = KnowledgeBase(type1=Type1Store({("be", "subj", "fish", "hungry"): 100}))
    (c,) = generate_constraints(FISH, kb, tau=1.0)
    assert (c.kind, c.anaphor, c.antecedent) == ("force", 2, 0)
    assert c.margin == math.log(100)
    assert generate_constraints(FISH, kb, tau=5.0) == []


def test_forbid_from_polarity():
    kb = KnowledgeBase(polarity=PolarityLexicon({"beat": "+", "train": "+"}))
    (c,) = generate_constraints(BEAT, kb)
    assert (c.kind, c.anaphor, c.antecedent) == ("forbid", 2, 1)


def test_knowledge_score_weights():
    vec = [0.0] * 18
    vec[0], vec[4], vec[11] = 2.0, 1.5, 9.0
    assert knowledge_score(vec) == 3.5
    assert knowledge_score(vec, {11: 0.5}) == 4.5


def test_prediction_file_round_trip(tmp_path):
    preds = [LinkAssignment("a", [None, 0, None, 1]), LinkAssignment("b", [])]
    write_predictions(preds, tmp_path / "p.jsonl")
    again = read_predictions(tmp_path / "p.jsonl")
    assert again == preds
    assert again[0].to_dict()["clusters"] == [[0, 1, 3], [2]]


def test_objective_of():
    assert objective_of([[], [1.5], [0.25, -3.0]], [None, 0, 0]) == 1.75


@pytest.fixture(scope="module")
def models(winograd_docs, fixture_kb):
    return {"base": train_blmp(winograd_docs, fixture_kb, False, epochs=3),
            "schema": train_blmp(winograd_docs, fixture_kb, True, epochs=3)}


def test_system_dispatch(winograd_docs, fixture_kb, models):
    illinois = run_system("Illinois", winograd_docs, models, fixture_kb)
    assert illinois == [bll_decode(d, models["base"], fixture_kb) for d in winograd_docs]
    assert run_system("IlliCons", winograd_docs, models, fixture_kb) == illinois
    with pytest.raises(ModelError):
        run_system("KnowFeat", winograd_docs, {"base": models["base"]}, fixture_kb)
    with pytest.raises(ModelError):
        run_system("KnowFeat", winograd_docs, {"schema": models["base"]}, fixture_kb)
    with pytest.raises(ValueError):
        run_system("Best", winograd_docs, models, fixture_kb)
    assert set(SYSTEMS) == {"Illinois", "IlliCons", "KnowFeat", "KnowCons", "KnowComb"}


def test_knowcons_differs_only_where_constraints_fire(winograd_docs, fixture_kb, models):
    cons = run_system("KnowCons", winograd_docs, models, fixture_kb)
    plain = run_system("IlliCons", winograd_docs, models, fixture_kb)
    for doc, a, b in zip(winograd_docs, cons, plain):
        touched = {c.anaphor for c in generate_constraints(doc, fixture_kb)}
        changed = {u for u, (x, y) in enumerate(zip(a.links, b.links)) if x != y}
        assert changed <= touched
