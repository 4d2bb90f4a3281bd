import json
import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hardcoref.eval import antepre
from hardcoref.fixtures import make_document, synthetic_document
from hardcoref.infer import bll_decode
from hardcoref.kb import KnowledgeBase
from hardcoref.model import (BASE_FEATURES, SCHEMA_FEATURES, ModelError, ModelWeights, best_link, featurize,
                             link_score, registry_for, train_blmp)

DOC = make_document("m", ["The/DET dog/NOUN@a chased/VERB the/DET cat/NOUN@b ./PUNCT",
                          "The/DET dog/NOUN@a barked/VERB ./PUNCT"])


def test_head_match_features(empty_kb):
    f = featurize(DOC.mentions[2], DOC.mentions[0], DOC, empty_kb)
    assert f["head_match"] == 1.0 and f["sent_dist=1"] == 1.0
    same = make_document("s", ["The/DET dog/NOUN@a saw/VERB the/DET dog/NOUN@b ./PUNCT"])
    f = featurize(same.mentions[1], same.mentions[0], same, empty_kb)
    assert f["head_match"] == 1.0 and f["sent_dist=0"] == 1.0 and f["same_sentence"] == 1.0
    assert f["roles=subj-obj"] == 1.0


def test_schema_gate(empty_kb):
    plain = featurize(DOC.mentions[2], DOC.mentions[0], DOC, empty_kb)
    assert not any(k.startswith("schema:") for k in plain)
    sf = featurize(DOC.mentions[2], DOC.mentions[0], DOC, empty_kb, with_schema=True)
    assert [sf[k] for k in SCHEMA_FEATURES] == [0.0] * 18


def test_antecedent_must_precede(empty_kb):
    with pytest.raises(ModelError):
        featurize(DOC.mentions[0], DOC.mentions[2], DOC, empty_kb)


def test_link_score(empty_kb):
    f = featurize(DOC.mentions[2], DOC.mentions[0], DOC, empty_kb)
    w = ModelWeights.zeros()
    assert link_score(w, f) == 0.0
    w.weights[w.index["mention_dist"]] = 1.0
    assert link_score(w, f) == f["mention_dist"]


@given(st.lists(st.integers(-50, 50), min_size=len(BASE_FEATURES), max_size=len(BASE_FEATURES)),
       st.integers(0, 9999))
def test_link_score_matches_dot_oracle(weights, seed):
    rng = random.Random(seed)
    doc = synthetic_document(rng, 6)
    w = ModelWeights(registry_for(False), weights)
    kb = KnowledgeBase()
    for u in doc.mentions:
        for v in doc.mentions[:u.idx]:
            f = featurize(u, v, doc, kb)
            oracle = sum(weights[BASE_FEATURES.index(k)] * x for k, x in f.items())
            assert abs(link_score(w, f) - oracle) < 1e-9
            # integer weights keep every partial sum exact
            assert link_score(w, f) == math.fsum(w.weights * w.vector(f))


def test_best_link_ties():
    assert best_link([]) is None
    assert best_link([-1.0, 0.0]) is None
    assert best_link([2.0, 1.0, 2.0]) == 2
    assert best_link([0.5, 3.0, 1.0]) == 1


@given(st.lists(st.integers(-5, 5), max_size=8), st.floats(0.01, 100))
def test_best_link_scale_invariant(scores, c):
    assert best_link([c * s for s in scores]) == best_link(scores)


def test_zero_epochs_gives_zero_weights(empty_kb):
    m = train_blmp([DOC], empty_kb, epochs=0)
    assert not m.weights.any() and m.registry == registry_for(False)


def test_training_without_gold_fails(empty_kb):
    bare = make_document("n", ["The/DET dog/NOUN barked/VERB ./PUNCT"])
    with pytest.raises(ModelError):
        train_blmp([bare], empty_kb)


def test_separable_document_reaches_full_antepre(empty_kb):
    # head match separates the gold link from everything else
    doc = make_document("sep", ["The/DET dog/NOUN@a chased/VERB the/DET cat/NOUN@b ./PUNCT",
                                "It/PRON@a barked/VERB at/ADP the/DET dog/NOUN@a ./PUNCT"])
    history = []
    train_blmp([doc], empty_kb, epochs=5, on_epoch=lambda e, m: history.append(
        antepre([doc], [bll_decode(doc, m, empty_kb)])))
    assert history[-1] == 1.0


def test_training_is_deterministic(winograd_docs, fixture_kb):
    a = train_blmp(winograd_docs, fixture_kb, True, epochs=3, seed=7)
    b = train_blmp(winograd_docs, fixture_kb, True, epochs=3, seed=7)
    assert a.to_json() == b.to_json()


def test_save_load(tmp_path, winograd_docs, fixture_kb):
    m = train_blmp(winograd_docs, fixture_kb, True, epochs=2)
    m.save(tmp_path / "m.json")
    again = ModelWeights.load(tmp_path / "m.json")
    assert again.to_json() == m.to_json()
    assert np.array_equal(again.weights, m.weights)


def test_load_errors(tmp_path):
    with pytest.raises(ModelError):
        ModelWeights.load(tmp_path / "missing.json")
    m = json.loads(ModelWeights.zeros().to_json())
    m["layout_version"] = "S17"
    (tmp_path / "old.json").write_text(json.dumps(m))
    with pytest.raises(ModelError, match="layout"):
        ModelWeights.load(tmp_path / "old.json")
    with pytest.raises(ModelError):
        ModelWeights(["a", "b"], [1.0])
    with pytest.raises(ModelError):
        ModelWeights(["a"], [float("nan")])
