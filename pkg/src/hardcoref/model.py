"""Best-link mention-pair model: features, linear scoring, latent perceptron.

An anaphor links to its highest-scoring preceding mention when that score
beats the null link, whose feature vector is empty (so it always scores 0).
"""
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .scoring import DIM_NAMES, LAYOUT_VERSION, score_pair

MODEL_FORMAT = "hardcoref-model/1"

BASE_FEATURES = (
    ["bias", "same_sentence", "mention_dist", "head_match", "head_mismatch", "ana_pronoun", "ante_pronoun"]
    + [f"sent_dist={d}" for d in ("0", "1", "2", "3+")]
    + [f"gender={a}" for a in ("match", "mismatch", "unknown")]
    + [f"number={a}" for a in ("match", "mismatch", "unknown")]
    + [f"roles={a}-{b}" for a in ("subj", "obj", "other") for b in ("subj", "obj", "other")]
)
SCHEMA_FEATURES = [f"schema:{name}" for name in DIM_NAMES]


class ModelError(ValueError):
    pass


def registry_for(with_schema):
    return list(BASE_FEATURES) + (SCHEMA_FEATURES if with_schema else [])


def _agreement(a, b):
    if a == "unknown" or b == "unknown":
        return "unknown"
    return "match" if a == b else "mismatch"


def featurize(u, v, doc, kb, with_schema=False, mask=None):
    """Sparse features for linking anaphor `u` to the earlier mention `v`."""
    if v.position >= u.position:
        raise ModelError(f"{doc.doc_id}: antecedent {v.idx} does not precede anaphor {u.idx}")
    sent_dist = u.sent - v.sent
    f = {
        "bias": 1.0,
        "same_sentence": float(sent_dist == 0),
        "mention_dist": min(u.idx - v.idx, 10) / 10.0,
        f"sent_dist={sent_dist if sent_dist < 3 else '3+'}": 1.0,
        f"gender={_agreement(u.gender, v.gender)}": 1.0,
        f"number={_agreement(u.number, v.number)}": 1.0,
        f"roles={v.role}-{u.role}": 1.0,
    }
    if not u.pronoun and not v.pronoun:
        f["head_match" if u.head_lemma == v.head_lemma else "head_mismatch"] = 1.0
    if u.pronoun:
        f["ana_pronoun"] = 1.0
    if v.pronoun:
        f["ante_pronoun"] = 1.0
    if with_schema:
        scores = score_pair(u, v, doc, kb, mask)
        for name, value in zip(SCHEMA_FEATURES, scores):
            f[name] = float(value)
    return f


@dataclass
class ModelWeights:
    registry: list
    weights: np.ndarray
    with_schema: bool = False
    layout_version: str = LAYOUT_VERSION
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if len(self.weights) != len(self.registry):
            raise ModelError("weight vector and feature registry differ in size")
        if not np.all(np.isfinite(self.weights)):
            raise ModelError("non-finite weights")
        self.index = {name: i for i, name in enumerate(self.registry)}

    @classmethod
    def zeros(cls, with_schema=False, **metadata):
        reg = registry_for(with_schema)
        return cls(reg, np.zeros(len(reg)), with_schema, metadata=metadata)

    def vector(self, features):
        """Dense vector in registry order; unregistered features are dropped."""
        x = np.zeros(len(self.registry))
        for name, value in features.items():
            i = self.index.get(name)
            if i is not None:
                x[i] = value
        return x

    def to_json(self):
        return json.dumps({
            "format": MODEL_FORMAT,
            "layout_version": self.layout_version,
            "with_schema": self.with_schema,
            "registry": self.registry,
            "weights": [float(x) for x in self.weights],
            "metadata": self.metadata,
        }, sort_keys=True, indent=1) + "\n"

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                d = json.load(fh)
        except FileNotFoundError:
            raise ModelError(f"model file {path} not found") from None
        if d.get("format") != MODEL_FORMAT:
            raise ModelError(f"{path}: not a {MODEL_FORMAT} file")
        if d["layout_version"] != LAYOUT_VERSION:
            raise ModelError(f"{path}: score layout {d['layout_version']} != {LAYOUT_VERSION}")
        return cls(d["registry"], d["weights"], d["with_schema"], d["layout_version"], d.get("metadata", {}))


def link_score(w, f):
    """w . f, exactly rounded so that zero-valued features never change it."""
    return math.fsum(w.weights[w.index[k]] * v for k, v in f.items() if v and k in w.index)


def _dot(weights, x):
    return math.fsum(weights * x)


def best_link(scores):
    """Best-left-link choice among candidate scores (index = candidate).

    Returns the index of the highest score if it beats the null link (0),
    else None; ties go to the closest (highest-index) candidate.
    """
    best, best_score = None, 0.0
    for j, s in enumerate(scores):
        if s > best_score or (best is not None and s == best_score):
            best, best_score = j, s
    return best


def doc_feature_matrices(doc, kb, registry_model, mask=None):
    """Per anaphor i, a (i, D) array of features for candidates 0..i-1."""
    ms = doc.mentions
    with_schema = registry_model.with_schema
    return [np.array([registry_model.vector(featurize(ms[i], ms[j], doc, kb, with_schema, mask))
                      for j in range(i)]).reshape(i, len(registry_model.registry))
            for i in range(len(ms))]


def train_blmp(docs, kb, with_schema=False, epochs=10, learning_rate=1.0, seed=0,
               mask=None, on_epoch=None):
    """Averaged latent best-link perceptron.

    For each anaphor the gold link is its best-scoring gold antecedent under
    the current weights (null if it starts a cluster); a mistake moves the
    weights toward the gold link's features and away from the predicted
    one's. `on_epoch(epoch, model)` sees the running averaged model.
    """
    docs = list(docs)
    if not any(d.has_gold for d in docs):
        raise ModelError("training data has no gold clusters")
    model = ModelWeights.zeros(with_schema)
    meta = {"epochs": epochs, "learning_rate": learning_rate, "seed": seed}
    if epochs <= 0:
        model.metadata = meta
        return model

    feats = [doc_feature_matrices(d, kb, model, mask) for d in docs]
    golds = [[d.gold_clusters[m.idx] for m in d.mentions] for d in docs]
    dim = len(model.registry)
    w = np.zeros(dim)
    wsum = np.zeros(dim)
    steps = 0
    rng = np.random.default_rng(seed)
    for epoch in range(epochs):
        for di in rng.permutation(len(docs)):
            gold = golds[di]
            for i, F in enumerate(feats[di]):
                scores = [_dot(w, F[j]) for j in range(i)]
                pred = best_link(scores)
                mates = [j for j in range(i) if gold[j] == gold[i]]
                g = None
                if mates:
                    g = max(reversed(mates), key=lambda j: scores[j])
                if pred != g:
                    delta = np.zeros(dim)
                    if g is not None:
                        delta += F[g]
                    if pred is not None:
                        delta -= F[pred]
                    w += learning_rate * delta
                wsum += w
                steps += 1
        if on_epoch is not None:
            on_epoch(epoch, ModelWeights(model.registry, wsum / max(steps, 1), with_schema, metadata=meta))
    avg = wsum / steps if steps else wsum
    return ModelWeights(model.registry, avg, with_schema, metadata=meta)
