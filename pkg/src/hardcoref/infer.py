"""Decoding: best-left-link and exact 0-1 ILP with schema constraints.

The ILP maximizes sum_{v<u} score(u, v) * y[u][v] subject to each anaphor
taking at most one antecedent, plus force/forbid constraints compiled from
the knowledge base. Clusters are the transitive closure of the links.
"""
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .docmodel import candidate_antecedents
from .model import ModelError, _dot, best_link, doc_feature_matrices
from .scoring import GIGA1, GIGA2, WIKI_LOG, Polarity, doc_context, score_pair

# variant -> (schema features in learning, inference method, schema constraints)
SYSTEMS = {
    "Illinois": (False, "bll", False),
    "IlliCons": (False, "ilp", False),
    "KnowFeat": (True, "bll", False),
    "KnowCons": (False, "ilp", True),
    "KnowComb": (True, "ilp", True),
}

DEFAULT_TAU = 1.0
# weights of score-vector dims in the calibrated knowledge score
DEFAULT_KNOWLEDGE_WEIGHTS = {i: 1.0 for i in GIGA1 + GIGA2[:1] + WIKI_LOG}


class InfeasibleConstraints(ValueError):
    def __init__(self, message, constraints=()):
        self.constraints = list(constraints)
        detail = "; ".join(c.describe() for c in self.constraints)
        super().__init__(f"{message}: {detail}" if detail else message)


@dataclass(frozen=True)
class SchemaConstraint:
    kind: str           # "force" or "forbid"
    anaphor: int
    antecedent: int
    source: str = ""
    margin: float = 0.0

    def describe(self):
        return f"{self.kind}-link({self.anaphor},{self.antecedent}) from {self.source} margin {self.margin:.3g}"


@dataclass
class LinkAssignment:
    doc_id: str
    links: list                   # per mention: antecedent index or None
    objective: Optional[float] = field(default=None, compare=False)

    @property
    def clusters(self):
        """Transitive closure of the links, as sorted index lists."""
        parent = list(range(len(self.links)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in enumerate(self.links):
            if v is not None:
                parent[find(u)] = find(v)
        groups = {}
        for i in range(len(self.links)):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())

    def cluster_ids(self):
        ids = {}
        for k, members in enumerate(self.clusters):
            for m in members:
                ids[m] = k
        return ids

    def to_dict(self):
        return {"doc_id": self.doc_id,
                "links": [{"u": u, "v": v} for u, v in enumerate(self.links)],
                "clusters": self.clusters}

    @classmethod
    def from_dict(cls, d):
        links = [None] * len(d["links"])
        for item in d["links"]:
            links[item["u"]] = item["v"]
        return cls(d["doc_id"], links)


def write_predictions(preds, path):
    with open(path, "w", encoding="utf-8") as fh:
        for p in preds:
            fh.write(json.dumps(p.to_dict(), sort_keys=True) + "\n")


def read_predictions(path):
    with open(path, encoding="utf-8") as fh:
        return [LinkAssignment.from_dict(json.loads(line)) for line in fh if line.strip()]


def score_matrix(doc, w, kb, mask=None):
    """scores[u][v] = link score of anaphor u to each earlier mention v."""
    feats = doc_feature_matrices(doc, kb, w, mask)
    return [[_dot(w.weights, F[j]) for j in range(len(F))] for F in feats]


def best_left_links(scores):
    return [best_link(row) for row in scores]


def bll_decode(doc, w, kb, mask=None):
    scores = score_matrix(doc, w, kb, mask)
    links = best_left_links(scores)
    return LinkAssignment(doc.doc_id, links, objective_of(scores, links))


def objective_of(scores, links):
    return math.fsum(scores[u][v] for u, v in enumerate(links) if v is not None)


def _options(scores, constraints):
    """Allowed choices per anaphor, best first (null before equal-scoring
    candidates, closer candidates before farther ones)."""
    n = len(scores)
    forced = {}
    forbidden = set()
    for c in constraints:
        if not 0 <= c.antecedent < c.anaphor < n:
            raise InfeasibleConstraints("constraint does not link an anaphor to an earlier mention", [c])
        if c.kind == "force":
            if c.anaphor in forced and forced[c.anaphor].antecedent != c.antecedent:
                raise InfeasibleConstraints("two antecedents forced for one anaphor", [forced[c.anaphor], c])
            forced[c.anaphor] = c
        elif c.kind == "forbid":
            forbidden.add((c.anaphor, c.antecedent))
        else:
            raise ValueError(f"unknown constraint kind {c.kind!r}")
    options = []
    for u in range(n):
        if u in forced:
            f = forced[u]
            if (u, f.antecedent) in forbidden:
                clash = [c for c in constraints if c.kind == "forbid" and (c.anaphor, c.antecedent) == (u, f.antecedent)]
                raise InfeasibleConstraints("force-link to a forbidden pair", [f] + clash)
            options.append([(scores[u][f.antecedent], f.antecedent)])
            continue
        opts = [(0.0, None)] + [(scores[u][v], v) for v in range(u - 1, -1, -1) if (u, v) not in forbidden]
        # stable sort keeps null, then closest, first among equal scores
        opts.sort(key=lambda o: -o[0])
        options.append(opts)
    return options


def solve_links(scores, constraints=()):
    """Exact branch and bound over per-anaphor antecedent choices.

    The bound for a partial assignment adds the best remaining choice of
    every undecided anaphor. Only strictly better leaves replace the
    incumbent, so ties resolve to the first leaf in search order.
    Returns (links, objective).
    """
    options = _options(scores, constraints)
    n = len(options)
    # suffix_best[k] = sum of best choices for anaphors k..n-1
    best_terms = [opts[0][0] for opts in options]
    incumbent = {"links": None, "value": -math.inf}
    chosen = [None] * n
    values = [0.0] * n

    def bound(k):
        return math.fsum(values[:k] + best_terms[k:])

    def search(k):
        if k == n:
            value = math.fsum(values)
            if value > incumbent["value"]:
                incumbent["value"] = value
                incumbent["links"] = list(chosen)
            return
        for score, v in options[k]:
            chosen[k], values[k] = v, score
            if bound(k + 1) > incumbent["value"]:
                search(k + 1)
        chosen[k], values[k] = None, 0.0

    search(0)
    return incumbent["links"], incumbent["value"]


def ilp_decode(doc, w, kb, constraints=(), mask=None):
    scores = score_matrix(doc, w, kb, mask)
    links, value = solve_links(scores, constraints)
    return LinkAssignment(doc.doc_id, links, value)


def knowledge_score(vec, weights=None):
    weights = DEFAULT_KNOWLEDGE_WEIGHTS if weights is None else weights
    return math.fsum(weight * vec[i] for i, weight in weights.items())


def generate_constraints(doc, kb, tau=DEFAULT_TAU, weights=None, mask=None):
    """Force/forbid constraints for each pronoun from its candidates' knowledge.

    Force the best candidate when its knowledge score leads the runner-up by
    at least `tau`; forbid candidates whose polarity strictly clashes with
    the pronoun's while another candidate agrees in sign.
    """
    ctx = doc_context(doc)
    out = []
    for u in doc.mentions:
        if not u.pronoun:
            continue
        cands = [v for v in candidate_antecedents(doc, u) if doc.mentions[v].position < u.position]
        if not cands:
            continue
        scored = [(knowledge_score(score_pair(u, doc.mentions[v], doc, kb, mask), weights), v) for v in cands]
        forced = None
        if len(scored) >= 2:
            ranked = sorted(scored, key=lambda s: -s[0])
            margin = ranked[0][0] - ranked[1][0]
            if margin >= tau:
                forced = ranked[0][1]
                out.append(SchemaConstraint("force", u.idx, forced, "knowledge-margin", margin))
        if mask is not None and not np.all(mask[15:18]):
            continue
        po_u = ctx.polarity(u.idx, kb.polarity)
        if po_u is Polarity.NEUTRAL:
            continue
        signs = {v: ctx.polarity(v, kb.polarity) for v in cands}
        agree = [v for v, s in signs.items() if s is po_u]
        clash = [v for v, s in signs.items() if s is po_u.flipped()]
        if agree:
            for v in clash:
                if v != forced:
                    out.append(SchemaConstraint("forbid", u.idx, v, "polarity", 0.0))
    return out


def run_system(variant, docs, models, kb, tau=DEFAULT_TAU, knowledge_weights=None, mask=None):
    """Decode `docs` with one of the five systems.

    `models` maps "base" and/or "schema" to ModelWeights; the variant picks
    the one its learning method needs.
    """
    if variant not in SYSTEMS:
        raise ValueError(f"unknown system {variant!r}; choose from {sorted(SYSTEMS)}")
    with_schema, method, use_constraints = SYSTEMS[variant]
    key = "schema" if with_schema else "base"
    w = models.get(key)
    if w is None:
        raise ModelError(f"{variant} needs a {'schema-feature' if with_schema else 'base'} model")
    if w.with_schema != with_schema:
        raise ModelError(f"{variant} needs a model trained {'with' if with_schema else 'without'} schema features")
    if kb is None:
        raise ModelError(f"{variant} needs a knowledge base")
    preds = []
    for doc in docs:
        if method == "bll":
            preds.append(bll_decode(doc, w, kb, mask))
        else:
            cons = generate_constraints(doc, kb, tau, knowledge_weights, mask) if use_constraints else ()
            preds.append(ilp_decode(doc, w, kb, cons, mask))
    return preds
