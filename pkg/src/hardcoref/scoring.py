"""Knowledge score vector for a mention pair.

Layout (18 dims, version ``S18-v1``)::

    0      type-1 triple log count
    1-2    type-2 neighbor pair log joint count, conditional probability
    3-10   positional co-occurrence (probability, log count) x 4 variations
    11-14  web hit counts, one per query variant
    15-17  polarity agreement indicators

The triple scored is the anaphor's own, with the candidate antecedent's head
substituted for the anaphor.
"""
import weakref
from enum import Enum

import numpy as np

from .extract import extract_triples, is_boundary, is_connective, connective_between
from .kb import WIKI_VARIATIONS, query_web, web_queries
from .lexicon import NEGATIVE_COMPARATIVES, REVERSING_CONNECTIVES

LAYOUT_VERSION = "S18-v1"
DIM_NAMES = (
    ["giga1_log", "giga2_log", "giga2_cond"]
    + [f"wiki_{v}_{k}" for v in WIKI_VARIATIONS for k in ("prob", "log")]
    + [f"web_q{i}" for i in range(1, 5)]
    + ["pol_agree", "pol_pos", "pol_neg"]
)
N_DIMS = len(DIM_NAMES)
GIGA1 = [0]
GIGA2 = [1, 2]
WIKI = list(range(3, 11))
WIKI_LOG = [4, 6, 8, 10]
WEB = list(range(11, 15))
POL = [15, 16, 17]
# type-2 knowledge comes only from neighbor pair counts; every other source
# scores a single substituted triple
TYPE2_DIMS = GIGA2
TYPE1_DIMS = GIGA1 + WIKI + WEB + POL

assert N_DIMS == 18


class Polarity(str, Enum):
    POS = "+"
    NEG = "-"
    NEUTRAL = "0"

    def flipped(self):
        if self is Polarity.POS:
            return Polarity.NEG
        if self is Polarity.NEG:
            return Polarity.POS
        return self


def predicate_polarity(pred, role, preceding_connectives=(), adverbs=(), lex=None):
    """Polarity of a predicate in context.

    Lexicon lookup, then one sign flip each for an object role, a preceding
    polarity-reversing connective and a negative comparative adverb.
    """
    sign = lex(pred) if lex is not None else "0"
    po = Polarity(sign) if sign in ("+", "-") else Polarity.NEUTRAL
    if role == "obj":
        po = po.flipped()
    if any(c.lower() in REVERSING_CONNECTIVES for c in preceding_connectives):
        po = po.flipped()
    if any(a.lower() in NEGATIVE_COMPARATIVES for a in adverbs):
        po = po.flipped()
    return po


def polarity_score(po_u, po_v):
    both_pos = po_u is Polarity.POS and po_v is Polarity.POS
    both_neg = po_u is Polarity.NEG and po_v is Polarity.NEG
    return [float(both_pos or both_neg), float(both_pos), float(both_neg)]


def mask_for(dims):
    """18-dim 0/1 mask keeping `dims`."""
    mask = np.zeros(N_DIMS)
    mask[list(dims)] = 1.0
    return mask


ABLATION_MASKS = {
    "all": mask_for(range(N_DIMS)),
    "type1": mask_for(TYPE1_DIMS),
    "type2": mask_for(TYPE2_DIMS),
    "none": mask_for([]),
}


class DocContext:
    """Per-document triples and predicate contexts, computed once."""

    def __init__(self, doc):
        self.doc = doc
        self.triples = {t.mention: t for t in extract_triples(doc, use_mentions=True)}

    def triple(self, idx):
        return self.triples.get(idx)

    def predicate_context(self, t):
        """(preceding connectives, clause adverbs) around the triple's predicate."""
        sent = self.doc.sentences[t.sent]
        conns = [tok.text for tok in sent[:t.pred_index] if is_connective(tok)]
        adverbs = []
        for step in (-1, 1):
            i = t.pred_index + step
            while 0 <= i < len(sent) and not is_boundary(sent[i]):
                if sent[i].pos in ("ADV", "ADJ"):
                    adverbs.append(sent[i].lemma)
                i += step
        return conns, adverbs

    def polarity(self, idx, lex):
        t = self.triples.get(idx)
        if t is None:
            return Polarity.NEUTRAL
        conns, adverbs = self.predicate_context(t)
        # a copula carries the polarity of its adjective
        key = t.arg if t.pred == "be" and t.arg_pos == "adjective" else t.pred
        return predicate_polarity(key, t.role, conns, adverbs, lex)


_contexts = weakref.WeakKeyDictionary()


def doc_context(doc):
    ctx = _contexts.get(doc)
    if ctx is None:
        ctx = _contexts[doc] = DocContext(doc)
    return ctx


def candidate_unit(doc, mention):
    tok = doc.sentences[mention.sent][mention.head]
    return tok.ent or tok.lemma


def score_pair(anaphor, antecedent, doc, kb, mask=None):
    """The 18-dim knowledge vector for linking `anaphor` to `antecedent`.

    Sources whose triples are missing contribute zeros.
    """
    ctx = doc_context(doc)
    ta = ctx.triple(anaphor.idx)
    tc = ctx.triple(antecedent.idx)
    out = np.zeros(N_DIMS)
    if ta is not None:
        out[0] = kb.type1.query(ta.pred, ta.role, antecedent.head_lemma, ta.arg)
        out[3:11] = kb.wiki.query(candidate_unit(doc, antecedent), ta.pred)
        out[11:15] = query_web(kb.web, web_queries(antecedent.head_lemma, ta.pred, ta.arg, ta.arg_pos))
        if tc is not None:
            start, end = (tc.sent, tc.pred_index), (ta.sent, ta.pred_index)
            if start < end:
                cn = connective_between(doc, start, end)
                out[1:3] = kb.type2.query(tc.pred, tc.role, ta.pred, ta.role, cn)
            out[15:18] = polarity_score(ctx.polarity(antecedent.idx, kb.polarity),
                                        ctx.polarity(anaphor.idx, kb.polarity))
    if mask is not None:
        out = out * mask
    return out
