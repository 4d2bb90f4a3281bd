"""Rule-based triple extraction and neighbor-pair co-occurrence events.

The governing predicate of a noun phrase is the closest verb group in its
clause: a verb group to the right makes the mention its subject, one to the
left makes it the object. Clause boundaries are punctuation, conjunctions,
discourse connectives and relative pronouns.
"""
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .docmodel import NOUN_TAGS, VERB_TAGS, Triple
from .lexicon import CONNECTIVES, PRONOUNS, RELATIVE_PRONOUNS, name_gender

POSSESSIVES = frozenset({"his", "her", "its", "their", "my", "our", "your"})
_CONNECTIVE_SET = frozenset(CONNECTIVES)
# adverbs in these readings ("so weak", "not yet") are not connectives
_CONJ_ONLY = frozenset({"so", "while", "since", "yet", "though"})
_GROUP_TAGS = VERB_TAGS | {"PART", "ADV"}


def is_connective(tok):
    word = tok.text.lower()
    if word not in _CONNECTIVE_SET:
        return False
    return word not in _CONJ_ONLY or tok.pos in ("SCONJ", "CCONJ")


def is_boundary(tok):
    if tok.pos in ("PUNCT", "SCONJ", "CCONJ") or is_connective(tok):
        return True
    return tok.pos == "PRON" and tok.text.lower() in RELATIVE_PRONOUNS


def _is_possessive(sent, i):
    tok = sent[i]
    return (tok.pos == "PRON" and tok.text.lower() in POSSESSIVES and i + 1 < len(sent)
            and sent[i + 1].pos in ("NOUN", "PROPN", "ADJ"))


@dataclass(frozen=True)
class VerbGroup:
    start: int
    end: int
    pred_index: int
    pred: str
    copular: bool


def verb_groups(sent):
    """Maximal runs of verbs/auxiliaries (with interleaved particles and
    adverbs) and the predicate each one carries."""
    groups = []
    i = 0
    while i < len(sent):
        if sent[i].pos not in VERB_TAGS:
            i += 1
            continue
        j = i
        while j + 1 < len(sent) and sent[j + 1].pos in _GROUP_TAGS:
            j += 1
        # trailing adverbs belong to the group only if a verb follows them
        while sent[j].pos not in VERB_TAGS:
            j -= 1
        verbs = [k for k in range(i, j + 1) if sent[k].pos == "VERB"]
        if verbs:
            k = verbs[-1]
            groups.append(VerbGroup(i, j + 1, k, sent[k].lemma, False))
        else:
            be = [k for k in range(i, j + 1) if sent[k].lemma == "be"]
            k = be[-1] if be else j
            groups.append(VerbGroup(i, j + 1, k, sent[k].lemma, bool(be)))
        i = j + 1
    return groups


def _clear(sent, lo, hi):
    return not any(is_boundary(sent[k]) for k in range(lo, hi))


def governing_group(sent, head, groups=None):
    """(group, role) for the mention headed at `head`, or None."""
    if groups is None:
        groups = verb_groups(sent)
    right = next((g for g in groups if g.start > head), None)
    left = next((g for g in reversed(groups) if g.end <= head), None)
    if right is not None and not _clear(sent, head + 1, right.start):
        right = None
    if left is not None and not _clear(sent, left.end, head):
        left = None
    if right is None and left is None:
        return None
    if left is None or (right is not None and right.start - head <= head - (left.end - 1)):
        return right, "subj"
    return left, "obj"


def _noun_run_end(sent, i):
    while i + 1 < len(sent) and sent[i].pos in ("NOUN", "PROPN") and sent[i + 1].pos in ("NOUN", "PROPN"):
        i += 1
    return i


def _argument_after(sent, group, groups):
    nxt = next((g.start for g in groups if g.start >= group.end), len(sent))
    for i in range(group.end, nxt):
        tok = sent[i]
        if is_boundary(tok):
            break
        if tok.pos == "ADJ" and group.copular:
            return i, "adjective"
        if tok.pos in NOUN_TAGS and not _is_possessive(sent, i):
            if tok.pos == "PRON" and tok.text.lower() in RELATIVE_PRONOUNS:
                break
            return _noun_run_end(sent, i), "noun"
    return None, "other"


def _argument_before(sent, group):
    for i in range(group.start - 1, -1, -1):
        tok = sent[i]
        if is_boundary(tok):
            break
        if tok.pos in NOUN_TAGS and not _is_possessive(sent, i):
            return i, "noun"
    return None, "other"


def noun_phrase_heads(sent):
    """Head token indices of noun phrases found by POS alone."""
    heads = []
    for i, tok in enumerate(sent):
        if tok.pos == "PRON":
            if tok.text.lower() in PRONOUNS and not _is_possessive(sent, i):
                heads.append(i)
        elif tok.pos in ("NOUN", "PROPN"):
            if i + 1 >= len(sent) or sent[i + 1].pos not in ("NOUN", "PROPN"):
                heads.append(i)
    return heads


def triple_at(sent, sent_index, head, groups=None, mention=None):
    """The triple for the noun phrase headed at `head`, or None."""
    if groups is None:
        groups = verb_groups(sent)
    if _is_possessive(sent, head):
        return None
    found = governing_group(sent, head, groups)
    if found is None:
        return None
    group, role = found
    if role == "subj":
        arg_index, arg_pos = _argument_after(sent, group, groups)
    else:
        arg_index, arg_pos = _argument_before(sent, group)
    arg = sent[arg_index].lemma if arg_index is not None else ""
    return Triple(pred=group.pred, role=role, head=sent[head].lemma, arg=arg, arg_pos=arg_pos,
                  sent=sent_index, pred_index=group.pred_index, head_index=head,
                  arg_index=arg_index, mention=mention)


@dataclass
class SkipReport:
    noun_phrases: int = 0
    triples: int = 0
    reasons: Counter = field(default_factory=Counter)

    def add(self, other):
        self.noun_phrases += other.noun_phrases
        self.triples += other.triples
        self.reasons.update(other.reasons)

    def summary(self):
        lines = [f"noun phrases: {self.noun_phrases}",
                 f"triples: {self.triples}",
                 f"skipped: {self.noun_phrases - self.triples}"]
        for reason, n in sorted(self.reasons.items()):
            lines.append(f"  {reason}: {n}")
        return "\n".join(lines)


def extract_triples(doc, use_mentions=None, report=None):
    """Triples for a document, in document order.

    Annotated mentions are used when the document has any (or when
    `use_mentions` is true); otherwise noun phrases are found from POS tags.
    Mentions without a governing predicate are skipped and tallied in
    `report` when one is passed.
    """
    if use_mentions is None:
        use_mentions = bool(doc.mentions)
    triples = []
    local = SkipReport()
    for s, sent in enumerate(doc.sentences):
        groups = verb_groups(sent)
        if use_mentions:
            sites = [(m.head, m.idx) for m in doc.mentions if m.sent == s]
        else:
            sites = [(h, None) for h in noun_phrase_heads(sent)]
        for head, idx in sites:
            local.noun_phrases += 1
            if _is_possessive(sent, head):
                local.reasons["possessive"] += 1
                continue
            t = triple_at(sent, s, head, groups, idx)
            if t is None:
                local.reasons["no governing predicate"] += 1
                continue
            triples.append(t)
    local.triples = len(triples)
    if report is not None:
        report.add(local)
    return triples


@dataclass(frozen=True)
class NeighborPairEvent:
    first: tuple          # (pred lemma, role) of the earlier triple
    second: tuple         # (pred lemma, role) of the later triple
    connective: Optional[str]
    evidence: str         # "head-match" or "name-pronoun"
    first_sent: int = 0
    second_sent: int = 0


@dataclass(frozen=True)
class _Slot:
    role: str
    sent: int
    index: int


def predications(doc, triples):
    """Group triples by predicate token: {(sent, pred_index): (pred, {role: slot})}."""
    out = {}
    for t in triples:
        pred, slots = out.setdefault((t.sent, t.pred_index), (t.pred, {}))
        slots.setdefault(t.role, _Slot(t.role, t.sent, t.head_index))
        if t.arg_index is not None and t.arg_pos == "noun":
            other = "obj" if t.role == "subj" else "subj"
            slots.setdefault(other, _Slot(other, t.sent, t.arg_index))
    return out


def person_gender(tok):
    """Gender of a person-name token, None if the token is not a person name."""
    if tok.pos != "PROPN":
        return None
    gender = tok.gender or name_gender(tok.text)
    return gender if gender in ("masc", "fem") else None


def compatible_pronoun(name_tok, pron_tok):
    """Heuristic 2: a singular third-person pronoun whose gender matches the name."""
    gender = person_gender(name_tok)
    if gender is None or pron_tok.pos != "PRON":
        return False
    feats = PRONOUNS.get(pron_tok.text.lower())
    if feats is None:
        return False
    p_gender, p_number, person = feats
    return person == 3 and p_number == "sing" and p_gender == gender


def link_evidence(doc, a, b):
    """Why slots `a` (earlier) and `b` (later) corefer, or None."""
    ta, tb = doc.sentences[a.sent][a.index], doc.sentences[b.sent][b.index]
    if ta.pos in ("NOUN", "PROPN") and tb.pos in ("NOUN", "PROPN") and ta.lemma == tb.lemma:
        return "head-match"
    if compatible_pronoun(ta, tb):
        return "name-pronoun"
    return None


def connective_between(doc, start, end):
    """Last closed-class connective strictly between two (sent, index) positions."""
    found = None
    for s in range(start[0], end[0] + 1):
        sent = doc.sentences[s]
        lo = start[1] + 1 if s == start[0] else 0
        hi = end[1] if s == end[0] else len(sent)
        for i in range(lo, hi):
            if is_connective(sent[i]):
                found = sent[i].text.lower()
    return found


def extract_neighbor_pairs(doc, window=3, triples=None):
    """Events for neighboring triples that share a linked argument."""
    if triples is None:
        triples = extract_triples(doc, use_mentions=False)
    preds = sorted(predications(doc, triples).items())
    events = []
    for i, ((s1, p1), (pred1, slots1)) in enumerate(preds):
        for (s2, p2), (pred2, slots2) in preds[i + 1:]:
            if s2 - s1 > window:
                break
            cn = None
            cn_done = False
            for r1 in ("subj", "obj"):
                a = slots1.get(r1)
                if a is None:
                    continue
                for r2 in ("subj", "obj"):
                    b = slots2.get(r2)
                    if b is None or (a.sent, a.index) == (b.sent, b.index):
                        continue
                    evidence = link_evidence(doc, a, b)
                    if evidence is None:
                        continue
                    if not cn_done:
                        cn = connective_between(doc, (s1, p1), (s2, p2))
                        cn_done = True
                    events.append(NeighborPairEvent((pred1, r1), (pred2, r2), cn, evidence, s1, s2))
    return events
