"""Documents, mentions and triples, plus the JSONL corpus reader/writer.

One document per line::

    {"doc_id": "w001",
     "sentences": [[{"t": "The", "lemma": "the", "pos": "DET"}, ...]],
     "mentions": [{"sent": 0, "start": 0, "end": 2, "head": 1,
                   "role": "subj", "pronoun": false, "gold": "c1"}, ...],
     "category": "Cat1", "split": "test"}

Token keys ``ent``, ``gender`` and ``num`` are optional, as are ``lemma``
(filled in by the bundled lemmatizer) and the mention's ``gold``. A target
pronoun of a Winograd item lists its two candidate mentions in ``cands``.
"""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .lexicon import PRONOUNS, lemmatize, name_gender, pronoun_features

ROLES = ("subj", "obj", "other")
TRIPLE_ROLES = ("subj", "obj")
CATEGORIES = ("Cat1", "Cat2", "Cat3")
GENDERS = ("masc", "fem", "neut", "unknown")
NUMBERS = ("sing", "plur", "unknown")
NOUN_TAGS = frozenset({"NOUN", "PROPN", "PRON"})
VERB_TAGS = frozenset({"VERB", "AUX"})


class CorpusError(ValueError):
    """Malformed corpus record."""

    def __init__(self, message, line=None, doc_id=None):
        self.line = line
        self.doc_id = doc_id
        where = []
        if line is not None:
            where.append(f"line {line}")
        if doc_id is not None:
            where.append(f"doc {doc_id!r}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


@dataclass(frozen=True)
class Token:
    text: str
    lemma: str
    pos: str
    ent: Optional[str] = None
    gender: Optional[str] = None
    num: Optional[str] = None

    def to_dict(self):
        d = {"t": self.text, "lemma": self.lemma, "pos": self.pos}
        for key in ("ent", "gender", "num"):
            value = getattr(self, key)
            if value is not None:
                d[key] = value
        return d


@dataclass(frozen=True)
class Mention:
    idx: int
    sent: int
    start: int
    end: int
    head: int
    role: str
    pronoun: bool
    gold: Optional[str] = None
    cands: Optional[tuple] = None
    head_lemma: str = ""
    gender: str = "unknown"
    number: str = "unknown"

    def to_dict(self):
        d = {"sent": self.sent, "start": self.start, "end": self.end, "head": self.head,
             "role": self.role, "pronoun": self.pronoun, "gold": self.gold}
        if self.cands is not None:
            d["cands"] = list(self.cands)
        return d

    @property
    def position(self):
        return (self.sent, self.head)


@dataclass(eq=False)
class Document:
    """A pre-tokenized document. Treat as immutable once loaded."""

    doc_id: str
    sentences: list
    mentions: list = field(default_factory=list)
    category: Optional[str] = None
    split: Optional[str] = None

    @property
    def gold_clusters(self):
        """Mapping mention index -> gold cluster id (unannotated mentions get their own)."""
        return {m.idx: (m.gold if m.gold is not None else f"_singleton{m.idx}") for m in self.mentions}

    @property
    def has_gold(self):
        return any(m.gold is not None for m in self.mentions)

    def token(self, sent, i):
        return self.sentences[sent][i]

    def to_dict(self):
        d = {"doc_id": self.doc_id,
             "sentences": [[tok.to_dict() for tok in sent] for sent in self.sentences],
             "mentions": [m.to_dict() for m in self.mentions]}
        if self.category is not None:
            d["category"] = self.category
        if self.split is not None:
            d["split"] = self.split
        return d


@dataclass(frozen=True)
class Triple:
    """pred(m, a): a mention `head` in `role` of predicate `pred`, with other argument `arg`."""

    pred: str
    role: str
    head: str
    arg: str
    arg_pos: str
    sent: int
    pred_index: int
    head_index: int
    arg_index: Optional[int] = None
    mention: Optional[int] = None

    @property
    def key(self):
        return (self.pred, self.role, self.head, self.arg)


def mention_features(tok):
    """(gender, number) of a mention headed by `tok`."""
    word = tok.text.lower()
    if tok.pos == "PRON" and word in PRONOUNS:
        return pronoun_features(word)
    gender = tok.gender or "unknown"
    number = tok.num or "unknown"
    if tok.pos == "PROPN":
        if gender == "unknown":
            gender = name_gender(word)
        if number == "unknown":
            number = "sing"
    elif tok.pos == "NOUN" and number == "unknown":
        number = "sing" if word == tok.lemma else "plur"
    return gender, number


def _token_from_dict(d):
    if not isinstance(d, dict) or "t" not in d or "pos" not in d:
        raise ValueError("token needs keys 't' and 'pos'")
    gender = d.get("gender")
    if gender is not None and gender not in GENDERS:
        raise ValueError(f"token gender {gender!r} not in {GENDERS}")
    num = d.get("num")
    if num is not None and num not in NUMBERS:
        raise ValueError(f"token num {num!r} not in {NUMBERS}")
    lemma = d.get("lemma") or lemmatize(d["t"], d["pos"])
    return Token(d["t"], lemma, d["pos"], d.get("ent"), gender, num)


def document_from_dict(d, line=None):
    """Build and validate a Document from its JSON record."""
    doc_id = d.get("doc_id") if isinstance(d, dict) else None
    if doc_id is None:
        raise CorpusError("missing doc_id", line=line)
    try:
        sentences = [[_token_from_dict(t) for t in sent] for sent in d.get("sentences", [])]
    except (ValueError, TypeError) as exc:
        raise CorpusError(f"sentences: {exc}", line, doc_id) from None

    category = d.get("category")
    if category is not None and category not in CATEGORIES:
        raise CorpusError(f"category {category!r} not in {CATEGORIES}", line, doc_id)

    raw = d.get("mentions", [])
    mentions = []
    for i, m in enumerate(raw):
        try:
            sent, start, end, head = int(m["sent"]), int(m["start"]), int(m["end"]), int(m["head"])
        except (KeyError, TypeError, ValueError):
            raise CorpusError(f"mentions[{i}]: needs integer sent/start/end/head", line, doc_id) from None
        if not 0 <= sent < len(sentences):
            raise CorpusError(f"mentions[{i}].sent {sent} out of range", line, doc_id)
        if not (0 <= start <= head < end <= len(sentences[sent])):
            raise CorpusError(
                f"mentions[{i}] span [{start},{end}) head {head} exceeds sentence of "
                f"{len(sentences[sent])} tokens", line, doc_id)
        role = m.get("role", "other")
        if role not in ROLES:
            raise CorpusError(f"mentions[{i}].role {role!r} not in {ROLES}", line, doc_id)
        cands = m.get("cands")
        if cands is not None:
            cands = tuple(int(c) for c in cands)
            if any(not 0 <= c < len(raw) or c == i for c in cands):
                raise CorpusError(f"mentions[{i}].cands {list(cands)} invalid", line, doc_id)
        gold = m.get("gold")
        tok = sentences[sent][head]
        gender, number = mention_features(tok)
        mentions.append(Mention(
            idx=i, sent=sent, start=start, end=end, head=head, role=role,
            pronoun=bool(m.get("pronoun", tok.pos == "PRON")),
            gold=None if gold is None else str(gold), cands=cands,
            head_lemma=tok.lemma, gender=gender, number=number))
    order = [m.position for m in mentions]
    if order != sorted(order):
        raise CorpusError("mentions must be listed in document order", line, doc_id)
    return Document(str(doc_id), sentences, mentions, category, d.get("split"))


def load_corpus(path, format="jsonl"):
    """Read a JSONL corpus, validating every document."""
    if format != "jsonl":
        raise ValueError(f"unsupported corpus format {format!r}")
    docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"invalid JSON at column {exc.colno}: {exc.msg}", line=lineno) from None
            docs.append(document_from_dict(record, line=lineno))
    return docs


def dump_corpus(docs, path):
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")


def candidate_antecedents(doc, mention):
    """Candidates counted for a pronoun: its `cands` if listed, else every
    preceding non-pronoun mention in the document."""
    if mention.cands is not None:
        return list(mention.cands)
    return [m.idx for m in doc.mentions[:mention.idx] if not m.pronoun]


@dataclass(frozen=True)
class StatsReport:
    docs: int
    train: int
    test: int
    mentions: int
    pronouns: int
    predictions_for_pronoun: int

    def as_dict(self):
        return {"docs": self.docs, "train": self.train, "test": self.test, "mentions": self.mentions,
                "pronouns": self.pronouns, "predictions_for_pronoun": self.predictions_for_pronoun}


def dataset_stats(docs):
    """Corpus counts. Predictions-for-pronoun sums the candidate-set sizes of
    the pronouns in test documents, or of every document when none carries
    a split label."""
    docs = list(docs)
    labelled = any(d.split is not None for d in docs)
    n_mentions = n_pronouns = n_predictions = 0
    for doc in docs:
        n_mentions += len(doc.mentions)
        scored = doc.split == "test" or not labelled
        for m in doc.mentions:
            if m.pronoun:
                n_pronouns += 1
                if scored:
                    n_predictions += len(candidate_antecedents(doc, m))
    return StatsReport(len(docs), sum(d.split == "train" for d in docs), sum(d.split == "test" for d in docs),
                       n_mentions, n_pronouns, n_predictions)


def split_docs(docs, split):
    if split is None:
        return list(docs)
    return [d for d in docs if d.split == split]


def data_path(name):
    """Path of a bundled data file."""
    return Path(__file__).parent / "data" / name
