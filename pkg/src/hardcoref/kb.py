"""Count stores backing the knowledge score vector.

Four stores are built from corpora (type-1 triple counts, type-2 neighbor
pair counts, positional co-occurrence counts) or loaded from files (web hit
cache, polarity lexicon). Every corpus store keeps raw integer counts only;
marginals and probabilities are derived, so merging shards is a plain sum.
"""
import json
import math
import struct
import zlib
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .docmodel import NOUN_TAGS, VERB_TAGS
from .extract import SkipReport, extract_neighbor_pairs, extract_triples
from .lexicon import noun_variants, verb_variants

WIKI_VARIATIONS = ("immediately-after", "immediately-before", "before", "after")
WIKI_WINDOW = 10
NO_CONNECTIVE = "-"
TSV_VERSION = 1
_MAGIC = b"HCKB"


class KBError(ValueError):
    pass


def log_count(count):
    """ln(count) for a present key, 0.0 for a miss."""
    return math.log(count) if count > 0 else 0.0


class _CountStore:
    kind = ""
    fields = ()

    def __init__(self, counts=None):
        self.counts = Counter()
        if counts:
            for key, n in counts.items():
                if n < 0:
                    raise KBError(f"negative count for {key!r}")
                if n:
                    self.counts[tuple(key)] += n

    def __eq__(self, other):
        return type(self) is type(other) and self.counts == other.counts

    def __len__(self):
        return len(self.counts)

    def merge(self, other):
        if type(other) is not type(self):
            raise KBError(f"cannot merge {type(self).__name__} with {type(other).__name__}")
        out = type(self)(self.counts)
        out.counts.update(other.counts)
        return out

    def to_tsv(self):
        lines = [f"# hardcoref {self.kind} v{TSV_VERSION}\t" + "\t".join(self.fields + ("count",))]
        for key in sorted(self.counts):
            lines.append("\t".join(key) + f"\t{self.counts[key]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text):
        counts = Counter()
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != len(cls.fields) + 1:
                raise KBError(f"{cls.kind} line {lineno}: expected {len(cls.fields) + 1} fields")
            try:
                counts[tuple(parts[:-1])] += int(parts[-1])
            except ValueError:
                raise KBError(f"{cls.kind} line {lineno}: bad count {parts[-1]!r}") from None
        return cls(counts)


class Type1Store(_CountStore):
    """Occurrence counts of (predicate, role, mention head, argument)."""

    kind = "type1"
    fields = ("pred", "role", "head", "arg")

    def add(self, triple):
        self.counts[triple.key] += 1

    def query(self, pred, role, head, arg):
        return log_count(self.counts.get((pred, role, head, arg), 0))


class Type2Store(_CountStore):
    """Joint counts of linked neighbor pairs keyed
    (pred_u, role_u, pred_v, role_v, connective), where the u triple comes
    first in the text. Marginals are over (pred_v, role_v, connective)."""

    kind = "type2"
    fields = ("pred_u", "role_u", "pred_v", "role_v", "connective")

    def __init__(self, counts=None):
        super().__init__(counts)
        self._marginals = None

    @property
    def marginals(self):
        if self._marginals is None:
            m = Counter()
            for (_, _, pv, rv, cn), n in self.counts.items():
                m[(pv, rv, cn)] += n
            self._marginals = m
        return self._marginals

    def add(self, event):
        self._marginals = None
        self.counts[event.first + event.second + (event.connective or NO_CONNECTIVE,)] += 1

    def query(self, pred_u, role_u, pred_v, role_v, connective=None):
        """(ln joint, joint / marginal); backs off to the connective-free key."""
        cn = connective or NO_CONNECTIVE
        for c in (cn, NO_CONNECTIVE) if cn != NO_CONNECTIVE else (cn,):
            joint = self.counts.get((pred_u, role_u, pred_v, role_v, c), 0)
            if joint:
                return math.log(joint), joint / self.marginals[(pred_v, role_v, c)]
        return 0.0, 0.0


class WikiStore(_CountStore):
    """Positional co-occurrence counts keyed (variation, w1, w2)."""

    kind = "wiki"
    fields = ("variation", "w1", "w2")

    def __init__(self, counts=None):
        super().__init__(counts)
        self._marginals = None

    @property
    def marginals(self):
        if self._marginals is None:
            m = Counter()
            for (var, w1, _), n in self.counts.items():
                m[(var, w1)] += n
            self._marginals = m
        return self._marginals

    def probability(self, variation, w1, w2):
        n = self.counts.get((variation, w1, w2), 0)
        return n / self.marginals[(variation, w1)] if n else 0.0

    def query(self, w1, w2):
        """8 dims: (probability, ln count) for each variation in order."""
        out = []
        for var in WIKI_VARIATIONS:
            n = self.counts.get((var, w1, w2), 0)
            out.append(self.probability(var, w1, w2))
            out.append(log_count(n))
        return out


class WebCache:
    """Offline query -> averaged hit count table. Misses score 0 and are tallied."""

    kind = "web"

    def __init__(self, counts=None):
        self.counts = {}
        for q, n in (counts or {}).items():
            if n is not None:
                if n < 0:
                    raise KBError(f"negative web count for {q!r}")
                self.counts[normalize_query(q)] = float(n)
        self.misses = 0
        self.requested = set()

    def __eq__(self, other):
        return type(other) is WebCache and self.counts == other.counts

    def __len__(self):
        return len(self.counts)

    def get(self, query):
        q = normalize_query(query)
        self.requested.add(q)
        n = self.counts.get(q)
        if n is None:
            self.misses += 1
        return n

    def merge(self, other):
        if type(other) is not WebCache:
            raise KBError("cannot merge WebCache with " + type(other).__name__)
        out = WebCache(self.counts)
        for q, n in other.counts.items():
            out.counts[q] = out.counts.get(q, 0.0) + n
        return out

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def dump(self, path, extra_keys=()):
        data = dict(self.counts)
        for q in extra_keys:
            data.setdefault(q, None)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(dict(sorted(data.items())), fh, indent=1)
            fh.write("\n")


class PolarityLexicon:
    """Predicate lemma -> '+' or '-'; anything else is neutral."""

    kind = "polarity"

    def __init__(self, entries=None):
        self.entries = {}
        for lemma, sign in (entries or {}).items():
            if sign not in ("+", "-"):
                raise KBError(f"polarity for {lemma!r} must be + or -, got {sign!r}")
            self.entries[lemma] = sign

    def __eq__(self, other):
        return type(other) is PolarityLexicon and self.entries == other.entries

    def __len__(self):
        return len(self.entries)

    def __call__(self, lemma):
        return self.entries.get(lemma, "0")

    def merge(self, other):
        if type(other) is not PolarityLexicon:
            raise KBError("cannot merge PolarityLexicon with " + type(other).__name__)
        return PolarityLexicon({**self.entries, **other.entries})

    @classmethod
    def load(cls, path):
        entries = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise KBError(f"polarity line {lineno}: expected lemma<TAB>sign")
                entries[parts[0]] = parts[1]
        return cls(entries)

    def dump(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            for lemma in sorted(self.entries):
                fh.write(f"{lemma}\t{self.entries[lemma]}\n")


def merge(a, b):
    """Sum two stores of the same kind."""
    return a.merge(b)


def query_type1(store, pred, role, head, arg):
    return store.query(pred, role, head, arg)


def query_type2(store, pred_u, role_u, pred_v, role_v, connective=None):
    return store.query(pred_u, role_u, pred_v, role_v, connective)


def query_wiki(store, w1, w2):
    return store.query(w1, w2)


# -- building -------------------------------------------------------------

def build_type1(triples):
    store = Type1Store()
    for t in triples:
        store.add(t)
    return store


def build_type2(events):
    store = Type2Store()
    for e in events:
        store.add(e)
    return store


def wiki_unit(tok):
    if tok.ent:
        return tok.ent
    if tok.pos in NOUN_TAGS - {"PRON"} or tok.pos in VERB_TAGS:
        return tok.lemma
    return None


def build_wiki(docs, window=WIKI_WINDOW):
    """Co-occurrence of entities, nouns and verbs within sentences.

    Immediate variations look at adjacent units; before/after look at any
    unit within `window` tokens.
    """
    store = WikiStore()
    counts = store.counts
    for doc in docs:
        for sent in doc.sentences:
            units = [(i, u) for i, u in ((i, wiki_unit(t)) for i, t in enumerate(sent)) if u is not None]
            for a, (i, u) in enumerate(units):
                if a + 1 < len(units):
                    v = units[a + 1][1]
                    counts[("immediately-after", u, v)] += 1
                    counts[("immediately-before", v, u)] += 1
                for j, v in units[a + 1:]:
                    if j - i > window:
                        break
                    counts[("after", u, v)] += 1
                    counts[("before", v, u)] += 1
    return store


@dataclass
class KnowledgeBase:
    type1: Type1Store = field(default_factory=Type1Store)
    type2: Type2Store = field(default_factory=Type2Store)
    wiki: WikiStore = field(default_factory=WikiStore)
    web: WebCache = field(default_factory=WebCache)
    polarity: PolarityLexicon = field(default_factory=PolarityLexicon)

    def merge(self, other):
        return KnowledgeBase(*(getattr(self, k).merge(getattr(other, k)) for k in _KB_PARTS))

    @property
    def empty(self):
        return not any(len(getattr(self, k)) for k in _KB_PARTS)


_KB_PARTS = ("type1", "type2", "wiki", "web", "polarity")


@dataclass
class BuildReport:
    docs: int = 0
    sentences: int = 0
    events: int = 0
    skips: SkipReport = field(default_factory=SkipReport)

    def add(self, other):
        self.docs += other.docs
        self.sentences += other.sentences
        self.events += other.events
        self.skips.add(other.skips)

    def as_dict(self, kb=None):
        d = {"docs": self.docs, "sentences": self.sentences, "triples": self.skips.triples,
             "noun_phrases": self.skips.noun_phrases, "events": self.events,
             "skipped": dict(sorted(self.skips.reasons.items()))}
        if kb is not None:
            d["keys"] = {"type1": len(kb.type1), "type2": len(kb.type2), "wiki": len(kb.wiki)}
        return d


def _build_shard(docs, window=3, wiki_window=WIKI_WINDOW):
    report = BuildReport(docs=len(docs))
    type1, type2 = Type1Store(), Type2Store()
    for doc in docs:
        report.sentences += len(doc.sentences)
        triples = extract_triples(doc, use_mentions=False, report=report.skips)
        for t in triples:
            type1.add(t)
        events = extract_neighbor_pairs(doc, window, triples)
        report.events += len(events)
        for e in events:
            type2.add(e)
    return KnowledgeBase(type1, type2, build_wiki(docs, wiki_window)), report


def build_kb(docs, shards=1, jobs=1, window=3, wiki_window=WIKI_WINDOW):
    """Build the corpus stores, optionally as `shards` contiguous slices
    merged at the end (in `jobs` worker processes)."""
    docs = list(docs)
    shards = max(1, shards)
    size = -(-len(docs) // shards) if docs else 0
    parts = [docs[i * size:(i + 1) * size] for i in range(shards)] if size else [[]]
    if jobs > 1 and len(parts) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_build_shard, parts, [window] * len(parts), [wiki_window] * len(parts)))
    else:
        results = [_build_shard(p, window, wiki_window) for p in parts]
    kb, report = KnowledgeBase(), BuildReport()
    for part_kb, part_report in results:
        kb = kb.merge(part_kb)
        report.add(part_report)
    return kb, report


# -- web queries ----------------------------------------------------------

def normalize_query(q):
    return " ".join(q.lower().split())


def web_queries(u, pred_v, a_v, a_pos="noun"):
    """Query strings per variant (1-4) for candidate head `u` substituted
    into the triple pred_v(m, a_v). Variant 4 only for adjective + to-be."""
    nouns = noun_variants(u)
    verbs = verb_variants(pred_v) if pred_v else []
    args = (noun_variants(a_v) if a_pos == "noun" else [a_v]) if a_v else []
    return {
        1: [normalize_query(f"{n} {a}") for n in nouns for a in args],
        2: [normalize_query(f"{n} {v}") for n in nouns for v in verbs],
        3: [normalize_query(f"{n} {v} {a}") for n in nouns for v in verbs for a in args],
        4: ([normalize_query(f"{a_v} {n}") for n in nouns]
            if a_v and a_pos == "adjective" and pred_v == "be" else []),
    }


def query_web(cache, grouped):
    """4 dims: ln(1 + mean cached count) per variant; cache misses are
    excluded from the mean and an all-miss variant scores 0."""
    out = []
    for variant in (1, 2, 3, 4):
        hits = [n for n in (cache.get(q) for q in grouped.get(variant, ())) if n is not None]
        out.append(math.log1p(sum(hits) / len(hits)) if hits else 0.0)
    return out


# -- persistence ----------------------------------------------------------

_FILES = {"type1": ("type1.tsv", Type1Store), "type2": ("type2.tsv", Type2Store),
          "wiki": ("wiki.tsv", WikiStore)}


def save_store(store, path):
    Path(path).write_text(store.to_tsv(), encoding="utf-8")


def load_store(cls, path):
    return cls.from_tsv(Path(path).read_text(encoding="utf-8"))


def save_binary(store, path):
    """Compact form: magic, version, kind, then the zlib-compressed TSV."""
    kind = store.kind.encode()
    payload = zlib.compress(store.to_tsv().encode("utf-8"), 9)
    with open(path, "wb") as fh:
        fh.write(_MAGIC + struct.pack("<HB", TSV_VERSION, len(kind)) + kind + payload)


def load_binary(path):
    data = Path(path).read_bytes()
    if data[:4] != _MAGIC:
        raise KBError(f"{path}: not a hardcoref binary store")
    version, klen = struct.unpack("<HB", data[4:7])
    if version != TSV_VERSION:
        raise KBError(f"{path}: unsupported store version {version}")
    kind = data[7:7 + klen].decode()
    if kind not in _FILES:
        raise KBError(f"{path}: unknown store kind {kind!r}")
    return _FILES[kind][1].from_tsv(zlib.decompress(data[7 + klen:]).decode("utf-8"))


def save_kb(kb, directory):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for part, (name, _) in _FILES.items():
        save_store(getattr(kb, part), directory / name)
    if len(kb.web):
        kb.web.dump(directory / "web_cache.json")
    if len(kb.polarity):
        kb.polarity.dump(directory / "polarity.tsv")


def load_kb(directory):
    """Load a KB directory; absent files give empty stores."""
    directory = Path(directory)
    if not directory.is_dir():
        raise KBError(f"KB directory {directory} does not exist")
    kb = KnowledgeBase()
    for part, (name, cls) in _FILES.items():
        if (directory / name).exists():
            setattr(kb, part, load_store(cls, directory / name))
    if (directory / "web_cache.json").exists():
        kb.web = WebCache.load(directory / "web_cache.json")
    if (directory / "polarity.tsv").exists():
        kb.polarity = PolarityLexicon.load(directory / "polarity.tsv")
    return kb
