"""Bundled fixtures: a Winograd-style twin-sentence set, a toy knowledge
corpus, and a seeded synthetic corpus generator.

Sentences are written as ``word/POS`` tokens. A mention head carries
``@cluster`` (``@a`` or ``@b``); a trailing ``!`` marks the target pronoun,
whose candidates are the first two non-pronoun mentions.

Run ``python -m hardcoref.fixtures`` to regenerate the files in ``data/``.
"""
import json
import random

from .docmodel import Document, Mention, Token, document_from_dict, dump_corpus, data_path, mention_features
from .extract import governing_group
from .lexicon import lemmatize

# (category, sentence with the first reading, sentence with the second reading)
WINOGRAD_ITEMS = [
    ("Cat1",
     "The/DET fish/NOUN@a ate/VERB the/DET worm/NOUN@b because/SCONJ it/PRON@a! was/AUX hungry/ADJ ./PUNCT",
     "The/DET fish/NOUN@a ate/VERB the/DET worm/NOUN@b because/SCONJ it/PRON@b! was/AUX tasty/ADJ ./PUNCT"),
    ("Cat1",
     "The/DET trophy/NOUN@a did/AUX not/PART fit/VERB into/ADP the/DET suitcase/NOUN@b because/SCONJ "
     "it/PRON@a! was/AUX too/ADV big/ADJ ./PUNCT",
     "The/DET trophy/NOUN@a did/AUX not/PART fit/VERB into/ADP the/DET suitcase/NOUN@b because/SCONJ "
     "it/PRON@b! was/AUX too/ADV small/ADJ ./PUNCT"),
    ("Cat1",
     "The/DET man/NOUN@a could/AUX not/PART lift/VERB his/PRON@a son/NOUN@b because/SCONJ he/PRON@a! "
     "was/AUX so/ADV weak/ADJ ./PUNCT",
     "The/DET man/NOUN@a could/AUX not/PART lift/VERB his/PRON@a son/NOUN@b because/SCONJ he/PRON@b! "
     "was/AUX so/ADV heavy/ADJ ./PUNCT"),
    ("Cat1",
     "The/DET cat/NOUN@a caught/VERB the/DET mouse/NOUN@b because/SCONJ it/PRON@a! was/AUX quick/ADJ ./PUNCT",
     "The/DET cat/NOUN@a caught/VERB the/DET mouse/NOUN@b because/SCONJ it/PRON@b! was/AUX slow/ADJ ./PUNCT"),
    ("Cat1",
     "The/DET bee/NOUN@a landed/VERB on/ADP the/DET flower/NOUN@b because/SCONJ it/PRON@a! "
     "wanted/VERB pollen/NOUN ./PUNCT",
     "The/DET bee/NOUN@a landed/VERB on/ADP the/DET flower/NOUN@b because/SCONJ it/PRON@b! "
     "had/VERB pollen/NOUN ./PUNCT"),
    ("Cat1",
     "The/DET ball/NOUN@a broke/VERB the/DET window/NOUN@b because/SCONJ it/PRON@a! was/AUX heavy/ADJ ./PUNCT",
     "The/DET ball/NOUN@a broke/VERB the/DET window/NOUN@b because/SCONJ it/PRON@b! was/AUX fragile/ADJ ./PUNCT"),
    ("Cat1",
     "The/DET knife/NOUN@a cut/VERB the/DET bread/NOUN@b because/SCONJ it/PRON@a! was/AUX sharp/ADJ ./PUNCT",
     "The/DET knife/NOUN@a cut/VERB the/DET bread/NOUN@b because/SCONJ it/PRON@b! was/AUX soft/ADJ ./PUNCT"),
    ("Cat1",
     "The/DET councilmen/NOUN@a refused/VERB the/DET demonstrators/NOUN@b a/DET permit/NOUN because/SCONJ "
     "they/PRON@a! feared/VERB violence/NOUN ./PUNCT",
     "The/DET councilmen/NOUN@a refused/VERB the/DET demonstrators/NOUN@b a/DET permit/NOUN because/SCONJ "
     "they/PRON@b! advocated/VERB violence/NOUN ./PUNCT"),
    ("Cat1",
     "The/DET lion/NOUN@a attacked/VERB the/DET deer/NOUN@b because/SCONJ it/PRON@a! was/AUX hungry/ADJ ./PUNCT",
     "The/DET lion/NOUN@a attacked/VERB the/DET deer/NOUN@b because/SCONJ it/PRON@b! was/AUX weak/ADJ ./PUNCT"),
    ("Cat1",
     "The/DET dog/NOUN@a chased/VERB the/DET rabbit/NOUN@b because/SCONJ it/PRON@a! was/AUX aggressive/ADJ ./PUNCT",
     "The/DET dog/NOUN@a chased/VERB the/DET rabbit/NOUN@b because/SCONJ it/PRON@b! was/AUX scared/ADJ ./PUNCT"),
    ("Cat2",
     "Tom/PROPN@a paid/VERB Bill/PROPN@b because/SCONJ he/PRON@a! owed/VERB money/NOUN ./PUNCT",
     "Tom/PROPN@a paid/VERB Bill/PROPN@b because/SCONJ he/PRON@b! deserved/VERB money/NOUN ./PUNCT"),
    ("Cat2",
     "John/PROPN@a beat/VERB Mike/PROPN@b because/SCONJ he/PRON@a! trained/VERB hard/ADV ./PUNCT",
     "John/PROPN@a beat/VERB Mike/PROPN@b although/SCONJ he/PRON@b! trained/VERB hard/ADV ./PUNCT"),
    ("Cat2",
     "Ann/PROPN@a called/VERB Mary/PROPN@b because/SCONJ she/PRON@a! wanted/VERB advice/NOUN ./PUNCT",
     "Ann/PROPN@a called/VERB Mary/PROPN@b but/CCONJ she/PRON@b! ignored/VERB the/DET call/NOUN ./PUNCT"),
    ("Cat2",
     "Sue/PROPN@a thanked/VERB Kate/PROPN@b because/SCONJ she/PRON@a! received/VERB her/PRON@b help/NOUN ./PUNCT",
     "Sue/PROPN@a thanked/VERB Kate/PROPN@b because/SCONJ she/PRON@b! offered/VERB her/PRON@b help/NOUN ./PUNCT"),
    ("Cat2",
     "Dan/PROPN@a fired/VERB Max/PROPN@b because/SCONJ he/PRON@b! stole/VERB money/NOUN ./PUNCT",
     "Dan/PROPN@a fired/VERB Max/PROPN@b because/SCONJ he/PRON@a! found/VERB evidence/NOUN ./PUNCT"),
    ("Cat2",
     "Lucy/PROPN@a visited/VERB Emma/PROPN@b because/SCONJ she/PRON@a! missed/VERB friends/NOUN ./PUNCT",
     "Lucy/PROPN@a visited/VERB Emma/PROPN@b because/SCONJ she/PRON@b! invited/VERB guests/NOUN ./PUNCT"),
    ("Cat2",
     "Bob/PROPN@a warned/VERB Carl/PROPN@b because/SCONJ he/PRON@a! saw/VERB danger/NOUN ./PUNCT",
     "Bob/PROPN@a warned/VERB Carl/PROPN@b but/CCONJ he/PRON@b! ignored/VERB him/PRON@a ./PUNCT"),
    ("Cat2",
     "Paul/PROPN@a admired/VERB Greg/PROPN@b because/SCONJ he/PRON@b! won/VERB races/NOUN ./PUNCT",
     "Paul/PROPN@a admired/VERB Greg/PROPN@b because/SCONJ he/PRON@a! loved/VERB sport/NOUN ./PUNCT"),
    ("Cat2",
     "Jim/PROPN@a hired/VERB Kevin/PROPN@b because/SCONJ he/PRON@a! needed/VERB help/NOUN ./PUNCT",
     "Jim/PROPN@a hired/VERB Kevin/PROPN@b because/SCONJ he/PRON@b! had/VERB experience/NOUN ./PUNCT"),
    ("Cat2",
     "Alice/PROPN@a taught/VERB Beth/PROPN@b because/SCONJ she/PRON@a! knew/VERB French/PROPN ./PUNCT",
     "Alice/PROPN@a taught/VERB Beth/PROPN@b because/SCONJ she/PRON@b! wanted/VERB lessons/NOUN ./PUNCT"),
    ("Cat3",
     "The/DET lamp/NOUN@a lit/VERB the/DET table/NOUN@b because/SCONJ it/PRON@a! glowed/VERB ./PUNCT",
     "The/DET lamp/NOUN@a lit/VERB the/DET table/NOUN@b because/SCONJ it/PRON@b! shone/VERB ./PUNCT"),
    ("Cat3",
     "The/DET boat/NOUN@a passed/VERB the/DET island/NOUN@b while/SCONJ it/PRON@a! drifted/VERB ./PUNCT",
     "The/DET boat/NOUN@a passed/VERB the/DET island/NOUN@b while/SCONJ it/PRON@b! eroded/VERB ./PUNCT"),
    ("Cat3",
     "Ray/PROPN@a met/VERB Ted/PROPN@b before/SCONJ he/PRON@a! left/VERB ./PUNCT",
     "Ray/PROPN@a met/VERB Ted/PROPN@b after/SCONJ he/PRON@b! arrived/VERB ./PUNCT"),
    ("Cat3",
     "The/DET truck/NOUN@a hit/VERB the/DET car/NOUN@b because/SCONJ it/PRON@a! swerved/VERB ./PUNCT",
     "The/DET truck/NOUN@a hit/VERB the/DET car/NOUN@b because/SCONJ it/PRON@b! stalled/VERB ./PUNCT"),
]

_IRREGULAR_LEMMAS = {"lit": "light", "shone": "shine", "met": "meet", "left": "leave"}

# sentence -> repetitions in the knowledge corpus
KB_SENTENCES = [
    # single-triple knowledge for the first category
    ("The/DET fish/NOUN was/AUX hungry/ADJ ./PUNCT", 4),
    ("The/DET worm/NOUN was/AUX tasty/ADJ ./PUNCT", 4),
    ("The/DET trophy/NOUN was/AUX big/ADJ ./PUNCT", 4),
    ("The/DET suitcase/NOUN was/AUX small/ADJ ./PUNCT", 4),
    ("The/DET man/NOUN was/AUX weak/ADJ ./PUNCT", 4),
    ("The/DET son/NOUN was/AUX heavy/ADJ ./PUNCT", 4),
    ("The/DET cat/NOUN was/AUX quick/ADJ ./PUNCT", 4),
    ("The/DET mouse/NOUN was/AUX slow/ADJ ./PUNCT", 4),
    ("The/DET bee/NOUN wanted/VERB pollen/NOUN ./PUNCT", 4),
    ("The/DET flower/NOUN had/VERB pollen/NOUN ./PUNCT", 4),
    ("The/DET ball/NOUN was/AUX heavy/ADJ ./PUNCT", 4),
    ("The/DET window/NOUN was/AUX fragile/ADJ ./PUNCT", 4),
    ("The/DET knife/NOUN was/AUX sharp/ADJ ./PUNCT", 4),
    ("The/DET bread/NOUN was/AUX soft/ADJ ./PUNCT", 4),
    ("The/DET councilmen/NOUN feared/VERB violence/NOUN ./PUNCT", 4),
    ("The/DET demonstrators/NOUN advocated/VERB violence/NOUN ./PUNCT", 4),
    ("The/DET lion/NOUN was/AUX hungry/ADJ ./PUNCT", 4),
    ("The/DET deer/NOUN was/AUX weak/ADJ ./PUNCT", 4),
    ("The/DET dog/NOUN was/AUX aggressive/ADJ ./PUNCT", 4),
    ("The/DET rabbit/NOUN was/AUX scared/ADJ ./PUNCT", 4),
    # neighbor-pair knowledge for the second category
    ("Rick/PROPN paid/VERB Nora/PROPN because/SCONJ he/PRON owed/VERB money/NOUN ./PUNCT", 2),
    ("Iris/PROPN paid/VERB Sam/PROPN because/SCONJ she/PRON owed/VERB rent/NOUN ./PUNCT", 2),
    ("Rick/PROPN paid/VERB Nora/PROPN because/SCONJ she/PRON deserved/VERB money/NOUN ./PUNCT", 2),
    ("Tina/PROPN paid/VERB Fred/PROPN because/SCONJ he/PRON deserved/VERB it/PRON ./PUNCT", 2),
    ("Sam/PROPN beat/VERB Wendy/PROPN because/SCONJ he/PRON trained/VERB hard/ADV ./PUNCT", 4),
    ("Sam/PROPN beat/VERB Wendy/PROPN although/SCONJ she/PRON trained/VERB hard/ADV ./PUNCT", 4),
    ("Nora/PROPN called/VERB Ben/PROPN because/SCONJ she/PRON wanted/VERB advice/NOUN ./PUNCT", 4),
    ("Nora/PROPN called/VERB Ben/PROPN but/CCONJ he/PRON ignored/VERB the/DET call/NOUN ./PUNCT", 4),
    ("Iris/PROPN thanked/VERB Fred/PROPN because/SCONJ she/PRON received/VERB help/NOUN ./PUNCT", 4),
    ("Iris/PROPN thanked/VERB Fred/PROPN because/SCONJ he/PRON offered/VERB help/NOUN ./PUNCT", 4),
    ("Rick/PROPN fired/VERB Tina/PROPN because/SCONJ she/PRON stole/VERB money/NOUN ./PUNCT", 4),
    ("Rick/PROPN fired/VERB Tina/PROPN because/SCONJ he/PRON found/VERB evidence/NOUN ./PUNCT", 4),
    ("Wendy/PROPN visited/VERB Sam/PROPN because/SCONJ she/PRON missed/VERB friends/NOUN ./PUNCT", 4),
    ("Wendy/PROPN visited/VERB Sam/PROPN because/SCONJ he/PRON invited/VERB guests/NOUN ./PUNCT", 4),
    ("Ben/PROPN warned/VERB Iris/PROPN because/SCONJ he/PRON saw/VERB danger/NOUN ./PUNCT", 4),
    ("Ben/PROPN warned/VERB Iris/PROPN but/CCONJ she/PRON ignored/VERB him/PRON ./PUNCT", 4),
    ("Fred/PROPN admired/VERB Nora/PROPN because/SCONJ she/PRON won/VERB races/NOUN ./PUNCT", 4),
    ("Fred/PROPN admired/VERB Nora/PROPN because/SCONJ he/PRON loved/VERB sport/NOUN ./PUNCT", 4),
    ("Tina/PROPN hired/VERB Rick/PROPN because/SCONJ she/PRON needed/VERB help/NOUN ./PUNCT", 4),
    ("Tina/PROPN hired/VERB Rick/PROPN because/SCONJ he/PRON had/VERB experience/NOUN ./PUNCT", 4),
    ("Wendy/PROPN taught/VERB Ben/PROPN because/SCONJ she/PRON knew/VERB French/PROPN ./PUNCT", 4),
    ("Wendy/PROPN taught/VERB Ben/PROPN because/SCONJ he/PRON wanted/VERB lessons/NOUN ./PUNCT", 4),
    # filler that touches none of the knowledge above
    ("The/DET fish/NOUN swam/VERB in/ADP the/DET lake/NOUN ./PUNCT", 3),
    ("The/DET farmer/NOUN sold/VERB the/DET bread/NOUN ./PUNCT", 2),
    ("The/DET teacher/NOUN opened/VERB the/DET window/NOUN ./PUNCT", 2),
    ("The/DET river/NOUN flooded/VERB the/DET valley/NOUN ./PUNCT", 2),
]

POLARITY = {
    "beat": "+", "train": "+", "win": "+", "love": "+", "like": "+", "enjoy": "+",
    "help": "+", "praise": "+", "happy": "+", "kind": "+", "succeed": "+",
    "lose": "-", "hate": "-", "steal": "-", "fear": "-", "hurt": "-", "sad": "-",
    "rude": "-", "fail": "-", "cry": "-", "suffer": "-", "complain": "-",
}

WEB_CACHE = {
    "fish hungry": 120, "fishes hungry": 40, "worm hungry": 12,
    "worm tasty": 95, "worms tasty": 55, "fish tasty": 70,
    "hungry fish": 300, "hungry worm": 20, "tasty worm": 60, "tasty fish": 400,
    "trophy big": 80, "suitcase big": 30, "suitcase small": 45, "trophy small": 15,
    "knife sharp": 500, "bread sharp": 3, "bread soft": 410, "knife soft": 2,
}


def parse_sentence(text):
    """'word/POS[@cluster][!]' tokens -> (tokens, [(index, cluster, target)])."""
    tokens, marks = [], []
    for i, item in enumerate(text.split()):
        target = item.endswith("!")
        item = item.rstrip("!")
        cluster = None
        if "@" in item:
            item, cluster = item.rsplit("@", 1)
        word, pos = item.rsplit("/", 1)
        lemma = _IRREGULAR_LEMMAS.get(word.lower()) or lemmatize(word, pos)
        tokens.append(Token(word, lemma, pos))
        if cluster is not None:
            marks.append((i, cluster, target))
    return tokens, marks


def _span_start(sent, head):
    i = head
    while i > 0 and sent[i - 1].pos in ("DET", "ADJ"):
        i -= 1
    return i


def make_document(doc_id, sentences, category=None, split=None):
    """Build a Document from marked-up sentences."""
    sents, raw = [], []
    for s, text in enumerate(sentences):
        tokens, marks = parse_sentence(text)
        sents.append(tokens)
        for head, cluster, target in marks:
            found = governing_group(tokens, head)
            role = found[1] if found else "other"
            raw.append((s, head, cluster, target, role))
    mentions = []
    non_pronouns = [k for k, (s, h, *_ ) in enumerate(raw) if sents[s][h].pos != "PRON"]
    for k, (s, head, cluster, target, role) in enumerate(raw):
        tok = sents[s][head]
        gender, number = mention_features(tok)
        cands = tuple(non_pronouns[:2]) if target else None
        mentions.append(Mention(k, s, _span_start(sents[s], head), head + 1, head, role,
                                tok.pos == "PRON", cluster, cands, tok.lemma, gender, number))
    # round-trip through the record form so every invariant is checked
    return document_from_dict(Document(doc_id, sents, mentions, category, split).to_dict())


def winograd_fixture():
    """Two documents per item; items alternate between train and test
    within each category."""
    docs = []
    seen = {}
    for n, (cat, first, second) in enumerate(WINOGRAD_ITEMS):
        k = seen.get(cat, 0)
        seen[cat] = k + 1
        split = "train" if k % 2 == 0 else "test"
        for j, text in enumerate((first, second)):
            docs.append(make_document(f"w{n:02d}{'ab'[j]}", [text], cat, split))
    return docs


def kb_corpus():
    docs = []
    for n, (text, reps) in enumerate(KB_SENTENCES):
        for r in range(reps):
            docs.append(make_document(f"kb{n:02d}-{r}", [text]))
    return docs


# -- synthetic corpus -----------------------------------------------------

_NOUNS = "dog cat bird farmer teacher doctor river car book house garden letter storm city tree".split()
_NAMES_M = "Tom Bill John Mike Dan Max Paul Greg Sam Rick".split()
_NAMES_F = "Ann Mary Sue Kate Lucy Emma Nora Iris Tina Wendy".split()
_VERBS = [("saw", "VERB"), ("helped", "VERB"), ("called", "VERB"), ("chased", "VERB"), ("found", "VERB"),
          ("paid", "VERB"), ("visited", "VERB"), ("warned", "VERB"), ("liked", "VERB"), ("hated", "VERB")]
_INTRANS = [("slept", "VERB"), ("left", "VERB"), ("smiled", "VERB"), ("cried", "VERB"), ("won", "VERB")]
_ADJS = "happy tired angry hungry tall quick sad".split()
_CONNS = [("because", "SCONJ"), ("but", "CCONJ"), ("although", "SCONJ"), ("so", "CCONJ"), ("and", "CCONJ")]


def _np(rng):
    """A random noun phrase as marked-up tokens."""
    kind = rng.random()
    if kind < 0.4:
        name = rng.choice(_NAMES_M + _NAMES_F)
        return [f"{name}/PROPN"], name
    noun = rng.choice(_NOUNS)
    if rng.random() < 0.3:
        return ["the/DET", f"{rng.choice(_ADJS)}/ADJ", f"{noun}/NOUN"], noun
    return ["the/DET", f"{noun}/NOUN"], noun


def _pronoun_for(head):
    if head in _NAMES_M:
        return "he"
    if head in _NAMES_F:
        return "she"
    return "it"


def synthetic_sentence(rng, annotate=False):
    """One random sentence; with `annotate`, noun-phrase heads carry a
    placeholder cluster mark filled in by synthetic_document."""
    subj, shead = _np(rng)
    form = rng.random()
    mark = "@?" if annotate else ""
    subj[-1] += mark
    if form < 0.25:
        toks = subj + ["was/AUX", f"{rng.choice(_ADJS)}/ADJ"]
    elif form < 0.45:
        verb = rng.choice(_INTRANS)
        toks = subj + [f"{verb[0]}/{verb[1]}"]
    else:
        verb = rng.choice(_VERBS)
        obj, ohead = _np(rng)
        obj[-1] += mark
        toks = subj + [f"{verb[0]}/{verb[1]}"] + obj
        if rng.random() < 0.6:
            conn = rng.choice(_CONNS)
            pron = _pronoun_for(rng.choice([shead, ohead]))
            verb2 = rng.choice(_VERBS + _INTRANS)
            toks += [f"{conn[0]}/{conn[1]}", f"{pron}/PRON{mark}", f"{verb2[0]}/{verb2[1]}"]
            if verb2 in _VERBS:
                obj2, _ = _np(rng)
                obj2[-1] += mark
                toks += obj2
    return " ".join(toks + ["./PUNCT"])


def synthetic_corpus(n_sentences, seed=0, sentences_per_doc=5):
    """Unannotated documents of random sentences."""
    rng = random.Random(seed)
    docs = []
    k = 0
    while k < n_sentences:
        m = min(sentences_per_doc, n_sentences - k)
        texts = [synthetic_sentence(rng) for _ in range(m)]
        docs.append(make_document(f"syn{seed}-{len(docs):05d}", texts))
        k += m
    return docs


def synthetic_document(rng, max_mentions=10, doc_id="rand"):
    """A random annotated document with at most `max_mentions` mentions and
    random gold clusters (pronouns always join an earlier cluster)."""
    while True:
        texts = [synthetic_sentence(rng, annotate=True) for _ in range(rng.randint(1, 3))]
        if sum(t.count("@?") for t in texts) <= max_mentions:
            break
    clusters = []
    out = []
    for text in texts:
        parts = []
        for tok in text.split():
            if tok.endswith("@?"):
                is_pron = "/PRON" in tok
                if clusters and (is_pron or rng.random() < 0.3):
                    c = rng.choice(clusters)
                else:
                    c = f"c{len(clusters)}"
                    clusters.append(c)
                tok = tok[:-1] + c
            parts.append(tok)
        out.append(" ".join(parts))
    return make_document(doc_id, out)


def write_fixtures(directory=None):
    directory = data_path("") if directory is None else directory
    dump_corpus(winograd_fixture(), directory / "winograd_fixture.jsonl")
    dump_corpus(kb_corpus(), directory / "kb_corpus.jsonl")
    with open(directory / "polarity.tsv", "w", encoding="utf-8") as fh:
        for lemma in sorted(POLARITY):
            fh.write(f"{lemma}\t{POLARITY[lemma]}\n")
    with open(directory / "web_cache.json", "w", encoding="utf-8") as fh:
        json.dump(dict(sorted(WEB_CACHE.items())), fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    write_fixtures()
