"""Closed-class word lists and a small rule-based lemmatizer / inflector.

Everything here is a bundled table: pronoun features, discourse connectives,
first-name genders, and the irregular forms the lemmatizer needs.
"""

# (gender, number, person)
PRONOUNS = {
    "he": ("masc", "sing", 3), "him": ("masc", "sing", 3), "his": ("masc", "sing", 3),
    "himself": ("masc", "sing", 3),
    "she": ("fem", "sing", 3), "her": ("fem", "sing", 3), "hers": ("fem", "sing", 3),
    "herself": ("fem", "sing", 3),
    "it": ("neut", "sing", 3), "its": ("neut", "sing", 3), "itself": ("neut", "sing", 3),
    "they": ("unknown", "plur", 3), "them": ("unknown", "plur", 3),
    "their": ("unknown", "plur", 3), "theirs": ("unknown", "plur", 3),
    "themselves": ("unknown", "plur", 3),
    "i": ("unknown", "sing", 1), "me": ("unknown", "sing", 1), "my": ("unknown", "sing", 1),
    "mine": ("unknown", "sing", 1), "myself": ("unknown", "sing", 1),
    "we": ("unknown", "plur", 1), "us": ("unknown", "plur", 1), "our": ("unknown", "plur", 1),
    "ours": ("unknown", "plur", 1),
    "you": ("unknown", "unknown", 2), "your": ("unknown", "unknown", 2),
    "yours": ("unknown", "unknown", 2),
}

# 12 items; the first five reverse polarity.
CONNECTIVES = (
    "but", "although", "though", "however", "yet",
    "because", "so", "therefore", "since", "thus", "hence", "while",
)
REVERSING_CONNECTIVES = frozenset(CONNECTIVES[:5])

NEGATIVE_COMPARATIVES = frozenset({"less", "lower", "fewer", "least", "lowest"})

RELATIVE_PRONOUNS = frozenset({"who", "whom", "which", "that", "whose"})

BE_FORMS = {"be": "be", "is": "be", "are": "be", "was": "be", "were": "be",
            "am": "be", "been": "be", "being": "be", "'s": "be", "'re": "be"}

FIRST_NAMES = {
    # masculine
    **dict.fromkeys(
        "john bill tom jim kevin bob carl paul greg dan max sam rick mike "
        "george peter james david mark steve frank joe adam fred ben ray "
        "pete luke jack harry ted ron alan eric nick".split(), "masc"),
    # feminine
    **dict.fromkeys(
        "mary ann anna sue kate lucy emma jane susan alice beth carol "
        "diana ella grace helen iris julia laura linda nora olivia rose "
        "sarah tina wendy amy joan lily".split(), "fem"),
}

IRREGULAR_VERBS = {
    "be": ("was", "were", "been", "is", "are", "am", "being"),
    "have": ("had", "has", "having"),
    "do": ("did", "does", "done", "doing"),
    "eat": ("ate", "eaten"),
    "go": ("went", "gone", "goes"),
    "beat": ("beaten",),
    "catch": ("caught",),
    "find": ("found",),
    "give": ("gave", "given"),
    "get": ("got", "gotten"),
    "know": ("knew", "known"),
    "make": ("made",),
    "pay": ("paid",),
    "see": ("saw", "seen"),
    "steal": ("stole", "stolen"),
    "take": ("took", "taken"),
    "win": ("won",),
    "lose": ("lost",),
    "hit": (),
    "cut": (),
    "put": (),
    "fall": ("fell", "fallen"),
    "feel": ("felt",),
    "fight": ("fought",),
    "break": ("broke", "broken"),
    "buy": ("bought",),
    "bring": ("brought",),
    "think": ("thought",),
    "teach": ("taught",),
    "tell": ("told",),
    "say": ("said",),
    "sell": ("sold",),
    "send": ("sent",),
    "leave": ("left",),
    "hold": ("held",),
    "fly": ("flew", "flown", "flies"),
    "run": ("ran",),
    "swim": ("swam", "swum"),
    "sit": ("sat",),
    "stand": ("stood",),
    "throw": ("threw", "thrown"),
    "write": ("wrote", "written"),
    "can": ("could",),
    "will": ("would",),
    "shall": ("should",),
    "may": ("might",),
}
IRREGULAR_NOUNS = {
    "man": "men", "woman": "women", "child": "children", "person": "people",
    "mouse": "mice", "foot": "feet", "tooth": "teeth", "fish": "fish",
    "sheep": "sheep", "deer": "deer", "knife": "knives", "wife": "wives",
    "leaf": "leaves", "shelf": "shelves", "councilman": "councilmen",
}

_VERB_FORMS = {form: lemma for lemma, forms in IRREGULAR_VERBS.items() for form in forms}
_VERB_FORMS.update(BE_FORMS)
_NOUN_FORMS = {plural: lemma for lemma, plural in IRREGULAR_NOUNS.items()}
_VOWELS = set("aeiou")


# Verbs whose -ed/-ing forms drop a final e.
E_FINAL_VERBS = frozenset("""
owe like hope love hate receive arrive serve deserve admire believe achieve move
save score chase race argue use refuse excuse invite fire hire tire rule blame
smile force notice advise promise praise raise judge manage change charge scare
share care dare prepare compare declare ignore explore adore bake decide provide
divide hide ride guide vote note quote bite complete create trade phone dine
close choose produce reduce introduce cause pause please tease release increase
excite unite continue rescue amuse confuse accuse abuse live arrange behave
dislike escape face fade graze grieve hike joke lecture leave move name operate
persuade place pledge rate realize recognize replace retire scrape skate solve
starve struggle surprise survive trace trouble wave welcome wipe
""".split())


def _strip_double(stem):
    if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] not in "lsz" + "".join(_VOWELS):
        return stem[:-1]
    return stem


def _restore_stem(stem):
    if stem + "e" in E_FINAL_VERBS:
        return stem + "e"
    return _strip_double(stem)


def _verb_lemma(word):
    if word in _VERB_FORMS:
        return _VERB_FORMS[word]
    if word in IRREGULAR_VERBS or word in E_FINAL_VERBS:
        return word
    if word.endswith(("ies", "ied")) and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith(("ches", "shes", "sses", "xes", "zes")):
        return word[:-2]
    if word.endswith("ing") and len(word) > 4:
        return _restore_stem(word[:-3])
    if word.endswith("ed") and len(word) > 3:
        return _restore_stem(word[:-2])
    if word.endswith("s") and not word.endswith("ss") and len(word) > 3:
        return word[:-1]
    return word


def _noun_lemma(word):
    if word in _NOUN_FORMS:
        return _NOUN_FORMS[word]
    if word in IRREGULAR_NOUNS:
        return word
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith(("ches", "shes", "sses", "xes")):
        return word[:-2]
    if word.endswith("s") and not word.endswith(("ss", "us", "is")) and len(word) > 3:
        return word[:-1]
    return word


def lemmatize(word, pos):
    """Lemma of `word` given its coarse POS tag."""
    w = word.lower()
    if pos in ("VERB", "AUX"):
        return _verb_lemma(w)
    if pos == "NOUN":
        return _noun_lemma(w)
    if pos == "PROPN":
        return w
    return w


def pluralize(noun):
    if noun in IRREGULAR_NOUNS:
        return IRREGULAR_NOUNS[noun]
    if noun.endswith("y") and len(noun) > 2 and noun[-2] not in _VOWELS:
        return noun[:-1] + "ies"
    if noun.endswith(("s", "x", "z", "ch", "sh")):
        return noun + "es"
    return noun + "s"


def noun_variants(noun):
    """Singular and plural surface forms of a noun lemma."""
    plural = pluralize(noun)
    return [noun] if plural == noun else [noun, plural]


def _doubles(verb):
    """One-vowel consonant-vowel-consonant stems double before -ed (hop, stop)."""
    vowels = [c in _VOWELS for c in verb]
    return (len(verb) >= 3 and sum(vowels) == 1 and not vowels[-3] and vowels[-2]
            and not vowels[-1] and verb[-1] not in "wxy")


def verb_variants(verb):
    """A handful of tensed surface forms of a verb lemma, lemma first."""
    if verb == "be":
        return ["be", "is", "are", "was", "were"]
    forms = [verb]
    irregular = IRREGULAR_VERBS.get(verb)
    if verb.endswith("y") and len(verb) > 2 and verb[-2] not in _VOWELS:
        third, past = verb[:-1] + "ies", verb[:-1] + "ied"
    elif verb.endswith(("s", "x", "z", "ch", "sh", "o")):
        third, past = verb + "es", verb + "ed"
    elif verb.endswith("e"):
        third, past = verb + "s", verb + "d"
    elif _doubles(verb):
        third, past = verb + "s", verb + verb[-1] + "ed"
    else:
        third, past = verb + "s", verb + "ed"
    if irregular is not None:
        past = irregular[0] if irregular else verb
    for form in (third, past):
        if form not in forms:
            forms.append(form)
    return forms


def pronoun_features(word):
    """(gender, number) for a listed pronoun, ('unknown', 'unknown') otherwise."""
    feats = PRONOUNS.get(word.lower())
    if feats is None:
        return "unknown", "unknown"
    return feats[0], feats[1]


def name_gender(word):
    return FIRST_NAMES.get(word.lower(), "unknown")
