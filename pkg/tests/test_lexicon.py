import pytest
from hypothesis import given, strategies as st

from hardcoref.lexicon import (CONNECTIVES, REVERSING_CONNECTIVES, lemmatize, name_gender, noun_variants,
                               pluralize, pronoun_features, verb_variants)


@pytest.mark.parametrize("word,pos,lemma", [
    ("ate", "VERB", "eat"), ("owed", "VERB", "owe"), ("hopped", "VERB", "hop"),
    ("chased", "VERB", "chase"), ("tried", "VERB", "try"), ("paid", "VERB", "pay"),
    ("was", "AUX", "be"), ("men", "NOUN", "man"), ("worms", "NOUN", "worm"),
    ("John", "PROPN", "john"), ("The", "DET", "the"),
])
def test_lemmatize(word, pos, lemma):
    assert lemmatize(word, pos) == lemma


def test_inflection():
    assert pluralize("city") == "cities"
    assert pluralize("box") == "boxes"
    assert noun_variants("worm") == ["worm", "worms"]
    assert verb_variants("hop") == ["hop", "hops", "hopped"]
    assert verb_variants("owe") == ["owe", "owes", "owed"]
    assert verb_variants("eat") == ["eat", "eats", "ate"]
    assert verb_variants("be") == ["be", "is", "are", "was", "were"]


def test_pronoun_and_name_tables():
    assert pronoun_features("He") == ("masc", "sing")
    assert pronoun_features("them") == ("unknown", "plur")
    assert pronoun_features("table") == ("unknown", "unknown")
    assert name_gender("Mary") == "fem"
    assert name_gender("Zork") == "unknown"


def test_connectives():
    assert len(CONNECTIVES) == 12
    assert REVERSING_CONNECTIVES == {"but", "although", "though", "however", "yet"}


@given(st.sampled_from(["walk", "chase", "try", "hop", "fix", "play", "owe", "stop", "hope", "carry"]))
def test_regular_verb_forms_lemmatize_back(verb):
    for form in verb_variants(verb):
        assert lemmatize(form, "VERB") == verb
