import pytest
from hypothesis import given
from hypothesis import strategies as st

from figlit.corpus import parse_corpus
from figlit.detector import DetectionResult, FigurativeSpan, Matcher, Source, build_matcher, detect_all, detect_idioms
from figlit.errors import LiteralizationError
from figlit.lexicon import LexiconEntry, build_dictionary
from figlit.literalizer import (
    ContextMode,
    audit_rows,
    literalize_corpus,
    literalize_dialog,
    literalize_utterance,
    match_case,
    rewrite_rows,
)

MUSIC_CONTEXT = "I think it's time for me to meet my admirer and make him face the music ."
MUSIC_LITERAL = "I think it's time for me to meet my admirer and make him bear the consequences of his actions ."


@pytest.fixture
def music(tables):
    return build_dictionary([LexiconEntry("face the music", "bear the consequences of his actions", source_id="m1")], tables)


def rewrite(text, dictionary):
    spans = detect_idioms(text, build_matcher(dictionary), "u")
    return literalize_utterance(text, spans, dictionary, "u")


def test_face_the_music(music):
    rec = rewrite(MUSIC_CONTEXT, music)
    assert rec.literalized == MUSIC_LITERAL
    assert [r.verb_form for r in rec.replacements] == ["base"]


def test_inflected_match_keeps_gloss_lemma(music):
    rec = rewrite("He faced the music yesterday.", music)
    assert rec.literalized == "He bear the consequences of his actions yesterday."
    assert rec.replacements[0].verb_form == "past"


def test_between_jobs(tables):
    d = build_dictionary([LexiconEntry("between jobs", "(US) unemployed", source_id="a")], tables)
    assert rewrite("I'm between jobs.", d).literalized == "I'm unemployed."


def test_two_spans_and_case(tables):
    d = build_dictionary(
        [LexiconEntry("between jobs", "unemployed", source_id="a"), LexiconEntry("piece of cake", "something easy", source_id="b")],
        tables,
    )
    rec = rewrite("Between jobs? Piece of cake, really a piece of cake.", d)
    assert rec.literalized == "Unemployed? Something easy, really a something easy."
    assert len(rec.replacements) == 3


def test_no_spans_is_identity(music):
    rec = literalize_utterance("nothing here", [], music)
    assert rec.literalized == "nothing here" and rec.replacements == []


def test_metaphor_spans_ignored(music):
    span = FigurativeSpan("u", 0, 3, "-", None, Source.METAPHOR_SCORE)
    assert literalize_utterance("abc def", [span], music).literalized == "abc def"


def test_overlap_rejected(music):
    a = FigurativeSpan("u", 0, 5, "face the music", "m1")
    b = FigurativeSpan("u", 3, 8, "face the music", "m1")
    with pytest.raises(LiteralizationError, match="overlap"):
        literalize_utterance("x" * 20, [a, b], music)


def test_out_of_bounds_rejected(music):
    with pytest.raises(LiteralizationError, match="out of bounds"):
        literalize_utterance("short", [FigurativeSpan("u", 0, 50, "face the music", "m1")], music)


def test_unknown_entry_rejected(music):
    with pytest.raises(LiteralizationError, match="not in dictionary"):
        literalize_utterance("face the music", [FigurativeSpan("u", 0, 14, "face the music", "zz")], music)


@pytest.mark.parametrize(
    "gloss, replaced, expected",
    [("die", "Bite", "Die"), ("Die", "bite", "die"), ("die", "BITE", "Die"), ("die", "'bite", "die"), ("", "X", "")],
)
def test_match_case(gloss, replaced, expected):
    assert match_case(gloss, replaced) == expected


# -- properties ------------------------------------------------------------

WORDS = ["face", "the", "music", "hello", "between", "jobs", "cake", "piece", "of", "a"]


@st.composite
def texts(draw):
    ws = draw(st.lists(st.sampled_from(WORDS), max_size=20))
    return " ".join(ws) + draw(st.sampled_from(["", ".", " !"]))


@pytest.fixture(scope="module")
def dictionary(tables):
    return build_dictionary(
        [
            LexiconEntry("face the music", "bear the consequences", source_id="a"),
            LexiconEntry("between jobs", "unemployed", source_id="b"),
            LexiconEntry("piece of cake", "something easy", source_id="c"),
        ],
        tables,
    )


@given(texts())
def test_text_outside_spans_preserved(dictionary, text):
    rec = rewrite(text, dictionary)
    out = rec.literalized
    prev_src = prev_dst = 0
    for r in rec.replacements:
        gap = r.span.char_start - prev_src
        assert out[prev_dst : prev_dst + gap] == text[prev_src : r.span.char_start]
        prev_dst += gap
        assert out[prev_dst : prev_dst + len(r.gloss)] == r.gloss
        prev_dst += len(r.gloss)
        prev_src = r.span.char_end
    assert out[prev_dst:] == text[prev_src:]


@given(texts())
def test_length_arithmetic(dictionary, text):
    rec = rewrite(text, dictionary)
    delta = sum(len(r.gloss) - (r.span.char_end - r.span.char_start) for r in rec.replacements)
    assert len(rec.literalized) == len(text) + delta


@given(texts())
def test_literalized_text_has_no_dictionary_surfaces(dictionary, text):
    # none of these glosses contains a surface, so one pass is enough
    assert detect_idioms(rewrite(text, dictionary).literalized, build_matcher(dictionary)) == []


# -- dialogs ---------------------------------------------------------------

DIALOG = [
    "d1\t0\tA\t-\tI am between jobs .\n",
    "d1\t1\tB\t-\tThat is a piece of cake for you .\n",
    "d1\t2\tA\t-\tTime to face the music .\n",
    "d2\t0\tA\t-\tHello .\n",
]


@pytest.fixture
def corpus():
    return parse_corpus(DIALOG)


def test_last_utterance_mode(corpus, dictionary):
    det = detect_all(corpus, build_matcher(dictionary))
    recs = literalize_dialog(corpus.dialogs[0], det, dictionary, ContextMode.LAST_UTTERANCE)
    assert [r.original == r.literalized for r in recs] == [True, True, False]
    assert recs[2].literalized == "Time to bear the consequences ."


def test_anywhere_mode(corpus, dictionary):
    det = detect_all(corpus, build_matcher(dictionary))
    recs = literalize_corpus(corpus, det, dictionary, ContextMode.ANYWHERE)
    assert [r.literalized for r in recs] == [
        "I am unemployed .",
        "That is a something easy for you .",
        "Time to bear the consequences .",
        "Hello .",
    ]


def test_eligible_restricts(corpus, dictionary):
    det = detect_all(corpus, build_matcher(dictionary))
    recs = literalize_corpus(corpus, det, dictionary, ContextMode.ANYWHERE, eligible={"d1-1"})
    assert [r.original != r.literalized for r in recs] == [False, True, False, False]


def test_empty_detection_is_identity(corpus, dictionary):
    recs = literalize_corpus(corpus, DetectionResult(), dictionary)
    assert all(r.original == r.literalized for r in recs)
    assert audit_rows(recs) == []


def test_rows(corpus, dictionary):
    det = detect_all(corpus, build_matcher(dictionary))
    recs = literalize_corpus(corpus, det, dictionary)
    assert rewrite_rows(recs)[0] == ("d1-0", "I am between jobs .", "I am unemployed .", 1)
    assert audit_rows(recs) == [
        ("d1-0", "between jobs", "unemployed", "-"),
        ("d1-1", "piece of cake", "something easy", "-"),
        ("d1-2", "face the music", "bear the consequences", "base"),
    ]


def test_matcher_without_refs_cannot_literalize(corpus, dictionary):
    det = detect_all(corpus, Matcher(dictionary.surfaces()))
    with pytest.raises(LiteralizationError):
        literalize_corpus(corpus, det, dictionary)
