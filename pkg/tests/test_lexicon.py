import io
import itertools
import logging
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from figlit import tsv
from figlit.errors import EmptyDictionaryError, GlossEmptyAfterCleaning, LexiconFormatError
from figlit.inflection import verb_inflections
from figlit.lexicon import (
    ConstructType,
    LexiconEntry,
    build_dictionary,
    clean_gloss,
    dictionary_records,
    expand_entry,
    parse_dictionary,
    parse_lexicon,
    save_dictionary,
    load_dictionary,
)


def entry(surface, gloss="g", source_id="e1", ctype=ConstructType.IDIOM):
    return LexiconEntry(surface, gloss, construct_type=ctype, source_id=source_id)


# -- parse_lexicon ---------------------------------------------------------


def test_parse_typed_entries():
    entries = parse_lexicon(["between jobs\tunemployed\teuphemism\n", "bite the dust\tdie\teuphemism\n"])
    assert entries[0].construct_type is ConstructType.EUPHEMISM
    assert entries[0].gloss_raw == "unemployed"
    assert entries[1].surface_template == "bite the dust"


def test_parse_empty_stream():
    assert parse_lexicon([]) == []


def test_parse_comments_and_default_type():
    entries = parse_lexicon(["# header\n", "\n", "piece of cake\tsomething easy\n"])
    assert len(entries) == 1
    assert entries[0].construct_type is ConstructType.UNKNOWN
    assert entries[0].source_id == "L000003"


def test_parse_explicit_source_id():
    (e,) = parse_lexicon(["x y\tz\tidiom\tW42\n"])
    assert e.source_id == "W42"


@pytest.mark.parametrize(
    "line, lineno",
    [
        ("just one field\n", 2),
        ("a\tb\tc\td\te\n", 2),
        ("  \tgloss\n", 2),
        ("surface\t \n", 2),
        ("surface\tgloss\tproverb\n", 2),
    ],
)
def test_parse_malformed_names_line(line, lineno):
    with pytest.raises(LexiconFormatError, match=f"line {lineno}"):
        parse_lexicon(["ok\tfine\n", line])


def test_parse_duplicate_ids():
    with pytest.raises(LexiconFormatError, match="duplicate"):
        parse_lexicon(["a\tb\tidiom\tX\n", "c\td\tidiom\tX\n"])


# -- clean_gloss -----------------------------------------------------------


def test_clean_examples():
    assert clean_gloss("(US) unemployed") == "unemployed"
    assert clean_gloss("(archaic) die.") == "die"
    assert clean_gloss("unemployed") == "unemployed"


def load_gloss_cases(data_dir):
    return [(tsv.unescape(raw), expected) for _, (raw, expected) in tsv.iter_records(tsv.read_lines(data_dir / "gloss_cases.tsv"))]


def test_clean_fixture_table(data_dir):
    cases = load_gloss_cases(data_dir)
    assert len(cases) == 50
    assert [clean_gloss(raw) for raw, _ in cases] == [expected for _, expected in cases]


@pytest.mark.parametrize("gloss", ["(US)", "(US) (archaic).", "[informal] ...", "  ", "(a):"])
def test_all_label_gloss_raises(gloss):
    with pytest.raises(GlossEmptyAfterCleaning):
        clean_gloss(gloss)


gloss_text = st.text(alphabet=st.sampled_from(list("ab ()[].,:;\t")) | st.characters(), max_size=30)


@given(gloss_text)
def test_clean_is_idempotent(raw):
    try:
        once = clean_gloss(raw)
    except GlossEmptyAfterCleaning:
        return
    assert clean_gloss(once) == once


@given(gloss_text)
def test_clean_removes_label_prefix(raw):
    try:
        out = clean_gloss(raw)
    except GlossEmptyAfterCleaning:
        return
    assert not re.match(r"^(\([^()\[\]]*\)|\[[^()\[\]]*\])", out)
    assert not out.endswith(".")


# -- expand_entry ----------------------------------------------------------


def test_behind_someones_back(tables):
    surfaces = {p.surface for p in expand_entry(entry("behind someone's back"), tables)}
    assert surfaces == {f"behind {p} back" for p in ("my", "your", "his", "her", "its", "our", "their")}


def test_bite_the_dust(tables):
    # bite: base, 3sg, past, past participle, -ing; hand-enumerated.
    got = [p.surface for p in expand_entry(entry("bite the dust"), tables)]
    assert got == ["bite the dust", "bites the dust", "bit the dust", "bitten the dust", "biting the dust"]


def test_no_slot_identity(tables):
    assert [p.surface for p in expand_entry(entry("between jobs"), tables)] == ["between jobs"]


def test_normalizes_surface(tables):
    assert [p.surface for p in expand_entry(entry("  Between \t JOBS "), tables)] == ["between jobs"]


def test_to_marker_stripped(tables):
    got = [p.surface for p in expand_entry(entry("to bite the dust"), tables)]
    assert got[0] == "bite the dust" and len(got) == 5


def test_to_marker_unknown_verb(tables):
    got = [p.surface for p in expand_entry(entry("to hightail it"), tables)]
    assert got == ["hightail it", "hightails it", "hightailed it", "hightailing it"]


@pytest.mark.parametrize("template", ["to boot", "to a fault", "to the letter"])
def test_to_prepositional_not_verb(tables, template):
    assert [p.surface for p in expand_entry(entry(template), tables)] == [template]


def test_interior_verbs_not_expanded(tables):
    got = [p.surface for p in expand_entry(entry("let the cat out of the bag"), tables)]
    assert len(got) == len(verb_inflections("let", tables))
    assert all("cat out of the bag" in s for s in got)


@pytest.mark.parametrize(
    "template, slot_sizes, verb",
    [
        ("fill someone's shoes", [7], "fill"),
        ("drive someone up the wall", [7], "drive"),
        ("give someone a piece of one's mind", [7, 7], "give"),
        ("keep someone on someone's toes for one", [7, 7, 7], "keep"),
        ("behind someone's back", [7], None),
        ("bite the dust", [], "bite"),
    ],
)
def test_expansion_count(tables, template, slot_sizes, verb):
    v = len(verb_inflections(verb, tables)) if verb else 1
    expected = v
    for s in slot_sizes:
        expected *= s
    assert len(expand_entry(entry(template), tables)) == expected


def test_expansion_hand_enumerated_two_slots(tables):
    got = {p.surface for p in expand_entry(entry("give someone a piece of one's mind"), tables)}
    verbs = ["give", "gives", "gave", "given", "giving"]
    obj = ["me", "you", "him", "her", "it", "us", "them"]
    poss = ["my", "your", "his", "her", "its", "our", "their"]
    want = {f"{v} {o} a piece of {p} mind" for v, o, p in itertools.product(verbs, obj, poss)}
    assert got == want


@pytest.mark.parametrize(
    "template",
    ["fill someone's shoes", "give someone a piece of one's mind", "behind someone's back", "to hightail it", "a b c"],
)
def test_expansion_soundness(tables, template):
    """Substituting the recorded bindings back into the template gives the surface."""
    e = entry(template)
    base = template.split()
    if base[0] == "to":
        base = base[1:]
    for p in expand_entry(e, tables):
        tokens = list(base)
        bindings = list(p.slot_bindings)
        for i, tok in enumerate(tokens):
            if bindings and bindings[0][0].startswith("verb:") and i == 0:
                tokens[i] = bindings.pop(0)[1]
            elif tok in ("someone", "someone's", "one", "one's"):
                marker, value = bindings.pop(0)
                assert marker == tok
                tokens[i] = value
        assert not bindings
        assert " ".join(tokens) == p.surface
        assert p.entry_ref == e.source_id
        assert not {"someone", "someone's", "one's"} & set(p.surface.split())


# -- build_dictionary ------------------------------------------------------


def test_three_plain_entries(tables):
    entries = [entry("between jobs", "unemployed", "a"), entry("piece of cake", "easy", "b"), entry("on cloud nine", "happy", "c")]
    d = build_dictionary(entries, tables)
    assert len(d) == 3
    assert sum(d.type_histogram.values()) == 3


def test_collision_keeps_smaller_source_id(tables, caplog):
    entries = [entry("between jobs", "unemployed", "b2"), entry("Between Jobs", "resting", "a1")]
    with caplog.at_level(logging.WARNING):
        d = build_dictionary(entries, tables)
    assert len(d) == 1
    assert d.gloss("between jobs") == "resting"
    assert d.pattern("between jobs").entry_ref == "a1"
    assert d.warnings and "a1" in d.warnings[0]
    assert any("keeping gloss of a1" in r.message for r in caplog.records)


def test_identical_gloss_collision_silent(tables):
    d = build_dictionary([entry("x y", "same", "a"), entry("x y", "same", "b")], tables)
    assert len(d) == 1 and not d.warnings


def test_all_label_gloss_skipped(tables):
    d = build_dictionary([entry("x y", "(US)", "a"), entry("p q", "fine", "b")], tables)
    assert [e.source_id for e in d.entries] == ["b"]
    assert d.warnings and "a" in d.warnings[0]


def test_zero_survivors_fails(tables):
    with pytest.raises(EmptyDictionaryError):
        build_dictionary([entry("x y", "(US)", "a")], tables)


def test_histogram_and_proportions(tables):
    types = [ConstructType.IDIOM] * 3 + [ConstructType.EUPHEMISM, ConstructType.SIMILE]
    d = build_dictionary([entry(f"w{i} z", "g", f"s{i}", t) for i, t in enumerate(types)], tables)
    assert d.type_histogram[ConstructType.IDIOM] == 3
    assert d.type_proportions() == {"euphemism": 20.0, "idiom": 60.0, "simile": 20.0}


def test_dictionary_is_deterministic(data_dir, tables, tmp_path):
    lines = (data_dir / "lexicon_small.tsv").read_text(encoding="utf-8").splitlines()
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    save_dictionary(build_dictionary(parse_lexicon(lines), tables), a)
    save_dictionary(build_dictionary(list(reversed(parse_lexicon(lines))), tables), b)
    assert a.read_bytes() == b.read_bytes()


def test_dictionary_file_roundtrip(data_dir, tables, tmp_path):
    d = build_dictionary(parse_lexicon((data_dir / "lexicon_small.tsv").read_text().splitlines()), tables)
    path = tmp_path / "d.tsv"
    save_dictionary(d, path)
    rows = path.read_text(encoding="utf-8").splitlines()
    assert rows == sorted(rows, key=lambda r: r.split("\t")[0])
    back = load_dictionary(path)
    assert dictionary_records(back) == dictionary_records(d)
    assert back.pattern("bitten the dust").verb_form == "past_participle"


def test_compiled_dictionary_errors():
    with pytest.raises(LexiconFormatError):
        parse_dictionary(["a\tb\n"])
    with pytest.raises(LexiconFormatError, match="conflicting"):
        parse_dictionary(["a\tg1\tidiom\tX\n", "b\tg2\tidiom\tX\n"])
    with pytest.raises(EmptyDictionaryError):
        parse_dictionary(io.StringIO("# nothing\n"))


def test_entries_are_immutable(tables):
    d = build_dictionary([entry("x y", "g", "a")], tables)
    with pytest.raises(Exception):
        d.patterns[0].surface = "z"  # type: ignore[misc]
    with pytest.raises(TypeError):
        d.type_histogram[ConstructType.IDIOM] = 5  # type: ignore[index]
