import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cseg import (
    ArgumentError,
    PreprocessOptions,
    Script,
    Sentence,
    SentenceCategory,
    Token,
    ValidationError,
    categorize,
    classify_script,
    corpus_stats,
    english_percentage,
    load_gold,
    morphological_richness,
    preprocess,
    subsample,
    to_buckwalter,
)
from cseg.corpus import escape_reserved

from .conftest import FIG_WORDS


class TestClassifyScript:
    @pytest.mark.parametrize(
        "token,script",
        [
            ("situation", Script.LATIN),
            ("بصراحة", Script.ARABIC),
            ("123", Script.NUMERIC),
            ("!?", Script.PUNCT),
            ("الparking", Script.MIXED),
            ("word123", Script.LATIN),  # letters dominate digits
            ("café", Script.LATIN),
        ],
    )
    def test_examples(self, token, script):
        assert classify_script(token) == script

    def test_combining_marks_inherit_base(self):
        # Arabic letter + fatha diacritic stays Arabic
        assert classify_script("بَ") == Script.ARABIC

    @given(st.text(min_size=1, max_size=10).filter(lambda s: not any(c.isspace() for c in s)))
    def test_total_and_deterministic(self, token):
        assert classify_script(token) == classify_script(token)
        assert classify_script(token) in Script


class TestPreprocess:
    def test_url_removed_punct_split(self):
        sent = preprocess("check http://x.y now!")
        assert sent.surfaces() == ["check", "now", "!"]

    def test_arabic_normalization(self):
        sent = preprocess("مصطفى")
        assert sent.surfaces() == ["مصطفي"]
        sent = preprocess("أحمد")
        assert sent.surfaces() == ["احمد"]

    def test_digit_split(self):
        assert preprocess("word123").surfaces() == ["word", "123"]

    def test_empty_line_skipped(self):
        assert preprocess("   ") is None
        assert preprocess("http://only.url") is None

    def test_emoticon_removed(self):
        assert preprocess("nice :) day").surfaces() == ["nice", "day"]

    def test_markup_stripped(self):
        opts = PreprocessOptions(markup_patterns=(r"\[[A-Z]+\]",))
        assert preprocess("[NOISE] hello", opts).surfaces() == ["hello"]

    def test_reserved_escaped(self):
        sent = preprocess("a#b c@@d")
        joined = " ".join(sent.surfaces())
        assert "\\#" in joined and "#" not in joined.replace("\\#", "")
        assert "@@" not in joined

    def test_escape_idempotent(self):
        assert escape_reserved(escape_reserved("a#b@c")) == escape_reserved("a#b@c")

    @given(st.text(max_size=60))
    @settings(max_examples=200)
    def test_idempotent(self, line):
        first = preprocess(line)
        if first is None:
            return
        second = preprocess(first.render())
        assert second is not None
        assert second.surfaces() == first.surfaces()


class TestLoadGold:
    def test_fig_example(self, gold_file):
        sentences = load_gold(gold_file)
        assert len(sentences) == 2
        sent, entries = sentences[0]
        assert [e.word.surface for e in entries] == [w for w, _ in FIG_WORDS]
        assert list(entries[1].morphs) == ["depend", "s"]
        assert list(entries[3].morphs) == ["ب", "النسبا", "لي"]
        _, entries2 = sentences[1]
        assert list(entries2[0].morphs) == ["went"]

    def test_concat_mismatch_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("cat\tdo#g\n", encoding="utf-8")
        with pytest.raises(ValidationError, match="do"):
            load_gold(str(path))

    def test_missing_column_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("lonely\n", encoding="utf-8")
        with pytest.raises(ValidationError, match="2 tab-separated"):
            load_gold(str(path))

    def test_delim_header(self, tmp_path):
        path = tmp_path / "plus.tsv"
        path.write_text("#delim=+\ncars\tcar+s\n", encoding="utf-8")
        (_, entries), = load_gold(str(path))
        assert list(entries[0].morphs) == ["car", "s"]

    def test_normalize_header(self, tmp_path):
        path = tmp_path / "norm.tsv"
        path.write_text("#normalize=alif,ya\nمصطفى\tمصطفي\n", encoding="utf-8")
        (_, entries), = load_gold(str(path))
        assert list(entries[0].morphs) == ["مصطفي"]

    def test_escaped_delimiter_in_surface(self, tmp_path):
        path = tmp_path / "esc.tsv"
        path.write_text("a\\#b\ta\\#b\n", encoding="utf-8")
        (_, entries), = load_gold(str(path))
        assert list(entries[0].morphs) == ["a\\#b"]


class TestCorpusStats:
    def test_single_unsegmented_entry(self, tmp_path):
        path = tmp_path / "one.tsv"
        path.write_text("went\twent\n", encoding="utf-8")
        (_, entries), = load_gold(str(path))
        stats = corpus_stats(entries)
        assert stats["All"].segmented_words_pct == 0.0
        assert stats["All"].morphs_per_word == 1.0
        assert stats["EN"].total_words == 1

    def test_handmade_counts(self, gold_file):
        entries = [e for _, es in load_gold(gold_file) for e in es]
        stats = corpus_stats(entries)
        # 9 words: 4 EGY (2 segmented: b#SrAHp, b#AlnsbA#ly), 5 EN (2 segmented)
        assert stats["EGY"].total_words == 4
        assert stats["EGY"].segmented_words == 2
        assert stats["EGY"].max_morphs == 3
        assert stats["EN"].total_words == 5
        assert stats["EN"].total_morphs == 7
        assert stats["All"].total_words == 9
        assert stats["All"].unique_morphs == len(
            {m for e in entries for m in e.morphs}
        )

    def test_empty_rejected(self):
        with pytest.raises(ArgumentError):
            corpus_stats([])


def _sentence(*words: str) -> Sentence:
    return Sentence(id=0, tokens=tuple(Token.from_surface(w) for w in words))


class TestCategorize:
    def test_fig_sentence_is_cs(self, fig_sentence):
        assert categorize(fig_sentence) == SentenceCategory.CS

    def test_all_arabic(self):
        assert categorize(_sentence("انا", "بحب", "الكتب")) == SentenceCategory.MONO_EGY

    def test_all_latin(self):
        assert categorize(_sentence("hello", "world")) == SentenceCategory.MONO_EN

    def test_mixed_script_mcs(self):
        sent = _sentence("كان", "الparking", "مليان")
        assert categorize(sent, "mixed-script") == SentenceCategory.MCS

    def test_clitic_adjacent_mcs(self):
        sent = _sentence("ال", "parking", "كان")
        assert categorize(sent, "mixed-script") == SentenceCategory.CS
        assert categorize(sent, "clitic-adjacent") == SentenceCategory.MCS

    def test_no_letters_undetermined(self):
        assert categorize(_sentence("123", "!!")) == SentenceCategory.UNDETERMINED

    def test_mcs_implies_cs_partition(self):
        # every letter-bearing sentence lands in exactly one of the three
        for sent in (
            _sentence("فكرة"),
            _sentence("idea"),
            _sentence("فكرة", "idea"),
            _sentence("الidea",),
        ):
            cat = categorize(sent)
            assert cat in (
                SentenceCategory.MONO_EGY,
                SentenceCategory.MONO_EN,
                SentenceCategory.CS,
                SentenceCategory.MCS,
            )

    def test_unknown_mode_rejected(self, fig_sentence):
        with pytest.raises(ArgumentError):
            categorize(fig_sentence, mcs_mode="nope")


class TestEnglishPercentage:
    def test_all_latin(self):
        assert english_percentage(_sentence("a", "b", "c")) == 1.0

    def test_all_arabic(self):
        assert english_percentage(_sentence("انا", "بحب")) == 0.0

    def test_fig_sentence(self, fig_sentence):
        # 3 EN words of 7 letter-bearing words
        assert english_percentage(fig_sentence) == pytest.approx(3 / 7)

    def test_numeric_excluded(self):
        assert english_percentage(_sentence("word", "123")) == 1.0

    def test_no_letters_absent(self):
        assert english_percentage(_sentence("123", "!")) is None


class TestMorphologicalRichness:
    def test_identity(self, fig_sentence):
        assert morphological_richness(fig_sentence, fig_sentence.surfaces()) == 1.0

    def test_direct_quotient(self):
        sent = _sentence("a", "b", "c", "d", "e")
        assert morphological_richness(sent, list("abcdefg")) == pytest.approx(1.4)

    def test_fig_gold(self, fig_sentence):
        morphs = [m for _, ms in FIG_WORDS for m in ms]
        assert morphological_richness(fig_sentence, morphs) == pytest.approx(11 / 7)

    def test_empty_rejected(self):
        with pytest.raises(ArgumentError):
            morphological_richness(Sentence(id=0, tokens=()), [])


class TestSubsample:
    def test_identity_fraction(self):
        items = list("abcdefghij")
        assert subsample(items, 1.0, seed=3) == items

    def test_exact_size_and_determinism(self):
        items = list(range(100))
        a = subsample(items, 0.25, seed=9)
        b = subsample(items, 0.25, seed=9)
        assert len(a) == 25
        assert a == b
        assert a == sorted(a)  # order preserving

    def test_frozen_seed7(self):
        # recorded once: random.Random(7).sample(range(4), 2) -> {0, 2}
        assert subsample(["s0", "s1", "s2", "s3"], 0.5, seed=7) == ["s0", "s2"]

    def test_half_up_rounding(self):
        assert len(subsample(list(range(5)), 0.5, seed=1)) == 3

    @pytest.mark.parametrize("fraction", [0.0, -0.1, 1.5])
    def test_bad_fraction(self, fraction):
        with pytest.raises(ArgumentError):
            subsample([1, 2, 3], fraction, seed=0)

    @given(
        st.integers(min_value=1, max_value=60),
        st.floats(min_value=0.01, max_value=1.0),
        st.integers(min_value=0, max_value=2**31),
    )
    @settings(max_examples=100)
    def test_function_of_inputs_only(self, n, fraction, seed):
        items = list(range(n))
        first = subsample(items, fraction, seed)
        assert first == subsample(items, fraction, seed)
        assert len(first) == int(fraction * n + 0.5)


def test_buckwalter_roundtrip():
    assert to_buckwalter("بصراحة") == "bSrAHp"
    assert to_buckwalter("الكتب") == "Alktb"
    assert to_buckwalter("بالنسبالي") == "bAlnsbAly"
