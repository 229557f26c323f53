"""Corpus ingestion, preprocessing and code-switching analysis.

Covers script classification, line preprocessing, gold segmentation
loading, corpus statistics, sentence categorization (monolingual /
code-switched / morphologically code-switched) and deterministic
subsampling. All structures are immutable after load; every transform
here is a pure per-line function, so callers may parallelize freely.
"""

from __future__ import annotations

import math
import random
import re
import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import ArgumentError, FormatError, ValidationError


class Script(Enum):
    ARABIC = "arabic"
    LATIN = "latin"
    NUMERIC = "numeric"
    PUNCT = "punct"
    MIXED = "mixed"


class SentenceCategory(Enum):
    MONO_EGY = "mono-egy"
    MONO_EN = "mono-en"
    CS = "cs"
    MCS = "mcs"
    # No letter-bearing tokens at all; reported separately, never scored
    # as one of the four real categories.
    UNDETERMINED = "undetermined"


#: Unicode ranges treated as Arabic script (base block, supplements,
#: presentation forms).
_ARABIC_RANGES = (
    (0x0600, 0x06FF),
    (0x0750, 0x077F),
    (0x08A0, 0x08FF),
    (0xFB50, 0xFDFF),
    (0xFE70, 0xFEFF),
)

ALIF_HAMZA = "أ"  # أ
ALIF = "ا"  # ا
ALIF_MAQSURA = "ى"  # ى
YA = "ي"  # ي


def _is_arabic_letter(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _ARABIC_RANGES)


def classify_script(surface: str) -> Script:
    """Classify a whitespace-free token by the scripts of its letters.

    Arabic letters are those in the Arabic Unicode blocks; all other
    letters count as Latin (this toolkit targets Arabic-English text).
    Combining marks inherit the class of their base letter and are
    ignored. Tokens without letters are NUMERIC if they contain a digit,
    PUNCT otherwise.
    """
    has_arabic = False
    has_latin = False
    has_digit = False
    for ch in surface:
        cat = unicodedata.category(ch)
        if cat.startswith("M"):
            continue
        if cat.startswith("L"):
            if _is_arabic_letter(ch):
                has_arabic = True
            else:
                has_latin = True
        elif cat.startswith("N"):
            has_digit = True
    if has_arabic and has_latin:
        return Script.MIXED
    if has_arabic:
        return Script.ARABIC
    if has_latin:
        return Script.LATIN
    if has_digit:
        return Script.NUMERIC
    return Script.PUNCT


@dataclass(frozen=True)
class Token:
    """A surface word (NFC, no whitespace) with its script class."""

    surface: str
    script: Script

    @classmethod
    def from_surface(cls, surface: str) -> "Token":
        return cls(surface=surface, script=classify_script(surface))


@dataclass(frozen=True)
class Sentence:
    id: int
    tokens: tuple[Token, ...]

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def render(self) -> str:
        return " ".join(t.surface for t in self.tokens)


@dataclass(frozen=True)
class GoldEntry:
    """One annotated word: its surface token and gold morph sequence."""

    word: Token
    morphs: tuple[str, ...]


# ---------------------------------------------------------------------------
# Preprocessing


@dataclass(frozen=True)
class PreprocessOptions:
    """Switches for :func:`preprocess`; defaults follow the standard
    pipeline (URLs/emoticons out, numbers and punctuation tokenized,
    Arabic letters normalized, reserved delimiters escaped)."""

    markup_patterns: tuple[str, ...] = ()
    remove_urls: bool = True
    remove_emoticons: bool = True
    split_digits: bool = True
    split_punct: bool = True
    normalize_arabic: bool = True
    escape_reserved: bool = True


_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)

_EMOTICON_BODY = r"(?:[:;=8xX][-'o^*]?[)(\[\]dDpPoO/\\|3*]+|<3|\^\^|\^_\^|xD|XD)"

# Standalone ASCII emoticons; must not eat ordinary punctuation, so they
# only match between whitespace/line edges.
_EMOTICON_RE = re.compile(rf"(?:(?<=\s)|^){_EMOTICON_BODY}(?=\s|$)")

# Tokenization can expose an emoticon that was glued to a word ("hi:]");
# such tokens are dropped after splitting so preprocessing stays
# idempotent.
_EMOTICON_TOKEN_RE = re.compile(rf"{_EMOTICON_BODY}\Z")

_EMOJI_RANGES = (
    (0x1F000, 0x1FAFF),
    (0x2600, 0x27BF),
    (0x2B00, 0x2BFF),
    (0x1F1E6, 0x1F1FF),
    (0xFE0E, 0xFE0F),
    (0x200D, 0x200D),
)


def _strip_emoji(text: str) -> str:
    return "".join(
        ch
        for ch in text
        if not any(lo <= ord(ch) <= hi for lo, hi in _EMOJI_RANGES)
    )


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("P", "S")


_DIGIT_BOUNDARY_RE = re.compile(r"(?<=\d)(?=\D)|(?<=\D)(?=\d)", re.UNICODE)


def _split_punct_runs(token: str) -> list[str]:
    """Split a token so each punctuation/symbol run is its own piece."""
    pieces: list[str] = []
    cur: list[str] = []
    cur_punct: bool | None = None
    for ch in token:
        p = _is_punct_char(ch)
        if cur_punct is None or p == cur_punct:
            cur.append(ch)
        else:
            pieces.append("".join(cur))
            cur = [ch]
        cur_punct = p
    if cur:
        pieces.append("".join(cur))
    return pieces


def normalize_arabic_letters(text: str, alif: bool = True, ya: bool = True) -> str:
    """Arabic orthography normalization: alif-hamza to bare alif and
    final-style alif maqsura to ya."""
    if alif:
        text = text.replace(ALIF_HAMZA, ALIF)
    if ya:
        text = text.replace(ALIF_MAQSURA, YA)
    return text


_ESCAPE_HASH_RE = re.compile(r"(?<!\\)#")
_ESCAPE_AT_RE = re.compile(r"(?<!\\)@")


def escape_reserved(text: str) -> str:
    """Escape the output-format delimiters `#` and `@` (idempotent)."""
    text = _ESCAPE_HASH_RE.sub(r"\\#", text)
    text = _ESCAPE_AT_RE.sub(r"\\@", text)
    return text


def preprocess(
    line: str,
    opts: PreprocessOptions = PreprocessOptions(),
    line_no: int = 0,
) -> Sentence | None:
    """Normalize one raw corpus line into a Sentence, or None to skip.

    Steps, in order: strip corpus markup (configurable regexes), remove
    URLs and emoticons, trim whitespace, split digit runs off letters,
    split punctuation runs into separate tokens, optional Arabic letter
    normalization, escape reserved delimiters. An empty result signals
    the line should be dropped.
    """
    text = unicodedata.normalize("NFC", line)
    for pattern in opts.markup_patterns:
        text = re.sub(pattern, " ", text)
    if opts.remove_urls:
        text = _URL_RE.sub(" ", text)
    if opts.remove_emoticons:
        text = _EMOTICON_RE.sub(" ", text)
        text = _strip_emoji(text)
    text = text.strip()
    if not text:
        return None

    tokens: list[str] = []
    for raw in text.split():
        if opts.split_digits:
            parts = _DIGIT_BOUNDARY_RE.split(raw)
        else:
            parts = [raw]
        for part in parts:
            if opts.split_punct:
                tokens.extend(p for p in _split_punct_runs(part) if p)
            elif part:
                tokens.append(part)
    if opts.remove_emoticons:
        tokens = [t for t in tokens if not _EMOTICON_TOKEN_RE.fullmatch(t)]

    if opts.normalize_arabic:
        tokens = [normalize_arabic_letters(t) for t in tokens]
    if opts.escape_reserved:
        tokens = [escape_reserved(t) for t in tokens]
    tokens = [t for t in tokens if t]
    if not tokens:
        return None
    return Sentence(id=line_no, tokens=tuple(Token.from_surface(t) for t in tokens))


def read_corpus(path: str, opts: PreprocessOptions | None = None) -> list[Sentence]:
    """Read a one-sentence-per-line UTF-8 file.

    With opts=None the file is assumed preprocessed already (tokens are
    taken verbatim on whitespace); otherwise each line goes through
    :func:`preprocess`. Invalid UTF-8 raises with the offending line
    number.
    """
    sentences: list[Sentence] = []
    with open(path, "rb") as fh:
        for i, raw in enumerate(fh, start=1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise ValidationError(f"{path}:{i}: invalid UTF-8 ({exc})") from exc
            line = line.rstrip("\n").rstrip("\r")
            if opts is None:
                surfaces = line.split()
                if not surfaces:
                    continue
                sentences.append(
                    Sentence(
                        id=i, tokens=tuple(Token.from_surface(s) for s in surfaces)
                    )
                )
            else:
                sent = preprocess(line, opts, line_no=i)
                if sent is not None:
                    sentences.append(sent)
    return sentences


# ---------------------------------------------------------------------------
# Gold segmentation files
#
# Format: UTF-8 TSV, one `word<TAB>morph1#morph2...` per line; a blank
# line ends a sentence. Optional leading headers: `#delim=<char>` to
# change the morph delimiter and `#normalize=alif,ya` when the morphs
# are normalized relative to the surface. `\#` escapes a literal
# delimiter inside surface text.


def _split_morphs(seg: str, delim: str) -> list[str]:
    parts = re.split(rf"(?<!\\){re.escape(delim)}", seg)
    return [p for p in parts]


def load_gold(path: str) -> list[tuple[Sentence, list[GoldEntry]]]:
    """Load a gold segmentation file; validates every entry."""
    delim = "#"
    norm_alif = False
    norm_ya = False
    sentences: list[tuple[Sentence, list[GoldEntry]]] = []
    cur: list[GoldEntry] = []
    sent_id = 0

    def flush() -> None:
        nonlocal cur, sent_id
        if cur:
            sent_id += 1
            sent = Sentence(id=sent_id, tokens=tuple(e.word for e in cur))
            sentences.append((sent, cur))
            cur = []

    with open(path, "rb") as fh:
        for i, raw in enumerate(fh, start=1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise ValidationError(f"{path}:{i}: invalid UTF-8 ({exc})") from exc
            line = line.rstrip("\n").rstrip("\r")
            if not cur and not sentences and line.startswith("#delim="):
                delim = line[len("#delim="):]
                if len(delim) != 1:
                    raise FormatError(f"{path}:{i}: delimiter must be one character")
                continue
            if not cur and not sentences and line.startswith("#normalize="):
                flags = {f.strip() for f in line[len("#normalize="):].split(",")}
                norm_alif = "alif" in flags
                norm_ya = "ya" in flags
                continue
            if not line.strip():
                flush()
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise FormatError(
                    f"{path}:{i}: expected 2 tab-separated columns, got {len(cols)}"
                )
            word, seg = cols
            morphs = _split_morphs(seg, delim)
            if not word or any(not m for m in morphs):
                raise ValidationError(f"{path}:{i}: empty word or morph")
            expected = word
            if norm_alif or norm_ya:
                expected = normalize_arabic_letters(expected, norm_alif, norm_ya)
            if "".join(morphs) != expected:
                raise ValidationError(
                    f"{path}:{i}: morphs {morphs!r} do not concatenate to "
                    f"{expected!r}"
                )
            cur.append(
                GoldEntry(word=Token.from_surface(word), morphs=tuple(morphs))
            )
    flush()
    return sentences


# ---------------------------------------------------------------------------
# Statistics


@dataclass(frozen=True)
class CorpusStats:
    """Aggregate gold statistics for one word group (a language or all)."""

    total_words: int
    segmented_words: int
    total_morphs: int
    unique_morphs: int
    max_morphs: int

    @property
    def segmented_words_pct(self) -> float:
        return self.segmented_words / self.total_words

    @property
    def morphs_per_word(self) -> float:
        return self.total_morphs / self.total_words


def word_language(token: Token) -> str | None:
    """EGY/EN language tag used by per-language reporting.

    Arabic and mixed-script words count as EGY (the matrix language);
    Latin words as EN; tokens without letters have no language.
    """
    if token.script in (Script.ARABIC, Script.MIXED):
        return "EGY"
    if token.script is Script.LATIN:
        return "EN"
    return None


def corpus_stats(gold: Sequence[GoldEntry]) -> dict[str, CorpusStats]:
    """Compute per-language ("EGY"/"EN") and overall ("All") statistics."""
    if not gold:
        raise ArgumentError("corpus_stats: empty gold list")
    groups: dict[str, list[GoldEntry]] = {"All": list(gold)}
    for entry in gold:
        lang = word_language(entry.word)
        if lang is not None:
            groups.setdefault(lang, []).append(entry)
    out: dict[str, CorpusStats] = {}
    for name, entries in groups.items():
        morph_counts = [len(e.morphs) for e in entries]
        out[name] = CorpusStats(
            total_words=len(entries),
            segmented_words=sum(1 for c in morph_counts if c >= 2),
            total_morphs=sum(morph_counts),
            unique_morphs=len({m for e in entries for m in e.morphs}),
            max_morphs=max(morph_counts),
        )
    return out


# ---------------------------------------------------------------------------
# Sentence categories


def _letter_tokens(sentence: Sentence) -> list[Token]:
    return [
        t
        for t in sentence.tokens
        if t.script in (Script.ARABIC, Script.LATIN, Script.MIXED)
    ]


def categorize(
    sentence: Sentence,
    mcs_mode: str = "mixed-script",
    clitic_vocabulary: frozenset[str] | None = None,
) -> SentenceCategory:
    """Assign the sentence to MonoEGY / MonoEN / CS / MCS.

    MCS (a subcategory of CS) fires per `mcs_mode`:

    - ``mixed-script``: at least one token mixes Arabic and Latin letters;
    - ``clitic-adjacent``: a standalone Arabic clitic token (from
      `clitic_vocabulary`, typically the Arabic rule inventory) directly
      precedes or follows a Latin token.

    Sentences with no letter-bearing tokens are UNDETERMINED.
    """
    if mcs_mode not in ("mixed-script", "clitic-adjacent"):
        raise ArgumentError(f"unknown mcs_mode: {mcs_mode!r}")
    letters = _letter_tokens(sentence)
    if not letters:
        return SentenceCategory.UNDETERMINED
    has_ar = any(t.script in (Script.ARABIC, Script.MIXED) for t in letters)
    has_en = any(t.script in (Script.LATIN, Script.MIXED) for t in letters)
    if has_ar and not has_en:
        return SentenceCategory.MONO_EGY
    if has_en and not has_ar:
        return SentenceCategory.MONO_EN

    if mcs_mode == "mixed-script":
        is_mcs = any(t.script is Script.MIXED for t in sentence.tokens)
    else:
        if clitic_vocabulary is None:
            from .segmenters.rules import default_arabic_rules

            clitic_vocabulary = default_arabic_rules("d3").clitic_vocabulary()
        is_mcs = False
        toks = sentence.tokens
        for i, tok in enumerate(toks):
            if tok.script is not Script.ARABIC or tok.surface not in clitic_vocabulary:
                continue
            neighbors = []
            if i > 0:
                neighbors.append(toks[i - 1])
            if i + 1 < len(toks):
                neighbors.append(toks[i + 1])
            if any(n.script is Script.LATIN for n in neighbors):
                is_mcs = True
                break
    return SentenceCategory.MCS if is_mcs else SentenceCategory.CS


def is_code_switched(category: SentenceCategory) -> bool:
    return category in (SentenceCategory.CS, SentenceCategory.MCS)


def english_percentage(sentence: Sentence) -> float | None:
    """Share of Latin words among letter-bearing words, or None if the
    sentence has no letter-bearing words."""
    letters = _letter_tokens(sentence)
    if not letters:
        return None
    latin = sum(1 for t in letters if t.script is Script.LATIN)
    return latin / len(letters)


def morphological_richness(sentence: Sentence, morphs: Sequence[str]) -> float:
    """Segmented-to-original token count quotient (>= 1 for any surface
    segmentation)."""
    if not sentence.tokens:
        raise ArgumentError("morphological_richness: empty sentence")
    return len(morphs) / len(sentence.tokens)


# ---------------------------------------------------------------------------
# Subsampling


def subsample(items: Sequence, fraction: float, seed: int) -> list:
    """Deterministic order-preserving sample of round(fraction*N) items.

    Rounding is half-up. fraction=1.0 returns a copy in the original
    order; the selected index set depends only on (len(items), fraction,
    seed).
    """
    if not 0.0 < fraction <= 1.0:
        raise ArgumentError(f"fraction must be in (0, 1], got {fraction}")
    n = len(items)
    k = int(math.floor(fraction * n + 0.5))
    if k >= n:
        return list(items)
    rng = random.Random(seed)
    keep = sorted(rng.sample(range(n), k))
    return [items[i] for i in keep]


# ---------------------------------------------------------------------------
# Buckwalter transliteration (display helper for reports and tests)

_BUCKWALTER = {
    "ء": "'", "آ": "|", "أ": ">", "ؤ": "&",
    "إ": "<", "ئ": "}", "ا": "A", "ب": "b",
    "ة": "p", "ت": "t", "ث": "v", "ج": "j",
    "ح": "H", "خ": "x", "د": "d", "ذ": "*",
    "ر": "r", "ز": "z", "س": "s", "ش": "$",
    "ص": "S", "ض": "D", "ط": "T", "ظ": "Z",
    "ع": "E", "غ": "g", "ـ": "_", "ف": "f",
    "ق": "q", "ك": "k", "ل": "l", "م": "m",
    "ن": "n", "ه": "h", "و": "w", "ى": "Y",
    "ي": "y", "ً": "F", "ٌ": "N", "ٍ": "K",
    "َ": "a", "ُ": "u", "ِ": "i", "ّ": "~",
    "ْ": "o", "پ": "P", "چ": "J", "ڤ": "V",
    "گ": "G",
}

_FROM_BUCKWALTER = {v: k for k, v in _BUCKWALTER.items()}


def to_buckwalter(text: str) -> str:
    """One-to-one ASCII romanization of Arabic script (pass-through for
    anything outside the table)."""
    return "".join(_BUCKWALTER.get(ch, ch) for ch in text)


def from_buckwalter(text: str) -> str:
    return "".join(_FROM_BUCKWALTER.get(ch, ch) for ch in text)
