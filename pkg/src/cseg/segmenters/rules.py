"""Rule-based surface segmenters.

English: an ordered rule cascade — irregular-form lexicon lookup first
(covers modified stems such as monki+es and unsplittable forms such as
went), then the `es`-after-sibilant rule, then the regular suffixes
s/ed/ing/en. Matching is case-insensitive; output morphs preserve the
original casing.

Arabic: a deterministic clitic stripper approximating treebank-style
tokenization. Proclitics (conjunctions/prepositions) are peeled from
the left and pronominal enclitics from the right, each strip only while
the remaining stem keeps a minimum length. The `d3` scheme additionally
splits the definite article; `atb` keeps it attached. Alif/Ya
normalization is applied first (so the surface invariant holds modulo
that normalization).

The shipped clitic inventories and the irregular-form lexicon are
editorial defaults; both can be replaced via TSV rule files (see
modelio).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..corpus import from_buckwalter, normalize_arabic_letters
from ..errors import ArgumentError

# ---------------------------------------------------------------------------
# English

#: Surface analyses for words the suffix rules would miss or mangle.
#: Two kinds of entries: genuinely segmentable words with modified stems
#: (monkies -> monki+es) and words that merely look suffixed and must
#: stay whole (went, thing, class).
DEFAULT_EN_IRREGULARS: dict[str, tuple[str, ...]] = {
    # modified stem + ending
    "monkies": ("monki", "es"),
    "caring": ("car", "ing"),
    "does": ("do", "es"),
    "goes": ("go", "es"),
    "studies": ("studi", "es"),
    "tries": ("tri", "es"),
    "flies": ("fli", "es"),
    "cities": ("citi", "es"),
    "families": ("famili", "es"),
    "countries": ("countri", "es"),
    "companies": ("compani", "es"),
    "stories": ("stori", "es"),
    "babies": ("babi", "es"),
    "ladies": ("ladi", "es"),
    "parties": ("parti", "es"),
    "bodies": ("bodi", "es"),
    "movies": ("movi", "es"),
    "houses": ("house", "s"),
    "causes": ("cause", "s"),
    "uses": ("use", "s"),
    "cases": ("case", "s"),
    "places": ("place", "s"),
    "courses": ("course", "s"),
    "phrases": ("phrase", "s"),
    "senses": ("sense", "s"),
    # unsplittable despite a suffix-like ending
    "went": ("went",),
    "was": ("was",),
    "has": ("has",),
    "his": ("his",),
    "its": ("its",),
    "this": ("this",),
    "thus": ("thus",),
    "plus": ("plus",),
    "yes": ("yes",),
    "gas": ("gas",),
    "bus": ("bus",),
    "news": ("news",),
    "always": ("always",),
    "perhaps": ("perhaps",),
    "famous": ("famous",),
    "serious": ("serious",),
    "various": ("various",),
    "previous": ("previous",),
    "obvious": ("obvious",),
    "series": ("series",),
    "species": ("species",),
    "class": ("class",),
    "less": ("less",),
    "miss": ("miss",),
    "pass": ("pass",),
    "press": ("press",),
    "cross": ("cross",),
    "dress": ("dress",),
    "guess": ("guess",),
    "loss": ("loss",),
    "boss": ("boss",),
    "kiss": ("kiss",),
    "grass": ("grass",),
    "stress": ("stress",),
    "across": ("across",),
    "unless": ("unless",),
    "access": ("access",),
    "process": ("process",),
    "address": ("address",),
    "business": ("business",),
    "thing": ("thing",),
    "bring": ("bring",),
    "spring": ("spring",),
    "string": ("string",),
    "during": ("during",),
    "morning": ("morning",),
    "evening": ("evening",),
    "nothing": ("nothing",),
    "something": ("something",),
    "anything": ("anything",),
    "everything": ("everything",),
    "need": ("need",),
    "indeed": ("indeed",),
    "speed": ("speed",),
    "feed": ("feed",),
    "hundred": ("hundred",),
    "sacred": ("sacred",),
    "hatred": ("hatred",),
    "been": ("been",),
    "seen": ("seen",),
    "even": ("even",),
    "seven": ("seven",),
    "eleven": ("eleven",),
    "often": ("often",),
    "when": ("when",),
    "then": ("then",),
    "children": ("children",),
    "garden": ("garden",),
    "kitchen": ("kitchen",),
    "open": ("open",),
    "happen": ("happen",),
    "between": ("between",),
    "green": ("green",),
    "screen": ("screen",),
    "queen": ("queen",),
    "chicken": ("chicken",),
    "heaven": ("heaven",),
    "oven": ("oven",),
}

DEFAULT_SIBILANT_STEMS = ("ch", "sh", "s", "x", "z")
DEFAULT_EN_SUFFIXES = ("s", "ed", "ing", "en")


@dataclass(frozen=True)
class EnRuleSet:
    irregular_forms: Mapping[str, tuple[str, ...]] = field(
        default_factory=lambda: dict(DEFAULT_EN_IRREGULARS)
    )
    sibilant_stems: tuple[str, ...] = DEFAULT_SIBILANT_STEMS
    regular_suffixes: tuple[str, ...] = DEFAULT_EN_SUFFIXES
    min_stem_len: int = 2

    def __post_init__(self) -> None:
        for word, morphs in self.irregular_forms.items():
            if not morphs or "".join(morphs) != word:
                raise ArgumentError(
                    f"irregular analysis for {word!r} does not concatenate back"
                )

    def segment(self, token: str) -> list[str]:
        return segment_english(self, token)


def _slice_by_lengths(token: str, lengths: list[int]) -> list[str]:
    out = []
    pos = 0
    for n in lengths:
        out.append(token[pos : pos + n])
        pos += n
    return out


def segment_english(rules: EnRuleSet, token: str) -> list[str]:
    """Apply the English rule cascade to one token."""
    if not token:
        raise ArgumentError("cannot segment an empty token")
    low = token.lower()

    irregular = rules.irregular_forms.get(low)
    if irregular is not None:
        return _slice_by_lengths(token, [len(m) for m in irregular])

    if low.endswith("es"):
        stem = low[:-2]
        if len(stem) >= rules.min_stem_len and stem.endswith(rules.sibilant_stems):
            return _slice_by_lengths(token, [len(stem), 2])

    for suffix in rules.regular_suffixes:
        if low.endswith(suffix) and len(low) - len(suffix) >= rules.min_stem_len:
            return _slice_by_lengths(token, [len(low) - len(suffix), len(suffix)])

    return [token]


# ---------------------------------------------------------------------------
# Arabic

# Inventories are written in Buckwalter for readability and converted to
# Arabic script at import time.
_BW = from_buckwalter

#: Conjunctions and prepositions, in match order. The comparative ka-
#: and future sa- are deliberately absent: without a morphological
#: analyzer they strip the first letter of very common stems (ktAb,
#: snp); add them back via a custom rule file if precision permits.
DEFAULT_AR_PROCLITICS = tuple(_BW(x) for x in ("w", "f", "b", "l"))

#: Pronominal enclitics, longest first, including l+pronoun compounds
#: (so e.g. the "ly" of bAlnsbAly strips as one unit).
DEFAULT_AR_ENCLITICS = tuple(
    _BW(x)
    for x in (
        "lhA", "lnA", "lkm", "lhm", "lkn", "lhn",
        "ly", "lk", "lh", "hA", "nA", "km", "hm", "kn", "hn", "ny",
        "y", "k", "h",
    )
)

DEFINITE_ARTICLE = _BW("Al")


@dataclass(frozen=True)
class ArRuleSet:
    proclitics: tuple[str, ...] = DEFAULT_AR_PROCLITICS
    enclitics: tuple[str, ...] = DEFAULT_AR_ENCLITICS
    scheme: str = "atb"
    min_stem_len: int = 2
    max_proclitics: int = 3
    max_enclitics: int = 1
    normalize_alif: bool = True
    normalize_ya: bool = True
    article: str = DEFINITE_ARTICLE

    def __post_init__(self) -> None:
        if self.scheme not in ("atb", "d3"):
            raise ArgumentError(f"unknown Arabic scheme: {self.scheme!r}")
        if self.min_stem_len < 1:
            raise ArgumentError("min_stem_len must be at least 1")

    def clitic_vocabulary(self) -> frozenset[str]:
        """Standalone clitic-shaped surfaces, used by the clitic-adjacent
        MCS detector."""
        return frozenset(self.proclitics) | frozenset(self.enclitics) | {self.article}

    def segment(self, token: str) -> list[str]:
        return segment_arabic(self, token)


def segment_arabic(rules: ArRuleSet, token: str) -> list[str]:
    """Strip clitics off one Arabic token under the configured scheme.

    Normalization first, then up to max_proclitics proclitic strips from
    the left (plus the definite article under d3), then up to
    max_enclitics enclitic strips from the right. Every strip requires
    the remaining stem to keep min_stem_len characters, so standalone
    clitic-shaped words stay whole.
    """
    if not token:
        raise ArgumentError("cannot segment an empty token")
    stem = normalize_arabic_letters(
        token, alif=rules.normalize_alif, ya=rules.normalize_ya
    )

    prefix: list[str] = []
    for _ in range(rules.max_proclitics):
        matched = False
        for clitic in rules.proclitics:
            if stem.startswith(clitic) and len(stem) - len(clitic) >= rules.min_stem_len:
                prefix.append(clitic)
                stem = stem[len(clitic):]
                matched = True
                break
        if not matched:
            break

    if rules.scheme == "d3":
        art = rules.article
        if stem.startswith(art) and len(stem) - len(art) >= rules.min_stem_len:
            prefix.append(art)
            stem = stem[len(art):]

    suffix: list[str] = []
    for _ in range(rules.max_enclitics):
        matched = False
        for clitic in rules.enclitics:
            if stem.endswith(clitic) and len(stem) - len(clitic) >= rules.min_stem_len:
                suffix.insert(0, clitic)
                stem = stem[: -len(clitic)]
                matched = True
                break
        if not matched:
            break

    return prefix + [stem] + suffix


def default_english_rules() -> EnRuleSet:
    return EnRuleSet()


def default_arabic_rules(scheme: str = "atb") -> ArRuleSet:
    return ArRuleSet(scheme=scheme)
