"""Unsupervised morph induction by minimum description length.

The model is a morph lexicon with usage counts. A segmentation state
assigns every training word type an analysis; its total cost is

  corpus cost   sum over morph tokens of -log2 p(morph), with p the
                relative dampened-count mass of the morph, i.e.
                N*log2(N) - sum_m C(m)*log2(C(m)), and
  lexicon cost  for every distinct morph in use, the cost of spelling
                it out: sum of per-character costs plus one end-of-morph
                cost, under a fixed character prior.

Word counts are dampened before training (`none`: raw, `log`: 1+ln,
`ones`: 1), so C(m) sums dampened counts over occurrences. The
character prior is frozen from the initial whole-word state, which
makes it the dampened corpus character distribution.

Training algorithms:

- ``recursive``: epochs over the word types in seeded-shuffled order;
  each word is re-segmented by recursive binary splitting, keeping a
  split only when it lowers the total cost. A revert guard restores the
  previous analysis if a re-segmentation would raise the cost, so the
  total cost is non-increasing per epoch by construction.
- ``viterbi``: each epoch re-segments every word by the lowest-cost
  path over the current lexicon (novel morphs admitted at a
  character-prior penalty), with the same revert guard.

Epochs stop when (cost improvement)/(word types) drops below the
finish threshold.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Mapping

from ..errors import ArgumentError

DAMPENING_MODES = ("log", "ones", "none")
ALGORITHMS = ("recursive", "viterbi")

_EPS = 1e-9


@dataclass(frozen=True)
class MdlParams:
    finish_threshold: float = 0.003
    dampening: str = "log"
    algorithm: str = "recursive"
    max_epochs: int = 25
    seed: int = 42
    # Approximate LMVR-style cap: after training, prune the lexicon to at
    # most this many types by dropping lowest-count multi-character morphs.
    lexicon_cap: int | None = None

    def validate(self) -> None:
        if self.finish_threshold <= 0:
            raise ArgumentError("finish_threshold must be positive")
        if self.dampening not in DAMPENING_MODES:
            raise ArgumentError(f"unknown dampening mode: {self.dampening!r}")
        if self.algorithm not in ALGORITHMS:
            raise ArgumentError(f"unknown algorithm: {self.algorithm!r}")
        if self.max_epochs < 1:
            raise ArgumentError("max_epochs must be at least 1")
        if self.lexicon_cap is not None and self.lexicon_cap < 1:
            raise ArgumentError("lexicon_cap must be at least 1")


def dampen(count: int, mode: str) -> float:
    if count < 1:
        raise ArgumentError(f"non-positive word count: {count}")
    if mode == "none":
        return float(count)
    if mode == "log":
        return 1.0 + math.log(count)
    if mode == "ones":
        return 1.0
    raise ArgumentError(f"unknown dampening mode: {mode!r}")


class _CharPrior:
    """Fixed character prior: -log2 probabilities over an alphabet plus
    an end-of-morph symbol, with a floor for unseen characters."""

    def __init__(self, char_mass: Mapping[str, float], end_mass: float):
        total = sum(char_mass.values()) + end_mass
        if total <= 0:
            raise ArgumentError("empty character distribution")
        self.char_cost = {
            ch: -math.log2(mass / total) for ch, mass in char_mass.items() if mass > 0
        }
        self.end_cost = -math.log2(end_mass / total)
        self.unknown_cost = math.log2(total + 1.0)
        self._spell_cache: dict[str, float] = {}

    def spell_cost(self, morph: str) -> float:
        cached = self._spell_cache.get(morph)
        if cached is None:
            cached = (
                sum(self.char_cost.get(ch, self.unknown_cost) for ch in morph)
                + self.end_cost
            )
            self._spell_cache[morph] = cached
        return cached


def _corpus_char_prior(dampened: Mapping[str, float]) -> _CharPrior:
    char_mass: dict[str, float] = {}
    end_mass = 0.0
    for word, d in dampened.items():
        end_mass += d
        for ch in word:
            char_mass[ch] = char_mass.get(ch, 0.0) + d
    return _CharPrior(char_mass, end_mass)


class _State:
    """Incremental bookkeeping of the total cost of a segmentation state."""

    def __init__(self, dampened: Mapping[str, float], prior: _CharPrior):
        self.dampened = dict(dampened)
        self.prior = prior
        self.mass: dict[str, float] = {}
        self.refs: dict[str, int] = {}
        self.n_tokens = 0.0
        self.logtokensum = 0.0  # sum over morphs of C*log2(C)
        self.lexicon_cost = 0.0
        self.analyses: dict[str, list[str]] = {}
        for word in self.dampened:
            self.analyses[word] = [word]
            self.add(word, self.dampened[word])

    def add(self, morph: str, d: float) -> None:
        old = self.mass.get(morph, 0.0)
        new = old + d
        if old > 0.0:
            self.logtokensum -= old * math.log2(old)
        else:
            self.lexicon_cost += self.prior.spell_cost(morph)
        self.logtokensum += new * math.log2(new)
        self.mass[morph] = new
        self.refs[morph] = self.refs.get(morph, 0) + 1
        self.n_tokens += d

    def remove(self, morph: str, d: float) -> None:
        old = self.mass[morph]
        refs = self.refs[morph] - 1
        self.logtokensum -= old * math.log2(old)
        if refs == 0:
            # Drop float residue so fully-removed morphs leave no ghost
            # mass behind.
            self.n_tokens -= old
            del self.mass[morph]
            del self.refs[morph]
            self.lexicon_cost -= self.prior.spell_cost(morph)
        else:
            new = old - d
            self.logtokensum += new * math.log2(new)
            self.mass[morph] = new
            self.refs[morph] = refs
            self.n_tokens -= d

    def cost(self) -> float:
        if self.n_tokens <= 0:
            return self.lexicon_cost
        return self.lexicon_cost + (
            self.n_tokens * math.log2(self.n_tokens) - self.logtokensum
        )

    # -- recursive splitting ------------------------------------------------

    def resplit(self, part: str, d: float) -> list[str]:
        """Find a low-cost analysis of `part` (whose counts are currently
        removed) by greedy recursive binary splitting; leaves the chosen
        analysis's counts added."""
        self.add(part, d)
        best_cost = self.cost()
        self.remove(part, d)
        split_at = 0
        for i in range(1, len(part)):
            left, right = part[:i], part[i:]
            self.add(left, d)
            self.add(right, d)
            c = self.cost()
            self.remove(left, d)
            self.remove(right, d)
            if c < best_cost - _EPS:
                best_cost = c
                split_at = i
        if split_at == 0:
            self.add(part, d)
            return [part]
        left, right = part[:split_at], part[split_at:]
        self.add(left, d)
        self.add(right, d)
        self.remove(left, d)
        left_morphs = self.resplit(left, d)
        self.remove(right, d)
        right_morphs = self.resplit(right, d)
        return left_morphs + right_morphs

    # -- viterbi re-segmentation --------------------------------------------

    def _decode_cost(self, morph: str) -> float:
        mass = self.mass.get(morph, 0.0)
        if mass > 0.0 and self.n_tokens > 0:
            return -math.log2(mass / self.n_tokens)
        return self.prior.spell_cost(morph) + math.log2(self.n_tokens + 1.0)

    def viterbi_analysis(self, word: str) -> list[str]:
        return _viterbi(word, self._decode_cost)


def _viterbi(word: str, morph_cost) -> list[str]:
    """Lowest-cost segmentation by dynamic programming; ties keep the
    earliest split point, so the result is deterministic."""
    n = len(word)
    best = [0.0] + [math.inf] * n
    back = [0] * (n + 1)
    for j in range(1, n + 1):
        for i in range(j):
            if best[i] == math.inf:
                continue
            c = best[i] + morph_cost(word[i:j])
            if c < best[j] - _EPS:
                best[j] = c
                back[j] = i
    morphs: list[str] = []
    j = n
    while j > 0:
        i = back[j]
        morphs.append(word[i:j])
        j = i
    morphs.reverse()
    return morphs


@dataclass(frozen=True)
class MdlModel:
    """Trained morph lexicon; decoding is a pure function of the model."""

    lexicon: dict[str, float]
    params: MdlParams
    epoch_costs: tuple[float, ...] = field(default=(), compare=False, repr=False)
    analyses: dict[str, list[str]] = field(
        default_factory=dict, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        # The character prior is re-derived from the lexicon itself, so a
        # saved-and-loaded model decodes identically to the original.
        char_mass: dict[str, float] = {}
        end_mass = 0.0
        for morph, count in self.lexicon.items():
            end_mass += count
            for ch in morph:
                char_mass[ch] = char_mass.get(ch, 0.0) + count
        object.__setattr__(self, "_prior", _CharPrior(char_mass, end_mass))
        object.__setattr__(self, "_n_tokens", sum(self.lexicon.values()))

    def alphabet_costs(self) -> dict[str, float]:
        return dict(self._prior.char_cost)

    def morph_cost(self, morph: str) -> float:
        """Decode cost in bits: relative-frequency cost for lexicon
        morphs, character-prior penalty for novel ones (total, so any
        token can be decoded)."""
        count = self.lexicon.get(morph, 0.0)
        if count > 0.0:
            return -math.log2(count / self._n_tokens)
        return self._prior.spell_cost(morph) + math.log2(self._n_tokens + 1.0)

    def segment(self, token: str) -> list[str]:
        if not token:
            raise ArgumentError("cannot segment an empty token")
        return _viterbi(token, self.morph_cost)


def train_mdl(
    word_freqs: Mapping[str, int], params: MdlParams = MdlParams()
) -> MdlModel:
    """Train a morph lexicon on a word frequency map.

    Deterministic for fixed (word_freqs, params). The returned model
    carries the per-epoch total cost trajectory in ``epoch_costs``
    (index 0 is the unsegmented baseline).
    """
    params.validate()
    if not word_freqs:
        raise ArgumentError("train_mdl: empty frequency map")
    for word in word_freqs:
        if not word or any(ch.isspace() for ch in word):
            raise ArgumentError(f"bad word in frequency map: {word!r}")

    dampened = {
        w: dampen(c, params.dampening) for w, c in sorted(word_freqs.items())
    }
    prior = _corpus_char_prior(dampened)
    state = _State(dampened, prior)
    words = sorted(dampened)
    rng = random.Random(params.seed)

    costs = [state.cost()]
    for _epoch in range(params.max_epochs):
        order = words[:]
        rng.shuffle(order)
        for word in order:
            d = state.dampened[word]
            old_analysis = state.analyses[word]
            old_cost = state.cost()
            for m in old_analysis:
                state.remove(m, d)
            if params.algorithm == "recursive":
                new_analysis = state.resplit(word, d)
            else:
                new_analysis = state.viterbi_analysis(word)
                for m in new_analysis:
                    state.add(m, d)
            state.analyses[word] = new_analysis
            if state.cost() > old_cost + _EPS:
                for m in new_analysis:
                    state.remove(m, d)
                for m in old_analysis:
                    state.add(m, d)
                state.analyses[word] = old_analysis
        costs.append(state.cost())
        if (costs[-2] - costs[-1]) / len(words) < params.finish_threshold:
            break

    lexicon = dict(sorted(state.mass.items()))
    if params.lexicon_cap is not None and len(lexicon) > params.lexicon_cap:
        lexicon = _prune_lexicon(lexicon, params.lexicon_cap)
    return MdlModel(
        lexicon=lexicon,
        params=params,
        epoch_costs=tuple(costs),
        analyses=dict(state.analyses),
    )


def _prune_lexicon(lexicon: dict[str, float], cap: int) -> dict[str, float]:
    """Greedy prune to at most `cap` types: lowest-count multi-character
    morphs go first; single characters are kept so decoding stays total
    over the training alphabet. Approximate by design."""
    multi = sorted(
        (m for m in lexicon if len(m) > 1), key=lambda m: (lexicon[m], m)
    )
    drop = len(lexicon) - cap
    pruned = dict(lexicon)
    for morph in multi[:drop]:
        del pruned[morph]
    return dict(sorted(pruned.items()))


def segment_mdl(model: MdlModel, token: str) -> list[str]:
    return model.segment(token)
