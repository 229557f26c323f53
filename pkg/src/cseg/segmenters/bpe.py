"""Byte-pair encoding: greedy most-frequent-pair merge training and
deterministic application.

Training appends an end-of-word marker to every word, then repeatedly
merges the most frequent adjacent symbol pair (ties broken by the
lexicographically smallest (left, right) pair) until the target
vocabulary size is reached or no pair occurs at least twice. The
vocabulary is the initial character alphabet (marker included) plus one
new symbol per merge.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from ..errors import ArgumentError

DEFAULT_END_MARKER = "_"
DEFAULT_VOCAB_SIZE = 8000


@dataclass(frozen=True)
class BpeModel:
    merges: tuple[tuple[str, str], ...]
    vocab_size: int
    end_marker: str = DEFAULT_END_MARKER

    @cached_property
    def ranks(self) -> dict[tuple[str, str], int]:
        return {pair: i for i, pair in enumerate(self.merges)}

    def segment(self, token: str) -> list[str]:
        return apply_bpe(self, token)


def _merge_symbols(symbols: list[str], pair: tuple[str, str]) -> list[str]:
    """Merge non-overlapping occurrences of pair, scanning left to right."""
    left, right = pair
    out: list[str] = []
    i = 0
    n = len(symbols)
    while i < n:
        if i + 1 < n and symbols[i] == left and symbols[i + 1] == right:
            out.append(left + right)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


def _pair_counts(symbols: list[str]) -> Counter:
    return Counter(zip(symbols, symbols[1:]))


def train_bpe(
    word_freqs: Mapping[str, int],
    vocab_size: int = DEFAULT_VOCAB_SIZE,
    end_marker: str = DEFAULT_END_MARKER,
) -> BpeModel:
    """Learn a merge table from a word frequency map.

    Deterministic: identical (word_freqs, vocab_size, end_marker) yield
    an identical merge list regardless of dict iteration order.
    """
    if not word_freqs:
        raise ArgumentError("train_bpe: empty frequency map")
    if len(end_marker) != 1:
        raise ArgumentError("end marker must be a single character")
    for word in word_freqs:
        if not word or any(ch.isspace() for ch in word):
            raise ArgumentError(f"bad word in frequency map: {word!r}")

    # Sort once so that word ids (and thus all bookkeeping) are
    # independent of input ordering.
    words: list[list[str]] = []
    freqs: list[int] = []
    for word, freq in sorted(word_freqs.items()):
        if freq <= 0:
            raise ArgumentError(f"non-positive frequency for {word!r}")
        words.append(list(word) + [end_marker])
        freqs.append(freq)

    vocab = {sym for w in words for sym in w}
    if vocab_size < len(vocab):
        raise ArgumentError(
            f"vocab_size {vocab_size} is below the initial alphabet size "
            f"{len(vocab)}"
        )

    stats: Counter = Counter()
    where: dict[tuple[str, str], set[int]] = defaultdict(set)
    for wid, w in enumerate(words):
        for pair, cnt in _pair_counts(w).items():
            stats[pair] += cnt * freqs[wid]
            where[pair].add(wid)

    merges: list[tuple[str, str]] = []
    while len(vocab) < vocab_size:
        best_pair = None
        best_freq = 0
        for pair, freq in stats.items():
            if freq > best_freq or (freq == best_freq and best_pair is not None and pair < best_pair):
                best_pair = pair
                best_freq = freq
        if best_pair is None or best_freq < 2:
            break
        merges.append(best_pair)
        vocab.add(best_pair[0] + best_pair[1])
        for wid in sorted(where[best_pair]):
            old = words[wid]
            for pair, cnt in _pair_counts(old).items():
                stats[pair] -= cnt * freqs[wid]
                if stats[pair] <= 0:
                    del stats[pair]
                where[pair].discard(wid)
            new = _merge_symbols(old, best_pair)
            words[wid] = new
            for pair, cnt in _pair_counts(new).items():
                stats[pair] += cnt * freqs[wid]
                where[pair].add(wid)

    return BpeModel(
        merges=tuple(merges), vocab_size=len(vocab), end_marker=end_marker
    )


def bpe_pieces(model: BpeModel, alphabet) -> set[str]:
    """The model's full piece inventory over a training alphabet: every
    symbol reachable during application (characters, marker, merge
    outputs) plus their marker-stripped word-final forms. Any token over
    the alphabet segments into pieces from this set, which is what makes
    BPE systems out-of-vocabulary-free."""
    symbols = set(alphabet) | {model.end_marker}
    symbols.update(left + right for left, right in model.merges)
    pieces = set(symbols)
    for sym in symbols:
        if sym.endswith(model.end_marker) and len(sym) > 1:
            pieces.add(sym[: -len(model.end_marker)])
    return pieces


def apply_bpe(model: BpeModel, token: str) -> list[str]:
    """Segment a token by replaying the merge table in recorded order.

    Characters never seen in training simply stay as singleton morphs;
    concatenating the output always reproduces the token.
    """
    if not token:
        raise ArgumentError("cannot segment an empty token")
    ranks = model.ranks
    symbols = list(token) + [model.end_marker]
    # Applying the lowest-ranked present pair first is equivalent to a
    # sequential replay: a merge can only create pairs of later rank.
    while len(symbols) > 1:
        candidate = min(
            (pair for pair in zip(symbols, symbols[1:]) if pair in ranks),
            key=lambda p: ranks[p],
            default=None,
        )
        if candidate is None:
            break
        symbols = _merge_symbols(symbols, candidate)

    # Drop the end marker appended above: it is always the final
    # character of the final symbol.
    last = symbols[-1]
    assert last.endswith(model.end_marker)
    last = last[: -len(model.end_marker)]
    if last:
        symbols[-1] = last
    else:
        symbols.pop()
    return symbols
