"""Bengali grapheme segmentation.

Splits a word into logical letter units. A run of Bengali letters joined
by hasanta (the virama sign ``্``, U+09CD) forms a single conjunct unit;
every other codepoint (consonant, independent vowel, dependent vowel
sign, anusvara, punctuation, Latin noise, digits) is a simple unit.

The segmentation is total: malformed hasanta placement (leading, trailing
or doubled) never raises, it glues the stray sign to the nearest unit and
flags the word as irregular. Zero-width joiners and the nukta mark attach
to the unit they follow, so concatenating the unit texts always restores
the input byte for byte.
"""

from __future__ import annotations

import unicodedata
from enum import IntEnum
from typing import NamedTuple

HASANTA = "্"
ZWNJ = "‌"
ZWJ = "‍"
NUKTA = "়"

_ZW = frozenset((ZWNJ, ZWJ))
_ZW_NUKTA = frozenset((ZWNJ, ZWJ, NUKTA))

# Letters (category Lo) of the Bengali block: consonants, independent
# vowels, khanda-ta, the nukta-composed letters.
BENGALI_LETTERS = frozenset(
    chr(cp) for cp in range(0x0980, 0x0A00)
    if unicodedata.category(chr(cp)) == "Lo"
)

# Dependent vowel signs: া ি ী ু ূ ৃ ৄ ে ৈ ো ৌ ৗ
VOWEL_SIGNS = frozenset(
    [chr(cp) for cp in range(0x09BE, 0x09C5)]
    + [chr(cp) for cp in range(0x09C7, 0x09C9)]
    + [chr(cp) for cp in range(0x09CB, 0x09CD)]
    + ["ৗ"]
)

# Consonants that can carry a hasanta when rewriting clusters (excludes
# khanda-ta and independent vowels).
BENGALI_CONSONANTS = frozenset(
    [chr(cp) for cp in range(0x0995, 0x09BA) if chr(cp) in BENGALI_LETTERS]
    + ["ড়", "ঢ়", "য়"]
)


class GraphemeKind(IntEnum):
    SIMPLE = 0
    CONJUNCT = 1


class GraphemeUnit(NamedTuple):
    """One logical letter: a single codepoint (plus attached marks) or a
    hasanta-joined conjunct."""

    kind: GraphemeKind
    text: str
    is_vowel_sign: bool

    @property
    def is_conjunct(self) -> bool:
        return self.kind == GraphemeKind.CONJUNCT


class SegmentedWord(NamedTuple):
    """Ordered grapheme units of a word; unit texts concatenate back to
    ``source`` exactly."""

    units: tuple[GraphemeUnit, ...]
    source: str
    irregular: bool

    @property
    def effective_length(self) -> int:
        return len(self.units)


def _simple(ch: str) -> GraphemeUnit:
    return GraphemeUnit(GraphemeKind.SIMPLE, ch, ch in VOWEL_SIGNS)


def segment(word: str) -> SegmentedWord:
    """Segment ``word`` into grapheme units.

    Never raises; any text segments to units whose concatenation equals
    the input.
    """
    if not word:
        return SegmentedWord((), word, False)

    # Fast path: nothing that joins or attaches, all units are one
    # codepoint.
    if (
        HASANTA not in word
        and NUKTA not in word
        and ZWJ not in word
        and ZWNJ not in word
    ):
        return SegmentedWord(tuple(_simple(ch) for ch in word), word, False)

    units: list[GraphemeUnit] = []
    irregular = False
    n = len(word)
    i = 0
    while i < n:
        ch = word[i]
        if ch in BENGALI_LETTERS:
            j = i + 1
            letters = 1
            while j < n:
                # absorb attached marks after the current letter
                k = j
                while k < n and word[k] in _ZW_NUKTA:
                    k += 1
                if k < n and word[k] == HASANTA:
                    m = k + 1
                    while m < n and word[m] in _ZW:
                        m += 1
                    if m < n and word[m] in BENGALI_LETTERS:
                        j = m + 1
                        letters += 1
                        continue
                    # hasanta not followed by a letter: keep it in this
                    # unit and let the scan continue after it
                    j = k + 1
                    irregular = True
                    break
                j = k
                break
            text = word[i:j]
            # a lone letter glued to a stray hasanta stays simple; its
            # text no longer matches any table key, so it is ineligible
            # for errors
            kind = GraphemeKind.CONJUNCT if letters >= 2 else GraphemeKind.SIMPLE
            units.append(GraphemeUnit(kind, text, False))
            i = j
        elif ch == HASANTA or ch in _ZW_NUKTA:
            # stray joining mark: attach to the previous unit when one
            # exists, otherwise it becomes its own unit
            if ch == HASANTA:
                irregular = True
            if units:
                prev = units[-1]
                units[-1] = GraphemeUnit(prev.kind, prev.text + ch, prev.is_vowel_sign)
            else:
                units.append(GraphemeUnit(GraphemeKind.SIMPLE, ch, False))
            i += 1
        else:
            units.append(_simple(ch))
            i += 1
    return SegmentedWord(tuple(units), word, irregular)


def effective_length(w: SegmentedWord) -> int:
    """Number of units; a conjunct counts as one letter."""
    return len(w.units)


def cluster_letters(text: str) -> list[str]:
    """Split a conjunct's text into its base letters.

    Hasantas separate letters; zero-width joiners are dropped; a nukta
    stays attached to the letter it modifies.
    """
    letters: list[str] = []
    current = ""
    for ch in text:
        if ch == HASANTA:
            if current:
                letters.append(current)
            current = ""
        elif ch in _ZW:
            continue
        elif ch == NUKTA:
            current += ch
        else:
            if current:
                letters.append(current)
            current = ch
    if current:
        letters.append(current)
    return letters


def _consonant_piece(piece: str) -> bool:
    return bool(piece) and piece[0] in BENGALI_CONSONANTS


def join_letters(letters: list[str]) -> str:
    """Join base letters back into cluster text.

    A hasanta is placed between two adjacent pieces only when both sides
    are consonants; rewrites that introduce anusvara or vowels produce a
    flat (unjoined) sequence, which is what a typist's miss looks like.
    """
    out: list[str] = []
    for idx, piece in enumerate(letters):
        if idx > 0 and _consonant_piece(letters[idx - 1]) and _consonant_piece(piece):
            out.append(HASANTA)
        out.append(piece)
    return "".join(out)
