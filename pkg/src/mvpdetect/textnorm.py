"""Transcript normalization and phonetic encoding.

Transcripts from different recognizers disagree on case and punctuation
("I wish you wouldn't." vs "i wish you wouldn't"), so everything is reduced
to a lowercase token sequence before comparison.  Each token is then mapped
to its American Soundex code.
"""

from __future__ import annotations

import re
from typing import Callable, Iterable

__all__ = [
    "PhoneticEncoder",
    "normalize",
    "encode_word",
    "encode_transcript",
    "encode_text",
    "soundex",
]

# A token is a maximal run of letters, digits and apostrophes.
_TOKEN_RE = re.compile(r"(?:[^\W_]|')+")

_SOUNDEX_CLASSES = {
    **dict.fromkeys("bfpv", "1"),
    **dict.fromkeys("cgjkqsxz", "2"),
    **dict.fromkeys("dt", "3"),
    "l": "4",
    **dict.fromkeys("mn", "5"),
    "r": "6",
}
_ASCII_LETTERS = frozenset("abcdefghijklmnopqrstuvwxyz")

PhoneticEncoder = Callable[[str], str]


def normalize(raw_text: str) -> list[str]:
    """Lowercase ``raw_text`` and split it into tokens.

    Any character other than a letter, digit or apostrophe acts as a
    separator; empty tokens are dropped.

    >>> normalize("A  sight,for SORE eyes")
    ['a', 'sight', 'for', 'sore', 'eyes']
    """
    return _TOKEN_RE.findall(raw_text.lower())


def soundex(word: str) -> str:
    """American Soundex code of a single token.

    Tokens that do not start with an ASCII letter (numbers such as "1717",
    stray apostrophes, non-Latin words) are returned unchanged.  Apostrophes
    and other non-ASCII characters inside a word are skipped.
    """
    if not word:
        return word
    first = word[0].lower()
    if first not in _ASCII_LETTERS:
        return word

    code = [first.upper()]
    prev = _SOUNDEX_CLASSES.get(first, "")
    for ch in word[1:].lower():
        if ch not in _ASCII_LETTERS:
            continue
        digit = _SOUNDEX_CLASSES.get(ch)
        if digit is not None:
            if digit != prev:
                code.append(digit)
                if len(code) == 4:
                    break
            prev = digit
        elif ch not in "hw":
            # vowels (and y) separate equal codes, h/w do not
            prev = ""
    return "".join(code).ljust(4, "0")


encode_word = soundex


def encode_transcript(tokens: Iterable[str], encoder: PhoneticEncoder = soundex) -> str:
    """Encode every token and join the codes with single spaces."""
    return " ".join(encoder(tok) for tok in tokens)


def encode_text(raw_text: str, encoder: PhoneticEncoder = soundex) -> str:
    """Convenience: ``encode_transcript(normalize(raw_text))``."""
    return encode_transcript(normalize(raw_text), encoder)
