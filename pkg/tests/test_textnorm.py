import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mvpdetect.textnorm import encode_text, encode_transcript, encode_word, normalize

SOUNDEX_SHAPE = re.compile(r"^[A-Z][0-9]{3}$")


@pytest.mark.parametrize("raw, tokens", [
    ("I wish you wouldn't.", ["i", "wish", "you", "wouldn't"]),
    ("", []),
    ("A  sight,for SORE eyes", ["a", "sight", "for", "sore", "eyes"]),
    ("SEVENTEEN vs 1717!", ["seventeen", "vs", "1717"]),
    ("tab\tand\nnewline", ["tab", "and", "newline"]),
])
def test_normalize(raw, tokens):
    assert normalize(raw) == tokens


@pytest.mark.parametrize("word, code", [
    ("robert", "R163"),
    ("rupert", "R163"),
    ("a", "A000"),
    ("i", "I000"),
    ("wish", "W200"),
    # standard reference cases: h/w do not separate, vowels do
    ("ashcraft", "A261"),
    ("tymczak", "T522"),
    ("pfister", "P236"),
    ("honeyman", "H555"),
    ("wouldn't", "W435"),
])
def test_encode_word(word, code):
    assert encode_word(word) == code


@pytest.mark.parametrize("token", ["1717", "3rd", "'", "ñandu"])
def test_encode_word_passthrough(token):
    assert encode_word(token) == token


def test_encode_transcript():
    assert encode_transcript(["robert", "rupert"]) == "R163 R163"
    assert encode_transcript([]) == ""
    assert encode_transcript(["i", "wish"]) == "I000 W200"
    assert encode_text("I wish you wouldn't.") == "I000 W200 Y000 W435"


def test_custom_encoder():
    assert encode_transcript(["ab", "cd"], encoder=str.upper) == "AB CD"


@given(st.text())
def test_normalize_idempotent(raw):
    tokens = normalize(raw)
    assert normalize(" ".join(tokens)) == tokens
    for tok in tokens:
        assert tok
        assert all(ch.isalnum() or ch == "'" for ch in tok)
        assert not any(ch.isspace() for ch in tok)


@given(st.lists(st.from_regex(r"[a-z][a-z']{0,12}", fullmatch=True), max_size=12))
def test_encoding_preserves_token_count_and_shape(tokens):
    encoded = encode_transcript(tokens)
    codes = encoded.split(" ") if encoded else []
    assert len(codes) == len(tokens)
    assert all(SOUNDEX_SHAPE.match(c) for c in codes)
