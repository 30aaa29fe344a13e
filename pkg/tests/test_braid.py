"""Braid words: reduction, inversion, conjugation, text and JSON forms."""

import random

import pytest

from braidrep.braid import BraidWord, conjugate, theta_word
from braidrep.errors import IndexOutOfRange, SchemaError


def rand_word(rng, strands, length):
    return BraidWord.from_letters(
        strands,
        [(rng.randint(1, strands - 1), rng.choice([1, -1])) for _ in range(length)],
    )


def test_letter_validation():
    with pytest.raises(IndexOutOfRange):
        BraidWord(3, ((3, 1),))
    with pytest.raises(IndexOutOfRange):
        BraidWord(3, ((0, 1),))
    with pytest.raises(ValueError):
        BraidWord(1, ())


def test_free_reduce_cancels_pair():
    w = BraidWord.parse(4, "s1 s2 s2^-1 s1^-1 s3")
    assert w.free_reduce().format() == "s3"


def test_free_reduce_idempotent():
    rng = random.Random(2)
    for _ in range(200):
        w = rand_word(rng, 5, rng.randint(0, 12))
        r = w.free_reduce()
        assert r.free_reduce() == r


def test_word_times_inverse_is_identity():
    rng = random.Random(3)
    for _ in range(200):
        w = rand_word(rng, 4, rng.randint(0, 10))
        assert (w * w.inverse()).letters == ()
        assert (w.inverse() * w).letters == ()


def test_theta_word():
    th = theta_word(4)
    assert th.format() == "s1 s2 s3"
    assert len(theta_word(9)) == 8


def test_conjugate_example():
    # theta * s3 * theta^-1 in B4 reduces to 5 letters
    th = theta_word(4)
    w = conjugate(BraidWord.generator(4, 3), th)
    assert w.format() == "s1 s2 s3 s2^-1 s1^-1"
    assert len(w) == 5


def test_pow():
    th = theta_word(3)
    assert len(th ** 3) == 6
    assert (th ** -1) == th.inverse()
    assert (th ** 0).letters == ()


def test_text_roundtrip():
    rng = random.Random(5)
    for _ in range(100):
        w = rand_word(rng, 6, rng.randint(0, 8))
        assert BraidWord.parse(6, w.format()) == w


def test_parse_rejects_garbage():
    for bad in ["x1", "s0", "s1^2", "s1^+1", "s-1", "s1s2"]:
        with pytest.raises((ValueError, IndexOutOfRange)):
            BraidWord.parse(4, bad)


def test_json_roundtrip():
    w = BraidWord.parse(4, "s1 s2 s3^-1")
    d = w.to_json_dict()
    assert d == {"strands": 4, "word": "s1 s2 s3^-1"}
    assert BraidWord.from_json_dict(d) == w


def test_json_rejects_malformed():
    for bad in [{"strands": 4}, {"word": "s1"}, {"strands": 1, "word": ""},
                {"strands": 4, "word": "s9"}, {"strands": 4, "word": 3}]:
        with pytest.raises(SchemaError):
            BraidWord.from_json_dict(bad)
