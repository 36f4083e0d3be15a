"""Canonical JSON encoding rules."""

import json
from fractions import Fraction

import numpy as np

from symcohort.payloads import canonical_json


def decode(payload):
    return json.loads(canonical_json(payload))


def test_floats_rounded_to_six_digits():
    assert decode({"x": 0.1234567891}) == {"x": 0.123457}


def test_negative_zero_collapsed():
    assert json.dumps(decode({"x": -1e-9})) == '{"x": 0.0}'


def test_fractions_become_floats():
    assert decode({"lift": Fraction(3, 4)}) == {"lift": 0.75}


def test_numpy_scalars_normalized():
    out = decode({"a": np.float64(1.5), "b": np.int64(3), "c": [np.float64(0.25)]})
    assert out == {"a": 1.5, "b": 3, "c": [0.25]}


def test_encoding_is_stable():
    payload = {"b": [1.0, Fraction(1, 3)], "a": {"nested": 2.0000001}}
    assert canonical_json(payload) == canonical_json(payload)
