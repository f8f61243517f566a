"""Exact valuations on K[x]: MacLane chains, key polynomials and property suites.

Descriptors, prefixes and ground fields use the same JSON documents as the
``valkey`` command line; they may be given as text or as plain dicts.
Values come back as exact strings ("3/2", "inf").
"""

import json as _json

from . import _valkey
from ._valkey import ValkeyError

__all__ = ["Descriptor", "Prefix", "ValkeyError", "parse_poly", "expand", "run_cli"]


def _text(doc):
    return doc if isinstance(doc, str) else _json.dumps(doc)


def parse_poly(field, text):
    """Canonical text of ``text`` over ``field`` (e.g. {"type": "padic", "p": 2})."""
    return _valkey.parse_poly(_text(field), text)


def expand(field, f, q):
    """The q-adic expansion parts of f, lowest power first."""
    return _valkey.expand(_text(field), f, q)


def run_cli(*args):
    """Runs the command line in-process and returns (exit code, stdout, stderr)."""
    return _valkey.run_cli([str(a) for a in args])


class Descriptor:
    def __init__(self, doc):
        self._d = _valkey.Descriptor.from_json(_text(doc))

    def to_json(self):
        return _json.loads(self._d.to_json())

    def __len__(self):
        return self._d.size

    def key(self, i):
        return self._d.key(i)

    def eval(self, f):
        return self._d.eval(f)

    def epsilon(self, f):
        return _json.loads(self._d.epsilon(f))

    def equivalent(self, f, g):
        return self._d.equivalent(f, g)

    def initial_form(self, key, f):
        return _json.loads(self._d.initial_form(key, f))

    def check_key(self, step):
        return _json.loads(self._d.check_key(step))

    def check(self, suite, *, degree=4, height=3, trials=1000, seed=1, step=None, q="", gamma="inf"):
        """Runs a property suite and returns its report."""
        raw = self._d.check(suite, degree, height, trials, seed, -1 if step is None else step, q, gamma)
        return _json.loads(raw)


class Prefix:
    def __init__(self, doc):
        self._p = _valkey.Prefix.from_json(_text(doc))

    def to_json(self):
        return _json.loads(self._p.to_json())

    def __len__(self):
        return self._p.size

    def stabilize(self, f):
        return _json.loads(self._p.stabilize(f))

    def classify(self, f):
        return _json.loads(self._p.classify(f))

    def limit_check(self, key, gamma="inf", degree=3, height=2):
        return _json.loads(self._p.limit_check(key, gamma, degree, height))

    def check_stabilization(self, short_length=5, *, degree=3, height=2, trials=1000, seed=1):
        return _json.loads(self._p.check_stabilization(short_length, degree, height, trials, seed))
