"""Darmon points for D = 1.

Thin wrapper over the compiled extension: configurations are dicts in the
same format as the command line's instance files, and every function
returns the report as a dict.
"""

import json

from . import _darmon
from ._darmon import (
    ConfigError,
    DarmonError,
    InternalError,
    PreconditionError,
    ResourceError,
)

SCHEMA = _darmon.schema

__all__ = [
    "SCHEMA",
    "ConfigError",
    "DarmonError",
    "InternalError",
    "PreconditionError",
    "ResourceError",
    "classgroup",
    "embeddings",
    "load_instance",
    "lvalue",
    "reciprocity",
    "sieve",
    "tree",
]


def _report(text):
    return json.loads(text)["report"]


def load_instance(path):
    with open(path) as f:
        return json.load(f)


def classgroup(delta_K, c=1):
    return _report(_darmon.classgroup(delta_K, c))


def embeddings(delta_K, c, M):
    return _report(_darmon.embeddings(delta_K, c, M))


def lvalue(config):
    return _report(_darmon.lvalue(json.dumps(config)))


def sieve(config):
    return _report(_darmon.sieve(json.dumps(config)))


def reciprocity(config):
    return _report(_darmon.reciprocity(json.dumps(config)))


def tree(M, ell, radius=2, perturb=0):
    return _report(_darmon.tree(M, ell, radius, perturb))
