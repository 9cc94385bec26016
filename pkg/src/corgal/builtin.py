"""Bundled models: the three-agent train scenario and the four-state
counterexample where splitting a coalition loses power."""

from __future__ import annotations

from .model import EpistemicModel
from .parser import parse_model

TRAIN_DOCUMENT = """\
{
  "agents": ["a", "b", "c"],
  "atoms": ["p"],
  "states": ["w", "v"],
  "valuation": {"w": [], "v": ["p"]},
  "partitions": {
    "a": [["w"], ["v"]],
    "b": [["w"], ["v"]],
    "c": [["w", "v"]]
  },
  "designated": "w"
}
"""

COUNTEREXAMPLE_DOCUMENT = """\
{
  "agents": ["a", "b", "c"],
  "atoms": ["p", "q", "r"],
  "states": ["pqr", "pq", "qr", "pr"],
  "valuation": {
    "pqr": ["p", "q", "r"],
    "pq": ["p", "q"],
    "qr": ["q", "r"],
    "pr": ["p", "r"]
  },
  "partitions": {
    "a": [["pqr", "qr"], ["pq"], ["pr"]],
    "b": [["pqr", "pr"], ["qr"], ["pq"]],
    "c": [["pqr", "pq", "qr"], ["pr"]]
  },
  "designated": "pqr"
}
"""


def train_model() -> EpistemicModel:
    return parse_model(TRAIN_DOCUMENT)


def counterexample_model() -> EpistemicModel:
    return parse_model(COUNTEREXAMPLE_DOCUMENT)
