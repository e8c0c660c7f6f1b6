"""Two-dimensional open-closed topological field theories over a point."""

from .bordism import CIRCLE, Generator, Interval, Word
from .kfrob import KFrob, from_brane_ranks, validate
from .evaluator import evaluate, relation_suite, roundtrip_check

__version__ = "0.1.0"
