"""Exact order-automorphism groups of the rationals and lexicographic towers of them."""

from .intervals import Interval, IntervalSet, fmt_rat, parse_interval_set, parse_rat, rat, relate
from .plmap import PLMap, bump, comm, conj, dep, interpolate, parse_plmap
from .lex import PL2T, REG, LexAut, OBlock, TowerModel, parse_lexaut, parse_model
from .cert import WitnessCert, check_cert, format_cert, parse_certs

__all__ = [
    "Interval", "IntervalSet", "fmt_rat", "parse_interval_set", "parse_rat", "rat", "relate",
    "PLMap", "bump", "comm", "conj", "dep", "interpolate", "parse_plmap",
    "PL2T", "REG", "LexAut", "OBlock", "TowerModel", "parse_lexaut", "parse_model",
    "WitnessCert", "check_cert", "format_cert", "parse_certs",
]

__version__ = "0.1.0"
