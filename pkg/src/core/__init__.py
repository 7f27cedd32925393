"""Core package."""
from core.space import BorelSet, Interval, NatSet, RealSet, Space
from core.measure import Atom, DiscreteRule, Measure, Piece, SignedMeasure
from core.testfn import TestFunction

__all__ = [
    "BorelSet",
    "Interval",
    "NatSet",
    "RealSet",
    "Space",
    "Atom",
    "DiscreteRule",
    "Measure",
    "Piece",
    "SignedMeasure",
    "TestFunction",
]
