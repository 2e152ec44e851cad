"""Compositional verification toolkit for parametric and robust probabilistic
automata: exact model constructions, objective solvers over parameter regions,
simulation preorders, and a mechanized assume-guarantee rule engine."""

__version__ = "0.1.0"
