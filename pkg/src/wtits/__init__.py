"""Coxeter groups, buildings and certified free subgroups of groups acting on them."""

__version__ = "0.1.0"
