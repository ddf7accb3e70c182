"""Finite-model toolkit for lattices with strict implication and weak difference."""
