"""Pseudodiagrams of knots: invariants, pseudodiagram numbers and bounds."""
