"""Exact distributed maximum matching on a simulated CONGEST network."""

from .graph import INF, AltDist, Graph, Matching, Walk, augment_along, is_augmenting

__all__ = ["INF", "AltDist", "Graph", "Matching", "Walk", "augment_along",
           "is_augmenting"]
__version__ = "0.1.0"
