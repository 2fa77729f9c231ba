"""Named fixture instances shipped with the package."""

from __future__ import annotations

from importlib import resources

from .graph import Graph, Matching, parse_edge_list, parse_matching

NAMES = ("p2", "p4", "walktrap", "blossom6", "c5", "c6", "twin_p4")


def _read(name: str) -> str:
    return resources.files(__package__).joinpath("fixtures").joinpath(name).read_text()


def load(name: str) -> tuple[Graph, Matching]:
    """Return ``(graph, matching)`` for a fixture name such as ``"blossom6"``."""
    name = name.lower()
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {NAMES}")
    g = parse_edge_list(_read(f"{name}.txt"))
    return g, parse_matching(g, _read(f"{name}.matching.txt"))


def all_fixtures() -> dict[str, tuple[Graph, Matching]]:
    return {name: load(name) for name in NAMES}
