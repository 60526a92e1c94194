"""Bundled example models used by the tests, the docs and the CLI fixtures.

Each builder returns (complex, fields) where fields is the parameterized
sequence; simplex ids are their sorted vertex strings, so the facet lists are
derivable by dropping one letter at a time.
"""
from __future__ import annotations

from itertools import combinations

from .complexes import Complex, build_complex
from .mvf import MultivectorField, build_mvf


def complex_from_simplices(simplices: list[str]) -> Complex:
    """Build a complex from top-level simplices named by their vertex letters."""
    cells: set[str] = set()
    todo = list(simplices)
    while todo:
        s = todo.pop()
        if s in cells:
            continue
        cells.add(s)
        if len(s) > 1:
            todo.extend("".join(f) for f in combinations(s, len(s) - 1))
    descriptions = []
    for s in sorted(cells, key=lambda x: (len(x), x)):
        facets = ["".join(f) for f in combinations(s, len(s) - 1)] if len(s) > 1 else []
        descriptions.append((s, len(s) - 1, facets))
    return build_complex(descriptions)


def triangle() -> Complex:
    """The full 2-simplex on vertices a, b, c."""
    return complex_from_simplices(["abc"])


# ---------------------------------------------------------------------------
# first example: one field, ten multivectors on a 19-cell complex


def first_example_complex() -> Complex:
    return complex_from_simplices(["abc", "bcd", "cde", "def"])


FIRST_EXAMPLE_MULTIVECTORS = [
    ["abc"],
    ["a", "ab"],
    ["b", "bd"],
    ["bc", "bcd"],
    ["c", "ac"],
    ["d", "cd"],
    ["df", "def"],
    ["e", "ce", "de", "cde"],
    ["ef"],
    ["f"],
]

# the coarse four-block decomposition: attracting cycle, repelling triangle,
# the right-hand region with invariant part {ef, f}, and the bc-flap
FIRST_EXAMPLE_COARSE_BLOCKS = [
    ["a", "ab", "b", "bd", "d", "cd", "c", "ac"],
    ["abc"],
    ["e", "ce", "de", "cde", "df", "def", "ef", "f"],
    ["bc", "bcd"],
]


def first_example() -> tuple[Complex, list[MultivectorField]]:
    c = first_example_complex()
    return c, [build_mvf(c, FIRST_EXAMPLE_MULTIVECTORS)]


# ---------------------------------------------------------------------------
# sphere model: hollow octahedron, six fields
#
# Equator a-b-c-d, north pole e, south pole f.  The sequence models a Hopf
# bifurcation at the north pole (repeller -> attracting point + repelling
# orbit), the orbit breaking into a repelling triangle and a saddle edge, and
# finally the saddle annihilating the southern attractor.


def octahedron_complex() -> Complex:
    return complex_from_simplices(
        ["abe", "ade", "bce", "cde", "abf", "adf", "bcf", "cdf"]
    )


_NORTH_CAP = ["e", "ae", "be", "ce", "de", "abe", "ade", "bce", "cde"]
_ORANGE = [["ae", "abe"], ["be", "bce"], ["ce", "cde"], ["de", "ade"]]
_VERTEX_GRAYS = [["a", "af"], ["b", "bf"], ["c", "cf"], ["d", "df"]]
_G8 = ["ab", "ad", "bc", "cd", "abf", "adf", "bcf", "cdf"]
_G_PAIRS = [["ab", "abf"], ["ad", "adf"], ["bc", "bcf"], ["cd", "cdf"]]
_BROKEN_ORBIT = [["abe"], ["ce"], ["ae", "ade"], ["be", "bce"], ["de", "cde"]]


def octahedron_fields() -> tuple[Complex, list[MultivectorField]]:
    c = octahedron_complex()
    v0 = [_NORTH_CAP, _G8, ["f"], *_VERTEX_GRAYS]
    v1 = [["e"], *_ORANGE, _G8, ["f"], *_VERTEX_GRAYS]
    v2 = [["e"], [x for mv in _ORANGE for x in mv], _G8, ["f"], *_VERTEX_GRAYS]
    v3 = [["e"], *_BROKEN_ORBIT, _G8, ["f"], *_VERTEX_GRAYS]
    v4 = [["e"], *_BROKEN_ORBIT, *_G_PAIRS, ["f"], *_VERTEX_GRAYS]
    v5 = [
        ["e"],
        ["abe"],
        ["ae", "ade"],
        ["be", "bce"],
        ["de", "cde"],
        *_G_PAIRS,
        ["a", "af"],
        ["b", "bf"],
        ["d", "df"],
        ["ce", "c", "cf", "f"],
    ]
    return c, [build_mvf(c, v) for v in (v0, v1, v2, v3, v4, v5)]


# ---------------------------------------------------------------------------
# main example: filled square with a whisker, five fields
#
# Square c-d-p-q with diagonal cp and triangles cdp, cpq; whisker s-ps hangs
# off p.  An attracting disc breaks into an attracting cycle plus a repelling
# interior, the cycle absorbs and releases the whisker, and finally breaks
# into the quadrangle's equilibria (vertex d, saddle edge cd).


def main_example_complex() -> Complex:
    c = complex_from_simplices(["cdp", "cpq"])
    # add the whisker s - ps by hand
    descriptions = []
    for x in c.cells():
        descriptions.append((x, c.dim_of[x], sorted(c.facets[x])))
    descriptions.append(("s", 0, []))
    descriptions.append(("ps", 1, ["p", "s"]))
    return build_complex(descriptions)


_RING = [["cd", "d"], ["c", "cq"], ["pq", "q"], ["dp", "p"]]
_INTERIOR = ["cp", "cdp", "cpq"]
_WHISKER = ["ps", "s"]
_DISC = ["c", "d", "p", "q", "cd", "cp", "cq", "dp", "pq", "cdp", "cpq"]


def main_example_fields() -> tuple[Complex, list[MultivectorField]]:
    c = main_example_complex()
    v0 = [_DISC, _WHISKER]
    v1 = [*_RING, _INTERIOR, _WHISKER]
    v2 = [["cd", "d"], ["c", "cq"], ["pq", "q"], ["dp", "p", "ps", "s"], _INTERIOR]
    v3 = v1
    v4 = [["d"], ["cd"], ["c", "cq"], ["pq", "q"], ["dp", "p"], _INTERIOR, _WHISKER]
    return c, [build_mvf(c, v) for v in (v0, v1, v2, v3, v4)]


# ---------------------------------------------------------------------------
# pitchfork: a single edge, attracting interval breaking into two attractors
# and the separating repeller


def pitchfork_fields() -> tuple[Complex, list[MultivectorField]]:
    c = complex_from_simplices(["bc"])
    v0 = [["b", "c", "bc"]]
    v1 = [["b"], ["c"], ["bc"]]
    return c, [build_mvf(c, v) for v in (v0, v1)]


def as_input_dict(c: Complex, fields: list[MultivectorField], blocks=None) -> dict:
    """Serialize to the CLI input schema."""
    doc = {
        "complex": {
            "cells": [
                {"id": x, "dim": c.dim_of[x], "facets": sorted(c.facets[x])}
                for x in c.cells()
            ]
        },
        "fields": [
            {"multivectors": [sorted(mv) for _, mv in sorted(v.multivectors.items())]}
            for v in fields
        ],
    }
    if blocks is not None:
        for i, b in blocks.items():
            doc["fields"][i]["blocks"] = [sorted(x) for x in b]
    return doc
