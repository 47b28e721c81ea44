"""Worked-example designs, transcribed symbol for symbol.

Blocks are written the compact way (``"1689a"`` is the block {1,6,8,9,a});
each fixture carries the symbol order used to map symbols to point indices.
"""

from __future__ import annotations

from .designs import Design, TransversalDesign
from .errors import UnknownFixture

_FIXTURES = {
    "fano_7_3_1": dict(
        symbols="1234567",
        blocks="127 145 136 467 256 357 234",
        declared=(2, 1),
    ),
    "bibd_9_3_1": dict(
        symbols="123456789",
        blocks="357 123 456 789 147 258 369 159 267 348 168 249",
        declared=(2, 1),
    ),
    "biplane_11_5_2": dict(
        symbols="123456789ab",
        blocks="1689a 13467 1249b 1235a 23789 348ab 4579a 267ab 1578b 24568 3569b",
        declared=(2, 2),
    ),
    "steiner_3_8_4": dict(
        symbols="12345678",
        blocks="1256 3478 1357 2468 1458 2367 1234 5678 1278 3456 1368 2457 1467 2358",
        declared=(3, 1),
    ),
}

_TD_4_3 = dict(
    groups=[[1, 2, 3], [4, 5, 6], [7, 8, 9], [10, 11, 12]],
    blocks=[
        [1, 4, 7, 10], [1, 5, 8, 11], [1, 6, 9, 12],
        [2, 4, 9, 11], [2, 5, 7, 12], [2, 6, 8, 10],
        [3, 4, 8, 12], [3, 5, 9, 10], [3, 6, 7, 11],
    ],
)

FIXTURE_NAMES = ("steiner_3_8_4", "bibd_9_3_1", "biplane_11_5_2", "fano_7_3_1", "td_4_3")


def symbol_map(name: str) -> dict[str, int]:
    """Printed symbol -> point index for a fixture."""
    if name == "td_4_3":
        return {str(i): i - 1 for i in range(1, 13)}
    try:
        return {s: i for i, s in enumerate(_FIXTURES[name]["symbols"])}
    except KeyError:
        raise UnknownFixture(f"unknown fixture {name!r}; choose from {', '.join(FIXTURE_NAMES)}") from None


def parse_block(name: str, text: str) -> tuple[int, ...]:
    """Turn compact block notation like ``"13467"`` into sorted point indices."""
    sym = symbol_map(name)
    return tuple(sorted(sym[c] for c in text))


def builtin_design(name: str) -> Design | TransversalDesign:
    """Return the named worked example with points relabelled to ``0..v-1``.

    Raises:
        UnknownFixture: for names outside :data:`FIXTURE_NAMES`.
    """
    if name == "td_4_3":
        labels = {i - 1: str(i) for i in range(1, 13)}
        groups = tuple(tuple(x - 1 for x in g) for g in _TD_4_3["groups"])
        blocks = tuple(tuple(x - 1 for x in b) for b in _TD_4_3["blocks"])
        return TransversalDesign(4, 3, groups, blocks, labels)
    sym = symbol_map(name)
    spec = _FIXTURES[name]
    blocks = tuple(parse_block(name, word) for word in spec["blocks"].split())
    labels = {i: s for s, i in sym.items()}
    return Design(len(sym), blocks, spec["declared"], labels)
