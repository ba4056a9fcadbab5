"""Characteristic vectors in evaluation coordinates ``(K.v_1, ..., K.v_s)``."""
from __future__ import annotations

import itertools
import re
from typing import Iterator, Sequence

from .errors import IndexOutOfRange, LengthMismatch, MalformedInput, NotCharacteristic
from .plumbing import PlumbingGraph

CharVector = tuple[int, ...]


def _check_length(G: PlumbingGraph, xi: Sequence[int]) -> None:
    if len(xi) != G.s:
        raise LengthMismatch(f"vector has length {len(xi)}, graph has {G.s} vertices")


def is_characteristic(G: PlumbingGraph, xi: Sequence[int]) -> bool:
    _check_length(G, xi)
    return all((x - m) % 2 == 0 for x, m in zip(xi, G.weights))


def require_characteristic(G: PlumbingGraph, xi: Sequence[int]) -> CharVector:
    if not is_characteristic(G, xi):
        bad = next(i for i, (x, m) in enumerate(zip(xi, G.weights), 1) if (x - m) % 2)
        raise NotCharacteristic(
            f"{format_vector(xi)} is not characteristic: coordinate {bad} has the wrong parity"
        )
    return tuple(xi)


def satisfies_cond13(G: PlumbingGraph, xi: Sequence[int]) -> bool:
    """``m_i + 2 <= xi_i <= -m_i`` for every i."""
    return all(m + 2 <= x <= -m for x, m in zip(xi, G.weights))


def satisfies_terminal(G: PlumbingGraph, xi: Sequence[int]) -> bool:
    """``-xi`` satisfies the box condition, i.e. ``m_i <= xi_i <= -m_i - 2``."""
    return all(m <= x <= -m - 2 for x, m in zip(xi, G.weights))


def enumerate_cond13(G: PlumbingGraph) -> Iterator[CharVector]:
    """All characteristic vectors in the box, lexicographically.

    There are ``prod(-m_i)`` of them; a positive weight gives an empty
    coordinate range and hence no vectors at all.
    """
    ranges = [range(m + 2, -m + 1, 2) for m in G.weights]
    return itertools.product(*ranges)


def cond13_count(G: PlumbingGraph) -> int:
    total = 1
    for m in G.weights:
        total *= max(0, -m)
    return total


def push(G: PlumbingGraph, xi: Sequence[int], v: int) -> tuple[CharVector, int]:
    """Add ``2 PD[v]`` (1-based ``v``); return the new vector and level delta.

    The delta ``n = (xi_v + m_v) / 2`` is how much the U-level rises under
    the move ``(m, K) ~ (m + n, K + 2PD[v])``.
    """
    if not 1 <= v <= G.s:
        raise IndexOutOfRange(f"vertex {v} out of range 1..{G.s}")
    i = v - 1
    m = G.weights[i]
    out = list(xi)
    n = (out[i] + m) // 2
    out[i] += 2 * m
    for w in G.adjacency[i]:
        out[w] += 2
    return tuple(out), n


def unpush(G: PlumbingGraph, xi: Sequence[int], v: int) -> tuple[CharVector, int]:
    """Inverse of :func:`push`: subtract ``2 PD[v]``.

    Returns ``(eta, n)`` where ``push(eta, v) == (xi, n)``.
    """
    if not 1 <= v <= G.s:
        raise IndexOutOfRange(f"vertex {v} out of range 1..{G.s}")
    i = v - 1
    m = G.weights[i]
    out = list(xi)
    n = (out[i] - m) // 2
    out[i] -= 2 * m
    for w in G.adjacency[i]:
        out[w] -= 2
    return tuple(out), n


_VEC_RE = re.compile(r"^\(?\s*(-?\d+(\s*,\s*-?\d+)*)?\s*\)?$")


def parse_vector(text: str) -> CharVector:
    """Parse ``(1,0,-1,-5)``; parentheses and spaces are optional."""
    t = text.strip()
    if not _VEC_RE.match(t):
        raise MalformedInput(f"cannot parse vector {text!r}")
    body = t.strip("()").strip()
    if not body:
        return ()
    return tuple(int(x) for x in body.split(","))


def format_vector(xi: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in xi) + ")"
