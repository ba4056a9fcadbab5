"""Plumbing graphs and their intersection forms.

Everything here is exact: determinants and leading minors come from
fraction-free (Bareiss) elimination over Python integers, and the inverse
form is computed with :class:`fractions.Fraction`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    DisconnectedGraph,
    HypothesisFailure,
    InvalidWeight,
    LengthMismatch,
    MalformedInput,
    SingularForm,
)

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class PlumbingGraph:
    """Weighted simple connected graph.

    ``weights[i]`` is the self-intersection of vertex ``i + 1``; ``edges``
    holds 1-based pairs ``(i, j)`` with ``i < j``.  Build instances through
    :func:`build_graph`, which validates.
    """

    weights: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def s(self) -> int:
        return len(self.weights)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """0-based neighbour lists."""
        adj: list[list[int]] = [[] for _ in self.weights]
        for i, j in self.edges:
            adj[i - 1].append(j - 1)
            adj[j - 1].append(i - 1)
        return tuple(tuple(sorted(a)) for a in adj)

    def degree(self, v: int) -> int:
        """Degree of the 1-based vertex ``v``."""
        return len(self.adjacency[v - 1])

    @cached_property
    def form(self) -> IntersectionForm:
        return intersection_matrix(self)

    def to_text(self) -> str:
        lines = ["vertices: " + " ".join(str(w) for w in self.weights), "edges:"]
        lines += [f"{i} {j}" for i, j in self.edges]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"vertices": list(self.weights), "edges": [list(e) for e in self.edges]}


@dataclass(frozen=True)
class IntersectionForm:
    Q: Matrix
    det: int
    Qinv: tuple[tuple[Fraction, ...], ...]

    @cached_property
    def unimodular(self) -> bool:
        return abs(self.det) == 1

    @cached_property
    def Qinv_int(self) -> Matrix | None:
        """Integer copy of the inverse, available when ``|det| == 1``."""
        if not self.unimodular:
            return None
        return tuple(tuple(int(x) for x in row) for row in self.Qinv)


def build_graph(weights: Iterable[int], edges: Iterable[Sequence[int]]) -> PlumbingGraph:
    """Validate a weighted graph description and return a :class:`PlumbingGraph`.

    Rejects self-loops, repeated edges (in either orientation), out-of-range
    indices, zero weights and disconnected graphs.
    """
    try:
        ws = tuple(int(w) for w in weights)
    except (TypeError, ValueError) as exc:
        raise MalformedInput(f"weights must be integers: {exc}") from None
    if not ws:
        raise MalformedInput("graph has no vertices")
    for idx, w in enumerate(ws, 1):
        if w == 0:
            raise InvalidWeight(f"vertex {idx} has weight 0")

    s = len(ws)
    seen: set[tuple[int, int]] = set()
    for e in edges:
        if len(e) != 2:
            raise MalformedInput(f"edge {tuple(e)} does not have two endpoints")
        i, j = int(e[0]), int(e[1])
        if not (1 <= i <= s and 1 <= j <= s):
            raise MalformedInput(f"edge ({i}, {j}) out of range 1..{s}")
        if i == j:
            raise MalformedInput(f"self-loop at vertex {i}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise MalformedInput(f"duplicate edge {key[0]}-{key[1]}")
        seen.add(key)

    G = PlumbingGraph(ws, tuple(sorted(seen)))
    # connectivity
    reached = {0}
    stack = [0]
    while stack:
        for w in G.adjacency[stack.pop()]:
            if w not in reached:
                reached.add(w)
                stack.append(w)
    if len(reached) != s:
        missing = sorted(v + 1 for v in set(range(s)) - reached)
        raise DisconnectedGraph(f"vertices {missing} not connected to vertex 1")
    return G


def bareiss_minors(M: Sequence[Sequence[int]]) -> list[int]:
    """Leading principal minors of a square integer matrix.

    Runs Bareiss elimination without pivoting; entry ``k`` of the result is
    the determinant of the upper-left ``(k+1) x (k+1)`` block.  Stops early
    (returning the minors found so far, the last being 0) on a zero pivot.
    """
    n = len(M)
    A = [list(row) for row in M]
    minors = []
    prev = 1
    for k in range(n):
        piv = A[k][k]
        minors.append(piv)
        if piv == 0:
            break
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * piv - A[i][k] * A[k][j]) // prev
        prev = piv
    return minors


def bareiss_det(M: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free elimination with row pivoting."""
    n = len(M)
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * piv - A[i][k] * A[k][j]) // prev
        prev = piv
    return sign * A[n - 1][n - 1]


def exact_inverse(M: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for k in range(n):
        pr = next((r for r in range(k, n) if A[r][k] != 0), None)
        if pr is None:
            raise SingularForm("intersection form is singular")
        A[k], A[pr] = A[pr], A[k]
        piv = A[k][k]
        A[k] = [x / piv for x in A[k]]
        for r in range(n):
            if r != k and A[r][k] != 0:
                f = A[r][k]
                A[r] = [a - f * b for a, b in zip(A[r], A[k])]
    return tuple(tuple(row[n:]) for row in A)


def intersection_matrix(G: PlumbingGraph) -> IntersectionForm:
    """Intersection form of ``G`` with its determinant and exact inverse.

    Raises :class:`SingularForm` when the determinant vanishes.
    """
    Q = form_matrix(G)
    det = bareiss_det(Q)
    if det == 0:
        raise SingularForm("intersection form has determinant 0")
    Qt = tuple(tuple(r) for r in Q)
    return IntersectionForm(Qt, det, exact_inverse(Qt))


@dataclass(frozen=True)
class Definiteness:
    negative_definite: bool
    minors: tuple[int, ...]
    first_violation: int | None  # 1-based index of the first bad minor


def is_negative_definite(G: PlumbingGraph) -> Definiteness:
    """Sylvester's criterion: ``(-1)**k * minor_k > 0`` for every k."""
    minors = bareiss_minors(form_matrix(G))
    for k, d in enumerate(minors, 1):
        if d * (-1) ** k <= 0:
            return Definiteness(False, tuple(minors), k)
    return Definiteness(True, tuple(minors), None)


def form_matrix(G: PlumbingGraph) -> list[list[int]]:
    s = G.s
    Q = [[0] * s for _ in range(s)]
    for i, w in enumerate(G.weights):
        Q[i][i] = w
    for i, j in G.edges:
        Q[i - 1][j - 1] = Q[j - 1][i - 1] = 1
    return Q


def bad_vertices(G: PlumbingGraph) -> list[int]:
    return [v for v in range(1, G.s + 1) if G.degree(v) > -G.weights[v - 1]]


def square(G: PlumbingGraph, xi: Sequence[int]) -> int | Fraction:
    """``K.K = xi^T Q^{-1} xi``; an ``int`` whenever ``|det Q| = 1``."""
    F = G.form
    if len(xi) != G.s:
        raise LengthMismatch(f"vector has length {len(xi)}, graph has {G.s} vertices")
    inv = F.Qinv_int if F.unimodular else F.Qinv
    total = 0
    for i, row in enumerate(inv):
        xi_i = xi[i]
        if xi_i:
            total += xi_i * sum(a * b for a, b in zip(row, xi))
    if isinstance(total, Fraction) and total.denominator == 1:
        return int(total)
    return total


def parse_graph_text(text: str) -> PlumbingGraph:
    """Parse the ``vertices:`` / ``edges:`` text format (``#`` starts a comment).

    Weights may continue on lines after ``vertices:``; each edge line holds
    one 1-based ``i j`` pair.  Errors name the offending line.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_graph_json(text)
    section = None
    weights: list[int] = []
    edges: list[tuple[int, int]] = []
    saw_vertices = saw_edges = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if sep and head.strip().lower() in ("vertices", "edges"):
            section = head.strip().lower()
            if section == "vertices":
                if saw_vertices:
                    raise MalformedInput(f"line {lineno}: repeated 'vertices:' section")
                saw_vertices = True
            else:
                if saw_edges:
                    raise MalformedInput(f"line {lineno}: repeated 'edges:' section")
                saw_edges = True
            line = rest.strip()
            if not line:
                continue
        if section is None:
            raise MalformedInput(f"line {lineno}: expected 'vertices:' or 'edges:'")
        try:
            nums = [int(tok) for tok in line.replace(",", " ").split()]
        except ValueError:
            raise MalformedInput(f"line {lineno}: non-integer token in {raw.strip()!r}") from None
        if section == "vertices":
            weights.extend(nums)
        else:
            if len(nums) != 2:
                raise MalformedInput(f"line {lineno}: edge needs exactly two indices")
            edges.append((nums[0], nums[1]))
    if not saw_vertices:
        raise MalformedInput("missing 'vertices:' section")
    return build_graph(weights, edges)


def parse_graph_json(text: str) -> PlumbingGraph:
    try:
        data = json.loads(text)
        weights = data["vertices"]
        edges = data.get("edges", [])
    except (json.JSONDecodeError, KeyError, TypeError, AttributeError) as exc:
        raise MalformedInput(f"bad JSON graph: {exc}") from None
    return build_graph(weights, edges)


def check_hypotheses(G: PlumbingGraph, require_unimodular: bool = True) -> None:
    """Raise :class:`HypothesisFailure` unless the algorithm applies to ``G``.

    Requires negative definiteness and at most one bad vertex, plus
    ``|det Q| = 1`` when ``require_unimodular`` is set.
    """
    definite = is_negative_definite(G)
    if not definite.negative_definite:
        raise HypothesisFailure(
            f"not negative definite (leading minor {definite.first_violation} "
            f"= {definite.minors[definite.first_violation - 1]})"
        )
    bad = bad_vertices(G)
    if len(bad) > 1:
        raise HypothesisFailure(f"{len(bad)} bad vertices {bad}; at most one allowed")
    if require_unimodular and abs(G.form.det) != 1:
        raise HypothesisFailure(
            f"determinant is {G.form.det}; only integral homology spheres (|det| = 1) are supported"
        )
