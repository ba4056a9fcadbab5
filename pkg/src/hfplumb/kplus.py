"""Equivalence classes in Z>=0 x Char(G) by bounded exploration.

Two pairs ``(u, K)`` and ``(u + n, K + 2PD[v])`` are identified whenever
``K.v + v.v = 2n`` and both levels are nonnegative.  Class equality is
decided by connectivity of this move graph inside a finite box; separation
results are only as good as the box, which is why :func:`hf_decomposition`
re-runs with a larger one and compares.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .charvec import CharVector, format_vector, push, unpush
from .errors import (
    GradingMismatch,
    HFError,
    IllegalPush,
    NotStabilized,
    StateCapExceeded,
)
from .fullpath import BasicVector, basic_vectors
from .plumbing import PlumbingGraph, check_hypotheses, square
from .unionfind import UnionFind

# When set, every explored edge is checked against an exact recomputation of
# the grading (slow; the test-suite turns it on).
CHECK_ENV = "HFPLUMB_CHECK"


class KState(NamedTuple):
    u: int
    xi: CharVector

    def __str__(self) -> str:
        return f"U^{self.u} (x) {format_vector(self.xi)}"


@dataclass(frozen=True)
class ExplorationParams:
    slack: int = 4
    level_cap: int = 32
    state_cap: int = 10**7

    def __post_init__(self):
        if self.slack < 0 or self.level_cap < 0 or self.state_cap <= 0:
            raise HFError(f"invalid exploration parameters {self}")

    def enlarged(self) -> ExplorationParams:
        return replace(self, slack=self.slack + 2, level_cap=self.level_cap + 8)


class UnstableResult(HFError):
    exit_code = 3


def in_box(G: PlumbingGraph, xi: Sequence[int], slack: int) -> bool:
    return all(m - 2 * slack <= x <= -m + 2 * slack for x, m in zip(xi, G.weights))


def grading(G: PlumbingGraph, state: KState) -> int | Fraction:
    """``2u - (K.K + |G|) / 4``."""
    val = 2 * state.u - Fraction(square(G, state.xi) + G.s, 4)
    return int(val) if val.denominator == 1 else val


@dataclass
class PruneStats:
    box: int = 0
    level: int = 0


def neighbors(
    G: PlumbingGraph,
    state: KState,
    p: ExplorationParams,
    stats: PruneStats | None = None,
) -> list[KState]:
    """States one elementary move away from ``state``.

    For each vertex, the forward move adds ``2PD[v]`` and the reverse move
    subtracts it; a move is taken only if the level stays nonnegative.
    Results outside the box or above ``p.level_cap`` are dropped and counted
    in ``stats``.
    """
    u, xi = state
    out = []
    lo_hi = [(m - 2 * p.slack, -m + 2 * p.slack) for m in G.weights]
    for v in range(1, G.s + 1):
        for move in (push, unpush):
            eta, n = move(G, xi, v)
            # push raises the level by n; unpush is its inverse, lowering it by n
            nu = u + n if move is push else u - n
            if nu < 0:
                continue
            if nu > p.level_cap:
                if stats is not None:
                    stats.level += 1
                continue
            if not all(lo <= x <= hi for x, (lo, hi) in zip(eta, lo_hi)):
                if stats is not None:
                    stats.box += 1
                continue
            out.append(KState(nu, eta))
    return out


@dataclass
class Exploration:
    component: list[int]  # per seed; components numbered by first seed
    n_states: int
    n_edges: int
    pruned: PruneStats = field(default_factory=PruneStats)
    early_exit: bool = False

    @property
    def n_components(self) -> int:
        return len(set(self.component))

    @property
    def truncated_by_box(self) -> bool:
        return self.pruned.box > 0

    @property
    def truncated_by_level(self) -> bool:
        return self.pruned.level > 0

    # StateCapExceeded is raised instead of returning a truncated result
    truncated_by_states = False


def _check_enabled() -> bool:
    return os.environ.get(CHECK_ENV, "") not in ("", "0")


def explore(
    G: PlumbingGraph,
    seeds: Sequence[KState],
    p: ExplorationParams = ExplorationParams(),
    stop_when_connected: bool = True,
    check: bool | None = None,
) -> Exploration:
    """Breadth-first closure of ``seeds`` under elementary moves.

    Seeds landing in one connected piece share a component id.  With
    ``stop_when_connected`` the search ends as soon as all seeds are joined,
    since further states cannot split them again.
    """
    if check is None:
        check = _check_enabled()
    seeds = [KState(int(s.u), tuple(s.xi)) for s in seeds]
    for s in seeds:
        if s.u < 0 or s.u > p.level_cap or not in_box(G, s.xi, p.slack):
            raise HFError(f"seed {s} lies outside the exploration box")
    index: dict[KState, int] = {}
    uf = UnionFind()
    queue: deque[KState] = deque()
    for s in seeds:
        if s not in index:
            index[s] = uf.add()
            queue.append(s)
    seed_ids = [index[s] for s in seeds]
    stats = PruneStats()
    edges = 0
    groups = len(set(uf.find(i) for i in seed_ids))
    grade: dict[KState, int | Fraction] = {}
    if check:
        for s in index:
            grade[s] = grading(G, s)

    early = False
    while queue and not (stop_when_connected and groups == 1):
        cur = queue.popleft()
        ci = index[cur]
        for nb in neighbors(G, cur, p, stats):
            edges += 1
            ni = index.get(nb)
            fresh = ni is None
            if fresh:
                if len(index) >= p.state_cap:
                    raise StateCapExceeded(
                        f"more than {p.state_cap} states explored; raise --state-cap "
                        f"or lower --slack/--max-level"
                    )
                ni = index[nb] = uf.add()
                queue.append(nb)
            if check:
                h = grade.get(nb)
                if h is None:
                    h = grade[nb] = grading(G, nb)
                if h != grade[cur]:
                    raise GradingMismatch(f"grading changes along edge {cur} -> {nb}")
            # joining a fresh state never merges two seed groups
            if uf.union(ci, ni) and not fresh and stop_when_connected:
                groups = len(set(uf.find(i) for i in seed_ids))
    if queue:
        early = True

    roots: dict[int, int] = {}
    comp = [roots.setdefault(uf.find(i), len(roots)) for i in seed_ids]
    return Exploration(comp, len(index), edges, stats, early)


def replay_moves(
    G: PlumbingGraph, start: KState, moves: Iterable[int]
) -> list[KState]:
    """Apply forward moves ``(u, K) -> (u + n, K + 2PD[v])`` in order.

    Returns every visited state including ``start``.  A move that would
    make the level negative is illegal.
    """
    states = [KState(start.u, tuple(start.xi))]
    u, xi = states[0]
    for step, v in enumerate(moves, 1):
        eta, n = push(G, xi, v)
        if u + n < 0:
            raise IllegalPush(step, v, f"level would drop to {u + n}")
        u, xi = u + n, eta
        states.append(KState(u, xi))
    return states


@dataclass(frozen=True)
class ClassCounts:
    counts: dict[int, int]  # level -> number of classes
    stabilization_level: int
    h0: int | Fraction
    truncated: bool  # some exploration hit the box or level cap


def class_counts(
    G: PlumbingGraph,
    basics: Sequence[CharVector | BasicVector],
    p: ExplorationParams = ExplorationParams(),
    check: bool | None = None,
) -> ClassCounts:
    """Number of classes ``U^m (x) K_i`` at each level until they all coincide."""
    vecs = [b.vector if isinstance(b, BasicVector) else tuple(b) for b in basics]
    if not vecs:
        raise HFError("no basic vectors")
    grades = [grading(G, KState(0, x)) for x in vecs]
    h0 = grades[0]
    for x, h in zip(vecs, grades):
        if h != h0:
            raise GradingMismatch(
                f"basic vectors {format_vector(vecs[0])} and {format_vector(x)} "
                f"have gradings {h0} and {h}"
            )
    counts: dict[int, int] = {}
    truncated = False
    prev = None
    for m in range(p.level_cap + 1):
        res = explore(G, [KState(m, x) for x in vecs], p, check=check)
        c = res.n_components
        if m == 0 and c != len(vecs):
            raise GradingMismatch(
                "two basic vectors are equivalent at level 0; "
                "the graph probably violates the hypotheses"
            )
        if prev is not None and c > prev:
            raise HFError(f"class count rose from {prev} to {c} at level {m}")
        counts[m] = c
        prev = c
        if c > 1 and (res.truncated_by_box or res.truncated_by_level):
            truncated = True
        if c == 1:
            return ClassCounts(counts, m, h0, truncated)
    raise NotStabilized(
        f"still {prev} classes at level cap {p.level_cap}; raise --max-level or --slack"
    )


@dataclass(frozen=True)
class HFDecomposition:
    d: int | Fraction
    reduced: dict  # grading -> rank
    class_counts: dict  # level -> count
    stabilization_level: int
    params: ExplorationParams
    stability: str  # "checked" | "unchecked"

    @property
    def total_ranks(self) -> dict:
        return {self.d + 2 * m: c for m, c in self.class_counts.items()}

    def render(self) -> str:
        terms = [f"T+_{self.d}"]
        terms += [f"Z^{r}_({g})" for g, r in sorted(self.reduced.items())]
        return "HF+ = " + " (+) ".join(terms)

    def to_dict(self) -> dict:
        return {
            "d": _num(self.d),
            "reduced": [[_num(g), r] for g, r in sorted(self.reduced.items())],
            "class_counts": [[m, c] for m, c in sorted(self.class_counts.items())],
            "stabilization_level": self.stabilization_level,
            "params": {
                "slack": self.params.slack,
                "level_cap": self.params.level_cap,
                "state_cap": self.params.state_cap,
            },
            "stability": self.stability,
        }


def _num(x):
    return x if isinstance(x, int) else str(x)


def _assemble(cc: ClassCounts, p: ExplorationParams, stability: str) -> HFDecomposition:
    reduced = {}
    for m, c in cc.counts.items():
        if c > 1:
            reduced[cc.h0 + 2 * m] = reduced.get(cc.h0 + 2 * m, 0) + c - 1
    return HFDecomposition(cc.h0, reduced, dict(cc.counts), cc.stabilization_level, p, stability)


def hf_decomposition(
    G: PlumbingGraph,
    p: ExplorationParams = ExplorationParams(),
    stability_check: bool = True,
    basics: Sequence[BasicVector] | None = None,
    jobs: int = 1,
    force: bool = False,
    check: bool | None = None,
) -> HFDecomposition:
    """``HF+(-Y(G))`` as a tower plus reduced ranks per grading.

    The tower starts at the common grading ``d`` of the basic vectors; level
    ``m`` with ``c(m)`` distinct classes contributes ``Z^{c(m)-1}`` in
    grading ``d + 2m``.
    """
    if not force:
        check_hypotheses(G, require_unimodular=True)
    if basics is None:
        basics = basic_vectors(G, jobs=jobs, force=force)
    cc = class_counts(G, basics, p, check=check)
    if not stability_check:
        return _assemble(cc, p, "unchecked")
    big = p.enlarged()
    cc2 = class_counts(G, basics, big, check=check)
    if (cc.counts, cc.stabilization_level, cc.h0) != (cc2.counts, cc2.stabilization_level, cc2.h0):
        raise UnstableResult(
            f"result changed when the box grew (slack {p.slack}->{big.slack}, "
            f"level cap {p.level_cap}->{big.level_cap}); rerun with larger --slack"
        )
    return _assemble(cc, p, "checked")
