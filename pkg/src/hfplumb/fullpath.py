"""Full paths: classification of box vectors, certificate replay, basic vectors."""
from __future__ import annotations

import enum
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Sequence

from .charvec import (
    CharVector,
    enumerate_cond13,
    format_vector,
    push,
    require_characteristic,
    satisfies_cond13,
    satisfies_terminal,
)
from .errors import HFError, IllegalPush, IndexOutOfRange, StepLimitExceeded
from .plumbing import PlumbingGraph, check_hypotheses, square


class Verdict(str, enum.Enum):
    GOOD = "good"
    BAD = "bad"
    INCOMPLETE = "incomplete"


class Step(NamedTuple):
    vertex: int
    delta: int  # level change of the move; 0 along a full path
    vector: CharVector  # vector after the push


@dataclass(frozen=True)
class PathOutcome:
    verdict: Verdict
    start: CharVector
    pushes: tuple[int, ...]
    final: CharVector
    violation: tuple[int, int] | None = None  # (pushes applied, overshooting vertex)
    trace: tuple[Step, ...] = field(default=(), compare=False, repr=False)

    @property
    def terminal(self) -> CharVector | None:
        return self.final if self.verdict is Verdict.GOOD else None

    def to_dict(self) -> dict:
        d: dict = {
            "verdict": self.verdict.value,
            "start": list(self.start),
            "pushes": list(self.pushes),
        }
        if self.verdict is Verdict.GOOD:
            d["terminal"] = list(self.final)
        elif self.verdict is Verdict.BAD:
            d["violation"] = {"step": self.violation[0], "vertex": self.violation[1]}
            d["final"] = list(self.final)
        else:
            d["final"] = list(self.final)
        return d


def default_step_limit(G: PlumbingGraph) -> int:
    return 16 * G.s * max(-m for m in G.weights) ** 2 if max(G.weights) < 0 else 16 * G.s


def _overshoot(G: PlumbingGraph, xi: Sequence[int]) -> int | None:
    for v, (x, m) in enumerate(zip(xi, G.weights), 1):
        if x > -m:
            return v
    return None


def _eligible(G: PlumbingGraph, xi: Sequence[int]) -> list[int]:
    return [v for v, (x, m) in enumerate(zip(xi, G.weights), 1) if x == -m]


Chooser = Callable[[list[int]], int]


def classify(
    G: PlumbingGraph,
    xi: Sequence[int],
    step_limit: int | None = None,
    choose: Chooser | None = None,
) -> PathOutcome:
    """Follow a full path from ``xi`` and report whether it is good or bad.

    At each step an overshoot (``xi_v > -m_v`` somewhere) ends the path as
    bad before anything else is considered; otherwise a terminal vector ends
    it as good; otherwise we push at a vertex with ``xi_v = -m_v``.  By
    default that is the smallest such vertex, ``choose`` overrides the pick.
    """
    start = require_characteristic(G, xi)
    if not satisfies_cond13(G, start):
        raise HFError(f"{format_vector(start)} does not satisfy the box condition")
    limit = default_step_limit(G) if step_limit is None else step_limit
    cur = start
    pushes: list[int] = []
    trace: list[Step] = []
    while True:
        over = _overshoot(G, cur)
        if over is not None:
            return PathOutcome(Verdict.BAD, start, tuple(pushes), cur, (len(pushes), over), tuple(trace))
        if satisfies_terminal(G, cur):
            return PathOutcome(Verdict.GOOD, start, tuple(pushes), cur, None, tuple(trace))
        if len(pushes) >= limit:
            raise StepLimitExceeded(
                f"full path from {format_vector(start)} exceeded {limit} steps"
            )
        elig = _eligible(G, cur)
        # neither terminal nor overshooting forces some coordinate to equal -m_v
        v = elig[0] if choose is None else choose(elig)
        cur, n = push(G, cur, v)
        pushes.append(v)
        trace.append(Step(v, n, cur))


def replay_certificate(G: PlumbingGraph, xi: Sequence[int], pushes: Iterable[int]) -> PathOutcome:
    """Apply an explicit push sequence and classify where it leads.

    Every push must be legal when reached (``xi_v = -m_v``), otherwise
    :class:`IllegalPush` is raised.  The replay stops as bad at the first
    overshoot; if the sequence is exhausted without reaching a terminal
    vector the verdict is ``INCOMPLETE``.
    """
    start = require_characteristic(G, xi)
    cur = start
    done: list[int] = []
    trace: list[Step] = []
    for v in pushes:
        over = _overshoot(G, cur)
        if over is not None:
            return PathOutcome(Verdict.BAD, start, tuple(done), cur, (len(done), over), tuple(trace))
        if not 1 <= v <= G.s:
            raise IndexOutOfRange(f"vertex {v} out of range 1..{G.s}")
        if cur[v - 1] != -G.weights[v - 1]:
            raise IllegalPush(
                len(done) + 1, v, f"K.v_{v} = {cur[v - 1]}, need {-G.weights[v - 1]}"
            )
        cur, n = push(G, cur, v)
        done.append(v)
        trace.append(Step(v, n, cur))
    over = _overshoot(G, cur)
    if over is not None:
        return PathOutcome(Verdict.BAD, start, tuple(done), cur, (len(done), over), tuple(trace))
    if satisfies_terminal(G, cur):
        return PathOutcome(Verdict.GOOD, start, tuple(done), cur, None, tuple(trace))
    return PathOutcome(Verdict.INCOMPLETE, start, tuple(done), cur, None, tuple(trace))


class BasicVector(NamedTuple):
    vector: CharVector
    length: int | Fraction  # (K.K + |G|) / 4


def renormalized_length(G: PlumbingGraph, xi: Sequence[int]) -> int | Fraction:
    val = Fraction(square(G, xi) + G.s, 4)
    return int(val) if val.denominator == 1 else val


def _classify_chunk(args: tuple[PlumbingGraph, list[CharVector], int | None]) -> list[bool]:
    G, chunk, limit = args
    return [classify(G, xi, limit).verdict is Verdict.GOOD for xi in chunk]


def basic_vectors(
    G: PlumbingGraph,
    jobs: int = 1,
    step_limit: int | None = None,
    force: bool = False,
) -> list[BasicVector]:
    """Box vectors supporting a good full path, in enumeration order."""
    if not force:
        check_hypotheses(G, require_unimodular=False)
    candidates = list(enumerate_cond13(G))
    if jobs <= 1 or len(candidates) < 256:
        good = [classify(G, xi, step_limit).verdict is Verdict.GOOD for xi in candidates]
    else:
        size = max(64, len(candidates) // (4 * jobs))
        chunks = [candidates[i:i + size] for i in range(0, len(candidates), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # map() preserves chunk order, so the merge is deterministic
            parts = pool.map(_classify_chunk, [(G, c, step_limit) for c in chunks])
            good = list(itertools.chain.from_iterable(parts))
    return [
        BasicVector(xi, renormalized_length(G, xi))
        for xi, ok in zip(candidates, good)
        if ok
    ]

