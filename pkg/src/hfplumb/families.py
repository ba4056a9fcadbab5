"""The Sigma(2,3,6n+1) plumbings, A_s chains, and their path certificates.

Vertex numbering: 1 is the central -1 vertex, 2/3/4 carry weights
-2/-3/-7, and 5..n+3 form the -2 chain hanging off vertex 4.
"""
from __future__ import annotations

from dataclasses import dataclass

from .charvec import CharVector, format_vector
from .errors import IllegalPush, InvalidIndex, InvalidN
from .fullpath import Verdict, replay_certificate
from .kplus import KState, replay_moves
from .plumbing import PlumbingGraph, build_graph

GOOD_PREFIX = (1, 2, 1, 3, 1, 2, 1)
U_PREFIX_K1 = (1, 1, 2, 1)
U_PREFIX = (1, 1, 2, 1, 2, 3, 1)
# moves the excess of K_2 at vertex 4 onto vertex 5
K2_OPENING = (1, 2, 3, 1, 4, 1, 1, 2, 1, 2, 3, 1)
SHIFT_BASE = (1, 2, 3, 1, 4, 1, 2, 1, 3, 1, 2, 1)


@dataclass(frozen=True)
class FamilyInstance:
    n: int
    graph: PlumbingGraph
    basics: tuple[CharVector, ...]
    L: CharVector

    def basic(self, i: int) -> CharVector:
        _check_index(self.n, i)
        return self.basics[i - 1]


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InvalidN(f"n must be a positive integer, got {n!r}")


def _check_index(n: int, i: int) -> None:
    _check_n(n)
    if not 1 <= i <= n + 1:
        raise InvalidIndex(f"basic vector index {i} out of range 1..{n + 1}")


def sigma_2_3(n: int) -> FamilyInstance:
    """Plumbing of Sigma(2,3,6n+1) with its basic vectors and the vector L."""
    _check_n(n)
    weights = [-1, -2, -3, -7] + [-2] * (n - 1)
    edges = [(1, 2), (1, 3), (1, 4)] + [(k, k + 1) for k in range(4, n + 3)]
    G = build_graph(weights, edges)
    zeros = [0] * (n - 1)
    basics = [(1, 0, -1, -5, *zeros), (1, 0, -1, -3, *zeros)]
    for j in range(3, n + 2):
        tail = list(zeros)
        tail[j - 3] = 2
        basics.append((1, 0, -1, -5, *tail))
    return FamilyInstance(n, G, tuple(basics), (-3, 2, 5, 1, *zeros))


def a_chain(s: int) -> PlumbingGraph:
    if not isinstance(s, int) or s < 1:
        raise InvalidN(f"chain length must be positive, got {s!r}")
    return build_graph([-2] * s, [(k, k + 1) for k in range(1, s)])


def good_path_certificate(n: int, i: int) -> list[int]:
    """Pushes of a good full path from ``K_i``.

    After the common prefix, ``K_i`` for ``i >= 3`` continues with blocks
    ``t, t-1, ..., t-w+1`` of width ``w = i - 2`` for ``t = 4+w, ..., n+3``.
    """
    _check_index(n, i)
    seq = list(GOOD_PREFIX)
    if i >= 3:
        w = i - 2
        for top in range(4 + w, n + 4):
            seq.extend(range(top, top - w, -1))
    return seq


def shift_block(j: int) -> list[int]:
    """Moves a coefficient 2 on chain vertex ``4+j`` to ``5+j`` (level stays in {0,1})."""
    return list(SHIFT_BASE) + list(range(5, 5 + j))


def closing_block(n: int) -> list[int]:
    return [1, 2, 3, 1, 4, 1, 2, 1] + list(range(5, n + 4)) + [1]


def u_chain_certificate(n: int, i: int) -> list[int]:
    """Moves from ``(1, K_i)`` to ``(0, L)`` that never leave levels 0 and 1.

    ``K_1`` needs only ``1,1,2,1``.  Otherwise, after the opening moves the
    tail holds a single 2 (for ``K_2`` it starts on vertex 4 itself); shift
    blocks carry it to the end of the chain and a closing block lands on L.
    """
    _check_index(n, i)
    if i == 1:
        return list(U_PREFIX_K1)
    seq = list(U_PREFIX)
    for j in range(i - 2, n - 1):
        seq += list(K2_OPENING) if j == 0 else shift_block(j)
    seq += closing_block(n)
    return seq


def certificate_bundle(n: int) -> str:
    """One certificate per line, ``good i=..`` and ``uchain i=..`` labelled."""
    lines = []
    for i in range(1, n + 2):
        lines.append(f"good i={i}: " + " ".join(map(str, good_path_certificate(n, i))))
    for i in range(1, n + 2):
        lines.append(f"uchain i={i}: " + " ".join(map(str, u_chain_certificate(n, i))))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CertificateCheck:
    kind: str  # "good" | "uchain"
    i: int
    passed: bool
    detail: str


def verify_family(n: int) -> list[CertificateCheck]:
    """Replay every certificate of the family member ``n``."""
    fam = sigma_2_3(n)
    G = fam.graph
    results = []
    for i in range(1, n + 2):
        K = fam.basic(i)
        try:
            out = replay_certificate(G, K, good_path_certificate(n, i))
            ok = out.verdict is Verdict.GOOD
            detail = f"{out.verdict.value}, terminal {format_vector(out.final)}"
        except IllegalPush as exc:
            ok, detail = False, str(exc)
        results.append(CertificateCheck("good", i, ok, detail))
    for i in range(1, n + 2):
        try:
            states = replay_moves(G, KState(1, fam.basic(i)), u_chain_certificate(n, i))
            end = states[-1]
            levels = {s.u for s in states}
            ok = end == KState(0, fam.L) and levels <= {0, 1}
            detail = f"ends at {end}, levels {sorted(levels)}"
        except IllegalPush as exc:
            ok, detail = False, str(exc)
        results.append(CertificateCheck("uchain", i, ok, detail))
    return results
