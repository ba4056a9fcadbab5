import pytest

from hfplumb.charvec import satisfies_cond13
from hfplumb.errors import InvalidIndex, InvalidN
from hfplumb.families import (
    a_chain,
    certificate_bundle,
    good_path_certificate,
    sigma_2_3,
    u_chain_certificate,
    verify_family,
)
from hfplumb.fullpath import Verdict, basic_vectors, classify, renormalized_length, replay_certificate
from hfplumb.kplus import KState, replay_moves
from hfplumb.plumbing import bad_vertices, is_negative_definite

N_TEST = 10

# K_2 -> L chain for n = 4, block by block
N4_K2_CHAIN = (
    [1, 1, 2, 1, 2, 3, 1]
    + [1, 2, 3, 1, 4, 1, 1, 2, 1, 2, 3, 1]
    + [1, 2, 3, 1, 4, 1, 2, 1, 3, 1, 2, 1, 5]
    + [1, 2, 3, 1, 4, 1, 2, 1, 3, 1, 2, 1, 5, 6]
    + [1, 2, 3, 1, 4, 1, 2, 1, 5, 6, 7, 1]
)


class TestGraphs:
    def test_n1(self):
        G = sigma_2_3(1).graph
        assert G.weights == (-1, -2, -3, -7)
        assert G.edges == ((1, 2), (1, 3), (1, 4))

    def test_n3(self):
        G = sigma_2_3(3).graph
        assert G.s == 6
        assert {(4, 5), (5, 6)} <= set(G.edges)

    @pytest.mark.parametrize("n", range(1, N_TEST + 1))
    def test_invariants(self, n):
        fam = sigma_2_3(n)
        assert fam.graph.s == n + 3
        assert bad_vertices(fam.graph) == [1]
        assert abs(fam.graph.form.det) == 1
        assert is_negative_definite(fam.graph).negative_definite
        assert len(fam.basics) == n + 1
        assert fam.L == (-3, 2, 5, 1) + (0,) * (n - 1)

    def test_k3_n2(self):
        assert sigma_2_3(2).basic(3) == (1, 0, -1, -5, 2)

    def test_invalid(self):
        with pytest.raises(InvalidN):
            sigma_2_3(0)
        with pytest.raises(InvalidIndex):
            good_path_certificate(2, 4)
        with pytest.raises(InvalidIndex):
            u_chain_certificate(2, 0)

    def test_a_chain(self):
        assert a_chain(2).weights == (-2, -2) and a_chain(2).edges == ((1, 2),)
        assert a_chain(1).s == 1
        assert a_chain(4).edges == ((1, 2), (2, 3), (3, 4))


class TestCertificates:
    def test_good_prefix(self):
        assert good_path_certificate(3, 1) == good_path_certificate(3, 2) == [1, 2, 1, 3, 1, 2, 1]

    def test_good_k3(self):
        assert good_path_certificate(5, 3)[7:] == [5, 6, 7, 8]

    def test_good_k4(self):
        assert good_path_certificate(5, 4)[7:] == [6, 5, 7, 6, 8, 7]

    def test_good_k5(self):
        assert good_path_certificate(5, 5)[7:] == [7, 6, 5, 8, 7, 6]

    def test_good_last(self):
        assert good_path_certificate(5, 6)[7:] == [8, 7, 6, 5]

    def test_u_chain_k1(self):
        assert u_chain_certificate(3, 1) == [1, 1, 2, 1]

    def test_u_chain_k1_states(self):
        fam = sigma_2_3(1)
        states = replay_moves(fam.graph, KState(1, fam.basic(1)), [1, 1, 2, 1])
        assert [tuple(s) for s in states] == [
            (1, (1, 0, -1, -5)),
            (1, (-1, 2, 1, -3)),
            (0, (-3, 4, 3, -1)),
            (1, (-1, 0, 3, -1)),
            (0, (-3, 2, 5, 1)),
        ]

    def test_u_chain_n4_k2_written_out(self):
        assert u_chain_certificate(4, 2) == N4_K2_CHAIN

    def test_last_index_has_no_shift_blocks(self):
        n = 4
        assert u_chain_certificate(n, n + 1) == [1, 1, 2, 1, 2, 3, 1] + [1, 2, 3, 1, 4, 1, 2, 1, 5, 6, 7, 1]

    @pytest.mark.parametrize("n", range(1, N_TEST + 1))
    def test_all_replay(self, n):
        fam = sigma_2_3(n)
        for i in range(1, n + 2):
            out = replay_certificate(fam.graph, fam.basic(i), good_path_certificate(n, i))
            assert out.verdict is Verdict.GOOD
            assert out.terminal == classify(fam.graph, fam.basic(i)).terminal
            states = replay_moves(fam.graph, KState(1, fam.basic(i)), u_chain_certificate(n, i))
            assert states[-1] == KState(0, fam.L)
            assert {s.u for s in states} <= {0, 1}
        assert all(c.passed for c in verify_family(n))

    def test_bundle_format(self):
        lines = certificate_bundle(2).splitlines()
        assert lines[0] == "good i=1: 1 2 1 3 1 2 1"
        assert lines[3].startswith("uchain i=1: 1 1 2 1")
        assert len(lines) == 6


@pytest.mark.parametrize("n", range(1, 8))
def test_family_basic_vectors(n):
    fam = sigma_2_3(n)
    got = basic_vectors(fam.graph)
    assert sorted(b.vector for b in got) == sorted(fam.basics)
    assert all(b.length == 0 for b in got)
    assert all(satisfies_cond13(fam.graph, k) for k in fam.basics)


@pytest.mark.parametrize("n", range(2, 9))
def test_nonzero_tail_after_k2_prefix_is_bad(n):
    import itertools

    G = sigma_2_3(n).graph
    for tail in itertools.product((0, 2), repeat=n - 1):
        if any(tail):
            assert classify(G, (1, 0, -1, -3) + tail).verdict is Verdict.BAD


@pytest.mark.parametrize("n", range(1, N_TEST + 1))
def test_renormalized_lengths_zero(n):
    fam = sigma_2_3(n)
    assert all(renormalized_length(fam.graph, k) == 0 for k in fam.basics)
