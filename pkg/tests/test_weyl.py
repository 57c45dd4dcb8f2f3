import itertools

import pytest

from cschur.weyl import (
    Composition,
    WeylElement,
    WeylError,
    coset_min_reps,
    in_D_double,
    intersection_parabolic_gens,
    longest_double_coset_rep,
    longest_parabolic_element,
    min_double_coset_rep,
    parabolic_elements,
    parabolic_order,
)


def compositions(r, d):
    """All weak compositions of d into r+2 parts."""
    if r + 2 == 1:
        yield Composition((d,))
        return
    for cut in itertools.combinations(range(d + r + 1), r + 1):
        parts = []
        prev = -1
        for c in cut:
            parts.append(c - prev - 1)
            prev = c
        parts.append(d + r - prev)
        yield Composition(parts)


def all_elements_up_to(d, max_len):
    """All Weyl group elements of length <= max_len (BFS)."""
    e = WeylElement.identity(d)
    layers = {e: 0}
    frontier = [e]
    for ell in range(max_len):
        nxt = []
        for g in frontier:
            for i in range(d + 1):
                h = g.right_gen(i)
                if h not in layers:
                    layers[h] = ell + 1
                    nxt.append(h)
        frontier = nxt
    return layers


def test_simple_generator_windows():
    assert WeylElement.from_word(2, [0]).window == (-1, 2)
    assert WeylElement.from_word(2, []).window == (1, 2)
    assert WeylElement.from_word(2, [2]).window == (1, 4)
    assert WeylElement.from_word(2, [1]).window == (2, 1)


def test_periodic_odd_extension():
    g = WeylElement.from_word(2, [0, 1])
    assert g.value(0) == 0
    assert g.value(3) == 3
    for i in range(-8, 9):
        assert g.value(i + g.D) == g.value(i) + g.D
        assert g.value(-i) == -g.value(i)
    assert g.is_valid()


def test_lengths_examples():
    assert WeylElement.from_word(2, [0]).lengths() == (1, 1, 0, 0)
    assert WeylElement.identity(2).lengths() == (0, 0, 0, 0)
    assert WeylElement.from_word(2, [0, 1, 0]).lengths() == (3, 2, 0, 1)
    assert WeylElement.from_word(2, [2]).lengths() == (1, 0, 1, 0)
    # (s0 s1)^2 has length 4
    assert WeylElement.from_word(2, [0, 1, 0, 1]).lengths()[0] == 4


def test_reduced_word_roundtrip():
    assert WeylElement.identity(3).to_reduced_word() == []
    assert WeylElement.from_word(3, [1]).to_reduced_word() == [1]
    for d in (2, 3):
        for g, ell in all_elements_up_to(d, 4).items():
            word = g.to_reduced_word()
            assert len(word) == ell == g.lengths()[0]
            assert WeylElement.from_word(d, word) == g


def test_length_statistics_match_word_counts():
    for d in (2, 3):
        for g in all_elements_up_to(d, 4):
            word = g.to_reduced_word()
            ell, l0, ld, la = g.lengths()
            assert l0 == word.count(0)
            assert ld == word.count(d)
            assert la == len(word) - l0 - ld


def test_braid_relations_as_permutations():
    for d in (2, 3, 4):
        e = WeylElement.identity(d)
        s = [WeylElement.simple(d, i) for i in range(d + 1)]
        assert s[0] * s[1] != e  # sanity: nontrivial
        assert s[0] * s[1] * s[0] * s[1] == s[1] * s[0] * s[1] * s[0]
        assert s[d - 1] * s[d] * s[d - 1] * s[d] == s[d] * s[d - 1] * s[d] * s[d - 1]
        for k in range(1, d - 1):
            assert s[k] * s[k + 1] * s[k] == s[k + 1] * s[k] * s[k + 1]
        for i in range(d + 1):
            assert s[i] * s[i] == e
            for j in range(i + 2, d + 1):
                assert s[i] * s[j] == s[j] * s[i]


def test_mul_inverse():
    g = WeylElement.from_word(3, [0, 2, 1, 3, 2, 0])
    h = WeylElement.from_word(3, [1, 3])
    assert (g * h).value(5) == g.value(h.value(5))
    assert g * g.inverse() == WeylElement.identity(3)
    assert g.inverse().lengths()[0] == g.lengths()[0]


def test_parabolic_enumeration():
    # d=2, r=1: lam=(0,2,0) removes s_0 and s_2, leaving <s_1>
    lam = Composition((0, 2, 0))
    els = parabolic_elements(lam)
    assert len(els) == 2 == parabolic_order(lam)
    # all mass at lam_0: finite type C_d of size 2^d d!
    for d in (2, 3):
        lam = Composition((d,) + (0,) * (d + 1))
        assert parabolic_order(lam) == (2 ** d) * _fact(d)
        assert len(parabolic_elements(lam)) == parabolic_order(lam)
    # all cut points removed
    lam = Composition((0, 1, 1, 0))
    assert parabolic_elements(lam) == [WeylElement.identity(2)]


def _fact(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def test_longest_parabolic_element():
    for r, d in ((1, 2), (1, 3), (2, 3)):
        for lam in compositions(r, d):
            w0 = longest_parabolic_element(lam)
            els = parabolic_elements(lam)
            best = max(els, key=lambda g: g.lengths()[0])
            assert w0 == best
            assert w0.lengths()[0] == best.lengths()[0]


def test_min_double_coset_rep_examples():
    lam = Composition((0, 2, 0))
    e = WeylElement.identity(2)
    assert min_double_coset_rep(lam, lam, e) == e
    s1 = WeylElement.simple(2, 1)
    assert min_double_coset_rep(lam, lam, s1) == e


def test_min_double_coset_rep_brute_force():
    d, r = 2, 1
    pool = list(all_elements_up_to(d, 3))
    lams = list(compositions(r, d))
    for lam in lams[:4]:
        for mu in lams[:4]:
            wl = parabolic_elements(lam)
            wm = parabolic_elements(mu)
            for g in pool[:12]:
                rep = min_double_coset_rep(lam, mu, g)
                coset = {x * g * y for x in wl for y in wm}
                best = min(coset, key=lambda h: (h.lengths()[0], h.window))
                assert rep in coset
                assert rep.lengths()[0] == best.lengths()[0]
                assert in_D_double(lam, mu, rep)


def test_double_coset_factorization():
    # W_lam x (D_delta cap W_mu) -> W_lam g W_mu is a length-additive bijection
    d, r = 2, 1
    lams = list(compositions(r, d))
    for lam in lams:
        for mu in lams:
            for g in all_elements_up_to(d, 2):
                if not in_D_double(lam, mu, g):
                    continue
                delta_gens = intersection_parabolic_gens(lam, mu, g)
                reps = coset_min_reps(delta_gens, mu)
                wl = parabolic_elements(lam)
                products = {}
                for x in wl:
                    for y in reps:
                        h = x * g * y
                        assert h not in products
                        products[h] = (x, y)
                        assert (
                            h.lengths()[0]
                            == x.lengths()[0] + g.lengths()[0] + y.lengths()[0]
                        )
                coset = {x * g * y for x in wl for y in parabolic_elements(mu)}
                assert set(products) == coset


def test_intersection_parabolic_matches_brute_force():
    d, r = 2, 1
    lams = list(compositions(r, d))
    for lam in lams:
        for mu in lams:
            for g in all_elements_up_to(d, 3):
                if not in_D_double(lam, mu, g):
                    continue
                gens = intersection_parabolic_gens(lam, mu, g)
                wl = set(parabolic_elements(lam))
                wm = parabolic_elements(mu)
                ginv = g.inverse()
                brute = {w for w in wm if g * w * ginv in wl}
                from_gens = set()
                frontier = [WeylElement.identity(d)]
                from_gens.add(frontier[0])
                while frontier:
                    nxt = []
                    for w in frontier:
                        for i in gens:
                            h = w.right_gen(i)
                            if h not in from_gens:
                                from_gens.add(h)
                                nxt.append(h)
                    frontier = nxt
                assert from_gens == brute


def test_longest_double_coset_rep():
    d, r = 2, 1
    lams = list(compositions(r, d))
    # lam = mu, g = e: the longest element of W_mu itself
    for lam in lams:
        got = longest_double_coset_rep(lam, lam, WeylElement.identity(d))
        assert got == longest_parabolic_element(lam)
    # brute force on small cosets
    for lam in lams[:3]:
        for mu in lams[:3]:
            for g in all_elements_up_to(d, 2):
                if not in_D_double(lam, mu, g):
                    continue
                got = longest_double_coset_rep(lam, mu, g)
                coset = {
                    x * g * y
                    for x in parabolic_elements(lam)
                    for y in parabolic_elements(mu)
                }
                best = max(coset, key=lambda h: h.lengths()[0])
                assert got in coset
                assert got.lengths()[0] == best.lengths()[0]
    # trivial parabolic on both sides
    triv = Composition((0, 1, 1, 0))
    g = WeylElement.from_word(2, [0, 1])
    assert longest_double_coset_rep(triv, triv, g) == g


def test_composition_validation():
    with pytest.raises(WeylError):
        Composition((1, -1, 2))
    lam = Composition((1, 1, 0))
    assert lam.cuts() == frozenset({1, 2})
    assert lam.generator_indices() == (0,)
    assert lam.blocks() == [(-1, 1), (2, 2), (3, 3)]


def test_json_roundtrip():
    g = WeylElement.from_word(3, [0, 1, 2, 3])
    assert WeylElement.from_json(g.to_json()) == g
