import pytest

from cschur.iqg import (
    IqgError,
    Relation,
    apply_gen,
    apply_word,
    check_all,
    check_idempotents,
    check_relation,
    check_weight_shifts,
    gen_symbols,
    margins_diagonal,
    relations,
    signed_balanced,
    weight_matrix,
    weight_window,
)
from cschur.ring import Scalar, balanced_qint
from cschur.stab import StabElement, lift


def test_signed_balanced():
    assert signed_balanced(2) == balanced_qint(2)
    assert signed_balanced(-2) == -balanced_qint(2)
    assert signed_balanced(0).is_zero()


def test_gen_symbols_per_kind():
    assert gen_symbols("jj", 1) == [("e", 0), ("e", 1), ("f", 0), ("f", 1)]
    assert gen_symbols("ji", 1) == [("e", 0), ("f", 0), ("t", 1)]
    assert gen_symbols("ij", 1) == [("e", 1), ("f", 1), ("t", 0)]
    assert gen_symbols("ii", 1) == [("t", 0), ("t", 1)]
    assert ("t", 0) in gen_symbols("ii", 2) and ("e", 1) in gen_symbols("ii", 2)
    with pytest.raises(IqgError):
        gen_symbols("xx", 1)


def test_weight_window_constraints():
    for lam in weight_window("jj", 1, 2):
        e = [lam.get(i, i) for i in range(3)]
        assert e[0] % 2 and e[2] % 2
    for lam in weight_window("ji", 1, 2):
        assert lam.get(2, 2) == 1
    for lam in weight_window("ii", 1, 2):
        assert lam.get(0, 0) == 1 and lam.get(2, 2) == 1


def test_weight_shift_bookkeeping():
    lam = weight_matrix(1, (1, 0, 1))
    assert check_weight_shifts("jj", 1, lam, "jj")
    out = apply_gen(("e", 0), StabElement.of(lift(lam)), "jj")
    for m in out.support():
        assert m.row_margins_raw() == (1, -1, 0)


def test_idempotent_orthogonality():
    assert check_idempotents("jj", 1, 1, "jj")


def test_single_relation_check():
    lam = weight_matrix(1, (1, 0, 1))
    rels = {r.name: r for r in relations("jj", 1)}
    assert check_relation(rels["node-0-e"], lam, "jj")
    assert check_relation(rels["node-1-f"], lam, "jj")
    # a corrupted relation fails
    bad = Relation(
        "bad",
        rels["node-0-e"].lhs,
        [(lambda e: Scalar.q(5), rels["node-0-e"].rhs[0][1])],
    )
    assert not check_relation(bad, lam, "jj")


@pytest.mark.parametrize("kind,r", [("jj", 1), ("ji", 1), ("ij", 1), ("ii", 2)])
def test_presentations_small_window(kind, r):
    rep = check_all(kind, r, 1)
    assert rep["ok"], rep["failures"][:5]
    assert rep["checked"] > 0


def test_ii_rank_one_anomaly_reported():
    rep = check_all("ii", 1, 1)
    assert rep["ok"]
    assert "anomaly" in rep


def test_empty_window_warns():
    rep = check_all("jj", 1, 0)
    # window 0 leaves no odd values for the end entries
    assert rep.get("warning")
