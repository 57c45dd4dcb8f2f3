"""Closed special cases of the multiplication formula.

* the four one-band (Chevalley) cases, with their explicit t-sums;
* the equal-parameter forms at (q0, q1) = (1, q^2): the exponent form and the
  X/Y-indexed form, shown equivalent term by term in tests;
* the type-D specialization (q0, q1) = (1, 1) and its unit-entry cases.

All engines return e-basis elements and are differentially tested against the
general formula (hence against the Hecke oracle).
"""

from __future__ import annotations

import itertools

from .matrices import (
    CodedMatrix,
    MatrixError,
    e_theta,
    iter_move_T,
    iter_split_S,
    length_stats,
    matrix_add,
    matrix_scale,
    matrix_sub,
    shift_apply,
)
from .ring import Scalar, qbinom, qfact, qint
from .schur import (
    SchurElement,
    SchurError,
    bracket_S,
    c_extra,
    h_of,
    move_stats,
    n_of,
    ratio_coefficient,
)


def spec_type_c(x: Scalar) -> Scalar:
    """Specialize (q0, q1) -> (1, q^2)."""
    return x.subs_q0_q1(0, 2)


def spec_type_d(x: Scalar) -> Scalar:
    """Specialize (q0, q1) -> (1, 1)."""
    return x.subs_q0_q1(0, 0)


def vpow(k: int) -> Scalar:
    """v^k with v = q^-1."""
    return Scalar.q(-k)


V2_MINUS_1 = vpow(2) - Scalar.one()


# -- shape detection --------------------------------------------------------------


def chevalley_shape(b: CodedMatrix) -> tuple[int, int, int]:
    """(case, node, R) for a matrix that is diagonal plus R units on one band."""
    off = [(pos, v) for pos, v in b.entries.items() if pos[0] != pos[1]]
    if len(off) != 1:
        raise SchurError("not a one-band matrix")
    (i, j), R = off[0]
    r = b.r
    if j == i + 1:
        if i == 0:
            return 2, 0, R
        if 1 <= i <= r:
            return 1, i, R
    if j == i - 1:
        if i == r + 1:
            return 4, r, R
        if 1 <= i <= r:
            return 3, i - 1, R
    raise SchurError(f"unsupported band position {(i, j)}")


def _t_vectors(total: int, window: list[int], cap) -> list[dict[int, int]]:
    """All t = (t_u) supported on window with sum total and t_u <= cap(u)."""
    out = []

    def rec(idx, remaining, acc):
        if idx == len(window):
            if remaining == 0:
                out.append(dict(acc))
            return
        u = window[idx]
        top = min(remaining, cap(u))
        for v in range(top + 1):
            if v:
                acc[u] = v
                rec(idx + 1, remaining - v, acc)
                del acc[u]
            else:
                rec(idx + 1, remaining, acc)

    rec(0, total, {})
    return out


def _chevalley_target(a: CodedMatrix, t: dict[int, int], node: int, raise_up: bool) -> CodedMatrix:
    """A +- sum_u t_u (E^theta_{node,u} - E^theta_{node+1,u})."""
    out = a
    for u, v in t.items():
        step = matrix_sub(
            e_theta(a.r, node, u, kind=a.kind),
            e_theta(a.r, node + 1, u, kind=a.kind),
        )
        if not raise_up:
            step = matrix_scale(step, -1)
        out = matrix_add(out, matrix_scale(step, v))
    return out


def mul_chevalley(b: CodedMatrix, a: CodedMatrix, case: int | None = None) -> SchurElement:
    """e_B e_A for B diagonal plus one theta-band, by the displayed t-sums."""
    got_case, node, R = chevalley_shape(b)
    if case is not None and case != got_case:
        raise SchurError(f"matrix has case {got_case}, requested {case}")
    case = got_case
    if b.col_margins() != a.row_margins():
        raise SchurError("margin mismatch: col(B) != row(A)")
    r = a.r
    n = a.n
    bnd = a.band() + 2
    acc: dict[CodedMatrix, Scalar] = {}

    def bump(m, c):
        if c.is_zero():
            return
        v = acc.get(m)
        v = c if v is None else v + c
        if v.is_zero():
            acc.pop(m, None)
        else:
            acc[m] = v

    if case == 1:
        i = node
        window = [u for u in range(i - bnd, i + bnd + 2) if a.get(i + 1, u) > 0]
        if i < r:
            vectors = _t_vectors(R, window, lambda u: a.get(i + 1, u))
        else:
            vectors = [
                t
                for t in _t_vectors(R, window, lambda u: a.get(i + 1, u))
                if all(v + t.get(n - u, 0) <= a.get(i + 1, u) for u, v in t.items())
            ]
        for t in vectors:
            expo = -2 * sum(
                a.get(i, j) * tu for u, tu in t.items() for j in range(u + 1, u + bnd + 1)
            )
            coeff = Scalar.q(expo)
            for u, tu in t.items():
                coeff = coeff * qbinom(a.get(i, u) + tu, tu)
            bump(_chevalley_target(a, t, i, True), coeff)
    elif case == 2:
        window = [u for u in range(-bnd - 1, bnd + 2) if a.get(1, u) > 0]
        for t in _t_vectors(R, window, lambda u: a.get(1, u)):
            tneg = sum(v for u, v in t.items() if u < 0)
            expo = -2 * sum(
                a.get(0, j) * tu for u, tu in t.items() for j in range(u + 1, u + 2 * bnd + 2)
            )
            expo -= 2 * sum(
                tu * tv
                for (u, tu), (j, tv) in itertools.product(t.items(), t.items())
                if u < j < -u
            )
            expo -= sum(tu * (tu - 3) for u, tu in t.items() if u < 0)
            coeff = Scalar.mono(e0=-2 * tneg, e1=-2 * tneg, e=2 * expo)
            a00h = a.special_half(0)
            t0 = t.get(0, 0)
            coeff = coeff * qbinom(a00h + t0, t0)
            for ell in range(1, t0 + 1):
                coeff = coeff * c_extra(a00h + ell, "c0")
            for u in range(1, bnd + 2):
                tu, tm = t.get(u, 0), t.get(-u, 0)
                if tu or tm:
                    coeff = (
                        coeff
                        * qbinom(a.get(0, u) + tu + tm, tu + tm)
                        * qbinom(tu + tm, tu)
                    )
            bump(_chevalley_target(a, t, 0, True), coeff)
    elif case == 3:
        i = node
        window = [u for u in range(i - bnd - 1, i + bnd + 2) if a.get(i, u) > 0]
        if i > 0:
            vectors = _t_vectors(R, window, lambda u: a.get(i, u))
        else:
            vectors = [
                t
                for t in _t_vectors(R, window, lambda u: a.get(i, u))
                if all(v + t.get(-u, 0) <= a.get(i, u) for u, v in t.items())
            ]
        for t in vectors:
            expo = -2 * sum(
                a.get(i + 1, j) * tu for u, tu in t.items() for j in range(u - bnd - 1, u)
            )
            coeff = Scalar.q(expo)
            for u, tu in t.items():
                coeff = coeff * qbinom(a.get(i + 1, u) + tu, tu)
            bump(_chevalley_target(a, t, i, False), coeff)
    else:
        window = [u for u in range(r + 1 - bnd - 1, r + 1 + bnd + 2) if a.get(r, u) > 0]
        for t in _t_vectors(R, window, lambda u: a.get(r, u)):
            tpos = sum(v for u, v in t.items() if u > r + 1)
            expo = -2 * sum(
                a.get(r + 1, j) * tu for u, tu in t.items() for j in range(u - 2 * bnd - 2, u)
            )
            expo -= 2 * sum(
                tu * tv
                for (u, tu), (j, tv) in itertools.product(t.items(), t.items())
                if n - u < j < u
            )
            expo -= sum(tu * (tu - 3) for u, tu in t.items() if u > r + 1)
            coeff = Scalar.mono(e0=2 * tpos, e1=-2 * tpos, e=2 * expo)
            adh = a.special_half(r + 1)
            tc = t.get(r + 1, 0)
            coeff = coeff * qbinom(adh + tc, tc)
            for ell in range(1, tc + 1):
                coeff = coeff * c_extra(adh + ell, "c1")
            for u in range(r + 2, r + bnd + 3):
                tu, tm = t.get(u, 0), t.get(n - u, 0)
                if tu or tm:
                    coeff = (
                        coeff
                        * qbinom(a.get(r + 1, u) + tu + tm, tu + tm)
                        * qbinom(tu + tm, tu)
                    )
            bump(_chevalley_target(a, t, r, False), coeff)
    return SchurElement(a.r, a.d, "e", acc)


# -- the equal-parameter exponent form ------------------------------------------------


def mul_one_param_exponent_form(b: CodedMatrix, a: CodedMatrix) -> SchurElement:
    """e_B e_A at (q0,q1)=(1,q^2) via the full-length exponent bookkeeping."""
    if not b.is_tridiagonal():
        raise SchurError("left factor must be tridiagonal")
    if b.col_margins() != a.row_margins():
        raise SchurError("margin mismatch")
    ell_a = length_stats(a)[0]
    ell_b = length_stats(b)[0]
    acc: dict[CodedMatrix, Scalar] = {}
    for t in iter_move_T(b, a):
        w0, wd, wa = move_stats(a, t)
        ell_w = w0 + wd + wa
        for s in iter_split_S(t):
            a_out = shift_apply(a, matrix_sub(t, s))
            ell_out = length_stats(a_out)[0]
            ns = n_of(s)
            hts = h_of(t, s)
            # the sign of the fiber-element length is pinned by the oracle:
            # the quoted exponent display subtracts it, which fails already
            # for diagonal-coset inputs
            ell_tot = ell_a + ell_b - ell_out + ell_w
            coeff = (
                (V2_MINUS_1 ** ns)
                * vpow(2 * (ell_tot - ns - hts))
                * spec_type_c(ratio_coefficient(a, t, s) * bracket_S(s))
            )
            v = acc.get(a_out)
            v = coeff if v is None else v + coeff
            if v.is_zero():
                acc.pop(a_out, None)
            else:
                acc[a_out] = v
    return SchurElement(a.r, a.d, "e", acc)


# -- the equal-parameter X/Y form -----------------------------------------------------


def _xy_binomial(a_star: CodedMatrix, x: CodedMatrix, r: int, window: int) -> Scalar:
    """The bracketed binomial product of the X/Y form over its index half-plane.

    Index set: row -r-1 with j > -r-1, rows -r..-1 with all j, row 0 with j < 0,
    plus descending odd-integer products at the two special diagonal spots.
    """
    out = Scalar.one()
    for i in range(-r - 1, 1):
        for j in range(i - window, i + window + 1):
            if i == -r - 1 and j <= -r - 1:
                continue
            if i == 0 and j >= 0:
                continue
            xi = x.get(i, j)
            xm = x.get(-i, -j)
            if xi == 0 and xm == 0:
                continue
            av = a_star.get(i, j)
            out = out * qbinom(av, xi) * qbinom(av - xi, xm)
    for i in (0, -r - 1):
        xii = x.get(i, i)
        if not xii:
            continue
        av = a_star.get(i, i)
        num = Scalar.one()
        for k in range(xii):
            num = num * qint(av - 2 * k - 1)
        out = out * num.exact_div(qfact(xii))
    return out


def _xi_exponent(a_star: CodedMatrix, x: CodedMatrix, r: int, window: int) -> int:
    """The v-exponent statistic of the X/Y form.

    The special-row pair condition is l < j < 2i - l; the quoted bound 2i - 2l
    fails differentially (at i = 0 the correct bound matches the l < j < -l
    pattern of the unit-band case).
    """
    cols = range(-r - 1 - 2 * window, r + 1 + 2 * window)
    out = 0
    for i in range(-r - 1, r + 1):
        for l in cols:
            xil = x.get(i, l)
            if not xil:
                continue
            for j in cols:
                if j > l:
                    out += (a_star.get(i, j) - x.get(i, j)) * xil
                    if -r <= i <= -1:
                        out -= x.get(-i, -j) * xil
                    if i in (-r - 1, 0) and j < 2 * i - l:
                        out -= x.get(-i, -j) * xil
    for i in (-r - 1, 0):
        for j in cols:
            if j < i:
                xij = x.get(i, j)
                out -= xij * (xij + 1) // 2
    return out


def _n_triple(alpha: dict[int, int], gamma: dict[int, int], beta: dict[int, int]) -> Scalar:
    """The inner sum over upper triangular fillings with margins (beta, gamma)."""
    out = Scalar.zero()
    for sigma in _upper_triangular_fillings(beta, gamma):
        expo = 0
        for (k, l), v in sigma.items():
            expo += 2 * v * sum(av for p, av in alpha.items() if p < l)
            if k == l:
                expo += 2 * v * alpha.get(k, 0)
        expo += 2 * sum(
            v1 * v2
            for (k1, l1), v1 in sigma.items()
            for (k2, l2), v2 in sigma.items()
            if k1 > k2 and l1 < l2
        )
        coeff = vpow(expo)
        for _, v in beta.items():
            coeff = coeff * qfact(v)
        den = Scalar.one()
        for _, v in sigma.items():
            den = den * qfact(v)
        coeff = coeff.exact_div(den)
        for j, gj in gamma.items():
            sj = sigma.get((j, j), 0)
            aj = alpha.get(j, 0)
            for m in range(gj - sj):
                coeff = coeff * (vpow(2 * aj) - vpow(2 * m))
        out = out + coeff
    return out


def _upper_triangular_fillings(beta: dict[int, int], gamma: dict[int, int]):
    """Nonnegative upper-triangular sigma with row sums beta and column sums gamma."""
    beta = {k: v for k, v in beta.items() if v}
    gamma = {k: v for k, v in gamma.items() if v}
    if sum(beta.values()) != sum(gamma.values()):
        return
    rows = sorted(beta)
    cols = sorted(gamma)
    positions = [(k, l) for k in rows for l in cols if k <= l]

    def rec(idx, rowrem, colrem, acc):
        if idx == len(positions):
            if all(v == 0 for v in rowrem.values()) and all(
                v == 0 for v in colrem.values()
            ):
                yield dict(acc)
            return
        k, l = positions[idx]
        top = min(rowrem[k], colrem[l])
        for v in range(top + 1):
            if v:
                acc[(k, l)] = v
            rowrem[k] -= v
            colrem[l] -= v
            yield from rec(idx + 1, rowrem, colrem, acc)
            rowrem[k] += v
            colrem[l] += v
            acc.pop((k, l), None)

    yield from rec(0, dict(beta), dict(gamma), {})


def _n_xy(x: CodedMatrix, y: CodedMatrix, r: int, window: int) -> Scalar:
    out = Scalar.one()
    cols = range(-2 * window - r - 2, 2 * window + r + 3)
    for i in range(0, r + 1):
        alpha = {j: x.get(i, j) for j in cols if x.get(i, j)}
        gamma = {j: y.get(i, j) for j in cols if y.get(i, j)}
        beta = {j: x.get(-i - 1, -j) for j in cols if x.get(-i - 1, -j)}
        out = out * _n_triple(alpha, gamma, beta)
    return out


def mul_one_param_xy_form(b: CodedMatrix, a: CodedMatrix) -> SchurElement:
    """e_B e_A at (q0,q1)=(1,q^2) by the X/Y-indexed multi-band formula."""
    if b.col_margins() != a.row_margins():
        raise SchurError("margin mismatch")
    r, n = a.r, a.n
    alpha = {i: b.get(i, i + 1) for i in range(n)}
    if any(b.get(i, j) for (i, j) in b.entries if j not in (i, i + 1)):
        # entries are canonical; the mirror of a superdiagonal entry is a
        # subdiagonal one, so only |i-j| <= 1 may appear
        if not b.is_tridiagonal():
            raise SchurError("left factor must be diagonal plus superdiagonal bands")
    window = a.band() + b.band() + 2
    cols = range(-window - n, n + window + 1)
    acc: dict[CodedMatrix, Scalar] = {}

    def bump(m, c):
        if c.is_zero():
            return
        v = acc.get(m)
        v = c if v is None else v + c
        if v.is_zero():
            acc.pop(m, None)
        else:
            acc[m] = v

    x_rows = []
    y_rows = []
    for i in range(n):
        x_rows.append(
            _row_placements(alpha[i], [(j, None) for j in range(i - window, i + window + 1)])
        )
        y_rows.append(
            _row_placements(
                alpha[(-i - 1) % n],
                [(j, None) for j in range(i - window, i + window + 1)],
            )
        )

    import itertools as it

    for y_choice in it.product(*y_rows):
        y = CodedMatrix(r, "theta", _merge_rows(y_choice, n))
        ok = True
        for i in range(n):
            for j in range(i - window, i + window + 1):
                if a.get(i, j) - y.get(i, j) + y.get(i - 1, j) < 0:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        for x_choice in it.product(*x_rows):
            x = CodedMatrix(r, "theta", _merge_rows(x_choice, n))
            if not _xy_constraint(x, y, n, window):
                continue
            raw = {}
            for i in range(n):
                for j in range(i - window - 1, i + window + 2):
                    v = (
                        a.get(i, j)
                        + x.get(i, j)
                        - y.get(i, j)
                        - x.get(i - 1, j)
                        + y.get(i - 1, j)
                    )
                    if v:
                        raw[(i, j)] = v
            try:
                a_star = CodedMatrix.from_raw(r, "xi", raw).validate()
            except MatrixError:
                continue
            if a_star.d != a.d:
                continue
            coeff = (
                vpow(2 * _xi_exponent(a_star, x, r, window))
                * _n_xy(x, y, r, window)
                * _xy_binomial(a_star, x, r, window)
            )
            bump(a_star, coeff)
    return SchurElement(a.r, a.d, "e", acc)


# -- the type-D specialization ---------------------------------------------------


def mul_type_d(b: CodedMatrix, a: CodedMatrix) -> SchurElement:
    """e_B e_A at (q0,q1)=(1,1) with the type-D exponent bookkeeping."""
    if not b.is_tridiagonal():
        raise SchurError("left factor must be tridiagonal")
    if b.col_margins() != a.row_margins():
        raise SchurError("margin mismatch")
    a_stats = length_stats(a)
    b_stats = length_stats(b)
    acc: dict[CodedMatrix, Scalar] = {}
    for t in iter_move_T(b, a):
        _, _, wa = move_stats(a, t)
        for s in iter_split_S(t):
            a_out = shift_apply(a, matrix_sub(t, s))
            oa = length_stats(a_out)[3]
            ns = n_of(s)
            hts = h_of(t, s)
            alpha_d = 2 * (b_stats[3] + wa + a_stats[3] - oa - ns - hts)
            coeff = (
                (V2_MINUS_1 ** ns)
                * vpow(alpha_d)
                * spec_type_d(ratio_coefficient(a, t, s) * bracket_S(s))
            )
            v = acc.get(a_out)
            v = coeff if v is None else v + coeff
            if v.is_zero():
                acc.pop(a_out, None)
            else:
                acc[a_out] = v
    return SchurElement(a.r, a.d, "e", acc)


def mul_type_d_unit(b: CodedMatrix, a: CodedMatrix) -> SchurElement:
    """The four single-unit type-D cases: the explicit band t-sums, specialized.

    For columns away from the symmetry nodes this reduces to the displayed
    pattern v^{2 sum_{j>p} a_{hj}} [a_{hp} + 1] e_{A + E...}; the node columns
    carry the end-parameter factorial ratios, which do not drop out at the
    type-D point (checked explicitly in the tests).
    """
    case, node, R = chevalley_shape(b)
    if R != 1:
        raise SchurError("unit-entry case needs a single band unit")
    core = mul_chevalley(b, a, case)
    return SchurElement(
        a.r, a.d, "e", {k: spec_type_d(c) for k, c in core.t.items()}
    )


def unit_case_generic_column_coeff(a: CodedMatrix, case: int, node: int, p: int) -> Scalar:
    """The displayed generic-column coefficient of the unit type-D cases.

    Mirror-side columns carry the displayed exponent shift (the split ranges
    of the quoted case displays).
    """
    bnd = a.band() + 2
    r = a.r
    if case in (1, 2):
        h = 0 if case == 2 else node
        expo = 2 * sum(a.get(h, j) for j in range(p + 1, p + 2 * bnd + 2))
        if case == 2 and p > 0:
            expo -= 2
        if case == 1 and node == r and p > r + 1:
            expo -= 2
        return vpow(expo) * qint(a.get(h, p) + 1)
    h = node + 1 if case == 3 else r + 1
    expo = 2 * sum(a.get(h, j) for j in range(p - 2 * bnd - 2, p))
    if case == 3 and node == 0 and p < 0:
        expo -= 2
    if case == 4 and p > r + 1:
        expo -= 2
    return vpow(expo) * qint(a.get(h, p) + 1)


def _row_placements(total: int, cols):
    """All ways to place `total` units on the listed columns (cap or None)."""
    out = []

    def rec(idx, remaining, acc):
        if idx == len(cols):
            if remaining == 0:
                out.append(dict(acc))
            return
        j, cap = cols[idx]
        top = remaining if cap is None else min(remaining, cap)
        for v in range(top + 1):
            if v:
                acc[j] = v
                rec(idx + 1, remaining - v, acc)
                del acc[j]
            else:
                rec(idx + 1, remaining, acc)

    rec(0, total, {})
    return out


def _merge_rows(rows, n):
    out = {}
    for i, row in enumerate(rows):
        for j, v in row.items():
            out[(i % n, j - (i - i % n))] = v
    return out


def _xy_constraint(x: CodedMatrix, y: CodedMatrix, n: int, window: int) -> bool:
    for i in range(n):
        for j in range(i - window - 1, i + window + 2):
            if x.get(i, j) + x.get(-i - 1, -j) != y.get(i, j) + y.get(-i - 1, -j):
                return False
    return True
