"""Specialization at a weight function, canonical bases, and monomial chains.

The canonical element attached to A is the unique bar-invariant element equal
to [A] plus strictly lower standard terms whose coefficients are positive
multiples of v^c; it is computed by the usual triangular correction against
the lower canonical elements, with the bar involution supplied exactly by the
Hecke layer.
"""

from __future__ import annotations

from functools import lru_cache

from .matrices import (
    CodedMatrix,
    lt_alg,
    matrix_sub,
    order_key,
    p_shift,
    theta_sym,
)
from .ring import Scalar, VScalar, WeightFunction
from .schur import (
    SchurElement,
    bar_standard,
    mul_standard,
    to_standard,
)


class CanonicalError(Exception):
    pass


BAR_CLOSURE_CAP = 10_000


class SpecElement:
    """Combination of standard basis elements with one-variable coefficients."""

    __slots__ = ("r", "d", "L", "t")

    def __init__(self, r: int, d: int, L: WeightFunction, terms: dict[CodedMatrix, VScalar]):
        self.r = r
        self.d = d
        self.L = L
        self.t = {k: v for k, v in terms.items() if not v.is_zero()}

    @classmethod
    def zero(cls, r, d, L):
        return cls(r, d, L, {})

    @classmethod
    def of(cls, a: CodedMatrix, L: WeightFunction, coeff: VScalar | None = None):
        return cls(a.r, a.d, L, {a: coeff if coeff is not None else VScalar.one()})

    def __eq__(self, other):
        return (
            isinstance(other, SpecElement)
            and (self.r, self.d, self.L) == (other.r, other.d, other.L)
            and self.t == other.t
        )

    def __add__(self, other):
        out = dict(self.t)
        for k, c in other.t.items():
            v = out.get(k)
            v = c if v is None else v + c
            if v.is_zero():
                out.pop(k, None)
            else:
                out[k] = v
        return SpecElement(self.r, self.d, self.L, out)

    def __neg__(self):
        return SpecElement(self.r, self.d, self.L, {k: -c for k, c in self.t.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: VScalar):
        if c.is_zero():
            return SpecElement.zero(self.r, self.d, self.L)
        return SpecElement(self.r, self.d, self.L, {k: c * v for k, v in self.t.items()})

    def coeff(self, a: CodedMatrix) -> VScalar:
        return self.t.get(a, VScalar.zero())

    def is_zero(self):
        return not self.t

    def support(self):
        return list(self.t)

    def to_json(self):
        return {
            "algebra": {"type": "schur-spec", "r": self.r, "d": self.d},
            "weight": [self.L.L0, self.L.L1, self.L.Ld],
            "basis": "std",
            "terms": [
                {"matrix": a.to_json(), "scalar": c.to_json()}
                for a, c in sorted(self.t.items(), key=lambda kv: kv[0]._key)
            ],
        }

    def __repr__(self):
        if not self.t:
            return "0"
        return " + ".join(
            f"({c!r})*[{sorted(a.entries.items())}]"
            for a, c in sorted(self.t.items(), key=lambda kv: kv[0]._key)
        )


def specialize_element(x: SchurElement, L: WeightFunction) -> SpecElement:
    xs = to_standard(x)
    return SpecElement(x.r, x.d, L, {a: c.specialize(L) for a, c in xs.t.items()})


@lru_cache(maxsize=4096)
def bar_standard_cached(a: CodedMatrix) -> SchurElement:
    return bar_standard(a)


def bar_spec_matrix(a: CodedMatrix, L: WeightFunction) -> SpecElement:
    exp = bar_standard_cached(a)
    return SpecElement(a.r, a.d, L, {b: c.specialize(L) for b, c in exp.t.items()})


def bar_spec_element(x: SpecElement) -> SpecElement:
    out = SpecElement.zero(x.r, x.d, x.L)
    for a, c in x.t.items():
        out = out + bar_spec_matrix(a, x.L).scale(c.bar())
    return out


def multiply_spec(x: SpecElement, y: SpecElement) -> SpecElement:
    """Product of specialized elements; left support must be tridiagonal."""
    out = SpecElement.zero(x.r, x.d, x.L)
    for b, cb in x.t.items():
        for a, ca in y.t.items():
            if b.col_margins() != a.row_margins():
                continue
            prod = specialize_element(mul_standard(b, a), x.L)
            out = out + prod.scale(cb * ca)
    return out


# -- canonical basis -------------------------------------------------------------------


def _solve_gamma(rho: VScalar, c: int) -> VScalar:
    """gamma with gamma - bar(gamma) = rho, gamma in v^c Z[v^c]."""
    if rho.constant_term() != 0 or rho.bar() != -rho:
        raise CanonicalError("correction coefficient is not bar-antisymmetric")
    gamma = rho.positive_part()
    if not all(k % c == 0 for k in gamma.t):
        raise CanonicalError("correction exponents are not multiples of c")
    return gamma


def canonical_basis(
    a: CodedMatrix,
    L: WeightFunction,
    reverse_tie: bool = False,
    cap: int = BAR_CLOSURE_CAP,
    _memo=None,
) -> SpecElement:
    """{A}^L expanded in the standard basis at the specialization."""
    if _memo is None:
        _memo = {}
    got = _memo.get(a)
    if got is not None:
        return got
    residue = bar_spec_matrix(a, L) - SpecElement.of(a, L)
    if any(not lt_alg(b, a) for b in residue.support()):
        raise CanonicalError("bar expansion is not strictly triangular")
    out = SpecElement.of(a, L)
    guard = 0
    while not residue.is_zero():
        guard += 1
        if guard > cap:
            raise CanonicalError(f"bar closure exceeded the {cap} iteration cap")

        def extension_key(m):
            return (order_key(m)[0], m._key[::-1] if reverse_tie else m._key)

        b = max(residue.support(), key=extension_key)
        rho = residue.coeff(b)
        gamma = _solve_gamma(rho, L.c)
        cb = canonical_basis(b, L, reverse_tie=reverse_tie, cap=cap, _memo=_memo)
        out = out + cb.scale(gamma)
        residue = residue + cb.scale(gamma.bar() - gamma)
    if not bar_spec_element(out) == out:
        raise CanonicalError("canonical element failed bar invariance")
    lead = out.coeff(a)
    if lead != VScalar.one():
        raise CanonicalError("canonical element is not unitriangular")
    for b, cphi in out.t.items():
        if b == a:
            continue
        if not cphi.in_positive_span(L.c):
            raise CanonicalError("off-leading coefficient outside v^c Z[v^c]")
    _memo[a] = out
    return out


def canonical_block(
    a: CodedMatrix, L: WeightFunction, reverse_tie: bool = False
) -> dict[CodedMatrix, SpecElement]:
    """Canonical elements for A and everything reachable below it."""
    memo: dict[CodedMatrix, SpecElement] = {}
    canonical_basis(a, L, reverse_tie=reverse_tie, _memo=memo)
    return memo


# -- monomial chains --------------------------------------------------------------------


def _unshift_apply(a: CodedMatrix, x: CodedMatrix) -> CodedMatrix:
    from .matrices import hat_shift, matrix_add

    return matrix_add(
        matrix_sub(a, theta_sym(hat_shift(x), kind=a.kind)),
        theta_sym(x, kind=a.kind),
    )


def _peel_factor(a: CodedMatrix) -> tuple[CodedMatrix, CodedMatrix]:
    """(B tridiagonal, A') with [B][A'] = [A] + lower: one inward band move."""
    r, n = a.r, a.n
    move_raw: dict[tuple[int, int], int] = {}
    for (i, j), v in a.entries.items():
        if abs(i - j) < 2:
            continue
        # the two real positions of this orbit are (i,j) and (-i,-j);
        # pick the upper one and park its mass one row down
        if j - i >= 2:
            u, w = i, j
        else:
            u, w = -i, -j
        k = (u + 1) % n
        key = (k, w - (u + 1 - k))
        move_raw[key] = move_raw.get(key, 0) + v
    if not move_raw:
        raise CanonicalError("matrix is already tridiagonal")
    x = CodedMatrix(r, "theta", move_raw)
    a_prime = _unshift_apply(a, x)
    lam = a.row_margins_raw()
    raw: dict[tuple[int, int], int] = {}
    for i in range(r + 1):
        v = x.plain_row_sum(i + 1)
        if v:
            raw[(i, i + 1)] = v
        v2 = x.plain_row_sum(n - i)
        if v2:
            raw[(i + 1, i)] = v2
    up0 = raw.get((0, 1), 0)
    raw[(0, 0)] = 2 * (lam[0] - up0) + 1
    for i in range(1, r + 1):
        raw[(i, i)] = lam[i] - raw.get((i, i - 1), 0) - raw.get((i, i + 1), 0)
    raw[(r + 1, r + 1)] = 2 * (lam[r + 1] - raw.get((r + 1, r), 0)) + 1
    b = CodedMatrix(r, a.kind, raw)
    if a.kind == "xi":
        b.validate()
    if b.col_margins_raw() != a_prime.row_margins_raw() or b.row_margins_raw() != lam:
        raise CanonicalError("peel factor margins are inconsistent")
    return b, a_prime


def monomial_chain(a: CodedMatrix) -> list[CodedMatrix]:
    """Tridiagonal chain whose standard product is [A] plus lower terms.

    The chain depends only on the off-diagonal part, so it commutes with
    diagonal shifts: chain(A + pI) = [M + pI for M in chain(A)].
    """
    out = []
    cur = a
    while not cur.is_tridiagonal():
        b, cur = _peel_factor(cur)
        out.append(b)
    out.append(cur)
    return out


def monomial_product(a: CodedMatrix, verify: bool = True) -> SchurElement:
    """m'_A = [A^(1)] ... [A^(x)], verified to be [A] + strictly lower terms."""
    chain = monomial_chain(a)
    prod = SchurElement.of(chain[-1], basis="std")
    for b in reversed(chain[:-1]):
        acc = SchurElement.zero(a.r, a.d, "std")
        for m, c in prod.t.items():
            acc = acc + mul_standard(b, m).scale(c)
        prod = acc
    if verify:
        if prod.coeff(a) != Scalar.one():
            raise CanonicalError("monomial product has a non-unit leading term")
        for m in prod.support():
            if m != a and not lt_alg(m, a):
                raise CanonicalError("monomial product has non-lower support")
    return prod


def monomial_basis_spec(a: CodedMatrix, L: WeightFunction, memo=None) -> SpecElement:
    """m_A^L: the product of canonical elements along the chain."""
    chain = monomial_chain(a)
    memo = {} if memo is None else memo
    prod = canonical_basis(chain[-1], L, _memo=memo)
    for b in reversed(chain[:-1]):
        prod = multiply_spec(canonical_basis(b, L, _memo=memo), prod)
    return prod


def chain_commutes_with_shift(a: CodedMatrix, p: int) -> bool:
    """chain(A + pI) == chain(A) + pI entrywise."""
    left = monomial_chain(p_shift(a, p))
    right = [p_shift(m, p) for m in monomial_chain(a)]
    return left == right
