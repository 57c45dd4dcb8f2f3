"""Three-parameter affine Hecke algebra in its T_w basis.

Quadratic relations: (T_0 - q0^-1)(T_0 + q1) = 0 at the 0-node,
(T_i - q^-1)(T_i + q) = 0 in the interior, (T_d - q1^-1)(T_d + q0^-1) = 0
at the d-node.  Elements are finite scalar combinations of T_w, keyed by the
window of w.
"""

from __future__ import annotations

from .ring import Scalar
from .weyl import (
    Composition,
    WeylElement,
    coset_min_reps,
    in_D_double,
    intersection_parabolic_gens,
    parabolic_elements,
)


class HeckeError(Exception):
    pass


def _gen_constants(d: int, i: int) -> tuple[Scalar, Scalar]:
    """(a, b) with T_w T_s = a T_w + b T_{ws} when s is a right descent of w."""
    if i == 0:
        return Scalar.q0(-1) - Scalar.q1(1), Scalar.mono(e0=-2, e1=2)
    if i == d:
        return Scalar.q1(-1) - Scalar.q0(-1), Scalar.mono(e0=-2, e1=-2)
    return Scalar.q(-1) - Scalar.q(1), Scalar.one()


def q_weight_inv(g: WeylElement) -> Scalar:
    """q_g^-1 = q0^{l_cd} q1^{-l_c0} q^{-l_a} as a monomial."""
    _, l0, ld, la = g.lengths()
    return Scalar.mono(e0=2 * ld, e1=-2 * l0, e=-2 * la)


def q_weight(g: WeylElement) -> Scalar:
    _, l0, ld, la = g.lengths()
    return Scalar.mono(e0=-2 * ld, e1=2 * l0, e=2 * la)


class HeckeElement:
    """Finite formal combination of T_w, all of one rank d."""

    __slots__ = ("d", "t")

    def __init__(self, d: int, terms: dict[tuple[int, ...], Scalar]):
        self.d = d
        self.t = terms

    @classmethod
    def zero(cls, d: int) -> "HeckeElement":
        return cls(d, {})

    @classmethod
    def unit(cls, d: int) -> "HeckeElement":
        return cls(d, {WeylElement.identity(d).window: Scalar.one()})

    @classmethod
    def of(cls, g: WeylElement, coeff: Scalar | None = None) -> "HeckeElement":
        return cls(g.d, {g.window: coeff if coeff is not None else Scalar.one()})

    def is_zero(self) -> bool:
        return not self.t

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HeckeElement)
            and self.d == other.d
            and self.t == other.t
        )

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        if self.d != other.d:
            raise HeckeError("rank mismatch")
        out = dict(self.t)
        for w, c in other.t.items():
            v = out.get(w)
            v = c if v is None else v + c
            if v.is_zero():
                out.pop(w, None)
            else:
                out[w] = v
        return HeckeElement(self.d, out)

    def __neg__(self) -> "HeckeElement":
        return HeckeElement(self.d, {w: -c for w, c in self.t.items()})

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + (-other)

    def scale(self, c: Scalar) -> "HeckeElement":
        if c.is_zero():
            return HeckeElement.zero(self.d)
        return HeckeElement(self.d, {w: c * v for w, v in self.t.items()})

    def coeff(self, g: WeylElement) -> Scalar:
        return self.t.get(g.window, Scalar.zero())

    def n_terms(self) -> int:
        return len(self.t)

    # -- products -------------------------------------------------------------

    def mul_gen(self, i: int) -> "HeckeElement":
        """self * T_{s_i}."""
        d = self.d
        a, b = _gen_constants(d, i)
        out: dict[tuple[int, ...], Scalar] = {}

        def bump(w, c):
            v = out.get(w)
            v = c if v is None else v + c
            if v.is_zero():
                out.pop(w, None)
            else:
                out[w] = v

        for win, c in self.t.items():
            g = WeylElement(d, win)
            gs = g.right_gen(i)
            if g.has_right_descent(i):
                bump(win, c * a)
                bump(gs.window, c * b)
            else:
                bump(gs.window, c)
        return HeckeElement(d, out)

    def mul_gen_left(self, i: int) -> "HeckeElement":
        """T_{s_i} * self."""
        d = self.d
        a, b = _gen_constants(d, i)
        out: dict[tuple[int, ...], Scalar] = {}

        def bump(w, c):
            v = out.get(w)
            v = c if v is None else v + c
            if v.is_zero():
                out.pop(w, None)
            else:
                out[w] = v

        for win, c in self.t.items():
            g = WeylElement(d, win)
            sg = g.left_gen(i)
            if g.has_left_descent(i):
                bump(win, c * a)
                bump(sg.window, c * b)
            else:
                bump(sg.window, c)
        return HeckeElement(d, out)

    def mul_word(self, word) -> "HeckeElement":
        out = self
        for i in word:
            out = out.mul_gen(i)
        return out

    def mul_Tw(self, g: WeylElement) -> "HeckeElement":
        return self.mul_word(g.to_reduced_word())

    def __mul__(self, other: "HeckeElement") -> "HeckeElement":
        if self.d != other.d:
            raise HeckeError("rank mismatch")
        out = HeckeElement.zero(self.d)
        for win, c in other.t.items():
            w = WeylElement(self.d, win)
            out = out + self.mul_Tw(w).scale(c)
        return out

    # -- bar ---------------------------------------------------------------------

    def bar(self) -> "HeckeElement":
        out = HeckeElement.zero(self.d)
        for win, c in self.t.items():
            g = WeylElement(self.d, win)
            out = out + bar_Tw(g).scale(c.bar())
        return out

    def to_json(self):
        return [
            {"element": {"d": self.d, "window": list(w)}, "scalar": c.to_json()}
            for w, c in sorted(self.t.items())
        ]

    @classmethod
    def from_json(cls, d: int, data) -> "HeckeElement":
        out: dict[tuple[int, ...], Scalar] = {}
        for item in data:
            out[tuple(item["element"]["window"])] = Scalar.from_json(item["scalar"])
        return cls(d, out)

    def __repr__(self):
        if not self.t:
            return "0"
        bits = [f"({c!r})*T{list(w)}" for w, c in sorted(self.t.items())]
        return " + ".join(bits)


_BAR_GEN_CACHE: dict[tuple[int, int], HeckeElement] = {}
_BAR_TW_CACHE: dict[tuple[int, tuple[int, ...]], HeckeElement] = {}


def bar_gen(d: int, i: int) -> HeckeElement:
    """bar(T_{s_i}) = T_{s_i}^-1 expanded in the T-basis."""
    key = (d, i)
    got = _BAR_GEN_CACHE.get(key)
    if got is not None:
        return got
    e = WeylElement.identity(d)
    s = WeylElement.simple(d, i)
    if i == 0:
        out = HeckeElement(
            d,
            {
                s.window: Scalar.mono(e0=2, e1=-2),
                e.window: Scalar.q0(1) - Scalar.q1(-1),
            },
        )
    elif i == d:
        out = HeckeElement(
            d,
            {
                s.window: Scalar.mono(e0=2, e1=2),
                e.window: Scalar.q1(1) - Scalar.q0(1),
            },
        )
    else:
        out = HeckeElement(
            d, {s.window: Scalar.one(), e.window: Scalar.q(1) - Scalar.q(-1)}
        )
    _BAR_GEN_CACHE[key] = out
    return out


def bar_Tw(g: WeylElement) -> HeckeElement:
    """bar(T_g), multiplicative over any reduced word."""
    key = (g.d, g.window)
    got = _BAR_TW_CACHE.get(key)
    if got is not None:
        return got
    if g.is_identity():
        out = HeckeElement.unit(g.d)
    else:
        word = g.to_reduced_word()
        prefix = WeylElement.from_word(g.d, word[:-1])
        out = bar_Tw(prefix) * bar_gen(g.d, word[-1])
    _BAR_TW_CACHE[key] = out
    return out


# -- parabolic sums -------------------------------------------------------------


def set_sum(d: int, elements) -> HeckeElement:
    """T_X = sum over X of q_w^-1 T_w."""
    return HeckeElement(d, {g.window: q_weight_inv(g) for g in elements})


def mul_parabolic_sum(h: HeckeElement, mu: Composition) -> HeckeElement:
    """h * x_mu with reduced-word prefix sharing over the parabolic subgroup."""
    d = h.d
    gens = mu.generator_indices()
    e = WeylElement.identity(d)
    total = h.scale(q_weight_inv(e))
    seen = {e}
    frontier = [(e, h)]
    while frontier:
        nxt = []
        for w, hw in frontier:
            for i in gens:
                # extend only along length-increasing steps, so T_ws = T_w T_i
                if w.has_right_descent(i):
                    continue
                ws = w.right_gen(i)
                if ws in seen:
                    continue
                seen.add(ws)
                hws = hw.mul_gen(i)
                total = total + hws.scale(q_weight_inv(ws))
                nxt.append((ws, hws))
        frontier = nxt
    return total


def x_lambda(lam: Composition) -> HeckeElement:
    return set_sum(lam.d, parabolic_elements(lam))


def block_sum(lam: Composition, g: WeylElement, mu: Composition) -> HeckeElement:
    """T_{W_lam g W_mu} = q_g^-1 x_lam T_g T_{D_delta cap W_mu}."""
    if not in_D_double(lam, mu, g):
        raise HeckeError("g is not a minimal double coset representative")
    delta_gens = intersection_parabolic_gens(lam, mu, g)
    reps = coset_min_reps(delta_gens, mu)
    return (x_lambda(lam).mul_Tw(g) * set_sum(lam.d, reps)).scale(q_weight_inv(g))


def decompose_block(
    h: HeckeElement, lam: Composition, mu: Composition
) -> dict[WeylElement, Scalar]:
    """Write h as a combination of double coset sums T_{W_lam g W_mu}.

    The coefficient at the minimal representative g inside T_{W_lam g W_mu}
    is q_g^-1 and distinct double cosets are disjoint, so coefficients are
    read off at minimal representatives and the matching block sums are
    subtracted; a nonzero residual that cannot be matched raises HeckeError.
    """
    from .weyl import min_double_coset_rep

    out: dict[WeylElement, Scalar] = {}
    rem = h
    guard = 0
    while not rem.is_zero():
        guard += 1
        if guard > 100000:
            raise HeckeError("block decomposition does not terminate")
        win = next(iter(rem.t))
        g = min_double_coset_rep(lam, mu, WeylElement(h.d, win))
        c = rem.coeff(g) * q_weight(g)
        if c.is_zero() or g in out:
            raise HeckeError("element is not in the lam-mu block module")
        out[g] = c
        rem = rem - block_sum(lam, g, mu).scale(c)
    return out


def is_block_member(h: HeckeElement, lam: Composition, mu: Composition) -> bool:
    try:
        decompose_block(h, lam, mu)
        return True
    except HeckeError:
        return False


def eigen_check(h: HeckeElement, lam: Composition, mu: Composition) -> bool:
    """T_w h and h T_w' act by the parabolic eigencharacter for all generators."""
    for i in lam.generator_indices():
        if h.mul_gen_left(i) != h.scale(_eigenvalue(h.d, i)):
            return False
    for i in mu.generator_indices():
        if h.mul_gen(i) != h.scale(_eigenvalue(h.d, i)):
            return False
    return True


def _eigenvalue(d: int, i: int) -> Scalar:
    if i == 0:
        return Scalar.q0(-1)
    if i == d:
        return Scalar.q1(-1)
    return Scalar.q(-1)


def xmu_bar_factor(mu: Composition) -> Scalar:
    """bar(x_mu) = q0^{l_c0 - l_cd} q1^{l_c0 + l_cd} q^{2 l_a} x_mu, stats of w_circ^mu.

    Equivalently q0^{(l_c0-l_cd)/2} q1^{(l_c0+l_cd)/2} q^{l_a} x_mu is
    bar-invariant; the q-exponent here must be doubled for that to hold.
    """
    from .weyl import longest_parabolic_element

    _, l0, ld, la = longest_parabolic_element(mu).lengths()
    return Scalar.mono(e0=2 * (l0 - ld), e1=2 * (l0 + ld), e=4 * la)
