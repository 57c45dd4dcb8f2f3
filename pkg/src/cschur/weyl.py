"""Affine Weyl group of type C~_d as signed D-periodic permutations of Z.

An element g is stored by its window (g(1), ..., g(d)); it extends uniquely to
a permutation of Z with g(i + D) = g(i) + D and g(-i) = -g(i) where D = 2d + 2,
so g(0) = 0 and g(d+1) = d+1.  Generators act as the transpositions
s_0 = (1,-1), s_i = (i,i+1) for 0 < i < d, s_d = (d,d+2), each taken with all
its sign/period mirrors.
"""

from __future__ import annotations

from dataclasses import dataclass


class WeylError(Exception):
    pass


class Composition(tuple):
    """Weak composition (lam_0, ..., lam_{r+1}) of d; cut points index removed generators."""

    def __new__(cls, parts):
        parts = tuple(int(x) for x in parts)
        if len(parts) < 2 or any(x < 0 for x in parts):
            raise WeylError(f"invalid composition {parts}")
        return super().__new__(cls, parts)

    @property
    def r(self) -> int:
        return len(self) - 2

    @property
    def d(self) -> int:
        return sum(self)

    def cuts(self) -> frozenset[int]:
        """Partial sums lam_0, lam_0+lam_1, ..., lam_0+...+lam_r (generator indices removed)."""
        out = []
        acc = 0
        for part in self[:-1]:
            acc += part
            out.append(acc)
        return frozenset(out)

    def generator_indices(self) -> tuple[int, ...]:
        cuts = self.cuts()
        return tuple(i for i in range(self.d + 1) if i not in cuts)

    def blocks(self) -> list[tuple[int, int]]:
        """Inclusive index ranges R_0, ..., R_{r+1} with the two symmetric ends."""
        d = self.d
        out = [(-self[0], self[0])]
        acc = self[0]
        for part in self[1:-1]:
            out.append((acc + 1, acc + part))
            acc += part
        out.append((d + 1 - self[-1], d + 1 + self[-1]))
        return out

    def to_json(self):
        return list(self)


@dataclass(frozen=True)
class WeylElement:
    d: int
    window: tuple[int, ...]

    def __post_init__(self):
        if len(self.window) != self.d:
            raise WeylError("window length must equal d")

    @property
    def D(self) -> int:
        return 2 * self.d + 2

    # -- evaluation ---------------------------------------------------------

    def value(self, i: int) -> int:
        D = self.D
        q, rem = divmod(i, D)
        if rem == 0:
            base = 0
        elif rem <= self.d:
            base = self.window[rem - 1]
        elif rem == self.d + 1:
            base = self.d + 1
        else:
            base = D - self.window[D - rem - 1]
        return base + q * D

    def preimage(self, v: int) -> int:
        D = self.D
        target = v % D
        for j in range(D):
            if self.value(j) % D == target:
                return j + (v - self.value(j)) // D * D
        raise WeylError("not a bijection on residues")

    def is_valid(self) -> bool:
        return sorted(self.value(j) % self.D for j in range(self.D)) == list(range(self.D))

    def is_identity(self) -> bool:
        return self.window == tuple(range(1, self.d + 1))

    # -- group structure ------------------------------------------------------

    @classmethod
    def identity(cls, d: int) -> "WeylElement":
        return cls(d, tuple(range(1, d + 1)))

    @classmethod
    def simple(cls, d: int, i: int) -> "WeylElement":
        return cls.identity(d).right_gen(i)

    @classmethod
    def from_word(cls, d: int, word) -> "WeylElement":
        g = cls.identity(d)
        for i in word:
            g = g.right_gen(i)
        return g

    def right_gen(self, i: int) -> "WeylElement":
        """self * s_i."""
        d, w = self.d, self.window
        if i == 0:
            return WeylElement(d, (-w[0],) + w[1:])
        if i == d:
            return WeylElement(d, w[:-1] + (2 * d + 2 - w[-1],))
        if 0 < i < d:
            return WeylElement(
                d, w[: i - 1] + (w[i], w[i - 1]) + w[i + 1 :]
            )
        raise WeylError(f"generator index {i} out of range for d={d}")

    def left_gen(self, i: int) -> "WeylElement":
        """s_i * self."""
        d = self.d
        D = self.D
        out = []
        for v in self.window:
            rem = v % D
            if i == 0:
                if rem == 1:
                    v -= 2
                elif rem == D - 1:
                    v += 2
            elif i == d:
                if rem == d:
                    v += 2
                elif rem == d + 2:
                    v -= 2
            else:
                if rem == i:
                    v += 1
                elif rem == i + 1:
                    v -= 1
                elif rem == D - i:
                    v -= 1
                elif rem == D - i - 1:
                    v += 1
            out.append(v)
        return WeylElement(d, tuple(out))

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        if self.d != other.d:
            raise WeylError("rank mismatch")
        return WeylElement(
            self.d, tuple(self.value(other.window[i]) for i in range(self.d))
        )

    def inverse(self) -> "WeylElement":
        return WeylElement(self.d, tuple(self.preimage(i) for i in range(1, self.d + 1)))

    # -- lengths and descents ---------------------------------------------------

    def max_displacement(self) -> int:
        return max((abs(self.window[k] - (k + 1)) for k in range(self.d)), default=0)

    def lengths(self) -> tuple[int, int, int, int]:
        """(l, l_c0, l_cd, l_a) by windowed inversion counting."""
        d, D = self.d, self.D
        disp = self.max_displacement()
        count = 0
        for i in range(1, d + 1):
            gi = self.value(i)
            for j in range(i - 2 * disp - 1, i + 2 * disp + 2):
                if j == i:
                    continue
                gj = self.value(j)
                if (j < i and gj > gi) or (j > i and gj < gi):
                    count += 1
        if count % 2:
            raise WeylError("inversion count parity failure")
        l0 = sum(1 for j in range(1, disp + 1) if self.value(j) < 0)
        ld = sum(1 for j in range(d + 1 - disp, d + 1) if self.value(j) > d + 1)
        ell = count // 2
        return ell, l0, ld, ell - l0 - ld

    def length(self) -> int:
        return self.lengths()[0]

    def has_right_descent(self, i: int) -> bool:
        d = self.d
        if i == 0:
            return self.window[0] < 0
        if i == d:
            return self.window[d - 1] > d + 1
        return self.window[i - 1] > self.window[i]

    def has_left_descent(self, i: int) -> bool:
        d = self.d
        if i == 0:
            return self.preimage(1) < 0
        if i == d:
            return self.preimage(d) > d + 1
        return self.preimage(i) > self.preimage(i + 1)

    def to_reduced_word(self) -> list[int]:
        """Reduced word via right-descent stripping (smallest index first)."""
        g = self
        strip = []
        while not g.is_identity():
            for i in range(g.d + 1):
                if g.has_right_descent(i):
                    strip.append(i)
                    g = g.right_gen(i)
                    break
            else:
                raise WeylError("no descent found for a non-identity element")
        strip.reverse()
        return strip

    def to_json(self):
        return {"d": self.d, "window": list(self.window)}

    @classmethod
    def from_json(cls, data) -> "WeylElement":
        return cls(int(data["d"]), tuple(int(x) for x in data["window"]))

    def __repr__(self):
        return f"W{list(self.window)}"


# -- parabolic subgroups ----------------------------------------------------------


def parabolic_elements(lam: Composition) -> list[WeylElement]:
    """All elements of the (finite) parabolic subgroup W_lam, by BFS closure."""
    d = lam.d
    gens = lam.generator_indices()
    e = WeylElement.identity(d)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for i in gens:
                h = g.right_gen(i)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return sorted(seen, key=lambda g: (g.lengths()[0], g.window))


def parabolic_order(lam: Composition) -> int:
    """|W_lam| = |C_{lam_0}| * prod |S_{lam_i}| * |C_{lam_{r+1}}| without enumeration."""
    import math

    out = (2 ** lam[0]) * math.factorial(lam[0])
    for part in lam[1:-1]:
        out *= math.factorial(part)
    out *= (2 ** lam[-1]) * math.factorial(lam[-1])
    return out


def longest_parabolic_element(lam: Composition) -> WeylElement:
    """Longest element of W_lam: reversal on each block, negation at the ends."""
    d = lam.d
    window = []
    blocks = lam.blocks()
    for x in range(1, d + 1):
        for idx, (lo, hi) in enumerate(blocks):
            if lo <= x <= hi:
                if idx == 0:
                    window.append(-x)
                elif idx == len(blocks) - 1:
                    window.append(2 * (d + 1) - x)
                else:
                    window.append(lo + hi - x)
                break
        else:
            raise WeylError("blocks do not cover the window")
    return WeylElement(d, tuple(window))


# -- coset machinery ----------------------------------------------------------------


def min_left_strip(g: WeylElement, gens) -> tuple[WeylElement, list[int]]:
    """Strip left descents from the given generator set; returns (minimal rep, strips)."""
    strips = []
    changed = True
    while changed:
        changed = False
        for i in gens:
            if g.has_left_descent(i):
                g = g.left_gen(i)
                strips.append(i)
                changed = True
                break
    return g, strips


def min_right_strip(g: WeylElement, gens) -> tuple[WeylElement, list[int]]:
    strips = []
    changed = True
    while changed:
        changed = False
        for i in gens:
            if g.has_right_descent(i):
                g = g.right_gen(i)
                strips.append(i)
                changed = True
                break
    return g, strips


def min_double_coset_rep(lam: Composition, mu: Composition, g: WeylElement) -> WeylElement:
    """The unique minimal-length element of W_lam g W_mu."""
    lg = lam.generator_indices()
    mg = mu.generator_indices()
    while True:
        g, s1 = min_left_strip(g, lg)
        g, s2 = min_right_strip(g, mg)
        if not s1 and not s2:
            return g


def in_D_left(lam: Composition, g: WeylElement) -> bool:
    """g minimal in W_lam g (no left descent by W_lam generators)."""
    return not any(g.has_left_descent(i) for i in lam.generator_indices())


def in_D_right(mu: Composition, g: WeylElement) -> bool:
    """g minimal in g W_mu (no right descent by W_mu generators)."""
    return not any(g.has_right_descent(i) for i in mu.generator_indices())


def in_D_double(lam: Composition, mu: Composition, g: WeylElement) -> bool:
    return in_D_left(lam, g) and in_D_right(mu, g)


def coset_min_reps(sub_gens, amb: Composition) -> list[WeylElement]:
    """Minimal reps of W_sub \\ W_amb, BFS on cosets inside the ambient parabolic.

    sub_gens must be a subset of amb's generator indices.
    """
    amb_gens = amb.generator_indices()
    e = WeylElement.identity(amb.d)
    seen = {e}
    frontier = [e]
    out = [e]
    while frontier:
        nxt = []
        for w in frontier:
            for i in amb_gens:
                cand, _ = min_left_strip(w.right_gen(i), sub_gens)
                if cand not in seen:
                    seen.add(cand)
                    nxt.append(cand)
                    out.append(cand)
        frontier = nxt
    return out


def longest_double_coset_rep(lam: Composition, mu: Composition, g: WeylElement) -> WeylElement:
    """Longest element of W_lam g W_mu, for g the minimal representative."""
    if not in_D_double(lam, mu, g):
        raise WeylError("g is not the minimal double coset representative")
    x0 = longest_parabolic_element(lam)
    delta_gens = intersection_parabolic_gens(lam, mu, g)
    reps = coset_min_reps(delta_gens, mu)
    y0 = max(reps, key=lambda w: w.lengths()[0])
    return x0 * g * y0


def intersection_parabolic_gens(
    lam: Composition, mu: Composition, g: WeylElement
) -> tuple[int, ...]:
    """Generator indices j with s_j in g^-1 W_lam g (intersected with W_mu's generators).

    For g the minimal double coset representative, g s_j g^-1 is a generator of
    W_lam exactly when g s_j g^-1 fixes length, which we detect by checking that
    conjugation sends the simple transposition to another simple transposition
    inside W_lam.
    """
    out = []
    lam_gens = set(lam.generator_indices())
    d = g.d
    for j in mu.generator_indices():
        h = g * WeylElement.simple(d, j) * g.inverse()
        for i in lam_gens:
            if h == WeylElement.simple(d, i):
                out.append(j)
                break
    return tuple(out)
