"""Coded matrices: n-periodic integer Z x Z matrices indexing the algebra bases.

Three kinds share one class:

* "xi"      - centrally symmetric, nonnegative, odd diagonal entries at the
              residues 0 and r+1; finite per-period sum 2d+2.
* "xitilde" - centrally symmetric, off-diagonal entries nonnegative, diagonal
              entries any integers with the same parity constraint.
* "theta"   - n-periodic only, nonnegative (move/bookkeeping matrices).

Symmetric kinds are stored on orbit representatives: rows 0..r+1, with row 0
folded to j >= 0 and row r+1 folded to j <= r+1.  Periodic kind is stored on
rows 0..n-1.
"""

from __future__ import annotations

from .ring import LinP
from .weyl import Composition, WeylElement


class MatrixError(Exception):
    pass


class CodedMatrix:
    __slots__ = ("r", "kind", "entries", "_key")

    def __init__(self, r: int, kind: str, entries: dict[tuple[int, int], int]):
        if kind not in ("xi", "xitilde", "theta"):
            raise MatrixError(f"unknown kind {kind!r}")
        self.r = r
        self.kind = kind
        self.entries = {k: v for k, v in entries.items() if v}
        self._key = (r, kind, tuple(sorted(self.entries.items())))

    # -- position bookkeeping -------------------------------------------------

    @property
    def n(self) -> int:
        return 2 * self.r + 2

    def norm(self, i: int, j: int) -> tuple[int, int]:
        n = self.n
        k = i % n
        j = j - (i - k)
        if self.kind == "theta":
            return k, j
        if k > self.r + 1:
            k, j = n - k, n - j
        if k == 0:
            j = abs(j)
        elif k == self.r + 1:
            j = min(j, 2 * (self.r + 1) - j)
        return k, j

    def get(self, i: int, j: int) -> int:
        return self.entries.get(self.norm(i, j), 0)

    @classmethod
    def from_raw(cls, r: int, kind: str, raw: dict[tuple[int, int], int]) -> "CodedMatrix":
        """Build from values at arbitrary real positions, checking symmetry."""
        probe = cls(r, kind, {})
        out: dict[tuple[int, int], int] = {}
        for (i, j), v in raw.items():
            if not v:
                continue
            key = probe.norm(i, j)
            if key in out and out[key] != v:
                raise MatrixError(f"inconsistent symmetric values at {key}")
            out[key] = v
        return cls(r, kind, out)

    def row_real_items(self, i: int) -> list[tuple[int, int]]:
        """(j, value) pairs of the real row i."""
        n, r = self.n, self.r
        k = i % n
        shift = i - k
        items: list[tuple[int, int]] = []
        if self.kind == "theta":
            for (a, b), v in self.entries.items():
                if a == k:
                    items.append((b, v))
        elif k <= r + 1:
            for (a, b), v in self.entries.items():
                if a != k:
                    continue
                if k == 0:
                    items.append((b, v))
                    if b:
                        items.append((-b, v))
                elif k == r + 1:
                    items.append((b, v))
                    if b != r + 1:
                        items.append((2 * (r + 1) - b, v))
                else:
                    items.append((b, v))
        else:
            m = n - k
            for (a, b), v in self.entries.items():
                if a != m:
                    continue
                if m == 0:
                    items.append((n - b, v))
                    if b:
                        items.append((n + b, v))
                elif m == r + 1:
                    items.append((n - b, v))
                    if b != r + 1:
                        items.append((n - 2 * (r + 1) + b, v))
                else:
                    items.append((n - b, v))
        return [(j + shift, v) for j, v in items]

    def positions_in_rows(self, lo: int, hi: int):
        """Iterate (x, y, value) over real positions with lo <= x <= hi."""
        for x in range(lo, hi + 1):
            for y, v in self.row_real_items(x):
                yield x, y, v

    def band(self) -> int:
        out = 0
        for x in range(self.n):
            for y, _ in self.row_real_items(x):
                out = max(out, abs(x - y))
        return out

    def period_sum(self) -> int:
        return sum(v for x in range(self.n) for _, v in self.row_real_items(x))

    @property
    def d(self) -> int:
        total = self.period_sum()
        if total % 2:
            raise MatrixError("period sum is odd")
        return (total - 2) // 2

    # -- equality ----------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, CodedMatrix) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"CM(r={self.r},{self.kind},{sorted(self.entries.items())})"

    # -- validation ----------------------------------------------------------------

    def validate(self) -> "CodedMatrix":
        r = self.r
        if self.kind == "theta":
            if any(v < 0 for v in self.entries.values()):
                raise MatrixError("negative entry in periodic matrix")
            return self
        for (i, j), v in self.entries.items():
            if not (0 <= i <= r + 1):
                raise MatrixError("non-canonical storage row")
            if i == 0 and j < 0 or i == r + 1 and j > r + 1:
                raise MatrixError("non-canonical storage column")
            if i != j and v < 0:
                raise MatrixError(f"negative off-diagonal entry at {(i, j)}")
        if self.get(0, 0) % 2 == 0 or self.get(r + 1, r + 1) % 2 == 0:
            raise MatrixError("special diagonal entries must be odd")
        if self.kind == "xi":
            if any(v < 0 for v in self.entries.values()):
                raise MatrixError("negative entry in a nonnegative matrix")
            if self.get(0, 0) < 0 or self.get(r + 1, r + 1) < 0:
                raise MatrixError("special diagonal entries must be positive")
        return self

    def is_diagonal(self) -> bool:
        return all(i == j for (i, j) in self.entries)

    def is_tridiagonal(self) -> bool:
        return self.band() <= 1

    # -- margins ----------------------------------------------------------------

    def special_half(self, which: int) -> int:
        """a'_{00} = (a_00 - 1)/2 or a'_{r+1,r+1}, by which in {0, r+1}."""
        v = self.get(which, which)
        if v % 2 == 0:
            raise MatrixError("special diagonal entry must be odd")
        return (v - 1) // 2

    def row_margins_raw(self) -> tuple[int, ...]:
        r = self.r
        out = [self.special_half(0) + sum(v for j, v in self.row_real_items(0) if j >= 1)]
        for i in range(1, r + 1):
            out.append(sum(v for _, v in self.row_real_items(i)))
        out.append(
            self.special_half(r + 1)
            + sum(v for j, v in self.row_real_items(r + 1) if j <= r)
        )
        return tuple(out)

    def col_margins_raw(self) -> tuple[int, ...]:
        return self.transpose().row_margins_raw()

    def row_margins(self) -> Composition:
        return Composition(self.row_margins_raw())

    def col_margins(self) -> Composition:
        return Composition(self.col_margins_raw())

    def transpose(self) -> "CodedMatrix":
        raw: dict[tuple[int, int], int] = {}
        for x in range(self.n):
            for y, v in self.row_real_items(x):
                key = (y % self.n, x - (y - y % self.n))
                raw[key] = v
        return CodedMatrix.from_raw(self.r, self.kind, raw)

    def plain_row_sum(self, i: int) -> int:
        return sum(v for _, v in self.row_real_items(i))

    # -- io ----------------------------------------------------------------

    def to_json(self):
        return {
            "r": self.r,
            "kind": self.kind,
            "entries": sorted([i, j, v] for (i, j), v in self.entries.items()),
        }

    @classmethod
    def from_json(cls, data) -> "CodedMatrix":
        return cls(
            int(data["r"]),
            data["kind"],
            {(int(i), int(j)): int(v) for i, j, v in data["entries"]},
        )


# -- constructors ---------------------------------------------------------------


def diagonal_matrix(lam: Composition, kind: str = "xi") -> CodedMatrix:
    """kappa(lam, e, lam): diagonal with doubled-plus-one special entries."""
    r = lam.r
    entries = {(0, 0): 2 * lam[0] + 1, (r + 1, r + 1): 2 * lam[-1] + 1}
    for i in range(1, r + 1):
        entries[(i, i)] = lam[i]
    return CodedMatrix(r, kind, entries).validate()


def diagonal_from_entries(r: int, diag, kind: str = "xitilde") -> CodedMatrix:
    """Diagonal matrix from the window (a_00, a_11, ..., a_{r+1,r+1})."""
    entries = {(i, i): diag[i] for i in range(r + 2)}
    return CodedMatrix(r, kind, entries).validate()


def e_theta(r: int, i: int, j: int, kind: str = "theta", mult: int = 1) -> CodedMatrix:
    """The symmetrized elementary matrix E^{ij} + E^{-i,-j} (period classes)."""
    n = 2 * r + 2

    def pernorm(a, b):
        k = a % n
        return k, b - (a - k)

    raw: dict[tuple[int, int], int] = {}
    for a, b in ((i, j), (-i, -j)):
        key = pernorm(a, b)
        raw[key] = raw.get(key, 0) + mult
    if kind == "theta":
        return CodedMatrix(r, "theta", raw)
    return CodedMatrix.from_raw(r, kind, _fold_symmetric(r, raw))


def _fold_symmetric(r: int, perraw: dict[tuple[int, int], int]) -> dict[tuple[int, int], int]:
    """Fold period-normalized raw entries onto symmetric canonical slots."""
    probe = CodedMatrix(r, "xitilde", {})
    out: dict[tuple[int, int], int] = {}
    for (i, j), v in perraw.items():
        key = probe.norm(i, j)
        if key in out:
            if out[key] != v:
                raise MatrixError("asymmetric raw data")
        else:
            out[key] = v
    return out


def matrix_add(a: CodedMatrix, b: CodedMatrix, kind: str | None = None) -> CodedMatrix:
    if a.r != b.r:
        raise MatrixError("rank mismatch")
    kind = kind or a.kind
    if a.kind == "theta" or b.kind == "theta":
        if a.kind != b.kind:
            raise MatrixError("cannot mix periodic and symmetric kinds")
        out = dict(a.entries)
        for k, v in b.entries.items():
            out[k] = out.get(k, 0) + v
        return CodedMatrix(a.r, "theta", out)
    out = dict(a.entries)
    for k, v in b.entries.items():
        out[k] = out.get(k, 0) + v
    return CodedMatrix(a.r, kind, out)


def matrix_scale(a: CodedMatrix, c: int) -> CodedMatrix:
    return CodedMatrix(a.r, a.kind, {k: c * v for k, v in a.entries.items()})


def matrix_sub(a: CodedMatrix, b: CodedMatrix, kind: str | None = None) -> CodedMatrix:
    return matrix_add(a, matrix_scale(b, -1), kind=kind)


def theta_sym(t: CodedMatrix, kind: str = "xitilde") -> CodedMatrix:
    """T_theta = (t_ij + t_{-i,-j}) as a symmetric-kind matrix."""
    if t.kind != "theta":
        raise MatrixError("theta symmetrization expects a periodic matrix")
    raw: dict[tuple[int, int], int] = {}
    for x in range(t.n):
        for y, v in t.row_real_items(x):
            for a, b in ((x, y), (-x, -y)):
                k = a % t.n
                key = (k, b - (a - k))
                raw[key] = raw.get(key, 0) + v
    return CodedMatrix.from_raw(t.r, kind, _fold_symmetric(t.r, raw))


def hat_shift(t: CodedMatrix) -> CodedMatrix:
    """S-hat with hat(s)_{ij} = s_{i+1,j}."""
    if t.kind != "theta":
        raise MatrixError("hat shift expects a periodic matrix")
    raw: dict[tuple[int, int], int] = {}
    for x in range(t.n):
        for y, v in t.row_real_items(x + 1):
            k = x % t.n
            raw[(k, y - (x - k))] = v
    return CodedMatrix(t.r, "theta", raw)


def dagger(t: CodedMatrix) -> CodedMatrix:
    """S-dagger with dag(s)_{ij} = s_{1-i,-j}."""
    if t.kind != "theta":
        raise MatrixError("dagger expects a periodic matrix")
    raw: dict[tuple[int, int], int] = {}
    for x in range(t.n):
        for y, v in t.row_real_items(x):
            # value v sits at position (1-x, -y) of the dagger
            a, b = 1 - x, -y
            k = a % t.n
            key = (k, b - (a - k))
            raw[key] = raw.get(key, 0) + v
    return CodedMatrix(t.r, "theta", raw)


def shift_apply(a: CodedMatrix, x: CodedMatrix, kind: str | None = None) -> CodedMatrix:
    """A^{(X)} = A - X_theta + hat(X)_theta for a periodic move matrix X."""
    out = matrix_add(
        matrix_sub(a, theta_sym(x, kind=a.kind)),
        theta_sym(hat_shift(x), kind=a.kind),
        kind=kind or a.kind,
    )
    return out


def p_shift(a: CodedMatrix, p: int, skip_residues=()) -> CodedMatrix:
    """A + p * I, optionally skipping the diagonal at some residues (variants)."""
    out = dict(a.entries)
    for i in range(a.r + 2):
        if i in skip_residues:
            continue
        key = (i, i)
        out[key] = out.get(key, 0) + p
    return CodedMatrix(a.r, a.kind, out)


def identity_lift(a: CodedMatrix) -> CodedMatrix:
    return CodedMatrix(a.r, "xitilde", dict(a.entries))


def as_xi(a: CodedMatrix) -> CodedMatrix:
    return CodedMatrix(a.r, "xi", dict(a.entries)).validate()


# -- variant index sets -----------------------------------------------------------


def variant_ok(a: CodedMatrix, variant: str) -> bool:
    """Membership in the ji / ij / ii index subsets of the symmetric family."""
    r = a.r
    rm = a.row_margins_raw()
    cm = a.col_margins_raw()
    if variant in ("ji", "ii"):
        if rm[r + 1] != 0 or cm[r + 1] != 0 or a.get(r + 1, r + 1) <= 0:
            return False
    if variant in ("ij", "ii"):
        if rm[0] != 0 or cm[0] != 0 or a.get(0, 0) <= 0:
            return False
    if variant == "jj":
        return True
    if variant not in ("ji", "ij", "ii"):
        raise MatrixError(f"unknown variant {variant!r}")
    return True


# -- the coset bijection ------------------------------------------------------------


def block_bounds(mu: Composition, j: int) -> tuple[int, int]:
    """Inclusive bounds of the index block R_j, for any j in Z."""
    r = mu.r
    n = 2 * r + 2
    D = 2 * mu.d + 2
    k = j % n
    shift = (j - k) // n * D
    blocks = mu.blocks()
    if k <= r + 1:
        lo, hi = blocks[k]
    else:
        lo0, hi0 = blocks[n - k]
        lo, hi = D - hi0, D - lo0
    return lo + shift, hi + shift


def block_of(mu: Composition, x: int) -> int:
    """The j with x in R_j."""
    D = 2 * mu.d + 2
    n = 2 * mu.r + 2
    k = (x + mu[0]) // D
    x0 = x - k * D
    for j in range(n):
        lo, hi = block_bounds(mu, j)
        if lo <= x0 <= hi:
            return j + k * n
    raise MatrixError("index blocks fail to cover Z")


def kappa(lam: Composition, g: WeylElement, mu: Composition) -> CodedMatrix:
    """The coded matrix of (lam, g, mu): a_ij = |R_i^lam cap g(R_j^mu)|."""
    if lam.d != mu.d or lam.d != g.d:
        raise MatrixError("size mismatch")
    raw: dict[tuple[int, int], int] = {}
    n = 2 * mu.r + 2
    for j in range(n):
        lo, hi = block_bounds(mu, j)
        for x in range(lo, hi + 1):
            i = block_of(lam, g.value(x))
            raw[(i, j)] = raw.get((i, j), 0) + 1
    out = CodedMatrix.from_raw(lam.r, "xi", raw).validate()
    return out


def kappa_inv(a: CodedMatrix) -> tuple[Composition, WeylElement, Composition]:
    """Column reading: recover (lam, g, mu) with g the minimal coset representative."""
    lam = a.row_margins()
    mu = a.col_margins()
    d = lam.d
    bnd = a.band() + 1
    window = []
    for x in range(1, d + 1):
        j = block_of(mu, x)
        lo_j, _ = block_bounds(mu, j)
        p = x - lo_j
        acc = 0
        row = None
        for i in range(j - bnd, j + bnd + 1):
            c = a.get(i, j)
            if acc + c > p:
                row = i
                break
            acc += c
        if row is None:
            raise MatrixError("column margins inconsistent with entries")
        offset = p - acc
        row_prefix = sum(a.get(row, jp) for jp in range(row - bnd, j))
        lo_i, _ = block_bounds(lam, row)
        window.append(lo_i + row_prefix + offset)
    g = WeylElement(d, tuple(window))
    if not g.is_valid():
        raise MatrixError("column reading produced a non-permutation")
    return lam, g, mu


# -- block composition of the intersection parabolic ---------------------------------


def tridiagonal_block_composition(b: CodedMatrix) -> Composition:
    """The band-one reading with zero parts kept: (b'_00, b_10; b_01, b_11, b_21; ...)."""
    r = b.r
    parts = [b.special_half(0), b.get(1, 0)]
    for j in range(1, r + 1):
        parts += [b.get(j - 1, j), b.get(j, j), b.get(j + 1, j)]
    parts += [b.get(r, r + 1), b.special_half(r + 1)]
    return Composition(parts)


def block_composition(a: CodedMatrix) -> Composition:
    """The composition read off the columns: its parabolic is g^-1 W_lam g cap W_mu."""
    r = a.r
    ks = []
    for j in range(r + 2):
        k = 0
        for i in range(j - a.band() - 1, j + a.band() + 2):
            if a.get(i, j) and abs(i - j) > k:
                k = abs(i - j)
        ks.append(k)
    parts: list[int] = [a.special_half(0)]
    parts += [a.get(i, 0) for i in range(1, ks[0] + 1)]
    for j in range(1, r + 1):
        parts += [a.get(i, j) for i in range(j - ks[j], j + ks[j] + 1)]
    parts += [a.get(i, r + 1) for i in range(r + 1 - ks[r + 1], r + 1)]
    parts.append(a.special_half(r + 1))
    return Composition(parts)


# -- length statistics ----------------------------------------------------------------


def _raw_inversion_sums(a: CodedMatrix, hatted: bool, with_p: bool, skip_residues=()):
    """(4l, 2l_c0, 2l_cd, 4l_a) as ints, or LinP when tracking a diagonal shift p.

    skip_residues lists diagonal residues (in [0..r+1]) left fixed by the
    shift (the variant stabilizations).
    """
    r = a.r
    bnd = a.band()
    margin = 2 * bnd + a.n + 2
    lo, hi = -margin, r + 1 + margin

    def shifted(x):
        i0 = x % a.n
        if i0 > r + 1:
            i0 = a.n - i0
        return i0 not in skip_residues

    def val(x, y, v):
        if with_p and x == y and shifted(x):
            return LinP(v, 1)
        return v

    pts = [(x, y, val(x, y, v)) for x, y, v in a.positions_in_rows(lo, hi)]
    outer = dict(a.entries)
    if with_p:
        seen_diag = {x for x, y, _ in a.positions_in_rows(lo, hi) if x == y}
        pts.extend(
            (x, x, LinP(0, 1))
            for x in range(lo, hi + 1)
            if x not in seen_diag and shifted(x)
        )
        for i in range(r + 2):
            outer.setdefault((i, i), 0)

    zero = LinP(0, 0) if with_p else 0
    s_c0 = zero
    s_cd = zero
    for x, y, v in pts:
        if hatted:
            if (x <= 0 < y) or (x >= 0 > y):
                s_c0 = s_c0 + v
            if (x <= r + 1 < y) or (x >= r + 1 > y):
                s_cd = s_cd + v
        else:
            if (x < 0 < y) or (x > 0 > y):
                s_c0 = s_c0 + v
            if (x < r + 1 < y) or (x > r + 1 > y):
                s_cd = s_cd + v

    s_l = zero
    s_a = zero
    for (i, j), vij in outer.items():
        # canonical storage rows are exactly the I+ orbit representatives
        if with_p and i == j and i not in skip_residues:
            vij_l = LinP(vij, 1)
        else:
            vij_l = vij
        if i == j and i in (0, r + 1):
            w_l = vij_l - 1  # 2*a' = a_ii - 1
            w_a = vij_l - 3  # 2*a'' = a_ii - 3
        else:
            w_l = vij_l * 2
            w_a = vij_l * 2
        acc = zero
        for x, y, v in pts:
            if hatted:
                if (x <= i and y > j) or (x >= i and y < j):
                    acc = acc + v
            else:
                if (x < i and y > j) or (x > i and y < j):
                    acc = acc + v
        s_l = s_l + w_l * acc
        s_a = s_a + w_a * acc
    return s_l, s_c0, s_cd, s_a


def length_stats(a: CodedMatrix, hatted: bool = False) -> tuple[int, int, int, int]:
    """(l, l_c0, l_cd, l_a) of the matrix, plain or hatted."""
    s_l, s_c0, s_cd, s_a = _raw_inversion_sums(a, hatted, with_p=False)
    if s_l % 4 or s_c0 % 2 or s_cd % 2 or s_a % 4:
        raise MatrixError("inversion sums have unexpected parity")
    return s_l // 4, s_c0 // 2, s_cd // 2, s_a // 4


def length_stats_doubled_p(a: CodedMatrix, hatted: bool = False, skip_residues=()) -> tuple:
    """(2l, 2l_c0, 2l_cd, 2l_a) of the p-shifted matrix as LinP in the even p."""
    s_l, s_c0, s_cd, s_a = _raw_inversion_sums(
        a, hatted, with_p=True, skip_residues=skip_residues
    )
    return (
        s_l.exact_half(),
        s_c0,
        s_cd,
        s_a.exact_half(),
    )


# -- dominance order ---------------------------------------------------------------


def sigma(a: CodedMatrix, i: int, j: int) -> int:
    """sigma_ij(A) = sum of entries with x <= i and y >= j (finite by banding)."""
    bnd = a.band()
    out = 0
    for x, y, v in a.positions_in_rows(j - bnd, i):
        if y >= j:
            out += v
    return out


def leq_alg(a: CodedMatrix, b: CodedMatrix) -> bool:
    """Margins agree and sigma_ij(a) <= sigma_ij(b) for all i < j."""
    if a.r != b.r:
        return False
    if (
        a.row_margins_raw() != b.row_margins_raw()
        or a.col_margins_raw() != b.col_margins_raw()
    ):
        return False
    bnd = max(a.band(), b.band())
    for i in range(a.n):
        for j in range(i + 1, i + bnd + 1):
            if sigma(a, i, j) > sigma(b, i, j):
                return False
    return True


def lt_alg(a: CodedMatrix, b: CodedMatrix) -> bool:
    return a != b and leq_alg(a, b)


def order_key(a: CodedMatrix) -> tuple:
    """Key whose total order extends <=_alg on each fixed-margin family."""
    bnd = a.band()
    tot = 0
    for i in range(a.n):
        for j in range(i + 1, i + bnd + 1):
            tot += sigma(a, i, j)
    return (tot, a._key)


# -- enumerators ---------------------------------------------------------------------


def _row_compositions(total: int, cols: list[tuple[int, int]]):
    """All ways to place `total` over columns with caps; cols = [(j, cap)]."""
    if total == 0:
        yield {}
        return
    if not cols:
        return
    (j, cap), rest = cols[0], cols[1:]
    for t in range(min(total, cap) + 1):
        for tail in _row_compositions(total - t, rest):
            if t:
                out = dict(tail)
                out[j] = t
                yield out
            else:
                yield tail


def enumerate_family(lam: Composition, mu: Composition, band: int, kind: str = "xi"):
    """All symmetric matrices with the given margins and band, nonneg off-diagonal.

    Diagonal entries are determined by the row margins once the off-diagonal
    canonical entries are fixed; column margins are checked at the end.
    """
    if lam.d != mu.d or lam.r != mu.r:
        return
    r = lam.r
    rows: list[list[tuple[int, int]]] = []  # canonical off-diagonal positions per row
    rows.append([(0, j) for j in range(1, band + 1)])
    for i in range(1, r + 1):
        rows.append([(i, j) for j in range(i - band, i + band + 1) if j != i])
    rows.append([(r + 1, j) for j in range(r + 1 - band, r + 1)])

    def rec(i, acc):
        if i > r + 1:
            entries = dict(acc)
            for k in range(r + 2):
                off = sum(v for (x, _), v in entries.items() if x == k)
                margin = lam[k]
                if k in (0, r + 1):
                    diag = 2 * (margin - off) + 1
                    if kind == "xi" and diag < 1:
                        return
                else:
                    diag = margin - off
                    if kind == "xi" and diag < 0:
                        return
                entries[(k, k)] = diag
            m = CodedMatrix(r, kind, entries)
            if m.col_margins() == mu:
                yield m
            return
        budget = lam[i]
        caps = [(pos, budget) for pos in rows[i]]
        for choice in _row_compositions_upto(budget, caps):
            new = dict(acc)
            for pos, t in choice.items():
                new[pos] = t
            yield from rec(i + 1, new)

    yield from rec(0, {})


def _row_compositions_upto(budget: int, caps):
    """All placements with row sum <= budget."""
    for total in range(budget + 1):
        yield from _row_compositions(total, caps)


def enumerate_banded(r: int, d: int, band: int):
    """All members of the symmetric nonnegative family of size d with band <= band."""
    out = []
    seen = set()
    for lam in _compositions(r, d):
        for mu in _compositions(r, d):
            for m in enumerate_family(lam, mu, band):
                if m not in seen:
                    seen.add(m)
                    out.append(m)
    return out


def _compositions(r, d):
    import itertools

    for cut in itertools.combinations(range(d + r + 1), r + 1):
        parts = []
        prev = -1
        for c in cut:
            parts.append(c - prev - 1)
            prev = c
        parts.append(d + r - prev)
        yield Composition(parts)


def compositions(r, d):
    return list(_compositions(r, d))


def iter_move_T(b: CodedMatrix, a: CodedMatrix, exempt_diag=frozenset()):
    """Move matrices T: row sums row_a(T)_i = b_{i-1,i}, T_theta <= A entrywise.

    exempt_diag lists diagonal residues (mod n) where the entrywise constraint
    is dropped (the stabilized families).
    """
    n = a.n
    bnd = a.band() + 1
    rows = []
    for i in range(1, n + 1):
        target = b.get(i - 1, i)
        cols: list[tuple[int, int]] = []
        for j in range(i - bnd - 1, i + bnd + 2):
            if j == i:
                if (i % n) in exempt_diag:
                    cols.append((j, target))
                    continue
                # the theta-pair of (i,i) is (n-i,n-i): same slot only at 0, r+1
                if (i % n) in (0, (n // 2)):
                    cap = a.get(i, j) // 2
                else:
                    cap = a.get(i, j)
                if cap > 0:
                    cols.append((j, min(cap, target)))
            else:
                cap = a.get(i, j)
                if cap > 0:
                    cols.append((j, min(cap, target)))
        rows.append((i, target, cols))

    def rec(idx, acc):
        if idx == len(rows):
            t = CodedMatrix(a.r, "theta", dict(acc))
            if _theta_constraint_ok(t, a, exempt_diag):
                yield t
            return
        i, target, cols = rows[idx]
        for choice in _row_compositions(target, cols):
            new = dict(acc)
            for j, v in choice.items():
                new[(i % n, j - (i - i % n))] = v
            yield from rec(idx + 1, new)

    yield from rec(0, {})


def _theta_constraint_ok(t: CodedMatrix, a: CodedMatrix, exempt_diag) -> bool:
    n = t.n
    for x in range(n):
        for y, v in t.row_real_items(x):
            if x == y and (x % n) in exempt_diag:
                continue
            if v + t.get(-x, -y) > a.get(x, y):
                return False
    return True


def iter_split_S(t: CodedMatrix):
    """Submatrices S <= T with row sums satisfying row_a(S)_i = row_a(S)_{1-i}."""
    items = sorted(t.entries.items())

    def rec(idx, acc):
        if idx == len(items):
            s = CodedMatrix(t.r, "theta", dict(acc))
            n = t.n
            ok = all(
                s.plain_row_sum(i) == s.plain_row_sum(1 - i) for i in range(1, n // 2 + 1)
            )
            if ok:
                yield s
            return
        (pos, cap) = items[idx]
        for v in range(cap + 1):
            new = dict(acc)
            if v:
                new[pos] = v
            yield from rec(idx + 1, new)

    yield from rec(0, {})
