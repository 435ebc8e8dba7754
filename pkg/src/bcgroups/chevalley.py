"""The faithful (2n+1) x (2n+1) matrix model of Q = U x| Sp_2n.

Storage basis order is (e_1..e_n, f_1..f_n, x0); an element is the block
matrix [[g, 0], [v, 1]] acting on column vectors, with g in Sp_2n (g^T J g = J
for J = [[0,I],[I,0]]; signs vanish in characteristic 2) and v a row vector.
SO_{2n+1} sits inside as the stabiliser of q = x0^2 + sum e_i f_i; its very
short root elements y_b(t) pair the U-part entry t with the Sp-part x_{2b}(t^2).

For triangular algorithms there is a second, flag order
(e_1..e_n, x0, f_n..f_1): every positive root element is upper unitriangular
there, every negative one lower unitriangular, and the torus is diagonal.

In characteristic 2 every root element is an involution, which the peeling
routines exploit.

Conventions pinned by the rank-1 matrices: y_+(t) = [[1,t^2,0],[0,1,0],[0,t,1]]
and x_+(t) = [[1,t,0],[0,1,0],[0,0,1]].
"""

from __future__ import annotations

from . import roots
from .errors import DivisionByZero, NotInBigGroup, UnknownRoot
from .gf2 import Frac
from .roots import LONG, SHORT, VERY_SHORT, Weyl


class MatrixModel:
    """Index bookkeeping and element constructors at a fixed rank over a
    fixed tower."""

    def __init__(self, n: int, tower):
        if n < 1:
            raise ValueError("rank must be at least 1")
        self.n = n
        self.tower = tower
        self.size = 2 * n + 1
        # flag order: e_1..e_n, x0, f_n..f_1  (weights decreasing)
        self.flag = list(range(n)) + [2 * n] + [2 * n - 1 - i for i in range(n)]
        self._identity = None
        self._weyl_cache: dict = {}

    def e(self, i: int) -> int:
        return i - 1

    def f(self, i: int) -> int:
        return self.n + i - 1

    @property
    def x0(self) -> int:
        return 2 * self.n

    def identity(self) -> "QElement":
        if self._identity is None:
            one, zero = self.tower.one, self.tower.zero
            rows = tuple(
                tuple(one if i == j else zero for j in range(self.size))
                for i in range(self.size)
            )
            self._identity = QElement(self, rows)
        return self._identity

    def from_updates(self, updates) -> "QElement":
        """Identity with the given (row, col) entries overwritten."""
        one, zero = self.tower.one, self.tower.zero
        rows = [[one if i == j else zero for j in range(self.size)]
                for i in range(self.size)]
        for (r, c), val in updates.items():
            rows[r][c] = val
        return QElement(self, tuple(tuple(r) for r in rows))

    # -- root elements ------------------------------------------------------

    def root_element(self, a, t: Frac) -> "QElement":
        """x_a(t) for short/long a, y_a(t) for very short a."""
        if len(a) != self.n or not roots.is_root(a):
            raise UnknownRoot(repr(a))
        kind = roots.length_class(a)
        nz = [(i + 1, c) for i, c in enumerate(a) if c]
        if kind == VERY_SHORT:
            (i, c), = nz
            t2 = t.square()
            if c > 0:
                return self.from_updates({(self.e(i), self.f(i)): t2,
                                          (self.x0, self.f(i)): t})
            return self.from_updates({(self.f(i), self.e(i)): t2,
                                      (self.x0, self.e(i)): t})
        if kind == LONG:
            (i, c), = nz
            if c > 0:
                return self.from_updates({(self.e(i), self.f(i)): t})
            return self.from_updates({(self.f(i), self.e(i)): t})
        (i, ci), (j, cj) = nz
        if ci > 0 and cj < 0:
            return self.from_updates({(self.e(i), self.e(j)): t,
                                      (self.f(j), self.f(i)): t})
        if ci < 0 and cj > 0:
            return self.from_updates({(self.e(j), self.e(i)): t,
                                      (self.f(i), self.f(j)): t})
        if ci > 0 and cj > 0:
            return self.from_updates({(self.e(i), self.f(j)): t,
                                      (self.e(j), self.f(i)): t})
        return self.from_updates({(self.f(i), self.e(j)): t,
                                  (self.f(j), self.e(i)): t})

    def weyl_element(self, a, t: Frac) -> "QElement":
        """s_a(t) = x_a(t) x_{-a}(t^{-1}) x_a(t) (signs vanish, p = 2)."""
        if not t:
            raise DivisionByZero("s_a(0) is undefined")
        xa = self.root_element(a, t)
        xna = self.root_element(roots.negate(a), t.inv())
        return xa * xna * xa

    def coroot_element(self, a, t: Frac) -> "QElement":
        """h_a(t) = s_a(t) s_a(-1)."""
        return self.weyl_element(a, t) * self.weyl_element(a, self.tower.one)

    def simple_reflection(self, i: int) -> "QElement":
        """s_i = s_{a_i}(1) for i < n and s_n = s_{2a_n}(1)."""
        simples = roots.simple_roots(self.n)
        if i < self.n:
            return self.weyl_element(simples[i - 1], self.tower.one)
        a = tuple(2 * c for c in simples[self.n - 1])
        return self.weyl_element(a, self.tower.one)

    def weyl_rep(self, w: Weyl) -> "QElement":
        """The fixed representative s_w: the product of simple reflections
        along the deterministic reduced word of w."""
        got = self._weyl_cache.get((w, False))
        if got is None:
            got = self.identity()
            for i in w.reduced_word():
                got = got * self.simple_reflection(i)
            self._weyl_cache[(w, False)] = got
        return got

    def weyl_rep_inverse(self, w: Weyl) -> "QElement":
        got = self._weyl_cache.get((w, True))
        if got is None:
            got = self.identity()
            for i in reversed(w.reduced_word()):
                got = got * self.simple_reflection(i)  # s_i is an involution
            self._weyl_cache[(w, True)] = got
        return got

    def cartan(self, coords) -> "QElement":
        """diag(c_1..c_n, c_1^{-1}..c_n^{-1}, 1): the torus point with
        eigenvalue c_i on e_i."""
        if len(coords) != self.n:
            raise ValueError("one coordinate per rank")
        upd = {}
        for i, c in enumerate(coords, start=1):
            if not c:
                raise DivisionByZero("torus coordinates must be units")
            upd[(self.e(i), self.e(i))] = c
            upd[(self.f(i), self.f(i))] = c.inv()
        return self.from_updates(upd)

    def h_scaling(self, lam: Frac) -> "QElement":
        """h(lambda) = diag(lam I, lam^{-1} I, 1): scales long root groups by
        lambda^2 and very short ones by lambda."""
        return self.cartan([lam] * self.n)

    # -- structure maps -----------------------------------------------------

    def pi(self, q: "QElement") -> "QElement":
        """The projection to Sp_2n, embedded back with trivial U-part."""
        zero = self.tower.zero
        one = self.tower.one
        rows = []
        for i in range(self.size):
            if i == self.x0:
                rows.append(tuple(one if j == self.x0 else zero
                                  for j in range(self.size)))
            else:
                rows.append(tuple(q.rows[i][j] if j != self.x0 else zero
                                  for j in range(self.size)))
        return QElement(self, tuple(rows))

    def commutator(self, g: "QElement", h: "QElement") -> "QElement":
        return g * h * g.inverse() * h.inverse()

    def preserves_symplectic(self, q: "QElement") -> bool:
        """Whether the Sp-block g satisfies g^T J g = J, J = [[0,I],[I,0]]."""
        n = self.n
        zero = self.tower.zero
        for a in range(2 * n):
            for b in range(2 * n):
                # (g^T J g)_{ab} = sum_k g_{k+n mod, a} ... expand J directly
                acc = zero
                for k in range(n):
                    acc = acc + q.rows[k][a] * q.rows[k + n][b]
                    acc = acc + q.rows[k + n][a] * q.rows[k][b]
                want = self.tower.one if (abs(a - b) == n) else zero
                if acc != want:
                    return False
        return True

    def preserves_quadratic(self, q: "QElement") -> bool:
        """Whether q preserves x0^2 + sum e_i f_i, checked symbolically: the
        Gram data of X^T (M^T Q M) X must match Q on the diagonal and on
        symmetrized off-diagonal entries (an identity of polynomials in the
        2n+1 coordinates)."""
        n = self.n
        zero = self.tower.zero
        size = self.size

        def qform(r, c):
            # entries of the upper-triangular Gram matrix of the form
            if r == self.x0 and c == self.x0:
                return self.tower.one
            if 0 <= r < n and c == r + n:
                return self.tower.one
            return zero

        # Gram data of M^T Q M: on the diagonal the x0-row contributes its
        # square; off the diagonal the symmetrization kills it (char 2)
        for a in range(size):
            for b in range(a, size):
                acc = zero
                for r in range(n):
                    acc = acc + q.rows[r][a] * q.rows[r + n][b]
                    if a != b:
                        acc = acc + q.rows[r][b] * q.rows[r + n][a]
                if a == b:
                    acc = acc + q.rows[self.x0][a] * q.rows[self.x0][a]
                    want = qform(a, a)
                else:
                    want = qform(a, b) + qform(b, a)
                if acc != want:
                    return False
        return True

    # -- unipotent peeling ---------------------------------------------------

    def char_entry(self, a) -> tuple:
        """The matrix position whose entry is linear in the coefficient of a
        positive root element."""
        kind = roots.length_class(a)
        nz = [(i + 1, c) for i, c in enumerate(a) if c]
        if kind == VERY_SHORT:
            (i, _), = nz
            return (self.x0, self.f(i))
        if kind == LONG:
            (i, _), = nz
            return (self.e(i), self.f(i))
        (i, ci), (j, cj) = nz
        if ci > 0 and cj < 0:
            return (self.e(i), self.e(j))
        return (self.e(i), self.f(j))

    def peel_unipotent(self, q: "QElement"):
        """Factor a positive-unipotent element as an ordered product over
        positive roots in height order; returns {root: coefficient}.

        Reading in non-decreasing height is sound: the characteristic entry
        of a root depends only on itself and on strictly lower factors, all
        already peeled.  Raises NotInBigGroup if the residue is not the
        identity."""
        order = sorted(
            (a for a in roots.positive_roots_in_order(self.n)),
            key=lambda a: (roots.height(a), a),
        )
        coeffs = {}
        r = q
        for a in order:
            t = r.rows[self.char_entry(a)[0]][self.char_entry(a)[1]]
            if t:
                coeffs[a] = t
                r = self.root_element(a, t) * r  # involution: own inverse
        if r != self.identity():
            raise NotInBigGroup("not a product of positive root elements")
        return coeffs


class QElement:
    """An immutable matrix of the ambient group; entries are tower fractions."""

    __slots__ = ("model", "rows", "_hash")

    def __init__(self, model: MatrixModel, rows):
        self.model = model
        self.rows = rows
        self._hash = None

    def __mul__(self, other: "QElement") -> "QElement":
        size = self.model.size
        zero = self.model.tower.zero
        brows = other.rows
        out = []
        for i in range(size):
            arow = self.rows[i]
            acc = [zero] * size
            for k in range(size):
                x = arow[k]
                if not x:
                    continue
                brow = brows[k]
                for j in range(size):
                    y = brow[j]
                    if y:
                        acc[j] = acc[j] + x * y
            out.append(tuple(acc))
        return QElement(self.model, tuple(out))

    def inverse(self) -> "QElement":
        """Block inverse [[g,0],[v,1]]^{-1} = [[g^{-1},0],[v g^{-1},1]]."""
        m = self.model
        n2 = 2 * m.n
        zero, one = m.tower.zero, m.tower.one
        if not self.is_block_shaped():
            raise NotInBigGroup("inverse outside the ambient block group")
        # invert the Sp block by Gauss-Jordan
        a = [list(self.rows[i][:n2]) + [one if j == i else zero
                                        for j in range(n2)]
             for i in range(n2)]
        for col in range(n2):
            piv = None
            for r in range(col, n2):
                if a[r][col]:
                    piv = r
                    break
            if piv is None:
                raise NotInBigGroup("singular Sp block")
            a[col], a[piv] = a[piv], a[col]
            inv = a[col][col].inv()
            a[col] = [x * inv for x in a[col]]
            for r in range(n2):
                if r != col and a[r][col]:
                    c = a[r][col]
                    a[r] = [x + c * y for x, y in zip(a[r], a[col])]
        ginv = [row[n2:] for row in a]
        v = self.rows[m.x0][:n2]
        vg = [sum((v[k] * ginv[k][j] for k in range(n2) if v[k]),
                  start=zero) for j in range(n2)]
        rows = [tuple(ginv[i]) + (zero,) for i in range(n2)]
        rows.append(tuple(vg) + (one,))
        return QElement(m, tuple(rows))

    def is_block_shaped(self) -> bool:
        """Last column (0, ..., 0, 1): the shape [[g, 0], [v, 1]]."""
        m = self.model
        for i in range(m.size - 1):
            if self.rows[i][m.x0]:
                return False
        return self.rows[m.x0][m.x0].is_one

    def u_part(self):
        m = self.model
        return self.rows[m.x0][: 2 * m.n]

    def is_identity(self) -> bool:
        return self == self.model.identity()

    def __eq__(self, other):
        if not isinstance(other, QElement):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def serialize(self):
        fmt = self.model.tower.fmt
        return [[fmt(x) for x in row] for row in self.rows]

    def __repr__(self):
        return "QElement(\n  " + "\n  ".join(
            "[" + ", ".join(self.model.tower.fmt(x) for x in row) + "]"
            for row in self.rows) + ")"
