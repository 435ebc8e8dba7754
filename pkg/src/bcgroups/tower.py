"""Purely inseparable 2-power towers over rational function fields.

The base field is k = F2(t_1, ..., t_m).  A tower adjoins x_i := t_i^{1/2^{e_i}}
and internally IS the rational function field F2(x_1, ..., x_m); the base
field sits inside it as the span of the monomials with all exponents
divisible by 2^{e_i}.  Every intermediate field the construction needs
(K, K0, E, compositums, Frobenius shifts) is a k-subspace of the tower with
a computable reduced-echelon basis over the monomial basis
{prod x_i^{c_i} : 0 <= c_i < 2^{e_i}}, so membership, degree and equality
questions are exact linear algebra over k.

Elements are `gf2.Frac` values of the tower's ring; canonical reduced
fractions make equality and hashing structural.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import DivisionByZero, NoSquareRootInTower, ParseError
from .gf2 import Frac, GF2Ring, MASK, PONE, PZERO, SHIFT


def _v2(n: int) -> int:
    """2-adic valuation of a positive integer."""
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    return v


class FieldTower:
    """The global tower E' = F2(t_1^{1/2^{e_1}}, ..., t_m^{1/2^{e_m}})."""

    def __init__(self, variables, depths):
        if len(variables) != len(depths):
            raise ValueError("one depth per variable")
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        for d in depths:
            if d < 0 or d > 12:
                raise ValueError("tower depth out of range")
        self.variables = tuple(variables)
        self.depths = tuple(depths)
        self.ring = GF2Ring(len(variables))
        self.zero = self.ring.zero
        self.one = self.ring.one
        self._base = None
        self._k_monomials = None

    # -- basic constructors ----------------------------------------------

    def gen(self, name: str) -> Frac:
        """The adjoined root t^{1/2^e} of the named base variable."""
        return self.ring.var(self.variables.index(name))

    def base_gen(self, name: str) -> Frac:
        """The base variable t itself, as a tower element."""
        i = self.variables.index(name)
        return self.ring.var(i) ** (1 << self.depths[i])

    def monomial(self, exps) -> Frac:
        return Frac(self.ring, frozenset({self.ring.pack(exps)}), PONE,
                    reduce=False)

    @property
    def degree_over_k(self) -> int:
        d = 1
        for e in self.depths:
            d <<= e
        return d

    def k_basis_monomials(self):
        """Packed monomials of the tower basis over k, sorted."""
        if self._k_monomials is None:
            monos = [0]
            for i, e in enumerate(self.depths):
                monos = [
                    m | (c << (SHIFT * i)) for m in monos for c in range(1 << e)
                ]
            self._k_monomials = sorted(monos)
        return self._k_monomials

    # -- arithmetic helpers -----------------------------------------------

    def inv(self, a: Frac) -> Frac:
        if not a:
            raise DivisionByZero("inverse of zero tower element")
        return a.inv()

    def sqrt(self, a: Frac) -> Frac:
        """The unique square root, if it lies in the tower."""
        r = a.sqrt()
        if r is None:
            raise NoSquareRootInTower(self.fmt(a))
        return r

    def has_sqrt(self, a: Frac) -> bool:
        return a.sqrt() is not None

    # -- the base field k --------------------------------------------------

    def in_k(self, a: Frac) -> bool:
        return self._monomial_level_contains(a, self.depths)

    def _monomial_level_contains(self, a: Frac, exps) -> bool:
        for part in (a.num, a.den):
            for m in part:
                for i, e in enumerate(exps):
                    if (m >> (SHIFT * i)) & ((1 << e) - 1):
                        return False
        return True

    def k_denominator_power(self, den: frozenset) -> int:
        """Smallest j with den^(2^j) in k (exponent 2-adic deficits)."""
        need = 0
        for i, e in enumerate(self.depths):
            if not e:
                continue
            lo = min(
                (_v2(c) for m in den if (c := (m >> (SHIFT * i)) & MASK)),
                default=e,
            )
            need = max(need, e - min(lo, e))
        return need

    def k_clear(self, a: Frac) -> Frac:
        """a scaled by the k-element den^(2^j): a polynomial with the same
        k-span membership as a (subspaces are k-linear), computed without
        any division or gcd."""
        if a.den == PONE:
            return a
        ring = self.ring
        need = self.k_denominator_power(a.den)
        num = a.num
        if need:
            sq = a.den
            extra = PONE
            for _ in range(need):
                extra = ring.pmul(extra, sq)
                sq = ring.psquare(sq)
            num = ring.pmul(num, extra)
        else:
            # denominator already lies in k: drop it
            pass
        return Frac(ring, num, PONE, reduce=False)

    def k_coords(self, a: Frac) -> dict:
        """Coordinates of a over the monomial basis of the tower over k,
        as a dict packed-basis-monomial -> element of k."""
        ring = self.ring
        num, den = a.num, a.den
        if den != PONE:
            # force the denominator into k by the smallest adequate 2-power:
            # den^(2^j) has k-compatible exponents once j covers each
            # variable's depth deficit
            need = self.k_denominator_power(den)
            if need:
                sq = den
                extra = PONE
                for _ in range(need):
                    extra = ring.pmul(extra, sq)
                    sq = ring.psquare(sq)
                # extra = den^(2^need - 1), sq = den^(2^need) which lies in k
                num = ring.pmul(num, extra)
                den = sq
        coords: dict = {}
        masks = [(1 << e) - 1 for e in self.depths]
        for m in num:
            key = 0
            rest = m
            for i, mk in enumerate(masks):
                c = (m >> (SHIFT * i)) & mk
                key |= c << (SHIFT * i)
                rest -= c << (SHIFT * i)
            s = coords.setdefault(key, set())
            if rest in s:
                s.discard(rest)
            else:
                s.add(rest)
        dfrac = Frac(ring, den, PONE, reduce=False)
        out = {}
        for key, terms in coords.items():
            if terms:
                out[key] = Frac(ring, frozenset(terms)) / dfrac
        return out

    def from_k_coords(self, coords: dict) -> Frac:
        out = self.zero
        for key, c in coords.items():
            out = out + c * self.monomial(self.ring.unpack(key))
        return out

    # -- formatting and parsing --------------------------------------------

    def fmt(self, a: Frac) -> str:
        if not a:
            return "0"
        num = self._fmt_poly(a.num)
        if a.den == PONE:
            return num
        den = self._fmt_poly(a.den)
        if len(a.num) > 1:
            num = f"({num})"
        if len(a.den) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def _fmt_poly(self, part: frozenset) -> str:
        terms = []
        for m in sorted(part, reverse=True):
            factors = []
            for i, name in enumerate(self.variables):
                c = (m >> (SHIFT * i)) & MASK
                if not c:
                    continue
                q = Fraction(c, 1 << self.depths[i])
                if q == 1:
                    factors.append(name)
                elif q.denominator == 1:
                    factors.append(f"{name}^{q.numerator}")
                else:
                    factors.append(f"{name}^({q.numerator}/{q.denominator})")
            terms.append("*".join(factors) if factors else "1")
        return " + ".join(terms)

    def parse(self, text: str) -> Frac:
        return _Parser(self, text).parse()


class _Parser:
    """Recursive descent for sums/products/quotients of fractional powers."""

    def __init__(self, tower: FieldTower, text: str):
        self.tower = tower
        self.text = text
        self.pos = 0

    def parse(self) -> Frac:
        value = self._expr()
        self._skip()
        if self.pos != len(self.text):
            raise ParseError(f"trailing input at {self.pos}: {self.text!r}")
        return value

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self):
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expr(self) -> Frac:
        value = self._term()
        while self._peek() == "+":
            self.pos += 1
            value = value + self._term()
        return value

    def _term(self) -> Frac:
        value = self._factor()
        while True:
            ch = self._peek()
            if ch == "*":
                self.pos += 1
                value = value * self._factor()
            elif ch == "/":
                self.pos += 1
                rhs = self._factor()
                if not rhs:
                    raise ParseError("division by zero in element literal")
                value = value / rhs
            else:
                return value

    def _factor(self) -> Frac:
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            value = self._expr()
            if self._peek() != ")":
                raise ParseError("unbalanced parenthesis")
            self.pos += 1
        elif ch.isdigit():
            n = self._int()
            value = self.tower.one if n % 2 else self.tower.zero
        elif ch.isalpha() or ch == "_":
            name = self._name()
            if name not in self.tower.variables:
                raise ParseError(f"unknown variable {name!r}")
            value = None  # exponent handled below on the packed monomial
            i = self.tower.variables.index(name)
            value = ("var", i)
        else:
            raise ParseError(f"unexpected character {ch!r} at {self.pos}")
        if self._peek() == "^":
            self.pos += 1
            num, den = self._exponent()
        else:
            num, den = 1, 1
        if isinstance(value, tuple):
            i = value[1]
            scale = 1 << self.tower.depths[i]
            if (scale * num) % den:
                raise ParseError(
                    f"exponent {num}/{den} of {self.tower.variables[i]!r} "
                    "does not lie in the tower"
                )
            e = scale * num // den
            if e >= 0:
                return self.tower.monomial(
                    tuple(e if j == i else 0 for j in range(len(self.tower.variables)))
                )
            mono = self.tower.monomial(
                tuple(-e if j == i else 0 for j in range(len(self.tower.variables)))
            )
            return mono.inv()
        if (num, den) == (1, 1):
            return value
        if den != 1:
            raise ParseError("fractional exponent on a compound expression")
        return value ** num if num >= 0 else value.inv() ** (-num)

    def _exponent(self):
        if self._peek() == "(":
            self.pos += 1
            num = self._signed_int()
            den = 1
            if self._peek() == "/":
                self.pos += 1
                den = self._int()
            if self._peek() != ")":
                raise ParseError("unbalanced parenthesis in exponent")
            self.pos += 1
        else:
            num, den = self._signed_int(), 1
        if den <= 0:
            raise ParseError("exponent denominator must be positive")
        g = gcd(abs(num), den) or 1
        return num // g, den // g

    def _signed_int(self) -> int:
        if self._peek() == "-":
            self.pos += 1
            return -self._int()
        return self._int()

    def _int(self) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError(f"expected integer at {start}")
        return int(self.text[start:self.pos])

    def _name(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        return self.text[start:self.pos]


class KEchelon:
    """Reduced row echelon form over k of vectors indexed by tower basis
    monomials; the canonical object behind subfields and subspaces."""

    def __init__(self, tower: FieldTower):
        self.tower = tower
        self.rows: list = []  # (pivot monomial, {mono: k-coefficient}) desc

    def reduce(self, vec: dict) -> dict:
        vec = dict(vec)
        for pivot, row in self.rows:
            c = vec.get(pivot)
            if c is None or not c:
                continue
            for m, v in row.items():
                nv = vec.get(m, self.tower.zero) + c * v
                if nv:
                    vec[m] = nv
                else:
                    vec.pop(m, None)
        return {m: v for m, v in vec.items() if v}

    def insert(self, vec: dict) -> bool:
        vec = self.reduce(vec)
        if not vec:
            return False
        pivot = max(vec)
        pinv = vec[pivot].inv()
        row = {m: v * pinv for m, v in vec.items()}
        # back-substitute into earlier rows to keep the form reduced
        for i, (p, r) in enumerate(self.rows):
            c = r.get(pivot)
            if c is None or not c:
                continue
            nr = dict(r)
            for m, v in row.items():
                nv = nr.get(m, self.tower.zero) + c * v
                if nv:
                    nr[m] = nv
                else:
                    nr.pop(m, None)
            self.rows[i] = (p, nr)
        self.rows.append((pivot, row))
        self.rows.sort(key=lambda pr: -pr[0])
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def key(self) -> tuple:
        return tuple(
            (p, tuple(sorted((m, v) for m, v in row.items())))
            for p, row in self.rows
        )


class Subfield:
    """An intermediate field k <= F <= tower, canonically presented by the
    reduced echelon k-basis of its underlying k-subspace."""

    def __init__(self, tower: FieldTower, echelon: KEchelon, monomial_exps=None):
        self.tower = tower
        self._ech = echelon
        self._monomial_exps = monomial_exps
        self._elements = None

    @property
    def degree_over_k(self) -> int:
        return self._ech.dim

    def contains(self, a: Frac) -> bool:
        if self._monomial_exps is not None:
            return self.tower._monomial_level_contains(a, self._monomial_exps)
        # membership in a k-subspace is invariant under k-scaling, so clear
        # the denominator multiplicatively instead of dividing coordinates
        return self._ech.contains(self.tower.k_coords(self.tower.k_clear(a)))

    def basis_elements(self):
        if self._elements is None:
            self._elements = [
                self.tower.from_k_coords(dict(row)) for _, row in self._ech.rows
            ]
        return self._elements

    def is_subfield_of(self, other: "Subfield") -> bool:
        return all(other.contains(b) for b in self.basis_elements())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subfield):
            return NotImplemented
        return self.tower is other.tower and self._ech.key() == other._ech.key()

    def __hash__(self):
        return hash(self._ech.key())

    def __repr__(self):
        return f"Subfield(deg {self.degree_over_k})"

    def describe(self):
        return [self.tower.fmt(b) for b in self.basis_elements()]

    def sample(self, rng, nonzero=False) -> Frac:
        while True:
            out = self.tower.zero
            for b in self.basis_elements():
                if rng.random() < 0.45:
                    out = out + sample_k(self.tower, rng) * b
            if out or not nonzero:
                if nonzero and not out:
                    continue
                return out


def sample_k(tower: FieldTower, rng, max_deg: int = 1, max_terms: int = 2) -> Frac:
    """A small random element of the base field k (polynomial in the t_i)."""
    nv = len(tower.variables)
    acc = tower.zero
    for _ in range(rng.randint(1, max_terms)):
        exps = [0] * nv
        for i in range(nv):
            e = rng.randint(0, max_deg)
            exps[i] = e << tower.depths[i]
        acc = acc + tower.monomial(tuple(exps))
    return acc


def subfield_from_generators(tower: FieldTower, gens, monomial_exps=None) -> Subfield:
    """The smallest subfield of the tower containing k and the generators.

    Saturates the k-algebra k[gens]; a finite-dimensional subalgebra of a
    field is itself a field, so no inverses need adjoining."""
    ech = KEchelon(tower)
    ech.insert({0: tower.one})
    elements = [tower.one]
    gens = [g for g in gens if g]
    changed = True
    while changed:
        changed = False
        basis_now = list(elements)
        for b in basis_now:
            for g in gens:
                p = b * g
                if ech.insert(tower.k_coords(p)):
                    elements.append(p)
                    changed = True
    return Subfield(tower, ech, monomial_exps=monomial_exps)


def base_field(tower: FieldTower) -> Subfield:
    if tower._base is None:
        ech = KEchelon(tower)
        ech.insert({0: tower.one})
        tower._base = Subfield(tower, ech, monomial_exps=tower.depths)
    return tower._base


def monomial_level(tower: FieldTower, exps) -> Subfield:
    """The monomial subfield F2(t_1^{1/2^{c_1}}, ...) given by per-variable
    root depths c_i <= e_i; membership uses the fast exponent test."""
    exps = tuple(exps)
    if len(exps) != len(tower.variables):
        raise ValueError("one exponent per variable")
    gens = []
    for i, c in enumerate(exps):
        if c > tower.depths[i]:
            raise ValueError("level deeper than the tower")
        step = 1 << (tower.depths[i] - c)
        gens.append(tower.monomial(tuple(step if j == i else 0
                                         for j in range(len(exps)))))
    ech = KEchelon(tower)
    ech.insert({0: tower.one})
    elements = [tower.one]
    for g in gens:
        for b in list(elements):
            p = b * g
            while ech.insert(tower.k_coords(p)):
                elements.append(p)
                p = p * g
    return Subfield(
        tower,
        ech,
        monomial_exps=tuple(tower.depths[i] - exps[i] for i in range(len(exps))),
    )


def compositum(tower: FieldTower, fields) -> Subfield:
    """The smallest subfield containing every input field."""
    gens = []
    for f in fields:
        gens.extend(f.basis_elements())
    return subfield_from_generators(tower, gens)


def frobenius_shifted_subfield(tower: FieldTower, F: Subfield, lam: int) -> Subfield:
    """k(F^{2^{v2(lam)}}); by convention lam = 0 gives k itself."""
    if lam < 0:
        raise ValueError("weight entries are non-negative")
    if lam == 0:
        return base_field(tower)
    e = _v2(lam)
    gens = [b ** (1 << e) for b in F.basis_elements()]
    return subfield_from_generators(tower, gens)


class LinearSubspace:
    """A finite-dimensional k-subspace of the tower with a declared scalar
    field; scalar-closure is a checkable property, not an assumption."""

    def __init__(self, tower: FieldTower, scalar: Subfield, gens):
        self.tower = tower
        self.scalar = scalar
        self.gens = list(gens)
        self._ech = KEchelon(tower)
        for g in self.gens:
            self._ech.insert(tower.k_coords(g))

    @classmethod
    def scalar_span(cls, tower: FieldTower, scalar: Subfield, gens):
        """The scalar-field span of the generators, handed over as the
        k-span of the expanded basis (so closure holds by construction)."""
        expanded = [s * g for g in gens for s in scalar.basis_elements()]
        return cls(tower, scalar, expanded)

    @property
    def dim_over_k(self) -> int:
        return self._ech.dim

    def is_zero(self) -> bool:
        return self._ech.dim == 0

    def contains(self, a: Frac) -> bool:
        return self._ech.contains(self.tower.k_coords(self.tower.k_clear(a)))

    def closed_under_scalars(self) -> bool:
        for s in self.scalar.basis_elements():
            for b in self.basis_elements():
                if not self.contains(s * b):
                    return False
        return True

    def dim_over_scalar(self):
        d = self.scalar.degree_over_k
        if self._ech.dim % d:
            return None
        return self._ech.dim // d

    def basis_elements(self):
        return [self.tower.from_k_coords(dict(row)) for _, row in self._ech.rows]

    def scale(self, c: Frac) -> "LinearSubspace":
        return LinearSubspace(self.tower, self.scalar, [c * g for g in self.gens])

    def intersects_trivially(self, other: "LinearSubspace") -> bool:
        ech = KEchelon(self.tower)
        dim = 0
        for g in self.basis_elements() + other.basis_elements():
            if ech.insert(self.tower.k_coords(g)):
                dim += 1
        return dim == self.dim_over_k + other.dim_over_k

    def sum_with(self, other: "LinearSubspace", scalar: Subfield) -> "LinearSubspace":
        return LinearSubspace(self.tower, scalar,
                              self.basis_elements() + other.basis_elements())

    def sample(self, rng, nonzero=False) -> Frac:
        while True:
            out = self.tower.zero
            basis = self.basis_elements()
            for b in basis:
                if rng.random() < 0.5:
                    out = out + sample_k(self.tower, rng) * b
            if not out and nonzero:
                if basis:
                    continue
                raise ValueError("cannot sample nonzero from the zero space")
            return out

    def __eq__(self, other):
        if not isinstance(other, LinearSubspace):
            return NotImplemented
        return self.tower is other.tower and self._ech.key() == other._ech.key()

    def __hash__(self):
        return hash(self._ech.key())


def ratio_generated_subfield(tower: FieldTower, space: LinearSubspace) -> Subfield:
    """k<S>: the subfield generated over k by ratios x/y of nonzero x, y in
    the space.  Every such ratio is a quotient of two elements of
    k[b_i / b_1], so the saturation of the basis ratios already closes up."""
    basis = space.basis_elements()
    if not basis:
        raise ValueError("ratio field of the zero space")
    b0 = basis[0]
    gens = [b / b0 for b in basis[1:]]
    return subfield_from_generators(tower, gens)
