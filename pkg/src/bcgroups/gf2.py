"""Sparse multivariate polynomials and rational functions over GF(2).

A monomial in variables x_0, ..., x_{m-1} is packed into a single int with
24 bits per exponent, variable 0 in the low bits; multiplying monomials is
integer addition.  A polynomial is a frozenset of packed monomials (every
nonzero coefficient is 1 over GF(2)), so addition is symmetric difference
and squaring is a left shift of each monomial.  A rational function is a
coprime numerator/denominator pair; over GF(2) every nonzero polynomial is
monic, so the reduced pair is a canonical form and equality is structural.

gcd strips monomial content, runs a bitmask euclidean loop when the rest is
univariate, resolves operands that are smooth over a registry of known
irreducibles by trial division, and only then falls back to monic Euclid in
a main variable over the fraction field of the remaining variables.  Hot
paths (polynomial entries, monomial / univariate / registry-smooth
denominators) never reach the fallback.
"""

from __future__ import annotations

from .errors import DivisionByZero

SHIFT = 24
MASK = (1 << SHIFT) - 1

PZERO: frozenset = frozenset()
PONE: frozenset = frozenset({0})


def _oddbits(nvars: int) -> int:
    mask = 0
    for i in range(nvars):
        mask |= 1 << (SHIFT * i)
    return mask


class GF2Ring:
    """The polynomial ring GF(2)[x_0, ..., x_{nvars-1}] on packed monomials."""

    def __init__(self, nvars: int):
        if not 1 <= nvars <= 8:
            raise ValueError("supported variable count is 1..8")
        self.nvars = nvars
        self._oddmask = _oddbits(nvars)
        self._primes: list = []
        self._gcd_cache: dict = {}

    # -- monomials ------------------------------------------------------

    def pack(self, exps) -> int:
        m = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MASK:
                raise ValueError(f"exponent out of range: {e}")
            m |= e << (SHIFT * i)
        return m

    def unpack(self, mono: int) -> tuple:
        return tuple((mono >> (SHIFT * i)) & MASK for i in range(self.nvars))

    def mono_divides(self, a: int, b: int) -> bool:
        """Whether monomial a divides monomial b."""
        for i in range(self.nvars):
            if (a >> (SHIFT * i)) & MASK > (b >> (SHIFT * i)) & MASK:
                return False
        return True

    # -- polynomials ----------------------------------------------------

    def pmul(self, A: frozenset, B: frozenset) -> frozenset:
        if not A or not B:
            return PZERO
        if A == PONE:
            return B
        if B == PONE:
            return A
        if len(A) > len(B):
            A, B = B, A
        acc: set = set()
        for ma in A:
            for mb in B:
                m = ma + mb
                if m in acc:
                    acc.discard(m)
                else:
                    acc.add(m)
        return frozenset(acc)

    def psquare(self, A: frozenset) -> frozenset:
        return frozenset(m << 1 for m in A)

    def ppow(self, A: frozenset, e: int) -> frozenset:
        if e < 0:
            raise ValueError("negative power on a polynomial")
        out = PONE
        base = A
        while e:
            if e & 1:
                out = self.pmul(out, base)
            base = self.psquare(base)
            e >>= 1
        return out

    def psqrt(self, A: frozenset):
        """Exact square root, or None.  A is a square iff all exponents are
        even (Frobenius: (sum m_i)^2 = sum m_i^2)."""
        for m in A:
            if m & self._oddmask:
                return None
        return frozenset(m >> 1 for m in A)

    def pdivexact(self, A: frozenset, B: frozenset) -> frozenset:
        """Quotient A/B, assuming it is exact; raises ValueError otherwise."""
        if not B:
            raise DivisionByZero("polynomial division by zero")
        if B == PONE:
            return A
        if not A:
            return PZERO
        lb = max(B)
        rem = set(A)
        quo: set = set()
        while rem:
            lr = max(rem)
            if not self.mono_divides(lb, lr):
                raise ValueError("inexact polynomial division")
            qm = lr - lb
            quo.add(qm)
            for m in B:
                mm = m + qm
                if mm in rem:
                    rem.discard(mm)
                else:
                    rem.add(mm)
        return frozenset(quo)

    # -- gcd ------------------------------------------------------------

    def mono_content(self, A: frozenset) -> int:
        """Packed per-variable minimum exponent over the terms of A != 0."""
        mc = None
        for m in A:
            if mc is None:
                mc = self.unpack(m)
            else:
                e = self.unpack(m)
                mc = tuple(min(a, b) for a, b in zip(mc, e))
                if not any(mc):
                    return 0
        return self.pack(mc)

    def _strip_mono(self, A: frozenset, mc: int) -> frozenset:
        if mc == 0:
            return A
        return frozenset(m - mc for m in A)

    def active_vars(self, A: frozenset) -> tuple:
        seen = [False] * self.nvars
        for m in A:
            for i in range(self.nvars):
                if (m >> (SHIFT * i)) & MASK:
                    seen[i] = True
        return tuple(i for i in range(self.nvars) if seen[i])

    def _gcd_uni(self, A: frozenset, B: frozenset, var: int) -> frozenset:
        sv = SHIFT * var
        a = 0
        for m in A:
            a |= 1 << ((m >> sv) & MASK)
        b = 0
        for m in B:
            b |= 1 << ((m >> sv) & MASK)
        while b:
            db = b.bit_length() - 1
            while a.bit_length() - 1 >= db and a:
                a ^= b << (a.bit_length() - 1 - db)
            a, b = b, a
        out = set()
        d = 0
        while a:
            if a & 1:
                out.add(d << sv)
            a >>= 1
            d += 1
        return frozenset(out)

    def register_prime(self, P: frozenset) -> bool:
        """Register P for denominator trial division if it is certifiably
        irreducible; returns whether it was accepted.

        Accepted families (soundness of the smooth-gcd peel depends on the
        entries really being irreducible): univariate polynomials checked by
        exhaustive trial division, and polynomials of degree 1 in some
        variable whose two coefficient polynomials are coprime (primitive
        linear, hence irreducible by Gauss)."""
        P = self._strip_mono(P, self.mono_content(P))
        if P == PONE or not P or len(P) == 1:
            return False
        if P in self._primes:
            return True
        active = self.active_vars(P)
        if len(active) == 1:
            if self._uni_irreducible(P, active[0]):
                self._primes.append(P)
                return True
            return False
        for v in active:
            sv = SHIFT * v
            if max(((m >> sv) & MASK) for m in P) != 1:
                continue
            c1 = frozenset(m - (1 << sv) for m in P if (m >> sv) & MASK)
            c0 = frozenset(m for m in P if not (m >> sv) & MASK)
            if c0 and self.pgcd(c0, c1) == PONE:
                self._primes.append(P)
                return True
        return False

    def _uni_irreducible(self, P: frozenset, var: int) -> bool:
        sv = SHIFT * var
        bits = 0
        for m in P:
            bits |= 1 << ((m >> sv) & MASK)
        deg = bits.bit_length() - 1
        if deg > 24:
            return False  # registration is an optimization; stay cheap
        if deg == 1:
            return True
        if not bits & 1:
            return False  # divisible by x
        for g in range(2, 1 << (deg // 2 + 1)):
            if g.bit_length() < 2:
                continue
            r = bits
            dg = g.bit_length() - 1
            while r and r.bit_length() - 1 >= dg:
                r ^= g << (r.bit_length() - 1 - dg)
            if not r:
                return False
        return True

    def _valuation(self, A: frozenset, P: frozenset) -> tuple:
        """Largest e with P^e | A, together with A / P^e."""
        e = 0
        while True:
            try:
                A2 = self.pdivexact(A, P)
            except ValueError:
                return e, A
            A, e = A2, e + 1

    def pgcd(self, A: frozenset, B: frozenset) -> frozenset:
        if not A:
            return B
        if not B:
            return A
        if A == B:
            return A
        mca = self.mono_content(A)
        mcb = self.mono_content(B)
        common = self.pack(
            tuple(
                min((mca >> (SHIFT * i)) & MASK, (mcb >> (SHIFT * i)) & MASK)
                for i in range(self.nvars)
            )
        )
        A1 = self._strip_mono(A, mca)
        B1 = self._strip_mono(B, mcb)
        mono = frozenset({common})
        if A1 == PONE or B1 == PONE:
            return mono
        if A1 == B1:
            return self.pmul(mono, A1)
        active = sorted(set(self.active_vars(A1)) | set(self.active_vars(B1)))
        if len(active) == 1:
            return self.pmul(mono, self._gcd_uni(A1, B1, active[0]))
        key = (A1, B1)
        g = self._gcd_cache.get(key)
        if g is None:
            g = self._gcd_smooth(A1, B1)
            if g is None:
                g = self._gcd_multi(A1, B1)
            if len(self._gcd_cache) > 8192:
                self._gcd_cache.clear()
            self._gcd_cache[key] = g
        return self.pmul(mono, g)

    def _gcd_smooth(self, A: frozenset, B: frozenset):
        """gcd via trial division over the registered primes.  Peels every
        registered factor off the smaller operand; when a residue remains,
        recurses on the (now much smaller) stripped pair.  None when no
        registered prime divides the smaller side.

        Valuations on the big side are guarded by a sound fast rejection:
        specialize all variables but one at fixed GF(2^16) points; a nonzero
        univariate remainder proves indivisibility without running the
        expensive exact division."""
        if not self._primes:
            return None
        small, big = (A, B) if len(A) <= len(B) else (B, A)
        factors = []
        rem = small
        for p in self._primes:
            if rem == PONE:
                break
            e, rem = self._valuation(rem, p)
            if e:
                factors.append((p, e))
        if not factors:
            return None
        from . import gf2k

        cache = None
        g = PONE
        for p, e in factors:
            v = 0
            while v < e:
                if cache is None:
                    cache = gf2k.specialize_cache(self, big)
                if not gf2k.maybe_divides(self, cache, p):
                    break
                try:
                    big = self.pdivexact(big, p)
                except ValueError:
                    break
                v += 1
                cache = None
            if v:
                g = self.pmul(g, self.ppow(p, v))
        if rem == PONE or big == PONE:
            return g
        # rem carries no registered prime, so the recursion cannot loop
        return self.pmul(g, self.pgcd(big, rem))

    def _coeff_dict(self, A: frozenset, var: int) -> dict:
        sv = SHIFT * var
        out: dict = {}
        for m in A:
            d = (m >> sv) & MASK
            c = m - (d << sv)
            s = out.get(d)
            if s is None:
                out[d] = {c}
            elif c in s:
                s.discard(c)
                if not s:
                    del out[d]
            else:
                s.add(c)
        return {d: frozenset(s) for d, s in out.items()}

    def _content_pp(self, D: dict) -> tuple:
        cont = PZERO
        for c in D.values():
            cont = self.pgcd(cont, c)
            if cont == PONE:
                return PONE, D
        return cont, {d: self.pdivexact(c, cont) for d, c in D.items()}

    def _maxdeg(self, P: frozenset, v: int) -> int:
        sv = SHIFT * v
        return max(((m >> sv) & MASK) for m in P)

    def _gcd_multi(self, A: frozenset, B: frozenset) -> frozenset:
        """gcd of mono-stripped genuinely multivariate operands: Brown's
        evaluation/interpolation over GF(2^16), certified by trial division.
        Fraction-free PRS variants all blow up over GF(2); this is the
        standard modular route."""
        small, big = (A, B) if len(A) <= len(B) else (B, A)
        if len(small) <= 4:
            try:
                self.pdivexact(big, small)
                return small
            except ValueError:
                pass
        from .gf2k import brown_gcd

        return brown_gcd(self, A, B)

    # -- element construction -------------------------------------------

    @property
    def zero(self) -> "Frac":
        return Frac(self, PZERO, PONE, reduce=False)

    @property
    def one(self) -> "Frac":
        return Frac(self, PONE, PONE, reduce=False)

    def var(self, i: int) -> "Frac":
        return Frac(self, frozenset({1 << (SHIFT * i)}), PONE, reduce=False)

    def from_terms(self, exp_tuples) -> "Frac":
        acc: set = set()
        for e in exp_tuples:
            m = self.pack(e)
            if m in acc:
                acc.discard(m)
            else:
                acc.add(m)
        return Frac(self, frozenset(acc), PONE, reduce=False)


class Frac:
    """A reduced fraction of GF(2) polynomials; immutable and canonical."""

    __slots__ = ("ring", "num", "den", "_hash")

    def __init__(self, ring: GF2Ring, num: frozenset, den: frozenset = PONE,
                 reduce: bool = True):
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            den = PONE
        elif reduce and den != PONE:
            g = ring.pgcd(num, den)
            if g != PONE:
                num = ring.pdivexact(num, g)
                den = ring.pdivexact(den, g)
        self.ring = ring
        self.num = num
        self.den = den
        self._hash = None

    # -- predicates ------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.num)

    @property
    def is_one(self) -> bool:
        return self.num == PONE and self.den == PONE

    def is_polynomial(self) -> bool:
        return self.den == PONE

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "Frac") -> "Frac":
        r = self.ring
        a, b = self.num, self.den
        c, d = other.num, other.den
        if b == PONE and d == PONE:
            return Frac(r, a ^ c, PONE, reduce=False)
        if b == d:
            return Frac(r, a ^ c, b)
        g = r.pgcd(b, d)
        if g == PONE:
            return Frac(r, r.pmul(a, d) ^ r.pmul(c, b), r.pmul(b, d),
                        reduce=False)
        b1 = r.pdivexact(b, g)
        d1 = r.pdivexact(d, g)
        num = r.pmul(a, d1) ^ r.pmul(c, b1)
        h = r.pgcd(num, g)
        if h != PONE:
            num = r.pdivexact(num, h)
            g = r.pdivexact(g, h)
        return Frac(r, num, r.pmul(r.pmul(b1, d1), g), reduce=False)

    __sub__ = __add__  # characteristic 2

    def __neg__(self) -> "Frac":
        return self

    def __mul__(self, other: "Frac") -> "Frac":
        r = self.ring
        a, b = self.num, self.den
        c, d = other.num, other.den
        if b == PONE and d == PONE:
            return Frac(r, r.pmul(a, c), PONE, reduce=False)
        if not a or not c:
            return Frac(r, PZERO, PONE, reduce=False)
        g1 = r.pgcd(a, d)
        if g1 != PONE:
            a = r.pdivexact(a, g1)
            d = r.pdivexact(d, g1)
        g2 = r.pgcd(c, b)
        if g2 != PONE:
            c = r.pdivexact(c, g2)
            b = r.pdivexact(b, g2)
        return Frac(r, r.pmul(a, c), r.pmul(b, d), reduce=False)

    def inv(self) -> "Frac":
        if not self.num:
            raise DivisionByZero("inverse of zero")
        return Frac(self.ring, self.den, self.num, reduce=False)

    def __truediv__(self, other: "Frac") -> "Frac":
        return self * other.inv()

    def __pow__(self, e: int) -> "Frac":
        if e < 0:
            return self.inv() ** (-e)
        r = self.ring
        return Frac(r, r.ppow(self.num, e), r.ppow(self.den, e), reduce=False)

    def square(self) -> "Frac":
        r = self.ring
        return Frac(r, r.psquare(self.num), r.psquare(self.den), reduce=False)

    def sqrt(self):
        """Exact square root or None (reduced pairs: both parts must be
        squares)."""
        r = self.ring
        n = r.psqrt(self.num)
        if n is None:
            return None
        d = r.psqrt(self.den)
        if d is None:
            return None
        return Frac(r, n, d, reduce=False)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Frac):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"Frac({sorted(self.num)}, {sorted(self.den)})"
