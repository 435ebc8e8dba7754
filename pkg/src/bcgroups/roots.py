"""The non-reduced root system BC_n and its Weyl group.

Roots are integer coordinate tuples in the standard realization:
+-e_i (very short), +-e_i +- e_j with i != j (short), +-2e_i (long); a root
is positive when its first nonzero coordinate is positive.  The Weyl group
is the group of signed permutations, stored as the image tuple
(w(1), ..., w(n)) with signs, acting by e_i |-> sign(w_i) * e_{|w_i|}.

Heights and the fixed positive-root order are taken against the B_n simple
system {a_1, ..., a_n}, a_i = e_i - e_{i+1} for i < n and a_n = e_n, so a_n
is the very short simple root.

>>> n = 2
>>> [fmt_root(a) for a in positive_roots_in_order(n)]
['e2', '2e2', 'e1', '2e1', 'e1-e2', 'e1+e2']
>>> longest(2).act((1, 0))
(-1, 0)
"""

from __future__ import annotations

from .errors import UnknownRoot

VERY_SHORT = "very_short"
SHORT = "short"
LONG = "long"


def length_class(a) -> str:
    nz = sorted(abs(c) for c in a if c)
    if nz == [1]:
        return VERY_SHORT
    if nz == [2]:
        return LONG
    if nz == [1, 1]:
        return SHORT
    raise UnknownRoot(repr(a))


def is_root(a) -> bool:
    try:
        length_class(a)
    except UnknownRoot:
        return False
    return True


def is_positive(a) -> bool:
    for c in a:
        if c:
            return c > 0
    return False


def negate(a):
    return tuple(-c for c in a)


def unit(n: int, i: int, c: int = 1):
    """c * e_i as a coordinate tuple (i is 1-based)."""
    return tuple(c if j == i - 1 else 0 for j in range(n))


def simple_roots(n: int):
    """[a_1, ..., a_{n-1}, a_n]: the B_n base; 2*a_n completes the BC base."""
    out = []
    for i in range(1, n):
        out.append(tuple(1 if j == i - 1 else (-1 if j == i else 0)
                         for j in range(n)))
    out.append(unit(n, n))
    return out


def all_roots(n: int):
    roots = []
    for i in range(1, n + 1):
        roots.extend([unit(n, i), unit(n, i, -1), unit(n, i, 2), unit(n, i, -2)])
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for si in (1, -1):
                for sj in (1, -1):
                    roots.append(tuple(
                        si if l == i - 1 else (sj if l == j - 1 else 0)
                        for l in range(n)))
    return roots


def height(a) -> int:
    """Height against the B_n simple system: e_i has height n - i + 1."""
    n = len(a)
    return sum(c * (n - i) for i, c in enumerate(a))


def positive_roots_in_order(n: int):
    """The fixed order b_1, ..., b_m (m = n^2 + n): very short roots in
    height order each immediately followed by its double, then the short
    roots in height order."""
    out = []
    for i in range(n, 0, -1):
        out.append(unit(n, i))
        out.append(unit(n, i, 2))
    shorts = [a for a in all_roots(n)
              if is_positive(a) and length_class(a) == SHORT]
    shorts.sort(key=lambda a: (height(a), a))
    out.extend(shorts)
    return out


def pairing(b, a) -> int:
    """The Cartan integer <b, a^vee> = 2(b,a)/(a,a)."""
    num = 2 * sum(x * y for x, y in zip(b, a))
    den = sum(x * x for x in a)
    if den == 0:
        raise UnknownRoot("pairing against the zero vector")
    if num % den:
        raise UnknownRoot(f"{b} against {a}: pairing not integral")
    return num // den


def fmt_root(a) -> str:
    parts = []
    for i, c in enumerate(a):
        if not c:
            continue
        mag = f"{abs(c)}e{i+1}" if abs(c) != 1 else f"e{i+1}"
        if not parts:
            parts.append(mag if c > 0 else f"-{mag}")
        else:
            parts.append(f"+{mag}" if c > 0 else f"-{mag}")
    return "".join(parts) if parts else "0"


class Weyl:
    """A signed permutation; `images[i]` is w(i+1) as a signed 1-based index."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if sorted(abs(c) for c in images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a signed permutation: {images}")
        self.images = images

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Weyl":
        return cls(range(1, n + 1))

    @classmethod
    def simple(cls, n: int, i: int) -> "Weyl":
        """s_i for i < n swaps i, i+1; s_n flips the sign of n."""
        if not 1 <= i <= n:
            raise ValueError(f"simple reflection index {i} out of range")
        img = list(range(1, n + 1))
        if i < n:
            img[i - 1], img[i] = img[i], img[i - 1]
        else:
            img[n - 1] = -n
        return cls(img)

    @classmethod
    def longest(cls, n: int) -> "Weyl":
        return cls([-i for i in range(1, n + 1)])

    @classmethod
    def from_word(cls, n: int, word) -> "Weyl":
        w = cls.identity(n)
        for i in word:
            w = w * cls.simple(n, i)
        return w

    def __mul__(self, other: "Weyl") -> "Weyl":
        # (self*other)(e_i) = self(other(e_i))
        img = []
        for c in other.images:
            d = self.images[abs(c) - 1]
            img.append(d if c > 0 else -d)
        return Weyl(img)

    def inverse(self) -> "Weyl":
        img = [0] * self.n
        for i, c in enumerate(self.images):
            if c > 0:
                img[c - 1] = i + 1
            else:
                img[-c - 1] = -(i + 1)
        return Weyl(img)

    def act(self, a):
        """The linear action on coordinate tuples."""
        out = [0] * self.n
        for i, c in enumerate(a):
            if c:
                d = self.images[i]
                out[abs(d) - 1] = c if d > 0 else -c
        return tuple(out)

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def length(self) -> int:
        """Coxeter length = inversions in the reduced B_n system."""
        count = 0
        for a in all_roots(self.n):
            if is_positive(a) and length_class(a) != LONG:
                if not is_positive(self.act(a)):
                    count += 1
        return count

    def inversion_set(self):
        """Positive BC_n roots sent negative, in the fixed b-order; for a
        very short root its double travels with it."""
        return [a for a in positive_roots_in_order(self.n)
                if not is_positive(self.act(a))]

    def reduced_word(self):
        """Deterministic reduced word: repeatedly strip the smallest right
        descent, i.e. the smallest i with w(a_i) negative."""
        word = []
        cur = self
        simples = simple_roots(self.n)
        while not cur.is_identity():
            for i in range(1, self.n + 1):
                if not is_positive(cur.act(simples[i - 1])):
                    word.append(i)
                    cur = cur * Weyl.simple(self.n, i)
                    break
            else:
                raise AssertionError("non-identity element with no descent")
        word.reverse()
        return word

    def __eq__(self, other):
        if not isinstance(other, Weyl):
            return NotImplemented
        return self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Weyl{self.images}"
