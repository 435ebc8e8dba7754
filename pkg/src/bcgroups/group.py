"""The groups generated from the defining data, and their Bruhat machinery.

A group is specified by validated data plus a variant:

* ``standard``    - root coefficients (very short, long, short) from
  (V, V', K), Cartan part all of D(K) = (K^x)^n;
* ``derived``     - same root coefficients, Cartan part the subgroup
  {c : c_1 ... c_n in <ratios of V0>}, V0 = V2 + V';
* ``rank2``       - rank 2 only: short coefficients from V'', Cartan part
  generated by h_{a1}(c/c') over V'' and h_{2a2}(c/c') over V0, twisted
  reflections s1 = s_{a1}(v1), s2 = s_{2a2}(v2).

Elements are words in atoms; the faithful image is the matrix group.  Every
element of the big group has a unique normal form u_w * s_w * h * u where
u runs over the positive root elements in the fixed b-order, h is a torus
point, s_w is the fixed reduced-word representative, and u_w is supported on
the positive roots sent negative by w^{-1} (the leading-side parametrization
of the cell B s_w B).  Membership in the configured group is then a domain
check on the recovered coefficients; for the derived/rank2 Cartan parts the
check is a bounded search and may come back undecided.

Coefficient extraction never divides: cell detection reads pivots off a
bottom-up Gaussian elimination of the symplectic block, the big-cell LDU
gives the torus part, and unipotent coefficients are solved for in the fixed
b-order by walking the roots in height order (each characteristic entry
depends only on strictly lower factors, which are already known).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from . import roots
from .chevalley import MatrixModel, QElement
from .errors import (ConstraintViolation, NotInBigGroup, NotInGroup,
                     PreconditionNotNormalized)
from .gf2 import Frac
from .groupdata import BCData, DerivedData, derive, validate
from .roots import LONG, SHORT, VERY_SHORT, Weyl
from .tower import LinearSubspace, base_field, sample_k

VARIANTS = ("standard", "derived", "rank2")


# ---------------------------------------------------------------------------
# group specification


@dataclass
class GroupSpec:
    data: BCData
    derived: DerivedData
    variant: str
    model: MatrixModel
    v1: Optional[Frac] = None   # rank2: s1 = s_{a1}(v1), v1 in V''
    v2: Optional[Frac] = None   # rank2: s2 = s_{2a2}(v2), v2 in V'
    cartan_search_bound: int = 6

    @property
    def n(self) -> int:
        return self.data.n

    @property
    def tower(self):
        return self.data.tower

    def domain_for(self, a) -> LinearSubspace:
        kind = roots.length_class(a)
        if kind == VERY_SHORT:
            return self.derived.V
        if kind == LONG:
            return self.data.Vp
        if self.n == 1:
            raise ConstraintViolation("rank 1 has no short root groups")
        if self.variant == "rank2":
            return self.data.Vpp
        return None  # short coefficients range over all of K

    def coeff_ok(self, a, c: Frac) -> bool:
        dom = self.domain_for(a)
        if dom is None:
            return self.data.K.contains(c)
        return dom.contains(c)

    def v0_space(self) -> LinearSubspace:
        return self.data.V2.sum_with(self.data.Vp, self.derived.K2)


def make_spec(data: BCData, variant: str = "standard", v1=None, v2=None,
              cartan_search_bound: int = 6) -> GroupSpec:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    rep = validate(data)
    if not rep.ok:
        names = ", ".join(c.name for c in rep.failed())
        raise ConstraintViolation(f"invalid data: {names}")
    if variant == "rank2":
        if data.Vpp is None or data.n != 2:
            raise ConstraintViolation("rank2 variant needs n = 2 and V''")
    der = derive(data)
    spec = GroupSpec(data=data, derived=der, variant=variant,
                     model=MatrixModel(data.n, data.tower),
                     cartan_search_bound=cartan_search_bound)
    if variant == "rank2":
        spec.v1 = v1 if v1 is not None else data.Vpp.basis_elements()[-1]
        spec.v2 = v2 if v2 is not None else data.Vp.basis_elements()[-1]
        if not (spec.v1 and data.Vpp.contains(spec.v1)):
            raise ConstraintViolation("v1 must be a nonzero element of V''")
        if not (spec.v2 and data.Vp.contains(spec.v2)):
            raise ConstraintViolation("v2 must be a nonzero element of V'")
    return spec


# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class RootAtom:
    root: tuple
    coeff: Frac


@dataclass(frozen=True)
class CorootAtom:
    """h_a(t) for a simple a (or 2a_n); standard/derived variants."""
    root: tuple
    t: Frac


@dataclass(frozen=True)
class CorootRatioAtom:
    """h_a(c/cden) with c, cden from the subspace attached to a."""
    root: tuple
    c: Frac
    cden: Frac


@dataclass(frozen=True)
class ReflectionAtom:
    i: int


def atom_matrix(spec: GroupSpec, atom) -> QElement:
    m = spec.model
    if isinstance(atom, RootAtom):
        if not spec.coeff_ok(atom.root, atom.coeff):
            raise ConstraintViolation(
                f"coefficient {spec.tower.fmt(atom.coeff)} outside the domain "
                f"of root {roots.fmt_root(atom.root)}")
        return m.root_element(atom.root, atom.coeff)
    if isinstance(atom, CorootAtom):
        _check_coroot(spec, atom.root, atom.t)
        return m.coroot_element(atom.root, atom.t)
    if isinstance(atom, CorootRatioAtom):
        _check_coroot_ratio(spec, atom.root, atom.c, atom.cden)
        return m.coroot_element(atom.root, atom.c / atom.cden)
    if isinstance(atom, ReflectionAtom):
        i = atom.i
        if not 1 <= i <= spec.n:
            raise ConstraintViolation(f"reflection index {i} out of range")
        if spec.variant != "rank2":
            return m.simple_reflection(i)
        if i == 1:
            return m.weyl_element((1, -1), spec.v1)
        return m.weyl_element((0, 2), spec.v2)
    raise ConstraintViolation(f"unknown atom {atom!r}")


def _check_coroot(spec, a, t):
    if spec.variant == "rank2":
        raise ConstraintViolation("rank2 Cartan atoms must be ratio atoms")
    simples = roots.simple_roots(spec.n)
    long_n = tuple(2 * c for c in simples[-1])
    legal = list(simples[:-1]) + [long_n]
    if spec.variant == "derived":
        legal = list(simples[:-1])
    if tuple(a) not in [tuple(x) for x in legal]:
        raise ConstraintViolation(
            f"{roots.fmt_root(a)} is not a coroot generator of this variant")
    if not t or not spec.data.K.contains(t):
        raise ConstraintViolation("coroot parameter must lie in K^x")


def _check_coroot_ratio(spec, a, c, cden):
    simples = roots.simple_roots(spec.n)
    long_n = tuple(2 * c_ for c_ in simples[-1])
    if spec.variant == "standard":
        raise ConstraintViolation("standard Cartan atoms are plain coroots")
    if tuple(a) == long_n:
        space = spec.v0_space()
    elif spec.variant == "rank2" and spec.n == 2 and tuple(a) == (1, -1):
        space = spec.data.Vpp
    else:
        raise ConstraintViolation(
            f"{roots.fmt_root(a)} is not a ratio-coroot of this variant")
    if not (c and cden and space.contains(c) and space.contains(cden)):
        raise ConstraintViolation("ratio atoms need nonzero numerator and "
                                  "denominator from the attached subspace")


def evaluate(spec: GroupSpec, word) -> QElement:
    out = spec.model.identity()
    for atom in word:
        out = out * atom_matrix(spec, atom)
    return out


def generator_words(spec: GroupSpec):
    """One-atom words generating the group, used by containment checks."""
    n = spec.n
    out = []
    vs = roots.unit(n, n)
    long_n = roots.unit(n, n, 2)
    for c in spec.derived.V.basis_elements():
        out.append([RootAtom(vs, c)])
    for c in spec.data.Vp.basis_elements():
        out.append([RootAtom(long_n, c)])
    if n >= 2:
        a1 = roots.simple_roots(n)[0]
        dom = spec.domain_for(a1)
        basis = (dom.basis_elements() if dom is not None
                 else spec.data.K.basis_elements())
        for c in basis:
            out.append([RootAtom(a1, c)])
    for i in range(1, n + 1):
        out.append([ReflectionAtom(i)])
    if spec.variant == "standard":
        simples = roots.simple_roots(n)
        long_root = tuple(2 * c for c in simples[-1])
        for b in spec.data.K.basis_elements():
            for a in list(simples[:-1]) + [long_root]:
                out.append([CorootAtom(tuple(a), b)])
    return out


# ---------------------------------------------------------------------------
# normal forms


@dataclass
class NormalForm:
    u_w: tuple          # ((root, coeff), ...) in b-order, support in Inv(w^{-1})
    w: Weyl
    h: tuple            # torus eigencoordinates (c_1, ..., c_n)
    u: tuple            # ((root, coeff), ...) in b-order
    cartan_status: str  # "yes" | "undecided"

    def describe(self, tower):
        return {
            "u_w": [(roots.fmt_root(a), tower.fmt(c)) for a, c in self.u_w],
            "w": list(self.w.images),
            "w_word": self.w.reduced_word(),
            "h": [tower.fmt(c) for c in self.h],
            "u": [(roots.fmt_root(a), tower.fmt(c)) for a, c in self.u],
            "cartan_status": self.cartan_status,
        }


def evaluate_normal_form(spec: GroupSpec, nf: NormalForm) -> QElement:
    m = spec.model
    out = m.identity()
    for a, c in nf.u_w:
        out = out * m.root_element(a, c)
    out = out * m.weyl_rep(nf.w)
    out = out * m.cartan(list(nf.h))
    for a, c in nf.u:
        out = out * m.root_element(a, c)
    return out


def _flag2n(n: int):
    # storage indices in weight order e_1..e_n, f_n..f_1
    return list(range(n)) + [2 * n - 1 - i for i in range(n)]


def bruhat_cell(spec: GroupSpec, g: QElement) -> Weyl:
    """The Weyl element w with pi(g) in B s_w B, read from the pivot pattern
    of a bottom-up Gaussian elimination against the weight-ordered flag."""
    n = spec.n
    fl = _flag2n(n)
    A = [[g.rows[fl[i]][fl[j]] for j in range(2 * n)] for i in range(2 * n)]
    zero = spec.tower.zero
    perm = [None] * (2 * n)
    for j in range(2 * n):
        piv = None
        for i in range(2 * n - 1, -1, -1):
            if A[i][j]:
                piv = i
                break
        if piv is None:
            raise NotInBigGroup("singular symplectic block")
        perm[j] = piv
        inv = A[piv][j].inv()
        # clear the pivot column upward (row ops from below) and the pivot
        # row rightward (column ops from the left)
        for i in range(piv):
            if A[i][j]:
                c = A[i][j] * inv
                A[i] = [x + c * y for x, y in zip(A[i], A[piv])]
        for jj in range(j + 1, 2 * n):
            if A[piv][jj]:
                c = A[piv][jj] * inv
                for i in range(2 * n):
                    A[i][jj] = A[i][jj] + c * A[i][j]
    # signed permutation from the pivot pattern; mirror consistency is the
    # symplectic shape check
    images = [0] * n
    for j in range(n):
        i = perm[j]
        images[j] = i + 1 if i < n else -(2 * n - i)
    for j in range(n):
        jm = 2 * n - 1 - j
        if perm[jm] != 2 * n - 1 - perm[j]:
            raise NotInBigGroup("pivot pattern is not symplectic")
    return Weyl(images)


def _ldu(spec: GroupSpec, g: QElement):
    """LDU in the full flag order; returns (L, diag, U) as QElements/list.
    Valid exactly on the big cell; a vanishing pivot means the element is
    not in the cell the caller detected."""
    m = spec.model
    size = m.size
    fl = m.flag
    A = [[g.rows[fl[i]][fl[j]] for j in range(size)] for i in range(size)]
    zero, one = spec.tower.zero, spec.tower.one
    L = [[one if i == j else zero for j in range(size)] for i in range(size)]
    for k in range(size):
        piv = A[k][k]
        if not piv:
            raise NotInBigGroup("vanishing pivot outside the detected cell")
        # pivots are where structurally new denominators are born; feed
        # their irreducible cores to the gcd registry
        _register_factors(spec, piv)
        inv = piv.inv()
        for i in range(k + 1, size):
            if A[i][k]:
                c = A[i][k] * inv
                L[i][k] = c
                A[i] = [x + c * y for x, y in zip(A[i], A[k])]
    diag = [A[k][k] for k in range(size)]
    U = [[A[k][j] * diag[k].inv() if j > k else (one if j == k else zero)
          for j in range(size)] for k in range(size)]

    def unflag(mat):
        rows = [[zero] * size for _ in range(size)]
        for i in range(size):
            for j in range(size):
                rows[fl[i]][fl[j]] = mat[i][j]
        return QElement(m, tuple(tuple(r) for r in rows))

    return unflag(L), diag, unflag(U)


def extract_b_order(spec: GroupSpec, q: QElement):
    """Coefficients of the unique b-ordered factorization of a positive
    unipotent element.  Solved in height order: the characteristic entry of
    each root equals its coefficient plus a polynomial in strictly lower
    coefficients, all known by the time it is read."""
    m = spec.model
    order_b = roots.positive_roots_in_order(spec.n)
    by_height = sorted(order_b, key=lambda a: (roots.height(a), a))
    coeffs = {}

    def partial_product():
        out = m.identity()
        for a in order_b:
            c = coeffs.get(a)
            if c:
                out = out * m.root_element(a, c)
        return out

    for a in by_height:
        r, c = m.char_entry(a)
        have = partial_product().rows[r][c]
        want = q.rows[r][c]
        t = want + have
        if t:
            coeffs[a] = t
            _register_factors(spec, t)
    if partial_product() != q:
        raise NotInBigGroup("not a b-ordered product of positive root elements")
    return [(a, coeffs[a]) for a in order_b if a in coeffs]


def bruhat_normal_form(spec: GroupSpec, g: QElement) -> NormalForm:
    """The unique expression u_w s_w h u of an element of the big group;
    raises NotInBigGroup when g is not in Q(E) (shape or symplectic block),
    NotInGroup when a recovered coefficient leaves its constraint domain."""
    m = spec.model
    if not g.is_block_shaped():
        raise NotInBigGroup("matrix is not in the [[g,0],[v,1]] block shape")
    if not m.preserves_symplectic(g):
        raise NotInBigGroup("top block is not symplectic")
    w = bruhat_cell(spec, g)
    y = m.weyl_rep_inverse(w) * g
    L, diag, U = _ldu(spec, y)
    # torus part from the diagonal, in flag order e_1..e_n, x0, f_n..f_1
    one = spec.tower.one
    if diag[spec.n] != one:
        raise NotInBigGroup("radical coordinate is rescaled")
    h = tuple(diag[i] for i in range(spec.n))
    for i in range(spec.n):
        if diag[i] * diag[m.size - 1 - i] != one:
            raise NotInBigGroup("diagonal is not a symplectic torus point")
    # unipotent parts
    u_pairs = extract_b_order(spec, U)
    uw_mat = m.weyl_rep(w) * L * m.weyl_rep_inverse(w)
    uw_pairs = extract_b_order(spec, uw_mat)
    allowed = {tuple(a) for a in w.inverse().inversion_set()}
    for a, _ in uw_pairs:
        if tuple(a) not in allowed:
            raise NotInBigGroup("leading unipotent outside the cell")
    # constraint domains
    for a, c in list(u_pairs) + list(uw_pairs):
        if not spec.coeff_ok(a, c):
            raise NotInGroup(
                f"coefficient of {roots.fmt_root(a)} leaves its domain: "
                f"{spec.tower.fmt(c)}")
    for c in h:
        if not spec.data.K.contains(c):
            raise NotInGroup("Cartan coordinate outside K")
    status = cartan_membership(spec, h)
    if status == "no":
        raise NotInGroup("Cartan part outside the variant subgroup")
    return NormalForm(u_w=tuple(uw_pairs), w=w, h=h, u=tuple(u_pairs),
                      cartan_status=status)


# ---------------------------------------------------------------------------
# Cartan membership (exact for the standard variant, semi-decided otherwise)


_RATIO_NODE_CAP = 400


def _ratio_member(spec: GroupSpec, gamma: Frac, space: LinearSubspace) -> bool:
    """Certify gamma as a product of ratios of nonzero elements of the
    space: breadth-first over basis-ratio moves up to the configured factor
    bound (with a node cap), testing at each node whether the remainder is
    a single ratio, i.e. whether gamma * S meets S."""
    if gamma.is_one:
        return True
    from .tower import KEchelon

    basis = space.basis_elements()
    dim = space.dim_over_k
    base_rows = []
    ech0 = KEchelon(spec.tower)
    for b in basis:
        ech0.insert(spec.tower.k_coords(b))

    def single_ratio(x: Frac) -> bool:
        ech = KEchelon(spec.tower)
        ech.rows = [(p, dict(row)) for p, row in ech0.rows]
        extra = 0
        for b in basis:
            if ech.insert(spec.tower.k_coords(x * b)):
                extra += 1
        return extra < dim

    if single_ratio(gamma):
        return True
    moves = [basis[i] / basis[j]
             for i in range(len(basis)) for j in range(len(basis)) if i != j]
    seen = {gamma}
    frontier = [gamma]
    for _ in range(max(0, spec.cartan_search_bound - 1)):
        new = []
        for x in frontier:
            for mv in moves:
                y = x * mv
                if y in seen:
                    continue
                if single_ratio(y):
                    return True
                seen.add(y)
                new.append(y)
                if len(seen) > _RATIO_NODE_CAP:
                    return False
        if not new:
            break
        frontier = new
    return False


def cartan_membership(spec: GroupSpec, h) -> str:
    """'yes', 'no' or 'undecided' for a torus point against the variant's
    Cartan subgroup (coordinates are already known to lie in K^x)."""
    if spec.variant == "standard":
        return "yes"
    if spec.variant == "derived":
        prod = spec.tower.one
        for c in h:
            prod = prod * c
        return "yes" if _ratio_member(spec, prod, spec.v0_space()) else "undecided"
    # rank2: h = (c1, c2) with c1 from V'' ratios and c1*c2 from V0 ratios
    c1, c2 = h
    ok1 = _ratio_member(spec, c1, spec.data.Vpp)
    ok2 = _ratio_member(spec, c1 * c2, spec.v0_space())
    return "yes" if ok1 and ok2 else "undecided"


@dataclass
class MembershipResult:
    status: str                      # "yes" | "no" | "undecided_cartan"
    normal_form: Optional[NormalForm] = None
    reason: str = ""


def membership(spec: GroupSpec, g: QElement) -> MembershipResult:
    try:
        nf = bruhat_normal_form(spec, g)
    except NotInBigGroup as e:
        return MembershipResult("no", reason=f"not in the ambient group: {e}")
    except NotInGroup as e:
        return MembershipResult("no", reason=str(e))
    if nf.cartan_status == "yes":
        return MembershipResult("yes", normal_form=nf)
    return MembershipResult("undecided_cartan", normal_form=nf)


# ---------------------------------------------------------------------------
# conjugation by h(lambda)


def conjugate_by_h_lambda(spec: GroupSpec, lam: Frac) -> GroupSpec:
    """The spec of the h(lambda)-conjugate group, with data
    (K/k, lam^2 V2, lam^2 V')."""
    if not lam:
        raise ValueError("lambda must be a unit")
    lam2 = lam.square()
    data = BCData(
        tower=spec.data.tower,
        n=spec.data.n,
        K=spec.data.K,
        V2=spec.data.V2.scale(lam2),
        Vp=spec.data.Vp.scale(lam2),
        Vpp=spec.data.Vpp,
    )
    return make_spec(data, variant=spec.variant, v1=spec.v1, v2=spec.v2,
                     cartan_search_bound=spec.cartan_search_bound)


# ---------------------------------------------------------------------------
# randomized structure suites


@dataclass
class CheckReport:
    name: str
    seed: int
    samples: int
    passes: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, ok, detail=None):
        if ok:
            self.passes += 1
        else:
            self.failures.append(detail)

    def summary(self) -> str:
        state = "pass" if self.ok else f"FAIL ({len(self.failures)} failures)"
        return f"{self.name}: {state} [{self.passes} checks, seed {self.seed}]"


def _light(spec: GroupSpec) -> bool:
    # multivariate towers pay for every extra term in every later product;
    # univariate towers have cheap gcds and can afford rich samples
    return len(spec.tower.variables) > 1


def _sample_light(spec: GroupSpec, rng, basis, nonzero):
    while True:
        out = spec.tower.zero
        r = rng.random()
        picks = 1 if r < 0.7 else 2
        for b in rng.sample(basis, min(picks, len(basis))):
            exps = [rng.randint(0, 1) << spec.tower.depths[i]
                    for i in range(len(spec.tower.variables))]
            out = out + spec.tower.monomial(tuple(exps)) * b
        if out or not nonzero:
            if nonzero and not out:
                continue
            return out


def sample_root_coeff(spec: GroupSpec, rng, a, nonzero=False) -> Frac:
    dom = spec.domain_for(a)
    if dom is None:
        if _light(spec):
            return _sample_light(spec, rng, spec.data.K.basis_elements(), nonzero)
        return spec.data.K.sample(rng, nonzero=nonzero)
    if _light(spec):
        return _sample_light(spec, rng, dom.basis_elements(), nonzero)
    return dom.sample(rng, nonzero=nonzero)


def _registered_core(ring, part) -> bool:
    """Strip squares and already-known primes off `part`, then try to
    register what is left; True when the whole part is now registry-smooth."""
    r = part
    root = ring.psqrt(r)
    while root is not None and root != r:
        r = root
        root = ring.psqrt(r)
    r = ring._strip_mono(r, ring.mono_content(r))
    for p in list(ring._primes):
        _, r = ring._valuation(r, p)
    if r == frozenset({0}) or len(r) <= 1:
        return True
    if len(ring.active_vars(r)) <= 1:
        return True  # univariate cores take the fast euclidean path anyway
    return ring.register_prime(r)


def _register_factors(spec: GroupSpec, c: Frac) -> bool:
    """Best-effort registration of a sampled value's irreducible cores so
    the gcd layer can peel them by trial division."""
    ring = spec.tower.ring
    ok = True
    for part in (c.num, c.den):
        if part and part != frozenset({0}):
            ok = _registered_core(ring, part) and ok
    return ok


def sample_unit(spec: GroupSpec, rng, subfield=None) -> Frac:
    """A unit of K (or of the given subfield); mostly monomials and other
    registry-friendly elements, occasionally fully general ones."""
    F = subfield if subfield is not None else spec.data.K
    basis = F.basis_elements()
    monos = [b for b in basis if b.is_polynomial() and len(b.num) == 1]
    r = rng.random()
    if monos and r < 0.55:
        u = rng.choice(monos)
        if rng.random() < 0.5:
            u = u * rng.choice(monos)
        return u
    if monos and r < 0.8 and len(monos) >= 2:
        a, b = rng.sample(monos, 2)
        u = a + b
        if u:
            _register_factors(spec, u)
            return u
    for _ in range(6):
        u = F.sample(rng, nonzero=True)
        if _register_factors(spec, u) or rng.random() < 0.05:
            return u
    return u


def _sample_space_smooth(spec: GroupSpec, rng, space: LinearSubspace,
                         tries: int = 8) -> Frac:
    """A nonzero sample whose square-free core the gcd registry accepts,
    with a small admixture of fully general elements."""
    c = None
    light = _light(spec)
    for _ in range(tries):
        if light:
            c = _sample_light(spec, rng, space.basis_elements(), True)
        else:
            c = space.sample(rng, nonzero=True)
        if _register_factors(spec, c) or rng.random() < 0.03:
            return c
    return c


def sample_cartan_atom(spec: GroupSpec, rng):
    n = spec.n
    simples = roots.simple_roots(n)
    long_n = tuple(2 * c for c in simples[-1])
    if spec.variant == "standard":
        a = rng.choice(list(simples[:-1]) + [long_n]) if n > 1 else long_n
        return CorootAtom(tuple(a), sample_unit(spec, rng))
    if spec.variant == "derived":
        if n > 1 and rng.random() < 0.5:
            return CorootAtom(tuple(rng.choice(simples[:-1])),
                              sample_unit(spec, rng))
        c = _sample_space_smooth(spec, rng, spec.v0_space())
        cden = _sample_space_smooth(spec, rng, spec.v0_space())
        return CorootRatioAtom(long_n, c, cden)
    if rng.random() < 0.5:
        c = _sample_space_smooth(spec, rng, spec.data.Vpp)
        return CorootRatioAtom((1, -1), c, spec.v1)
    c = _sample_space_smooth(spec, rng, spec.v0_space())
    return CorootRatioAtom(long_n, c, spec.v2)


def sample_word(spec: GroupSpec, rng, natoms: int):
    word = []
    for _ in range(natoms):
        r = rng.random()
        if r < 0.55:
            candidates = [a for a in roots.all_roots(spec.n)
                          if spec.n > 1 or roots.length_class(a) != SHORT]
            a = rng.choice(candidates)
            word.append(RootAtom(tuple(a), sample_root_coeff(spec, rng, a)))
        elif r < 0.75:
            word.append(sample_cartan_atom(spec, rng))
        else:
            word.append(ReflectionAtom(rng.randint(1, spec.n)))
    return word


def check_mu_injectivity(spec: GroupSpec, samples: int, seed: int) -> CheckReport:
    """Distinct b-ordered coefficient tuples evaluate to distinct matrices,
    and the splitting (c, c') -> c^2 + c' is injective on V x V'."""
    rep = CheckReport("mu_injectivity", seed, samples)
    rng = random.Random(seed)
    order = roots.positive_roots_in_order(spec.n)
    seen = {}
    for _ in range(samples):
        tup = tuple((a, sample_root_coeff(spec, rng, a)) for a in order)
        mat = spec.model.identity()
        for a, c in tup:
            if c:
                mat = mat * spec.model.root_element(a, c)
        key = mat
        if key in seen and seen[key] != tup:
            rep.record(False, {"collision": [str(tup), str(seen[key])]})
        else:
            seen[key] = tup
            rep.record(True)
    V, Vp = spec.derived.V, spec.data.Vp
    for _ in range(samples):
        c, cp = V.sample(rng), Vp.sample(rng)
        d, dp = V.sample(rng), Vp.sample(rng)
        lhs = c.square() + cp
        rhs = d.square() + dp
        if (c, cp) == (d, dp):
            rep.record(lhs == rhs, "equal pairs must agree")
        else:
            rep.record(lhs != rhs,
                       {"splitting collision": [spec.tower.fmt(x)
                                                for x in (c, cp, d, dp)]})
    return rep


def check_bn_axioms(spec: GroupSpec, samples: int, seed: int) -> CheckReport:
    """Sampled instances of BN2, BN4, BN5, the saturation identity, and
    triviality of the pi-kernel."""
    rep = CheckReport("bn_axioms", seed, samples)
    rng = random.Random(seed)
    m = spec.model
    n = spec.n
    one = spec.tower.one

    def sample_b():
        # a Borel element: Cartan part times positive unipotent word
        mat = atom_matrix(spec, sample_cartan_atom(spec, rng))
        for a in roots.positive_roots_in_order(n):
            if rng.random() < 0.4:
                c = sample_root_coeff(spec, rng, a)
                if c:
                    mat = mat * m.root_element(a, c)
        return mat

    for _ in range(samples):
        # BN2: N normalizes B cap N = C
        c_mat = atom_matrix(spec, sample_cartan_atom(spec, rng))
        w = Weyl.from_word(n, [rng.randint(1, n) for _ in range(rng.randint(0, 4))])
        nrm = m.weyl_rep(w) * atom_matrix(spec, sample_cartan_atom(spec, rng))
        conj = nrm * c_mat * nrm.inverse()
        diag_ok = all(
            not conj.rows[i][j]
            for i in range(m.size) for j in range(m.size) if i != j)
        coords = [conj.rows[m.e(i)][m.e(i)] for i in range(1, n + 1)]
        k_ok = all(spec.data.K.contains(c) for c in coords)
        rep.record(diag_ok and k_ok, {"bn2": conj.serialize()})

        # BN4: s_i B s_w  inside  B s_i s_w B  union  B s_w B
        i = rng.randint(1, n)
        b = sample_b()
        x = m.simple_reflection(i) * b * m.weyl_rep(w)
        cell = bruhat_cell(spec, m.pi(x))
        si_w = Weyl.simple(n, i) * w
        rep.record(cell in (w, si_w), {"bn4": (str(w), i, str(cell))})

        # BN5: s_i B s_i != B, witnessed by a simple root element
        a_i = roots.simple_roots(n)[i - 1]
        t = sample_root_coeff(spec, rng, a_i, nonzero=True)
        xi = m.simple_reflection(i) * m.root_element(a_i, t) * m.simple_reflection(i)
        cell = bruhat_cell(spec, m.pi(xi))
        rep.record(not cell.is_identity(), {"bn5": (i, str(cell))})

        # saturation: C sits inside every s_w B s_w^{-1}; a Borel element
        # with unipotent part escapes under w0
        conj0 = m.weyl_rep(w) * c_mat * m.weyl_rep_inverse(w)
        in_b = bruhat_cell(spec, m.pi(conj0)).is_identity()
        rep.record(in_b, {"saturation: torus conjugate left B": str(w)})
        u_atom = roots.unit(n, n)
        tvs = sample_root_coeff(spec, rng, u_atom, nonzero=True)
        b_u = c_mat * m.root_element(u_atom, tvs)
        w0 = Weyl.longest(n)
        esc = m.weyl_rep(w0) * b_u * m.weyl_rep_inverse(w0)
        lower = any(
            esc.rows[m.flag[i]][m.flag[j]]
            for i in range(m.size) for j in range(m.size) if i > j)
        rep.record(lower, "w0-conjugate of a nontrivial unipotent must leave B")

        # pi-kernel: y_a(c) x_{2a}(c^2) projects to 1 but is not in the group
        cvs = spec.derived.V.sample(rng, nonzero=True)
        ker = (m.root_element(u_atom, cvs) *
               m.root_element(roots.unit(n, n, 2), cvs.square()))
        assert m.pi(ker).is_identity()
        res = membership(spec, ker)
        rep.record(res.status == "no", {"pi-kernel leak": res.status})
    return rep


def check_levi_containment(spec: GroupSpec, seed: int = 0) -> CheckReport:
    """Membership of the symplectic Levi's generators (k-coefficients), and
    of the odd orthogonal group's generators when additionally 1 in V."""
    rep = CheckReport("levi_containment", seed, 0)
    if not spec.derived.one_in_Vp:
        raise PreconditionNotNormalized("1 must lie in V' (normalize first)")
    if spec.variant == "rank2" and not spec.derived.one_in_Vpp:
        raise PreconditionNotNormalized("1 must lie in V'' for the rank-2 Levi")
    rng = random.Random(seed)
    m = spec.model
    n = spec.n
    k = base_field(spec.tower)
    simples = roots.simple_roots(n)
    long_n = tuple(2 * c for c in simples[-1])
    gens = []
    for _ in range(4):
        t = sample_k(spec.tower, rng)
        for a in simples[:-1]:
            gens.append(("short", m.root_element(tuple(a), t)))
        for a in (long_n, tuple(-c for c in long_n)):
            gens.append(("long", m.root_element(a, t)))
    for i in range(1, n + 1):
        gens.append((f"s_{i}", m.simple_reflection(i)))
    for name, mat in gens:
        res = membership(spec, mat)
        rep.record(res.status == "yes", {name: res.reason or res.status})
    if spec.derived.one_in_V:
        for _ in range(4):
            t = sample_k(spec.tower, rng)
            mat = m.root_element(roots.unit(n, n), t)
            res = membership(spec, mat)
            rep.record(res.status == "yes", {"very_short": res.reason or res.status})
    else:
        rep.notes.append("M-generator check skipped: 1 not in V")
    return rep


def check_conjugation_covariance(spec: GroupSpec, samples: int, seed: int) -> CheckReport:
    """Conjugating every generator by h(lambda) lands in the group built
    from (K/k, lam^2 V2, lam^2 V'), and lambda = sqrt(v) for v in V' puts 1
    into the new V'."""
    rep = CheckReport("conjugation_covariance", seed, samples)
    rng = random.Random(seed)
    m = spec.model
    for _ in range(samples):
        lam = spec.derived.E.sample(rng, nonzero=True)
        new_spec = conjugate_by_h_lambda(spec, lam)
        hmat = m.h_scaling(lam)
        hinv = m.h_scaling(lam.inv())
        for word in generator_words(spec):
            g = evaluate(spec, word)
            conj = hmat * g * hinv
            res = membership(new_spec, conj)
            rep.record(res.status in ("yes", "undecided_cartan"),
                       {"generator": word, "status": res.status,
                        "reason": res.reason})
    # the normalization route: lambda = sqrt(v), v nonzero in V'
    v = spec.data.Vp.sample(rng, nonzero=True)
    if spec.tower.has_sqrt(v):
        lam = spec.tower.sqrt(v)
        new_spec = conjugate_by_h_lambda(spec, lam)
        rep.record(new_spec.data.Vp.contains(spec.tower.one),
                   "1 must lie in sqrt(v)-conjugated V'")
    else:
        rep.notes.append("sampled v had no square root in the tower")
    return rep
