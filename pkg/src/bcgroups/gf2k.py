"""Brown's modular gcd for GF(2) multivariate polynomials.

Fraction-free and PRS gcd variants blow up over GF(2) (frequent leading-term
cancellations, no coefficient growth to exploit), so genuinely multivariate
gcds are computed the way production systems do it: evaluate all but one
variable at points of GF(2^16), take univariate gcds there, interpolate the
coefficients back (scaled by the gcd of the leading coefficients so the
interpolant is a polynomial), and certify the candidate by trial division.
Las Vegas: an unlucky grid is detected and resampled; a certified answer is
exact.
"""

from __future__ import annotations

import random

from .gf2 import MASK, PONE, PZERO, SHIFT

_ORDER = (1 << 16) - 1
# x^16 + x^5 + x^3 + x^2 + 1, primitive over GF(2) (checked at table build)
_MODULUS = (1 << 16) | 0b101101

_EXP: list = []
_LOG: list = []


def _build_tables() -> None:
    exp = [0] * (_ORDER + 1)
    log = [0] * (1 << 16)
    v = 1
    for i in range(_ORDER):
        exp[i] = v
        log[v] = i
        v <<= 1
        if v >> 16:
            v ^= _MODULUS
    exp[_ORDER] = 1
    if v != 1:
        raise AssertionError("modulus is not primitive")
    for d in (3, 5, 17, 257):
        if exp[_ORDER // d] == 1:
            raise AssertionError("modulus is not primitive")
    _EXP.extend(exp)
    _LOG.extend(log)


def _gmul(a: int, b: int) -> int:
    if not a or not b:
        return 0
    return _EXP[(_LOG[a] + _LOG[b]) % _ORDER]


def _ginv(a: int) -> int:
    return _EXP[(_ORDER - _LOG[a]) % _ORDER]


def _gpow(a: int, e: int) -> int:
    if e == 0:
        return 1
    return _EXP[(_LOG[a] * e) % _ORDER]


# -- univariate polynomials over GF(2^16): dict degree -> nonzero coeff ----


def _uni_mod(a: dict, b: dict) -> dict:
    db = max(b)
    ilcb = _ginv(b[db])
    r = dict(a)
    while r:
        dr = max(r)
        if dr < db:
            break
        q = _gmul(r.pop(dr), ilcb)
        for d, c in b.items():
            if d == db:
                continue
            nd = d + dr - db
            nc = r.get(nd, 0) ^ _gmul(q, c)
            if nc:
                r[nd] = nc
            else:
                r.pop(nd, None)
    return r


def _uni_gcd_monic(a: dict, b: dict) -> dict:
    while b:
        a, b = b, _uni_mod(a, b)
    lc = _ginv(a[max(a)])
    return {d: _gmul(c, lc) for d, c in a.items()}


def _newton_interp(xs: list, ys: list) -> dict:
    """Interpolating polynomial through (xs, ys) over GF(2^16), as a dict
    degree -> coeff.  Addition is xor in characteristic 2."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            num = coef[i] ^ coef[i - 1]
            den = xs[i] ^ xs[i - j]
            coef[i] = _gmul(num, _ginv(den))
    poly = {0: coef[n - 1]} if coef[n - 1] else {}
    for i in range(n - 2, -1, -1):
        shifted = {d + 1: c for d, c in poly.items()}
        for d, c in poly.items():
            t = _gmul(c, xs[i])
            nc = shifted.get(d, 0) ^ t
            if nc:
                shifted[d] = nc
            else:
                shifted.pop(d, None)
        if coef[i]:
            nc = shifted.get(0, 0) ^ coef[i]
            if nc:
                shifted[0] = nc
            else:
                shifted.pop(0, None)
        poly = shifted
    return poly


# -- fast divisibility rejection --------------------------------------------


def specialize_cache(ring, big: frozenset):
    """Specialize all variables but the highest-degree one of `big` at fixed
    nonzero GF(2^16) points; returns (var, beta, univariate image)."""
    if not _EXP:
        _build_tables()
    active = ring.active_vars(big)
    var = max(active, key=lambda v: ring._maxdeg(big, v)) if active else 0
    beta = {}
    pt = 7
    for v in range(ring.nvars):
        if v != var:
            beta[v] = pt
            pt = (pt * 31 + 11) % _ORDER or 3
    others = tuple(j for j in range(ring.nvars) if j != var)
    img = _eval_to_uni(ring, big, var, others, beta)
    return (var, others, beta, img)


def maybe_divides(ring, cache, p: frozenset) -> bool:
    """False only when p certainly does not divide the cached polynomial
    (nonzero specialized remainder); True is inconclusive."""
    var, others, beta, img = cache
    pim = _eval_to_uni(ring, p, var, others, beta)
    if not pim:
        return True  # the specialization killed p: no information
    if not img:
        return True
    if max(pim) > max(img):
        return False
    return not _uni_mod(img, pim)


# -- Brown gcd -------------------------------------------------------------


def _eval_to_uni(ring, P: frozenset, var: int, others: tuple, beta: dict) -> dict:
    """Evaluate the other variables at the field points beta, keeping `var`
    symbolic; returns a univariate dict."""
    sv = SHIFT * var
    logs = {j: _LOG[beta[j]] for j in others}
    out: dict = {}
    for m in P:
        d = (m >> sv) & MASK
        acc = 0
        for j in others:
            e = (m >> (SHIFT * j)) & MASK
            if e:
                acc += logs[j] * e
        c = _EXP[acc % _ORDER]
        nc = out.get(d, 0) ^ c
        if nc:
            out[d] = nc
        else:
            out.pop(d, None)
    return out


def _eval_scalar(ring, P: frozenset, beta: dict) -> int:
    out = 0
    logs = {j: _LOG[v] for j, v in beta.items()}
    for m in P:
        acc = 0
        for j, lg in logs.items():
            e = (m >> (SHIFT * j)) & MASK
            if e:
                acc += lg * e
        out ^= _EXP[acc % _ORDER]
    return out


def _interp_grid(vars_: tuple, grids: dict, get) -> dict:
    """Tensor Newton interpolation: get(idx tuple) -> scalar value at the
    grid point; returns dict packed-monomial -> coeff over the vars_."""
    v = vars_[0]
    pts = grids[v]
    sv = SHIFT * v
    if len(vars_) == 1:
        ys = [get((i,)) for i in range(len(pts))]
        return {d << sv: c for d, c in _newton_interp(pts, ys).items()}
    subs = []
    for i in range(len(pts)):
        subs.append(
            _interp_grid(vars_[1:], grids, lambda idx, i=i: get((i,) + idx))
        )
    monos = set()
    for sp in subs:
        monos.update(sp)
    out: dict = {}
    for mono in monos:
        ys = [sp.get(mono, 0) for sp in subs]
        for d, c in _newton_interp(pts, ys).items():
            key = mono + (d << sv)
            nc = out.get(key, 0) ^ c
            if nc:
                out[key] = nc
            else:
                out.pop(key, None)
    return out


def _probe_degree(ring, A: frozenset, B: frozenset, var: int, rng):
    """Certified upper bound for the gcd's degree in `var`: specialize the
    other variables, and if both leading coefficients survive (so the gcd's
    image keeps full degree), the univariate gcd degree bounds it.  None if
    no lucky point was found."""
    da = ring._maxdeg(A, var)
    db = ring._maxdeg(B, var)
    others = tuple(j for j in range(ring.nvars) if j != var)
    for _ in range(4):
        beta = {j: rng.randrange(1, _ORDER + 1) for j in others}
        a1 = _eval_to_uni(ring, A, var, others, beta)
        b1 = _eval_to_uni(ring, B, var, others, beta)
        if a1 and b1 and max(a1) == da and max(b1) == db:
            return max(_uni_gcd_monic(a1, b1))
    return None


def brown_gcd(ring, A: frozenset, B: frozenset) -> frozenset:
    """gcd of mono-stripped GF(2) polynomials with >= 2 active variables."""
    if not _EXP:
        _build_tables()
    actA = set(ring.active_vars(A))
    actB = set(ring.active_vars(B))
    # a variable seen on one side only cannot appear in the gcd: replace
    # that side by its content with respect to the extra variable
    while actA != actB:
        if actA - actB:
            v = (actA - actB).pop()
            cont, _ = ring._content_pp(ring._coeff_dict(A, v))
            A = cont
            actA = set(ring.active_vars(A))
        else:
            v = (actB - actA).pop()
            cont, _ = ring._content_pp(ring._coeff_dict(B, v))
            B = cont
            actB = set(ring.active_vars(B))
        if not actA & actB:
            return PONE
        single = actA | actB
        if len(single) == 1:
            return ring._gcd_uni(A, B, single.pop())
    shared = sorted(actA)
    if len(shared) == 1:
        return ring._gcd_uni(A, B, shared[0])
    rng = random.Random(0x9E3779B9 ^ hash((A, B)) & 0xFFFFFFFF)
    # probe the true gcd degree variable by variable; a certified all-zero
    # profile means the inputs are coprime
    probes = {v: _probe_degree(ring, A, B, v, rng) for v in shared}
    if all(p == 0 for p in probes.values()):
        return PONE
    def probe_or_bound(v):
        p = probes[v]
        return p if p is not None else min(ring._maxdeg(A, v),
                                           ring._maxdeg(B, v))

    var = max(shared, key=probe_or_bound)
    others = tuple(j for j in shared if j != var)
    DA = ring._coeff_dict(A, var)
    DB = ring._coeff_dict(B, var)
    ca, DA = ring._content_pp(DA)
    cb, DB = ring._content_pp(DB)
    cg = ring.pgcd(ca, cb)
    ppA = _assemble(ring, DA, var)
    ppB = _assemble(ring, DB, var)
    da, db = max(DA), max(DB)
    if da == 0 or db == 0:
        return cg
    lcA, lcB = DA[da], DB[db]
    gamma = ring.pgcd(lcA, lcB)
    sizes = {}
    for j in others:
        gdeg = (ring._maxdeg(gamma, j)
                if gamma != PONE and j in ring.active_vars(gamma) else 0)
        sizes[j] = gdeg + probe_or_bound(j)
    bumps = 0
    while True:
        grids = {}
        ok = True
        for j in others:
            classical = (
                (ring._maxdeg(gamma, j)
                 if gamma != PONE and j in ring.active_vars(gamma) else 0)
                + min(ring._maxdeg(ppA, j), ring._maxdeg(ppB, j)) + 1
            )
            n = max(1, min(sizes[j] + 1 + bumps, classical))
            if n > _ORDER - 1:
                raise RuntimeError("gcd interpolation grid exhausted")
            grids[j] = rng.sample(range(1, _ORDER + 1), n)
        shape = [len(grids[j]) for j in others]
        total = 1
        for s in shape:
            total *= s
        values: dict = {}
        deg = None
        for flat in range(total):
            idx = []
            f = flat
            for s in shape:
                idx.append(f % s)
                f //= s
            idx = tuple(idx)
            beta = {j: grids[j][idx[p]] for p, j in enumerate(others)}
            a1 = _eval_to_uni(ring, ppA, var, others, beta)
            b1 = _eval_to_uni(ring, ppB, var, others, beta)
            if not a1 or not b1 or max(a1) != da or max(b1) != db:
                ok = False  # leading coefficient vanished: unlucky grid
                break
            g1 = _uni_gcd_monic(a1, b1)
            d1 = max(g1)
            if deg is None:
                deg = d1
            elif d1 != deg:
                ok = False
                break
            gb = _eval_scalar(ring, gamma, beta)
            values[idx] = {d: _gmul(c, gb) for d, c in g1.items()}
        if ok and deg == 0:
            return cg
        if ok:
            acc: set = set()
            in_gf2 = True
            sv = SHIFT * var
            for d in range(deg + 1):
                coeff = _interp_grid(
                    others, grids, lambda idx, d=d: values[idx].get(d, 0)
                )
                for mono, c in coeff.items():
                    if c == 1:
                        acc.add(mono + (d << sv))
                    elif c:
                        in_gf2 = False
                        break
                if not in_gf2:
                    break
            if in_gf2 and acc:
                H = frozenset(acc)
                cont, _ = ring._content_pp(ring._coeff_dict(H, var))
                if cont != PONE:
                    H = ring.pdivexact(H, cont)
                H = ring._strip_mono(H, ring.mono_content(H))
                try:
                    ring.pdivexact(ppA, H)
                    ring.pdivexact(ppB, H)
                    return ring.pmul(cg, H)
                except ValueError:
                    pass
        bumps += 2
        if bumps > 40:
            raise RuntimeError("gcd interpolation failed to stabilize")


def _assemble(ring, D: dict, var: int) -> frozenset:
    sv = SHIFT * var
    acc = set()
    for d, coeff in D.items():
        for m in coeff:
            acc.add(m + (d << sv))
    return frozenset(acc)
