"""Validation and derivation of the defining data (K/k, V2, V', [V'']).

The data lives in a configured tower.  `validate` checks every defining
condition individually and reports them by name (the mutation tests in the
suite rely on the names being stable); `derive` computes the objects the
group construction consumes: kK^2, K0 = k<V2 + V'>, the K-space V of square
roots, and the minimal field E = K(V).

Representability restriction (reported as the named condition
``k_in_K_squared``): the tower machinery does subspace linear algebra over
k, so K must contain k^{1/2} (every base variable rooted at least once in
K); then k is inside K^2, every K^2-subspace of K is in particular a
k-subspace, and kK^2 = K^2.  All worked data sets satisfy this.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import NoSquareRootInTower, TowerTooSmall
from .gf2 import Frac
from .tower import (FieldTower, LinearSubspace, Subfield,
                    ratio_generated_subfield, subfield_from_generators)


@dataclass(frozen=True)
class BCData:
    tower: FieldTower
    n: int
    K: Subfield
    V2: LinearSubspace
    Vp: LinearSubspace
    Vpp: Optional[LinearSubspace] = None


@dataclass
class ConditionCheck:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failed(self):
        return [c for c in self.checks if not c.ok]

    def add(self, name, ok, detail=""):
        self.checks.append(ConditionCheck(name, bool(ok), detail))

    def lines(self):
        return [
            f"[{'ok' if c.ok else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else "")
            for c in self.checks
        ]


@dataclass
class DerivedData:
    K2: Subfield          # = kK^2 under the representability restriction
    K0: Subfield
    V: LinearSubspace     # K-subspace of E, the square roots of V2
    E: Subfield
    one_in_Vp: bool
    one_in_V: bool
    one_in_Vpp: Optional[bool]


def _k_squared(data: BCData) -> Subfield:
    return subfield_from_generators(
        data.tower, [b * b for b in data.K.basis_elements()]
    )


def validate(data: BCData) -> ValidationReport:
    rep = ValidationReport()
    tower = data.tower
    rep.add("rank_positive", data.n >= 1, f"n = {data.n}")
    rep.add("K_nontrivial", data.K.degree_over_k > 1,
            f"[K:k] = {data.K.degree_over_k}")
    rep.add("k_in_K_squared", _k_in_K2(data),
            "K must contain k^(1/2) for the subspace linear algebra")
    if not rep.ok:
        return rep
    K2 = _k_squared(data)
    rep.add("V2_nonzero", not data.V2.is_zero())
    rep.add("Vp_nonzero", not data.Vp.is_zero())
    rep.add("V2_in_K", all(data.K.contains(b) for b in data.V2.basis_elements()))
    rep.add("Vp_in_K", all(data.K.contains(b) for b in data.Vp.basis_elements()))
    v2 = LinearSubspace(data.tower, K2, data.V2.gens)
    rep.add("V2_K2_subspace", v2.closed_under_scalars(),
            "V^(2) must be a K^2-subspace of K")
    vp = LinearSubspace(data.tower, K2, data.Vp.gens)
    rep.add("Vp_kK2_subspace", vp.closed_under_scalars(),
            "V' must be a kK^2-subspace of K")
    rep.add("V2_Vp_intersection_trivial",
            data.V2.intersects_trivially(data.Vp),
            "V^(2) and V' must meet in 0")
    rep.add("V2_findim", data.V2.dim_over_k < float("inf"),
            f"dim_k V^(2) = {data.V2.dim_over_k}")
    if data.n == 1:
        if rep.ok:
            K0 = ratio_generated_subfield(tower, data.V2.sum_with(data.Vp, K2))
            rep.add("K0_equals_K", K0 == data.K,
                    f"[K0:k] = {K0.degree_over_k}, [K:k] = {data.K.degree_over_k}")
        else:
            rep.add("K0_equals_K", False, "not evaluated: earlier failures")
    if data.Vpp is not None:
        rep.add("Vpp_rank2_only", data.n == 2, "V'' requires rank 2")
        if not rep.ok:
            return rep
        K0 = ratio_generated_subfield(tower, data.V2.sum_with(data.Vp, K2))
        vpp = LinearSubspace(tower, K0, data.Vpp.gens)
        rep.add("Vpp_K0_subspace", vpp.closed_under_scalars(),
                "V'' must be a K0-subspace of K")
        rep.add("Vpp_in_K",
                all(data.K.contains(b) for b in data.Vpp.basis_elements()))
        rep.add("Vpp_proper",
                data.Vpp.dim_over_k < data.K.degree_over_k,
                "V'' must be a proper subspace of K")
        if not data.Vpp.is_zero():
            kVpp = ratio_generated_subfield(tower, data.Vpp)
            rep.add("Vpp_generates_K", kVpp == data.K,
                    f"[k<V''>:k] = {kVpp.degree_over_k}")
        else:
            rep.add("Vpp_generates_K", False, "V'' is zero")
    return rep


def _k_in_K2(data: BCData) -> bool:
    # k is inside K^2 iff each base variable has a square root in K
    tower = data.tower
    for name in tower.variables:
        r = tower.base_gen(name).sqrt()
        if r is None or not data.K.contains(r):
            return False
    return True


def derive(data: BCData) -> DerivedData:
    """Derived objects; assumes validate() passed."""
    tower = data.tower
    K2 = _k_squared(data)
    K0 = ratio_generated_subfield(tower, data.V2.sum_with(data.Vp, K2))
    sqrts = []
    for b in data.V2.basis_elements():
        try:
            sqrts.append(tower.sqrt(b))
        except NoSquareRootInTower as exc:
            raise TowerTooSmall(
                f"square root of {tower.fmt(b)} is outside the configured tower"
            ) from exc
    V = LinearSubspace.scalar_span(tower, data.K, sqrts)
    E = subfield_from_generators(tower, data.K.basis_elements() + sqrts)
    one = tower.one
    return DerivedData(
        K2=K2,
        K0=K0,
        V=V,
        E=E,
        one_in_Vp=data.Vp.contains(one),
        one_in_V=V.contains(one),
        one_in_Vpp=(data.Vpp.contains(one) if data.Vpp is not None else None),
    )


def normalize_data(data: BCData, v: Frac) -> BCData:
    """The data of the h(sqrt v)-conjugate group: (K/k, v V2, v V'); needs
    v in V' nonzero and sqrt(v) inside the tower (enlargement is the
    caller's decision)."""
    if not v:
        raise ValueError("normalizing scalar must be nonzero")
    if not data.Vp.contains(v):
        raise ValueError("normalizing scalar must lie in V'")
    if not data.tower.has_sqrt(v):
        raise NoSquareRootInTower(data.tower.fmt(v))
    return BCData(
        tower=data.tower,
        n=data.n,
        K=data.K,
        V2=data.V2.scale(v),
        Vp=data.Vp.scale(v),
        Vpp=data.Vpp,
    )
