"""Additive subcategories add(G) and their approximation theory.

A subcategory is presented by finitely many generators and is implicitly
closed under finite sums and summands.  The factorization ideal, precovers
and preenvelopes, the two conflation conditions (a precover deflation with
kernel in the subcategory, dually a preenvelope inflation with cokernel in
it), pseudo-cluster-tilting verdicts and self-orthogonality tests all live
here and are generic over the host category.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from .category import (
    Category,
    ConditionError,
    Conflation,
    Subcategory,
    conflation_split,
    hom_exact,
    span_basis,
)


@dataclass
class IdealWitness:
    """A factorization f = left o right through an object of the subcategory."""

    through: Any
    left: Any
    right: Any


class AddSubcat(Subcategory):
    """add(G) for a finite generator list G_1,...,G_k of any host category."""

    def __init__(self, cat: Category, generators: Sequence, label: str = "P"):
        self.cat = cat
        self.generators = list(generators)
        self.label = label
        sums = self.generators if self.generators else [cat.zero_obj()]
        self.sum, self._sum_injs, self._sum_projs = cat.direct_sum(sums)
        self._ideal_cache: dict = {}
        self._precover_cache: dict = {}
        self._preenvelope_cache: dict = {}
        self._down_cache: dict = {}
        self._up_cache: dict = {}

    @property
    def is_trivial(self) -> bool:
        return not self.generators

    # -- approximations ------------------------------------------------------
    def precover(self, x):
        """Canonical evaluation: one generator copy per Hom(G_i, x) basis element.

        Every morphism from an object of add(G) to x factors through it, so
        it is a precover; it is an evaluation of the full hom-space basis,
        with the summands each map actually uses.
        """
        ck = self.cat.obj_key(x)
        cached = self._precover_cache.get(ck)
        if cached is not None:
            return cached
        cat = self.cat
        pieces, mors = [], []
        for g in self.generators:
            for h in cat.hom_basis(g, x):
                pieces.append(g)
                mors.append(h)
        if not pieces:
            beta = cat.zero_mor(cat.zero_obj(), x)
        else:
            power, injs, projs = cat.direct_sum(pieces)
            beta = cat.costack(mors, power, projs)
        self._precover_cache[ck] = beta
        return beta

    def preenvelope(self, x):
        """Canonical coevaluation: one generator copy per Hom(x, G_i) basis element."""
        ck = self.cat.obj_key(x)
        cached = self._preenvelope_cache.get(ck)
        if cached is not None:
            return cached
        cat = self.cat
        pieces, mors = [], []
        for g in self.generators:
            for h in cat.hom_basis(x, g):
                pieces.append(g)
                mors.append(h)
        if not pieces:
            alpha = cat.zero_mor(x, cat.zero_obj())
        else:
            power, injs, projs = cat.direct_sum(pieces)
            alpha = cat.stack(mors, power, injs)
        self._preenvelope_cache[ck] = alpha
        return alpha

    # -- ideal -------------------------------------------------------------
    def factors_through(self, f) -> Optional[IdealWitness]:
        """A witness f = left o right through a sum of generators, or None.

        f factors through add(G) iff it factors through the canonical
        precover of its target (the precover property routes any other
        factorization through it).
        """
        cat = self.cat
        from .category import solve_precompose

        beta = self.precover(cat.dst(f))
        right = solve_precompose(cat, beta, f)
        if right is None:
            return None
        return IdealWitness(cat.src(beta), beta, right)

    def ideal_basis(self, x, y) -> list:
        """Basis of the morphisms x -> y factoring through add(G)."""
        cat = self.cat
        ck = (cat.obj_key(x), cat.obj_key(y))
        cached = self._ideal_cache.get(ck)
        if cached is not None:
            return cached
        beta = self.precover(y)
        spanning = [cat.compose(beta, u) for u in cat.hom_basis(x, cat.src(beta))]
        basis = span_basis(cat, spanning, x, y)
        self._ideal_cache[ck] = basis
        return basis

    def ideal_spanning(self, x, y) -> list:
        """A (possibly redundant) spanning set of the ideal, cheap to build."""
        cat = self.cat
        beta = self.precover(y)
        return [cat.compose(beta, u) for u in cat.hom_basis(x, cat.src(beta))]

    def contains(self, x) -> bool:
        """x in add(G), i.e. the canonical precover of x is a split deflation."""
        if self.cat.is_zero_obj(x):
            return True
        from .category import solve_precompose

        cat = self.cat
        return solve_precompose(cat, self.precover(x), cat.identity(x)) is not None

    def is_ideal_member(self, f) -> bool:
        from .category import solve_precompose

        cat = self.cat
        return solve_precompose(cat, self.precover(cat.dst(f)), f) is not None

    def precover_conflation(self, x) -> tuple[Optional[Conflation], Optional[str]]:
        """0 -> K -> G^n -> x -> 0 with K in add(G), when it exists.

        Decided on the canonical precover: if any epi precover exists the
        canonical one is epi (the epi factors through it), and the kernels
        of any two epi precovers agree up to add(G)-summands, so testing
        the canonical kernel decides the condition.
        """
        ck = self.cat.obj_key(x)
        if ck in self._down_cache:
            return self._down_cache[ck]
        cat = self.cat
        beta = self.precover(x)
        result: tuple[Optional[Conflation], Optional[str]]
        if not cat.is_deflation(beta):
            result = (None, f"canonical precover of {cat.obj_label(x)} is not a deflation")
        else:
            k_obj, k_mor = cat.kernel(beta)
            if not self.contains(k_obj):
                result = (None, f"kernel of the canonical precover of {cat.obj_label(x)} is not in add({self.label})")
            else:
                result = (Conflation(k_mor, beta), None)
        self._down_cache[ck] = result
        return result

    def preenvelope_conflation(self, x) -> tuple[Optional[Conflation], Optional[str]]:
        """0 -> x -> G^m -> C -> 0 with C in add(G), when it exists."""
        ck = self.cat.obj_key(x)
        if ck in self._up_cache:
            return self._up_cache[ck]
        cat = self.cat
        alpha = self.preenvelope(x)
        result: tuple[Optional[Conflation], Optional[str]]
        if not cat.is_inflation(alpha):
            result = (None, f"canonical preenvelope of {cat.obj_label(x)} is not an inflation")
        else:
            c_obj, c_mor = cat.cokernel(alpha)
            if not self.contains(c_obj):
                result = (None, f"cokernel of the canonical preenvelope of {cat.obj_label(x)} is not in add({self.label})")
            else:
                result = (Conflation(alpha, c_mor), None)
        self._up_cache[ck] = result
        return result

    def is_hom_exact(self, c: Conflation, side: str) -> bool:
        # testing against the generator sum covers every object of add(G)
        return hom_exact(self.cat, c, self.sum, side)

    def sample_objects(self, bound: int) -> list:
        """Multiset sums of generators with total dimension <= bound."""
        cat = self.cat
        gens = [g for g in self.generators if cat.obj_dim(g) <= bound]
        out = [cat.zero_obj()]
        stack = [([], 0, 0)]
        while stack:
            multiset, start, dim = stack.pop()
            for i in range(start, len(gens)):
                d = dim + cat.obj_dim(gens[i])
                if d <= bound:
                    ms = multiset + [i]
                    out.append(cat.direct_sum([gens[j] for j in ms])[0])
                    stack.append((ms, i, d))
        seen, uniq = set(), []
        for o in out:
            k = cat.obj_key(o)
            if k not in seen:
                seen.add(k)
                uniq.append(o)
        uniq.sort(key=lambda o: (cat.obj_dim(o), cat.obj_key(o)))
        return uniq


# ---------------------------------------------------------------------------
# module-level operations (generic over Subcategory)
# ---------------------------------------------------------------------------

def ideal_basis(x, y, sub: Subcategory) -> list:
    return sub.ideal_basis(x, y)


def factors_through(f, sub: AddSubcat) -> Optional[IdealWitness]:
    return sub.factors_through(f)


def in_add(x, sub: Subcategory) -> bool:
    return sub.contains(x)


def precover(x, sub: Subcategory):
    return sub.precover(x)


def preenvelope(x, sub: Subcategory):
    return sub.preenvelope(x)


def condition_down(x, sub: Subcategory) -> Optional[Conflation]:
    return sub.precover_conflation(x)[0]


def condition_up(x, sub: Subcategory) -> Optional[Conflation]:
    return sub.preenvelope_conflation(x)[0]


def extend_to_inflation(f, sub: Subcategory) -> tuple[Conflation, Any]:
    """Conflation 0 -> X -> Y (+) Q -> Z -> 0 around f: X -> Y, Hom(-,sub)-exact.

    Requires the preenvelope conflation at X; returns the conflation and the
    canonical injection Y -> Y (+) Q.
    """
    cat = sub.cat
    x, y = cat.src(f), cat.dst(f)
    up, reason = sub.preenvelope_conflation(x)
    if up is None:
        raise ConditionError("preenvelope-conflation", cat.obj_label(x), reason or "")
    alpha = up.incl
    q0 = cat.dst(alpha)
    total, (iy, iq), _ = _sum2(cat, y, q0)
    m = cat.add(cat.compose(iy, f), cat.neg(cat.compose(iq, alpha)))
    assert cat.is_inflation(m)
    z_obj, c = cat.cokernel(m)
    confl = Conflation(m, c)
    cat.check_conflation(confl)
    assert sub.is_hom_exact(confl, "contravariant")
    return confl, iy


def extend_to_deflation(f, sub: Subcategory) -> tuple[Conflation, Any]:
    """Conflation 0 -> K -> Y (+) P -> Z -> 0 around f: Y -> Z, Hom(sub,-)-exact."""
    cat = sub.cat
    y, z = cat.src(f), cat.dst(f)
    down, reason = sub.precover_conflation(z)
    if down is None:
        raise ConditionError("precover-conflation", cat.obj_label(z), reason or "")
    beta = down.defl
    p0 = cat.src(beta)
    total, (iy, ip), (py, pp) = _sum2(cat, y, p0)
    d = cat.add(cat.compose(f, py), cat.compose(beta, pp))
    assert cat.is_deflation(d)
    k_obj, k = cat.kernel(d)
    confl = Conflation(k, d)
    cat.check_conflation(confl)
    assert sub.is_hom_exact(confl, "covariant")
    return confl, iy


def _sum2(cat: Category, a, b):
    total, injs, projs = cat.direct_sum([a, b])
    return total, injs, projs


@dataclass
class ConditionReport:
    """Per-object verdicts for the two conflation conditions on a testset."""

    sub_label: str
    passed: bool
    testset_labels: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)
    note: str = (
        "verdict relative to the listed testset; maximality of the subcategory "
        "is not verified"
    )


def is_pseudo_cluster_tilting(sub: Subcategory, testset: Sequence) -> ConditionReport:
    """Both conflation conditions at every object of the testset.

    The verdict is testset-relative: the host category has infinitely many
    objects, so this is evidence at the stated bound, not a universal claim.
    """
    cat = sub.cat
    report = ConditionReport(sub_label=sub.label, passed=True)
    for x in testset:
        lab = cat.obj_label(x)
        report.testset_labels.append(lab)
        down, down_reason = sub.precover_conflation(x)
        up, up_reason = sub.preenvelope_conflation(x)
        if down is None:
            report.passed = False
            report.failures.append(f"{lab}: precover condition: {down_reason}")
        if up is None:
            report.passed = False
            report.failures.append(f"{lab}: preenvelope condition: {up_reason}")
        if down is not None and up is not None:
            report.witnesses[lab] = (down, up)
    return report


@dataclass
class OrthogonalityReport:
    passed: bool
    checked: int
    witness: Optional[Conflation] = None


def is_self_orthogonal(sub: Subcategory, conflations: Sequence[Conflation]) -> OrthogonalityReport:
    """Does every listed conflation with both end terms in the subcategory split?"""
    cat = sub.cat
    checked = 0
    for c in conflations:
        a, _, z = c.terms(cat)
        if not (sub.contains(a) and sub.contains(z)):
            continue
        checked += 1
        if conflation_split(cat, c) is None:
            return OrthogonalityReport(passed=False, checked=checked, witness=c)
    return OrthogonalityReport(passed=True, checked=checked)
