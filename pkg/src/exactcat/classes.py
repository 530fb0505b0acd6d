"""Two conflation classes decided by exhaustive subobject search.

A conflation is in class S when some subobject of its first term produces,
by taking quotients, a grid whose middle column is covariantly hom-exact
for the subcategory and whose bottom row is contravariantly hom-exact;
class T is the dual, driven by a quotient of the last term.  The unknown
subobject determines the entire grid by quotients, so searching all
subobjects of the first term decides membership outright within the
enumeration bound; that completeness argument is what turns the diagram
condition into a decision procedure.

The crosscheck harness ties the classes to the quotient's abelianness:
the subcategory is self-orthogonal for class S over a bounded universe of
extensions exactly when the bounded abelianness sweep passes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .approx import AddSubcat, is_pseudo_cluster_tilting
from .category import (
    Category,
    Conflation,
    Subcategory,
    conflation_split,
    solve_postcompose,
    solve_precompose_pair,
)
from .quotient import VerifyReport, verify_abelian


@dataclass
class ClassWitness:
    """The reducing subobject/quotient with the two derived conflations."""

    kind: str  # "S" or "T"
    reducer: object  # the subobject inclusion (S) or test quotient kernel inclusion (T)
    column: Conflation
    row: Conflation
    grid: dict

    def validate(self, sub: Subcategory) -> None:
        cat = sub.cat
        cat.check_conflation(self.column)
        cat.check_conflation(self.row)
        for name, (lhs, rhs) in self.grid.items():
            if not cat.mor_eq(lhs, rhs):
                raise AssertionError(f"witness grid square {name} does not commute")
        if self.kind == "S":
            assert sub.is_hom_exact(self.column, "covariant")
            assert sub.is_hom_exact(self.row, "contravariant")
        else:
            assert sub.is_hom_exact(self.row, "covariant")
            assert sub.is_hom_exact(self.column, "contravariant")


@dataclass
class ClassSearch:
    member: Optional[ClassWitness]
    examined: list[tuple[str, bool, bool]] = field(default_factory=list)

    @property
    def is_member(self) -> bool:
        return self.member is not None


def in_class_s(s: Conflation, sub: Subcategory, bound: int = 8) -> ClassSearch:
    """Search all subobjects of the first term for a reducing grid.

    Absence is a decision, not a heuristic: every membership diagram is
    generated by such a subobject.
    """
    cat = sub.cat
    s1, s2, s3 = s.terms(cat)
    a, b = s.incl, s.defl
    result = ClassSearch(member=None)
    for u in cat.enumerate_subobjects(s1, bound):
        au = cat.compose(a, u)
        m1_obj, c1 = cat.cokernel(u)
        m2_obj, c2 = cat.cokernel(au)
        column = Conflation(au, c2)
        m = solve_postcompose(cat, c1, cat.compose(c2, a))
        n = solve_postcompose(cat, c2, b)
        assert m is not None and n is not None
        row = Conflation(m, n)
        cat.check_conflation(row)
        col_ok = sub.is_hom_exact(column, "covariant")
        row_ok = sub.is_hom_exact(row, "contravariant")
        result.examined.append((cat.obj_label(cat.src(u)), col_ok, row_ok))
        if col_ok and row_ok:
            witness = ClassWitness(
                kind="S",
                reducer=u,
                column=column,
                row=row,
                grid={
                    "subobject-killed-by-deflation": (cat.compose(b, au), cat.zero_mor(cat.src(u), s3)),
                    "first-quotient-square": (cat.compose(m, c1), cat.compose(c2, a)),
                    "second-quotient-square": (cat.compose(n, c2), b),
                },
            )
            witness.validate(sub)
            result.member = witness
            return result
    return result


def in_class_t(s: Conflation, sub: Subcategory, bound: int = 8) -> ClassSearch:
    """Dual search over quotients of the last term (via their kernels)."""
    cat = sub.cat
    t1, t2, t3 = s.terms(cat)
    a, b = s.incl, s.defl
    result = ClassSearch(member=None)
    for w in cat.enumerate_subobjects(t3, bound):
        n3_obj = cat.src(w)
        v_obj, cv = cat.cokernel(w)
        n2_obj, n_mor, q_mor = cat.pullback(b, w)
        t_mor = solve_precompose_pair(
            cat, n_mor, a, q_mor, cat.zero_mor(t1, n3_obj)
        )
        assert t_mor is not None
        row = Conflation(t_mor, q_mor)
        cat.check_conflation(row)
        column = Conflation(n_mor, cat.compose(cv, b))
        cat.check_conflation(column)
        row_ok = sub.is_hom_exact(row, "covariant")
        col_ok = sub.is_hom_exact(column, "contravariant")
        result.examined.append((cat.obj_label(v_obj), col_ok, row_ok))
        if col_ok and row_ok:
            witness = ClassWitness(
                kind="T",
                reducer=w,
                column=column,
                row=row,
                grid={
                    "kernel-into-middle": (cat.compose(n_mor, t_mor), a),
                    "pullback-square": (cat.compose(b, n_mor), cat.compose(w, q_mor)),
                    "column-vanishing": (
                        cat.compose(column.defl, n_mor),
                        cat.zero_mor(n2_obj, v_obj),
                    ),
                },
            )
            witness.validate(sub)
            result.member = witness
            return result
    return result


def hom_exactness_sufficient(s: Conflation, sub: Subcategory) -> tuple[bool, bool]:
    """Covariant/contravariant hom-exactness verdicts for the conflation.

    Either one forces membership in both classes; the crosscheck below
    uses this as an oracle against the searches.
    """
    return sub.is_hom_exact(s, "covariant"), sub.is_hom_exact(s, "contravariant")


def crosscheck_sufficiency(s: Conflation, sub: Subcategory, bound: int = 8) -> None:
    cov, contra = hom_exactness_sufficient(s, sub)
    if cov or contra:
        if not in_class_s(s, sub, bound).is_member:
            raise AssertionError("hom-exact conflation missing from class S")
        if not in_class_t(s, sub, bound).is_member:
            raise AssertionError("hom-exact conflation missing from class T")


@dataclass
class CrosscheckReport:
    self_orthogonal_wrt_s: bool
    abelian: VerifyReport
    consistent: bool
    conflations_examined: int
    in_subcat_pairs: int
    nonsplit_members: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.consistent and not self.failures


def abelianness_crosscheck(
    sub: Subcategory,
    sample: Sequence,
    bound: int = 5,
    subobject_bound: int = 8,
    cap: int = 4096,
    seed: Optional[int] = None,
) -> CrosscheckReport:
    """Self-orthogonality w.r.t. class S over bounded extensions vs abelianness.

    Verdict A: every enumerated conflation between bounded subcategory
    objects that lies in class S splits.  Verdict B: the bounded
    regular-implies-iso sweep passes.  The two must agree.
    """
    cat = sub.cat
    universe = sub.sample_objects(bound)
    verdict_a = True
    examined = 0
    pairs = 0
    nonsplit_members: list[str] = []
    failures: list[str] = []
    for z in universe:
        for x in universe:
            if cat.obj_dim(z) + cat.obj_dim(x) > bound:
                continue
            pairs += 1
            for s in cat.enumerate_extensions(z, x, cap):
                examined += 1
                if not (sub.contains(cat.src(s.incl)) and sub.contains(cat.dst(s.defl))):
                    continue
                if conflation_split(cat, s) is not None:
                    continue
                search = in_class_s(s, sub, subobject_bound)
                if search.is_member:
                    verdict_a = False
                    nonsplit_members.append(
                        f"nonsplit class-S conflation with subcategory ends: "
                        f"{cat.obj_label(x)} -> {cat.obj_label(z)}"
                    )
    abelian = verify_abelian(sub, sample, cap=cap, seed=seed)
    consistent = verdict_a == abelian.passed
    if not consistent:
        failures.append(
            f"class-S self-orthogonality ({verdict_a}) disagrees with abelianness ({abelian.passed})"
        )
    return CrosscheckReport(
        self_orthogonal_wrt_s=verdict_a,
        abelian=abelian,
        consistent=consistent,
        conflations_examined=examined,
        in_subcat_pairs=pairs,
        nonsplit_members=nonsplit_members,
        failures=failures,
    )


@dataclass
class RandomSearchReport:
    counterexample_found: bool
    tried: int
    detail: str


def random_crosscheck_search(
    cat: Category,
    candidate_objects: Sequence,
    sample: Sequence,
    tries: int = 20,
    seed: int = 0,
    cap: int = 4096,
) -> RandomSearchReport:
    """Randomized hunt for a pseudo-cluster-tilting subcategory with
    non-abelian quotient; a negative outcome is reported as such, never as
    a theorem."""
    rng = np.random.default_rng(seed)
    pool = list(candidate_objects)
    tried = 0
    for _ in range(tries):
        if not pool:
            break
        k = int(rng.integers(1, min(len(pool), 4) + 1))
        idx = sorted(rng.choice(len(pool), size=k, replace=False).tolist())
        gens = [pool[i] for i in idx]
        sub = AddSubcat(cat, gens, label="R")
        pct = is_pseudo_cluster_tilting(sub, sample)
        if not pct.passed:
            continue
        tried += 1
        verdict = verify_abelian(sub, sample, cap=cap, seed=seed)
        if not verdict.passed:
            return RandomSearchReport(
                counterexample_found=True,
                tried=tried,
                detail=f"non-abelian quotient for generators {[cat.obj_label(g) for g in gens]}",
            )
    return RandomSearchReport(
        counterexample_found=False,
        tried=tried,
        detail=f"no counterexample found ({tried} pseudo-cluster-tilting candidates tried)",
    )
