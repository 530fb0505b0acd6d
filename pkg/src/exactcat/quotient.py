"""The additive quotient of a host category by a subcategory ideal.

Morphism classes are host morphisms modulo the span of maps factoring
through the subcategory.  Kernels come from pulling back along a precover
deflation, cokernels from pushing out along a preenvelope inflation; the
engine re-verifies the universal properties instead of assuming them, and
the semi-abelian / abelian certificates sweep entire hom-spaces.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Optional, Sequence

import numpy as np

from . import fflinalg as ff
from .approx import extend_to_inflation
from .category import (
    Category,
    ConditionError,
    Subcategory,
    enumerate_hom,
    span_matrix,
)
from .fflinalg import FpMatrix

ENUM_CAP = 4096


@dataclass
class QMor:
    """A quotient-category morphism, carried by a chosen host representative."""

    sub: Subcategory
    rep: Any

    @property
    def cat(self) -> Category:
        return self.sub.cat

    @property
    def src(self):
        return self.cat.src(self.rep)

    @property
    def dst(self):
        return self.cat.dst(self.rep)


@dataclass
class QHomSpace:
    dim: int
    hom_dim: int
    ideal_dim: int
    reps: list  # host morphisms lifting a basis of the quotient space


def qhom(sub: Subcategory, x, y) -> QHomSpace:
    """Dimension and coset representatives of Hom(x,y) modulo the ideal."""
    cat = sub.cat
    hom = cat.hom_basis(x, y)
    ideal = sub.ideal_basis(x, y)
    if not hom:
        return QHomSpace(0, 0, 0, [])
    reps = []
    cur = span_matrix(cat, ideal, x, y)
    rank = cur.rank()
    ideal_dim = rank
    for h in hom:
        cand = ff.hstack([cur, FpMatrix(cat.p, cat.flatten(h).reshape(-1, 1))])
        r = cand.rank()
        if r > rank:
            reps.append(h)
            cur, rank = cand, r
    assert len(hom) == ideal_dim + len(reps)
    return QHomSpace(len(reps), len(hom), ideal_dim, reps)


def q_is_zero(f: QMor) -> bool:
    return f.sub.is_ideal_member(f.rep)


def q_equal(f: QMor, g: QMor) -> bool:
    return f.sub.is_ideal_member(f.cat.sub(f.rep, g.rep))


def _coset_projection(sub: Subcategory, x, y):
    """(hom basis, flat hom matrix, coset projection matrix), memoized on sub."""
    cache = getattr(sub, "_coset_cache", None)
    if cache is None:
        cache = {}
        setattr(sub, "_coset_cache", cache)
    cat = sub.cat
    ck = (cat.obj_key(x), cat.obj_key(y))
    hit = cache.get(ck)
    if hit is not None:
        return hit
    hom = cat.hom_basis(x, y)
    hmat = span_matrix(cat, hom, x, y)
    icoords = []
    for i in sub.ideal_spanning(x, y):
        c = ff.solve_right(hmat, FpMatrix(cat.p, cat.flatten(i).reshape(-1, 1)))
        assert c is not None
        icoords.append(c.a[:, 0])
    if icoords:
        mat = FpMatrix(cat.p, np.stack(icoords, axis=1))
    else:
        mat = FpMatrix.zeros(cat.p, len(hom), 0)
    proj, _ = ff.quotient_space(cat.p, len(hom), mat)
    result = (hom, hmat, proj)
    cache[ck] = result
    return result


def q_class_key(f: QMor) -> bytes:
    """Canonical key of the ideal coset of f (for memoizing class-invariant verdicts)."""
    cat = f.cat
    hom, hmat, proj = _coset_projection(f.sub, f.src, f.dst)
    coords = ff.solve_right(hmat, FpMatrix(cat.p, cat.flatten(f.rep).reshape(-1, 1)))
    assert coords is not None
    return (proj @ coords).key


def q_is_iso(f: QMor) -> Optional[QMor]:
    """Inverse class of f, solving g o f = id and f o g = id modulo the ideal.

    One linear system over Hom(Y,X) coordinates plus ideal coordinates at
    both endpoints.
    """
    cat, sub = f.cat, f.sub
    x, y = f.src, f.dst
    basis = cat.hom_basis(y, x)
    ix = sub.ideal_spanning(x, x)
    iy = sub.ideal_spanning(y, y)
    cols = []
    for h in basis:
        cols.append(np.concatenate([cat.flatten(cat.compose(h, f.rep)), cat.flatten(cat.compose(f.rep, h))]))
    for s in ix:
        cols.append(np.concatenate([cat.flatten(s), np.zeros(cat.flat_dim(y, y), dtype=np.int64)]))
    for t in iy:
        cols.append(np.concatenate([np.zeros(cat.flat_dim(x, x), dtype=np.int64), cat.flatten(t)]))
    rhs = np.concatenate([cat.flatten(cat.identity(x)), cat.flatten(cat.identity(y))])
    if not cols:
        if rhs.any():
            return None
        return QMor(sub, cat.zero_mor(y, x))
    sol = ff.solve_right(FpMatrix(cat.p, np.stack(cols, axis=1)), FpMatrix(cat.p, rhs.reshape(-1, 1)))
    if sol is None:
        return None
    g = cat.combine(basis, sol.a[: len(basis), 0], y, x)
    return QMor(sub, g)


@dataclass
class BlockWitness:
    """An invertible completion [[f, b], [c, d]] : X (+) P -> Y (+) Q."""

    pad_src: Any  # P, a sum of generators
    pad_dst: Any  # Q, a sum of generators
    total: Any  # the completed host morphism X(+)P -> Y(+)Q
    inverse: Any


def q_is_iso_blocksearch(f: QMor, extra_dim_cap: int = 6, combo_cap: int = 4096) -> Optional[BlockWitness]:
    """Independent iso test: search an invertible block completion of f.

    f is invertible in the quotient iff some [[f,b],[c,d]] with the pads P,Q
    in the subcategory is invertible in the host.  The pads range over
    generator multisets with matching dimension defect; (b,c,d) are fully
    enumerated.  Finding a witness is unconditionally sound; the search is
    bounded by extra_dim_cap, which is ample at desk scale.
    """
    cat, sub = f.cat, f.sub
    if not hasattr(sub, "generators"):
        raise ValueError("block search needs a finitely generated subcategory")
    x, y = f.src, f.dst
    gens = list(sub.generators)
    # multisets of generators, keyed by total dimension vector
    def all_multisets(cap):
        out = [[]]
        stack = [([], 0, 0)]
        while stack:
            ms, start, dim = stack.pop()
            for i in range(start, len(gens)):
                d = dim + cat.obj_dim(gens[i])
                if d <= cap:
                    nxt = ms + [i]
                    out.append(nxt)
                    stack.append((nxt, i, d))
        return out

    def dim_profile(obj_list):
        if not obj_list:
            return cat.dim_profile(cat.zero_obj())
        return cat.dim_profile(cat.direct_sum(obj_list)[0])

    px = cat.dim_profile(x)
    py = cat.dim_profile(y)
    q_multis: dict = {}
    for ms in all_multisets(extra_dim_cap):
        objs = [gens[i] for i in ms]
        prof = dim_profile(objs)
        q_multis.setdefault(prof, []).append(ms)
    for p_ms in sorted(all_multisets(extra_dim_cap), key=lambda ms: (sum(cat.obj_dim(gens[i]) for i in ms), ms)):
        p_objs = [gens[i] for i in p_ms]
        need = tuple(a + b - c for a, b, c in zip(px, dim_profile(p_objs), py))
        if any(v < 0 for v in need):
            continue
        for q_ms in q_multis.get(need, []):
            q_objs = [gens[i] for i in q_ms]
            w = _try_block_completion(f, p_objs, q_objs, combo_cap)
            if w is not None:
                return w
    return None


def _try_block_completion(f: QMor, p_objs, q_objs, combo_cap) -> Optional[BlockWitness]:
    cat = f.cat
    p = cat.p
    x, y = f.src, f.dst
    p_obj = cat.direct_sum(p_objs)[0] if p_objs else cat.zero_obj()
    q_obj = cat.direct_sum(q_objs)[0] if q_objs else cat.zero_obj()
    src_total, (ix, ip), (prx, prp) = _sum_pair(cat, x, p_obj)
    dst_total, (iy, iq), (pry, prq) = _sum_pair(cat, y, q_obj)
    base = cat.compose(iy, cat.compose(f.rep, prx))
    lifted = []
    for h in cat.hom_basis(p_obj, y):
        lifted.append(cat.compose(iy, cat.compose(h, prp)))
    for h in cat.hom_basis(x, q_obj):
        lifted.append(cat.compose(iq, cat.compose(h, prx)))
    for h in cat.hom_basis(p_obj, q_obj):
        lifted.append(cat.compose(iq, cat.compose(h, prp)))
    n = len(lifted)
    if p**n > combo_cap:
        return None
    base_comps = cat.mor_components(base)
    lift_comps = [cat.mor_components(m) for m in lifted]
    # necessary conditions per component: the achievable column (row) span
    # over all completions must already be full
    for k, bc in enumerate(base_comps):
        rows, cols = bc.shape
        if rows != cols:
            return None
        if rows == 0:
            continue
        cols_all = np.hstack([bc] + [lc[k] for lc in lift_comps]) if n else bc
        if len(ff._rref_array(cols_all, p)[1]) < rows:
            return None
        rows_all = np.vstack([bc] + [lc[k] for lc in lift_comps]) if n else bc
        if len(ff._rref_array(rows_all.T, p)[1]) < cols:
            return None
    stacks = [
        np.stack([lc[k] for lc in lift_comps]) if n else None
        for k in range(len(base_comps))
    ]
    for coeffs in product(range(p), repeat=n):
        cvec = np.array(coeffs, dtype=np.int64)
        ok = True
        for k, bc in enumerate(base_comps):
            if bc.shape[0] == 0:
                continue
            m = bc if not n else (bc + np.tensordot(cvec, stacks[k], axes=1)) % p
            if len(ff._rref_array(m, p)[1]) < bc.shape[0]:
                ok = False
                break
        if not ok:
            continue
        total = base
        for c, m in zip(coeffs, lifted):
            if c:
                total = cat.add(total, cat.scale(m, int(c)))
        inv = _two_sided_inverse(cat, total)
        assert inv is not None  # componentwise invertibility implies iso
        return BlockWitness(p_obj, q_obj, total, inv)
    return None


def _sum_pair(cat: Category, a, b):
    total, injs, projs = cat.direct_sum([a, b])
    return total, injs, projs


def _two_sided_inverse(cat: Category, f) -> Optional[Any]:
    from .category import solve_precompose

    x, y = cat.src(f), cat.dst(f)
    if cat.obj_dim(x) != cat.obj_dim(y):
        return None
    g = solve_precompose(cat, f, cat.identity(y))
    if g is None or not cat.mor_eq(cat.compose(g, f), cat.identity(x)):
        return None
    return g


def q_kernel(f: QMor) -> QMor:
    """Kernel class: pull f back along a precover deflation of its target.

    With a zero ideal the quotient is the host itself, so the host kernel
    is the kernel.
    """
    cat, sub = f.cat, f.sub
    if sub.is_trivial:
        _, k = cat.kernel(f.rep)
        return QMor(sub, k)
    y = f.dst
    down, reason = sub.precover_conflation(y)
    if down is None:
        raise ConditionError("precover-conflation", cat.obj_label(y), reason or "")
    _, k, _ = cat.pullback(f.rep, down.defl)
    return QMor(sub, k)


def q_cokernel(f: QMor) -> QMor:
    """Cokernel class: deflation of the preenvelope-extended conflation at the source."""
    cat, sub = f.cat, f.sub
    if sub.is_trivial:
        _, c = cat.cokernel(f.rep)
        return QMor(sub, c)
    confl, iy = extend_to_inflation(f.rep, sub)
    return QMor(sub, cat.compose(confl.defl, iy))


@dataclass
class CoimImData:
    hat: QMor
    kernel: QMor
    cokernel: QMor
    coim: Any
    im: Any
    coim_proj: QMor  # X -> Coim
    im_incl: QMor  # Im -> Y
    unique: bool


def q_coim_im(f: QMor) -> CoimImData:
    """The canonical mediating class Coim f -> Im f, with uniqueness verified."""
    cat, sub = f.cat, f.sub
    k = q_kernel(f)
    coim_proj = q_cokernel(QMor(sub, k.rep))
    c = q_cokernel(f)
    im_incl = q_kernel(QMor(sub, c.rep))
    coim = coim_proj.dst
    im = im_incl.src
    x, y = f.src, f.dst
    basis = cat.hom_basis(coim, im)
    ideal_xy = sub.ideal_spanning(x, y)
    cols = [cat.flatten(cat.compose(im_incl.rep, cat.compose(h, coim_proj.rep))) for h in basis]
    cols += [cat.flatten(i) for i in ideal_xy]
    rhs = cat.flatten(f.rep)
    if cols:
        mat = FpMatrix(cat.p, np.stack(cols, axis=1))
    else:
        mat = FpMatrix.zeros(cat.p, cat.flat_dim(x, y), 0)
    sol = ff.solve_right(mat, FpMatrix(cat.p, rhs.reshape(-1, 1)))
    assert sol is not None, "mediating morphism must exist"
    hat = cat.combine(basis, sol.a[: len(basis), 0], coim, im)
    # uniqueness modulo the ideal: every nullspace direction in the hat
    # coordinates must itself be an ideal element of Hom(Coim, Im)
    null = ff.kernel_basis(mat)
    unique = True
    for j in range(null.cols):
        delta = cat.combine(basis, null.a[: len(basis), j], coim, im)
        if not sub.is_ideal_member(delta):
            unique = False
            break
    return CoimImData(
        hat=QMor(sub, hat),
        kernel=k,
        cokernel=c,
        coim=coim,
        im=im,
        coim_proj=coim_proj,
        im_incl=im_incl,
        unique=unique,
    )


def q_is_mono(f: QMor) -> bool:
    return q_is_zero(q_kernel(f))


def q_is_epi(f: QMor) -> bool:
    return q_is_zero(q_cokernel(f))


@dataclass
class VerifyReport:
    passed: bool
    checked: int
    sampled: bool
    failures: list[str] = field(default_factory=list)
    pair_count: int = 0

    @property
    def verdict(self) -> str:
        if not self.passed:
            return "fail"
        return "sampled-pass" if self.sampled else "pass"


def _sweep_morphisms(sub: Subcategory, sample: Sequence, cap: int, seed: Optional[int]):
    """Yield one QMor per enumerated host morphism between sample objects."""
    cat = sub.cat
    rng = np.random.default_rng(seed) if seed is not None else None
    sampled = False
    for x in sample:
        for y in sample:
            mors, exhaustive = enumerate_hom(cat, x, y, cap, rng)
            sampled = sampled or not exhaustive
            for m in mors:
                yield QMor(sub, m), sampled


def verify_semiabelian(sub: Subcategory, sample: Sequence, cap: int = ENUM_CAP, seed: Optional[int] = None) -> VerifyReport:
    """Every mediating class over the sample is both monic and epic.

    Verdicts are coset-invariant, so each quotient class is decided once.
    """
    report = VerifyReport(passed=True, checked=0, sampled=False, pair_count=len(sample) ** 2)
    seen: dict = {}
    for qf, sampled in _sweep_morphisms(sub, sample, cap, seed):
        report.sampled = report.sampled or sampled
        report.checked += 1
        key = (sub.cat.obj_key(qf.src), sub.cat.obj_key(qf.dst), q_class_key(qf))
        if key in seen:
            continue
        data = q_coim_im(qf)
        ok = data.unique and q_is_mono(data.hat) and q_is_epi(data.hat)
        seen[key] = ok
        if not ok:
            report.passed = False
            report.failures.append(
                f"mediating class of {sub.cat.obj_label(qf.src)} -> {sub.cat.obj_label(qf.dst)} is not regular"
            )
    return report


def iso_agreement_sweep(sub: Subcategory, sample: Sequence, cap: int = ENUM_CAP, seed: Optional[int] = None) -> VerifyReport:
    """Two-sided-inverse solving vs block-completion search, every morphism.

    The two isomorphism tests are independent decision paths; they must
    agree on the whole enumerated hom-space of every sample pair.
    """
    report = VerifyReport(passed=True, checked=0, sampled=False, pair_count=len(sample) ** 2)
    seen: dict = {}
    for qf, sampled in _sweep_morphisms(sub, sample, cap, seed):
        report.sampled = report.sampled or sampled
        report.checked += 1
        key = (sub.cat.obj_key(qf.src), sub.cat.obj_key(qf.dst), q_class_key(qf))
        if key in seen:
            continue
        solved = q_is_iso(qf) is not None
        searched = q_is_iso_blocksearch(qf) is not None
        seen[key] = solved == searched
        if solved != searched:
            report.passed = False
            report.failures.append(
                f"iso tests disagree on {sub.cat.obj_label(qf.src)} -> {sub.cat.obj_label(qf.dst)}"
                f" (solver {solved}, block search {searched})"
            )
    return report


def verify_abelian(sub: Subcategory, sample: Sequence, cap: int = ENUM_CAP, seed: Optional[int] = None) -> VerifyReport:
    """Every regular class over the sample is invertible (first failure reported)."""
    report = VerifyReport(passed=True, checked=0, sampled=False, pair_count=len(sample) ** 2)
    seen: dict = {}
    for qf, sampled in _sweep_morphisms(sub, sample, cap, seed):
        report.sampled = report.sampled or sampled
        report.checked += 1
        key = (sub.cat.obj_key(qf.src), sub.cat.obj_key(qf.dst), q_class_key(qf))
        if key in seen:
            continue
        verdict = True
        if q_is_mono(qf) and q_is_epi(qf):
            verdict = q_is_iso(qf) is not None
        seen[key] = verdict
        if not verdict:
            report.passed = False
            report.failures.append(
                f"regular non-invertible class {sub.cat.obj_label(qf.src)} -> {sub.cat.obj_label(qf.dst)}"
            )
    return report
