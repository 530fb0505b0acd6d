"""Finite-dimensional quiver representations over F_p: the base exact category.

Objects assign an F_p vector space to every vertex and a matrix to every
arrow; morphisms are vertex-wise matrices making every arrow square commute.
The exact structure is all short exact sequences (the category is abelian),
so kernels, cokernels, pullbacks and pushouts are computed vertex-wise with
induced arrow maps.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from . import fflinalg as ff
from .category import Category, Conflation, EnumerationBound
from .fflinalg import FpMatrix


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    dst: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow names")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.src not in vs or a.dst not in vs:
                raise ValueError(f"arrow {a.name} references unknown vertex")

    @classmethod
    def from_lists(cls, vertices: Sequence[str], arrows: Sequence[tuple[str, str, str]]) -> "Quiver":
        return cls(tuple(vertices), tuple(Arrow(*a) for a in arrows))


def a_n(n: int) -> Quiver:
    """Linear quiver 1 -> 2 -> ... -> n."""
    vertices = tuple(str(i) for i in range(1, n + 1))
    arrows = tuple(Arrow(f"a{i}", str(i), str(i + 1)) for i in range(1, n))
    return Quiver(vertices, arrows)


class RepObj:
    """A representation: dims per vertex, one matrix per arrow."""

    __slots__ = ("quiver", "p", "dims", "maps", "name", "_key")

    def __init__(self, quiver: Quiver, p: int, dims: dict[str, int], maps: dict[str, FpMatrix], name: str = ""):
        self.quiver = quiver
        self.p = p
        self.dims = {v: int(dims.get(v, 0)) for v in quiver.vertices}
        self.maps = {}
        for a in quiver.arrows:
            m = maps.get(a.name)
            if m is None:
                m = FpMatrix.zeros(p, self.dims[a.dst], self.dims[a.src])
            if m.a.shape != (self.dims[a.dst], self.dims[a.src]):
                raise ValueError(
                    f"arrow {a.name}: matrix shape {m.a.shape} != "
                    f"({self.dims[a.dst]}, {self.dims[a.src]})"
                )
            self.maps[a.name] = m
        self.name = name
        self._key = None

    @property
    def key(self):
        if self._key is None:
            self._key = (
                tuple(self.dims[v] for v in self.quiver.vertices),
                tuple(self.maps[a.name].key for a in self.quiver.arrows),
            )
        return self._key

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        dims = ",".join(str(self.dims[v]) for v in self.quiver.vertices)
        return f"rep({dims})"

    def __eq__(self, other):
        return isinstance(other, RepObj) and self.p == other.p and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"<RepObj {self.label}>"


class RepMor:
    """A morphism of representations: one matrix per vertex, squares commute."""

    __slots__ = ("src", "dst", "comps", "_key")

    def __init__(self, src: RepObj, dst: RepObj, comps: dict[str, FpMatrix], check: bool = True):
        self.src = src
        self.dst = dst
        self.comps = {}
        for v in src.quiver.vertices:
            m = comps.get(v)
            if m is None:
                m = FpMatrix.zeros(src.p, dst.dims[v], src.dims[v])
            if m.a.shape != (dst.dims[v], src.dims[v]):
                raise ValueError(f"vertex {v}: component shape {m.a.shape} != ({dst.dims[v]}, {src.dims[v]})")
            self.comps[v] = m
        self._key = None
        if check:
            for a in src.quiver.arrows:
                lhs = self.comps[a.dst] @ src.maps[a.name]
                rhs = dst.maps[a.name] @ self.comps[a.src]
                if lhs != rhs:
                    raise ValueError(f"arrow {a.name}: commuting-square law violated")

    def flatten(self) -> np.ndarray:
        parts = [self.comps[v].a.reshape(-1) for v in self.src.quiver.vertices]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.comps.values())

    def __repr__(self):
        return f"<RepMor {self.src.label} -> {self.dst.label}>"


def _vec_unknown_layout(quiver: Quiver, src_dims, dst_dims):
    """Offsets of the per-vertex component blocks in the flat unknown vector."""
    offs, n = {}, 0
    for v in quiver.vertices:
        size = dst_dims[v] * src_dims[v]
        offs[v] = (n, size)
        n += size
    return offs, n


class RepCategory(Category):
    """The abelian category of representations of one quiver over F_p."""

    def __init__(self, quiver: Quiver, p: int = 2):
        super().__init__()
        if p not in ff.SUPPORTED_PRIMES:
            raise ValueError(f"unsupported characteristic {p}")
        self.quiver = quiver
        self.p = p
        self._zero = RepObj(quiver, p, {}, {}, name="0")

    # -- objects ---------------------------------------------------------
    def obj(self, dims: dict[str, int], maps: dict[str, FpMatrix] | None = None, name: str = "") -> RepObj:
        return RepObj(self.quiver, self.p, dims, maps or {}, name)

    def obj_key(self, x: RepObj):
        return x.key

    def obj_dim(self, x: RepObj) -> int:
        return x.total_dim

    def dim_profile(self, x: RepObj) -> tuple[int, ...]:
        return tuple(x.dims[v] for v in self.quiver.vertices)

    def obj_label(self, x: RepObj) -> str:
        return x.label

    def zero_obj(self) -> RepObj:
        return self._zero

    def direct_sum(self, xs: Sequence[RepObj]) -> tuple[RepObj, list[RepMor], list[RepMor]]:
        dims = {v: sum(x.dims[v] for x in xs) for v in self.quiver.vertices}
        maps = {
            a.name: ff.block_diag([x.maps[a.name] for x in xs], self.p) if xs else FpMatrix.zeros(self.p, 0, 0)
            for a in self.quiver.arrows
        }
        total = RepObj(self.quiver, self.p, dims, maps)
        injs, projs = [], []
        for i, x in enumerate(xs):
            inj_comps, proj_comps = {}, {}
            for v in self.quiver.vertices:
                before = sum(y.dims[v] for y in xs[:i])
                inj = np.zeros((dims[v], x.dims[v]), dtype=np.int64)
                for j in range(x.dims[v]):
                    inj[before + j, j] = 1
                inj_comps[v] = FpMatrix(self.p, inj)
                proj_comps[v] = FpMatrix(self.p, inj.T)
            injs.append(RepMor(x, total, inj_comps, check=False))
            projs.append(RepMor(total, x, proj_comps, check=False))
        self._register_sum(total, xs, injs, projs)
        return total, injs, projs

    # -- morphisms -------------------------------------------------------
    def flat_dim(self, x: RepObj, y: RepObj) -> int:
        return sum(y.dims[v] * x.dims[v] for v in self.quiver.vertices)

    def flatten(self, f: RepMor) -> np.ndarray:
        return f.flatten()

    def _solve_hom_basis(self, x: RepObj, y: RepObj) -> list[RepMor]:
        offs, n = _vec_unknown_layout(self.quiver, x.dims, y.dims)
        rows = []
        for a in self.quiver.arrows:
            i, j = a.src, a.dst
            di, dj = x.dims[i], x.dims[j]
            ei, ej = y.dims[i], y.dims[j]
            # constraint F_j X_a - Y_a F_i = 0, vectorized row-major:
            # vec(F_j X_a) = (I_ej ⊗ X_aᵀ)ᵀ ... use kron identities on row-major vec.
            block = np.zeros((ej * di, n), dtype=np.int64)
            oj, sj = offs[j]
            oi, si = offs[i]
            if sj:
                block[:, oj : oj + sj] = np.kron(np.eye(ej, dtype=np.int64), x.maps[a.name].a.T)
            if si:
                block[:, oi : oi + si] -= np.kron(y.maps[a.name].a, np.eye(di, dtype=np.int64))
            rows.append(block)
        if rows:
            system = FpMatrix(self.p, np.vstack(rows))
        else:
            system = FpMatrix.zeros(self.p, 0, n)
        null = ff.kernel_basis(system)
        basis = []
        for c in range(null.cols):
            vec = null.a[:, c]
            comps = {}
            for v in self.quiver.vertices:
                o, s = offs[v]
                comps[v] = FpMatrix(self.p, vec[o : o + s].reshape(y.dims[v], x.dims[v]))
            basis.append(RepMor(x, y, comps))
        return basis

    def identity(self, x: RepObj) -> RepMor:
        comps = {v: FpMatrix.identity(self.p, x.dims[v]) for v in self.quiver.vertices}
        return RepMor(x, x, comps, check=False)

    def zero_mor(self, x: RepObj, y: RepObj) -> RepMor:
        return RepMor(x, y, {}, check=False)

    def compose(self, g: RepMor, f: RepMor) -> RepMor:
        comps = {v: g.comps[v] @ f.comps[v] for v in self.quiver.vertices}
        return RepMor(f.src, g.dst, comps, check=False)

    def add(self, f: RepMor, g: RepMor) -> RepMor:
        comps = {v: f.comps[v] + g.comps[v] for v in self.quiver.vertices}
        return RepMor(f.src, f.dst, comps, check=False)

    def neg(self, f: RepMor) -> RepMor:
        return RepMor(f.src, f.dst, {v: -f.comps[v] for v in self.quiver.vertices}, check=False)

    def scale(self, f: RepMor, c: int) -> RepMor:
        return RepMor(f.src, f.dst, {v: f.comps[v].scale(c) for v in self.quiver.vertices}, check=False)

    def src(self, f: RepMor) -> RepObj:
        return f.src

    def dst(self, f: RepMor) -> RepObj:
        return f.dst

    def mor_components(self, f: RepMor) -> list[np.ndarray]:
        return [f.comps[v].a for v in self.quiver.vertices]

    def stack(self, fs: Sequence[RepMor], total: RepObj, injs: Sequence[RepMor]) -> RepMor:
        """<f_1,...,f_k>: common src -> direct sum, from components."""
        out = self.zero_mor(fs[0].src, total)
        for f, inj in zip(fs, injs):
            out = self.add(out, self.compose(inj, f))
        return out

    def costack(self, fs: Sequence[RepMor], total: RepObj, projs: Sequence[RepMor]) -> RepMor:
        """(f_1 ... f_k): direct sum -> common dst, from components."""
        out = self.zero_mor(total, fs[0].dst)
        for f, proj in zip(fs, projs):
            out = self.add(out, self.compose(f, proj))
        return out

    # -- exact structure ---------------------------------------------------
    def is_inflation(self, f: RepMor) -> bool:
        return all(f.comps[v].rank() == f.src.dims[v] for v in self.quiver.vertices)

    def is_deflation(self, f: RepMor) -> bool:
        return all(f.comps[v].rank() == f.dst.dims[v] for v in self.quiver.vertices)

    def check_conflation(self, c: Conflation) -> None:
        incl, defl = c.incl, c.defl
        if incl.dst is not defl.src and incl.dst.key != defl.src.key:
            raise ValueError("conflation: incl.dst != defl.src")
        if not self.compose(defl, incl).is_zero():
            raise ValueError("conflation: defl o incl != 0")
        if not self.is_inflation(incl):
            raise ValueError("conflation: incl not vertex-wise injective")
        if not self.is_deflation(defl):
            raise ValueError("conflation: defl not vertex-wise surjective")
        for v in self.quiver.vertices:
            if incl.comps[v].rank() + defl.comps[v].rank() != incl.dst.dims[v]:
                raise ValueError(f"conflation: not exact in the middle at vertex {v}")

    def conflation(self, incl: RepMor, defl: RepMor) -> Conflation:
        c = Conflation(incl, defl)
        self.check_conflation(c)
        return c

    def kernel(self, f: RepMor) -> tuple[RepObj, RepMor]:
        bases = {v: ff.kernel_basis(f.comps[v]) for v in self.quiver.vertices}
        dims = {v: bases[v].cols for v in self.quiver.vertices}
        maps = {}
        for a in self.quiver.arrows:
            rhs = f.src.maps[a.name] @ bases[a.src]
            sol = ff.solve_right(bases[a.dst], rhs)
            assert sol is not None  # arrow maps preserve vertex kernels
            maps[a.name] = sol
        k_obj = RepObj(self.quiver, self.p, dims, maps)
        k_mor = RepMor(k_obj, f.src, bases)
        return k_obj, k_mor

    def cokernel(self, f: RepMor) -> tuple[RepObj, RepMor]:
        projs, lifts = {}, {}
        for v in self.quiver.vertices:
            proj, lift = ff.quotient_space(self.p, f.dst.dims[v], f.comps[v])
            projs[v], lifts[v] = proj, lift
        dims = {v: projs[v].rows for v in self.quiver.vertices}
        maps = {}
        for a in self.quiver.arrows:
            maps[a.name] = projs[a.dst] @ f.dst.maps[a.name] @ lifts[a.src]
        c_obj = RepObj(self.quiver, self.p, dims, maps)
        c_mor = RepMor(f.dst, c_obj, projs)
        return c_obj, c_mor

    def image(self, f: RepMor) -> tuple[RepObj, RepMor]:
        """Image subobject with its inclusion into dst."""
        bases = {v: ff.column_space_basis(f.comps[v]) for v in self.quiver.vertices}
        dims = {v: bases[v].cols for v in self.quiver.vertices}
        maps = {}
        for a in self.quiver.arrows:
            sol = ff.solve_right(bases[a.dst], f.dst.maps[a.name] @ bases[a.src])
            assert sol is not None
            maps[a.name] = sol
        im_obj = RepObj(self.quiver, self.p, dims, maps)
        return im_obj, RepMor(im_obj, f.dst, bases)

    def pullback(self, f: RepMor, g: RepMor) -> tuple[RepObj, RepMor, RepMor]:
        """Fiber product of f: X -> Z and g: Y -> Z with its two projections."""
        assert f.dst.key == g.dst.key
        x, y = f.src, g.src
        bases, p1c, p2c = {}, {}, {}
        for v in self.quiver.vertices:
            stacked = ff.hstack([f.comps[v], -g.comps[v]])
            k = ff.kernel_basis(stacked)
            bases[v] = k
            p1c[v] = FpMatrix(self.p, k.a[: x.dims[v], :])
            p2c[v] = FpMatrix(self.p, k.a[x.dims[v] :, :])
        dims = {v: bases[v].cols for v in self.quiver.vertices}
        maps = {}
        for a in self.quiver.arrows:
            xa, ya = x.maps[a.name], y.maps[a.name]
            diag = ff.block_diag([xa, ya], self.p)
            sol = ff.solve_right(bases[a.dst], diag @ bases[a.src])
            assert sol is not None
            maps[a.name] = sol
        pobj = RepObj(self.quiver, self.p, dims, maps)
        return pobj, RepMor(pobj, x, p1c), RepMor(pobj, y, p2c)

    def pushout(self, f: RepMor, g: RepMor) -> tuple[RepObj, RepMor, RepMor]:
        """Cofiber coproduct of f: X -> Y and g: X -> Z with its two injections."""
        assert f.src.key == g.src.key
        y, z = f.dst, g.dst
        projs, lifts = {}, {}
        for v in self.quiver.vertices:
            stacked = ff.vstack([f.comps[v], -g.comps[v]])
            proj, lift = ff.quotient_space(self.p, y.dims[v] + z.dims[v], stacked)
            projs[v], lifts[v] = proj, lift
        dims = {v: projs[v].rows for v in self.quiver.vertices}
        maps = {}
        for a in self.quiver.arrows:
            diag = ff.block_diag([y.maps[a.name], z.maps[a.name]], self.p)
            maps[a.name] = projs[a.dst] @ diag @ lifts[a.src]
        pobj = RepObj(self.quiver, self.p, dims, maps)
        i1c = {v: FpMatrix(self.p, projs[v].a[:, : y.dims[v]]) for v in self.quiver.vertices}
        i2c = {v: FpMatrix(self.p, projs[v].a[:, y.dims[v] :]) for v in self.quiver.vertices}
        return pobj, RepMor(y, pobj, i1c), RepMor(z, pobj, i2c)

    # -- enumeration -------------------------------------------------------
    def enumerate_subobjects(self, x: RepObj, bound: int = 8) -> list[RepMor]:
        """One inclusion per subrepresentation, in a canonical order.

        Works vertex-by-vertex over all subspace tuples, keeping the
        arrow-stable ones; refuses above the total-dimension bound so that
        membership decisions built on it stay decisions.
        """
        if x.total_dim > bound:
            raise EnumerationBound(
                f"subobject enumeration needs bound >= {x.total_dim}, have {bound}",
                x.total_dim,
            )
        per_vertex = {v: ff.all_subspaces(self.p, x.dims[v]) for v in self.quiver.vertices}
        out = []
        vs = list(self.quiver.vertices)
        for combo in product(*(per_vertex[v] for v in vs)):
            incl = dict(zip(vs, combo))
            ok = True
            for a in self.quiver.arrows:
                moved = x.maps[a.name] @ incl[a.src]
                if ff.solve_right(incl[a.dst], moved) is None:
                    ok = False
                    break
            if not ok:
                continue
            dims = {v: incl[v].cols for v in vs}
            maps = {}
            for a in self.quiver.arrows:
                maps[a.name] = ff.solve_right(incl[a.dst], x.maps[a.name] @ incl[a.src])
            sub = RepObj(self.quiver, self.p, dims, maps)
            out.append(RepMor(sub, x, incl))
        out.sort(key=lambda m: (m.src.total_dim, m.src.key, m.flatten().tobytes()))
        return out

    def enumerate_extensions(self, z: RepObj, x: RepObj, cap: int = 4096) -> list[Conflation]:
        """All middle structures 0 -> x -> Y -> z -> 0 on the split coordinates.

        Every equivalence class of extensions appears (any extension is
        equivalent to one with canonical inclusion/projection and a glue
        block per arrow); the split one is the all-zero glue.
        """
        glue_sizes = [(a, x.dims[a.dst] * z.dims[a.src]) for a in self.quiver.arrows]
        total = sum(s for _, s in glue_sizes)
        if self.p**total > cap:
            raise EnumerationBound(f"extension enumeration needs cap >= {self.p ** total}", self.p**total)
        out = []
        for vals in product(range(self.p), repeat=total):
            vec = np.array(vals, dtype=np.int64)
            maps = {}
            off = 0
            for a, size in glue_sizes:
                glue = vec[off : off + size].reshape(x.dims[a.dst], z.dims[a.src])
                off += size
                xa, za = x.maps[a.name].a, z.maps[a.name].a
                top = np.hstack([xa, glue])
                bot = np.hstack([np.zeros((z.dims[a.dst], x.dims[a.src]), dtype=np.int64), za])
                maps[a.name] = FpMatrix(self.p, np.vstack([top, bot]))
            dims = {v: x.dims[v] + z.dims[v] for v in self.quiver.vertices}
            mid = RepObj(self.quiver, self.p, dims, maps)
            inc_c, prj_c = {}, {}
            for v in self.quiver.vertices:
                inc = np.zeros((dims[v], x.dims[v]), dtype=np.int64)
                inc[: x.dims[v], :] = np.eye(x.dims[v], dtype=np.int64)
                prj = np.zeros((z.dims[v], dims[v]), dtype=np.int64)
                prj[:, x.dims[v] :] = np.eye(z.dims[v], dtype=np.int64)
                inc_c[v] = FpMatrix(self.p, inc)
                prj_c[v] = FpMatrix(self.p, prj)
            out.append(Conflation(RepMor(x, mid, inc_c), RepMor(mid, z, prj_c)))
        return out

    def enumerate_objects(self, max_dim: int, cap: int = 100_000) -> list[RepObj]:
        """All representations with every vertex dimension <= max_dim."""
        vs = list(self.quiver.vertices)
        out = []
        for dims_tuple in product(range(max_dim + 1), repeat=len(vs)):
            dims = dict(zip(vs, dims_tuple))
            entry_count = sum(dims[a.dst] * dims[a.src] for a in self.quiver.arrows)
            if self.p**entry_count > cap:
                raise EnumerationBound("object enumeration cap exceeded", self.p**entry_count)
            for vals in product(range(self.p), repeat=entry_count):
                vec = np.array(vals, dtype=np.int64)
                maps = {}
                off = 0
                for a in self.quiver.arrows:
                    size = dims[a.dst] * dims[a.src]
                    maps[a.name] = FpMatrix(self.p, vec[off : off + size].reshape(dims[a.dst], dims[a.src]))
                    off += size
                out.append(RepObj(self.quiver, self.p, dims, maps))
                if len(out) > cap:
                    raise EnumerationBound("object enumeration cap exceeded", len(out))
        return out


def opposite(cat: RepCategory) -> RepCategory:
    """The opposite representation category: arrows reversed."""
    q = cat.quiver
    arrows = tuple(Arrow(a.name, a.dst, a.src) for a in q.arrows)
    return RepCategory(Quiver(q.vertices, arrows), cat.p)


def op_obj(opcat: RepCategory, x: RepObj) -> RepObj:
    maps = {a: m.transpose() for a, m in x.maps.items()}
    return RepObj(opcat.quiver, x.p, dict(x.dims), maps, name=x.name)


def op_mor(opcat: RepCategory, f: RepMor) -> RepMor:
    comps = {v: m.transpose() for v, m in f.comps.items()}
    return RepMor(op_obj(opcat, f.dst), op_obj(opcat, f.src), comps)


def op_conflation(opcat: RepCategory, c: Conflation) -> Conflation:
    return Conflation(op_mor(opcat, c.defl), op_mor(opcat, c.incl))
