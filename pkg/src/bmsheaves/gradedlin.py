"""Degreewise exact linear algebra for graded modules over S = Sym(V*).

V* sits in degree 2, so every module and map here lives on even degrees
and each degree piece is a finite dimensional rational vector space.
Three module shapes cover everything downstream:

  FreeModule      direct sum of shifted copies of S, recorded by the
                  multiset of generator degrees (S{-d} has its generator
                  in degree +d);
  QuotientModule  the same but over S/alpha for a nonzero linear form
                  alpha, realized by eliminating alpha's pivot variable;
  DirectSum       a finite concatenation of the above.

Elements of a degree piece are dense coordinate vectors over the module's
canonical basis (generator index, monomial), monomials in degree-then-lex
order.  Maps out of a FreeModule are stored by generator images and their
per-degree matrices are materialized lazily, one degree from the previous
one, so a map built under some cap extends to any degree on demand.

The graded-rank bookkeeping follows one convention everywhere: the rank
of a graded free module is the Laurent polynomial sum of v^(generator
degree).  Deconvolving a dimension table against the Hilbert series of S
recovers that rank and detects failure of graded freeness (a negative
coefficient) exactly.
"""

from __future__ import annotations

import functools
from math import comb

from .errors import CapError, InputError, NotGradedFreeError
from .laurent import LaurentPoly
from .linalg import Echelon, kernel_basis, sparse
from .polynomials import monomials_of_degree
from .rationals import QQ

__all__ = [
    "PolyRing",
    "FreeModule",
    "QuotientModule",
    "DirectSum",
    "ModuleMap",
    "kernel_deg",
    "image_deg",
    "minimal_generators",
    "rank_from_dims",
    "hilbert_dim",
    "span_submodule",
    "monomial_basis",
    "quotient_basis",
    "graded_rank_of_kernel",
    "check_commutes_with_vars",
]


def hilbert_dim(nvars, d):
    """dim of the degree-d piece of S in nvars variables (deg x_i = 2)."""
    if d < 0 or d % 2:
        return 0
    return comb(nvars - 1 + d // 2, nvars - 1)


class PolyRing:
    """Monomial bookkeeping for S = Q[x_0..x_{n-1}], deg x_i = 2."""

    def __init__(self, nvars):
        if nvars < 1:
            raise InputError("need at least one variable")
        self.nvars = nvars

    @functools.lru_cache(maxsize=None)
    def monomials(self, d):
        """Monomial basis of the degree-d piece, degree-then-lex order."""
        if d < 0 or d % 2:
            return ()
        return tuple(monomials_of_degree(self.nvars, d // 2))

    @functools.lru_cache(maxsize=None)
    def quotient_monomials(self, pivot, d):
        """Monomials of degree d omitting the pivot variable."""
        if d < 0 or d % 2:
            return ()
        return tuple(
            m for m in self.monomials(d) if m[pivot] == 0
        )

    def dim(self, d):
        return hilbert_dim(self.nvars, d)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.nvars == other.nvars

    def __hash__(self):
        return hash(("PolyRing", self.nvars))


class FreeModule:
    """Direct sum of S{-d_i}, presented by the generator degree tuple."""

    def __init__(self, ring, gens):
        self.ring = ring
        self.gens = tuple(int(g) for g in gens)
        if any(g % 2 for g in self.gens):
            raise InputError("generator degrees must be even")
        self._basis = {}
        self._index = {}
        self._varmaps = {}

    @property
    def rank_poly(self):
        out = {}
        for g in self.gens:
            out[g] = out.get(g, 0) + 1
        return LaurentPoly(out)

    def basis(self, d):
        b = self._basis.get(d)
        if b is None:
            b = []
            for i, g in enumerate(self.gens):
                for m in self.ring.monomials(d - g):
                    b.append((i, m))
            b = tuple(b)
            self._basis[d] = b
            self._index[d] = {bm: j for j, bm in enumerate(b)}
        return b

    def index(self, d):
        self.basis(d)
        return self._index[d]

    def dim(self, d):
        return sum(hilbert_dim(self.ring.nvars, d - g) for g in self.gens)

    def _var_map(self, k, d):
        """Basis position map for multiplication by x_k: degree d -> d+2."""
        key = (k, d)
        vm = self._varmaps.get(key)
        if vm is None:
            tindex = self.index(d + 2)
            vm = []
            for i, m in self.basis(d):
                mm = list(m)
                mm[k] += 1
                vm.append(tindex[(i, tuple(mm))])
            self._varmaps[key] = vm
        return vm

    def mul_var(self, vec, k, d):
        out = [0] * self.dim(d + 2)
        for pos, tpos in zip(range(len(vec)), self._var_map(k, d)):
            v = vec[pos]
            if v:
                out[tpos] = v
        return out

    def mul_linear(self, vec, coeffs, d):
        out = [0] * self.dim(d + 2)
        for k, a in enumerate(coeffs):
            if not a:
                continue
            vm = self._var_map(k, d)
            for pos, v in enumerate(vec):
                if v:
                    out[vm[pos]] += a * v
        return out


class QuotientModule:
    """Direct sum of (S/alpha){-d_i} for a nonzero linear form alpha.

    Realized by eliminating the pivot variable (lowest index with nonzero
    alpha coefficient); the basis consists of pivot-free monomials.
    """

    def __init__(self, ring, gens, alpha):
        self.ring = ring
        self.gens = tuple(int(g) for g in gens)
        self.alpha = tuple(alpha)
        if len(self.alpha) != ring.nvars:
            raise InputError("linear form has wrong arity")
        self.pivot = next((i for i, a in enumerate(self.alpha) if a), None)
        if self.pivot is None:
            raise InputError("cannot quotient by the zero linear form")
        # x_pivot = sum of _subst[j] x_j over the other variables, mod alpha
        lead = QQ(-1) / QQ(self.alpha[self.pivot])
        self._subst = {
            j: a * lead for j, a in enumerate(self.alpha) if a and j != self.pivot
        }
        self._basis = {}
        self._index = {}
        self._varcols = {}

    def basis(self, d):
        b = self._basis.get(d)
        if b is None:
            b = []
            for i, g in enumerate(self.gens):
                for m in self.ring.quotient_monomials(self.pivot, d - g):
                    b.append((i, m))
            b = tuple(b)
            self._basis[d] = b
            self._index[d] = {bm: j for j, bm in enumerate(b)}
        return b

    def index(self, d):
        self.basis(d)
        return self._index[d]

    def dim(self, d):
        nv = self.ring.nvars - 1
        if nv == 0:
            return sum(1 for g in self.gens if g == d)
        return sum(hilbert_dim(nv, d - g) for g in self.gens)

    def _var_cols(self, k, d):
        """Sparse columns of multiplication by x_k on the degree-d basis."""
        key = (k, d)
        cols = self._varcols.get(key)
        if cols is None:
            tindex = self.index(d + 2)
            cols = []
            for i, m in self.basis(d):
                if k != self.pivot:
                    mm = list(m)
                    mm[k] += 1
                    cols.append({tindex[(i, tuple(mm))]: 1})
                else:
                    col = {}
                    for j, a in self._subst.items():
                        mm = list(m)
                        mm[j] += 1
                        col[tindex[(i, tuple(mm))]] = a
                    cols.append(col)
            self._varcols[key] = cols
        return cols

    def mul_var(self, vec, k, d):
        out = [0] * self.dim(d + 2)
        for pos, v in enumerate(vec):
            if v:
                for tpos, a in self._var_cols(k, d)[pos].items():
                    out[tpos] += a * v
        return out


class DirectSum:
    """Concatenation of component modules; basis blocks in order."""

    def __init__(self, ring, parts):
        self.ring = ring
        self.parts = tuple(parts)
        if any(p.ring != ring for p in self.parts):
            raise InputError("direct sum over mixed rings")

    def dim(self, d):
        return sum(p.dim(d) for p in self.parts)

    def offsets(self, d):
        out = [0]
        for p in self.parts:
            out.append(out[-1] + p.dim(d))
        return out

    def component(self, vec, idx, d):
        off = self.offsets(d)
        return vec[off[idx]:off[idx + 1]]

    def mul_var(self, vec, k, d):
        out = []
        off = self.offsets(d)
        for i, p in enumerate(self.parts):
            out.extend(p.mul_var(vec[off[i]:off[i + 1]], k, d))
        return out


class ModuleMap:
    """S-linear map out of a FreeModule, stored by generator images.

    The degree-d matrix (as columns over the source basis) is derived
    lazily from degree d-2, so the map is usable at any degree, not just
    those materialized when it was built.  S-linearity holds by
    construction; `check_commutes_with_vars` re-verifies it by sampling
    for maps whose matrices were supplied directly.
    """

    def __init__(self, source, target, images):
        if len(images) != len(source.gens):
            raise InputError("one image per generator required")
        self.source = source
        self.target = target
        self.images = [list(v) for v in images]
        for g, img in zip(source.gens, self.images):
            if len(img) != target.dim(g):
                raise InputError("generator image has wrong dimension")
        self._cols = {}

    def columns(self, d):
        cols = self._cols.get(d)
        if cols is not None:
            return cols
        basis = self.source.basis(d)
        if not basis:
            self._cols[d] = []
            return []
        prev = None
        pindex = None
        cols = []
        for i, m in basis:
            if d == self.source.gens[i]:
                cols.append(self.images[i])
                continue
            if prev is None:
                prev = self.columns(d - 2)
                pindex = self.source.index(d - 2)
            k = next(j for j, e in enumerate(m) if e)
            mm = list(m)
            mm[k] -= 1
            parent = pindex[(i, tuple(mm))]
            cols.append(self.target.mul_var(prev[parent], k, d - 2))
        self._cols[d] = cols
        return cols

    def apply(self, vec, d):
        cols = self.columns(d)
        out = [0] * self.target.dim(d)
        for j, v in enumerate(vec):
            if v:
                col = cols[j]
                for r, a in enumerate(col):
                    if a:
                        out[r] += a * v
        return out

    def rows_sparse(self, d):
        """Constraint rows {source index: coeff}, one per target basis row."""
        cols = self.columns(d)
        rows = [dict() for _ in range(self.target.dim(d))]
        for j, col in enumerate(cols):
            for r, a in enumerate(col):
                if a:
                    rows[r][j] = a
        return rows


def kernel_deg(mmap: ModuleMap, d):
    """Dense basis of the degree-d kernel."""
    return kernel_basis(mmap.rows_sparse(d), mmap.source.dim(d))


def image_deg(mmap: ModuleMap, d):
    """Dense basis of the degree-d image (echelonized column span)."""
    ech = Echelon()
    out = []
    for col in mmap.columns(d):
        if ech.insert(sparse(col)) is not None:
            out.append(col)
    return out


def _even_cap(cap):
    return cap if cap % 2 == 0 else cap - 1


def minimal_generators(space, ambient, cap):
    """Minimal generator degrees and lifts of a graded submodule.

    `space` maps each even degree <= cap to a basis (dense vectors in the
    ambient module's coordinates) of the submodule's degree piece; the
    caller guarantees closure under multiplication by the variables.  By
    the graded Nakayama lemma the minimal generators in degree d are any
    complement of sum_k x_k * (space at d-2) inside space at d.

    Raises CapError when generators appear in the top two even degrees,
    since further generators above the cap could then not be ruled out.
    """
    cap = _even_cap(cap)
    nvars = ambient.ring.nvars
    gens = []
    for d in range(0, cap + 1, 2):
        below = space.get(d - 2, [])
        here = space.get(d, [])
        if not here:
            continue
        ech = Echelon()
        for v in below:
            for k in range(nvars):
                ech.insert(sparse(ambient.mul_var(v, k, d - 2)))
        for v in here:
            if ech.insert(sparse(v)) is not None:
                gens.append((d, v))
    unstable = [d for d, _ in gens if d >= cap - 2]
    if unstable:
        raise CapError(
            f"minimal generators found in degrees {sorted(set(unstable))} at "
            f"cap {cap}; raise the cap to trust this computation"
        )
    return gens


def rank_from_dims(dims, nvars, cap, require_stable=True):
    """Graded rank (sum of v^degree over generators) from a dimension table.

    Greedily deconvolves against the Hilbert series of S.  A negative
    residual means the module is not graded free at this cap; generators
    in the top two degrees mean the cap is too small to be conclusive.
    """
    cap = _even_cap(cap)
    gens = {}
    for d in range(0, cap + 1, 2):
        have = dims.get(d, 0)
        pred = sum(
            c * hilbert_dim(nvars, d - g) for g, c in gens.items()
        )
        residual = have - pred
        if residual < 0:
            raise NotGradedFreeError(
                f"dimension table is not graded free at this cap: degree {d} "
                f"has dimension {have}, predicted at least {pred}"
            )
        if residual:
            gens[d] = residual
    if require_stable and any(d >= cap - 2 for d in gens):
        raise CapError(
            f"graded-rank generators at the top of the range (cap {cap}); "
            "raise the cap to trust this computation"
        )
    return LaurentPoly(gens)


def span_submodule(ambient, gens, cap):
    """Degreewise bases of the submodule generated by (degree, vector) pairs."""
    cap = _even_cap(cap)
    nvars = ambient.ring.nvars
    spans = {}
    for d in range(0, cap + 1, 2):
        ech = Echelon()
        vecs = []
        for v in spans.get(d - 2, []):
            for k in range(nvars):
                w = ambient.mul_var(v, k, d - 2)
                if ech.insert(sparse(w)) is not None:
                    vecs.append(w)
        for gd, gv in gens:
            if gd == d and ech.insert(sparse(gv)) is not None:
                vecs.append(list(gv))
        if vecs:
            spans[d] = vecs
    return spans


def monomial_basis(ring: PolyRing, d):
    """Ordered monomial basis of the degree-d piece of S."""
    return ring.monomials(d)


def quotient_basis(ring: PolyRing, alpha, d):
    """Basis of (S / alpha S)_d: monomials free of the pivot variable."""
    alpha = tuple(alpha)
    pivot = next((i for i, a in enumerate(alpha) if a), None)
    if pivot is None:
        raise InputError("cannot quotient by the zero linear form")
    return ring.quotient_monomials(pivot, d)


def graded_rank_of_kernel(mmap: ModuleMap, cap):
    """Graded rank of the kernel of a map, deconvolved up to the cap."""
    cap = _even_cap(cap)
    dims = {d: len(kernel_deg(mmap, d)) for d in range(0, cap + 1, 2)}
    return rank_from_dims(dims, mmap.source.ring.nvars, cap)


def check_commutes_with_vars(module, mats, degrees):
    """Sample-check that a raw degreewise map commutes with every x_k.

    `mats` maps degree d to the list of image columns over module.basis(d)
    for a degree +2 map.  Returns True or raises InputError naming the
    first failing (degree, variable).
    """
    nvars = module.ring.nvars
    for d in degrees:
        if d not in mats or (d + 2) not in mats:
            continue
        cols_d, cols_d2 = mats[d], mats[d + 2]
        for pos in range(module.dim(d)):
            vec = [0] * module.dim(d)
            vec[pos] = 1
            img = cols_d[pos]
            for k in range(nvars):
                left = module.mul_var(img, k, d + 2)
                shifted = module.mul_var(vec, k, d)
                right = [0] * module.dim(d + 4)
                for j, v in enumerate(shifted):
                    if v:
                        for r, a in enumerate(cols_d2[j]):
                            if a:
                                right[r] += a * v
                if any(l != r for l, r in zip(left, right)):
                    raise InputError(
                        f"degreewise map does not commute with x_{k} at degree {d}"
                    )
    return True
