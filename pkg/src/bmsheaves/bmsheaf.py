"""Sheaves on moment graphs and the canonical indecomposable construction.

A sheaf here assigns a graded free S-module to every vertex (the stalk),
the quotient B^E = B^upper / alpha B^upper to every edge, and restriction
maps rho from both endpoint stalks into B^E; the upper restriction is
always the canonical quotient.  Sections over a vertex subset are tuples
of stalk elements agreeing in B^E along every internal edge, computed
degree by degree as the kernel of a block-sparse linear system.

The canonical sheaf on an interval graph is built top down: the top
stalk is one copy of S; at each lower vertex y the sections over {> y}
are projected into the direct sum of the edge modules at y, and the
stalk at y is the projective cover of that image, i.e. the free module
on its minimal generators, with the cover components as the downward
restrictions.  The costalk at a vertex (sections supported only there)
is the kernel of the stacked upward restrictions; in the canonical case
its graded rank is finite over the cap and deconvolves exactly.

The graded character collects the costalk ranks into the rescaled basis
of the Hecke algebra:  h = sum_y v^(l(y) - l(x)) q_y Tt_y, normalized so
the top coefficient is 1.  Everything downstream of the character - the
self-duality check, the positivity check with its two-generator
forbidden pattern, the local rank identities, the wall-crossing at the
character level, and the lift of sheaves from a quotient graph - is
implemented on top of the same section machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coxeter import Element, bruhat_leq, multiply, sort_key
from .errors import InconsistencyError, InputError, RealizationError
from .gradedlin import (
    DirectSum,
    FreeModule,
    ModuleMap,
    PolyRing,
    QuotientModule,
    minimal_generators,
    rank_from_dims,
)
from .hecke import BASIS_TT, HeckeElt
from .laurent import LaurentPoly
from .linalg import Echelon, kernel_basis, solve_in_span, sparse
from .momentgraph import MomentGraph, ZEModule

__all__ = [
    "Sheaf",
    "BMSheaf",
    "bm_construct",
    "character",
    "costalk_interval",
    "pair_ze_module",
    "theta_character",
    "translate_out",
    "lifted_character",
    "check_conjecture_72",
    "check_prop_71",
    "check_flabby_additive",
    "DEFAULT_MARGIN",
]

DEFAULT_MARGIN = 4


class SectionSpace:
    """Basis of the degree-d sections over an ordered set of vertices."""

    __slots__ = ("vertices", "degree", "offsets", "vectors")

    def __init__(self, vertices, degree, offsets, vectors):
        self.vertices = vertices
        self.degree = degree
        self.offsets = offsets  # vertex -> (start, end)
        self.vectors = vectors

    def block(self, vec, w):
        lo, hi = self.offsets[w]
        return vec[lo:hi]


class Sheaf:
    """Stalks, edge modules and restriction maps over a moment graph."""

    def __init__(self, graph: MomentGraph, ring: PolyRing):
        self.graph = graph
        self.ring = ring
        self.stalks = {}
        self.edge_mod = {}
        self.rho_lower = {}
        self.rho_upper = {}
        self.caps = {}
        self._section_cache = {}

    def clear_caches(self):
        self._section_cache.clear()

    # -- sections -----------------------------------------------------------

    def sections(self, vset, d) -> SectionSpace:
        verts = tuple(sorted(vset, key=self.graph.index))
        key = (verts, d)
        cached = self._section_cache.get(key)
        if cached is not None:
            return cached
        inside = set(verts)
        offsets = {}
        total = 0
        for w in verts:
            dim = self.stalks[w].dim(d)
            offsets[w] = (total, total + dim)
            total += dim
        rows = []
        for e in self.graph.edges:
            if e.lower not in inside or e.upper not in inside:
                continue
            lcols = self.rho_lower[e].columns(d)
            ucols = self.rho_upper[e].columns(d)
            lo = offsets[e.lower][0]
            uo = offsets[e.upper][0]
            for r in range(self.edge_mod[e].dim(d)):
                row = {}
                for j, col in enumerate(lcols):
                    a = col[r]
                    if a:
                        row[lo + j] = a
                for j, col in enumerate(ucols):
                    a = col[r]
                    if a:
                        row[uo + j] = -a
                if row:
                    rows.append(row)
        space = SectionSpace(verts, d, offsets, kernel_basis(rows, total))
        self._section_cache[key] = space
        return space

    # -- costalks -----------------------------------------------------------

    def costalk_dims(self, w, degrees):
        """Dimensions of the sections supported only at w (upward kernel)."""
        stalk = self.stalks[w]
        out = {}
        for d in degrees:
            rows = []
            for e in self.graph.up[w]:
                rows.extend(self.rho_lower[e].rows_sparse(d))
            out[d] = (
                len(kernel_basis(rows, stalk.dim(d))) if rows else stalk.dim(d)
            )
        return out

    def local_kernel_dims(self, w, degrees):
        """Kernel dims of stalk_w -> sum of B^E over ALL edges at w."""
        stalk = self.stalks[w]
        out = {}
        for d in degrees:
            rows = []
            for e in self.graph.up[w]:
                rows.extend(self.rho_lower[e].rows_sparse(d))
            for e in self.graph.down[w]:
                rows.extend(self.rho_upper[e].rows_sparse(d))
            out[d] = (
                len(kernel_basis(rows, stalk.dim(d))) if rows else stalk.dim(d)
            )
        return out

    def quotient_map(self, w, alpha) -> tuple:
        """(QuotientModule, canonical quotient ModuleMap) of the stalk at w."""
        stalk = self.stalks[w]
        q = QuotientModule(self.ring, stalk.gens, alpha)
        unit = (0,) * self.ring.nvars
        images = []
        for i, g in enumerate(stalk.gens):
            vec = [0] * q.dim(g)
            vec[q.index(g)[(i, unit)]] = 1
            images.append(vec)
        return q, ModuleMap(stalk, q, images)


class BMSheaf(Sheaf):
    """The canonical sheaf of an interval, with construction provenance."""

    def __init__(self, graph, ring):
        super().__init__(graph, ring)
        self.top = graph.top
        self.costalk_ranks = {}
        self.costalk_dim_table = {}
        self.section_log = {}

    def stalk_degrees(self, w):
        return self.stalks[w].gens


def _even(c):
    return c if c % 2 == 0 else c - 1


def bm_construct(graph: MomentGraph, margin=DEFAULT_MARGIN, cap_override=None):
    """Build the canonical indecomposable sheaf on the given graph.

    Vertices are processed by decreasing length (ShortLex within a
    length); the per-vertex degree cap is 2 (l(top) - l(y)) + margin
    unless overridden.  Every minimal-generator extraction and every
    graded-rank deconvolution refuses to answer when generators appear in
    the top two even degrees of its range (CapError).
    """
    system = graph.system
    ring = PolyRing(system.rank)
    sheaf = BMSheaf(graph, ring)
    order = sorted(graph.vertices, key=lambda w: (-w.length, w.word))
    top = graph.top
    if order[0] != top:
        raise InconsistencyError("top vertex is not the unique longest")
    big_l = top.length
    for e in graph.edges:
        if e.lower.length == e.upper.length:
            raise RealizationError("edge joins vertices of equal length")
    for w in order:
        if cap_override is not None:
            capw = _even(int(cap_override))
        else:
            capw = 2 * (big_l - w.length) + margin
        sheaf.caps[w] = capw
        degrees = range(0, capw + 1, 2)
        if w == top:
            sheaf.stalks[w] = FreeModule(ring, (0,))
        else:
            above = [z for z in graph.vertices if z != w and bruhat_leq(w, z)]
            delta = graph.up[w]
            target = DirectSum(ring, [sheaf.edge_mod[e] for e in delta])
            space = {}
            log = {}
            for d in degrees:
                ss = sheaf.sections(above, d)
                log[d] = len(ss.vectors)
                projected = []
                for vec in ss.vectors:
                    image = []
                    for e in delta:
                        zblock = ss.block(vec, e.upper)
                        image.extend(sheaf.rho_upper[e].apply(zblock, d))
                    projected.append(image)
                space[d] = projected
            sheaf.section_log[w] = log
            gens = minimal_generators(space, target, capw)
            stalk = FreeModule(ring, tuple(d for d, _ in gens))
            sheaf.stalks[w] = stalk
            for idx, e in enumerate(delta):
                images_e = [
                    list(target.component(vec, idx, d)) for d, vec in gens
                ]
                sheaf.rho_lower[e] = ModuleMap(stalk, sheaf.edge_mod[e], images_e)
        # this vertex is the upper endpoint of its down-edges; their edge
        # modules and canonical quotients exist from now on
        for e in graph.down[w]:
            q, qmap = sheaf.quotient_map(w, e.label.coords)
            sheaf.edge_mod[e] = q
            sheaf.rho_upper[e] = qmap
        dims = sheaf.costalk_dims(w, degrees)
        sheaf.costalk_dim_table[w] = dims
        sheaf.costalk_ranks[w] = rank_from_dims(dims, ring.nvars, capw)
    return sheaf


# -- characters -------------------------------------------------------------


def character(bm: BMSheaf) -> HeckeElt:
    """Graded character sum_y v^(l(y)-l(x)) q_y Tt_y; top coefficient 1."""
    big_l = bm.top.length
    coeffs = {}
    for w in bm.graph.vertices:
        q = bm.costalk_ranks[w]
        if not q:
            raise InconsistencyError(f"empty costalk at {w}")
        coeffs[w] = q.shift(w.length - big_l)
    out = HeckeElt(BASIS_TT, coeffs)
    if out.coeff(bm.top) != LaurentPoly.one():
        raise InconsistencyError("character is not normalized at the top")
    return out


# -- interval costalks and wall crossing ------------------------------------


@dataclass
class PairCostalk:
    """Sections over {>= ys} supported on the pair {ys, y}, ys = y s < y."""

    lower: Element
    upper: Element
    rank: LaurentPoly
    dims: dict
    bases: dict = field(repr=False)  # degree -> vectors in stalk_ys + stalk_y
    cap: int = 0


def costalk_interval(bm: BMSheaf, y: Element, s: int) -> PairCostalk:
    graph = bm.graph
    gen = graph.system.generators[s]
    ys = multiply(y, gen)
    if ys.length >= y.length:
        raise InputError(f"{y} has no right descent {s + 1}")
    if y not in graph or ys not in graph:
        raise InputError("both endpoints of the pair must be in the graph")
    omega = [z for z in graph.vertices if z == ys or bruhat_leq(ys, z)]
    cap = bm.caps[ys]
    dims = {}
    bases = {}
    for d in range(0, cap + 1, 2):
        ss = bm.sections(omega, d)
        outside = [z for z in omega if z != ys and z != y]
        rows = []
        rcount = 0
        for z in outside:
            lo, hi = ss.offsets[z]
            for r in range(lo, hi):
                row = {
                    j: vec[r]
                    for j, vec in enumerate(ss.vectors)
                    if vec[r]
                }
                rows.append(row)
                rcount += 1
        coeff_kernel = kernel_basis(rows, len(ss.vectors))
        vecs = []
        for cv in coeff_kernel:
            total = None
            for j, c in enumerate(cv):
                if not c:
                    continue
                svec = ss.vectors[j]
                if total is None:
                    total = [c * a for a in svec]
                else:
                    for r, a in enumerate(svec):
                        if a:
                            total[r] += c * a
            if total is None:
                total = [0] * (ss.offsets[omega[-1]][1] if omega else 0)
            pair = list(ss.block(total, ys)) + list(ss.block(total, y))
            for z in outside:
                if any(ss.block(total, z)):
                    raise InconsistencyError(
                        "pair costalk section does not vanish outside the pair"
                    )
            vecs.append(pair)
        dims[d] = len(vecs)
        bases[d] = vecs
    rank = rank_from_dims(dims, bm.ring.nvars, cap)
    return PairCostalk(ys, y, rank, dims, bases, cap)


def pair_ze_module(bm: BMSheaf, y: Element, s: int) -> ZEModule:
    """The pair costalk as a module over the two-vertex edge algebra.

    xi = (alpha_t, 0) acts on a supported-on-pair section by scaling the
    lower component by the connecting edge label and killing the upper.
    """
    pc = costalk_interval(bm, y, s)
    ys = pc.lower
    edge = next(
        (e for e in bm.graph.up[ys] if e.upper == y),
        None,
    )
    if edge is None:
        raise InputError(f"no edge joins {ys} and {y}")
    alpha = edge.label.coords
    ambient = DirectSum(bm.ring, [bm.stalks[ys], bm.stalks[y]])
    gens = minimal_generators(pc.bases, ambient, pc.cap)
    free = FreeModule(bm.ring, tuple(d for d, _ in gens))
    emb = ModuleMap(free, ambient, [v for _, v in gens])
    lower_stalk = bm.stalks[ys]
    xi_cols = {}
    for d in range(0, pc.cap - 1, 2):
        cols = emb.columns(d)
        nxt = emb.columns(d + 2)
        images = []
        for col in cols:
            lower_dim = lower_stalk.dim(d)
            low = lower_stalk.mul_linear(col[:lower_dim], alpha, d)
            amb_img = list(low) + [0] * bm.stalks[y].dim(d + 2)
            expr = solve_in_span(nxt, amb_img)
            if expr is None:
                raise InconsistencyError(
                    "pair costalk is not stable under the edge algebra"
                )
            images.append(expr)
        xi_cols[d] = images
    return ZEModule(free, alpha, xi_cols)


def theta_character(bm: BMSheaf, s: int) -> HeckeElt:
    """Character of the wall crossing at s, assembled from pair costalks.

    For each s-orbit {w, ws} with w < ws meeting the interval, the pair
    costalk (or the plain costalk of w when ws falls outside) contributes
    with shifts -1 at the upper and +1 at the lower vertex.
    """
    graph = bm.graph
    gen = graph.system.generators[s]
    big_l = bm.top.length
    coeffs = {}

    def _add(x, poly):
        cur = coeffs.get(x, LaurentPoly.zero())
        coeffs[x] = cur + poly

    for w in graph.vertices:
        ws = multiply(w, gen)
        if ws.length < w.length:
            continue  # w is the upper half; handled from the lower one
        if ws in graph:
            q_pair = costalk_interval(bm, ws, s).rank
        else:
            q_pair = bm.costalk_ranks[w]
        _add(ws, q_pair.shift(ws.length - big_l - 1))
        _add(w, q_pair.shift(w.length - big_l + 1))
    return HeckeElt(BASIS_TT, coeffs)


# -- lifting sheaves from a quotient graph ----------------------------------


def translate_out(nbm: BMSheaf, target_graph: MomentGraph) -> Sheaf:
    """Lift a sheaf on the quotient graph by <s> to the regular graph.

    Stalks are copied coset-wise; an edge inside an s-orbit gets the
    quotient of the shared stalk by its label with both restrictions
    canonical; every other edge reuses the image edge's module and maps.
    """
    qgraph = nbm.graph
    if qgraph.kind != "quotient" or target_graph.kind != "regular":
        raise InputError("translate_out lifts a quotient-graph sheaf")
    s = qgraph.quotient_gen
    system = target_graph.system
    gen = system.generators[s]
    out = Sheaf(target_graph, nbm.ring)

    def _bar(w):
        ws = multiply(w, gen)
        return w if ws.length > w.length else ws

    big_l = target_graph.top.length
    for w in target_graph.vertices:
        wbar = _bar(w)
        if wbar not in qgraph:
            raise InputError(f"coset of {w} is missing from the quotient graph")
        out.stalks[w] = nbm.stalks[wbar]
        out.caps[w] = 2 * (big_l - w.length) + DEFAULT_MARGIN
    by_pair = {(e.lower, e.upper): e for e in qgraph.edges}
    for e in target_graph.edges:
        u, w = e.lower, e.upper
        if multiply(u, gen) == w:
            q, qmap = out.quotient_map(u, e.label.coords)
            out.edge_mod[e] = q
            out.rho_lower[e] = qmap
            out.rho_upper[e] = qmap
        else:
            ubar, wbar = _bar(u), _bar(w)
            image = by_pair.get((ubar, wbar))
            if image is None:
                if (wbar, ubar) in by_pair:
                    raise InconsistencyError(
                        f"edge {u} -> {w} reverses orientation in the quotient"
                    )
                raise InconsistencyError(
                    f"edge {u} -> {w} has no image in the quotient graph"
                )
            if image.label != e.label:
                raise RealizationError(
                    f"edge {u} -> {w} and its image disagree on the label"
                )
            out.edge_mod[e] = nbm.edge_mod[image]
            out.rho_lower[e] = nbm.rho_lower[image]
            out.rho_upper[e] = nbm.rho_upper[image]
    return out


def lifted_character(sheaf: Sheaf, quotient_top_length: int) -> HeckeElt:
    """Character of a lifted sheaf, in module normalization shifted by {1}:
    sum_w v^(l(w) - lbar - 1) q_w Tt_w over the lifted costalk ranks."""
    coeffs = {}
    for w in sheaf.graph.vertices:
        cap = sheaf.caps[w]
        dims = sheaf.costalk_dims(w, range(0, cap + 1, 2))
        q = rank_from_dims(dims, sheaf.ring.nvars, cap)
        coeffs[w] = q.shift(w.length - quotient_top_length - 1)
    return HeckeElt(BASIS_TT, coeffs)


# -- checks -----------------------------------------------------------------


def check_conjecture_72(bm: BMSheaf):
    """Positivity of the subleading character coefficients.

    For every y below the top, f_{y,x} must lie in v Z[v]; additionally
    the two-generator costalk pattern in degrees l(x)-l(y) and
    2(l(x)-l(y)) must not occur.  Returns {y: (positive, pattern_free, f)}.
    """
    big_l = bm.top.length
    report = {}
    for w in bm.graph.vertices:
        if w == bm.top:
            continue
        q = bm.costalk_ranks[w]
        f = q.shift(w.length - big_l)
        k = big_l - w.length
        forbidden = q == LaurentPoly({k: 1, 2 * k: 1})
        report[w] = (f.is_v_times_polynomial(), not forbidden, f)
    return report


def check_prop_71(bm: BMSheaf, w: Element, margin=DEFAULT_MARGIN):
    """Local rank identities at one vertex.

    (2) the kernel of stalk_w -> sum of B^E over all edges at w is graded
    free of rank v^(2 #down-edges) times the costalk rank; (4) the stalk
    generator multiset mirrors the costalk generator multiset under
    d -> 2(l(x)-l(w)) - d.
    """
    big_l = bm.top.length
    cap2 = 2 * big_l + margin
    dims = bm.local_kernel_dims(w, range(0, cap2 + 1, 2))
    full_rank = rank_from_dims(dims, bm.ring.nvars, cap2)
    ndown = len(bm.graph.down[w])
    ok2 = full_rank == bm.costalk_ranks[w].shift(2 * ndown)
    reflected = bm.costalk_ranks[w].bar().shift(2 * (big_l - w.length))
    ok4 = bm.stalks[w].rank_poly == reflected
    return {"kernel_rank": ok2, "mirror": ok4}


def check_flabby_additive(bm: BMSheaf, w: Element):
    """Degreewise surjectivity of restriction and section additivity at w.

    For every degree under the cap: sections over {>= w} restrict onto
    sections over {> w}, and the dimensions satisfy
    dim Gamma({>= w}) = dim Gamma({> w}) + dim costalk(w).
    """
    graph = bm.graph
    above = [z for z in graph.vertices if z != w and bruhat_leq(w, z)]
    closed = [w] + above
    cap = bm.caps[w]
    costalk = bm.costalk_dim_table[w]
    for d in range(0, cap + 1, 2):
        ss_ge = bm.sections(closed, d)
        ss_gt = bm.sections(above, d)
        if len(ss_ge.vectors) != len(ss_gt.vectors) + costalk.get(d, 0):
            return False
        ech = Echelon()
        restricted_rank = 0
        for vec in ss_ge.vectors:
            restr = []
            for z in above:
                restr.extend(ss_ge.block(vec, z))
            if ech.insert(sparse(restr)) is not None:
                restricted_rank += 1
        if restricted_rank != len(ss_gt.vectors):
            return False
    return True
