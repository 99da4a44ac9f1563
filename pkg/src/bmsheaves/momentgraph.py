"""Moment graphs of Bruhat intervals and their structure algebra.

A moment graph here is the graph of an interval [e, x], or of its image
in the quotient by a rank-one parabolic: vertices are group elements (or
minimal coset representatives), there is an edge between w and tw for
each reflection t that keeps both endpoints in the vertex set, the edge
is directed from the shorter to the longer endpoint, and it is labeled
by the positive root of t.  Construction checks the structural facts the
theory predicts and raises RealizationError when a computed graph would
falsify them: no double edges, distinct reflections never carry
proportional labels, and edge endpoints are always comparable.

The structure algebra Z consists of the vertex tuples (z_w) of
polynomials with z_w = z_{w'} mod alpha_t along every edge.  Three
operations on it drive the sheaf theory: the characteristic embedding
sigma(alpha)_w = w(alpha); the invariant splitting of Z over a rank-one
parabolic (z decomposes as z_+ + c^s z_- with both parts invariant,
where c^s_w = w(alpha_s)); and the decomposition of a Z(E)-module, for
one edge E labeled alpha_t, into shifted copies of the two vertex-line
modules M(x), M(y) and the full edge module P(x,y), by a greedy
degreewise complement computation over the action of xi = (alpha_t, 0).
"""

from __future__ import annotations

from dataclasses import dataclass

from .coxeter import (
    Element,
    Root,
    bruhat_interval,
    bruhat_leq,
    is_reflection,
    multiply,
    reflection_root,
    sort_key,
    word_str,
)
from .errors import InconsistencyError, InputError, RealizationError
from .gradedlin import FreeModule, PolyRing, hilbert_dim
from .linalg import Echelon, kernel_basis, sparse
from .polynomials import Poly, linear_form
from .rationals import QQ

__all__ = [
    "Edge",
    "MomentGraph",
    "build_graph",
    "ZTuple",
    "z_contains",
    "sigma",
    "c_invariant",
    "ze_projection_generators",
    "split_invariant",
    "ZEModule",
    "LocalSummand",
    "decompose_ze_module",
    "summand_ze_module",
    "check_sanity",
    "check_deodhar",
    "to_dot",
]


@dataclass(frozen=True)
class Edge:
    lower: Element
    upper: Element
    reflection: Element
    label: Root

    def __str__(self):
        return f"{self.lower} -> {self.upper} [{self.label}]"


class MomentGraph:
    """Finite labeled graph on a Bruhat interval or its quotient image."""

    def __init__(self, system, kind, x, vertices, edges, quotient_gen=None):
        self.system = system
        self.kind = kind
        self.top = x
        self.vertices = tuple(sorted(vertices, key=sort_key))
        self.edges = tuple(edges)
        self.quotient_gen = quotient_gen
        self._index = {w: i for i, w in enumerate(self.vertices)}
        up = {w: [] for w in self.vertices}
        down = {w: [] for w in self.vertices}
        for e in self.edges:
            up[e.lower].append(e)
            down[e.upper].append(e)
        self.up = {w: tuple(es) for w, es in up.items()}
        self.down = {w: tuple(es) for w, es in down.items()}

    def index(self, w):
        return self._index[w]

    def __contains__(self, w):
        return w in self._index

    def __str__(self):
        return (
            f"MomentGraph({self.kind}, top={self.top}, "
            f"{len(self.vertices)} vertices, {len(self.edges)} edges)"
        )


def _check_labels(edges):
    """Distinct reflections must have non-proportional (primitive) roots."""
    seen = {}
    for e in edges:
        prior = seen.get(e.label.coords)
        if prior is not None and prior != e.reflection:
            raise RealizationError(
                f"distinct reflections {prior} and {e.reflection} share the "
                f"label {e.label}; the realization is not faithful"
            )
        seen[e.label.coords] = e.reflection


def _edge_between(y, z):
    """The Edge joining y and z if z y^-1 reflects, else None (l(y) < l(z))."""
    t = multiply(z, y.inverse())
    if (t.length % 2) == 0 or not is_reflection(t):
        return None
    return Edge(y, z, t, reflection_root(t))


def build_graph(system, x: Element, kind="regular", s=None) -> MomentGraph:
    """Moment graph of [e, x], or of its quotient by <s> when kind='quotient'.

    For the quotient, vertices are the minimal length coset representatives
    of cosets below the coset of x, ordered by Bruhat order on those
    representatives; w and u are joined when u w^-1 or (u s) w^-1 is a
    reflection, and both succeeding at once is a double edge (an error).
    """
    if kind == "regular":
        vertices = bruhat_interval(x)
        edges = []
        for i, y in enumerate(vertices):
            for z in vertices[i + 1:]:
                if (z.length - y.length) % 2 == 0 or z.length <= y.length:
                    continue
                e = _edge_between(y, z)
                if e is not None:
                    if not bruhat_leq(y, z):
                        raise RealizationError(
                            f"edge endpoints {y}, {z} are not comparable"
                        )
                    edges.append(e)
        graph = MomentGraph(system, kind, x, vertices, edges)
    elif kind == "quotient":
        if s is None or not (0 <= s < system.rank):
            raise InputError("quotient graphs need a generator index")
        gen = system.generators[s]
        xs = multiply(x, gen)
        upper = x if xs.length < x.length else xs
        vertices = [
            w
            for w in bruhat_interval(upper)
            if multiply(w, gen).length > w.length
        ]
        top = min(x, xs, key=sort_key) if xs.length < x.length else x
        edges = []
        for i, y in enumerate(vertices):
            for z in vertices[i + 1:]:
                cands = []
                for zz in (z, multiply(z, gen)):
                    t = multiply(zz, y.inverse())
                    if t.length % 2 and is_reflection(t):
                        cands.append(t)
                if not cands:
                    continue
                if len(cands) > 1:
                    raise RealizationError(
                        f"double edge between cosets of {y} and {z}"
                    )
                t = cands[0]
                if z.length == y.length or not bruhat_leq(y, z):
                    raise RealizationError(
                        f"edge endpoints {y}, {z} are not comparable as cosets"
                    )
                edges.append(Edge(y, z, t, reflection_root(t)))
        graph = MomentGraph(system, kind, top, vertices, edges, quotient_gen=s)
    else:
        raise InputError(f"unknown graph kind {kind!r}")
    # no double edges between the same endpoints
    seen = set()
    for e in graph.edges:
        key = (e.lower, e.upper)
        if key in seen:
            raise RealizationError(f"double edge at {key[0]} -> {key[1]}")
        seen.add(key)
    _check_labels(graph.edges)
    return graph


# -- structure algebra ----------------------------------------------------


class ZTuple:
    """One polynomial per vertex, aligned with graph.vertices."""

    __slots__ = ("graph", "entries")

    def __init__(self, graph, entries):
        self.graph = graph
        self.entries = tuple(entries)
        if len(self.entries) != len(graph.vertices):
            raise InputError("one entry per vertex required")

    def __getitem__(self, w):
        return self.entries[self.graph.index(w)]

    def __add__(self, other):
        return ZTuple(
            self.graph, [a + b for a, b in zip(self.entries, other.entries)]
        )

    def __sub__(self, other):
        return ZTuple(
            self.graph, [a - b for a, b in zip(self.entries, other.entries)]
        )

    def __mul__(self, other):
        if isinstance(other, ZTuple):
            return ZTuple(
                self.graph,
                [a * b for a, b in zip(self.entries, other.entries)],
            )
        return ZTuple(self.graph, [a * other for a in self.entries])

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, ZTuple)
            and self.graph is other.graph
            and self.entries == other.entries
        )

    def __str__(self):
        return "; ".join(
            f"{w}: {p}" for w, p in zip(self.graph.vertices, self.entries)
        )


def z_contains(graph: MomentGraph, z: ZTuple) -> bool:
    """Edge congruences: z_lower = z_upper mod alpha along every edge."""
    for e in graph.edges:
        diff = z[e.lower] - z[e.upper]
        if diff and not diff.divisible_by_linear(e.label.coords):
            return False
    return True


def sigma(graph: MomentGraph, alpha) -> ZTuple:
    """The characteristic tuple sigma(alpha)_w = w(alpha).

    On a quotient graph this is well defined only when s(alpha) = alpha,
    which is checked and raised as a precondition failure otherwise.
    """
    n = graph.system.rank
    alpha = tuple(alpha)
    if len(alpha) != n:
        raise InputError("covector has wrong arity")
    if graph.kind == "quotient":
        s = graph.quotient_gen
        fixed = graph.system.generators[s].apply(alpha)
        if tuple(fixed) != alpha:
            raise InputError(
                "sigma on a quotient graph needs an s-invariant covector; "
                f"s(alpha) = {fixed} differs from alpha = {alpha}"
            )
    return ZTuple(graph, [linear_form(w.apply(alpha)) for w in graph.vertices])


def c_invariant(graph: MomentGraph, s: int) -> ZTuple:
    """The tuple c^s with c^s_w = w(alpha_s)."""
    unit = tuple(1 if i == s else 0 for i in range(graph.system.rank))
    return ZTuple(
        graph, [linear_form(w.apply(unit)) for w in graph.vertices]
    )


def ze_projection_generators(graph: MomentGraph, edge: Edge):
    """Generators of the image of Z in the two-vertex algebra of one edge.

    Returns ((1, 1), (alpha_t, 0)) as (lower, upper) component pairs; these
    generate everything cut out by the congruence, in particular (0, alpha_t).
    """
    n = graph.system.rank
    one = Poly.constant(n, 1)
    return (
        (one, one),
        (linear_form(edge.label.coords), Poly.zero(n)),
    )


def split_invariant(graph: MomentGraph, s: int, z: ZTuple):
    """Split z = z_plus + c^s * z_quot over the invariants of s.

    Requires the vertex set to be closed under right multiplication by s
    (true for [e, x] exactly when xs < x).  s acts by (s.z)_w = z_{ws};
    z_plus is the symmetric part and z_quot the antisymmetric part divided
    exactly by c^s_w = w(alpha_s); failed division means z was not in Z.
    """
    if graph.kind != "regular":
        raise InputError("the invariant splitting needs a regular orbit graph")
    gen = graph.system.generators[s]
    partner = {}
    for w in graph.vertices:
        ws = multiply(w, gen)
        if ws not in graph:
            raise InputError(
                f"vertex set is not s-invariant: {w}*s is outside the graph"
            )
        partner[w] = ws
    half = QQ(1, 2)
    plus, quot = [], []
    for w in graph.vertices:
        zw = z[w]
        zws = z[partner[w]]
        plus.append((zw + zws) * half)
        anti = (zw - zws) * half
        cw = w.apply(tuple(1 if i == s else 0 for i in range(graph.system.rank)))
        quot.append(anti.div_exact_linear(cw))
    return ZTuple(graph, plus), ZTuple(graph, quot)


# -- Z(E)-modules and their decomposition ----------------------------------


@dataclass(frozen=True)
class LocalSummand:
    """One indecomposable summand: kind in {'M_lower','M_upper','P'} and the
    degree shift of its lowest generator."""

    kind: str
    shift: int


class ZEModule:
    """A graded free module with a degreewise action of xi = (alpha_t, 0).

    Z(E) is generated over S by xi, which satisfies xi^2 = alpha_t xi; a
    module is presented by a FreeModule and the columns of xi per degree.
    """

    def __init__(self, module: FreeModule, alpha, xi_cols):
        self.module = module
        self.alpha = tuple(alpha)
        self.xi_cols = dict(xi_cols)  # degree -> list of dense image columns

    def xi_apply(self, vec, d):
        cols = self.xi_cols[d]
        out = [0] * self.module.dim(d + 2)
        for j, v in enumerate(vec):
            if v:
                for r, a in enumerate(cols[j]):
                    if a:
                        out[r] += a * v
        return out

    def check_square(self, degrees):
        """xi(xi(v)) = alpha * xi(v) on basis vectors of the given degrees."""
        mod = self.module
        for d in degrees:
            if d not in self.xi_cols or (d + 2) not in self.xi_cols:
                continue
            for pos in range(mod.dim(d)):
                vec = [0] * mod.dim(d)
                vec[pos] = 1
                first = self.xi_apply(vec, d)
                twice = self.xi_apply(first, d + 2)
                ref = mod.mul_linear(first, self.alpha, d + 2)
                if any(a != b for a, b in zip(twice, ref)):
                    raise InconsistencyError(
                        f"xi^2 differs from alpha*xi at degree {d}"
                    )
        return True


def decompose_ze_module(zem: ZEModule, cap):
    """Decompose into shifted M(lower), M(upper), P summands, greedily.

    Degree by degree: elements with xi m = alpha m span the M(lower)
    isotypic piece, elements with xi m = 0 span M(upper), and whatever is
    not already generated below (together with those) must start new P
    summands.  The resulting multiset must reproduce the dimension table
    exactly (rank conservation), otherwise the module is not a direct sum
    of these shapes and we abort.
    """
    mod = zem.module
    nvars = mod.ring.nvars
    cap = cap if cap % 2 == 0 else cap - 1
    summands = []
    for d in range(0, cap + 1, 2):
        dim = mod.dim(d)
        if not dim:
            continue
        units = []
        for j in range(dim):
            u = [0] * dim
            u[j] = 1
            units.append(u)
        # span of Z(E) * (everything in degree d-2) inside degree d; the
        # degree-(d-2) piece was absorbed entirely at the previous step
        span = Echelon()
        pdim = mod.dim(d - 2)
        for j in range(pdim):
            u = [0] * pdim
            u[j] = 1
            for k in range(nvars):
                span.insert(sparse(mod.mul_var(u, k, d - 2)))
            span.insert(sparse(zem.xi_apply(u, d - 2)))
        xi_cols = zem.xi_cols.get(d)
        if xi_cols is None:
            raise InputError(f"xi columns missing at degree {d}")
        alpha_cols = [mod.mul_linear(u, zem.alpha, d) for u in units]
        tdim = mod.dim(d + 2)
        my_rows, mx_rows = [], []
        for r in range(tdim):
            rowy, rowx = {}, {}
            for j in range(dim):
                a = xi_cols[j][r]
                if a:
                    rowy[j] = a
                b = a - alpha_cols[j][r]
                if b:
                    rowx[j] = b
            my_rows.append(rowy)
            mx_rows.append(rowx)
        mx = kernel_basis(mx_rows, dim)  # xi m = alpha m
        my = kernel_basis(my_rows, dim)  # xi m = 0

        def _copy_span():
            e = Echelon()
            for row in span.rows.values():
                e.insert(dict(row))
            return e

        ech = _copy_span()
        a_count = sum(1 for v in mx if ech.insert(sparse(v)) is not None)
        ech = _copy_span()
        b_count = sum(1 for v in my if ech.insert(sparse(v)) is not None)
        ech = _copy_span()
        for v in mx:
            ech.insert(sparse(v))
        for v in my:
            ech.insert(sparse(v))
        c_count = dim - ech.dim
        summands.extend([LocalSummand("M_lower", d)] * a_count)
        summands.extend([LocalSummand("M_upper", d)] * b_count)
        summands.extend([LocalSummand("P", d)] * c_count)
    # rank conservation: the summand multiset must reproduce every dimension
    for d in range(0, cap + 1, 2):
        pred = 0
        for sm in summands:
            if sm.kind == "P":
                pred += hilbert_dim(nvars, d - sm.shift)
                pred += hilbert_dim(nvars, d - sm.shift - 2)
            else:
                pred += hilbert_dim(nvars, d - sm.shift)
        if pred != mod.dim(d):
            raise InconsistencyError(
                f"rank bookkeeping mismatch at degree {d}: summands predict "
                f"{pred}, module has {mod.dim(d)}"
            )
    return sorted(summands, key=lambda sm: (sm.kind, sm.shift))


def summand_ze_module(ring: PolyRing, alpha, summands, cap) -> ZEModule:
    """The canonical ZEModule that is the direct sum of the given summands.

    M(lower){-a}: one generator, xi acts as multiplication by alpha.
    M(upper){-b}: one generator, xi acts as zero.
    P{-c}: generators in degrees c and c+2 with xi(p1) = p2 and
    xi(p2) = alpha p2.
    """
    gens = []
    blocks = []  # (kind, first generator index)
    for sm in summands:
        blocks.append((sm.kind, len(gens)))
        if sm.kind == "P":
            gens.extend([sm.shift, sm.shift + 2])
        else:
            gens.append(sm.shift)
    mod = FreeModule(ring, gens)
    alpha = tuple(alpha)
    xi_cols = {}
    cap = cap if cap % 2 == 0 else cap - 1
    for d in range(0, cap + 1, 2):
        cols = []
        for i, m in mod.basis(d):
            unit = [0] * mod.dim(d)
            unit[mod.index(d)[(i, m)]] = 1
            kind, first = next(
                (k, f)
                for (k, f) in blocks
                if f <= i <= f + (1 if k == "P" else 0)
            )
            if kind == "M_lower":
                cols.append(mod.mul_linear(unit, alpha, d))
            elif kind == "M_upper":
                cols.append([0] * mod.dim(d + 2))
            elif i == first:
                # P, first generator: xi sends m*p1 to m*p2
                tindex = mod.index(d + 2)
                out = [0] * mod.dim(d + 2)
                out[tindex[(i + 1, m)]] = 1
                cols.append(out)
            else:
                # P, second generator: xi acts as alpha
                cols.append(mod.mul_linear(unit, alpha, d))
        xi_cols[d] = cols
    return ZEModule(mod, alpha, xi_cols)


def check_sanity(graph: MomentGraph) -> bool:
    """Re-verify the structural invariants of a built graph.

    No double edges between the same endpoints; every edge joins w to tw
    for its recorded reflection with a primitive positive label; distinct
    reflections never carry proportional labels; endpoints comparable
    (lower strictly shorter).  Raises RealizationError on violation.
    """
    seen = set()
    for e in graph.edges:
        key = (e.lower, e.upper)
        if key in seen:
            raise RealizationError(f"double edge at {e.lower} -> {e.upper}")
        seen.add(key)
        if e.lower.length >= e.upper.length:
            raise RealizationError(f"edge {e} is not directed upward")
        if graph.kind == "regular":
            if multiply(e.reflection, e.lower) != e.upper:
                raise RealizationError(f"edge {e} does not match its reflection")
            if not bruhat_leq(e.lower, e.upper):
                raise RealizationError(f"edge {e} joins incomparable vertices")
        if reflection_root(e.reflection).coords != e.label.coords:
            raise RealizationError(f"edge {e} carries the wrong label")
    _check_labels(graph.edges)
    return True


def check_deodhar(graph: MomentGraph) -> bool:
    """#(upward edges at y) >= l(top) - l(y) at every vertex, regular graphs."""
    if graph.kind != "regular":
        raise InputError("the up-edge lower bound applies to regular graphs")
    big_l = graph.top.length
    for w in graph.vertices:
        if len(graph.up[w]) < big_l - w.length:
            return False
    return True


def to_dot(graph: MomentGraph) -> str:
    """Deterministic DOT rendering (vertices by length, edges in order)."""
    lines = ["digraph momentgraph {"]
    lines.append('  rankdir="BT";')
    for w in graph.vertices:
        name = word_str(w.word) or "e"
        lines.append(f'  "{name}" [label="{name} (l={w.length})"];')
    for e in sorted(
        graph.edges, key=lambda e: (sort_key(e.lower), sort_key(e.upper))
    ):
        lo = word_str(e.lower.word) or "e"
        up = word_str(e.upper.word) or "e"
        lines.append(f'  "{lo}" -> "{up}" [label="{e.label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
