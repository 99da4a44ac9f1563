"""Moment graphs on Bruhat intervals, their structure algebra and the
decomposition of modules over a single edge's algebra."""

import random

import pytest

from bmsheaves.coxeter import parse_word
from bmsheaves.errors import InconsistencyError, InputError, RealizationError
from bmsheaves.gradedlin import FreeModule, PolyRing
from bmsheaves.momentgraph import (
    Edge,
    LocalSummand,
    MomentGraph,
    ZEModule,
    ZTuple,
    build_graph,
    c_invariant,
    check_deodhar,
    check_sanity,
    decompose_ze_module,
    sigma,
    split_invariant,
    summand_ze_module,
    to_dot,
    z_contains,
    ze_projection_generators,
)
from bmsheaves.polynomials import Poly, linear_form
from bmsheaves.rationals import QQ
from bmsheaves.verify import scramble_ze_module


def elt(system, text):
    return system.element(parse_word(text, system.rank))


# -- graph shapes ----------------------------------------------------------------


def test_full_dihedral_graphs_have_m_squared_edges(a2, b2, g2):
    for system, m in ((a2, 3), (b2, 4), (g2, 6)):
        w0 = system.element(tuple([0, 1] * m)[:m])
        graph = build_graph(system, w0)
        assert len(graph.vertices) == 2 * m
        assert len(graph.edges) == m * m
        assert graph.vertices[0] == system.identity
        assert graph.vertices[-1] == w0
        assert check_sanity(graph)
        assert check_deodhar(graph)


def test_proper_interval_is_a_square(a2):
    graph = build_graph(a2, elt(a2, "12"))
    assert len(graph.vertices) == 4
    assert len(graph.edges) == 4
    assert len(graph.up[a2.identity]) == 2
    assert len(graph.down[elt(a2, "12")]) == 2
    assert check_sanity(graph)


def test_quotient_graph_uses_minimal_coset_representatives(a2):
    w0 = elt(a2, "121")
    graph = build_graph(a2, w0, kind="quotient", s=0)
    assert graph.kind == "quotient"
    assert [str(w) for w in graph.vertices] == ["e", "2", "12"]
    assert graph.top == elt(a2, "12")
    assert len(graph.edges) == 3
    assert check_sanity(graph)
    with pytest.raises(InputError):
        check_deodhar(graph)  # the up-edge bound is stated for regular graphs


def test_sanity_rejects_tampered_graphs(a2):
    graph = build_graph(a2, elt(a2, "121"))

    def rebuilt(edges):
        return MomentGraph(a2, "regular", graph.top, graph.vertices, edges)

    flipped = Edge(
        graph.edges[0].upper,
        graph.edges[0].lower,
        graph.edges[0].reflection,
        graph.edges[0].label,
    )
    with pytest.raises(RealizationError):
        check_sanity(rebuilt((flipped,) + graph.edges[1:]))
    with pytest.raises(RealizationError):
        check_sanity(rebuilt(graph.edges + (graph.edges[0],)))
    e0, e1 = graph.edges[0], next(
        e for e in graph.edges if e.label.coords != graph.edges[0].label.coords
    )
    mislabeled = Edge(e0.lower, e0.upper, e0.reflection, e1.label)
    with pytest.raises(RealizationError):
        check_sanity(rebuilt((mislabeled,) + graph.edges[1:]))


def test_dot_export_is_deterministic(b2):
    w0 = elt(b2, "1212")
    first = to_dot(build_graph(b2, w0))
    second = to_dot(build_graph(b2, w0))
    assert first == second
    assert first.startswith("digraph momentgraph {\n")
    assert '"e" -> "1"' in first
    assert first.endswith("}\n")


# -- the structure algebra ---------------------------------------------------------


def test_sigma_tuples_satisfy_the_edge_congruences(a2, b2):
    for system in (a2, b2):
        w0 = system.element((0, 1, 0, 1)[: 3 if system is a2 else 4])
        graph = build_graph(system, w0)
        for alpha in ((1, 0), (0, 1), (2, -1)):
            assert z_contains(graph, sigma(graph, alpha))
        assert c_invariant(graph, 0) == sigma(graph, (1, 0))
        assert c_invariant(graph, 1) == sigma(graph, (0, 1))


def test_constant_and_nonmember_tuples(a1):
    graph = build_graph(a1, a1.generators[0])
    alpha = linear_form((1,))
    zero = Poly.zero(1)
    one = Poly.constant(1, 1)
    assert z_contains(graph, ZTuple(graph, [one, one]))
    assert z_contains(graph, ZTuple(graph, [alpha, zero]))
    assert not z_contains(graph, ZTuple(graph, [one, zero]))


def test_sigma_on_a_quotient_graph_requires_invariance(a2):
    graph = build_graph(a2, elt(a2, "121"), kind="quotient", s=0)
    assert z_contains(graph, sigma(graph, (1, 2)))  # fixed by the first generator
    with pytest.raises(InputError):
        sigma(graph, (1, 0))


def test_invariant_split_on_the_smallest_graph(a1):
    graph = build_graph(a1, a1.generators[0])
    alpha = linear_form((1,))
    z = ZTuple(graph, [alpha, Poly.zero(1)])
    plus, quot = split_invariant(graph, 0, z)
    half = QQ(1, 2)
    assert plus == ZTuple(graph, [alpha * half, alpha * half])
    assert quot == ZTuple(graph, [Poly.constant(1, half), Poly.constant(1, half)])
    assert plus + c_invariant(graph, 0) * quot == z
    # tuples outside Z do not split
    with pytest.raises(InputError):
        split_invariant(graph, 0, ZTuple(graph, [Poly.constant(1, 1), Poly.zero(1)]))


def test_invariant_split_roundtrip_in_type_b2(b2):
    graph = build_graph(b2, elt(b2, "1212"))
    z = sigma(graph, (1, -1)) * sigma(graph, (0, 1)) + sigma(graph, (2, 1))
    assert z_contains(graph, z)
    for s in (0, 1):
        plus, quot = split_invariant(graph, s, z)
        assert plus + c_invariant(graph, s) * quot == z
        assert z_contains(graph, plus)
        assert z_contains(graph, quot)


def test_edge_projection_generators(a2):
    graph = build_graph(a2, elt(a2, "121"))
    edge = graph.up[a2.identity][0]
    (lo1, up1), (lo2, up2) = ze_projection_generators(graph, edge)
    assert lo1 == Poly.constant(2, 1) and up1 == Poly.constant(2, 1)
    assert lo2 == linear_form(edge.label.coords) and up2 == Poly.zero(2)


# -- modules over one edge's algebra ------------------------------------------------


def test_canonical_summands_decompose_to_themselves():
    ring = PolyRing(2)
    alpha = (1, 1)
    summands = [
        LocalSummand("M_lower", 0),
        LocalSummand("M_upper", 2),
        LocalSummand("P", 0),
    ]
    zem = summand_ze_module(ring, alpha, summands, 10)
    zem.check_square(range(0, 8, 2))
    got = decompose_ze_module(zem, 8)
    assert got == sorted(summands, key=lambda sm: (sm.kind, sm.shift))


def test_single_upper_line_is_recognized():
    ring = PolyRing(2)
    zem = summand_ze_module(ring, (2, -1), [LocalSummand("M_upper", 0)], 8)
    assert decompose_ze_module(zem, 6) == [LocalSummand("M_upper", 0)]


def test_decomposition_survives_a_change_of_presentation():
    ring = PolyRing(2)
    rng = random.Random(3)
    summands = [LocalSummand("P", 0), LocalSummand("M_lower", 2)]
    zem = summand_ze_module(ring, (1, -2), summands, 8)
    scrambled = scramble_ze_module(zem, rng, 8)
    scrambled.check_square(range(0, 5, 2))
    got = decompose_ze_module(scrambled, 6)
    assert got == sorted(summands, key=lambda sm: (sm.kind, sm.shift))


def test_check_square_rejects_an_inconsistent_action():
    ring = PolyRing(1)
    free = FreeModule(ring, (0,))
    unit = [1]
    xi_cols = {
        0: [free.mul_linear(unit, (1,), 0)],  # xi acts as alpha in degree 0
        2: [[0] * free.dim(4)],  # but as zero afterwards
    }
    zem = ZEModule(free, (1,), xi_cols)
    with pytest.raises(InconsistencyError):
        zem.check_square([0])
