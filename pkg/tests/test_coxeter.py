"""Group arithmetic, normal forms, roots and Bruhat order.

Types A2 and A3 are cross-checked against hand-rolled symmetric-group
permutations, which gives an oracle for multiplication, faithfulness and
length that shares no code with the matrix representation.
"""

import functools

import pytest

from bmsheaves.coxeter import (
    bruhat_interval,
    bruhat_leq,
    element_ball,
    inversions,
    is_reflection,
    left_descents,
    load_system,
    make_system,
    multiply,
    normal_form,
    parse_word,
    reflection_root,
    right_descents,
    sort_key,
    word_str,
)
from bmsheaves.errors import InputError


def elt(system, text):
    return system.element(parse_word(text, system.rank))


# -- symmetric-group oracle for the type-A presets ---------------------------


def _perm_compose(p, q):
    return tuple(p[q[k]] for k in range(len(p)))


def _perm_of(w, n):
    gens = []
    for i in range(n - 1):
        p = list(range(n))
        p[i], p[i + 1] = p[i + 1], p[i]
        gens.append(tuple(p))
    return functools.reduce(
        _perm_compose, (gens[s] for s in w.word), tuple(range(n))
    )


def _perm_inversions(p):
    n = len(p)
    return sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])


def test_a2_matches_the_symmetric_group(a2):
    ball = element_ball(a2, 10)
    assert len(ball) == 6
    perms = {w: _perm_of(w, 3) for w in ball}
    assert len(set(perms.values())) == 6
    for a in ball:
        for b in ball:
            assert perms[multiply(a, b)] == _perm_compose(perms[a], perms[b])
    for w in ball:
        assert w.length == _perm_inversions(perms[w])


def test_a3_matches_the_symmetric_group(a3):
    ball = element_ball(a3, 10)
    assert len(ball) == 24
    perms = {w: _perm_of(w, 4) for w in ball}
    assert len(set(perms.values())) == 24
    for a in ball:
        for b in ball:
            assert perms[multiply(a, b)] == _perm_compose(perms[a], perms[b])
    for w in ball:
        assert w.length == _perm_inversions(perms[w])


# -- normal forms -------------------------------------------------------------


def test_braid_relations_collapse_to_one_normal_form(a2, b2, g2):
    assert elt(a2, "121").word == elt(a2, "212").word == (0, 1, 0)
    assert elt(a2, "1221").word == ()
    assert elt(b2, "1212").word == elt(b2, "2121").word
    assert elt(b2, "1212").length == 4
    assert elt(g2, "121212").word == elt(g2, "212121").word
    assert elt(g2, "121212").length == 6


def test_universal_systems_have_no_braid_relations(u2):
    assert elt(u2, "1212").length == 4
    assert elt(u2, "12121").length == 5
    assert elt(u2, "11").word == ()
    assert elt(u2, "212").word == (1, 0, 1)


def test_shortlex_picks_the_smallest_reduced_word(a3):
    # s1 and s3 commute, so 31 normalizes to 13
    assert elt(a3, "31").word == (0, 2)
    assert normal_form(a3, (2, 0, 1)).word == (0, 2, 1)


def test_identity_spellings_and_word_roundtrip(a2):
    assert parse_word("", 2) == ()
    assert parse_word("e", 2) == ()
    assert parse_word("2,1,2", 2) == (1, 0, 1)
    assert str(a2.identity) == "e"
    assert str(elt(a2, "121")) == "121"
    assert word_str((0, 1, 0)) == "121"
    with pytest.raises(InputError):
        parse_word("13", 2)
    with pytest.raises(InputError):
        parse_word("1x", 2)
    with pytest.raises(InputError, match="parse_word"):
        a2.element("121")


# -- descents and reflections --------------------------------------------------


def test_descent_sets(a2):
    w0 = elt(a2, "121")
    assert right_descents(w0) == {0, 1}
    assert left_descents(w0) == {0, 1}
    w = elt(a2, "12")
    assert right_descents(w) == {1}
    assert left_descents(w) == {0}
    assert right_descents(a2.identity) == set()


def test_reflections_and_roots(a2, b2):
    t = elt(a2, "121")
    assert is_reflection(t)
    assert not is_reflection(elt(a2, "12"))
    assert reflection_root(t).coords == (1, 1)
    assert reflection_root(elt(a2, "1")).coords == (1, 0)
    # B2 has four reflections with the four distinct positive roots
    refls = [w for w in element_ball(b2, 4) if w.length % 2 and is_reflection(w)]
    assert len(refls) == 4
    roots = {reflection_root(t).coords for t in refls}
    assert roots == {(1, 0), (0, 1), (1, 1), (1, 2)}


def test_inversion_roots_count_the_length(b2, g2):
    for system in (b2, g2):
        for w in element_ball(system, 6):
            assert len(inversions(w)) == w.length


# -- Bruhat order ---------------------------------------------------------------


def test_interval_below_the_longest_element_is_the_whole_group(a2):
    assert len(bruhat_interval(elt(a2, "121"))) == 6


def _closure_oracle(ball):
    """Reflexive-transitive closure of the covering relation x = y*t,
    l(x) = l(y) + 1, t a reflection."""
    refls = [t for t in ball if is_reflection(t)]
    leq = {(w, w) for w in ball}
    covers = {}
    for y in ball:
        ups = []
        for t in refls:
            x = multiply(y, t)
            if x.length == y.length + 1 and x.word in {w.word for w in ball}:
                ups.append(x)
        covers[y] = ups
    changed = True
    while changed:
        changed = False
        for y in ball:
            for m in covers[y]:
                for x in ball:
                    if (m, x) in leq and (y, x) not in leq:
                        leq.add((y, x))
                        changed = True
    return leq


def test_bruhat_order_matches_the_cover_closure(a3):
    ball = element_ball(a3, 10)
    assert len([t for t in ball if is_reflection(t)]) == 6
    oracle = _closure_oracle(ball)
    for y in ball:
        for x in ball:
            assert bruhat_leq(y, x) == ((y, x) in oracle)


def test_interval_ordering_is_by_length_then_word(b2):
    interval = bruhat_interval(elt(b2, "1212"))
    assert [w.word for w in interval] == sorted(
        (w.word for w in interval), key=lambda wd: (len(wd), wd)
    )
    assert list(interval) == sorted(interval, key=sort_key)


# -- input validation ------------------------------------------------------------


def test_unrealizable_bond_orders_are_rejected():
    with pytest.raises(InputError):
        make_system([[1, 5], [5, 1]])
    with pytest.raises(InputError):
        make_system([[1, 7], [7, 1]])


def test_system_files_missing_required_keys_are_rejected(tmp_path):
    path = tmp_path / "system.json"
    path.write_text('{"cartan": [[2, -1], [-1, 2]]}')
    with pytest.raises(InputError, match="missing key 'rank'"):
        load_system(path)


def test_incompatible_cartan_matrices_are_rejected():
    with pytest.raises(InputError):
        make_system([[1, 3], [3, 1]], cartan=[[2, -1], [-2, 2]])
    with pytest.raises(InputError):
        make_system([[1, 3], [3, 1]], cartan=[[2, 1], [1, 2]])
    with pytest.raises(InputError):
        make_system([[1, 0], [0, 1]], cartan=[[2, -1], [-1, 2]])
    # the compatible one goes through
    make_system([[1, 4], [4, 1]], cartan=[[2, -2], [-1, 2]])
