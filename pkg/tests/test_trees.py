import itertools
import random

import pytest
from hypothesis import given, strategies as st

from dartree.errors import (
    BranchingBeyondIndexBound,
    CycleDetected,
    DuplicateVertex,
    InvalidParameter,
    LeafBeforeTruncation,
    MultipleRoots,
    OrphanVertex,
    VertexBeyondTruncation,
)
from dartree.trees import (
    branching_index,
    canonical_form,
    from_json,
    generation_count,
    graph_isomorphic,
    make_standard,
    random_prefix,
    relabel,
    validate_tree,
)


def chain(n):
    return [(0, None)] + [(i, i - 1) for i in range(1, n + 1)]


def brute_isomorphic(t1, t2):
    """Search all depth-preserving bijections of the prefixes."""
    if t1.D != t2.D or len(t1) != len(t2):
        return False

    def match(v, w):
        c1, c2 = t1.children[v], t2.children[w]
        if len(c1) != len(c2):
            return False
        for perm in itertools.permutations(c2):
            if all(match(a, b) for a, b in zip(c1, perm)):
                return True
        return False

    return match(t1.root, t2.root)


def test_ray_is_valid():
    t = validate_tree(chain(4), 4)
    assert branching_index(t) == 0
    assert generation_count(t, 7) == 1


def test_T20(T20):
    assert branching_index(T20) == 1
    assert [generation_count(T20, n) for n in (0, 1, 5)] == [1, 2, 2]


def test_leaf_before_truncation():
    with pytest.raises(LeafBeforeTruncation):
        validate_tree([(0, None), (1, 0), (2, 0), (3, 2), (4, 3)], 3)


@pytest.mark.parametrize("raw, D, exc", [
    ([(0, None), (1, None)], 0, MultipleRoots),
    ([], 0, MultipleRoots),
    ([(0, None), (1, 5)], 1, OrphanVertex),
    ([(0, None), (2, 1), (1, 0)], 2, OrphanVertex),
    ([(0, 1), (1, 0)], 1, CycleDetected),
    ([(0, None), (1, 0), (2, 3), (3, 2)], 1, CycleDetected),
    ([(0, None), (0, None)], 0, DuplicateVertex),
    ([(0, None), (1, 0), (2, 1)], 1, VertexBeyondTruncation),
    ([(0, None), (1, 0), (2, 0)], 1, BranchingBeyondIndexBound),
    ([(0, None), (1, 0), (2, 1), (3, 1)], 2, BranchingBeyondIndexBound),
])
def test_validation_errors(raw, D, exc):
    with pytest.raises(exc):
        validate_tree(raw, D)


def test_standard_generations():
    assert make_standard("T_n0_0", D=3, n0=3).generations(5) == [1, 3, 3, 3, 3, 3]
    assert make_standard("T_1j", k=2, j=1).generations(4) == [1, 2, 4, 4, 4]
    assert make_standard("T_1j", k=2, j=2).generations(4) == [1, 2, 4, 4, 4]
    assert make_standard("binary", D=4, depth=2).generations(4) == [1, 2, 4, 4, 4]
    assert make_standard("binary", D=4, depth=2).branching_index == 2


@pytest.mark.parametrize("kind, params, D", [
    ("T_1j", {"k": 2, "j": 3}, 4),
    ("T_n0_0", {"n0": 0}, 3),
    ("T_n0_0", {"n0": 2}, 1),
    ("binary", {"depth": 3}, 3),
    ("nope", {}, 3),
])
def test_standard_invalid(kind, params, D):
    with pytest.raises(InvalidParameter):
        make_standard(kind, D=D, **params)


def test_canonical_codes():
    assert canonical_form(validate_tree(chain(2), 2)) == "((()))"
    t11 = make_standard("T_1j", D=3, k=2, j=1)
    t12 = make_standard("T_1j", D=3, k=2, j=2)
    assert canonical_form(t11) != canonical_form(t12)
    assert not brute_isomorphic(t11, t12)


def test_graph_isomorphic_examples(ray, T20, B2):
    assert graph_isomorphic(ray, make_standard("ray", D=2))
    assert not graph_isomorphic(make_standard("T_1j", k=2, j=1), make_standard("T_1j", k=2, j=2))
    assert not graph_isomorphic(T20, B2)
    # re-truncation to the smaller depth
    assert graph_isomorphic(T20, make_standard("T_n0_0", D=2, n0=2))


@given(st.integers(0, 10 ** 6))
def test_canonical_form_relabel_invariant(seed):
    rng = random.Random(seed)
    t = random_prefix(rng, max_index=3, max_children=3)
    s = relabel(t, rng)
    assert canonical_form(s) == canonical_form(t)
    assert graph_isomorphic(s, t)


@given(st.integers(0, 10 ** 6))
def test_canonical_form_agrees_with_bruteforce(seed):
    rng = random.Random(seed)
    t1 = random_prefix(rng, max_index=2, max_children=3, D=3)
    t2 = random_prefix(rng, max_index=2, max_children=3, D=3)
    assert (canonical_form(t1) == canonical_form(t2)) == brute_isomorphic(t1, t2)


@given(st.integers(0, 10 ** 6))
def test_generation_properties(seed):
    t = random_prefix(random.Random(seed), max_index=3, max_children=4, D=5)
    g = t.generations(8)
    assert all(x <= y for x, y in zip(g, g[1:]))
    assert len(set(g[t.branching_index:])) == 1
    for n in range(t.D):
        assert g[n + 1] - g[n] == sum(len(t.children[v]) - 1 for v in t.level(n))


def test_isomorphism_is_equivalence():
    rng = random.Random(3)
    trees = [random_prefix(rng, max_index=2, max_children=2, D=3) for _ in range(25)]
    for a in trees:
        assert graph_isomorphic(a, a)
        for b in trees:
            assert graph_isomorphic(a, b) == graph_isomorphic(b, a)
            for c in trees:
                if graph_isomorphic(a, b) and graph_isomorphic(b, c):
                    assert graph_isomorphic(a, c)


def test_json_roundtrip(B2):
    text = B2.to_json()
    again = from_json(text)
    assert again.to_json() == text
    assert again.vertices == B2.vertices


def test_json_errors():
    with pytest.raises(InvalidParameter):
        from_json("not json")
    with pytest.raises(InvalidParameter):
        from_json('{"vertices": []}')


def test_extend_and_truncate(T20):
    e = T20.extend(10)
    assert e.generations(10) == T20.generations(10)
    assert graph_isomorphic(e, T20)
    assert T20.truncate(2).D == 2
