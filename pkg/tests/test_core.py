import pytest

from gentle import (NotComposable, PresentationError, compose, dim_projective,
                    maximal_extension, parse_presentation, path_basis,
                    validate_gentle)

from corpus import A0, KRONECKER, full_corpus, load


def test_parse_a0():
    pres = parse_presentation(A0)
    assert pres.name == "a0"
    assert len(pres.vertices) == 7
    assert len(pres.arrows) == 6
    assert pres.relations == {("a1", "a3")}


def test_parse_single_vertex_no_arrows():
    pres = parse_presentation("algebra k\nvertices 1\n")
    assert validate_gentle(pres).ok
    assert [p.label() for p in path_basis(pres)] == ["e_1"]


def test_parse_rejects_non_composable_relation():
    text = "algebra t\nvertices 1 2 3\narrow a1 : 1 -> 2\narrow a2 : 2 -> 3\nrel a2 a1\n"
    with pytest.raises(PresentationError, match="not composable"):
        parse_presentation(text)


@pytest.mark.parametrize("text,match", [
    ("vertices 1\narrow a : 1 -> 1 -> 1\n", "expected"),
    ("vertices 1 1\n", "duplicate vertex"),
    ("vertices 1\narrow a : 1 -> 2\n", "unknown vertex"),
    ("vertices 1\nrel a b\n", "unknown arrow"),
    ("vertices 1\nbogus x\n", "unknown directive"),
])
def test_parse_errors_carry_line_numbers(text, match):
    with pytest.raises(PresentationError, match=match) as err:
        parse_presentation(text)
    assert "line" in str(err.value)


def test_validate_a0_passes():
    report = validate_gentle(parse_presentation(A0))
    assert report.ok
    assert report.violations == ()
    assert report.connected


def test_three_parallel_arrows_violate_axiom_one():
    text = ("algebra t\nvertices 1 2\n"
            "arrow a : 1 -> 2\narrow b : 1 -> 2\narrow c : 1 -> 2\n")
    report = validate_gentle(parse_presentation(text))
    assert not report.ok
    assert any(v.axiom == "axiom-1" for v in report.violations)


def test_relation_free_loop_is_infinite_dimensional():
    report = validate_gentle(parse_presentation("algebra t\nvertices 1\narrow c : 1 -> 1\n"))
    assert not report.ok
    assert any(v.axiom == "finite-dimension" for v in report.violations)


def test_square_zero_loop_is_fine():
    report = validate_gentle(parse_presentation(
        "algebra t\nvertices 1\narrow c : 1 -> 1\nrel c c\n"))
    assert report.ok


@pytest.mark.parametrize("target", ["1", "3", "5"])
def test_extra_arrow_out_of_vertex_2_breaks_a0(target):
    text = A0 + f"arrow extra : 2 -> {target}\n"
    report = validate_gentle(parse_presentation(text))
    assert not report.ok


def _brute_force_paths(pres):
    # independent breadth-first enumeration of relation-free paths
    found = [((), v, v) for v in pres.vertices]
    frontier = [((a.name,), a.source, a.target) for a in pres.arrows]
    while frontier:
        found.extend(frontier)
        nxt = []
        for arrs, s, t in frontier:
            for b in pres.arrows:
                if b.source == t and (arrs[-1], b.name) not in pres.relations:
                    nxt.append((arrs + (b.name,), s, b.target))
        frontier = nxt
    return found


def test_a0_basis_matches_brute_force():
    pres = load(A0)
    basis = path_basis(pres)
    brute = _brute_force_paths(pres)
    assert len(basis) == len(brute) == 20
    assert {p.arrows for p in basis} == {arrs for arrs, _, _ in brute}


def test_a0_basis_from_vertex_2():
    pres = load(A0)
    from_2 = [p.label() for p in path_basis(pres) if p.source == "2"]
    assert from_2 == ["e_2", "a2", "a3", "a3.a4", "a3.a4.a5", "a3.a4.a5.a6"]
    assert dim_projective(pres, "2") == 6


def test_kronecker_basis():
    pres = load(KRONECKER)
    assert [p.label() for p in path_basis(pres)] == ["e_1", "a", "b", "e_2"]
    assert dim_projective(pres, "1") == 3
    assert dim_projective(pres, "2") == 1


def test_basis_is_closed_under_subpaths_and_ordered():
    for pres in full_corpus(random_count=6):
        basis = path_basis(pres)
        arrow_sets = {p.arrows for p in basis}
        for p in basis:
            for i in range(p.length):
                for j in range(i + 1, p.length + 1):
                    assert p.arrows[i:j] in arrow_sets or i == j
        keys = [(p.source, p.length, p.arrows) for p in basis]
        assert keys == sorted(keys)


def test_maximal_extension_a0():
    pres = load(A0)
    ext = maximal_extension(pres, pres.path(["a1"]))
    assert ext.tilde.label() == "a1.a2"
    assert ext.hat.label() == "a2"
    assert ext.check is None and ext.check_length == 0

    ext = maximal_extension(pres, pres.path(["a3"]))
    assert ext.tilde.label() == "a3.a4.a5.a6"
    assert ext.check.label() == "a2"


def test_maximal_extension_kronecker():
    pres = load(KRONECKER)
    ext = maximal_extension(pres, pres.path(["a"]))
    assert ext.tilde.label() == "a"
    assert ext.hat.is_trivial()
    assert ext.check.label() == "b"


def test_compose_relation_and_identity():
    pres = load(A0)
    a1, a2, a3 = pres.path(["a1"]), pres.path(["a2"]), pres.path(["a3"])
    assert compose(pres, a1, a3) is None
    assert compose(pres, a1, a2).label() == "a1.a2"
    e1 = pres.trivial_path("1")
    assert compose(pres, e1, a1) == a1
    with pytest.raises(NotComposable):
        compose(pres, a2, a1)


def test_compose_associative_brute_force():
    pres = load(A0)
    basis = path_basis(pres)

    def mul(p, q):
        if p is None or q is None or p.target != q.source:
            return None
        return compose(pres, p, q)

    for p in basis:
        for q in basis:
            for r in basis:
                if p.target == q.source and q.target == r.source:
                    assert mul(mul(p, q), r) == mul(p, mul(q, r))


def test_dim_projective_equals_basis_count_everywhere():
    for pres in full_corpus(random_count=8):
        basis = path_basis(pres)
        for v in pres.vertices:
            assert dim_projective(pres, v) == sum(1 for p in basis if p.source == v)


def test_a0_sink_has_dimension_one():
    assert dim_projective(load(A0), "7") == 1
