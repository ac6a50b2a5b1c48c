import pytest
from hypothesis import given, strategies as st

from foxkit.cup import (
    Bicomplex,
    JMaps,
    TensorElement,
    build_j,
    dual_complex,
    evaluate_cocycle_pair,
    render,
    verify_chain_map,
)
from foxkit.errors import InputError, NotAsphericalError, NotNormalizedError, UndecidableError
from foxkit.fox import Presentation, normalize_presentation
from foxkit.groupring import RingElement
from foxkit.presfile import CORPUS, load_corpus, parse_presentation
from foxkit.words import FreeWord, GroupClass, normalize_word

from strategies import free_words

NORMALIZED = {n: normalize_presentation(load_corpus(n)) for n in CORPUS}


def test_dual_complex_z2():
    d = dual_complex(NORMALIZED["z2"])
    assert d.d_top.shape == (1, 4)
    assert all(len(e) == 2 for e in d.d_top.rows[0])
    assert d.composite().is_zero()


@pytest.mark.parametrize("name", CORPUS)
def test_dual_complex_composite_vanishes(name):
    assert dual_complex(NORMALIZED[name]).composite().is_zero()


def test_free_group_is_degenerate():
    g = GroupClass.free(2)
    p = Presentation("f2", g.names, (), g, aspherical=True)
    d = dual_complex(p)
    assert d.d_mid.shape == (2, 0)
    j = build_j(p)
    assert j.j0 == ()
    assert verify_chain_map(j).ok


def test_refusals():
    with pytest.raises(NotNormalizedError):
        build_j(load_corpus("bs12"))
    text = "class: abelian 2\ngens: x y\nrels:\n  x y x^-1 y^-1\n"
    with pytest.raises(NotAsphericalError):
        dual_complex(normalize_presentation(parse_presentation(text)))
    g = GroupClass.formal(2)
    p = Presentation("f", g.names, (FreeWord([(0, 1), (1, 1)]),), g, aspherical=True)
    with pytest.raises(UndecidableError):
        build_j(p)


def test_two_letter_relator():
    # <x, x' | x' x>: r_{x'} = 1, r_x = x'
    g = GroupClass.free(1)
    images = (FreeWord.gen(0), FreeWord.gen(0, -1))
    p = Presentation("c", ("x", "x'"), (FreeWord([(1, 1), (0, 1)]),), g, aspherical=True, images=images)
    j = build_j(p)
    # d r_x / d y for r_x = x' is nonzero only at y = x'
    assert {k: v.to_text() for k, v in j.second_derivatives.items() if v} == {(0, 0, 1): "1"}
    corr = j.j1[0].component(1, 0)
    # - conj(r_x) (p_{x'} (x) q_r) with conj(phi(x')) = x
    x = normalize_word(g, FreeWord.gen(0)).norm
    assert corr.terms == {((1, 0), (1, 0), (x, x)): -1}
    assert j.j1[1].component(1, 0).is_zero()
    assert verify_chain_map(j).ok


def test_surface_j2_term_count():
    p = NORMALIZED["surface2"]
    j = build_j(p)
    assert len(j.j2) == 1 + p.ngens + len(p.relators)


def test_j0_is_identity_tensor():
    p = NORMALIZED["bs13"]
    j = build_j(p)
    for r, t in enumerate(j.j0):
        assert t == TensorElement.basis(p.group, 0, 0, 0, r)


@pytest.mark.parametrize("name", CORPUS)
def test_chain_map_identities(name):
    p = NORMALIZED[name]
    rep = verify_chain_map(build_j(p))
    assert rep.degree1_ok and rep.degree2_ok
    assert rep.summands_ok
    total = sum(rep.relator_summands, TensorElement(p.group))
    assert total == rep.degree2.component(1, 0)


def _drop(j: JMaps, x: int, key) -> JMaps:
    j1 = list(j.j1)
    j1[x] = TensorElement(j.presentation.group, {k: c for k, c in j1[x].terms.items() if k != key})
    return JMaps(j.presentation, j.j0, tuple(j1), j.j2, j.second_derivatives)


@pytest.mark.parametrize("name", ["z2", "klein", "bs12"])
def test_every_dropped_term_is_detected(name):
    p = NORMALIZED[name]
    j = build_j(p)
    for x in range(p.ngens):
        for key in j.j1[x].component(1, 0).terms:
            rep = verify_chain_map(_drop(j, x, key))
            assert not rep.degree1_ok


def test_cocycle_pair():
    p = NORMALIZED["z2"]
    j = build_j(p)
    one = RingElement.one(p.group)
    assert evaluate_cocycle_pair(j, {2: one}) == {2: -one}
    assert evaluate_cocycle_pair(j, {}) == {}
    assert evaluate_cocycle_pair(j, {0: one, 2: one}) == {0: -one, 2: -one}
    with pytest.raises(InputError):
        evaluate_cocycle_pair(j, {3: one})


def test_render():
    p = NORMALIZED["z2"]
    j = build_j(p)
    lines = render(p, j.j2)
    assert lines[0] == "(1·p0 ⊗ 1·1*) × 1"
    assert "(x^-1·p1[x] ⊗ x^-1·q1[x]) × -1" in lines


@st.composite
def tensor_elements(draw, p):
    g = p.group
    sizes = {0: 1, 1: p.ngens, 2: len(p.relators)}
    qsizes = {0: len(p.relators), 1: p.ngens, 2: 1}
    terms = []
    for _ in range(draw(st.integers(1, 4))):
        dp, dq = draw(st.integers(0, 2)), draw(st.integers(0, 2))
        i, k = draw(st.integers(0, sizes[dp] - 1)), draw(st.integers(0, qsizes[dq] - 1))
        u = normalize_word(g, draw(free_words(g.ngens, 4))).norm
        v = normalize_word(g, draw(free_words(g.ngens, 4))).norm
        terms.append((((dp, dq), (i, k), (u, v)), draw(st.integers(-3, 3))))
    return TensorElement(g, terms)


@pytest.mark.parametrize("name", ["z2", "klein", "bs12", "fbc2"])
@given(data=st.data())
def test_tensor_differential_squares_to_zero(name, data):
    p = NORMALIZED[name]
    bc = Bicomplex.build(p)
    t = data.draw(tensor_elements(p))
    assert bc.differential(bc.differential(t)).is_zero()


@given(data=st.data())
def test_differential_is_equivariant(data):
    p = NORMALIZED["bs12"]
    bc = Bicomplex.build(p)
    t = data.draw(tensor_elements(p))
    x = RingElement.from_word(p.group, data.draw(free_words(2, 4)))
    assert bc.differential(t.act(x)) == bc.differential(t).act(x)
