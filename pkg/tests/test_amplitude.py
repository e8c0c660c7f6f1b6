import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from octqft.amplitude import (
    ClosedBrane,
    ClosedString,
    Corner,
    FaceCycle,
    ScatteringDiagram,
    brane_face,
    check_diagram,
    disjoint_union,
    evaluate_amplitude,
    gauge_transform,
    principal_log,
    random_diagram,
    rotate_component,
    string_face,
    subdivide_face,
    thin_limit,
)
from octqft.errors import InvalidParams, NonUnitTwist, NotAFaceCycle, NotPositiveDefinite, OpenCycle, ShapeMismatch
from octqft.io import diagram_to_json


def two_face_cycle(l1, l2, n=2):
    corners = (Corner("a", n), Corner("b", n))
    cyc = FaceCycle("c", (brane_face(l1, "a", "b"), brane_face(l2, "b", "a")))
    return ScatteringDiagram(corners, (cyc,), 0)


def same(d1, d2):
    return diagram_to_json(d1) == diagram_to_json(d2)


def close(a, b, rel=1e-12):
    return abs(a - b) <= rel * max(1.0, abs(b))


def test_amplitude_examples():
    assert evaluate_amplitude(ScatteringDiagram(area=1j * np.pi)) == pytest.approx(-1)
    assert evaluate_amplitude(ScatteringDiagram(components=(ClosedBrane("b", np.diag([1, -1])),))) == 0
    assert evaluate_amplitude(two_face_cycle([[1, 0], [0, 2]], np.eye(2))) == 3


def test_cycle_order_is_lambda_n_after_lambda_1():
    rng = np.random.default_rng(0)
    mats = [rng.normal(size=(2, 2)) for _ in range(3)]
    corners = tuple(Corner(x, 2) for x in "abc")
    faces = (brane_face(mats[0], "a", "b"), brane_face(mats[1], "b", "c"), brane_face(mats[2], "c", "a"))
    d = ScatteringDiagram(corners, (FaceCycle("c", faces),))
    assert evaluate_amplitude(d) == pytest.approx(np.trace(mats[2] @ mats[1] @ mats[0]))


def test_string_faces_and_rectangular_maps():
    corners = (Corner("a", 2), Corner("b", 3))
    m1 = np.arange(6).reshape(3, 2)
    m2 = np.ones((2, 3))
    cyc = FaceCycle("c", (string_face(m1, "a", "b"), brane_face(m2, "b", "a")))
    d = ScatteringDiagram(corners, (cyc, ClosedString("s", 2.0, "outgoing")))
    assert evaluate_amplitude(d) == pytest.approx(2 * np.trace(m2 @ m1))


def test_gauge_examples():
    d = ScatteringDiagram(components=(ClosedString("s", 2.0),))
    assert gauge_transform(d, {"s": 1.0}) == d
    g = gauge_transform(d, {"s": 1j})
    assert g.component("s").z == pytest.approx(-2j)
    assert g.area == pytest.approx(-1j * np.pi / 2)
    assert evaluate_amplitude(g) == pytest.approx(2)
    cyc = two_face_cycle(np.diag([1, 2]), np.eye(2))
    flipped = gauge_transform(cyc, {"c": -1})
    assert flipped.area == pytest.approx(-1j * np.pi)
    assert evaluate_amplitude(flipped) == pytest.approx(3)


def test_principal_log_branch():
    assert principal_log(-1) == pytest.approx(1j * np.pi)
    assert principal_log(complex(-1, -0.0)) == pytest.approx(1j * np.pi)


def test_gauge_rejects_non_unit_and_unknown():
    d = ScatteringDiagram(components=(ClosedString("s", 2.0),))
    with pytest.raises(NonUnitTwist):
        gauge_transform(d, {"s": 2.0})
    with pytest.raises(InvalidParams):
        gauge_transform(d, {"t": 1.0})


def test_gauge_explicit_branch():
    d = ScatteringDiagram(components=(ClosedString("s", 2.0),))
    g = gauge_transform(d, {"s": -1}, area_shift=1j * np.pi)
    assert evaluate_amplitude(g) == pytest.approx(2)
    with pytest.raises(InvalidParams):
        gauge_transform(d, {"s": -1}, area_shift=0.5)


def test_rotation_examples():
    d = two_face_cycle(np.diag([1, 2]), [[0, 1], [1, 0]])
    assert same(rotate_component(d, "c", 0), d)
    assert same(rotate_component(d, "c", 2), d)
    assert not same(rotate_component(d, "c", 1), d)
    with pytest.raises(NotAFaceCycle):
        rotate_component(ScatteringDiagram(components=(ClosedString("s", 1.0),)), "s", 1)


def test_union_examples():
    d = two_face_cycle(np.diag([1, 2]), np.eye(2))
    assert evaluate_amplitude(disjoint_union(d, ScatteringDiagram())) == evaluate_amplitude(d)
    s2 = ScatteringDiagram(components=(ClosedString("s", 2.0),))
    s3 = ScatteringDiagram(components=(ClosedString("s", 3.0),))
    u = disjoint_union(s2, s3)
    assert evaluate_amplitude(u) == 6
    assert len({c.id for c in u.components}) == 2
    a, b = ScatteringDiagram(area=0.3), ScatteringDiagram(area=0.4 + 1j)
    assert evaluate_amplitude(disjoint_union(a, b)) == pytest.approx(cmath.exp(-0.7 - 1j))
    uu = disjoint_union(d, d)
    check_diagram(uu)


def test_check_diagram_errors():
    corners = (Corner("a", 2), Corner("b", 2))
    with pytest.raises(OpenCycle):
        check_diagram(ScatteringDiagram(corners, (FaceCycle("c", (brane_face(np.eye(2), "a", "b"),)),)))
    with pytest.raises(ShapeMismatch):
        check_diagram(two_face_cycle(np.ones((3, 2)), np.eye(2)))
    with pytest.raises(InvalidParams):
        check_diagram(ScatteringDiagram((Corner("a", 1), Corner("a", 1)), ()))
    with pytest.raises(InvalidParams):  # corner on zero faces
        check_diagram(ScatteringDiagram((Corner("a", 1),), ()))
    with pytest.raises(NotPositiveDefinite):
        check_diagram(ScatteringDiagram((Corner("a", 1, [[-1]]), Corner("b", 1)), two_face_cycle(1, 1, 1).components))
    with pytest.raises(InvalidParams):
        Corner("a", 0)


def test_subdivision_example():
    d = two_face_cycle(np.diag([1, 2]), [[0, 1], [1, 0]])
    s = subdivide_face(d, "c", 0, [[2, 1], [0, 1]], corner_id="m")
    check_diagram(s)
    assert len(s.component("c").faces) == 3
    assert close(evaluate_amplitude(s), evaluate_amplitude(d))
    with pytest.raises(ShapeMismatch):
        subdivide_face(d, "c", 0, np.eye(3))


def test_thin_limit_forgets_interior_data():
    corners = (Corner("a", 2), Corner("b", 2), Corner("x", 2))
    state = np.array([[1.0, 2.0], [3.0, 4.0]])

    def diagram(transport, area, hol):
        cyc = FaceCycle("c", (string_face(state, "a", "b"), brane_face(transport, "b", "x"), brane_face(transport @ transport, "x", "a")))
        return ScatteringDiagram(corners, (cyc, ClosedBrane("h", hol)), area)

    d1 = diagram(np.diag([2.0, 3.0]), 0.5 + 1j, np.diag([1.0, 5.0]))
    d2 = diagram(np.array([[0.0, 1.0], [-1.0, 0.0]]), -2.0, np.eye(2) * 7)
    assert evaluate_amplitude(d1) != evaluate_amplitude(d2)
    t1, t2 = thin_limit(d1), thin_limit(d2)
    assert evaluate_amplitude(t1) == evaluate_amplitude(t2) == np.trace(state) * 2


def test_random_diagram_is_valid_and_seeded():
    for seed in range(20):
        d = random_diagram(seed)
        check_diagram(d)
    assert same(random_diagram(7), random_diagram(7))
    assert not same(random_diagram(7), random_diagram(8))


# properties ------------------------------------------------------------------

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds, seeds)
def test_gauge_invariance(dseed, tseed):
    d = random_diagram(dseed)
    rng = np.random.default_rng(tseed)
    twists = {c.id: np.exp(1j * rng.uniform(-np.pi, np.pi)) for c in d.components if rng.random() < 0.8}
    a = evaluate_amplitude(d)
    assert abs(evaluate_amplitude(gauge_transform(d, twists)) - a) <= 1e-9 * (1 + abs(a))


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(-10, 10))
def test_rotation_invariance(seed, k):
    d = random_diagram(seed)
    a = evaluate_amplitude(d)
    for comp in d.components:
        if isinstance(comp, FaceCycle):
            assert close(evaluate_amplitude(rotate_component(d, comp.id, k)), a)


@settings(max_examples=60, deadline=None)
@given(seeds, seeds)
def test_union_multiplicative(s1, s2):
    d1, d2 = random_diagram(s1), random_diagram(s2)
    u = disjoint_union(d1, d2)
    check_diagram(u)
    assert close(evaluate_amplitude(u), evaluate_amplitude(d1) * evaluate_amplitude(d2))


@settings(max_examples=60, deadline=None)
@given(seeds, seeds)
def test_subdivision_invariance(dseed, mseed):
    d = random_diagram(dseed)
    rng = np.random.default_rng(mseed)
    a = evaluate_amplitude(d)
    for comp in d.components:
        if not isinstance(comp, FaceCycle):
            continue
        for idx, face in enumerate(comp.faces):
            if face.kind == "brane":
                n = d.corner(face.from_corner).dim
                first = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) + 3 * np.eye(n)
                assert close(evaluate_amplitude(subdivide_face(d, comp.id, idx, first)), a)
