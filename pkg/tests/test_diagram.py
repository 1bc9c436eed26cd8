import json
from fractions import Fraction

import pytest

from strata.diagram import (
    Catalog,
    DiagramError,
    LatticePoint,
    NewtonDiagram,
    SingularityDescriptor,
    Staircase,
    a_series,
    canonical_name,
    d_series,
    determinacy,
    diagram_from_monomials,
    e_series,
    is_linear,
    is_universal,
    load_catalog,
    min_degree_for_codim,
    ordinary_point,
    staircase,
    universality_bounds,
)


def under_count(vertices, limit=40):
    """Brute-force oracle: lattice points strictly under the prolonged segment lines."""
    lines = []
    if len(vertices) == 1:
        (a, b), = vertices
        lines.append((Fraction(1), Fraction(a + b)))
    for (a, b), (c, e) in zip(vertices, vertices[1:]):
        k = Fraction(b - e, c - a)
        lines.append((k, b + k * a))
    return sum(1 for i in range(limit) for j in range(limit) if any(j + k * i < c for k, c in lines))


class TestHull:
    def test_interior_points_dropped(self):
        diag = diagram_from_monomials([(0, 3), (1, 3), (2, 2), (4, 0), (5, 5)])
        assert diag.vertices == (LatticePoint(0, 3), LatticePoint(4, 0))

    def test_collinear_middle_point_dropped(self):
        diag = diagram_from_monomials([(0, 2), (2, 1), (4, 0)])
        assert diag.vertices == (LatticePoint(0, 2), LatticePoint(4, 0))

    def test_vertex_kept(self):
        diag = diagram_from_monomials([(0, 3), (1, 1), (4, 0)])
        assert len(diag.vertices) == 3

    def test_empty(self):
        with pytest.raises(DiagramError):
            diagram_from_monomials([])

    def test_negative(self):
        with pytest.raises(DiagramError):
            diagram_from_monomials([(-1, 2)])

    def test_non_convex_rejected(self):
        with pytest.raises(DiagramError):
            NewtonDiagram((LatticePoint(0, 4), LatticePoint(3, 3), LatticePoint(4, 0)))


class TestLinearity:
    @pytest.mark.parametrize("k, linear", [(1, True), (2, True), (3, True), (4, False), (7, False)])
    def test_a_series(self, k, linear):
        assert is_linear(a_series(k).diagram) is linear

    @pytest.mark.parametrize("p", [2, 3, 4, 5])
    def test_ordinary_point(self, p):
        assert is_linear(ordinary_point(p).diagram)

    def test_transpose(self):
        diag = diagram_from_monomials([(0, 2), (5, 0)])
        assert is_linear(diag) == is_linear(diag.transpose())


class TestStaircase:
    def test_cusp(self):
        # x1^i x2^m strictly under the segment from (0,2) to (3,0)
        assert staircase(a_series(2).diagram).heights == (2, 1)

    @pytest.mark.parametrize("p", [2, 3, 4, 6])
    def test_ordinary_point(self, p):
        assert staircase(ordinary_point(p).diagram).heights == tuple(range(p - 1, -1, -1))

    def test_d5(self):
        assert staircase(d_series(5).diagram).heights == (3, 2, 0)

    @pytest.mark.parametrize("name", ["A_2", "A_5", "D_6", "E_7", "X_9", "W_12", "Z_11", "J_10"])
    def test_count_matches_brute_force(self, name):
        desc = load_catalog()[name]
        assert desc.diagram.under_points()
        assert staircase(desc.diagram).count() == under_count(desc.diagram.vertices)

    def test_increasing_heights_rejected(self):
        with pytest.raises(DiagramError):
            Staircase((1, 2))


class TestUniversality:
    def test_determinacy_examples(self):
        assert determinacy(a_series(6)) == 7
        assert determinacy(d_series(6)) == 5
        assert determinacy(ordinary_point(4)) == 4

    def test_a7(self):
        det, codim = universality_bounds(a_series(7))
        assert codim == 5
        assert det == 8
        assert not is_universal(a_series(7), 4)
        assert is_universal(a_series(7), 5)

    def test_e12(self):
        assert universality_bounds(load_catalog()["E_12"])[1] == 7

    @pytest.mark.parametrize("codim", range(0, 30))
    def test_min_degree_for_codim(self, codim):
        d = min_degree_for_codim(codim)
        assert 2 * d - 1 > codim >= 2 * (d - 1) - 1

    def test_e_series_codims(self):
        assert [e_series(n).codimension for n in (6, 7, 8, 12, 13, 14)] == [6, 7, 8, 11, 12, 13]
        with pytest.raises(DiagramError):
            e_series(9)


class TestCatalog:
    def test_spellings(self):
        cat = load_catalog()
        assert cat["A4"] is cat["A_4"]
        assert cat["X_1,0"].name == "X_9"
        assert canonical_name("J_2,0") == canonical_name("J2,0")

    def test_suggest(self):
        assert "A_4" in load_catalog().suggest("A_44")

    def test_linear_flags_match_diagrams(self):
        for desc in load_catalog():
            if not desc.newton_degenerate:
                assert desc.linear == is_linear(desc.diagram), desc.name

    def test_descriptor_json_round_trip(self):
        for desc in load_catalog():
            assert SingularityDescriptor.from_json(desc.to_json()) == desc

    def test_flag_mismatch_rejected(self):
        data = a_series(4).to_json()
        data["linear"] = True
        with pytest.raises(DiagramError):
            Catalog([SingularityDescriptor.from_json(data)])

    def test_env_override(self, tmp_path, monkeypatch):
        path = tmp_path / "cat.json"
        path.write_text(json.dumps([a_series(2).to_json()]))
        monkeypatch.setenv("STRATA_CATALOG", str(path))
        assert load_catalog().names() == ["A_2"]
