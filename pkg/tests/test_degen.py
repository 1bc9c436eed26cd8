import threading

import pytest

from strata.degen import (
    CycleError,
    DegenCatalog,
    DegenError,
    DegenStep,
    MissingStepError,
    StratumRef,
    conic_pair_count,
    cusp_class_by_degeneration,
    divisor_class_default,
    load_degen_catalog,
    newton_degenerate_class,
    newton_degenerate_divisor,
    quartic_a7_combinatorial,
    resolve_class,
    solve_step,
    stratum_degree,
    validate_step,
)
from strata.diagram import LatticePoint, a_series, d_series, load_catalog
from strata.linear import multidegree
from strata.ring import DegreeScalar, standard_ring

d = DegreeScalar.d()
R = standard_ring()
X, L, F = (R.gen(n) for n in "XLF")


class TestStratumRef:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("A_4", StratumRef("A_4")),
            ("X_9[xl]", StratumRef("X_9", "xl")),
            ("X_9[tilde]", StratumRef("X_9", "tilde")),
            ("A_7@4", StratumRef("A_7", None, 4)),
            ("X_9[tilde]@4", StratumRef("X_9", "tilde", 4)),
            ("X_9_xl", StratumRef("X_9", "xl")),
        ],
    )
    def test_parse(self, text, expected):
        assert StratumRef.parse(text) == expected

    def test_str_round_trip(self):
        for text in ("X_9[tilde]@4", "D_5", "W_12[xl]"):
            assert str(StratumRef.parse(text)) == text

    def test_unknown_modifier(self):
        with pytest.raises(DegenError):
            StratumRef.parse("A_4[weird]")

    def test_key_uses_canonical_name(self):
        assert StratumRef.parse("A4").key == StratumRef.parse("A_4").key


class TestDivisors:
    def test_default(self):
        assert divisor_class_default(0, 2) == X * (d - 2) + F - L * 2
        assert divisor_class_default(1, 2) == X * (d - 4) + F - L

    def test_negative(self):
        with pytest.raises(ValueError):
            divisor_class_default(-1, 0)

    def test_newton_degenerate(self):
        assert newton_degenerate_divisor(3) == X * (d - 6) + F - L * 3


class TestStep:
    def _step(self, **kw):
        args = dict(parent=StratumRef("A_4"), killed=LatticePoint(0, 2), divisor=divisor_class_default(0, 2),
                    children=((StratumRef("D_5"), 2),))
        args.update(kw)
        return DegenStep(**args)

    def test_json_round_trip(self):
        step = self._step(source="test")
        assert DegenStep.from_json(step.to_json()) == step

    def test_divisor_text_checked(self):
        data = self._step().to_json()
        data["divisor_text"] = "(d-3)*X + F"
        with pytest.raises(DegenError):
            DegenStep.from_json(data)

    def test_non_unit_divisor(self):
        with pytest.raises(DegenError):
            self._step(divisor=X + F * 2)

    def test_bad_multiplicity(self):
        with pytest.raises(DegenError):
            self._step(children=((StratumRef("D_5"), 0),))

    def test_no_children(self):
        with pytest.raises(DegenError):
            self._step(children=())


class TestCatalogGraph:
    def test_cycle_detected(self):
        cat = load_catalog()
        a = DegenStep(StratumRef("A_4"), LatticePoint(0, 2), divisor_class_default(0, 2), ((StratumRef("A_5"), 1),))
        b = DegenStep(StratumRef("A_5"), LatticePoint(0, 2), divisor_class_default(0, 2), ((StratumRef("A_4"), 1),))
        with pytest.raises(CycleError):
            DegenCatalog([a, b], cat)

    def test_nonlinear_leaf_rejected(self):
        step = DegenStep(StratumRef("A_4"), LatticePoint(0, 2), divisor_class_default(0, 2), ((StratumRef("A_5"), 1),))
        with pytest.raises(DegenError):
            DegenCatalog([step], load_catalog())

    def test_duplicate_step(self):
        step = DegenStep(StratumRef("A_4"), LatticePoint(0, 2), divisor_class_default(0, 2), ((StratumRef("D_5"), 2),))
        with pytest.raises(DegenError):
            DegenCatalog([step, step], load_catalog())

    def test_shipped_catalog_loads(self, degen):
        assert degen.step_for(StratumRef("A_6")) is not None
        assert degen.is_leaf(StratumRef("D_5"))
        assert degen.is_leaf(StratumRef("E_6", "xl"))

    def test_env_override(self, tmp_path, monkeypatch):
        import json

        step = DegenStep(StratumRef("A_4"), LatticePoint(0, 2), divisor_class_default(0, 2), ((StratumRef("D_5"), 2),))
        path = tmp_path / "steps.json"
        path.write_text(json.dumps({"steps": [step.to_json()]}))
        monkeypatch.setenv("STRATA_DEGEN_CATALOG", str(path))
        assert list(load_degen_catalog().steps) == [StratumRef("A_4").key]


class TestResolution:
    def test_a4_identity(self, degen):
        a4 = resolve_class("A_4", degen)
        assert a4 * divisor_class_default(0, 2) == multidegree(d_series(5)) * 2

    def test_d7_identity(self, degen):
        d7 = resolve_class("D_7", degen)
        assert d7 * (X * (d - 4) + F - L) == resolve_class("E_8", degen) * 2

    def test_memo_and_clear(self, degen):
        first = degen.resolve("A_6")
        assert degen.resolve("A_6") is first
        degen.clear()
        assert degen.resolve("A_6") == first

    def test_threads_agree(self, degen):
        degen.clear()
        out = []
        threads = [threading.Thread(target=lambda: out.append(degen.resolve("A_7"))) for _ in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(out) == 4 and all(o == out[0] for o in out)

    def test_missing_step(self, degen):
        with pytest.raises(MissingStepError, match="unsupported"):
            degen.resolve("E_14")
        with pytest.raises(MissingStepError):
            degen.resolve("J_2,1")

    def test_xl_lift_of_ordinary(self, degen):
        assert degen.resolve("X_9[xl]") == (L + X) * multidegree(load_catalog()["X_9"])

    def test_xl_lift_needs_ordinary(self, degen):
        with pytest.raises(DegenError):
            degen.resolve("A_2[xl]")

    def test_fixed_degree_is_evaluated(self, degen):
        cls = degen.resolve("A_7@4")
        assert all(c.is_constant() for c in cls.terms.values())

    def test_degree_polynomials_are_quadratic(self, degen):
        for step in degen.steps.values():
            if step.parent.fixed_degree is None and step.parent.modifier is None:
                deg = stratum_degree(step.parent, degen)
                assert deg.degree == 2 and deg.leading() > 0, step.parent

    def test_solve_step_matches_resolve(self, degen):
        step = degen.step_for(StratumRef("A_5"))
        assert solve_step(step, degen) == degen.resolve("A_5")


class TestValidation:
    def test_a4_against_golden(self, degen, goldens):
        report = validate_step(degen.step_for(StratumRef("A_4")), degen, goldens.multidegrees())
        assert report.ok and report.golden_match and report.golden_identity
        assert report.to_json()["ok"] is True

    def test_tampered_golden_detected(self, degen):
        report = validate_step(degen.step_for(StratumRef("A_4")), degen, {"A4": multidegree(a_series(3))})
        assert report.divisible
        assert report.golden_match is False and not report.ok


class TestSpecialConstructions:
    @pytest.mark.parametrize("p, name", [(2, "A_2"), (3, "E_6"), (4, "W_12")])
    def test_cusp_series(self, p, name):
        assert cusp_class_by_degeneration(p) == multidegree(load_catalog()[name])

    def test_cusp_p_too_small(self):
        with pytest.raises(ValueError):
            cusp_class_by_degeneration(1)

    def test_newton_degenerate_matches_catalog(self, degen):
        for p, q in ((3, 4), (4, 5)):
            assert newton_degenerate_class(p, q) == degen.resolve(f"ND_{p},{q}")

    @pytest.mark.parametrize("p, q", [(2, 3), (3, 6), (4, 6)])
    def test_newton_degenerate_rejects(self, p, q):
        with pytest.raises(ValueError):
            newton_degenerate_class(p, q)

    def test_conic_counts(self):
        assert (conic_pair_count(5, 2), conic_pair_count(4, 3)) == (4, 12)
        assert conic_pair_count(2, 5) == 4
        assert quartic_a7_combinatorial() == 504
