"""Cycle law containers, validation and JSON (de)serialization."""

from __future__ import annotations

import json

import pytest

from motorld import (
    DiscreteLaw,
    ExponentialLaw,
    GammaLaw,
    GraphLaw,
    LawSpecError,
    atom_sign_mass,
    law_from_dict,
    law_to_dict,
    load_law,
    validate_law,
)

from conftest import (
    DATA_DIR,
    make_discrete_law,
    make_exp_asym,
    make_gamma_law,
    make_graph_law,
)


class TestValidateLaw:
    def test_canonical_laws_pass(self):
        validate_law(make_graph_law("tooth"))
        validate_law(make_discrete_law())
        validate_law(make_exp_asym())
        validate_law(make_gamma_law())

    def test_discrete_mass_must_sum_to_one(self):
        law = DiscreteLaw(atoms=((1, 1.0, 0.6), (-1, 1.0, 0.3)))
        with pytest.raises(LawSpecError):
            validate_law(law)

    def test_discrete_needs_atoms(self):
        with pytest.raises(LawSpecError):
            validate_law(DiscreteLaw(atoms=()))

    def test_discrete_bad_sign(self):
        law = DiscreteLaw(atoms=((2, 1.0, 1.0),))
        with pytest.raises(LawSpecError):
            validate_law(law)

    def test_discrete_nonpositive_duration(self):
        law = DiscreteLaw(atoms=((1, 0.0, 0.5), (-1, 1.0, 0.5)))
        with pytest.raises(LawSpecError):
            validate_law(law)

    def test_one_sided_rejected_by_default(self):
        ladder = DiscreteLaw(atoms=((1, 1.0, 1.0),))
        with pytest.raises(LawSpecError):
            validate_law(ladder)
        validate_law(ladder, require_two_sided=False)

    def test_exponential_parameter_ranges(self):
        with pytest.raises(LawSpecError):
            validate_law(ExponentialLaw(p=0.0, beta_plus=1.0, beta_minus=1.0))
        with pytest.raises(LawSpecError):
            validate_law(ExponentialLaw(p=1.0, beta_plus=1.0, beta_minus=1.0))
        with pytest.raises(LawSpecError):
            validate_law(ExponentialLaw(p=0.5, beta_plus=-1.0, beta_minus=1.0))

    def test_gamma_parameter_ranges(self):
        with pytest.raises(LawSpecError):
            validate_law(
                GammaLaw(p=0.5, k_plus=0.0, beta_plus=1.0, k_minus=1.0, beta_minus=1.0)
            )

    def test_graph_law_with_bad_rates(self, two_vertex):
        graph, rates = two_vertex
        bad = dict(rates)
        bad[("a", "b")] = -4.0
        with pytest.raises(LawSpecError):
            validate_law(GraphLaw.from_rates(graph, bad))


class TestSerialization:
    @pytest.mark.parametrize(
        "law",
        [
            make_discrete_law(),
            make_exp_asym(),
            make_gamma_law(),
            make_graph_law("diamond"),
        ],
        ids=["discrete", "exponential", "gamma", "graph"],
    )
    def test_round_trip(self, law):
        assert law_from_dict(law_to_dict(law)) == law

    def test_graph_file_resolved_against_base_dir(self):
        spec = {"kind": "graph", "graph_file": "two_vertex.json"}
        law = law_from_dict(spec, base_dir=DATA_DIR)
        assert law == make_graph_law("two_vertex")

    def test_unknown_kind(self):
        with pytest.raises(LawSpecError):
            law_from_dict({"kind": "weibull"})

    def test_missing_kind(self):
        with pytest.raises(LawSpecError):
            law_from_dict({"p": 0.5})

    def test_load_law_examples(self):
        law = load_law(DATA_DIR / "law_two_vertex.json")
        assert isinstance(law, GraphLaw)
        law2 = load_law(DATA_DIR / "law_discrete.json")
        assert law2 == make_discrete_law()
        law3 = load_law(DATA_DIR / "law_exp_asym.json")
        assert law3 == make_exp_asym()
        law4 = load_law(DATA_DIR / "law_gamma.json")
        assert isinstance(law4, GammaLaw)

    def test_load_law_missing_file(self, tmp_path):
        with pytest.raises(LawSpecError):
            load_law(tmp_path / "nope.json")

    def test_load_law_malformed(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("[1,", encoding="utf-8")
        with pytest.raises(LawSpecError):
            load_law(path)

    def test_embedded_graph_round_trip(self, tmp_path, tooth):
        graph, rates = tooth
        law = GraphLaw.from_rates(graph, rates)
        path = tmp_path / "law.json"
        path.write_text(json.dumps(law_to_dict(law)), encoding="utf-8")
        assert load_law(path) == law


class TestAtomSignMass:
    def test_masses(self, discrete_law):
        assert atom_sign_mass(discrete_law, 1) == pytest.approx(0.75)
        assert atom_sign_mass(discrete_law, -1) == pytest.approx(0.25)

    def test_one_sided(self):
        ladder = DiscreteLaw(atoms=((1, 1.0, 1.0),))
        assert atom_sign_mass(ladder, -1) == 0.0
