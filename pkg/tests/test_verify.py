import json

import pytest

from shuffle_pbwd.rootsys import RootSystem
from shuffle_pbwd.shuffle import ShuffleContext, psi
from shuffle_pbwd.verify import (
    SuiteConfig,
    default_gradings,
    displayed_root_image,
    quadratic_relation,
    run_suite,
    serre_relation,
)

B2 = SuiteConfig("B", 2)


@pytest.mark.parametrize(
    "name",
    ["homomorphism", "root_images", "diagonal", "vanishing", "triangular_independence", "factorization", "yangian", "ybe"],
)
def test_b2_suites_pass(name):
    rep = run_suite(name, B2)
    assert rep.passed, rep.render()
    assert rep.checks > 0
    assert any(a.startswith("mutation control") for a in rep.anchors)


def test_reports_are_reproducible():
    a = run_suite("diagonal", SuiteConfig("B", 2, seed=3, samples=2))
    b = run_suite("diagonal", SuiteConfig("B", 2, seed=3, samples=2))
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    assert "elapsed" not in a.to_json()
    assert "elapsed" in a.to_json(include_elapsed=True)


def test_relations_are_nonzero_in_free_algebra():
    ctx = ShuffleContext(RootSystem("G"))
    Q = quadratic_relation(ctx, 1, 2, 0, 0)
    S = serre_relation(ctx, 1, 2, [0, 0], 0)
    assert Q.terms and S.terms
    assert psi(ctx, Q).is_zero()


def test_mutated_zeta_breaks_relations():
    ctx = ShuffleContext(RootSystem("B", 2)).mutated()
    assert not psi(ctx, quadratic_relation(ctx, 1, 2, 0, 0)).is_zero()


def test_displayed_image_rejects_rational_flavor():
    with pytest.raises(ValueError):
        displayed_root_image(ShuffleContext(RootSystem("G"), "rational"), (1, 2), 0)


def test_rank_table_b2():
    rep = run_suite("triangular_independence", B2)
    ranks = {k: (v["monomials"], v["rank"]) for k, v in rep.details["ranks"].items()}
    assert ranks == {"[1, 1]": (6, 6), "[1, 2]": (12, 12), "[2, 2]": (24, 24)}


def test_rank_table_a1():
    rep = run_suite("triangular_independence", SuiteConfig("A", 1, window=(0, 2), gradings=[(2,)]))
    assert rep.details["ranks"]["[2]"]["rank"] == 6


def test_default_gradings():
    assert default_gradings(RootSystem("G")) == [(1, 1), (1, 2), (2, 1), (1, 3)]
    assert default_gradings(RootSystem("B", 2)) == [(1, 1), (1, 2), (2, 2)]


def test_config_validation():
    with pytest.raises(ValueError):
        SuiteConfig("B", 2, window=(2, 1))
    with pytest.raises(ValueError):
        SuiteConfig("B", 2, max_vars=9)
    with pytest.raises(ValueError):
        run_suite("nonsense", B2)


def test_time_budget_failure_is_reported():
    rep = run_suite("diagonal", SuiteConfig("B", 2, samples=1, time_budget=0.0))
    assert not rep.passed
    assert rep.failures[-1]["check"] == "time budget"
