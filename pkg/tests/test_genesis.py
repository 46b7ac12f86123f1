import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from definetti_sim.core import root_stream
from definetti_sim.errors import DelayInvalid
from definetti_sim.genesis import Idea, Lifecycle, ProductivityParams, develop, ready_pool, sample_idea_arrivals

from conftest import make_tech


def test_zero_rate_never_produces_ideas():
    gen = root_stream(3).generator()
    assert all(sample_idea_arrivals(0.0, "r", s, gen) == [] for s in range(1000))


def test_negative_rate_rejected():
    with pytest.raises(ValueError):
        sample_idea_arrivals(-0.1, "r", 0, root_stream(1))


def test_poisson_mean_and_variance():
    gen = root_stream(11).derive("ideas").generator()
    counts = np.array([len(sample_idea_arrivals(2.0, "r", s, gen)) for s in range(100_000)])
    assert 1.98 <= counts.mean() <= 2.02
    assert abs(counts.var(ddof=1) / 2.0 - 1.0) < 0.02


def test_arrivals_deterministic_and_ids_unique():
    stream = root_stream(5).derive("ideas")
    a = sample_idea_arrivals(4.0, "north", 7, stream)
    b = sample_idea_arrivals(4.0, "north", 7, stream)
    assert [i.id for i in a] == [i.id for i in b]
    gen = stream.generator()
    ids = [i.id for s in range(200) for i in sample_idea_arrivals(3.0, "north", s, gen)]
    assert len(ids) == len(set(ids))


def test_develop_sets_readiness():
    tech = develop(Idea("x", 3, "r"), 2, 0.3, ProductivityParams(0.0, 0.1), root_stream(1))
    assert tech.readiness_step == 5
    assert tech.state is Lifecycle.UNCERTAIN
    assert tech.source_idea == "x"


def test_develop_carries_scenario_ex_ante_probability():
    gen = root_stream(2).generator()
    techs = [develop(Idea(str(i), i, "r"), 1, 0.3, ProductivityParams(0.0, 0.2), gen) for i in range(50)]
    assert {t.ex_ante_success_prob for t in techs} == {0.3}
    # the R&D outcome never lands below the frontier it started from
    assert all(t.productivity_params.location >= 0.0 for t in techs)


def test_develop_rejects_zero_delay():
    with pytest.raises(DelayInvalid):
        develop(Idea("x", 3, "r"), 0, 0.3, ProductivityParams(0.0, 0.1), root_stream(1))


def test_ready_pool_basics():
    assert ready_pool([], 4) == []
    early, late = make_tech("a", ready=5), make_tech("b", ready=9)
    assert ready_pool([early, late], 7) == [early]


def test_ready_pool_matches_brute_force():
    rng = np.random.default_rng(0)
    states = list(Lifecycle)
    techs = [
        make_tech(f"t{i}", ready=int(rng.integers(0, 50)), state=states[int(rng.integers(0, len(states)))])
        for i in range(1000)
    ]
    for step in (0, 10, 25, 49, 60):
        expected = []
        for t in techs:
            if t.readiness_step <= step and t.state == Lifecycle.UNCERTAIN:
                expected.append(t.id)
        assert [t.id for t in ready_pool(techs, step)] == expected


@settings(max_examples=50)
@given(st.lists(st.integers(0, 30), max_size=40), st.integers(0, 29))
def test_ready_pool_monotone_in_step(readiness, step):
    techs = [make_tech(f"t{i}", ready=r) for i, r in enumerate(readiness)]
    now = {t.id for t in ready_pool(techs, step)}
    later = {t.id for t in ready_pool(techs, step + 1)}
    assert now <= later
