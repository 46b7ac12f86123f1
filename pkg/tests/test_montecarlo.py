import json
import math
import random
from dataclasses import replace
from pathlib import Path

import pytest

from definetti_sim.errors import ThetaListInvalid
from definetti_sim.finance import PreferenceTally
from definetti_sim.genesis import Idea, idea_id
from definetti_sim.montecarlo import (
    Aggregate,
    EngineHooks,
    ReplicationSummary,
    run_many,
    run_once,
    spearman,
    sweep_threshold,
    validate_thetas,
)
from definetti_sim.presets import preset
from definetti_sim.reporting import parse_report, render_report
from definetti_sim.scenario import FinanceParams, GenesisParams

from conftest import make_config

GOLDEN = Path(__file__).parent / "golden" / "everlasting_growth_seed42.json"
EXAMPLE_TALLY = (50, 25, 13, 7, 4, 1)


def six_ideas_at_first_step(rate, region, step, rng):
    return [Idea(idea_id(region, step, k), step, region) for k in range(6)] if step == 1 else []


def example_tally(pool, candidates, rng):
    return PreferenceTally.from_counts({c.id: n for c, n in zip(candidates, EXAMPLE_TALLY)})


EXAMPLE_HOOKS = EngineHooks(arrivals=six_ideas_at_first_step, preferences=example_tally)


def test_same_seed_same_report(small_config):
    assert run_once(small_config) == run_once(small_config)
    assert render_report(run_once(small_config)) == render_report(run_once(small_config))


def test_seed_override_changes_stream(small_config):
    assert run_once(small_config, 1) != run_once(small_config, 2)
    assert run_once(small_config, small_config.seed) == run_once(small_config)


def test_report_has_exactly_horizon_steps(small_config):
    report = run_once(small_config)
    assert len(report.records) == small_config.horizon * 2
    assert report.records[-1].step == small_config.horizon


def test_report_document_round_trip(small_config):
    report = run_once(small_config)
    assert parse_report(render_report(report)) == report


def test_no_ideas_no_diffusion_zero_pace():
    cfg = make_config(regions=(("a", 0.0), ("b", 0.0)), horizon=200)
    report = run_once(cfg)
    assert report.total_mutations == 0
    assert all(s.pace == 0.0 for s in report.summary)


def test_adding_a_region_does_not_perturb_another():
    one = run_once(make_config(regions=(("a", 1.0),), horizon=40))
    two = run_once(make_config(regions=(("a", 1.0), ("z", 2.0)), horizon=40))
    assert one.region_records("a") == two.region_records("a")


def test_everlasting_growth_golden():
    golden = json.loads(GOLDEN.read_text())
    report = run_once(preset("everlasting-growth"), golden["seed"])
    assert report.horizon == golden["horizon"] == 200
    assert report.total_mutations == golden["total_mutations"] > 0
    assert report.mean_pace > 0
    assert report.mean_pace == pytest.approx(golden["mean_pace"], rel=1e-12)
    assert report.final_population == pytest.approx(golden["final_population"], rel=1e-12)
    for s in report.summary:
        want = golden["regions"][s.region]
        assert s.total_mutations == want["total_mutations"]
        assert s.pace == pytest.approx(want["pace"], rel=1e-12)


def test_ancien_regime_never_mutates():
    assert run_once(preset("ancien-regime"), 1).total_mutations == 0


def test_collapse_shock_hits_population():
    cfg = preset("collapse")
    report = run_once(cfg)
    for region in cfg.region_ids:
        trace = report.population_trace(region)
        step = cfg.shocks[0].step
        assert trace[step] < 0.5 * trace[step - 1]


# ---- run_many --------------------------------------------------------------


def test_single_replication_aggregate_matches_report(small_config):
    many = run_many(small_config, 1)
    (report,) = many.reports
    agg = many.aggregate
    assert agg.count == 1 and agg.sd_pace == 0.0
    assert agg.mean_pace == report.mean_pace
    assert agg.mean_mutations == report.total_mutations
    assert agg.mean_final_population == report.final_population


def test_shuffled_execution_same_aggregate(small_config):
    order = list(range(30))
    random.Random(0).shuffle(order)
    assert run_many(small_config, 30).aggregate == run_many(small_config, 30, indices=order).aggregate


def test_partitioned_merge_matches_all_at_once(small_config):
    whole = run_many(small_config, 40, keep_reports=False).aggregate
    parts = [run_many(small_config, 40, indices=range(k, 40, 3), keep_reports=False).aggregate for k in range(3)]
    left = parts[0].merge(parts[1]).merge(parts[2])
    right = parts[0].merge(parts[1].merge(parts[2]))
    for agg in (left, right):
        assert agg.mean_pace == pytest.approx(whole.mean_pace, abs=1e-9)
        assert agg.sd_pace == pytest.approx(whole.sd_pace, abs=1e-9)
        assert agg.mean_mutations == pytest.approx(whole.mean_mutations, abs=1e-9)


def test_aggregate_rejects_duplicate_index():
    e = ReplicationSummary(0, 0.1, 1, 1.0)
    with pytest.raises(ValueError):
        Aggregate.of([e, e])


def test_workers_do_not_change_results(small_config):
    serial = run_many(small_config, 8)
    parallel = run_many(small_config, 8, workers=2)
    assert serial == parallel


@pytest.mark.slow
def test_small_sample_within_three_standard_errors_of_reference():
    cfg = make_config(regions=(("a", 1.0),), horizon=6, finance=FinanceParams(entrepreneurs=20, consent_threshold=3))
    reference = run_many(cfg, 10_000, base_seed=99, keep_reports=False).aggregate
    sample = run_many(cfg, 100, base_seed=5, keep_reports=False).aggregate
    assert reference.sd_pace > 0
    assert abs(sample.mean_pace - reference.mean_pace) <= 3 * sample.se_pace


# ---- sweep -----------------------------------------------------------------


def test_single_theta_has_no_correlation(small_config):
    sweep = sweep_threshold(small_config, [5], 3)
    assert len(sweep.rows) == 1 and sweep.correlation is None


def test_example_tally_hook_gives_worked_example_counts():
    cfg = make_config(horizon=2, genesis=GenesisParams(rd_delay=1))
    sweep = sweep_threshold(cfg, [0, 20, 60], 5, hooks=EXAMPLE_HOOKS)
    assert [r.mean_mutations for r in sweep.rows] == [6.0, 2.0, 0.0]


def test_sweep_uses_common_random_numbers(small_config):
    sweep = sweep_threshold(small_config, [0, 30], 10)
    for row in sweep.rows:
        agg = run_many(small_config.with_threshold(row.theta), 10, keep_reports=False).aggregate
        assert row.mean_pace == agg.mean_pace and row.mean_mutations == agg.mean_mutations


@pytest.mark.parametrize("bad", [[], [3, 1], [1, 1], [-1, 2], [0.5]])
def test_invalid_theta_lists(bad):
    with pytest.raises(ThetaListInvalid):
        validate_thetas(bad)


def test_spearman_edge_cases():
    assert spearman([1.0], [2.0]) is None
    assert spearman([1.0, 2.0, 3.0], [5.0, 5.0, 5.0]) is None
    assert spearman([1.0, 2.0, 3.0], [3.0, 2.0, 1.0]) == pytest.approx(-1.0)
