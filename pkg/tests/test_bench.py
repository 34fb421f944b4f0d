import json
import math
import random

import pytest

from privzone import ConfigError, fixed_code_width, make_grid, sample_alert_zone
from privzone.bench import (
    DistributionSpec,
    ExperimentConfig,
    code_length_ratio,
    emit_results,
    hve_demo,
    run_experiment,
    run_workload_mix,
)
from privzone.trees import build_fixed_length_tree, build_huffman_tree

GOLDEN_WEIGHTS = [0.2, 0.1, 0.5, 0.4, 0.6]


def small_config(**overrides):
    base = dict(
        rows=8,
        cols=8,
        cell_size_m=10.0,
        distribution=DistributionSpec(kind="sigmoid", a=0.9, b=10, seed=3),
        methods=("huffman", "fixed", "fixed-minimized"),
        radii_m=(10.0, 30.0),
        trials=8,
        seed=11,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestConfig:
    def test_unknown_method_rejected(self):
        with pytest.raises(ConfigError):
            small_config(methods=("huffmann",))

    def test_bary_method_parses(self):
        cfg = small_config(methods=("bary(3)",))
        assert cfg.methods == ("bary(3)",)

    def test_zero_trials_rejected(self):
        with pytest.raises(ConfigError):
            small_config(trials=0)

    def test_mix_fractions_must_sum_to_one(self):
        with pytest.raises(ConfigError):
            small_config(workload_mix=((20.0, 0.5), (300.0, 0.4)))

    def test_from_json_round_trip(self):
        obj = {
            "rows": 8,
            "cols": 8,
            "cellSizeMeters": 10,
            "distribution": {"kind": "sigmoid", "a": 0.99, "b": 100, "seed": 4},
            "methods": ["huffman", "bary(3)"],
            "radiiMeters": [10, 20],
            "trials": 5,
            "seed": 2,
        }
        cfg = ExperimentConfig.from_json(obj)
        assert cfg.methods == ("huffman", "bary(3)")
        assert cfg.radii_m == (10.0, 20.0)
        assert cfg.distribution.a == 0.99

    def test_csv_distribution_requires_path(self):
        with pytest.raises(ConfigError):
            DistributionSpec(kind="csv").build(4, 4)


class TestRunExperiment:
    def test_row_grid_shape(self):
        cfg = small_config()
        result = run_experiment(cfg)
        assert len(result.rows) == len(cfg.methods) * len(cfg.radii_m)
        labels = {(r.method, r.radius_label) for r in result.rows}
        assert ("huffman", "10") in labels and ("fixed", "30") in labels

    def test_fixed_baseline_identity(self):
        # The unminimized fixed-length method costs exactly
        # (zone size) * ceil(log2 n) per trial, hence 0% improvement.
        cfg = small_config(methods=("fixed",))
        result = run_experiment(cfg)
        width = fixed_code_width(64)
        for row in result.rows:
            assert row.improvement_pct == pytest.approx(0.0, abs=1e-12)
            assert row.mean_pairing_cost == pytest.approx(row.mean_tokens * width)

    def test_fixed_minimized_improves_on_baseline(self):
        cfg = small_config(methods=("fixed-minimized",), trials=20)
        result = run_experiment(cfg)
        for row in result.rows:
            assert row.improvement_pct >= 0.0

    def test_deterministic_with_seed(self):
        a = run_experiment(small_config())
        b = run_experiment(small_config())
        assert a.rows == b.rows

    def test_hve_validation_passes(self):
        cfg = small_config(
            methods=("huffman", "balanced", "fixed", "fixed-minimized", "bary(3)"),
            trials=3,
            validate_hve=True,
        )
        run_experiment(cfg)  # raises on any accounting mismatch

    def test_zone_cost_example(self):
        # Zone {100, 000} under fixed-length minimization costs 2 sets.
        from privzone import fixed_length_minimize, pairing_cost

        assert pairing_cost(fixed_length_minimize(["100", "000"])) == 2


class TestWorkloadMix:
    def test_degenerate_mix_equals_single_radius(self):
        cfg_mix = small_config(workload_mix=((30.0, 1.0),), methods=("huffman",))
        cfg_sweep = small_config(radii_m=(30.0,), methods=("huffman",))
        mixed = run_workload_mix(cfg_mix).rows[0]
        swept = run_experiment(cfg_sweep).rows[0]
        assert mixed.mean_pairing_cost == swept.mean_pairing_cost
        assert mixed.mean_tokens == swept.mean_tokens

    def test_mix_labels(self):
        cfg = small_config(workload_mix=((20.0, 0.9), (300.0, 0.1)), methods=("huffman",))
        row = run_workload_mix(cfg).rows[0]
        assert row.radius_label == "mix(20:0.9,300:0.1)"

    def test_requires_mix(self):
        with pytest.raises(ConfigError):
            run_workload_mix(small_config())


class TestCodeLengthRatio:
    def test_fixed_tree_is_exactly_one(self):
        grid = make_grid(GOLDEN_WEIGHTS)
        assert code_length_ratio(build_fixed_length_tree(grid), grid) == 1.0

    def test_golden_tree_ratio(self):
        grid = make_grid(GOLDEN_WEIGHTS)
        ratio = code_length_ratio(build_huffman_tree(grid), grid)
        assert ratio == pytest.approx((13 / 6) / 3, rel=1e-12)

    def test_ratio_decreases_with_skew(self):
        ratios = []
        for a in (0.5, 0.9, 0.99):
            cfg = ExperimentConfig(
                rows=32,
                cols=32,
                distribution=DistributionSpec(kind="sigmoid", a=a, b=100, seed=5),
                methods=("huffman",),
                radii_m=(10.0,),
                trials=1,
                seed=1,
            )
            row = run_experiment(cfg).rows[0]
            ratios.append(row.avg_max_ratio)
        assert ratios[0] > ratios[1] > ratios[2]


class TestEmitResults:
    def test_csv_layout_and_determinism(self, tmp_path):
        result = run_experiment(small_config())
        path_a = tmp_path / "a.csv"
        path_b = tmp_path / "b.csv"
        emit_results(result, path_a, fmt="csv")
        emit_results(run_experiment(small_config()), path_b, fmt="csv")
        text = path_a.read_text()
        lines = text.strip().split("\n")
        assert lines[0] == (
            "method,radius_m,mean_pairing_cost,mean_tokens,improvement_pct,"
            "rl,avg_max_ratio,trials,seed"
        )
        assert len(lines) == 1 + len(result.rows)
        assert path_a.read_bytes() == path_b.read_bytes()

    def test_json_mirrors_csv_fields(self, tmp_path):
        result = run_experiment(small_config(methods=("fixed",), radii_m=(10.0,)))
        path = tmp_path / "r.json"
        emit_results(result, path, fmt="json")
        payload = json.loads(path.read_text())
        assert len(payload) == 1
        assert set(payload[0]) == {
            "method",
            "radius_m",
            "mean_pairing_cost",
            "mean_tokens",
            "improvement_pct",
            "rl",
            "avg_max_ratio",
            "trials",
            "seed",
        }

    def test_unknown_format(self, tmp_path):
        result = run_experiment(small_config(methods=("fixed",), radii_m=(10.0,)))
        with pytest.raises(ConfigError):
            emit_results(result, tmp_path / "x.bin", fmt="xml")


class TestHveDemo:
    def test_golden_pairing_counts(self):
        demo = hve_demo(["100", "000"], "000", seed=0)
        assert demo["minimized"]["tokens"] == ["*00"]
        assert demo["minimized"]["pairings"] == 5
        assert demo["unminimized"]["pairings"] == 14
        assert demo["minimized"]["matched"] is True
        assert demo["unminimized"]["matched"] is True

    def test_non_member_user_never_matches(self):
        demo = hve_demo(["100", "000"], "110", seed=0)
        assert demo["minimized"]["matched"] is False
        assert demo["unminimized"]["matched"] is False

    def test_counter_consistency_with_token_cost(self):
        demo = hve_demo(["1010", "0010", "0110", "1110"], "0110", seed=3)
        for variant in ("minimized", "unminimized"):
            block = demo[variant]
            assert block["pairings"] == len(block["tokens"]) + 2 * block["pairing_sets"]
