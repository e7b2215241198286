import json
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeroshot_topics import ValidationError
from zeroshot_topics.evaluation import (
    SweepReport,
    default_theta_grid,
    micro_prf,
    read_sweep_json,
    sweep,
    time_phase,
    write_sweep_csv,
    write_sweep_json,
    write_timings,
)


def _brute_force_prf(gold, pred):
    """Independent recomputation with explicit per-pair loops."""
    all_topics = set()
    for s in gold.values():
        all_topics |= set(s)
    for s in pred.values():
        all_topics |= set(s)
    tp = fp = fn = 0
    for art in gold:
        for topic in all_topics:
            g = topic in gold[art]
            p = topic in pred.get(art, set())
            if g and p:
                tp += 1
            elif p and not g:
                fp += 1
            elif g and not p:
                fn += 1
    prec = tp / (tp + fp) if tp + fp else 0.0
    rec = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
    return tp, fp, fn, prec, rec, f1


class TestMicroPrf:
    def test_hand_example(self):
        gold = {"d1": {"a"}, "d2": {"a", "b"}}
        pred = {"d1": {"a", "b"}, "d2": {"b"}}
        r = micro_prf(gold, pred)
        assert (r.tp, r.fp, r.fn) == (2, 1, 1)
        assert r.precision == pytest.approx(2 / 3)
        assert r.recall == pytest.approx(2 / 3)
        assert r.f1 == pytest.approx(2 / 3)

    def test_perfect_prediction(self):
        gold = {"d1": {"a"}, "d2": {"b", "c"}}
        r = micro_prf(gold, gold)
        assert r.precision == r.recall == r.f1 == 1.0

    def test_all_empty_predictions(self):
        gold = {"d1": {"a"}}
        r = micro_prf(gold, {})
        assert (r.precision, r.recall, r.f1) == (0.0, 0.0, 0.0)

    def test_missing_article_is_empty_set(self):
        gold = {"d1": {"a"}, "d2": {"b"}}
        r = micro_prf(gold, {"d1": {"a"}})
        assert (r.tp, r.fn) == (1, 1)

    def test_unknown_article_rejected(self):
        with pytest.raises(ValidationError):
            micro_prf({"d1": {"a"}}, {"ghost": {"a"}})

    def test_order_invariant(self):
        gold = {"d1": {"a"}, "d2": {"b"}, "d3": set()}
        pred = {"d3": {"b"}, "d1": {"a"}}
        a = micro_prf(gold, pred)
        b = micro_prf(dict(reversed(list(gold.items()))), pred)
        assert (a.tp, a.fp, a.fn) == (b.tp, b.fp, b.fn)

    @settings(max_examples=100)
    @given(st.data())
    def test_matches_brute_force(self, data):
        topics = ["t1", "t2", "t3", "t4"]
        n = data.draw(st.integers(min_value=1, max_value=8))
        gold = {
            f"d{i}": data.draw(st.sets(st.sampled_from(topics), max_size=4))
            for i in range(n)
        }
        pred = {
            f"d{i}": data.draw(st.sets(st.sampled_from(topics), max_size=4))
            for i in range(n)
            if data.draw(st.booleans())
        }
        r = micro_prf(gold, pred)
        tp, fp, fn, prec, rec, f1 = _brute_force_prf(gold, pred)
        assert (r.tp, r.fp, r.fn) == (tp, fp, fn)
        assert r.precision == pytest.approx(prec)
        assert r.recall == pytest.approx(rec)
        assert r.f1 == pytest.approx(f1)


class TestSweep:
    def test_theta_zero_full_recall(self):
        score_maps = {
            "d1": {"a": 0.2, "b": 0.9},
            "d2": {"a": 0.7, "b": 0.0},
        }
        gold = {"d1": {"a"}, "d2": {"b"}}
        report = sweep(score_maps, gold, [0.0])
        assert report.points[0][1].recall == 1.0

    def test_best_prefers_lowest_theta_on_tie(self):
        score_maps = {"d1": {"a": 0.9}}
        gold = {"d1": {"a"}}
        report = sweep(score_maps, gold, [0.5, 0.6, 0.95])
        # 0.5 and 0.6 both give F1=1; best must be the lower
        assert report.best.f1 == 1.0
        assert report.best.threshold == 0.5

    def test_strict_mode_excludes_equal_scores(self):
        score_maps = {"d1": {"a": 0.5}}
        gold = {"d1": {"a"}}
        inclusive = sweep(score_maps, gold, [0.5])
        strict = sweep(score_maps, gold, [0.5], strict=True)
        assert inclusive.points[0][1].tp == 1
        assert strict.points[0][1].tp == 0

    def test_grid_sorted_and_deduped(self):
        score_maps = {"d1": {"a": 0.9}}
        gold = {"d1": {"a"}}
        report = sweep(score_maps, gold, [0.8, 0.2, 0.8, 0.5])
        assert [t for t, _ in report.points] == [0.2, 0.5, 0.8]

    def test_missing_article_counts_as_empty(self):
        score_maps = {"d1": {"a": 0.9}}
        gold = {"d1": {"a"}, "d2": {"a"}}
        report = sweep(score_maps, gold, [0.5])
        assert report.points[0][1].fn == 1

    def test_empty_grid_rejected(self):
        with pytest.raises(ValidationError):
            sweep({"d1": {"a": 0.5}}, {"d1": {"a"}}, [])

    def test_out_of_range_theta_rejected(self):
        with pytest.raises(ValidationError):
            sweep({"d1": {"a": 0.5}}, {"d1": {"a"}}, [0.5, 1.2])

    def test_unknown_article_rejected(self):
        with pytest.raises(ValidationError):
            sweep({"ghost": {"a": 0.5}}, {"d1": {"a"}}, [0.5])

    def test_matches_independent_recomputation(self):
        import random

        rng = random.Random(7)
        topics = ["a", "b", "c"]
        score_maps = {
            f"d{i}": {t: rng.random() for t in topics} for i in range(20)
        }
        gold = {
            f"d{i}": {t for t in topics if rng.random() < 0.4} for i in range(20)
        }
        grid = [0.0, 0.25, 0.5, 0.75, 1.0]
        report = sweep(score_maps, gold, grid)
        for theta, point in report.points:
            pred = {
                a: {t for t, s in scores.items() if s >= theta}
                for a, scores in score_maps.items()
            }
            tp, fp, fn, prec, rec, f1 = _brute_force_prf(gold, pred)
            assert (point.tp, point.fp, point.fn) == (tp, fp, fn)
            assert point.f1 == pytest.approx(f1)

    @settings(max_examples=50, deadline=None)
    @given(st.data())
    def test_recall_non_increasing_in_theta(self, data):
        topics = ["a", "b", "c"]
        n = data.draw(st.integers(min_value=1, max_value=6))
        score_maps = {
            f"d{i}": {
                t: data.draw(st.floats(min_value=0, max_value=1)) for t in topics
            }
            for i in range(n)
        }
        gold = {
            f"d{i}": data.draw(st.sets(st.sampled_from(topics), max_size=3))
            for i in range(n)
        }
        report = sweep(score_maps, gold, [0.0, 0.3, 0.6, 0.9, 1.0])
        recalls = [p.recall for _, p in report.points]
        assert all(b <= a + 1e-12 for a, b in zip(recalls, recalls[1:]))

    def test_default_grid(self):
        grid = default_theta_grid()
        assert len(grid) == 101
        assert grid[0] == 0.0
        assert grid[-1] == 1.0
        assert grid == sorted(grid)


class TestTimePhase:
    def test_measures_wall_clock(self):
        result, timing = time_phase("sleep", lambda: time.sleep(0.01) or 42, unit_count=5)
        assert result == 42
        assert timing.phase == "sleep"
        assert timing.unit_count == 5
        assert 0.005 <= timing.wall_seconds <= 0.1

    def test_errors_propagate(self):
        def boom():
            raise RuntimeError("nope")

        with pytest.raises(RuntimeError):
            time_phase("x", boom)


class TestReportFiles:
    def _report(self):
        score_maps = {"d1": {"a": 0.9, "b": 0.1}}
        gold = {"d1": {"a"}}
        return sweep(score_maps, gold, [0.0, 0.5, 1.0], method="m", dataset="ds")

    def test_json_shape(self, tmp_path):
        p = tmp_path / "sweep.json"
        write_sweep_json(p, self._report())
        obj = read_sweep_json(p)
        assert obj["method"] == "m"
        assert obj["dataset"] == "ds"
        assert obj["best"]["f1"] == 1.0
        assert len(obj["points"]) == 3
        assert {"threshold", "tp", "fp", "fn", "precision", "recall", "f1"} <= set(
            obj["points"][0]
        )

    def test_csv_shape(self, tmp_path):
        p = tmp_path / "sweep.csv"
        write_sweep_csv(p, self._report())
        lines = p.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "threshold,precision,recall,f1"
        assert len(lines) == 4

    def test_writes_deterministic(self, tmp_path):
        r = self._report()
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        write_sweep_json(a, r)
        write_sweep_json(b, r)
        assert a.read_bytes() == b.read_bytes()
        ca, cb = tmp_path / "a.csv", tmp_path / "b.csv"
        write_sweep_csv(ca, r)
        write_sweep_csv(cb, r)
        assert ca.read_bytes() == cb.read_bytes()

    def test_timings_file(self, tmp_path):
        _, t1 = time_phase("p1", lambda: None)
        p = tmp_path / "timings.json"
        write_timings(p, [t1])
        data = json.loads(p.read_text(encoding="utf-8"))
        assert data[0]["phase"] == "p1"
        assert data[0]["wall_seconds"] >= 0
