import pytest
from hypothesis import given
from hypothesis import strategies as st

from mailsentry.economics import CostParams, compute_roi, per_mode_economics
from mailsentry.errors import ZeroCost


def spreadsheet(p):
    """Cell-by-cell recomputation, independent of compute_roi internals."""
    attacks = p.daily_emails * p.base_rate
    detected = attacks * p.recall
    missed = attacks - detected
    prevented = detected * p.attack_success_rate
    risk = prevented * p.penalty_per_breach
    labor = p.daily_emails * p.review_rate * p.minutes_per_review / 60 * p.analyst_rate_per_hour
    fp = p.daily_emails * (1 - p.base_rate) * p.fpr * p.fp_cost_each
    total = p.api_cost_per_day + labor + fp
    return {
        "total": total,
        "detected": detected,
        "risk": risk,
        "net": risk - total,
        "roi_opt": (risk - total) / total,
        "roi_cons": (risk - missed * p.attack_success_rate * p.penalty_per_breach - total) / total,
    }


class TestReferenceFigures:
    def test_default_params_reproduce_reported_table(self):
        report = compute_roi(CostParams())
        assert report.total_cost == pytest.approx(1506, rel=0.01)
        assert report.attacks_detected == pytest.approx(164, abs=1.0)
        assert report.roi_optimistic == pytest.approx(542.0, rel=0.01)
        assert report.roi_conservative == pytest.approx(-376, rel=0.02)

    def test_aggressive_mode_roi(self):
        report = compute_roi(CostParams(recall=0.446))
        assert report.roi_optimistic == pytest.approx(651.2, rel=0.01)

    def test_high_recall_bounds_converge(self):
        report = compute_roi(CostParams(recall=0.991))
        assert report.roi_optimistic == pytest.approx(1450, rel=0.02)
        assert report.roi_conservative == pytest.approx(1437, rel=0.02)
        gap = report.roi_optimistic - report.roi_conservative
        assert gap < 0.02 * report.roi_optimistic

    def test_fp_impact_matches_fractional_count_semantics(self):
        report = compute_roi(CostParams())
        fp_count = 10000 * (1 - 0.044) * 0.0016
        assert report.fp_impact == pytest.approx(fp_count * 12.77)
        assert report.fp_impact == pytest.approx(195, abs=1.0)


class TestSpreadsheetAudit:
    @given(
        recall=st.floats(0, 1),
        fpr=st.floats(0, 0.2),
        base=st.floats(0.001, 0.5),
    )
    def test_matches_to_the_cent(self, recall, fpr, base):
        p = CostParams(recall=recall, fpr=fpr, base_rate=base)
        report = compute_roi(p)
        cells = spreadsheet(p)
        assert report.total_cost == pytest.approx(cells["total"], abs=0.005)
        assert report.risk_mitigated == pytest.approx(cells["risk"], abs=0.005)
        assert report.roi_optimistic == pytest.approx(cells["roi_opt"], abs=1e-9)
        assert report.roi_conservative == pytest.approx(cells["roi_cons"], abs=1e-9)


class TestProperties:
    @given(st.floats(0, 1), st.floats(0, 1))
    def test_roi_monotone_in_recall(self, r1, r2):
        lo, hi = sorted((r1, r2))
        a = compute_roi(CostParams(recall=lo))
        b = compute_roi(CostParams(recall=hi))
        assert b.roi_optimistic >= a.roi_optimistic - 1e-9

    @given(st.floats(0, 1))
    def test_conservative_never_exceeds_optimistic(self, recall):
        report = compute_roi(CostParams(recall=recall))
        assert report.roi_conservative <= report.roi_optimistic + 1e-12

    @given(st.floats(0, 1))
    def test_detected_plus_missed_is_attack_volume(self, recall):
        p = CostParams(recall=recall)
        report = compute_roi(p)
        assert report.attacks_detected + report.attacks_missed == pytest.approx(
            p.daily_emails * p.base_rate
        )


class TestBoundaries:
    def test_zero_recall_negative_roi(self):
        report = compute_roi(CostParams(recall=0.0))
        assert report.attacks_detected == 0
        assert report.roi_optimistic == pytest.approx(-1.0)

    def test_zero_cost_flagged(self):
        with pytest.raises(ZeroCost):
            compute_roi(CostParams(api_cost_per_day=0, review_rate=0, fpr=0))

    def test_fraction_bounds_validated(self):
        with pytest.raises(ValueError):
            CostParams(recall=1.2)
        with pytest.raises(ValueError):
            CostParams(penalty_per_breach=-1)


class TestPerMode:
    def test_one_report_per_mode(self):
        table = per_mode_economics(
            {"baseline": {"recall": 0.372, "fpr": 0.0016},
             "aggressive": {"recall": 0.446, "fpr": 0.0016}},
            CostParams(),
        )
        assert set(table) == {"baseline", "aggressive"}
        assert table["baseline"].roi_optimistic == pytest.approx(542.0, rel=0.01)
        assert table["aggressive"].roi_optimistic == pytest.approx(651.2, rel=0.01)
