import json
from pathlib import Path

import numpy as np
import pytest

import nomoforge as nf

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
GOLDEN = Path(__file__).resolve().parents[1] / "golden"


def texts(name, outputs="outputs.csv", shap=True):
    d = FIXTURES / name
    out = {
        "features": (d / "features.csv").read_text(),
        "outputs": (d / outputs).read_text(),
        "manifest": (d / "manifest.csv").read_text(),
    }
    if shap:
        out["shap"] = (d / "shap.csv").read_text()
    return out


def test_expand_grid_row_major():
    features = [
        {"name": "a", "type": "categorical", "levels": ["0", "1"]},
        {"name": "n", "type": "numeric", "min": 15, "max": 22, "step": 1},
    ]
    rows = nf.expand_grid(features)
    assert len(rows) == 16
    assert rows[0] == ["0", 15.0]
    assert rows[1] == ["0", 16.0]
    assert rows[8] == ["1", 15.0]


def test_grid_cap():
    features = [
        {"name": "a", "type": "categorical", "levels": ["0", "1"]},
        {"name": "n", "type": "numeric", "min": 0, "max": 1, "step": 1e-4},
    ]
    with pytest.raises(nf.NomoforgeError) as err:
        nf.expand_grid(features)
    assert err.value.code == "GridTooLarge"
    assert len(nf.expand_grid(features, grid_cap=20000)) == 20002


def test_validate_reports_duplicates():
    report = nf.validate(**texts("duplicate", shap=False))
    assert not report["ok"]
    assert "DuplicateRow" in {f["code"] for f in report["findings"]}
    assert nf.validate(**texts("categorical"))["ok"]


def test_classify_kind():
    cat = [{"name": "a", "type": "categorical", "levels": ["0", "1"]}]
    assert nf.classify_kind(cat) == ("CatBinNoProb", 1)
    assert nf.classify_kind(cat, estimate=True)[1] == 3


def test_handtrace_rules_and_reading():
    t = texts("handtrace")
    ranking = nf.rank_predictors(**t)
    assert ranking["descending"] == ["A", "B"]
    rules = nf.derive_rules(t["features"], t["outputs"], t["manifest"], ranking["ranking"])
    assert rules == nf.derive_rules(t["features"], t["outputs"], t["manifest"], ranking["ranking"], oracle=True)
    assert [r["assignments"] for r in rules["positive"]] == [
        [{"feature": "A", "level": "1"}],
        [{"feature": "A", "level": "0"}, {"feature": "B", "level": "1"}],
    ]
    assert nf.match_rule(rules, {"A": "0", "B": "0"}) == ("negative", 0)
    trace = nf.read_type1(rules, {"A": "1", "B": "0"})
    assert trace["result"] == "positive"
    assert [s["key"] for s in trace["steps"]][0] == "1"


@pytest.mark.parametrize(
    "case",
    [
        ("type1_categorical.svg", "categorical", "outputs.csv", {}),
        ("type2_categorical_prob.svg", "categorical", "outputs.csv", {"prob": True}),
        ("type3_categorical_estimate.svg", "categorical", "outputs_estimate.csv", {"estimate": True}),
        ("type4_mixed_prob.svg", "mixed", "outputs.csv", {"prob": True}),
        ("type5_mixed_estimate.svg", "mixed", "outputs_estimate.csv", {"estimate": True}),
    ],
)
def test_create_matches_golden(case):
    golden, fixture, outputs, options = case
    result = nf.create_nomogram(**texts(fixture, outputs), **options)
    assert result["type"] == int(golden[4])
    assert result["svg"] == (GOLDEN / golden).read_text()
    assert ("rules" in result) == (result["type"] == 1)


def test_tabular_read_snaps_and_rejects():
    t = texts("mixed", shap=False)
    trace = nf.read_tabular(**t, sample={"qsec": 16.4, "cyl.6": "1", "vs.1": "0"})
    assert trace["snap_delta"] == pytest.approx(0.4)
    with pytest.raises(nf.NomoforgeError) as err:
        nf.read_tabular(**t, sample={"qsec": 99, "cyl.6": "1", "vs.1": "0"})
    assert err.value.code == "OutOfRange"


def test_fallback_matches_statsmodels():
    sm = pytest.importorskip("statsmodels.api")
    x = np.array([0, 0, 0, 0, 1, 1, 1, 1], dtype=float)
    y = np.array([1, 1, 1, 0, 1, 0, 0, 0], dtype=float)
    ours = nf.fit_logistic(x.tolist(), y.tolist())
    ref = sm.GLM(y, sm.add_constant(x), family=sm.families.Binomial()).fit(tol=1e-14, maxiter=200)
    assert ours["slope_se"] == pytest.approx(np.sqrt(1 / 3 + 1 + 1 + 1 / 3), rel=1e-10)
    assert ours["slope"] == pytest.approx(ref.params[1], rel=1e-8)
    assert ours["slope_se"] == pytest.approx(ref.bse[1], rel=1e-8)

    x = np.arange(1.0, 6.0)
    y = np.array([2.1, 3.9, 6.2, 7.8, 10.1])
    ols = nf.fit_ols(x.tolist(), y.tolist())
    ref = sm.OLS(y, sm.add_constant(x)).fit()
    assert ols["slope"] + nf.WALD_Z * ols["slope_se"] == pytest.approx(2.10705213942, rel=1e-9)
    assert ols["slope_se"] == pytest.approx(ref.bse[1], rel=1e-9)


def test_separation_correction():
    fit = nf.fit_logistic_corrected([1, 2, 3, 4, 5, 6], [0, 0, 0, 1, 1, 1])
    assert fit["corrected"]
    assert np.exp(fit["slope"] + nf.WALD_Z * fit["slope_se"]) == pytest.approx(4.01225719145, rel=1e-6)


def test_service_handlers():
    parts = texts("categorical")
    parts["prob"] = "1"
    status, body, headers = nf.handle_nomogram(parts)
    assert status == 200
    doc = json.loads(body)
    assert headers["X-Content-Hash"] == "fnv1a64:" + nf.content_hash(doc["svg"].encode())

    request = {"rules": nf.create_nomogram(**texts("handtrace"))["rules"], "sample": {"A": "1", "B": "1"}}
    status, body, _ = nf.handle_read(json.dumps(request))
    assert status == 200
    assert json.loads(body)["result"] == "positive"
    assert nf.handle_read("not json")[0] == 400


def test_content_hash_vectors():
    assert nf.content_hash(b"") == "cbf29ce484222325"
    assert nf.content_hash(b"a") == "af63dc4c8601ec8c"
