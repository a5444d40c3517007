import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline, make_union

from subuniversal import estimators as E
from subuniversal import transducers


def test_check_strings():
    assert E.check_strings(["0", "", "11"]) == ["0", "", "11"]
    assert E.check_strings(np.array([["0"], ["1"]], dtype=object)) == ["0", "1"]
    with pytest.raises(TypeError):
        E.check_strings("0101")
    with pytest.raises(ValueError):
        E.check_strings(["012"])
    with pytest.raises(ValueError):
        E.check_strings(np.array([["0", "1"]], dtype=object))
    with pytest.raises(ValueError):
        E.check_strings([""], allow_empty_string=False)
    with pytest.raises(TypeError):
        E.check_strings([1, 2])


def test_turing_machine_ctm(census22):
    est = E.TuringMachineCTM(n_states=2, consolidate=False).fit()
    d = census22.distribution()
    out = est.transform(["0", "01", "0" * 30])
    assert out.shape == (3, 1)
    assert out[0, 0] == pytest.approx(-math.log2(d.counts["0"] / d.mass))
    assert math.isnan(out[2, 0])
    assert est.score_samples(["0" * 30])[0] == -np.inf
    assert est.n_programs_ == 20_000


def test_params_and_clone():
    est = E.TuringMachineCTM(n_states=3, cutoff=13, blanks="0")
    params = est.get_params()
    assert params["n_states"] == 3 and params["cutoff"] == 13
    twin = clone(est)
    assert twin.get_params() == params and twin is not est
    est.set_params(cutoff=21)
    assert est.cutoff == 21


def test_not_fitted():
    with pytest.raises(NotFittedError):
        E.TuringMachineCTM().transform(["0"])


def test_no_default_cutoff():
    with pytest.raises(ValueError, match="cutoff"):
        E.TuringMachineCTM(n_states=7).fit()


def test_transducer_complexity_kinds():
    ap = E.TransducerComplexity(max_len=16).fit()
    mn = E.TransducerComplexity(max_len=16, kind="min").fit()
    table = transducers.DescriptionTable(16)
    got = mn.transform(["", "0", "0110110110"])
    assert got[0, 0] == 8 and got[1, 0] == table.complexity("0")
    ap_out = ap.transform(["", "0"])
    assert ap_out[0, 0] < ap_out[1, 0]
    with pytest.raises(ValueError):
        E.TransducerComplexity(kind="other").fit()


def test_grammar_complexity():
    est = E.GrammarComplexity(n_grammars=500).fit(["0", "01", "000", "001"])
    vals = est.transform(["0", "01"]).ravel()
    assert vals[0] < vals[1]
    with pytest.raises(ValueError):
        E.GrammarComplexity(n_grammars=10).fit()


def test_other_models_fit():
    ca = E.CellularAutomatonCTM(steps=6).fit()
    nh = E.NonHaltingTMCTM(steps=5).fit()
    for est in (ca, nh):
        assert est.distribution_.counts
        assert E.as_distribution(est) is est.distribution_
        assert est.get_feature_names_out()[0].endswith("_complexity")


def test_consolidate_flag_makes_symmetric():
    est = E.TuringMachineCTM(n_states=2, blanks="0", consolidate=True).fit()
    out = est.transform(["001", "100", "110", "011"]).ravel()
    assert np.all(out == out[0])


def test_baselines_in_union():
    union = make_union(E.EntropyBaseline(), E.LZWBaseline())
    X = ["0000", "0101", "0"]
    feats = union.fit_transform(X)
    assert feats.shape == (3, 2)
    assert feats[0, 0] == 0.0 and feats[1, 0] == 1.0 and feats[2, 1] == 2
    assert E.EntropyBaseline().transform([""])[0, 0] == 0.0


def test_pipeline_roundtrip():
    pipe = make_pipeline(E.TuringMachineCTM(n_states=2))
    out = pipe.fit_transform(["0", "1"])
    assert out.shape == (2, 1) and out[0, 0] == out[1, 0]
