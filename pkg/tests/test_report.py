import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import connected_graphs
from pairwalk.families import cycle
from pairwalk.report import SCHEMA_VERSION, ReportDocument, ReportError, encode, graph_summary, transfer_record
from pairwalk.search import pst_search
from pairwalk.spectra import decompose_graph
from pairwalk.states import SPairState
from pairwalk.transfer import is_periodic

finite = st.floats(allow_nan=False, allow_infinity=False)
scalars = st.one_of(st.none(), st.booleans(), st.integers(-10**6, 10**6), finite, st.text(max_size=8))
records = st.dictionaries(st.text(min_size=1, max_size=6),
                          st.one_of(scalars, st.lists(scalars, max_size=4)), max_size=5)


@given(st.lists(records, max_size=4), st.lists(st.text(max_size=10), max_size=3), finite)
def test_document_round_trip(recs, diags, secs):
    doc = ReportDocument("analyze", {"n": 3}, {"s": [1.0, -1.0]})
    for r in recs:
        doc.add("items", r)
    doc.diagnostics.extend(diags)
    doc.timing["seconds"] = secs
    text = doc.to_json()
    back = ReportDocument.from_json(text)
    assert back == doc
    assert back.to_json() == text


@given(connected_graphs(max_n=6))
def test_transfer_reports_round_trip(X):
    dec = decompose_graph(X)
    doc = ReportDocument("analyze", graph_summary(X))
    for h in pst_search(dec):
        doc.add("pst", transfer_record(h.report))
    doc.add("periodic", transfer_record(is_periodic(dec, SPairState(0, 1, 1.0).state(X.n))))
    assert ReportDocument.from_json(doc.to_json()) == doc


def test_encoding_rules():
    assert encode(1 + 2j) == [1.0, 2.0]
    assert encode(Fraction(3, 4)) == "3/4"
    with pytest.raises(ReportError):
        encode(float("nan"))
    with pytest.raises(ReportError):
        encode(object())


def test_fields_are_ordered_and_versioned():
    doc = ReportDocument("analyze", graph_summary(cycle(4)))
    doc.add("z", {"b": 1, "a": 2})
    doc.add("a", {"x": 1})
    d = json.loads(doc.to_json())
    assert d["schema"] == SCHEMA_VERSION
    assert list(d) == sorted(d)
    assert list(d["results"]) == ["a", "z"]
    with pytest.raises(ReportError):
        ReportDocument.from_dict({**d, "schema": "other/0"})


def test_transfer_record_contents():
    dec = decompose_graph(cycle(4))
    rep = pst_search(dec, s_policy=(1.0,))[1].report
    rec = transfer_record(rep)
    assert rec["verdict"] == "PST"
    assert rec["time_symbolic"] == "pi/4"
    assert rec["time_fraction"] == "1/4"
    assert isinstance(rec["phase"], list) and len(rec["phase"]) == 2
