import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lgcy import __version__
from lgcy.poly import fermat
from lgcy.report import (
    SCHEMA_VERSION,
    Check,
    Report,
    emit_csv,
    emit_csv_tables,
    emit_json,
    emit_pretty,
    emit_report,
    parse_json,
)
from lgcy.tables import hypersurface_betti, pv_cohomology_table


def test_empty_report_skeleton():
    d = json.loads(emit_json(Report()))
    assert d["version"] == __version__
    assert d["schema_version"] == SCHEMA_VERSION
    for key in ("input", "certificates", "tables", "frobenius", "timings_ms"):
        assert d[key] == {}
    assert d["checks"] == []
    assert "entries" not in d
    assert list(d)[-1] == "timings_ms"


def test_csv_hypersurface_cubic():
    r = Report(tables={"hypersurface_H": hypersurface_betti(fermat(3)).payload()})
    assert emit_csv_tables(r)["hypersurface_H"] == b"r,dim\n0,1\n1,2\n2,1\n"
    assert emit_csv(r).startswith(b"# hypersurface_H\n")


def test_csv_has_lf_only():
    r = Report(tables={"pv_H": pv_cohomology_table(fermat(4)).payload()})
    assert b"\r" not in emit_csv(r)


def test_pretty_uses_paper_labels():
    r = Report(
        input={"poly": "x1^4 + x2^4 + x3^4 + x4^4", "n": 4},
        tables={"hypersurface_H": hypersurface_betti(fermat(4)).payload()},
        frobenius={"dim": 24, "default": {"trace_scale": "1"}},
        checks=[Check.of("a", True), Check.of("b", False)],
    )
    text = emit_pretty(r).decode("utf-8")
    assert "R(W)_0 ⊕ C (dim 22)" in text
    assert "default.trace_scale: 1" in text
    assert "PASS    a" in text and "FAIL    b" in text


def test_unsupported_format():
    with pytest.raises(ValueError):
        emit_report(Report(), "xml")


def test_bad_verdict_rejected():
    with pytest.raises(ValueError):
        Check("x", "maybe")


def test_schema_version_checked():
    d = Report().to_dict()
    d["schema_version"] = SCHEMA_VERSION + 1
    with pytest.raises(ValueError):
        Report.from_dict(d)


def test_body_drops_timings():
    r = Report(timings_ms={"total": 3.2})
    assert "timings_ms" not in r.body()
    assert Report(timings_ms={"total": 1}).body() == r.body()


json_leaf = st.one_of(st.integers(-100, 100), st.text(max_size=5), st.booleans(), st.none())
json_values = st.recursive(
    json_leaf,
    lambda inner: st.lists(inner, max_size=3) | st.dictionaries(st.text(max_size=4), inner, max_size=3),
    max_leaves=8,
)


@given(
    st.dictionaries(st.text(max_size=4), json_values, max_size=3),
    st.lists(st.tuples(st.text(min_size=1, max_size=6), st.booleans(), json_values), max_size=4),
    st.lists(st.dictionaries(st.text(max_size=4), json_values, max_size=2), max_size=2),
)
def test_round_trip(certs, checks, entries):
    r = Report(
        input={"poly": "x1^3 + x2^3 + x3^3", "n": 3},
        certificates=certs,
        checks=[Check.of(n, ok, w) for n, ok, w in checks],
        entries=entries,
        timings_ms={"total": 1.5},
    )
    assert parse_json(emit_json(r)) == r


def test_fractions_serialised_as_strings():
    r = Report(frobenius={"c_phi": Fraction(1, 5)})
    assert json.loads(emit_json(r))["frobenius"]["c_phi"] == "1/5"
