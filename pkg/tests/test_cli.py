"""Command line driver: exit codes, output formats, determinism."""

import io
import json

import pytest

from bigsos.cli import run
from conftest import fixture_path


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


# --- check -------------------------------------------------------------------------


def test_check_monotone_spec():
    code, out, _ = cli("check", fixture_path("lookahead2"))
    assert code == 0
    assert "monotone: yes" in out


def test_check_negative_spec_names_rule():
    code, out, _ = cli("check", fixture_path("negloop"))
    assert code == 3
    assert "sigma" in out


def test_check_force_does_not_silence_verdict():
    code, _, _ = cli("check", fixture_path("negloop"), "--force")
    assert code == 3


def test_check_json_format():
    code, out, _ = cli("check", fixture_path("negloop"), "--format", "json")
    assert code == 3
    doc = json.loads(out)
    assert doc["monotone"] is False
    assert doc["offending_rules"] == ["sigma"]


def test_check_reports_validation_diagnostics():
    code, out, err = cli("check", fixture_path("empty"))
    assert code == 0  # empty but well-formed


# --- model -------------------------------------------------------------------------


def test_model_text_output():
    code, out, _ = cli("model", fixture_path("lookahead2"), "tau(c)")
    assert code == 0
    assert "tau(c) -a-> sigma(tau(c))" in out
    assert "converged yes" in out


def test_model_empty_spec_all_bottom():
    code, out, _ = cli("model", fixture_path("empty"))
    assert code == 0
    assert "c ⊥" in out


def test_model_json_has_report():
    code, out, _ = cli("model", fixture_path("lookahead2"), "tau(c)",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert sorted(doc) == ["behaviour", "frontier", "report", "universe"]
    assert doc["report"]["converged"] is True


def test_model_nonmonotone_refused():
    code, _, err = cli("model", fixture_path("negloop"))
    assert code == 3
    assert "sigma" in err


def test_model_forced_oscillation_exits_4():
    code, out, _ = cli("model", fixture_path("negloop"), "--force")
    assert code == 4
    assert "oscillation yes" in out  # report still printed


def test_model_dot_output():
    code, out, _ = cli("model", fixture_path("lookahead2"), "tau(c)",
                       "--format", "dot")
    assert code == 0
    assert out.startswith("digraph model {")


def test_model_dot_rejected_for_streams():
    code, out, err = cli("model", fixture_path("factstream"), "--format", "dot")
    assert code == 0
    assert "digraph" not in out
    assert "dot" in err  # warned, fell back to text


# --- unfold ------------------------------------------------------------------------


def test_unfold_factorials():
    code, out, _ = cli("unfold", fixture_path("factstream"), "sigma(pos)",
                       "-d", "3", "--universe-size", "16", "--universe-count", "400")
    assert code == 0
    assert out.strip() == "1 6 120"


def test_unfold_bottom_marker():
    code, out, _ = cli("unfold", fixture_path("factstream"), "c", "-d", "2",
                       "--universe-size", "16", "--universe-count", "400")
    assert code == 0
    assert out.strip() == "1 ⊥"


def test_unfold_json():
    code, out, _ = cli("unfold", fixture_path("lookahead2"), "tau(c)",
                       "-d", "1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["term"] == "tau(c)"
    assert "a" in doc["step"]


# --- equiv, congruence, laws ---------------------------------------------------------


def test_equiv_text_verdict():
    code, out, _ = cli("equiv", fixture_path("lookahead2"), "tau(c)", "tau(d)")
    assert code == 0
    assert "related: yes" in out


def test_equiv_unrelated_terms():
    code, out, _ = cli("equiv", fixture_path("lookahead2"), "tau(c)", "c")
    assert code == 0
    assert "related: no" in out


def test_congruence_clean():
    code, out, _ = cli("congruence", fixture_path("lookahead2"),
                       "sigma(tau(c))", "sigma(tau(d))", "--samples", "25")
    assert code == 0
    assert "violations 0" in out


def test_laws_all_pass():
    code, out, _ = cli("laws", fixture_path("lookahead2"))
    assert code == 0
    for law in ("L3", "L2", "T1", "T2-eta", "T2-mu"):
        assert f"{law}: pass" in out


# --- error handling -------------------------------------------------------------------


def test_parse_error_exits_1(tmp_path):
    bad = tmp_path / "bad.sos"
    bad.write_text("behaviour lts labels a\nops c/0\nrule r: |- c -a->\n")
    code, _, err = cli("check", str(bad))
    assert code == 1
    assert "error" in err


def test_missing_file_exits_2():
    code, _, err = cli("model", "/does/not/exist.sos")
    assert code == 2


def test_invalid_term_argument(tmp_path):
    code, _, err = cli("unfold", fixture_path("lookahead2"), "nosuchop(c)")
    assert code == 1


def test_validation_diagnostics_exit_2(tmp_path):
    bad = tmp_path / "diag.sos"
    bad.write_text("behaviour lts labels a\nops c/0\nrule r: |- c -b-> c\n")
    code, _, err = cli("model", str(bad))
    assert code == 2
    assert "label" in err


def test_bad_bounds_rejected():
    code, _, err = cli("model", fixture_path("lookahead2"), "--universe-count", "0")
    assert code == 2


# --- seeds and determinism -------------------------------------------------------------


def test_seed_env_fallback(monkeypatch):
    monkeypatch.setenv("BIGSOS_SEED", "9")
    code1, out1, _ = cli("congruence", fixture_path("lookahead2"),
                         "sigma(tau(c))", "sigma(tau(d))", "--samples", "20",
                         "--format", "json")
    monkeypatch.delenv("BIGSOS_SEED")
    code2, out2, _ = cli("congruence", fixture_path("lookahead2"),
                         "sigma(tau(c))", "sigma(tau(d))", "--samples", "20",
                         "--seed", "9", "--format", "json")
    assert code1 == code2 == 0
    assert out1 == out2


@pytest.mark.parametrize("argv", [
    ("model", "lookahead2", "tau(c)", "--format", "json"),
    ("laws", "wchain", "--format", "json"),
    ("congruence", "lookahead2", "sigma(tau(c))", "--samples", "15",
     "--seed", "4", "--format", "json"),
])
def test_byte_identical_reruns(argv):
    argv = (argv[0], fixture_path(argv[1])) + argv[2:]
    one = cli(*argv)
    two = cli(*argv)
    assert one == two
