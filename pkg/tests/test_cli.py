"""Driver subcommands: frozen reports, exit codes, determinism."""

from __future__ import annotations

import pytest

from topring import acceptance, cli, corpus


def run(capsys, *argv):
    rc = cli.main(list(argv))
    return rc, capsys.readouterr().out


def lines(out):
    return out.splitlines()


def test_wedderburn_group_algebra(capsys):
    rc, out = run(capsys, "wedderburn", corpus.path("f2c3.alg"))
    assert rc == 0
    body = lines(out)
    assert "factor 2 1" in body
    assert "factor 4 1" in body
    assert body.count("factor 2 1") + body.count("factor 4 1") == 2


def test_classify_perfect_adic_tower(capsys):
    rc, out = run(capsys, "classify-perfect", corpus.path("adic4.twr"))
    assert rc == 0
    body = lines(out)
    assert "verdict PERFECT" in body
    assert "radical_dims 0 1 2 3 4" in body
    assert "t_nilpotency certificate 1 2 3 4 5" in body
    assert "quotient_factor 2 1" in body


def test_radical_report(capsys):
    rc, out = run(capsys, "radical", corpus.path("f2x3.alg"))
    assert rc == 0
    body = lines(out)
    assert "radical_dim 2" in body
    assert "nilpotency_index 3" in body
    assert "basis 0 1 1" in body and "basis 1 2 1" in body


def test_decompose_module_report(capsys):
    rc, out = run(capsys, "decompose-module", corpus.path("f2c3_reg.mod"))
    assert rc == 0
    body = lines(out)
    assert "summands 2" in body
    assert "summand 0 1" in body and "summand 1 2" in body


def test_classify_tower_blocks(capsys):
    rc, out = run(capsys, "classify-tower", corpus.path("blocks2.twr"))
    assert rc == 0
    body = lines(out)
    assert "kind SEMISIMPLE" in body
    assert body.index("factor 2 1") < body.index("factor 2 2") < body.index("factor 4 1")


def test_classify_tower_adic_rejected(capsys):
    rc, out = run(capsys, "classify-tower", corpus.path("adic4.twr"))
    assert rc == 0
    body = lines(out)
    assert "kind NOT" in body
    assert "witness_level 1" in body


def test_lift_idempotents_transcript(capsys):
    rc, out = run(capsys, "lift-idempotents", corpus.path("t2_f2.alg"))
    assert rc == 0
    body = lines(out)
    assert "members 2" in body
    assert "check 0 1 1 1" in body and "check 1 1 1 1" in body
    assert "sums_to_unit 1" in body


def test_lift_idempotents_accepts_tower(capsys):
    rc, out = run(capsys, "lift-idempotents", corpus.path("adic4.twr"))
    assert rc == 0
    body = lines(out)
    assert "algebra_dim 5" in body
    assert "radical_dim 4" in body
    assert "members 1" in body
    assert "sums_to_unit 1" in body


def test_matmul_shift_pair_is_identity(capsys):
    rc, out = run(capsys, "matmul", corpus.path("shift_f2.mat"),
                  corpus.path("lshift_f2.mat"))
    assert rc == 0
    body = lines(out)
    assert "window 6" in body
    for x in range(6):
        assert f"entry {x} {x} 0 1" in body
    assert sum(1 for ln in body if ln.startswith("entry")) == 6


def test_matmul_uncertifiable_product_fails_validation(capsys):
    rc, _ = run(capsys, "matmul", corpus.path("shift_f2.mat"),
                corpus.path("shift_f2.mat"))
    assert rc == 3


def test_transport_preserves_endomorphisms(capsys):
    rc, out = run(capsys, "transport", corpus.path("dual2_reg.mod"), "--window", "3")
    assert rc == 0
    body = lines(out)
    assert "module_dim 6" in body
    assert "end_dim_source 2" in body
    assert "end_dim_transported 2" in body
    assert "fully_faithful 1" in body


def test_contratensor_closed_form(capsys):
    rc, out = run(capsys, "contratensor", corpus.path("dual2_reg.mod"), "--window", "3")
    assert rc == 0
    body = lines(out)
    assert "tensor_dim 12" in body
    assert "relation_rank 6" in body
    assert "fp_dim 6" in body
    assert "cardinality 64" in body


def test_bass_flat_projective(capsys):
    rc, out = run(capsys, "bass-flat", corpus.path("f2c3.alg"),
                  "--depth", "5", "--seed", "7")
    assert rc == 0
    body = lines(out)
    assert "seed 7" in body
    assert "verdict PROJECTIVE" in body
    assert "stabilization_index 2" in body


def test_split_limit_not_split(capsys):
    rc, out = run(capsys, "split-limit", corpus.path("chain6.sys"))
    assert rc == 0
    body = lines(out)
    assert "kind NOT_SPLIT" in body
    assert "socle_heights 0 1 2 3 4 5" in body
    assert "sum_height_bound 5" in body


def test_coperfect_witness_survives_refinement(capsys):
    rc, out = run(capsys, "coperfect", corpus.path("chain6.sys"),
                  corpus.path("chain7.sys"), "--depth", "5")
    assert rc == 0
    body = lines(out)
    assert "kind witness" in body
    assert "refinement_verified 1" in body


def test_coperfect_finite_module_certificate(capsys):
    rc, out = run(capsys, "coperfect", corpus.path("f2c3_reg.mod"), "--depth", "3")
    assert rc == 0
    body = lines(out)
    assert "kind certificate" in body
    assert "evidence bound" in body
    assert "bound 2" in body


def test_bridge_consistent(capsys):
    rc, out = run(capsys, "bridge", corpus.path("chain6.sys"), "--depth", "5")
    assert rc == 0
    body = lines(out)
    assert "perfect_verdict NOT_PERFECT" in body
    assert "sigma_kind witness" in body
    assert "consistent 1" in body


def test_reports_are_byte_identical_across_runs(capsys, tmp_path):
    out1 = tmp_path / "r1.txt"
    out2 = tmp_path / "r2.txt"
    rc1, text1 = run(capsys, "classify-perfect", corpus.path("adic4.twr"),
                     "--out", str(out1))
    rc2, text2 = run(capsys, "classify-perfect", corpus.path("adic4.twr"),
                     "--out", str(out2))
    assert rc1 == rc2 == 0
    assert text1 == text2
    assert out1.read_text() == out2.read_text() == text1


def test_missing_file_exits_2(capsys):
    rc, _ = run(capsys, "radical", "/nonexistent/no.alg")
    assert rc == 2


def test_garbage_file_exits_2(capsys, tmp_path):
    p = tmp_path / "bad.alg"
    p.write_text("object algebra\nfield banana\nend\n")
    rc, _ = run(capsys, "radical", str(p))
    assert rc == 2


def test_wrong_object_kind_exits_3(capsys):
    rc, _ = run(capsys, "radical", corpus.path("chain6.sys"))
    assert rc == 3


def test_non_semisimple_input_exits_3(capsys):
    rc, _ = run(capsys, "wedderburn", corpus.path("f2x3.alg"))
    assert rc == 3


def test_bad_depth_exits_3(capsys):
    rc, _ = run(capsys, "bass-flat", corpus.path("f2.alg"), "--depth", "0")
    assert rc == 3


def test_bad_window_exits_3(capsys):
    rc, _ = run(capsys, "transport", corpus.path("dual2_reg.mod"), "--window", "0")
    assert rc == 3


def test_too_many_inputs_exits_3(capsys):
    rc, _ = run(capsys, "coperfect", corpus.path("chain6.sys"),
                corpus.path("chain7.sys"), corpus.path("chain6.sys"))
    assert rc == 3


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_verify_report_shape(capsys, monkeypatch):
    # the real suites run in their own gate tests; stub them here to pin
    # the report layout and the nonzero-count rule
    canned = [acceptance.SuiteResult(name="a", checks=3, report="r"),
              acceptance.SuiteResult(name="b", checks=2, report="r")]
    monkeypatch.setattr(acceptance, "run_all", lambda seed: canned)
    rc, out = run(capsys, "verify")
    assert rc == 0
    body = lines(out)
    assert "corpus_in_sync 1" in body
    assert "suite a pass 3" in body and "suite b pass 2" in body
    assert "total_checks 5" in body


def test_verify_empty_suite_exits_4(capsys, monkeypatch):
    canned = [acceptance.SuiteResult(name="a", checks=0, report="r")]
    monkeypatch.setattr(acceptance, "run_all", lambda seed: canned)
    rc, _ = run(capsys, "verify")
    assert rc == 4


def test_verify_corpus_drift_exits_4(capsys, monkeypatch):
    real = corpus.read
    monkeypatch.setattr(corpus, "read",
                        lambda name: "x" if name == "f2.alg" else real(name))
    rc, _ = run(capsys, "verify")
    assert rc == 4
