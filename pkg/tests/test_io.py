"""Instance file round trips, parse error collection, and synthetic draws."""
import json

import numpy as np
import pytest

from decoding_game.io import (
    HEADER_LINE,
    emit_instances,
    emit_summary,
    emit_traces,
    generate_synthetic,
    instance_to_json,
    parse_instances,
)
from decoding_game.runner import run_one
from decoding_game.types import GameConfig, SyntheticSpec


def write_lines(tmp_path, lines, name="inst.jsonl"):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def candidate_obj(cid, **over):
    obj = {"id": cid, "g_correct": -1.0, "g_incorrect": -2.0, "v_correct": 0.5, "v_incorrect": -0.5}
    obj.update(over)
    return obj


def instance_line(iid="i0", gold=None, extra=None, cands=None):
    obj = {"id": iid, "candidates": cands or [candidate_obj("c0"), candidate_obj("c1", g_correct=-0.5)]}
    if gold is not None:
        obj["gold_candidate_id"] = gold
    if extra:
        obj.update(extra)
    return json.dumps(obj)


def test_round_trip_is_byte_identical(tmp_path):
    insts = generate_synthetic(SyntheticSpec(num_instances=5, n=4, seed=3))
    first = tmp_path / "a.jsonl"
    emit_instances(insts, first)
    parsed = parse_instances(first)
    assert not parsed.errors
    second = tmp_path / "b.jsonl"
    emit_instances(parsed.instances, second)
    assert first.read_bytes() == second.read_bytes()
    assert first.read_text().splitlines()[0] == HEADER_LINE


def test_unknown_fields_survive_round_trip(tmp_path):
    line = instance_line(
        extra={"source": "unit", "fold": 3},
        cands=[candidate_obj("c0", note="keep me"), candidate_obj("c1")],
    )
    path = write_lines(tmp_path, [HEADER_LINE, line])
    parsed = parse_instances(path)
    inst = parsed.instances[0]
    assert inst.extra == {"source": "unit", "fold": 3}
    assert inst.candidates[0].extra == {"note": "keep me"}
    emitted = instance_to_json(inst)
    assert json.loads(emitted) == json.loads(line)


def test_comments_and_blanks_are_skipped(tmp_path):
    path = write_lines(tmp_path, ["# leading note", "", instance_line(), "  ", "# trailing"])
    parsed = parse_instances(path)
    assert len(parsed.instances) == 1 and not parsed.errors


def test_parse_errors_carry_line_numbers(tmp_path):
    bad_da = instance_line("i1", cands=[candidate_obj("c0", da=1.5), candidate_obj("c1")])
    bad_json = "{not json"
    path = write_lines(tmp_path, [HEADER_LINE, instance_line("i0"), bad_json, bad_da])
    parsed = parse_instances(path)
    assert [i.instance_id for i in parsed.instances] == ["i0"]
    assert [e.line_no for e in parsed.errors] == [3, 4]
    assert "da" in parsed.errors[1].message


@pytest.mark.parametrize(
    "mutate, needle",
    [
        (lambda c: c.update(g_correct=float("inf")), "finite"),
        (lambda c: c.update(v_correct=True), "finite number"),
        (lambda c: c.update(g_incorrect="high"), "finite number"),
        (lambda c: c.pop("v_incorrect"), "missing"),
        (lambda c: c.pop("id"), "missing 'id'"),
    ],
)
def test_candidate_field_validation(tmp_path, mutate, needle):
    cand = candidate_obj("c0")
    mutate(cand)
    bad = json.dumps({"id": "i1", "candidates": [cand, candidate_obj("c1")]})
    path = write_lines(tmp_path, [instance_line("i0"), bad])
    parsed = parse_instances(path)
    assert len(parsed.errors) == 1
    assert needle in parsed.errors[0].message


def test_instance_level_validation(tmp_path):
    single = json.dumps({"id": "i1", "candidates": [candidate_obj("c0")]})
    dup_cand = json.dumps({"id": "i2", "candidates": [candidate_obj("c0"), candidate_obj("c0")]})
    missing_gold = instance_line("i3", gold="nope")
    dup_inst = instance_line("i0")
    path = write_lines(
        tmp_path, [instance_line("i0"), single, dup_cand, missing_gold, dup_inst]
    )
    parsed = parse_instances(path)
    assert [i.instance_id for i in parsed.instances] == ["i0"]
    assert len(parsed.errors) == 4
    assert "duplicate instance id" in parsed.errors[-1].message


def test_zero_valid_instances_is_fatal(tmp_path):
    path = write_lines(tmp_path, [HEADER_LINE, "# only comments"])
    with pytest.raises(ValueError, match="no instances"):
        parse_instances(path)
    bad_only = write_lines(tmp_path, ["{not json"], name="bad.jsonl")
    with pytest.raises(ValueError, match="no instances"):
        parse_instances(bad_only)


def test_synthetic_is_deterministic_and_planted():
    spec = SyntheticSpec(num_instances=8, n=6, seed=42)
    a, b = generate_synthetic(spec), generate_synthetic(spec)
    for x, y in zip(a, b):
        assert instance_to_json(x) == instance_to_json(y)
    for inst in a:
        g = inst.scores("g_correct")
        gold_idx = [c.candidate_id for c in inst.candidates].index(inst.gold_candidate_id)
        assert gold_idx == int(np.argmax(g))
        others = np.delete(g, gold_idx)
        assert np.all(g[gold_idx] >= others + 2.0 - 1e-12)


def test_synthetic_without_gold():
    insts = generate_synthetic(SyntheticSpec(num_instances=3, n=4, seed=0, planted_gold=False))
    assert all(i.gold_candidate_id is None for i in insts)


def test_synthetic_da_in_range():
    insts = generate_synthetic(SyntheticSpec(num_instances=5, n=10, seed=9))
    for inst in insts:
        for c in inst.candidates:
            assert 0.0 <= c.da <= 1.0
            assert c.v_correct == -c.v_incorrect


def test_trace_and_summary_formats(tmp_path):
    insts = generate_synthetic(SyntheticSpec(num_instances=2, n=4, seed=1))
    cfg = GameConfig()
    outcomes = [run_one(inst, cfg) for inst in insts]

    trace_path = tmp_path / "trace.csv"
    emit_traces([o.result for o in outcomes], trace_path, schedule=cfg.schedule)
    lines = trace_path.read_text().splitlines()
    assert lines[0] == "instance_id,t,gap,entropy,schedule"
    expected_rows = sum(o.result.iterations_used for o in outcomes)
    assert len(lines) == 1 + expected_rows
    first = lines[1].split(",")
    assert first[0] == insts[0].instance_id and first[1] == "1"
    assert first[4] == "markovian"
    float(first[2]), float(first[3])  # numeric fields parse back

    summary_path = tmp_path / "summary.csv"
    emit_summary(outcomes, summary_path)
    rows = summary_path.read_text().splitlines()
    assert rows[0].startswith("instance_id,converged,iterations,")
    assert len(rows) == 1 + len(outcomes)
    cells = rows[1].split(",")
    assert cells[0] == insts[0].instance_id
    assert cells[1] in ("true", "false")
    assert int(cells[2]) == outcomes[0].result.iterations_used


def test_emit_is_byte_stable(tmp_path):
    insts = generate_synthetic(SyntheticSpec(num_instances=3, n=5, seed=7))
    outcomes = [run_one(inst, GameConfig()) for inst in insts]
    p1, p2 = tmp_path / "t1.csv", tmp_path / "t2.csv"
    emit_traces([o.result for o in outcomes], p1, schedule="markovian")
    emit_traces([o.result for o in outcomes], p2, schedule="markovian")
    assert p1.read_bytes() == p2.read_bytes()
    s1, s2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
    emit_summary(outcomes, s1)
    emit_summary(outcomes, s2)
    assert s1.read_bytes() == s2.read_bytes()
