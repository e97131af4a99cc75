"""Instance file format, synthetic generation, and trace/summary emission.

Instances travel as line-delimited JSON with a leading version comment.
Fields are exactly: id, candidates[] with {id, text?, g_correct, g_incorrect,
v_correct, v_incorrect, da?}, and an optional gold_candidate_id; unknown
fields are preserved on a parse/emit round trip. Trace and summary files are
plain CSV, byte-stable for identical inputs.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .types import CandidateRecord, GameInstance, SyntheticSpec

__all__ = [
    "HEADER_LINE",
    "ParseError",
    "ParseResult",
    "parse_instances",
    "emit_instances",
    "generate_synthetic",
    "emit_traces",
    "emit_summary",
]

HEADER_LINE = "# decoding-game instances v1"

_CANDIDATE_FIELDS = ("id", "text", "g_correct", "g_incorrect", "v_correct", "v_incorrect", "da")
_INSTANCE_FIELDS = ("id", "candidates", "gold_candidate_id")


@dataclass(frozen=True)
class ParseError:
    line_no: int
    message: str


class ParseResult(NamedTuple):
    instances: list
    errors: list


def _parse_candidate(obj: dict) -> CandidateRecord:
    if not isinstance(obj, dict):
        raise ValueError("candidate must be an object")
    if "id" not in obj:
        raise ValueError("candidate missing 'id'")
    scores = {}
    for name in ("g_correct", "g_incorrect", "v_correct", "v_incorrect"):
        if name not in obj:
            raise ValueError(f"candidate {obj['id']!r} missing {name!r}")
        value = obj[name]
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
            raise ValueError(f"candidate {obj['id']!r}: {name} must be a finite number")
        scores[name] = float(value)
    da = obj.get("da")
    if da is not None:
        if not isinstance(da, (int, float)) or isinstance(da, bool) or not (0.0 <= da <= 1.0):
            raise ValueError(f"candidate {obj['id']!r}: da must lie in [0, 1]")
        da = float(da)
    extra = {k: v for k, v in obj.items() if k not in _CANDIDATE_FIELDS}
    return CandidateRecord(
        candidate_id=str(obj["id"]),
        text=obj.get("text"),
        da=da,
        extra=extra,
        **scores,
    )


def _parse_instance(obj: dict) -> GameInstance:
    if not isinstance(obj, dict):
        raise ValueError("instance line must be an object")
    if "id" not in obj:
        raise ValueError("instance missing 'id'")
    raw_candidates = obj.get("candidates")
    if not isinstance(raw_candidates, list) or len(raw_candidates) < 2:
        raise ValueError(f"instance {obj['id']!r}: needs a list of >= 2 candidates")
    candidates = tuple(_parse_candidate(c) for c in raw_candidates)
    gold = obj.get("gold_candidate_id")
    extra = {k: v for k, v in obj.items() if k not in _INSTANCE_FIELDS}
    inst = GameInstance(
        instance_id=str(obj["id"]),
        candidates=candidates,
        gold_candidate_id=None if gold is None else str(gold),
        extra=extra,
    )
    inst.validate()
    return inst


def parse_instances(path: str | Path) -> ParseResult:
    """Read an instance file; collect per-line errors, keep the valid lines.

    Comment lines (leading '#') and blank lines are skipped. Raises when the
    file yields zero valid instances.
    """
    instances: list[GameInstance] = []
    errors: list[ParseError] = []
    seen_ids: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            try:
                obj = json.loads(stripped)
                inst = _parse_instance(obj)
                if inst.instance_id in seen_ids:
                    raise ValueError(f"duplicate instance id {inst.instance_id!r}")
                seen_ids.add(inst.instance_id)
                instances.append(inst)
            except (json.JSONDecodeError, ValueError, TypeError) as exc:
                errors.append(ParseError(line_no, str(exc)))
    if not instances:
        raise ValueError(f"no instances in {path}")
    return ParseResult(instances, errors)


def _candidate_to_obj(c: CandidateRecord) -> dict:
    obj: dict = {"id": c.candidate_id}
    if c.text is not None:
        obj["text"] = c.text
    obj["g_correct"] = c.g_correct
    obj["g_incorrect"] = c.g_incorrect
    obj["v_correct"] = c.v_correct
    obj["v_incorrect"] = c.v_incorrect
    if c.da is not None:
        obj["da"] = c.da
    obj.update(c.extra)
    return obj


def instance_to_json(inst: GameInstance) -> str:
    obj: dict = {"id": inst.instance_id, "candidates": [_candidate_to_obj(c) for c in inst.candidates]}
    if inst.gold_candidate_id is not None:
        obj["gold_candidate_id"] = inst.gold_candidate_id
    obj.update(inst.extra)
    return json.dumps(obj, separators=(",", ":"))


def emit_instances(instances: Sequence[GameInstance], path: str | Path) -> None:
    """Write instances as versioned line-delimited JSON."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(HEADER_LINE + "\n")
        for inst in instances:
            fh.write(instance_to_json(inst) + "\n")


def generate_synthetic(spec: SyntheticSpec) -> list[GameInstance]:
    """Seeded synthetic instances with controllable hardness.

    Generator branches are log-Dirichlet(alpha) draws. The verifier signal
    interpolates between the standardized generator score (noise = 0) and
    pure Gaussian noise (noise = 1); verdict branches are antisymmetric.
    Planting a gold candidate lifts its g_correct 2 nats above the instance
    max before the verifier signal forms, so every ranker finds it when the
    verifier is noise-free.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    ones = np.ones(spec.n)
    instances = []
    for i in range(spec.num_instances):
        g_correct = np.log(np.clip(rng.dirichlet(spec.alpha * ones), 1e-300, None))
        g_incorrect = np.log(np.clip(rng.dirichlet(spec.alpha * ones), 1e-300, None))
        gold_idx: Optional[int] = None
        if spec.planted_gold:
            gold_idx = int(rng.integers(spec.n))
            g_correct[gold_idx] = g_correct.max() + 2.0

        std = g_correct.std()
        z = (g_correct - g_correct.mean()) / std if std > 0 else np.zeros(spec.n)
        eps = rng.standard_normal(spec.n)
        v_signal = (1.0 - spec.noise) * z + spec.noise * eps
        da = rng.beta(2.0, 2.0, spec.n)

        candidates = tuple(
            CandidateRecord(
                candidate_id=f"c{j}",
                g_correct=float(g_correct[j]),
                g_incorrect=float(g_incorrect[j]),
                v_correct=float(v_signal[j]),
                v_incorrect=float(-v_signal[j]),
                da=float(da[j]),
            )
            for j in range(spec.n)
        )
        instances.append(
            GameInstance(
                instance_id=f"synth-{i:05d}",
                candidates=candidates,
                gold_candidate_id=f"c{gold_idx}" if gold_idx is not None else None,
            )
        )
    return instances


def _fmt(x: float) -> str:
    """Shortest exact decimal form; byte-stable and round-trippable."""
    return repr(float(x))


def emit_traces(results: Sequence, path: str | Path, schedule: str) -> None:
    """Per-iteration CSV: instance_id, t, gap, entropy, schedule."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("instance_id,t,gap,entropy,schedule\n")
        for res in results:
            for t, (gap, ent) in enumerate(zip(res.gap_trace, res.entropy_trace), start=1):
                fh.write(f"{res.instance_id},{t},{_fmt(gap)},{_fmt(ent)},{schedule}\n")


def emit_summary(outcomes: Sequence, path: str | Path) -> None:
    """Per-instance summary CSV; one row per outcome, in the given order.

    Expects runner outcomes: result + calibration + baseline top-1 ids.
    Failed instances appear with converged=error and empty metric fields.
    """
    cols = "instance_id,converged,iterations,regret_g,regret_v,top1_before,top1_after,reliable,specious_count"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(cols + "\n")
        for out in outcomes:
            if out.error is not None:
                fh.write(f"{out.instance.instance_id},error,,,,,,,\n")
                continue
            res, cal = out.result, out.calibration
            specious = sum(1 for lab in cal.labels if lab == "Specious")
            fh.write(
                f"{res.instance_id},{str(res.converged).lower()},{res.iterations_used},"
                f"{_fmt(res.regret_g)},{_fmt(res.regret_v)},"
                f"{out.top1_before},{out.top1_after},"
                f"{str(cal.reliable).lower()},{specious}\n"
            )
