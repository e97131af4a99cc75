/**
 * Instance-file output: line-delimited JSON under a version header, the
 * exact format the decoding-game CLI parses. Records are checked before
 * serialization so an emitted file always passes the consumer's validation.
 */
import { writeFileSync } from "node:fs";

import { CandidateScores, InstanceRecord } from "./types.js";

export const HEADER_LINE = "# decoding-game instances v1";

const SCORE_FIELDS = ["g_correct", "g_incorrect", "v_correct", "v_incorrect"] as const;

function validateRecord(record: InstanceRecord): void {
  if (!record.id) throw new Error("instance record needs a non-empty id");
  if (record.candidates.length < 2) {
    throw new Error(`instance ${record.id}: needs at least 2 candidates, has ${record.candidates.length}`);
  }
  const seen = new Set<string>();
  for (const candidate of record.candidates) {
    if (!candidate.id) throw new Error(`instance ${record.id}: candidate with empty id`);
    if (seen.has(candidate.id)) {
      throw new Error(`instance ${record.id}: duplicate candidate id ${candidate.id}`);
    }
    seen.add(candidate.id);
    for (const field of SCORE_FIELDS) {
      if (!Number.isFinite(candidate[field])) {
        throw new Error(`instance ${record.id}: candidate ${candidate.id}: ${field} is not finite`);
      }
    }
    if (candidate.da !== undefined && !(candidate.da >= 0 && candidate.da <= 1)) {
      throw new Error(`instance ${record.id}: candidate ${candidate.id}: da ${candidate.da} outside [0, 1]`);
    }
  }
  if (record.gold_candidate_id !== undefined && !seen.has(record.gold_candidate_id)) {
    throw new Error(`instance ${record.id}: gold_candidate_id ${record.gold_candidate_id} names no candidate`);
  }
}

/** Serialize one validated record as one instance-file line. */
export function instanceToLine(record: InstanceRecord): string {
  validateRecord(record);
  const candidates = record.candidates.map((candidate: CandidateScores) => ({
    id: candidate.id,
    text: candidate.text,
    g_correct: candidate.g_correct,
    g_incorrect: candidate.g_incorrect,
    v_correct: candidate.v_correct,
    v_incorrect: candidate.v_incorrect,
    ...(candidate.da === undefined ? {} : { da: candidate.da }),
  }));
  return JSON.stringify({
    id: record.id,
    candidates,
    ...(record.gold_candidate_id === undefined ? {} : { gold_candidate_id: record.gold_candidate_id }),
  });
}

/** Write a complete instance file: header line, then one line per record. */
export function writeInstanceFile(records: InstanceRecord[], path: string): void {
  const ids = new Set<string>();
  for (const record of records) {
    if (ids.has(record.id)) throw new Error(`duplicate instance id ${record.id}`);
    ids.add(record.id);
  }
  const lines = records.map(instanceToLine);
  writeFileSync(path, [HEADER_LINE, ...lines].join("\n") + "\n", "utf8");
}
