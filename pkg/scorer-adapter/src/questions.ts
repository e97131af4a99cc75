/**
 * Question-file input: line-delimited JSON, '#' comments and blank lines
 * skipped, one object per question:
 *
 *   { "id": "q1", "prompt": "...",
 *     "choices": ["text", {"id": "B", "text": "..."}, ...],
 *     "gold": 0 }
 *
 * Choices may be bare strings or {id, text} objects; gold is a choice index
 * or a choice id. Candidate ids in the output are positional (c0, c1, ...)
 * regardless of any choice ids here; choice ids only resolve gold.
 */
import { readFileSync } from "node:fs";

import { ConditionTemplates, CorrectnessTokens } from "./types.js";

export interface Question {
  id: string;
  prompt: string;
  candidates: string[];
  goldIndex?: number;
}

export interface TemplateFile {
  templates: ConditionTemplates;
  correctnessTokens?: CorrectnessTokens;
}

function fail(lineNo: number, message: string): never {
  throw new Error(`questions line ${lineNo}: ${message}`);
}

function parseQuestionLine(obj: unknown, lineNo: number): Question {
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    fail(lineNo, "expected an object");
  }
  const raw = obj as Record<string, unknown>;
  if (typeof raw.id !== "string" || raw.id.length === 0) fail(lineNo, "missing string 'id'");
  if (typeof raw.prompt !== "string" || raw.prompt.length === 0) fail(lineNo, "missing string 'prompt'");
  if (!Array.isArray(raw.choices) || raw.choices.length < 2) {
    fail(lineNo, "'choices' must list at least 2 entries");
  }
  const ids: Array<string | undefined> = [];
  const candidates = raw.choices.map((choice, index) => {
    if (typeof choice === "string" && choice.length > 0) {
      ids.push(undefined);
      return choice;
    }
    const entry = choice as Record<string, unknown>;
    if (typeof entry?.text !== "string" || entry.text.length === 0) {
      fail(lineNo, `choice ${index} needs non-empty 'text'`);
    }
    ids.push(typeof entry.id === "string" ? entry.id : undefined);
    return entry.text;
  });

  let goldIndex: number | undefined;
  if (raw.gold !== undefined) {
    if (typeof raw.gold === "number") {
      goldIndex = raw.gold;
    } else if (typeof raw.gold === "string") {
      goldIndex = ids.indexOf(raw.gold);
      if (goldIndex === -1) fail(lineNo, `gold ${JSON.stringify(raw.gold)} names no choice id`);
    } else {
      fail(lineNo, "'gold' must be a choice index or choice id");
    }
    if (!Number.isInteger(goldIndex) || goldIndex < 0 || goldIndex >= candidates.length) {
      fail(lineNo, `gold index ${goldIndex} out of range`);
    }
  }
  return { id: raw.id, prompt: raw.prompt, candidates, goldIndex };
}

export function parseQuestionFile(path: string): Question[] {
  const questions: Question[] = [];
  const seen = new Set<string>();
  readFileSync(path, "utf8")
    .split("\n")
    .forEach((line, at) => {
      const stripped = line.trim();
      if (stripped.length === 0 || stripped.startsWith("#")) return;
      let obj: unknown;
      try {
        obj = JSON.parse(stripped);
      } catch (err) {
        fail(at + 1, `invalid JSON (${err instanceof Error ? err.message : String(err)})`);
      }
      const question = parseQuestionLine(obj, at + 1);
      if (seen.has(question.id)) fail(at + 1, `duplicate question id ${question.id}`);
      seen.add(question.id);
      questions.push(question);
    });
  if (questions.length === 0) throw new Error(`no questions found in ${path}`);
  return questions;
}

/** Template override file: the four condition templates at the top level or
 * under "templates", plus optional correctnessTokens. */
export function loadTemplateFile(path: string): TemplateFile {
  const raw = JSON.parse(readFileSync(path, "utf8")) as Record<string, unknown>;
  const templates = (raw.templates ?? raw) as Record<string, unknown>;
  for (const name of ["gCorrect", "gIncorrect", "vCorrect", "vIncorrect"]) {
    if (typeof templates[name] !== "string") {
      throw new Error(`template file ${path}: missing string '${name}'`);
    }
  }
  return {
    templates: templates as unknown as ConditionTemplates,
    correctnessTokens: raw.correctnessTokens as CorrectnessTokens | undefined,
  };
}
