/**
 * Template validation and rendering for the four prompting conditions.
 *
 * Every template must contain each slot exactly once. Sequence templates end
 * with {candidate} so the candidate is the scored continuation; verdict
 * templates end with {correctness} so the verdict word is the next token.
 */
import { ConditionTemplates } from "./types.js";

export const PROMPT_SLOT = "{prompt}";
export const CANDIDATE_SLOT = "{candidate}";
export const CORRECTNESS_SLOT = "{correctness}";

/** Context/continuation split of a rendered sequence condition. */
export interface SequencePrompt {
  /** Everything before the candidate. */
  prefix: string;
  /** The candidate text, scored as the continuation of prefix. */
  continuation: string;
}

function countSlot(template: string, slot: string): number {
  let count = 0;
  for (let at = template.indexOf(slot); at !== -1; at = template.indexOf(slot, at + slot.length)) {
    count += 1;
  }
  return count;
}

function requireOne(name: string, template: string, slot: string): void {
  const count = countSlot(template, slot);
  if (count !== 1) {
    throw new Error(`template ${name}: expected exactly one ${slot} slot, found ${count}`);
  }
}

/**
 * Check the slot invariants for all four condition templates.
 * Throws with the offending template's name on the first violation.
 */
export function validateTemplates(templates: ConditionTemplates): void {
  for (const name of ["gCorrect", "gIncorrect", "vCorrect", "vIncorrect"] as const) {
    const template = templates[name];
    requireOne(name, template, PROMPT_SLOT);
    requireOne(name, template, CANDIDATE_SLOT);
    requireOne(name, template, CORRECTNESS_SLOT);
  }
  for (const name of ["gCorrect", "gIncorrect"] as const) {
    if (!templates[name].endsWith(CANDIDATE_SLOT)) {
      throw new Error(`template ${name}: {candidate} must be the final slot (the candidate is the scored continuation)`);
    }
  }
  for (const name of ["vCorrect", "vIncorrect"] as const) {
    if (!templates[name].endsWith(CORRECTNESS_SLOT)) {
      throw new Error(`template ${name}: {correctness} must be the final slot (the verdict is read from the next-token distribution)`);
    }
  }
}

/** Fill each slot at its position in the raw template, one occurrence each;
 * substituted values are never re-scanned, so slot-like text inside a prompt
 * or candidate stays literal. */
function fillSlots(template: string, replacements: Array<[slot: string, value: string]>): string {
  const hits = replacements
    .map(([slot, value]) => ({ at: template.indexOf(slot), slot, value }))
    .filter((hit) => hit.at !== -1)
    .sort((a, b) => a.at - b.at);
  let out = "";
  let from = 0;
  for (const hit of hits) {
    out += template.slice(from, hit.at) + hit.value;
    from = hit.at + hit.slot.length;
  }
  return out + template.slice(from);
}

/**
 * Render a sequence condition: fill {prompt} and {correctness}, split at the
 * terminal {candidate} slot into context prefix and scored continuation.
 */
export function renderSequencePrompt(
  template: string,
  prompt: string,
  correctnessToken: string,
  candidate: string,
): SequencePrompt {
  if (!template.endsWith(CANDIDATE_SLOT)) {
    throw new Error("sequence template must end with {candidate}");
  }
  const head = template.slice(0, -CANDIDATE_SLOT.length);
  const prefix = fillSlots(head, [
    [PROMPT_SLOT, prompt],
    [CORRECTNESS_SLOT, correctnessToken],
  ]);
  return { prefix, continuation: candidate };
}

/**
 * Render a verdict condition: fill {prompt} and {candidate}, drop the
 * terminal {correctness} slot. The returned string ends exactly where the
 * verdict token goes.
 */
export function renderVerdictPrompt(template: string, prompt: string, candidate: string): string {
  if (!template.endsWith(CORRECTNESS_SLOT)) {
    throw new Error("verdict template must end with {correctness}");
  }
  const head = template.slice(0, -CORRECTNESS_SLOT.length);
  return fillSlots(head, [
    [PROMPT_SLOT, prompt],
    [CANDIDATE_SLOT, candidate],
  ]);
}
