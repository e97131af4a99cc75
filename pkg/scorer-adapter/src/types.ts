/**
 * Domain types for endpoint-backed candidate scoring.
 *
 * One ScoringJob turns a prompt plus its candidate answers into a single
 * instance-file line. Each candidate needs four log-probabilities, one per
 * prompting condition:
 *
 *   g_correct / g_incorrect  - sequence conditions: the candidate is scored
 *     as the continuation of a prompt that asks for a correct (resp.
 *     incorrect) answer. Reported as the per-token mean log-probability, so
 *     long candidates are not penalized for length.
 *   v_correct / v_incorrect  - verdict conditions: the prompt shows the
 *     candidate and ends right where a one-word verdict goes; the score is
 *     the next-token log-probability of each correctness token. Verdicts are
 *     single tokens by default and are NOT length-normalized.
 */

/** Per-attempt HTTP behavior for every endpoint call. */
export interface RetryPolicy {
  /** Total attempts per request, including the first (default 3). */
  maxAttempts: number;
  /** First backoff delay; doubles per retry, capped at 30s (default 250). */
  baseDelayMs: number;
  /** Per-attempt abort timeout in milliseconds (default 30000). */
  timeoutMs: number;
}

/** The two verdict words whose log-probabilities become v_correct / v_incorrect. */
export interface CorrectnessTokens {
  correct: string;
  incorrect: string;
}

/**
 * Prompt templates for the four conditions. Slots: {prompt}, {candidate},
 * {correctness}, each appearing exactly once per template.
 *
 * In the sequence templates (gCorrect, gIncorrect) the {correctness} slot is
 * filled with the matching correctness token and {candidate} must be the
 * final slot: everything before it is the context, the candidate is the
 * scored continuation.
 *
 * In the verdict templates (vCorrect, vIncorrect) the {candidate} slot is
 * filled and {correctness} must be terminal: it is not substituted, it marks
 * the position whose next-token distribution is read. When both verdict
 * templates render to the same prompt (the default), one request serves both.
 */
export interface ConditionTemplates {
  gCorrect: string;
  gIncorrect: string;
  vCorrect: string;
  vIncorrect: string;
}

/** A prompt, its candidate answers, and how to score them. */
export interface ScoringJob {
  /** Instance id for the emitted line; must be unique within an output file. */
  id: string;
  /** The question or task statement fed to the {prompt} slot. */
  prompt: string;
  /** Candidate answer texts; scored as-is, ids assigned positionally (c0, c1, ...). */
  candidates: string[];
  /** Base URL of the inference endpoint, e.g. http://localhost:8080. */
  endpoint: string;
  /** Model identifier passed through to the endpoint. */
  model: string;
  /** Templates for the four conditions (defaults provided). */
  templates?: ConditionTemplates;
  /** Verdict words (defaults " correct" / " incorrect", single tokens for common vocabularies). */
  correctnessTokens?: CorrectnessTokens;
  /** Cap on concurrent in-flight requests for this job (default 4). */
  batchSize?: number;
  /** Retry policy for every request (defaults above). */
  retry?: Partial<RetryPolicy>;
  /** How many top next-token log-probabilities to request in verdict calls (default 20). */
  topLogprobs?: number;
  /** Index into candidates[] of the known-good answer, if any; becomes gold_candidate_id. */
  goldIndex?: number;
}

/** One scored candidate, field names matching the instance file format. */
export interface CandidateScores {
  id: string;
  text: string;
  g_correct: number;
  g_incorrect: number;
  v_correct: number;
  v_incorrect: number;
  /** Disambiguity in [0, 1]; absent when no embedding encoder is available. */
  da?: number;
}

/** One instance-file line: what parse_instances on the consumer side expects. */
export interface InstanceRecord {
  id: string;
  candidates: CandidateScores[];
  gold_candidate_id?: string;
}

export const DEFAULT_RETRY: RetryPolicy = {
  maxAttempts: 3,
  baseDelayMs: 250,
  timeoutMs: 30_000,
};

export const DEFAULT_BATCH_SIZE = 4;
export const DEFAULT_TOP_LOGPROBS = 20;

/** Leading-space verdict words: single tokens under byte-pair vocabularies. */
export const DEFAULT_CORRECTNESS_TOKENS: CorrectnessTokens = {
  correct: " correct",
  incorrect: " incorrect",
};

export const DEFAULT_TEMPLATES: ConditionTemplates = {
  gCorrect:
    "Answer the question. Your answer must be{correctness}.\n\nQuestion: {prompt}\nAnswer: {candidate}",
  gIncorrect:
    "Answer the question. Your answer must be{correctness}.\n\nQuestion: {prompt}\nAnswer: {candidate}",
  vCorrect:
    "Question: {prompt}\nProposed answer: {candidate}\nIs the proposed answer correct or incorrect? The proposed answer is{correctness}",
  vIncorrect:
    "Question: {prompt}\nProposed answer: {candidate}\nIs the proposed answer correct or incorrect? The proposed answer is{correctness}",
};
