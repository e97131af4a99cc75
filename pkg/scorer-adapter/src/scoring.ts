/**
 * Job orchestration: turn one ScoringJob into one instance record.
 *
 * Each distinct candidate text is scored exactly once (identical texts share
 * their quadruple: scoring is deterministic at temperature 0, and deduping
 * makes that structural). Unique texts are scored by a bounded worker pool,
 * results assembled in candidate order, and the file writing left to the
 * caller so output stays single-threaded.
 */
import { CompletionClient, EmbeddingClient } from "./client.js";
import { cosineSimilarity, daFromCosine } from "./da.js";
import { renderSequencePrompt, renderVerdictPrompt, validateTemplates } from "./templates.js";
import {
  CandidateScores,
  DEFAULT_BATCH_SIZE,
  DEFAULT_CORRECTNESS_TOKENS,
  DEFAULT_TEMPLATES,
  DEFAULT_TOP_LOGPROBS,
  InstanceRecord,
  ScoringJob,
} from "./types.js";

/** Endpoint failure after retries; carries the candidates that did finish. */
export class ScoringJobError extends Error {
  constructor(
    message: string,
    /** Fully scored candidates, in candidate order, possibly empty. */
    readonly partial: CandidateScores[],
    readonly jobId: string,
    override readonly cause?: unknown,
  ) {
    super(message);
    this.name = "ScoringJobError";
  }
}

export interface ScoreOptions {
  /** When given, per-candidate da is computed from embedding coherence. */
  embedder?: EmbeddingClient;
  /** Receives non-fatal notices (e.g. da omitted because embeddings failed). */
  onWarning?: (message: string) => void;
}

interface Quadruple {
  g_correct: number;
  g_incorrect: number;
  v_correct: number;
  v_incorrect: number;
}

type Settled<R> = { ok: true; value: R } | { ok: false; error: unknown } | undefined;

/** Run fn over items with at most `limit` in flight; stop starting new items
 * after the first failure. Slots never started stay undefined. */
async function mapLimited<T, R>(
  items: T[],
  limit: number,
  fn: (item: T) => Promise<R>,
): Promise<Array<Settled<R>>> {
  const results: Array<Settled<R>> = new Array(items.length).fill(undefined);
  let next = 0;
  let failed = false;
  async function worker(): Promise<void> {
    while (!failed) {
      const index = next++;
      if (index >= items.length) return;
      try {
        results[index] = { ok: true, value: await fn(items[index] as T) };
      } catch (error) {
        results[index] = { ok: false, error };
        failed = true;
      }
    }
  }
  await Promise.all(Array.from({ length: Math.max(1, Math.min(limit, items.length)) }, worker));
  return results;
}

function validateJob(job: ScoringJob): void {
  if (!job.id) throw new Error("job needs a non-empty id");
  if (job.candidates.length === 0) {
    throw new Error(`job ${job.id}: empty candidate list`);
  }
  if (job.candidates.length < 2) {
    throw new Error(`job ${job.id}: a rankable instance needs at least 2 candidates`);
  }
  job.candidates.forEach((text, index) => {
    if (typeof text !== "string" || text.length === 0) {
      throw new Error(`job ${job.id}: candidate ${index} is empty`);
    }
  });
  if (job.goldIndex !== undefined && (job.goldIndex < 0 || job.goldIndex >= job.candidates.length)) {
    throw new Error(`job ${job.id}: goldIndex ${job.goldIndex} out of range`);
  }
  validateTemplates(job.templates ?? DEFAULT_TEMPLATES);
}

/**
 * Score every candidate of a job and assemble the instance record.
 *
 * Validation happens before any network call: an invalid job (empty candidate
 * list, bad templates, out-of-range gold index) never reaches the endpoint.
 * On endpoint failure after retries the job fails as a whole, but every
 * candidate that finished is preserved on the thrown ScoringJobError.
 */
export async function scoreCandidates(job: ScoringJob, options: ScoreOptions = {}): Promise<InstanceRecord> {
  validateJob(job);
  const templates = job.templates ?? DEFAULT_TEMPLATES;
  const tokens = job.correctnessTokens ?? DEFAULT_CORRECTNESS_TOKENS;
  const topLogprobs = job.topLogprobs ?? DEFAULT_TOP_LOGPROBS;
  const batchSize = job.batchSize ?? DEFAULT_BATCH_SIZE;
  const client = new CompletionClient(job.endpoint, job.model, job.retry);

  // one scoring pipeline per distinct text; duplicates share the result
  const uniqueTexts = [...new Set(job.candidates)];

  async function scoreOne(text: string): Promise<Quadruple> {
    const correct = renderSequencePrompt(templates.gCorrect, job.prompt, tokens.correct, text);
    const incorrect = renderSequencePrompt(templates.gIncorrect, job.prompt, tokens.incorrect, text);
    const g_correct = await client.meanContinuationLogprob(correct.prefix, correct.continuation);
    const g_incorrect = await client.meanContinuationLogprob(incorrect.prefix, incorrect.continuation);

    const vPromptCorrect = renderVerdictPrompt(templates.vCorrect, job.prompt, text);
    const vPromptIncorrect = renderVerdictPrompt(templates.vIncorrect, job.prompt, text);
    let v_correct: number;
    let v_incorrect: number;
    if (vPromptCorrect === vPromptIncorrect) {
      // both verdict words read off the same next-token distribution
      [v_correct, v_incorrect] = (await client.verdictLogprobs(
        vPromptCorrect,
        [tokens.correct, tokens.incorrect],
        topLogprobs,
      )) as [number, number];
    } else {
      [v_correct] = (await client.verdictLogprobs(vPromptCorrect, [tokens.correct], topLogprobs)) as [number];
      [v_incorrect] = (await client.verdictLogprobs(vPromptIncorrect, [tokens.incorrect], topLogprobs)) as [number];
    }
    return { g_correct, g_incorrect, v_correct, v_incorrect };
  }

  const settled = await mapLimited(uniqueTexts, batchSize, scoreOne);
  const byText = new Map<string, Quadruple>();
  let firstError: unknown;
  settled.forEach((outcome, index) => {
    if (outcome?.ok) byText.set(uniqueTexts[index] as string, outcome.value);
    else if (outcome && firstError === undefined) firstError = outcome.error;
  });

  if (firstError !== undefined) {
    const partial = job.candidates.flatMap((text, index) => {
      const quadruple = byText.get(text);
      return quadruple ? [{ id: `c${index}`, text, ...quadruple }] : [];
    });
    const reason = firstError instanceof Error ? firstError.message : String(firstError);
    throw new ScoringJobError(
      `job ${job.id}: scoring failed (${reason}); ${partial.length}/${job.candidates.length} candidates preserved`,
      partial,
      job.id,
      firstError,
    );
  }

  // best-effort disambiguity: one embeddings call for prompt + unique texts;
  // on failure da is omitted everywhere and the consumer's fallback applies
  let daByText: Map<string, number> | undefined;
  if (options.embedder) {
    try {
      const vectors = await options.embedder.embed([job.prompt, ...uniqueTexts]);
      const promptVec = vectors[0] as number[];
      daByText = new Map(
        uniqueTexts.map((text, index) => [
          text,
          daFromCosine(cosineSimilarity(promptVec, vectors[index + 1] as number[])),
        ]),
      );
    } catch (error) {
      const reason = error instanceof Error ? error.message : String(error);
      options.onWarning?.(`job ${job.id}: embeddings unavailable, da omitted (${reason})`);
    }
  }

  const candidates: CandidateScores[] = job.candidates.map((text, index) => {
    const quadruple = byText.get(text) as Quadruple;
    const da = daByText?.get(text);
    return { id: `c${index}`, text, ...quadruple, ...(da === undefined ? {} : { da }) };
  });

  const record: InstanceRecord = { id: job.id, candidates };
  if (job.goldIndex !== undefined) {
    record.gold_candidate_id = `c${job.goldIndex}`;
  }
  return record;
}
