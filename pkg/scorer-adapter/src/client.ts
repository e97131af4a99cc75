/**
 * HTTP access to the inference endpoint.
 *
 * Wire protocol (completions-style, one route serves both scoring modes):
 *
 *   POST {endpoint}/v1/completions
 *     sequence mode: { model, prompt, max_tokens: 0, echo: true, logprobs: 0 }
 *       -> { choices: [{ logprobs: { tokens, token_logprobs, text_offset } }] }
 *     verdict mode:  { model, prompt, max_tokens: 1, logprobs: K, temperature: 0 }
 *       -> { choices: [{ logprobs: { top_logprobs: [{ token: logprob, ... }] } }] }
 *
 *   POST {endpoint}/v1/embeddings
 *     { model, input: [text, ...] } -> { data: [{ embedding: [...] }, ...] }
 */
import { DEFAULT_RETRY, RetryPolicy } from "./types.js";

const MAX_BACKOFF_MS = 30_000;

/** Raised when a request still fails after the retry budget is spent. */
export class EndpointError extends Error {
  constructor(
    message: string,
    readonly url: string,
    readonly attempts: number,
    readonly status?: number,
  ) {
    super(message);
    this.name = "EndpointError";
  }
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

function retryDelayMs(response: Response | undefined, attempt: number, policy: RetryPolicy): number {
  // honor Retry-After when throttled; otherwise deterministic exponential
  // backoff (no jitter) so callers can rely on minimum delays
  const retryAfter = response?.headers.get("Retry-After");
  if (retryAfter) {
    const seconds = Number.parseInt(retryAfter, 10);
    if (Number.isFinite(seconds) && seconds > 0) return seconds * 1000;
  }
  return Math.min(policy.baseDelayMs * 2 ** (attempt - 1), MAX_BACKOFF_MS);
}

/**
 * POST a JSON body and return the parsed JSON response.
 *
 * Retries on 429, 5xx, timeouts, and network errors; any other non-2xx status
 * fails immediately. Throws EndpointError once attempts are exhausted.
 */
export async function postJson<T>(url: string, body: unknown, retry?: Partial<RetryPolicy>): Promise<T> {
  const policy: RetryPolicy = { ...DEFAULT_RETRY, ...retry };
  let lastMessage = "no attempts made";
  let lastStatus: number | undefined;

  for (let attempt = 1; attempt <= policy.maxAttempts; attempt++) {
    const controller = new AbortController();
    const timeoutId = setTimeout(() => controller.abort(), policy.timeoutMs);
    let response: Response | undefined;
    try {
      response = await fetch(url, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
        signal: controller.signal,
      });
      if (response.ok) {
        return (await response.json()) as T;
      }
      lastStatus = response.status;
      const text = await response.text().catch(() => "");
      lastMessage = `HTTP ${response.status}${text ? `: ${text.slice(0, 200)}` : ""}`;
      const transient = response.status === 429 || response.status >= 500;
      if (!transient) {
        throw new EndpointError(lastMessage, url, attempt, response.status);
      }
    } catch (err) {
      if (err instanceof EndpointError) throw err;
      lastMessage =
        err instanceof Error && err.name === "AbortError"
          ? `request timed out after ${policy.timeoutMs}ms`
          : err instanceof Error
            ? err.message
            : String(err);
      lastStatus = undefined;
    } finally {
      clearTimeout(timeoutId);
    }
    if (attempt < policy.maxAttempts) {
      await sleep(retryDelayMs(response, attempt, policy));
    }
  }
  throw new EndpointError(
    `${lastMessage} (after ${policy.maxAttempts} attempts)`,
    url,
    policy.maxAttempts,
    lastStatus,
  );
}

interface EchoLogprobs {
  tokens: string[];
  token_logprobs: Array<number | null>;
  text_offset: number[];
}

interface CompletionResponse {
  choices: Array<{ logprobs?: { tokens?: string[]; token_logprobs?: Array<number | null>; text_offset?: number[]; top_logprobs?: Array<Record<string, number>> } }>;
}

interface EmbeddingResponse {
  data: Array<{ embedding: number[] }>;
}

function firstChoiceLogprobs(response: CompletionResponse, url: string): NonNullable<CompletionResponse["choices"][number]["logprobs"]> {
  const logprobs = response.choices?.[0]?.logprobs;
  if (!logprobs) {
    throw new EndpointError("endpoint response missing choices[0].logprobs", url, 1);
  }
  return logprobs;
}

/** Typed access to the completions route of one endpoint + model pair. */
export class CompletionClient {
  private readonly url: string;

  constructor(
    endpoint: string,
    private readonly model: string,
    private readonly retry?: Partial<RetryPolicy>,
  ) {
    this.url = `${endpoint.replace(/\/$/, "")}/v1/completions`;
  }

  /**
   * Per-token mean log-probability of `continuation` given `prefix`, via an
   * echoed scoring call. A token counts toward the continuation when it
   * contributes at least one character past the prefix boundary, so a token
   * straddling the boundary is included.
   */
  async meanContinuationLogprob(prefix: string, continuation: string): Promise<number> {
    if (prefix.length === 0) throw new Error("sequence scoring needs a non-empty prefix");
    if (continuation.length === 0) throw new Error("sequence scoring needs a non-empty continuation");
    const response = await postJson<CompletionResponse>(
      this.url,
      { model: this.model, prompt: prefix + continuation, max_tokens: 0, echo: true, logprobs: 0 },
      this.retry,
    );
    const raw = firstChoiceLogprobs(response, this.url);
    if (!Array.isArray(raw.tokens) || !Array.isArray(raw.token_logprobs) || !Array.isArray(raw.text_offset)) {
      throw new EndpointError("echo response missing tokens/token_logprobs/text_offset", this.url, 1);
    }
    const echoed: EchoLogprobs = {
      tokens: raw.tokens,
      token_logprobs: raw.token_logprobs,
      text_offset: raw.text_offset,
    };
    let sum = 0;
    let count = 0;
    for (let i = 0; i < echoed.tokens.length; i++) {
      const token = echoed.tokens[i] ?? "";
      const offset = echoed.text_offset[i] ?? 0;
      if (offset + token.length <= prefix.length) continue;
      const logprob = echoed.token_logprobs[i];
      if (logprob === null || logprob === undefined || !Number.isFinite(logprob)) {
        throw new EndpointError(`non-finite logprob for continuation token ${JSON.stringify(token)}`, this.url, 1);
      }
      sum += logprob;
      count += 1;
    }
    if (count === 0) {
      throw new EndpointError("no tokens found past the prefix boundary", this.url, 1);
    }
    return sum / count;
  }

  /**
   * Next-token log-probabilities for specific tokens after `prompt`, from a
   * single greedy step's top-K list. Raw values, no length normalization.
   */
  async verdictLogprobs(prompt: string, tokens: string[], topLogprobs: number): Promise<number[]> {
    const response = await postJson<CompletionResponse>(
      this.url,
      { model: this.model, prompt, max_tokens: 1, logprobs: topLogprobs, temperature: 0 },
      this.retry,
    );
    const raw = firstChoiceLogprobs(response, this.url);
    const top = raw.top_logprobs?.[0];
    if (!top) {
      throw new EndpointError("verdict response missing top_logprobs[0]", this.url, 1);
    }
    return tokens.map((token) => {
      const logprob = top[token];
      if (logprob === undefined || !Number.isFinite(logprob)) {
        throw new EndpointError(
          `verdict token ${JSON.stringify(token)} not in top-${topLogprobs} logprobs; raise topLogprobs or pick single-token verdict words`,
          this.url,
          1,
        );
      }
      return logprob;
    });
  }
}

/** Typed access to an embeddings route; absence of one just disables da. */
export class EmbeddingClient {
  private readonly url: string;

  constructor(
    endpoint: string,
    private readonly model: string,
    private readonly retry?: Partial<RetryPolicy>,
  ) {
    this.url = `${endpoint.replace(/\/$/, "")}/v1/embeddings`;
  }

  async embed(texts: string[]): Promise<number[][]> {
    const response = await postJson<EmbeddingResponse>(
      this.url,
      { model: this.model, input: texts },
      this.retry,
    );
    if (!Array.isArray(response.data) || response.data.length !== texts.length) {
      throw new EndpointError(`embeddings response has ${response.data?.length ?? 0} rows for ${texts.length} inputs`, this.url, 1);
    }
    return response.data.map((row) => row.embedding);
  }
}
