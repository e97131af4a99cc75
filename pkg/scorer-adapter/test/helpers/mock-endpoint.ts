/**
 * A deterministic stand-in for a completions + embeddings endpoint, used by
 * every test that exercises network paths. Token logprobs, verdict
 * distributions, and embeddings are pure functions of the request, so
 * repeated runs (and repeated candidates) see identical numbers.
 */
import { IncomingMessage, Server, ServerResponse, createServer } from "node:http";
import { AddressInfo } from "node:net";

export interface MockModel {
  /** Logprob of one echoed token at a char offset of the full prompt. */
  tokenLogprob(token: string, offset: number, prompt: string): number;
  /** Top next-token logprobs after a verdict prompt. */
  topLogprobs(prompt: string): Record<string, number>;
  /** Embedding for one input text; omit to disable the embeddings route. */
  embed?(text: string): number[];
}

interface InjectedFailure {
  status: number;
  retryAfter?: string;
}

export interface MockEndpoint {
  url: string;
  server: Server;
  /** Every request body seen, in arrival order. */
  requests: Array<{ path: string; body: Record<string, unknown> }>;
  /** Make the next `times` requests fail with `status` before any handling. */
  failNext(times: number, status?: number, retryAfter?: string): void;
  /** Make specific 1-based request ordinals fail. */
  failRequests(ordinals: number[], status?: number, retryAfter?: string): void;
  close(): Promise<void>;
}

/** Tokens are maximal whitespace-prefixed words, offsets absolute. */
export function tokenize(text: string): Array<{ token: string; offset: number }> {
  const out: Array<{ token: string; offset: number }> = [];
  const re = /\s*\S+/g;
  for (let m = re.exec(text); m !== null; m = re.exec(text)) {
    out.push({ token: m[0], offset: m.index });
  }
  return out;
}

function readBody(req: IncomingMessage): Promise<string> {
  return new Promise((resolve, reject) => {
    const chunks: Buffer[] = [];
    req.on("data", (chunk) => chunks.push(chunk));
    req.on("end", () => resolve(Buffer.concat(chunks).toString("utf8")));
    req.on("error", reject);
  });
}

function sendJson(res: ServerResponse, status: number, payload: unknown): void {
  res.writeHead(status, { "Content-Type": "application/json" });
  res.end(JSON.stringify(payload));
}

export async function startMockEndpoint(model: MockModel): Promise<MockEndpoint> {
  const requests: MockEndpoint["requests"] = [];
  const failures = new Map<number, InjectedFailure>();

  const server = createServer(async (req, res) => {
    try {
      await handle(req, res);
    } catch (err) {
      // A model bug must surface as a fast, non-retryable error, not a hang.
      sendJson(res, 400, { error: `mock model error: ${err instanceof Error ? err.message : String(err)}` });
    }
  });

  async function handle(req: IncomingMessage, res: ServerResponse): Promise<void> {
    const body = JSON.parse((await readBody(req)) || "{}") as Record<string, unknown>;
    requests.push({ path: req.url ?? "", body });

    const failure = failures.get(requests.length);
    if (failure) {
      failures.delete(requests.length);
      if (failure.retryAfter) res.setHeader("Retry-After", failure.retryAfter);
      sendJson(res, failure.status, { error: "injected failure" });
      return;
    }

    if (req.url === "/v1/completions") {
      const prompt = String(body.prompt ?? "");
      if (body.echo === true) {
        const tokens = tokenize(prompt);
        sendJson(res, 200, {
          choices: [
            {
              text: prompt,
              logprobs: {
                tokens: tokens.map((t) => t.token),
                // first token has no context, like real scoring endpoints
                token_logprobs: tokens.map((t, i) => (i === 0 ? null : model.tokenLogprob(t.token, t.offset, prompt))),
                text_offset: tokens.map((t) => t.offset),
              },
            },
          ],
        });
      } else {
        const top = model.topLogprobs(prompt);
        const best = Object.entries(top).sort((a, b) => b[1] - a[1])[0];
        sendJson(res, 200, {
          choices: [{ text: best?.[0] ?? "", logprobs: { top_logprobs: [top] } }],
        });
      }
      return;
    }

    if (req.url === "/v1/embeddings" && model.embed) {
      const input = body.input as string[];
      sendJson(res, 200, { data: input.map((text) => ({ embedding: model.embed!(text) })) });
      return;
    }

    sendJson(res, 404, { error: `no route ${req.url}` });
  }

  await new Promise<void>((resolve) => server.listen(0, "127.0.0.1", resolve));
  const { port } = server.address() as AddressInfo;
  return {
    url: `http://127.0.0.1:${port}`,
    server,
    requests,
    failNext(times, status = 500, retryAfter) {
      for (let i = 1; i <= times; i++) failures.set(requests.length + i, { status, retryAfter });
    },
    failRequests(ordinals, status = 500, retryAfter) {
      for (const ordinal of ordinals) failures.set(ordinal, { status, retryAfter });
    },
    close: () => new Promise((resolve) => server.close(() => resolve())),
  };
}

/** FNV-1a, stable across runs; basis for all hash-derived mock numbers. */
export function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash;
}

/** Deterministic 32-dim embedding from hashed character trigrams. */
export function hashEmbedding(text: string): number[] {
  const vec = new Array<number>(32).fill(0);
  const padded = `^${text}$`;
  for (let i = 0; i + 3 <= padded.length; i++) {
    const h = fnv1a(padded.slice(i, i + 3));
    vec[h % 32] += 1 + (h % 7) / 7;
  }
  if (vec.every((x) => x === 0)) vec[0] = 1;
  return vec;
}

/** Purely hash-driven model for unit tests: no fixture tables needed. */
export function hashModel(): MockModel {
  return {
    tokenLogprob: (token) => -(0.05 + (fnv1a(token) % 600) / 100),
    topLogprobs: (prompt) => {
      const p = 0.1 + 0.8 * ((fnv1a(prompt) % 1000) / 1000);
      return {
        " correct": Math.log(p),
        " incorrect": Math.log(1 - p),
        " unsure": -8.25,
        " yes": -9.5,
      };
    },
    embed: hashEmbedding,
  };
}
