#!/usr/bin/env node
/** Command-line front end: score a question file into an instance file. */
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { EmbeddingClient } from "./client.js";
import { writeInstanceFile } from "./emit.js";
import { parseQuestionFile, loadTemplateFile } from "./questions.js";
import { ScoringJobError, scoreCandidates } from "./scoring.js";
import { InstanceRecord, RetryPolicy, ScoringJob } from "./types.js";

interface ScoreArgs {
  questions: string;
  endpoint: string;
  model: string;
  out: string;
  embeddingsEndpoint?: string;
  embeddingModel?: string;
  templates?: string;
  batchSize: number;
  maxAttempts: number;
  timeoutMs: number;
  topLogprobs: number;
}

async function runScore(args: ScoreArgs): Promise<void> {
  const questions = parseQuestionFile(args.questions);
  const templateFile = args.templates ? loadTemplateFile(args.templates) : undefined;
  const retry: Partial<RetryPolicy> = { maxAttempts: args.maxAttempts, timeoutMs: args.timeoutMs };
  const embedder = args.embeddingsEndpoint
    ? new EmbeddingClient(args.embeddingsEndpoint, args.embeddingModel ?? args.model, retry)
    : undefined;

  const records: InstanceRecord[] = [];
  let failures = 0;
  for (const question of questions) {
    const job: ScoringJob = {
      id: question.id,
      prompt: question.prompt,
      candidates: question.candidates,
      endpoint: args.endpoint,
      model: args.model,
      templates: templateFile?.templates,
      correctnessTokens: templateFile?.correctnessTokens,
      batchSize: args.batchSize,
      retry,
      topLogprobs: args.topLogprobs,
      goldIndex: question.goldIndex,
    };
    try {
      records.push(await scoreCandidates(job, { embedder, onWarning: (msg) => console.error(msg) }));
      console.error(`scored ${question.id} (${records.length}/${questions.length})`);
    } catch (err) {
      // a failed job is reported and skipped; its partial scores are not
      // emitted (an instance line must carry every candidate)
      if (!(err instanceof ScoringJobError)) throw err;
      failures += 1;
      console.error(err.message);
    }
  }

  writeInstanceFile(records, args.out);
  console.error(`wrote ${records.length}/${questions.length} instances to ${args.out}`);
  if (failures > 0) {
    process.exitCode = 1;
  }
}

async function main(): Promise<void> {
  await yargs(hideBin(process.argv))
    .scriptName("scorer-adapter")
    .command(
      "score",
      "score a question file into a decoding-game instance file",
      (cmd) =>
        cmd
          .option("questions", { type: "string", demandOption: true, describe: "question file (line-delimited JSON)" })
          .option("endpoint", { type: "string", demandOption: true, describe: "inference endpoint base URL" })
          .option("model", { type: "string", demandOption: true, describe: "model identifier" })
          .option("out", { type: "string", demandOption: true, describe: "output instance file" })
          .option("embeddings-endpoint", { type: "string", describe: "embeddings endpoint base URL (enables da)" })
          .option("embedding-model", { type: "string", describe: "embedding model (default: --model)" })
          .option("templates", { type: "string", describe: "JSON file overriding the condition templates" })
          .option("batch-size", { type: "number", default: 4, describe: "max concurrent requests per question" })
          .option("max-attempts", { type: "number", default: 3, describe: "attempts per request" })
          .option("timeout-ms", { type: "number", default: 30000, describe: "per-attempt timeout" })
          .option("top-logprobs", { type: "number", default: 20, describe: "top-K size for verdict calls" }),
      async (argv) => runScore(argv as unknown as ScoreArgs),
    )
    .demandCommand(1, "specify a command")
    .strict()
    .version("0.1.0")
    .parseAsync();
}

main().catch((err) => {
  console.error(err instanceof Error ? err.message : err);
  process.exitCode = 1;
});
