export {
  CandidateScores,
  ConditionTemplates,
  CorrectnessTokens,
  DEFAULT_BATCH_SIZE,
  DEFAULT_CORRECTNESS_TOKENS,
  DEFAULT_RETRY,
  DEFAULT_TEMPLATES,
  DEFAULT_TOP_LOGPROBS,
  InstanceRecord,
  RetryPolicy,
  ScoringJob,
} from "./types.js";
export {
  CANDIDATE_SLOT,
  CORRECTNESS_SLOT,
  PROMPT_SLOT,
  renderSequencePrompt,
  renderVerdictPrompt,
  validateTemplates,
} from "./templates.js";
export { CompletionClient, EmbeddingClient, EndpointError, postJson } from "./client.js";
export { computeDa, cosineSimilarity, daFromCosine } from "./da.js";
export { ScoreOptions, ScoringJobError, scoreCandidates } from "./scoring.js";
export { HEADER_LINE, instanceToLine, writeInstanceFile } from "./emit.js";
export { Question, TemplateFile, loadTemplateFile, parseQuestionFile } from "./questions.js";
