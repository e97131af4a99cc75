/**
 * Disambiguity from embedding coherence: cosine similarity of prompt and
 * candidate embeddings, mapped affinely from [-1, 1] onto [0, 1]. Identical
 * texts score 1.0, orthogonal embeddings 0.5, antipodal embeddings 0.0.
 */
import { EmbeddingClient } from "./client.js";

export function cosineSimilarity(a: number[], b: number[]): number {
  if (a.length !== b.length || a.length === 0) {
    throw new Error(`cosine needs equal-length non-empty vectors, got ${a.length} and ${b.length}`);
  }
  let dot = 0;
  let normA = 0;
  let normB = 0;
  for (let i = 0; i < a.length; i++) {
    const x = a[i] ?? 0;
    const y = b[i] ?? 0;
    dot += x * y;
    normA += x * x;
    normB += y * y;
  }
  if (normA === 0 || normB === 0) {
    throw new Error("cosine undefined for zero vectors");
  }
  return dot / (Math.sqrt(normA) * Math.sqrt(normB));
}

/** Map cosine in [-1, 1] to [0, 1]; clamps float spill at both ends. */
export function daFromCosine(cosine: number): number {
  return Math.min(1, Math.max(0, (cosine + 1) / 2));
}

/** Disambiguity of one candidate against its prompt. */
export async function computeDa(prompt: string, candidate: string, embedder: EmbeddingClient): Promise<number> {
  const [promptVec, candidateVec] = await embedder.embed([prompt, candidate]);
  return daFromCosine(cosineSimilarity(promptVec!, candidateVec!));
}
