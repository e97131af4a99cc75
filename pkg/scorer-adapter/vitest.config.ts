import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // the pipeline test shells out to the decoding-game CLI for 20 instances
    testTimeout: 60_000,
    hookTimeout: 30_000,
  },
});
