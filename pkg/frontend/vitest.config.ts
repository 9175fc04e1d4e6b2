import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environment: "node",
    // The acceptance tests shell out to the swinglab CLI (dataset synthesis,
    // feature extraction, cross-validation), which takes longer than the
    // default per-test budget.
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
