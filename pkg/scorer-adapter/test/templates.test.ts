import { describe, expect, it } from "vitest";

import {
  renderSequencePrompt,
  renderVerdictPrompt,
  validateTemplates,
} from "../src/templates";
import { DEFAULT_CORRECTNESS_TOKENS, DEFAULT_TEMPLATES } from "../src/types";

const GOOD = {
  gCorrect: "Give a{correctness} answer.\nQ: {prompt}\nA: {candidate}",
  gIncorrect: "Give a{correctness} answer.\nQ: {prompt}\nA: {candidate}",
  vCorrect: "Q: {prompt}\nA: {candidate}\nThat answer is{correctness}",
  vIncorrect: "Q: {prompt}\nA: {candidate}\nThat answer is{correctness}",
};

describe("validateTemplates", () => {
  it("accepts the defaults", () => {
    expect(() => validateTemplates(DEFAULT_TEMPLATES)).not.toThrow();
  });

  it("accepts a minimal well-formed set", () => {
    expect(() => validateTemplates(GOOD)).not.toThrow();
  });

  it.each([
    ["missing", "Q: {prompt}\nA: {candidate}"],
    ["duplicated", "{correctness}{correctness} Q: {prompt}\nA: {candidate}"],
  ])("rejects a %s correctness slot, naming the template", (_how, gCorrect) => {
    expect(() => validateTemplates({ ...GOOD, gCorrect })).toThrow(/gCorrect.*\{correctness\}/);
  });

  it("rejects a missing candidate slot", () => {
    expect(() => validateTemplates({ ...GOOD, vCorrect: "Q: {prompt} is{correctness}" })).toThrow(
      /vCorrect.*\{candidate\}/,
    );
  });

  it("rejects a missing prompt slot", () => {
    expect(() => validateTemplates({ ...GOOD, gIncorrect: "Be{correctness}: {candidate}" })).toThrow(
      /gIncorrect.*\{prompt\}/,
    );
  });

  it("requires sequence templates to end with the candidate", () => {
    const gCorrect = "A: {candidate} is a{correctness} answer to {prompt}";
    expect(() => validateTemplates({ ...GOOD, gCorrect })).toThrow(/final slot/);
  });

  it("requires verdict templates to end with the correctness slot", () => {
    const vIncorrect = "Is {candidate} a{correctness} answer?\nQ: {prompt}";
    expect(() => validateTemplates({ ...GOOD, vIncorrect })).toThrow(/final slot/);
  });
});

describe("renderSequencePrompt", () => {
  it("splits into filled prefix and verbatim continuation", () => {
    const { prefix, continuation } = renderSequencePrompt(
      GOOD.gCorrect,
      "What is 2+2?",
      " correct",
      "4",
    );
    expect(prefix).toBe("Give a correct answer.\nQ: What is 2+2?\nA: ");
    expect(continuation).toBe("4");
  });

  it("keeps slot-like text inside the prompt literal", () => {
    const { prefix } = renderSequencePrompt(GOOD.gCorrect, "expand {candidate}", " correct", "x");
    expect(prefix).toContain("Q: expand {candidate}\n");
  });
});

describe("renderVerdictPrompt", () => {
  it("ends exactly where the verdict token goes", () => {
    const prompt = renderVerdictPrompt(GOOD.vCorrect, "What is 2+2?", "5");
    expect(prompt).toBe("Q: What is 2+2?\nA: 5\nThat answer is");
  });

  it("keeps slot-like text inside the candidate literal", () => {
    const prompt = renderVerdictPrompt(GOOD.vCorrect, "q", "{correctness}!");
    expect(prompt).toBe("Q: q\nA: {correctness}!\nThat answer is");
  });

  it("pairs with the default correctness tokens to form natural verdicts", () => {
    const prompt = renderVerdictPrompt(DEFAULT_TEMPLATES.vCorrect, "q", "a");
    expect(prompt + DEFAULT_CORRECTNESS_TOKENS.correct).toMatch(/is correct$/);
    expect(prompt + DEFAULT_CORRECTNESS_TOKENS.incorrect).toMatch(/is incorrect$/);
  });
});
