import { describe, expect, it } from "vitest";
import { LexicalEmbedder, ModelUnavailableError, fnv1a32, loadEmbedder } from "../src/embedder";

function dot(a: number[], b: number[]): number {
  return a.reduce((acc, x, i) => acc + x * b[i], 0);
}

function norm(v: number[]): number {
  return Math.sqrt(dot(v, v));
}

describe("fnv1a32", () => {
  it("matches the reference value for a known input", () => {
    // FNV-1a 32-bit of "a" is 0xe40c292c
    expect(fnv1a32("a")).toBe(0xe40c292c);
    expect(fnv1a32("")).toBe(0x811c9dc5);
  });
});

describe("LexicalEmbedder", () => {
  const embedder = new LexicalEmbedder();

  it("produces unit-norm vectors of the advertised dimension", () => {
    const [v] = embedder.embed(["the quick brown fox"]);
    expect(v).toHaveLength(embedder.dim);
    expect(norm(v)).toBeCloseTo(1.0, 9);
  });

  it("is deterministic", () => {
    const [a, b] = embedder.embed(["same text twice", "same text twice"]);
    expect(a).toEqual(b);
  });

  it("maps empty text to the zero vector", () => {
    const [v] = embedder.embed([""]);
    expect(v.every((x) => x === 0)).toBe(true);
  });

  it("ranks a paraphrase above an unrelated sentence", () => {
    const [a, b, c] = embedder.embed([
      "people should stay home to stay safe during the pandemic",
      "staying at home keeps people safe in a pandemic",
      "the referee showed a yellow card after a hard tackle",
    ]);
    expect(dot(a, b)).toBeGreaterThan(dot(a, c));
  });

  it("separates distinct texts", () => {
    const [a, b] = embedder.embed(["alpha beta gamma", "delta epsilon zeta"]);
    expect(dot(a, b)).toBeLessThan(0.9);
  });
});

describe("loadEmbedder", () => {
  it("returns the builtin lexical model", () => {
    expect(loadEmbedder("lexical").name).toBe("lexical");
  });

  it("reports unavailable weights for unknown models", () => {
    expect(() => loadEmbedder("labse-large")).toThrow(ModelUnavailableError);
  });
});
