/**
 * Embedding backends for the sidecar.
 *
 * The built-in "lexical" model is a deterministic signed feature-hashing
 * embedder over word unigrams, word bigrams, and character trigrams. It
 * needs no model weights, which keeps the sidecar fully functional in
 * offline environments; texts sharing vocabulary land measurably closer
 * in cosine space than unrelated ones.
 *
 * Any other EMBED_MODEL value is treated as a reference to real
 * transformer weights; when those cannot be loaded locally the server
 * stays up but reports not-ready on /healthz.
 */

export interface Embedder {
  readonly name: string;
  readonly dim: number;
  embed(texts: string[]): number[][];
}

export class ModelUnavailableError extends Error {}

const FNV_OFFSET = 0x811c9dc5;
const FNV_PRIME = 0x01000193;

export function fnv1a32(text: string): number {
  const bytes = Buffer.from(text, "utf8");
  let h = FNV_OFFSET;
  for (const b of bytes) {
    h ^= b;
    h = Math.imul(h, FNV_PRIME) >>> 0;
  }
  return h >>> 0;
}

function tokenize(text: string): string[] {
  return text
    .toLowerCase()
    .normalize("NFKC")
    .split(/[^\p{L}]+/u)
    .filter(Boolean);
}

export class LexicalEmbedder implements Embedder {
  readonly name = "lexical";
  readonly dim: number;

  constructor(dim = 256) {
    this.dim = dim;
  }

  embed(texts: string[]): number[][] {
    return texts.map((text) => this.embedOne(text));
  }

  private add(acc: Float64Array, feature: string, weight: number): void {
    const h = fnv1a32(feature);
    const sign = h >>> 31 ? -1 : 1;
    acc[h % this.dim] += sign * weight;
  }

  private embedOne(text: string): number[] {
    const acc = new Float64Array(this.dim);
    const words = tokenize(text);
    for (let i = 0; i < words.length; i++) {
      this.add(acc, words[i], 1.0);
      if (i + 1 < words.length) {
        this.add(acc, `${words[i]} ${words[i + 1]}`, 0.6);
      }
      const padded = `^${words[i]}$`;
      for (let j = 0; j + 3 <= padded.length; j++) {
        this.add(acc, `3:${padded.slice(j, j + 3)}`, 0.4);
      }
    }
    let norm = 0;
    for (const x of acc) norm += x * x;
    norm = Math.sqrt(norm);
    const out = new Array<number>(this.dim);
    for (let i = 0; i < this.dim; i++) {
      out[i] = norm > 0 ? acc[i] / norm : 0;
    }
    return out;
  }
}

export function loadEmbedder(model: string): Embedder {
  if (model === "lexical") {
    return new LexicalEmbedder();
  }
  // Transformer weights would be resolved from a local cache here; this
  // environment has none, so anything else is reported as unavailable.
  throw new ModelUnavailableError(
    `model weights for "${model}" are not available locally; ` +
      `set EMBED_MODEL=lexical or provide a local weight cache`,
  );
}
