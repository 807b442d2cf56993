/**
 * HTTP surface of the sidecar.
 *
 * Wire protocol (shared with the engine's remote embedder client):
 *   POST /embed   {"texts": ["...", ...]}        (at most 64 per call)
 *              -> {"dim": D, "vectors": [[f64; D], ...]}  (unit-norm, ordered)
 *   GET  /healthz -> 200 when the model is ready, 503 otherwise
 */

import express from "express";
import { z } from "zod";
import { Embedder } from "./embedder";

export const MAX_BATCH = 64;

const embedRequest = z.object({ texts: z.array(z.string()).max(MAX_BATCH) });

export interface AppState {
  embedder: Embedder | null;
  loadError?: string;
}

export function createApp(state: AppState): express.Express {
  const app = express();
  app.use(express.json({ limit: "2mb" }));

  app.get("/healthz", (_req, res) => {
    if (state.embedder) {
      res.status(200).json({ status: "ready", model: state.embedder.name, dim: state.embedder.dim });
    } else {
      res.status(503).json({ status: "unavailable", error: state.loadError ?? "model not loaded" });
    }
  });

  app.post("/embed", (req, res) => {
    if (!state.embedder) {
      res.status(503).json({ error: state.loadError ?? "model not loaded" });
      return;
    }
    const parsed = embedRequest.safeParse(req.body);
    if (!parsed.success) {
      res.status(400).json({ error: `bad request: ${parsed.error.issues[0]?.message ?? "invalid body"}` });
      return;
    }
    const vectors = state.embedder.embed(parsed.data.texts);
    res.status(200).json({ dim: state.embedder.dim, vectors });
  });

  return app;
}
