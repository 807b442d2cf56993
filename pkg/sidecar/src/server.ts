import { createApp, AppState } from "./app";
import { loadEmbedder } from "./embedder";

const model = process.env.EMBED_MODEL ?? "lexical";
const port = Number(process.env.EMBED_PORT ?? 8900);

const state: AppState = { embedder: null };
try {
  state.embedder = loadEmbedder(model);
} catch (err) {
  state.loadError = err instanceof Error ? err.message : String(err);
  console.error(`embedder load failed: ${state.loadError}`);
}

createApp(state).listen(port, () => {
  const status = state.embedder ? `serving "${model}" (dim ${state.embedder.dim})` : "NOT READY";
  console.log(`embedding sidecar on :${port} — ${status}`);
});
