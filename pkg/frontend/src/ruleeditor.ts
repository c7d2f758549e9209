/** Core logic of the live rule editor.
 *
 * Every edit sends the draft to the server-side preview endpoint; match
 * counts come back per document and compile errors become inline
 * diagnostics.  "Promote" commits the draft into the active ruleset and
 * is disabled while the draft does not compile.  No rule logic runs in
 * the client.
 */

import { ApiError, WorkbenchApi } from "./api.js";
import type { PreviewResponse } from "./types.js";

export interface DraftParse {
  ok: boolean;
  rule?: unknown;
  error?: string;
}

/** Parse the draft textarea: a single rule object in JSON. */
export function parseDraft(text: string): DraftParse {
  let value: unknown;
  try {
    value = JSON.parse(text);
  } catch (error) {
    return { ok: false, error: `not valid JSON: ${(error as Error).message}` };
  }
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    return { ok: false, error: "the draft must be a single rule object" };
  }
  const rule = value as Record<string, unknown>;
  if (typeof rule.id !== "string" || !rule.id) {
    return { ok: false, error: "the rule needs a string id" };
  }
  if (typeof rule.vars !== "object" || rule.vars === null) {
    return { ok: false, error: "the rule needs a vars object" };
  }
  return { ok: true, rule: value };
}

export interface PreviewState {
  status: "idle" | "ok" | "error";
  counts: Record<string, number>;
  matches: PreviewResponse["documents"];
  diagnostic: string;
  promotable: boolean;
}

export const IDLE_PREVIEW: PreviewState = {
  status: "idle", counts: {}, matches: {}, diagnostic: "", promotable: false,
};

export async function previewDraft(
  api: WorkbenchApi,
  text: string,
  docIds?: string[],
): Promise<PreviewState> {
  const parsed = parseDraft(text);
  if (!parsed.ok) {
    return { ...IDLE_PREVIEW, status: "error", diagnostic: parsed.error ?? "invalid draft" };
  }
  try {
    const response = await api.previewRule(parsed.rule, docIds);
    const counts: Record<string, number> = {};
    for (const [docId, result] of Object.entries(response.documents)) {
      counts[docId] = result.count;
    }
    return {
      status: "ok", counts, matches: response.documents,
      diagnostic: "", promotable: true,
    };
  } catch (error) {
    if (error instanceof ApiError) {
      return {
        ...IDLE_PREVIEW,
        status: "error",
        diagnostic: error.message,
        promotable: false,
      };
    }
    throw error;
  }
}

/** Append or replace the draft inside the active ruleset and commit it. */
export async function promoteDraft(
  api: WorkbenchApi,
  text: string,
): Promise<{ ok: boolean; diagnostic: string }> {
  const parsed = parseDraft(text);
  if (!parsed.ok || !parsed.rule) {
    return { ok: false, diagnostic: parsed.error ?? "invalid draft" };
  }
  const draft = parsed.rule as { id: string };
  const active = await api.getRuleset();
  const doc = active.ruleset;
  const rules = (doc.rules as { id: string }[]).filter((r) => r.id !== draft.id);
  rules.push(draft);
  try {
    await api.putRuleset({ ...doc, rules });
    return { ok: true, diagnostic: "" };
  } catch (error) {
    if (error instanceof ApiError) {
      return { ok: false, diagnostic: error.message };
    }
    throw error;
  }
}
