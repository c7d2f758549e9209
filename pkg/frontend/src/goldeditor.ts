/** State machine for the gold-correction workflow.
 *
 * The coach starts from the predicted annotations, then accepts,
 * deletes, relabels or re-spans records; saving issues PUT /gold.  A
 * concurrent writer surfaces as a 409 conflict: the state flags it and
 * the UI prompts a reload instead of overwriting silently.  Pure
 * functions over immutable state, no DOM.
 */

import { ApiError, WorkbenchApi } from "./api.js";
import type { AnnotationRecord, Role, SpanRef } from "./types.js";

export interface GoldEditorState {
  docId: string;
  records: AnnotationRecord[];
  dirty: boolean;
  conflict: boolean;
  errors: string[];
}

export function initEditor(docId: string, records: AnnotationRecord[]): GoldEditorState {
  return { docId, records: [...records], dirty: false, conflict: false, errors: [] };
}

export function deleteRecord(state: GoldEditorState, id: number): GoldEditorState {
  const records = state.records
    .filter((r) => r.id !== id)
    .map((r) => (r.cue_link === id ? { ...r, cue_link: null } : r));
  return { ...state, records, dirty: true };
}

export function relabelRecord(state: GoldEditorState, id: number, role: Role): GoldEditorState {
  const records = state.records.map((r) => {
    if (r.id !== id) return r;
    const updated: AnnotationRecord = { ...r, role };
    if (role !== "Cue") {
      // Cue-only fields must not survive a relabel away from Cue.
      updated.emotion = null;
      updated.negated = false;
      updated.intensity = null;
    }
    return updated;
  });
  return { ...state, records, dirty: true };
}

export function respanRecord(state: GoldEditorState, id: number, span: SpanRef): GoldEditorState {
  if (span.start < 0 || span.start >= span.end) {
    return { ...state, errors: [`invalid span ${span.sent}:${span.start}:${span.end}`] };
  }
  const records = state.records.map((r) => (r.id === id ? { ...r, span } : r));
  return { ...state, records, dirty: true, errors: [] };
}

export async function saveGold(
  api: WorkbenchApi,
  state: GoldEditorState,
): Promise<GoldEditorState> {
  try {
    await api.putGold(state.docId, state.records);
    return { ...state, dirty: false, conflict: false, errors: [] };
  } catch (error) {
    if (error instanceof ApiError && error.status === 409) {
      return { ...state, conflict: true, errors: [error.message] };
    }
    if (error instanceof ApiError && error.status === 422) {
      return { ...state, errors: [error.message, ...error.reasons] };
    }
    throw error;
  }
}
