/** Thin typed client over the workbench HTTP API.
 *
 * The UI never computes annotations itself; everything it shows comes
 * through this client.  The fetch function is injectable so the logic
 * can be unit-tested with a fake transport.
 */

import type {
  AnnotationRecord, AnnotationSetPayload, DocumentPayload, GraphPayload,
  PreviewResponse, RulesetPayload,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly reasons: string[] = [],
  ) {
    super(message);
  }
}

async function fail(response: Response): Promise<never> {
  let message = `${response.status}`;
  let reasons: string[] = [];
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") message = body.error;
    if (Array.isArray(body?.reasons)) reasons = body.reasons;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, message, reasons);
}

export class WorkbenchApi {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.base + path);
    if (!response.ok) await fail(response);
    return response.json() as Promise<T>;
  }

  private async send<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.base + path, {
      method,
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) await fail(response);
    return response.json() as Promise<T>;
  }

  listDocuments(): Promise<string[]> {
    return this.getJson<{ documents: string[] }>("/documents")
      .then((body) => body.documents);
  }

  getDocument(docId: string): Promise<DocumentPayload> {
    return this.getJson(`/documents/${encodeURIComponent(docId)}`);
  }

  getAnnotations(docId: string, kind: "predicted" | "gold"): Promise<AnnotationSetPayload> {
    return this.getJson(`/documents/${encodeURIComponent(docId)}/annotations?kind=${kind}`);
  }

  annotate(docId: string): Promise<AnnotationSetPayload> {
    return this.send("POST", `/documents/${encodeURIComponent(docId)}/annotate`);
  }

  putGold(docId: string, annotations: AnnotationRecord[]): Promise<unknown> {
    return this.send("PUT", `/documents/${encodeURIComponent(docId)}/gold`,
      { schema: "emorole-api/1", doc_id: docId, annotations });
  }

  getGraph(docId: string, layers: string[]): Promise<GraphPayload> {
    const spec = layers.length ? layers.join(",") : "";
    return this.getJson(
      `/documents/${encodeURIComponent(docId)}/graph?layers=${encodeURIComponent(spec)}&format=json`);
  }

  getRuleset(): Promise<RulesetPayload> {
    return this.getJson("/ruleset");
  }

  putRuleset(rulesetDoc: unknown): Promise<{ rules: string[] }> {
    return this.send("PUT", "/ruleset", { ruleset: rulesetDoc });
  }

  previewRule(rule: unknown, docIds?: string[]): Promise<PreviewResponse> {
    return this.send("POST", "/ruleset/preview",
      docIds ? { rule, doc_ids: docIds } : { rule });
  }
}
