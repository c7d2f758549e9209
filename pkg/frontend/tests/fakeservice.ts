/** A fetch stub that scripts service responses and records requests. */

export interface RecordedRequest {
  url: string;
  method: string;
  body: unknown;
}

export type Responder = (request: RecordedRequest) =>
  { status: number; body: unknown } | undefined;

export function makeFetch(responder: Responder) {
  const requests: RecordedRequest[] = [];
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    const request: RecordedRequest = {
      url,
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(init.body as string) : undefined,
    };
    requests.push(request);
    const scripted = responder(request) ?? { status: 404, body: { error: "unscripted" } };
    return new Response(JSON.stringify(scripted.body), {
      status: scripted.status,
      headers: { "content-type": "application/json" },
    });
  };
  return { fetchFn, requests };
}
