import { StudyKind } from "./types.js";

export interface NextItem {
  index: number;
  image_url: string;
}

export interface ReportBody {
  session_id: string;
  kind: StudyKind;
  positive_class: string;
  acc: number;
  sensitivity: number;
  specificity: number;
  confusion: number[][];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "HttpError";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(response.status, code, message);
}

/** Thin typed client over the study service HTTP API. */
export class StudyApi {
  constructor(
    private baseUrl: string = "",
    private fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  createSession(kind: StudyKind, readerId: string, seed: number): Promise<{ id: string }> {
    return this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ kind, reader_id: readerId, seed }),
    });
  }

  nextItem(sessionId: string): Promise<NextItem | { done: true }> {
    return this.request(`/sessions/${sessionId}/next`);
  }

  recordResponse(
    sessionId: string,
    index: number,
    choice: string,
    latencyMs: number,
  ): Promise<{ ok: boolean; cursor: number; state: string }> {
    return this.request(`/sessions/${sessionId}/responses`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ index, choice, latency_ms: latencyMs }),
    });
  }

  report(sessionId: string): Promise<ReportBody> {
    return this.request(`/sessions/${sessionId}/report`);
  }

  imageUrl(path: string): string {
    return this.baseUrl + path;
  }
}
