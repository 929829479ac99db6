/** Typed client for the question-answer service. */

export interface AskResponse {
  id: string;
  answer: string;
  sql: string;
  sql_result: string;
}

export interface FlagResponse {
  ok: boolean;
  id: string;
  flagged: boolean;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function readDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string") {
      return body.detail;
    }
  } catch {
    // not JSON; fall through
  }
  return response.statusText || `HTTP ${response.status}`;
}

export class ChatApi {
  private readonly fetchImpl: FetchLike;
  private readonly baseUrl: string;

  constructor(fetchImpl?: FetchLike, baseUrl = "") {
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
    this.baseUrl = baseUrl;
  }

  private async post<T>(path: string, payload: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(payload),
      });
    } catch (error) {
      throw new ApiError(0, `No se pudo contactar el servidor: ${String(error)}`);
    }
    if (!response.ok) {
      throw new ApiError(response.status, await readDetail(response));
    }
    return (await response.json()) as T;
  }

  ask(question: string): Promise<AskResponse> {
    return this.post<AskResponse>("/ask", { question });
  }

  flag(id: string, reason?: string): Promise<FlagResponse> {
    return this.post<FlagResponse>("/flag", reason === undefined ? { id } : { id, reason });
  }
}
