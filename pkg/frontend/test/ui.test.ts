/**
 * DOM flows. The main flows run against a real HTTP server implementing
 * the service contract; the race-condition cases use a hand-driven fetch.
 */

import { createServer, type Server } from "node:http";
import type { AddressInfo } from "node:net";

import { afterAll, beforeAll, beforeEach, describe, expect, it } from "vitest";

import { ChatApi, type FetchLike } from "../src/api.js";
import { createChatApp } from "../src/ui.js";

const GOLDEN_QUESTION = "¿Cuántas tesis se realizaron en 2022?";
const GOLDEN_ANSWER =
  "En el año 2022, se realizaron 10 tesis en la carrera de Ingeniería en Geología de la FIGEMPA.";
const GOLDEN_SQL = "SELECT COUNT(*) FROM tesis WHERE year_approval = 2022;";

interface TestServer {
  url: string;
  server: Server;
  askCount: () => number;
  flagged: () => string[];
}

function startContractServer(): Promise<TestServer> {
  let asks = 0;
  const flags: string[] = [];
  const server = createServer((request, response) => {
    let body = "";
    request.on("data", (chunk) => (body += chunk));
    request.on("end", () => {
      const send = (status: number, payload: unknown): void => {
        const data = JSON.stringify(payload);
        response.writeHead(status, { "Content-Type": "application/json" });
        response.end(data);
      };
      const parsed = body ? (JSON.parse(body) as Record<string, string>) : {};
      if (request.url === "/ask") {
        if (!parsed.question || !parsed.question.trim()) {
          send(400, { detail: "question must be non-empty" });
          return;
        }
        if (parsed.question === "FALLA") {
          send(502, { detail: "completion backend unavailable" });
          return;
        }
        asks += 1;
        send(200, {
          id: `ex-${asks}`,
          answer: GOLDEN_ANSWER,
          sql: GOLDEN_SQL,
          sql_result: "10",
        });
        return;
      }
      if (request.url === "/flag") {
        if (!parsed.id || !parsed.id.startsWith("ex-")) {
          send(404, { detail: "unknown exchange id" });
          return;
        }
        flags.push(parsed.id);
        send(200, { ok: true, id: parsed.id, flagged: true });
        return;
      }
      send(404, { detail: "not found" });
    });
  });
  return new Promise((resolve) => {
    server.listen(0, "127.0.0.1", () => {
      const { port } = server.address() as AddressInfo;
      resolve({
        url: `http://127.0.0.1:${port}`,
        server,
        askCount: () => asks,
        flagged: () => flags,
      });
    });
  });
}

const realFetch: FetchLike = (input, init) => fetch(input, init);

let testServer: TestServer;

beforeAll(async () => {
  testServer = await startContractServer();
});

afterAll(() => {
  testServer.server.close();
});

let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = '<div id="app"></div>';
  root = document.getElementById("app") as HTMLElement;
});

function makeApp(api?: ChatApi) {
  return createChatApp(root, api ?? new ChatApi(realFetch, testServer.url));
}

function questionBox(): HTMLTextAreaElement {
  return root.querySelector("#question-input") as HTMLTextAreaElement;
}

function submitButton(): HTMLButtonElement {
  return root.querySelector("#submit-button") as HTMLButtonElement;
}

async function submit(app: ReturnType<typeof createChatApp>, question: string): Promise<void> {
  questionBox().value = question;
  submitButton().click();
  await app.whenIdle();
}

describe("submitting a question", () => {
  it("renders answer, SQL and raw result verbatim from the server", async () => {
    const app = makeApp();
    await submit(app, GOLDEN_QUESTION);

    expect(root.querySelector(".exchange-question")?.textContent).toBe(GOLDEN_QUESTION);
    expect(root.querySelector(".exchange-answer")?.textContent).toBe(GOLDEN_ANSWER);
    expect(root.querySelector(".exchange-sql")?.textContent).toBe(GOLDEN_SQL);
    expect(root.querySelector(".exchange-sql-result")?.textContent).toBe("10");
    expect(questionBox().value).toBe("");
    expect(submitButton().disabled).toBe(false);
  });

  it("blocks empty submissions client-side without a request", async () => {
    const before = testServer.askCount();
    const app = makeApp();
    await submit(app, "   ");

    const banner = root.querySelector("#error-banner") as HTMLElement;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("Escribe una pregunta");
    expect(testServer.askCount()).toBe(before);
    expect(root.querySelectorAll(".exchange")).toHaveLength(0);
  });

  it("shows server errors inline and preserves the typed question", async () => {
    const app = makeApp();
    await submit(app, "FALLA");

    const banner = root.querySelector("#error-banner") as HTMLElement;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("502");
    expect(questionBox().value).toBe("FALLA");
    expect(root.querySelectorAll(".exchange")).toHaveLength(0);
  });

  it("appends to the history across questions", async () => {
    const app = makeApp();
    await submit(app, "¿Primera?");
    await submit(app, "¿Segunda?");

    const questions = [...root.querySelectorAll(".exchange-question")].map(
      (node) => node.textContent,
    );
    expect(questions).toEqual(["¿Primera?", "¿Segunda?"]);
  });

  it("never interprets payload text as markup", async () => {
    const hostile = '<img src=x onerror="window.__pwned = true"> & <script>1</script>';
    const api = new ChatApi(async () =>
      new Response(
        JSON.stringify({ id: "ex-x", answer: hostile, sql: hostile, sql_result: hostile }),
        { status: 200, headers: { "Content-Type": "application/json" } },
      ),
    );
    const app = makeApp(api);
    await submit(app, "¿q?");

    expect(root.querySelector(".exchange-answer")?.textContent).toBe(hostile);
    expect(root.querySelector(".exchange-answer img")).toBeNull();
    expect((window as unknown as Record<string, unknown>).__pwned).toBeUndefined();
  });
});

describe("flagging an answer", () => {
  it("transitions to flagged and disables the button", async () => {
    const app = makeApp();
    await submit(app, GOLDEN_QUESTION);

    const flagButton = root.querySelector(".flag-button") as HTMLButtonElement;
    expect(flagButton.disabled).toBe(false);
    flagButton.click();
    await app.whenIdle();

    const after = root.querySelector(".flag-button") as HTMLButtonElement;
    expect(after.disabled).toBe(true);
    expect(after.textContent).toBe("Reportada");
    expect(app.state().exchanges[0].flagState).toBe("flagged");
  });

  it("sends a single request on a double click", async () => {
    let flagCalls = 0;
    let release: (() => void) | undefined;
    const gate = new Promise<void>((resolve) => (release = resolve));
    const api = new ChatApi(async (input) => {
      if (String(input).endsWith("/flag")) {
        flagCalls += 1;
        await gate;
        return new Response(JSON.stringify({ ok: true, id: "ex-1", flagged: true }), {
          status: 200,
        });
      }
      return new Response(
        JSON.stringify({ id: "ex-1", answer: "a", sql: "s", sql_result: "r" }),
        { status: 200 },
      );
    });
    const app = makeApp(api);
    await submit(app, "¿q?");

    const flagButton = root.querySelector(".flag-button") as HTMLButtonElement;
    flagButton.click();
    flagButton.click();
    release?.();
    await app.whenIdle();

    expect(flagCalls).toBe(1);
    expect(app.state().exchanges[0].flagState).toBe("flagged");
  });

  it("reverts to none and shows the error when the server rejects it", async () => {
    const api = new ChatApi(async (input) => {
      if (String(input).endsWith("/flag")) {
        return new Response(JSON.stringify({ detail: "unknown exchange id" }), { status: 404 });
      }
      return new Response(
        JSON.stringify({ id: "ex-1", answer: "a", sql: "s", sql_result: "r" }),
        { status: 200 },
      );
    });
    const app = makeApp(api);
    await submit(app, "¿q?");

    (root.querySelector(".flag-button") as HTMLButtonElement).click();
    await app.whenIdle();

    expect(app.state().exchanges[0].flagState).toBe("none");
    const banner = root.querySelector("#error-banner") as HTMLElement;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("404");
    expect((root.querySelector(".flag-button") as HTMLButtonElement).disabled).toBe(false);
  });
});

describe("in-flight ask", () => {
  it("disables submit until the response arrives", async () => {
    let release: (() => void) | undefined;
    const gate = new Promise<void>((resolve) => (release = resolve));
    let askCalls = 0;
    const api = new ChatApi(async () => {
      askCalls += 1;
      await gate;
      return new Response(
        JSON.stringify({ id: "ex-1", answer: "a", sql: "s", sql_result: "r" }),
        { status: 200 },
      );
    });
    const app = makeApp(api);

    questionBox().value = "¿q?";
    submitButton().click();
    expect(submitButton().disabled).toBe(true);
    submitButton().click(); // disabled buttons do not dispatch, but guard anyway
    release?.();
    await app.whenIdle();

    expect(askCalls).toBe(1);
    expect(submitButton().disabled).toBe(false);
    expect(root.querySelectorAll(".exchange")).toHaveLength(1);
  });
});
