import { describe, expect, it } from "vitest";

import {
  askFailed,
  askSucceeded,
  beginAsk,
  beginFlag,
  canFlag,
  flagFailed,
  flagSucceeded,
  initialState,
  validateQuestion,
} from "../src/state.js";

const response = {
  id: "ex-1",
  answer: "respuesta",
  sql: "SELECT 1;",
  sql_result: "1",
};

describe("question validation", () => {
  it("accepts non-empty questions", () => {
    expect(validateQuestion("¿Cuántas tesis?")).toBeNull();
  });

  it("rejects empty and whitespace-only questions", () => {
    expect(validateQuestion("")).not.toBeNull();
    expect(validateQuestion("   \n ")).not.toBeNull();
  });
});

describe("ask transitions", () => {
  it("marks pending and clears the previous error", () => {
    const state = beginAsk({ ...initialState(), error: "viejo" });
    expect(state.askPending).toBe(true);
    expect(state.error).toBeNull();
  });

  it("appends exchanges in order and never drops history", () => {
    let state = askSucceeded(beginAsk(initialState()), "¿q1?", response);
    state = askSucceeded(beginAsk(state), "¿q2?", { ...response, id: "ex-2" });
    expect(state.exchanges.map((entry) => entry.exchangeId)).toEqual(["ex-1", "ex-2"]);
    expect(state.askPending).toBe(false);
    expect(state.exchanges[0].sqlResult).toBe("1");
  });

  it("keeps history on failure and records the message", () => {
    const before = askSucceeded(beginAsk(initialState()), "¿q?", response);
    const after = askFailed(beginAsk(before), "Error del servidor (502): caído");
    expect(after.exchanges).toHaveLength(1);
    expect(after.askPending).toBe(false);
    expect(after.error).toContain("502");
  });
});

describe("flag state machine", () => {
  const withExchange = () => askSucceeded(beginAsk(initialState()), "¿q?", response);

  it("walks none -> pending -> flagged", () => {
    let state = withExchange();
    expect(canFlag(state, "ex-1")).toBe(true);
    state = beginFlag(state, "ex-1");
    expect(state.exchanges[0].flagState).toBe("pending");
    expect(canFlag(state, "ex-1")).toBe(false);
    state = flagSucceeded(state, "ex-1");
    expect(state.exchanges[0].flagState).toBe("flagged");
    expect(canFlag(state, "ex-1")).toBe(false);
  });

  it("reverts to none on failure so the user can retry", () => {
    let state = beginFlag(withExchange(), "ex-1");
    state = flagFailed(state, "ex-1", "Error del servidor (404): desconocido");
    expect(state.exchanges[0].flagState).toBe("none");
    expect(state.error).toContain("404");
    expect(canFlag(state, "ex-1")).toBe(true);
  });

  it("never flags unknown exchanges", () => {
    expect(canFlag(withExchange(), "otro")).toBe(false);
  });
});
