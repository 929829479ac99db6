/**
 * Pure chat state: an append-only exchange history plus the ask/flag
 * request machinery. All transitions return new state objects so the UI
 * can re-render from scratch at any point without losing history.
 */

import type { AskResponse } from "./api.js";

export type FlagState = "none" | "pending" | "flagged";

export interface ExchangeView {
  exchangeId: string;
  question: string;
  answer: string;
  sql: string;
  sqlResult: string;
  flagState: FlagState;
}

export interface ChatState {
  exchanges: ExchangeView[];
  askPending: boolean;
  error: string | null;
}

export function initialState(): ChatState {
  return { exchanges: [], askPending: false, error: null };
}

/** Returns null when the question may be submitted, else the message to show. */
export function validateQuestion(question: string): string | null {
  return question.trim().length > 0 ? null : "Escribe una pregunta antes de enviar.";
}

export function beginAsk(state: ChatState): ChatState {
  return { ...state, askPending: true, error: null };
}

export function askSucceeded(state: ChatState, question: string, response: AskResponse): ChatState {
  const exchange: ExchangeView = {
    exchangeId: response.id,
    question,
    answer: response.answer,
    sql: response.sql,
    sqlResult: response.sql_result,
    flagState: "none",
  };
  return { ...state, askPending: false, exchanges: [...state.exchanges, exchange] };
}

export function askFailed(state: ChatState, message: string): ChatState {
  return { ...state, askPending: false, error: message };
}

export function canFlag(state: ChatState, exchangeId: string): boolean {
  const exchange = state.exchanges.find((entry) => entry.exchangeId === exchangeId);
  return exchange !== undefined && exchange.flagState === "none";
}

function withFlagState(state: ChatState, exchangeId: string, flagState: FlagState): ChatState {
  return {
    ...state,
    exchanges: state.exchanges.map((entry) =>
      entry.exchangeId === exchangeId ? { ...entry, flagState } : entry,
    ),
  };
}

export function beginFlag(state: ChatState, exchangeId: string): ChatState {
  return withFlagState({ ...state, error: null }, exchangeId, "pending");
}

export function flagSucceeded(state: ChatState, exchangeId: string): ChatState {
  return withFlagState(state, exchangeId, "flagged");
}

/** A failed flag reverts to "none" so the user can retry. */
export function flagFailed(state: ChatState, exchangeId: string, message: string): ChatState {
  return withFlagState({ ...state, error: message }, exchangeId, "none");
}
