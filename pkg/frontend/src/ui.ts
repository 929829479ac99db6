/**
 * DOM layer. Everything the server sends is rendered through textContent,
 * never markup, so what the user sees is byte-identical to the payload.
 */

import { ApiError, ChatApi } from "./api.js";
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
  type ChatState,
  type ExchangeView,
} from "./state.js";

export interface ChatAppHandle {
  state(): ChatState;
  whenIdle(): Promise<void>;
}

export function createChatApp(root: HTMLElement, api: ChatApi): ChatAppHandle {
  let state = initialState();
  let pendingOps: Promise<void>[] = [];

  const track = (operation: Promise<void>): void => {
    pendingOps.push(operation);
    void operation.finally(() => {
      pendingOps = pendingOps.filter((entry) => entry !== operation);
    });
  };

  root.replaceChildren();
  const layout = document.createElement("div");
  layout.className = "chat-layout";

  const askSection = document.createElement("section");
  askSection.className = "ask-panel";
  const questionLabel = document.createElement("label");
  questionLabel.textContent = "Pregunta";
  questionLabel.htmlFor = "question-input";
  const questionInput = document.createElement("textarea");
  questionInput.id = "question-input";
  questionInput.rows = 4;
  const submitButton = document.createElement("button");
  submitButton.id = "submit-button";
  submitButton.textContent = "Submit";
  const errorBanner = document.createElement("div");
  errorBanner.id = "error-banner";
  errorBanner.className = "error-banner";
  errorBanner.hidden = true;
  askSection.append(questionLabel, questionInput, submitButton, errorBanner);

  const outputSection = document.createElement("section");
  outputSection.className = "answer-panel";
  const outputTitle = document.createElement("h2");
  outputTitle.textContent = "Respuesta Generada";
  const historyList = document.createElement("div");
  historyList.id = "history";
  outputSection.append(outputTitle, historyList);

  layout.append(askSection, outputSection);
  root.append(layout);

  function setState(next: ChatState): void {
    state = next;
    render();
  }

  function render(): void {
    submitButton.disabled = state.askPending;
    errorBanner.hidden = state.error === null;
    errorBanner.textContent = state.error ?? "";
    historyList.replaceChildren(...state.exchanges.map(renderExchange));
  }

  function renderExchange(exchange: ExchangeView): HTMLElement {
    const card = document.createElement("article");
    card.className = "exchange";
    card.dataset.exchangeId = exchange.exchangeId;

    const question = document.createElement("p");
    question.className = "exchange-question";
    question.textContent = exchange.question;

    const answer = document.createElement("div");
    answer.className = "exchange-answer";
    answer.textContent = exchange.answer;

    const provenance = document.createElement("details");
    provenance.className = "provenance";
    const summary = document.createElement("summary");
    summary.textContent = "Consulta SQL y resultado";
    const sql = document.createElement("pre");
    sql.className = "exchange-sql";
    sql.textContent = exchange.sql;
    const sqlResult = document.createElement("pre");
    sqlResult.className = "exchange-sql-result";
    sqlResult.textContent = exchange.sqlResult;
    provenance.append(summary, sql, sqlResult);

    const flagButton = document.createElement("button");
    flagButton.className = "flag-button";
    flagButton.textContent = exchange.flagState === "flagged" ? "Reportada" : "Flag";
    flagButton.disabled = exchange.flagState !== "none";
    flagButton.addEventListener("click", () => {
      track(handleFlag(exchange.exchangeId));
    });

    card.append(question, answer, provenance, flagButton);
    return card;
  }

  async function handleSubmit(): Promise<void> {
    const typed = questionInput.value;
    const validation = validateQuestion(typed);
    if (validation !== null) {
      setState({ ...state, error: validation });
      return;
    }
    if (state.askPending) {
      return;
    }
    const question = typed.trim();
    setState(beginAsk(state));
    try {
      const response = await api.ask(question);
      setState(askSucceeded(state, question, response));
      questionInput.value = "";
    } catch (error) {
      // the typed question stays in the box for a retry
      setState(askFailed(state, describeError(error)));
    }
  }

  async function handleFlag(exchangeId: string): Promise<void> {
    if (!canFlag(state, exchangeId)) {
      return;
    }
    setState(beginFlag(state, exchangeId));
    try {
      await api.flag(exchangeId);
      setState(flagSucceeded(state, exchangeId));
    } catch (error) {
      setState(flagFailed(state, exchangeId, describeError(error)));
    }
  }

  submitButton.addEventListener("click", () => {
    track(handleSubmit());
  });

  render();

  return {
    state: () => state,
    whenIdle: async () => {
      while (pendingOps.length > 0) {
        await Promise.all([...pendingOps]);
      }
    },
  };
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    return error.status > 0 ? `Error del servidor (${error.status}): ${error.message}` : error.message;
  }
  return String(error);
}
