"""Text-completion backends behind one contract.

Two kinds: a remote HTTP endpoint (JSON POST, model-agnostic field names)
and a scripted backend that replays canned responses for tests. The agent
only ever sees `complete`, so anything passing against the scripted
backend exercises the same code paths as production.
"""

from __future__ import annotations

import os
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

import requests

MAX_STOP_SEQUENCES = 4
DEFAULT_TEMPERATURE = 0.5
DEFAULT_MAX_TOKENS = 1024

_TRANSPORT_RETRIES = 2  # retries after the first attempt, transport errors only
_BACKOFF_SECONDS = 0.25
_REQUEST_TIMEOUT = 60.0


class BackendUnavailable(RuntimeError):
    """The completion endpoint cannot be used (network, auth, bad payload)."""


class ScriptExhausted(RuntimeError):
    """No scripted entry matches the prompt; the test harness is wrong."""


class FinishReason(str, Enum):
    STOP_SEQUENCE = "stop_sequence"
    LENGTH = "length"
    END = "end"


@dataclass(frozen=True)
class CompletionRequest:
    prompt: str
    temperature: float = DEFAULT_TEMPERATURE
    max_tokens: int = DEFAULT_MAX_TOKENS
    stop_sequences: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.prompt:
            raise ValueError("prompt must be non-empty")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must be within [0, 2]")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be positive")
        if len(self.stop_sequences) > MAX_STOP_SEQUENCES:
            raise ValueError(f"at most {MAX_STOP_SEQUENCES} stop sequences")
        object.__setattr__(self, "stop_sequences", tuple(self.stop_sequences))


@dataclass(frozen=True)
class CompletionResponse:
    text: str
    finish_reason: FinishReason
    latency: float


Matcher = Callable[[str], bool]


@dataclass
class ScriptEntry:
    matcher: Matcher
    response: str
    consumed: bool = False


@dataclass
class BackendConfig:
    """Which backend to talk to and how.

    Remote configs carry only the *name* of the environment variable that
    holds the API key, never the key itself.
    """

    kind: str  # "remote" | "scripted"
    model_name: str = "default"
    endpoint: str = ""
    credential_ref: str = ""
    script: list[ScriptEntry] = field(default_factory=list)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.kind not in ("remote", "scripted"):
            raise ValueError(f"unknown backend kind: {self.kind!r}")
        if self.kind == "remote" and not self.endpoint:
            raise ValueError("remote backend requires an endpoint URL")


def contains(fragment: str) -> Matcher:
    """Matcher factory: prompt contains the fragment."""
    return lambda prompt: fragment in prompt


def always() -> Matcher:
    return lambda prompt: True


def scripted_backend(
    script: Iterable[ScriptEntry | tuple[Matcher, str]], model_name: str = "scripted"
) -> BackendConfig:
    """Build a scripted backend from (matcher, response) pairs.

    At call time the first not-yet-consumed entry whose matcher accepts the
    prompt is consumed and its response returned; each entry fires at most
    once.
    """
    entries = [
        entry if isinstance(entry, ScriptEntry) else ScriptEntry(entry[0], entry[1])
        for entry in script
    ]
    if not entries:
        raise ValueError("scripted backend requires at least one entry")
    return BackendConfig(kind="scripted", model_name=model_name, script=entries)


def script_entries_from_config(raw_entries: Sequence[dict]) -> list[ScriptEntry]:
    """Build script entries from config-file records.

    Each record is {"response": text} plus either {"contains": fragment}
    or {"any": true}.
    """
    entries: list[ScriptEntry] = []
    for record in raw_entries:
        if "contains" in record:
            matcher = contains(str(record["contains"]))
        elif record.get("any"):
            matcher = always()
        else:
            raise ValueError(f"script entry needs 'contains' or 'any': {record!r}")
        entries.append(ScriptEntry(matcher, str(record["response"])))
    return entries


def complete(request: CompletionRequest, backend: BackendConfig) -> CompletionResponse:
    """Run one completion and truncate it at the first matched stop sequence."""
    start = time.perf_counter()
    if backend.kind == "scripted":
        raw = _next_scripted(backend, request.prompt)
        server_reason = FinishReason.END
    else:
        raw, server_reason = _call_remote(request, backend)
    text, truncated = _truncate_at_stop(raw, request.stop_sequences)
    reason = FinishReason.STOP_SEQUENCE if truncated else server_reason
    return CompletionResponse(text=text, finish_reason=reason, latency=time.perf_counter() - start)


def _truncate_at_stop(text: str, stop_sequences: Sequence[str]) -> tuple[str, bool]:
    cut = min(
        (idx for idx in (text.find(stop) for stop in stop_sequences if stop) if idx != -1),
        default=-1,
    )
    if cut == -1:
        return text, False
    return text[:cut], True


def _next_scripted(backend: BackendConfig, prompt: str) -> str:
    with backend._lock:
        for entry in backend.script:
            if not entry.consumed and entry.matcher(prompt):
                entry.consumed = True
                return entry.response
    raise ScriptExhausted(
        "no unconsumed scripted entry matches the prompt; fix the test script"
    )


def _resolve_credential(backend: BackendConfig) -> str | None:
    if not backend.credential_ref:
        return None
    key = os.environ.get(backend.credential_ref)
    if key is None:
        raise BackendUnavailable(
            f"credential environment variable {backend.credential_ref} is not set"
        )
    return key


def _call_remote(request: CompletionRequest, backend: BackendConfig) -> tuple[str, FinishReason]:
    headers = {"Content-Type": "application/json"}
    key = _resolve_credential(backend)
    if key:
        headers["Authorization"] = f"Bearer {key}"
    payload = {
        "model": backend.model_name,
        "prompt": request.prompt,
        "temperature": request.temperature,
        "max_tokens": request.max_tokens,
        "stop": list(request.stop_sequences),
    }

    attempts = _TRANSPORT_RETRIES + 1
    last_error = ""
    for attempt in range(1, attempts + 1):
        try:
            response = requests.post(
                backend.endpoint, json=payload, headers=headers, timeout=_REQUEST_TIMEOUT
            )
        except requests.RequestException as exc:
            last_error = exc.__class__.__name__
            if attempt < attempts:
                time.sleep(_BACKOFF_SECONDS * 2 ** (attempt - 1))
            continue
        if response.status_code in (401, 403):
            raise BackendUnavailable(
                f"endpoint rejected the credential (HTTP {response.status_code}) "
                f"on attempt {attempt}"
            )
        if 500 <= response.status_code < 600:
            last_error = f"HTTP {response.status_code}"
            if attempt < attempts:
                time.sleep(_BACKOFF_SECONDS * 2 ** (attempt - 1))
            continue
        if response.status_code != 200:
            raise BackendUnavailable(
                f"endpoint returned HTTP {response.status_code} on attempt {attempt}"
            )
        return _parse_remote_payload(response)

    raise BackendUnavailable(
        f"endpoint unreachable after {attempts} attempts (last error: {last_error})"
    )


def _parse_remote_payload(response: requests.Response) -> tuple[str, FinishReason]:
    try:
        data = response.json()
    except ValueError:
        raise BackendUnavailable("endpoint returned a non-JSON payload") from None

    text: str | None = None
    raw_reason = ""
    if isinstance(data, dict):
        if isinstance(data.get("text"), str):
            text = data["text"]
            raw_reason = str(data.get("finish_reason", ""))
        elif isinstance(data.get("completion"), str):
            text = data["completion"]
        elif data.get("choices"):
            choice = data["choices"][0]
            if isinstance(choice, dict):
                message = choice.get("message")
                if isinstance(choice.get("text"), str):
                    text = choice["text"]
                elif isinstance(message, dict) and isinstance(message.get("content"), str):
                    text = message["content"]
                raw_reason = str(choice.get("finish_reason", ""))
    if text is None:
        raise BackendUnavailable("endpoint returned an unrecognized completion payload")
    reason = FinishReason.LENGTH if raw_reason == "length" else FinishReason.END
    return text, reason
