from __future__ import annotations

import json
import socket
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from tesischat.backend import (
    BackendConfig,
    BackendUnavailable,
    CompletionRequest,
    FinishReason,
    ScriptExhausted,
    always,
    complete,
    contains,
    script_entries_from_config,
    scripted_backend,
)

SECRET = "s3cret-token-abc"


class _Handler(BaseHTTPRequestHandler):
    def log_message(self, *args):
        pass

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length) or b"{}")
        self.server.seen.append({"path": self.path, "body": body, "auth": self.headers.get("Authorization")})

        if self.path == "/auth" and self.headers.get("Authorization") != f"Bearer {SECRET}":
            self.send_response(401)
            self.end_headers()
            return
        if self.path == "/broken":
            self.send_response(500)
            self.end_headers()
            return
        if self.path == "/choices":
            payload = {"choices": [{"message": {"content": "desde choices"}, "finish_reason": "stop"}]}
        else:
            payload = {"text": "hola del servidor", "finish_reason": "stop"}
        data = json.dumps(payload).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


@pytest.fixture()
def http_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    server.seen = []
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


# --- request validation -----------------------------------------------------


def test_request_defaults():
    request = CompletionRequest(prompt="hola")
    assert request.temperature == 0.5
    assert request.max_tokens == 1024


@pytest.mark.parametrize(
    "kwargs",
    [
        {"prompt": ""},
        {"prompt": "x", "temperature": -0.1},
        {"prompt": "x", "temperature": 2.5},
        {"prompt": "x", "max_tokens": 0},
        {"prompt": "x", "stop_sequences": ("a", "b", "c", "d", "e")},
    ],
)
def test_request_validation(kwargs):
    with pytest.raises(ValueError):
        CompletionRequest(**kwargs)


# --- scripted backend -------------------------------------------------------


def test_scripted_returns_canned_text():
    backend = scripted_backend([(always(), "Final Answer: 10")])
    response = complete(CompletionRequest(prompt="cualquier cosa"), backend)
    assert response.text == "Final Answer: 10"
    assert response.finish_reason is FinishReason.END


def test_scripted_truncates_at_stop_sequence():
    backend = scripted_backend(
        [(always(), 'Action: sql_db_query\nAction Input: SELECT 1\nObservation: fake')]
    )
    response = complete(
        CompletionRequest(prompt="p", stop_sequences=("Observation:",)), backend
    )
    assert response.text == "Action: sql_db_query\nAction Input: SELECT 1\n"
    assert response.finish_reason is FinishReason.STOP_SEQUENCE


def test_scripted_predicate_match_and_single_consumption():
    backend = scripted_backend([(contains("tesis"), "ok")])
    assert complete(CompletionRequest(prompt="háblame de tesis"), backend).text == "ok"
    with pytest.raises(ScriptExhausted):
        complete(CompletionRequest(prompt="háblame de tesis"), backend)


def test_scripted_entries_consumed_in_order():
    backend = scripted_backend([(always(), "primera"), (always(), "segunda")])
    assert complete(CompletionRequest(prompt="a"), backend).text == "primera"
    assert complete(CompletionRequest(prompt="b"), backend).text == "segunda"


def test_scripted_skips_non_matching_entries():
    backend = scripted_backend([(contains("zzz"), "nunca"), (always(), "sí")])
    assert complete(CompletionRequest(prompt="hola"), backend).text == "sí"


def test_scripted_is_repeatable():
    def run():
        backend = scripted_backend([(always(), "uno"), (always(), "dos")])
        return [complete(CompletionRequest(prompt="p"), backend).text for _ in range(2)]

    assert run() == run() == ["uno", "dos"]


def test_scripted_requires_entries():
    with pytest.raises(ValueError):
        scripted_backend([])


def test_script_entries_from_config():
    entries = script_entries_from_config(
        [{"contains": "abc", "response": "r1"}, {"any": True, "response": "r2"}]
    )
    backend = scripted_backend(entries)
    assert complete(CompletionRequest(prompt="xyz"), backend).text == "r2"
    assert complete(CompletionRequest(prompt="abc"), backend).text == "r1"
    with pytest.raises(ValueError):
        script_entries_from_config([{"response": "sin matcher"}])


def test_backend_config_validation():
    with pytest.raises(ValueError):
        BackendConfig(kind="weird")
    with pytest.raises(ValueError):
        BackendConfig(kind="remote")


# --- remote backend ---------------------------------------------------------


def test_remote_success_and_payload_shape(http_server):
    backend = BackendConfig(
        kind="remote",
        endpoint=f"http://127.0.0.1:{http_server.server_port}/ok",
        model_name="modelo-x",
    )
    response = complete(
        CompletionRequest(prompt="hola", temperature=0.5, stop_sequences=("FIN",)), backend
    )
    assert response.text == "hola del servidor"
    assert response.latency >= 0
    body = http_server.seen[0]["body"]
    assert body["model"] == "modelo-x"
    assert body["prompt"] == "hola"
    assert body["temperature"] == 0.5
    assert body["stop"] == ["FIN"]


def test_remote_parses_chat_style_choices(http_server):
    backend = BackendConfig(
        kind="remote", endpoint=f"http://127.0.0.1:{http_server.server_port}/choices"
    )
    assert complete(CompletionRequest(prompt="p"), backend).text == "desde choices"


def test_remote_sends_credential_from_env(http_server, monkeypatch):
    monkeypatch.setenv("TESIS_API_KEY", SECRET)
    backend = BackendConfig(
        kind="remote",
        endpoint=f"http://127.0.0.1:{http_server.server_port}/auth",
        credential_ref="TESIS_API_KEY",
    )
    assert complete(CompletionRequest(prompt="p"), backend).text == "hola del servidor"
    assert http_server.seen[0]["auth"] == f"Bearer {SECRET}"


def test_remote_invalid_credential_fails_without_leaking(http_server, monkeypatch):
    monkeypatch.setenv("TESIS_API_KEY", "wrong-" + SECRET)
    backend = BackendConfig(
        kind="remote",
        endpoint=f"http://127.0.0.1:{http_server.server_port}/auth",
        credential_ref="TESIS_API_KEY",
    )
    with pytest.raises(BackendUnavailable) as excinfo:
        complete(CompletionRequest(prompt="p"), backend)
    message = str(excinfo.value)
    assert "401" in message
    assert SECRET not in message


def test_remote_missing_credential_names_the_variable(monkeypatch):
    monkeypatch.delenv("NO_SUCH_KEY_VAR", raising=False)
    backend = BackendConfig(
        kind="remote", endpoint="http://127.0.0.1:1/x", credential_ref="NO_SUCH_KEY_VAR"
    )
    with pytest.raises(BackendUnavailable) as excinfo:
        complete(CompletionRequest(prompt="p"), backend)
    assert "NO_SUCH_KEY_VAR" in str(excinfo.value)


def test_remote_retries_transport_errors_then_fails(monkeypatch):
    monkeypatch.setattr("tesischat.backend._BACKOFF_SECONDS", 0.001)
    backend = BackendConfig(kind="remote", endpoint=f"http://127.0.0.1:{_free_port()}/x")
    with pytest.raises(BackendUnavailable) as excinfo:
        complete(CompletionRequest(prompt="p"), backend)
    assert "3 attempts" in str(excinfo.value)


def test_remote_retries_server_errors(http_server, monkeypatch):
    monkeypatch.setattr("tesischat.backend._BACKOFF_SECONDS", 0.001)
    backend = BackendConfig(
        kind="remote", endpoint=f"http://127.0.0.1:{http_server.server_port}/broken"
    )
    with pytest.raises(BackendUnavailable):
        complete(CompletionRequest(prompt="p"), backend)
    assert len(http_server.seen) == 3
