"""Completion providers: keying, caching, replay, HTTP, and the factory.

The HTTP tests run a real loopback server so the wire format (payload,
headers, error handling) is exercised end to end without leaving the host.
"""
import hashlib
import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from lintscore.pipeline import (
    CachingProvider,
    EchoProvider,
    EmptyProvider,
    HttpProvider,
    LineDropProvider,
    PromptRequest,
    Provider,
    ProviderError,
    ReplayCacheProvider,
    ScriptedProvider,
    cache_key,
    make_provider,
)


class TestCacheKey:
    def test_matches_manual_digest(self):
        digest = hashlib.sha256(b"model-x\x003\x00some prompt").hexdigest()
        assert cache_key("model-x", "some prompt", 3) == digest

    def test_distinct_inputs_distinct_keys(self):
        base = cache_key("m", "p", 0)
        assert cache_key("m2", "p", 0) != base
        assert cache_key("m", "p2", 0) != base
        assert cache_key("m", "p", 1) != base

    def test_separator_prevents_field_bleed(self):
        assert cache_key("ab", "c", 0) != cache_key("a", "bc", 0)

    def test_stable_across_calls(self):
        assert cache_key("m", "p", 0) == cache_key("m", "p", 0)


class TestPromptRequest:
    def test_defaults(self):
        request = PromptRequest("explainer", "hello")
        assert request.trial == 0
        assert request.program_source == ""
        assert request.explanation == ""

    def test_frozen(self):
        request = PromptRequest("explainer", "hello")
        with pytest.raises(AttributeError):
            request.trial = 1


class TestDeterministicFlag:
    def test_mocks_are_deterministic(self):
        assert EchoProvider().deterministic
        assert EmptyProvider().deterministic
        assert LineDropProvider(0.5, seed=1).deterministic
        assert ScriptedProvider({}).deterministic

    def test_http_is_not(self):
        assert not HttpProvider("http://127.0.0.1:1/", "m").deterministic

    def test_replay_is_deterministic(self, tmp_path):
        assert ReplayCacheProvider(tmp_path).deterministic

    def test_caching_wrapper_delegates(self, tmp_path):
        wrapped_mock = CachingProvider(EchoProvider(), tmp_path)
        assert wrapped_mock.kind == "mock"
        assert wrapped_mock.model == "mock-echo"
        assert wrapped_mock.deterministic
        wrapped_http = CachingProvider(
            HttpProvider("http://127.0.0.1:1/", "m"), tmp_path
        )
        assert wrapped_http.kind == "http"
        assert not wrapped_http.deterministic


class TestReplayCacheProvider:
    def test_miss_raises(self, tmp_path):
        provider = ReplayCacheProvider(tmp_path)
        request = PromptRequest("explainer", "never recorded", trial=2)
        with pytest.raises(ProviderError, match="replay cache miss"):
            provider.complete(request)
        with pytest.raises(ProviderError, match="trial=2"):
            provider.complete(request)

    def test_seed_then_hit(self, tmp_path):
        provider = ReplayCacheProvider(tmp_path / "fresh")
        key = provider.seed("the prompt", 1, "the answer\n")
        assert key == cache_key("replay", "the prompt", 1)
        assert (tmp_path / "fresh" / f"{key}.txt").read_text() == "the answer\n"
        assert (
            provider.complete(PromptRequest("any", "the prompt", trial=1))
            == "the answer\n"
        )

    def test_trials_are_distinct_recordings(self, tmp_path):
        provider = ReplayCacheProvider(tmp_path)
        provider.seed("p", 0, "zero")
        provider.seed("p", 1, "one")
        assert provider.complete(PromptRequest("r", "p", trial=0)) == "zero"
        assert provider.complete(PromptRequest("r", "p", trial=1)) == "one"

    def test_custom_model_changes_keys(self, tmp_path):
        provider = ReplayCacheProvider(tmp_path, model="mock-echo")
        key = provider.seed("p", 0, "x")
        assert key == cache_key("mock-echo", "p", 0)


class _CountingProvider(Provider):
    kind = "mock"
    model = "counting"

    def __init__(self, answer="counted answer"):
        self.calls = 0
        self.answer = answer

    def complete(self, request):
        self.calls += 1
        return self.answer


class TestCachingProvider:
    def test_write_through_then_disk(self, tmp_path):
        inner = _CountingProvider()
        provider = CachingProvider(inner, tmp_path / "cache")
        request = PromptRequest("explainer", "p")
        assert provider.complete(request) == "counted answer"
        assert inner.calls == 1
        assert provider.complete(request) == "counted answer"
        assert inner.calls == 1
        key = cache_key("counting", "p", 0)
        assert (tmp_path / "cache" / f"{key}.txt").read_text() == "counted answer"

    def test_distinct_trials_miss_separately(self, tmp_path):
        inner = _CountingProvider()
        provider = CachingProvider(inner, tmp_path)
        provider.complete(PromptRequest("r", "p", trial=0))
        provider.complete(PromptRequest("r", "p", trial=1))
        assert inner.calls == 2

    def test_preseeded_file_short_circuits(self, tmp_path):
        inner = _CountingProvider()
        key = cache_key("counting", "p", 0)
        (tmp_path / f"{key}.txt").write_text("from disk")
        provider = CachingProvider(inner, tmp_path)
        assert provider.complete(PromptRequest("r", "p")) == "from disk"
        assert inner.calls == 0

    def test_unicode_round_trip(self, tmp_path):
        inner = _CountingProvider(answer="héllo → wörld\n")
        provider = CachingProvider(inner, tmp_path)
        request = PromptRequest("r", "p")
        assert provider.complete(request) == "héllo → wörld\n"
        assert provider.complete(request) == "héllo → wörld\n"


class _Handler(BaseHTTPRequestHandler):
    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        body = self.rfile.read(length)
        self.server.seen.append(
            {"path": self.path, "headers": dict(self.headers), "body": body}
        )
        if self.path == "/ok":
            payload = {"choices": [{"message": {"content": "hi from server"}}]}
            data = json.dumps(payload).encode()
            self.send_response(200)
        elif self.path == "/notjson":
            data = b"<html>oops</html>"
            self.send_response(200)
        elif self.path == "/badshape":
            data = json.dumps({"choices": []}).encode()
            self.send_response(200)
        else:
            data = b"server exploded"
            self.send_response(500)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture()
def http_server():
    server = HTTPServer(("127.0.0.1", 0), _Handler)
    server.seen = []
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()
    server.server_close()


def _url(server, path):
    host, port = server.server_address
    return f"http://{host}:{port}{path}"


class TestHttpProvider:
    def test_success_parses_content(self, http_server, monkeypatch):
        monkeypatch.delenv("LINT_API_KEY", raising=False)
        provider = HttpProvider(_url(http_server, "/ok"), "model-7", temperature=0.25)
        text = provider.complete(PromptRequest("explainer", "what is up"))
        assert text == "hi from server"
        request = http_server.seen[-1]
        body = json.loads(request["body"])
        assert body == {
            "model": "model-7",
            "messages": [{"role": "user", "content": "what is up"}],
            "temperature": 0.25,
        }
        assert "Authorization" not in request["headers"]
        assert request["headers"]["Content-Type"] == "application/json"

    def test_api_key_header_from_env(self, http_server, monkeypatch):
        monkeypatch.setenv("LINT_API_KEY", "sk-test-123")
        provider = HttpProvider(_url(http_server, "/ok"), "m")
        provider.complete(PromptRequest("explainer", "p"))
        headers = http_server.seen[-1]["headers"]
        assert headers["Authorization"] == "Bearer sk-test-123"

    def test_custom_api_key_env(self, http_server, monkeypatch):
        monkeypatch.setenv("OTHER_KEY", "sk-other")
        monkeypatch.delenv("LINT_API_KEY", raising=False)
        provider = HttpProvider(_url(http_server, "/ok"), "m", api_key_env="OTHER_KEY")
        provider.complete(PromptRequest("explainer", "p"))
        assert http_server.seen[-1]["headers"]["Authorization"] == "Bearer sk-other"

    def test_non_200_raises(self, http_server):
        provider = HttpProvider(_url(http_server, "/boom"), "m")
        with pytest.raises(ProviderError, match="HTTP 500"):
            provider.complete(PromptRequest("explainer", "p"))

    def test_non_json_body_raises(self, http_server):
        provider = HttpProvider(_url(http_server, "/notjson"), "m")
        with pytest.raises(ProviderError, match="malformed"):
            provider.complete(PromptRequest("explainer", "p"))

    def test_missing_choices_raises(self, http_server):
        provider = HttpProvider(_url(http_server, "/badshape"), "m")
        with pytest.raises(ProviderError, match="malformed"):
            provider.complete(PromptRequest("explainer", "p"))

    def test_connection_failure_raises(self):
        provider = HttpProvider("http://127.0.0.1:1/", "m", timeout=2.0)
        with pytest.raises(ProviderError, match="failed"):
            provider.complete(PromptRequest("explainer", "p"))


class TestMakeProvider:
    def test_http_shape(self):
        provider = make_provider(
            {
                "kind": "http",
                "endpoint": "https://api.example/v1/chat",
                "model": "big-model",
                "temperature": 0.5,
                "timeout": 30,
            }
        )
        assert isinstance(provider, HttpProvider)
        assert provider.endpoint == "https://api.example/v1/chat"
        assert provider.model == "big-model"
        assert provider.temperature == 0.5
        assert provider.timeout == 30.0

    def test_http_with_cache_wraps(self, tmp_path):
        provider = make_provider(
            {
                "kind": "http",
                "endpoint": "https://api.example/v1",
                "model": "m",
                "cache": str(tmp_path),
            }
        )
        assert isinstance(provider, CachingProvider)
        assert isinstance(provider.inner, HttpProvider)
        assert provider.kind == "http"

    def test_replay_cache_shape(self, tmp_path):
        provider = make_provider(
            {"kind": "replay-cache", "directory": str(tmp_path), "model": "mock-echo"}
        )
        assert isinstance(provider, ReplayCacheProvider)
        assert provider.model == "mock-echo"
        assert provider.directory == tmp_path

    def test_mock_variants(self):
        assert isinstance(make_provider({"kind": "mock"}), EchoProvider)
        assert isinstance(
            make_provider({"kind": "mock", "mock": "echo"}), EchoProvider
        )
        assert isinstance(
            make_provider({"kind": "mock", "mock": "empty"}), EmptyProvider
        )
        drop = make_provider(
            {"kind": "mock", "mock": "line-drop", "q": 0.2, "seed": 7}
        )
        assert isinstance(drop, LineDropProvider)
        assert drop.q == 0.2
        assert drop.seed == 7
        assert drop.model == "mock-line-drop-q0.2-s7"
        scripted = make_provider(
            {"kind": "mock", "mock": "scripted", "responses": {"verifier": "No."}}
        )
        assert isinstance(scripted, ScriptedProvider)
        assert scripted.responses == {"verifier": "No."}

    def test_mock_with_cache_wraps(self, tmp_path):
        provider = make_provider(
            {"kind": "mock", "mock": "echo", "cache": str(tmp_path)}
        )
        assert isinstance(provider, CachingProvider)
        assert isinstance(provider.inner, EchoProvider)

    def test_unknown_mock_rejected(self):
        with pytest.raises(ProviderError, match="unknown mock"):
            make_provider({"kind": "mock", "mock": "telepathy"})

    def test_unknown_kind_rejected(self):
        with pytest.raises(ProviderError, match="unknown provider kind"):
            make_provider({"kind": "carrier-pigeon"})
        with pytest.raises(ProviderError, match="unknown provider kind"):
            make_provider({})
