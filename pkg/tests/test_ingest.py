import base64
import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from mvpdetect.errors import (
    BackendTimeout,
    BadResponse,
    ConfigError,
    DuplicateTranscript,
    NotFound,
    ParseError,
    TranscriptionFailed,
)
from mvpdetect.ingest import (
    BackendConfig,
    Transcript,
    TranscriptStore,
    load_store,
    perturb_words,
    read_manifest,
    save_store,
    transcribe,
    transcribe_all,
    write_manifest,
    derive_rng,
)


def _write(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path


def test_load_store(tmp_path):
    p = _write(tmp_path / "t.jsonl", [
        json.dumps({"audio_id": "a1", "asr_id": "DS0", "text": "a sight for sore eyes"}),
        json.dumps({"audio_id": "a1", "asr_id": "DS1", "text": "i wish you live"}),
        json.dumps({"audio_id": "a2", "asr_id": "DS0", "text": "héllo"}),
    ])
    store = load_store(p)
    assert len(store) == 3
    assert store[("a2", "DS0")].text == "héllo"
    assert set(store.for_audio("a1")) == {"DS0", "DS1"}


def test_load_store_errors(tmp_path):
    p = _write(tmp_path / "t.jsonl", [
        json.dumps({"audio_id": "a1", "asr_id": "DS0", "text": "x"}),
        json.dumps({"audio_id": "a1", "asr_id": "DS1"}),
    ])
    with pytest.raises(ParseError) as exc:
        load_store(p)
    assert exc.value.line == 2

    _write(p, ["{not json"])
    with pytest.raises(ParseError):
        load_store(p)

    _write(p, [json.dumps({"audio_id": "a1", "asr_id": "DS0", "text": "x"})] * 2)
    with pytest.raises(DuplicateTranscript):
        load_store(p)


def test_store_round_trip(tmp_path):
    store = TranscriptStore([Transcript("a", "X", "one"), Transcript("a", "Y", "two \"quoted\""),
                             Transcript("b", "X", "ünïcode")])
    save_store(store, tmp_path / "s.jsonl")
    assert load_store(tmp_path / "s.jsonl") == store
    with pytest.raises(DuplicateTranscript):
        TranscriptStore([Transcript("a", "X", "1"), Transcript("a", "X", "2")])


def test_manifest_round_trip(tmp_path):
    rows = [("a1", "benign"), ("a2", "ae")]
    write_manifest(rows, tmp_path / "m.csv")
    assert read_manifest(tmp_path / "m.csv") == rows
    (tmp_path / "bad.csv").write_text("audio_id,label\na1,maybe\n")
    with pytest.raises(ParseError):
        read_manifest(tmp_path / "bad.csv")


def test_perturb_words():
    assert perturb_words("I wish you wouldn't.", 0.0, derive_rng(0)) == "i wish you wouldn't"
    text = " ".join(["word"] * 200)
    out = perturb_words(text, 0.5, derive_rng(1)).split()
    changed = sum(w != "word" for w in out)
    assert len(out) == 200 and 60 < changed < 140


@pytest.fixture
def ref_store():
    return TranscriptStore([Transcript("a1", "reference", "open the front door now please"),
                            Transcript("a1", "DS0", "open the front door now please"),
                            Transcript("a1", "DS1", "open the front door")])


def test_file_and_mock_backends(ref_store):
    file_b = BackendConfig("DS1", "file", store=ref_store)
    assert transcribe(file_b, "a1").text == "open the front door"
    with pytest.raises(NotFound):
        transcribe(file_b, "missing")

    exact = BackendConfig("M", "mock", store=ref_store, wer=0.0, seed=3)
    assert transcribe(exact, "a1").text == "open the front door now please"
    noisy = BackendConfig("M", "mock", store=ref_store, wer=0.5, seed=3)
    assert transcribe(noisy, "a1") == transcribe(noisy, "a1")
    with pytest.raises(NotFound):
        transcribe(noisy, "missing")


def test_backend_config_validation():
    with pytest.raises(ConfigError):
        BackendConfig("X", "ftp", path="x")
    with pytest.raises(ConfigError):
        BackendConfig("X", "http")
    with pytest.raises(ConfigError):
        BackendConfig("X", "http", endpoint="http://x", timeout_s=0)
    with pytest.raises(ConfigError):
        BackendConfig("X", "http", endpoint="http://x", retries=-1)
    with pytest.raises(ConfigError):
        BackendConfig.from_dict({"asr_id": "X", "kind": "file", "path": "p", "colour": "red"})


class _Handler(BaseHTTPRequestHandler):
    def log_message(self, *args):
        pass

    def do_POST(self):
        server = self.server
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        server.requests.append((dict(self.headers), body))
        status, payload, delay = server.responses[min(len(server.requests) - 1, len(server.responses) - 1)]
        if delay:
            time.sleep(delay)
        data = payload.encode() if isinstance(payload, str) else json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


@pytest.fixture
def http_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    server.requests = []
    server.responses = [(200, {"text": "ok"}, 0)]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()
    server.server_close()


def _http_backend(server, **kw):
    host, port = server.server_address
    return BackendConfig("GCS", "http", endpoint=f"http://{host}:{port}/asr", backoff_s=0.01, **kw)


def test_http_contract(http_server):
    http_server.responses = [(200, {"text": "I wish you wouldn't."}, 0)]
    b = _http_backend(http_server, auth_header="X-Api-Key", auth_value="secret")
    tr = transcribe(b, "a1", b"\x00\x01RIFF")
    assert tr == Transcript("a1", "GCS", "I wish you wouldn't.")
    headers, body = http_server.requests[0]
    assert body == {"audio_id": "a1", "audio_b64": base64.b64encode(b"\x00\x01RIFF").decode()}
    assert headers["X-Api-Key"] == "secret"


def test_http_retries_then_bad_response(http_server):
    http_server.responses = [(500, {"error": "boom"}, 0)]
    with pytest.raises(BadResponse):
        transcribe(_http_backend(http_server, retries=2), "a1", b"x")
    assert len(http_server.requests) == 3


def test_http_recovers_after_transient_error(http_server):
    http_server.responses = [(503, {}, 0), (200, {"text": "fine"}, 0)]
    assert transcribe(_http_backend(http_server, retries=1), "a1", b"x").text == "fine"


@pytest.mark.parametrize("payload", [{"txt": "x"}, {"text": 3}, "not json"])
def test_http_schema_violation(http_server, payload):
    http_server.responses = [(200, payload, 0)]
    with pytest.raises(BadResponse):
        transcribe(_http_backend(http_server, retries=0), "a1", b"x")


def test_http_client_error_not_retried(http_server):
    http_server.responses = [(404, {}, 0)]
    with pytest.raises(BadResponse):
        transcribe(_http_backend(http_server, retries=3), "a1", b"x")
    assert len(http_server.requests) == 1


def test_http_timeout(http_server):
    http_server.responses = [(200, {"text": "late"}, 0.5)]
    with pytest.raises(BackendTimeout):
        transcribe(_http_backend(http_server, retries=0, timeout_s=0.1), "a1", b"x")


def test_http_requires_audio(http_server):
    with pytest.raises(BadResponse):
        transcribe(_http_backend(http_server), "a1", None)


def test_transcribe_all(ref_store):
    backends = [BackendConfig("DS0", "file", store=ref_store), BackendConfig("DS1", "file", store=ref_store),
                BackendConfig("M", "mock", store=ref_store)]
    out = transcribe_all(backends, "a1")
    assert set(out) == {"DS0", "DS1", "M"}
    assert transcribe_all([], "a1") == {}


def test_transcribe_all_partial_failure(ref_store):
    backends = [BackendConfig("DS0", "file", store=ref_store), BackendConfig("DS1", "file", store=ref_store),
                BackendConfig("GCS", "file", store=ref_store)]
    with pytest.raises(TranscriptionFailed) as exc:
        transcribe_all(backends, "a1")
    assert set(exc.value.failures) == {"GCS"}
    assert isinstance(exc.value.failures["GCS"], NotFound)
    assert set(exc.value.results) == {"DS0", "DS1"}


def test_transcribe_all_rejects_duplicate_ids(ref_store):
    b = BackendConfig("DS0", "file", store=ref_store)
    with pytest.raises(ConfigError):
        transcribe_all([b, b], "a1")


def test_transcribe_all_runs_in_parallel(ref_store):
    backends = [BackendConfig(f"M{i}", "mock", store=ref_store, latency_s=0.1) for i in range(4)]
    t0 = time.perf_counter()
    transcribe_all(backends, "a1")
    assert time.perf_counter() - t0 < 0.3
