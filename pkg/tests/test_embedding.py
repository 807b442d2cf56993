"""Embedding providers, vector math, and kernel backend parity."""

import json
import math
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from streamtopics import _purekernels, kernels
from streamtopics.embedding import (
    HashedEmbedder,
    RemoteEmbedder,
    RemoteEmbedderError,
    RemoteProtocolError,
    centroid_of,
    cosine,
    is_empty,
)

# Independent reimplementation used as the hashing oracle.
def oracle_fnv1a64(data: bytes) -> int:
    h = 14695981039346656037
    for b in data:
        h ^= b
        h = (h * 1099511628211) % (1 << 64)
    return h


BACKENDS = [_purekernels]
if kernels.BACKEND == "compiled":
    from streamtopics import _speedups

    BACKENDS.append(_speedups)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
class TestKernels:
    def test_fnv_known_value(self, impl):
        # frozen from the oracle above before the kernels were written
        assert impl.fnv1a64(b"x") == 0xAF63F54C86021707

    def test_fnv_matches_oracle(self, impl):
        for token in ["", "a", "stay", "home", "covid", "été"]:
            data = token.encode("utf-8")
            assert impl.fnv1a64(data) == oracle_fnv1a64(data)

    def test_accumulate_single_token(self, impl):
        # fnv1a64("x") has bit 63 set (negative sign) and index 3 at dim 4
        acc = impl.accumulate_tokens(["x"], 4)
        assert acc.tolist() == [0.0, 0.0, 0.0, -1.0]

    def test_nearest_centroid_first_wins_ties(self, impl):
        point = np.array([1.0, 0.0])
        centroids = np.stack([point, np.array([0.0, 1.0]), point])
        idx, dist = impl.nearest_centroid(point, centroids)
        assert idx == 0
        assert dist == pytest.approx(0.0, abs=1e-12)

    def test_distances_to(self, impl):
        vectors = np.stack([np.array([1.0, 0.0]), np.array([0.0, 1.0])])
        dists = impl.distances_to(vectors, np.array([1.0, 0.0]))
        assert dists.tolist() == [0.0, 1.0]


@pytest.mark.skipif(kernels.BACKEND != "compiled", reason="compiled backend not built")
def test_backends_bit_identical_on_embeddings():
    embedder = HashedEmbedder(dim=64)
    tokens = ["stay", "home", "stay", "pandemic", "people"]
    pure = _purekernels.accumulate_tokens(tokens, 64)
    from streamtopics import _speedups

    fast = _speedups.accumulate_tokens(tokens, 64)
    assert pure.tobytes() == fast.tobytes()
    assert embedder.embed(tokens).tobytes() == (fast / math.sqrt(float(np.dot(fast, fast)))).tobytes()


class TestHashedEmbedder:
    def test_empty_tokens_give_empty_vector(self):
        v = HashedEmbedder(dim=8).embed([])
        assert is_empty(v)
        assert v.shape == (8,)

    def test_repeated_token_keeps_direction(self):
        embedder = HashedEmbedder(dim=16)
        one = embedder.embed(["a"])
        two = embedder.embed(["a", "a"])
        assert np.allclose(one, two)

    def test_single_token_dim4(self):
        v = HashedEmbedder(dim=4).embed(["x"])
        assert v.tolist() == [0.0, 0.0, 0.0, -1.0]

    def test_unit_norm(self):
        v = HashedEmbedder(dim=64).embed(["stay", "home", "people", "pandemic"])
        assert math.isclose(float(np.dot(v, v)), 1.0, abs_tol=1e-9)

    @given(st.lists(st.text(alphabet="abcdefgh", min_size=1, max_size=6), min_size=1, max_size=12))
    def test_permutation_invariant(self, tokens):
        embedder = HashedEmbedder(dim=32)
        forward = embedder.embed(tokens)
        backward = embedder.embed(list(reversed(tokens)))
        assert forward.tobytes() == backward.tobytes()


class TestVectorMath:
    def test_cosine_identity(self):
        v = HashedEmbedder(dim=64).embed(["hello", "world"])
        assert cosine(v, v) == pytest.approx(1.0, abs=1e-9)

    def test_cosine_orthogonal(self):
        assert cosine(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_cosine_hand_value(self):
        assert cosine(np.array([0.6, 0.8]), np.array([0.8, 0.6])) == pytest.approx(0.96, abs=1e-12)

    def test_cosine_symmetry(self):
        a = HashedEmbedder(dim=32).embed(["one", "two"])
        b = HashedEmbedder(dim=32).embed(["three", "four"])
        assert cosine(a, b) == pytest.approx(cosine(b, a), abs=1e-12)

    def test_cosine_rejects_empty(self):
        with pytest.raises(ValueError):
            cosine(np.zeros(4), np.array([1.0, 0.0, 0.0, 0.0]))

    def test_cosine_rejects_dim_mismatch(self):
        with pytest.raises(ValueError):
            cosine(np.array([1.0, 0.0]), np.array([1.0, 0.0, 0.0]))

    def test_centroid_single(self):
        v = np.array([0.0, 1.0])
        assert centroid_of([v]).tolist() == [0.0, 1.0]

    def test_centroid_two_orthogonal(self):
        c = centroid_of([np.array([1.0, 0.0]), np.array([0.0, 1.0])])
        assert c == pytest.approx(np.array([math.sqrt(2) / 2, math.sqrt(2) / 2]), abs=1e-12)

    def test_centroid_cancellation_is_empty(self):
        c = centroid_of([np.array([1.0, 0.0]), np.array([-1.0, 0.0])])
        assert is_empty(c)

    def test_centroid_empty_list_rejected(self):
        with pytest.raises(ValueError):
            centroid_of([])

    def test_centroid_of_copies_is_same(self):
        v = HashedEmbedder(dim=64).embed(["alpha", "beta"])
        c = centroid_of([v] * 5)
        assert np.allclose(c, v, atol=1e-9)


class _StubHandler(BaseHTTPRequestHandler):
    dim = 6
    fail_first = 0
    malform = False
    calls: list = []

    def log_message(self, *args):
        pass

    def do_GET(self):
        if self.path == "/healthz":
            self.send_response(200)
            self.end_headers()
            self.wfile.write(b"ok")
        else:
            self.send_response(404)
            self.end_headers()

    def do_POST(self):
        cls = type(self)
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        cls.calls.append(body["texts"])
        if cls.fail_first > 0:
            cls.fail_first -= 1
            self.send_response(503)
            self.end_headers()
            return
        if cls.malform:
            payload = json.dumps({"dim": cls.dim, "vectors": []}).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.end_headers()
            self.wfile.write(payload)
            return
        vectors = []
        for text in body["texts"]:
            raw = np.zeros(cls.dim)
            raw[hash(text) % cls.dim] = 1.0
            vectors.append(raw.tolist())
        payload = json.dumps({"dim": cls.dim, "vectors": vectors}).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        self.wfile.write(payload)


@pytest.fixture
def stub_server():
    _StubHandler.calls = []
    _StubHandler.fail_first = 0
    _StubHandler.malform = False
    server = HTTPServer(("127.0.0.1", 0), _StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


class TestRemoteEmbedder:
    def test_healthz(self, stub_server):
        assert RemoteEmbedder(stub_server).healthy()

    def test_dim_discovered_via_empty_batch(self, stub_server):
        assert RemoteEmbedder(stub_server).dim == 6

    def test_order_and_batching(self, stub_server):
        client = RemoteEmbedder(stub_server)
        items = [([f"t{i}"], f"text {i}") for i in range(70)]
        vectors = client.embed_many(items)
        assert len(vectors) == 70
        # batches capped at 32 and order preserved within/across batches
        assert all(len(texts) <= 32 for texts in _StubHandler.calls)
        direct = client.embed(["t3"], "text 3")
        assert np.allclose(vectors[3], direct)

    def test_empty_tokens_skip_service(self, stub_server):
        client = RemoteEmbedder(stub_server)
        vectors = client.embed_many([([], "ignored"), (["a"], "kept")])
        assert is_empty(vectors[0])
        assert not is_empty(vectors[1])
        assert ["kept"] in _StubHandler.calls
        assert all("ignored" not in texts for texts in _StubHandler.calls)

    def test_retries_then_succeeds(self, stub_server):
        _StubHandler.fail_first = 2
        client = RemoteEmbedder(stub_server, backoff=0.01)
        vec = client.embed(["a"], "a")
        assert not is_empty(vec)

    def test_unreachable_raises_retriable(self):
        client = RemoteEmbedder("http://127.0.0.1:1", timeout=0.2, backoff=0.01)
        with pytest.raises(RemoteEmbedderError):
            client.embed(["a"], "a")

    def test_malformed_reply_is_fatal(self, stub_server, monkeypatch):
        client = RemoteEmbedder(stub_server)
        monkeypatch.setattr(_StubHandler, "malform", True)
        with pytest.raises(RemoteProtocolError, match="shape mismatch"):
            client.embed(["a"], "a")
