import json
import random
import socket
import threading
import time
from pathlib import Path

import pytest
import uvicorn

from convsearch.index import build_index, read_jsonl

FIXTURES = Path(__file__).parent / "fixtures"

# vocabulary for generated corpora; disjoint from the stopword list
GENERATED_VOCAB = [f"term{i:02d}" for i in range(50)]


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def toy_docs():
    docs = {}
    with open(FIXTURES / "toy.jsonl", encoding="utf-8") as fh:
        for line in fh:
            obj = json.loads(line)
            docs[obj["id"]] = obj["contents"]
    return docs


@pytest.fixture(scope="session")
def toy_index():
    return build_index(read_jsonl(str(FIXTURES / "toy.jsonl")))


@pytest.fixture(scope="session")
def corpus_docs():
    docs = {}
    with open(FIXTURES / "corpus.jsonl", encoding="utf-8") as fh:
        for line in fh:
            obj = json.loads(line)
            docs[obj["id"]] = obj["contents"]
    return docs


@pytest.fixture(scope="session")
def corpus_index():
    return build_index(read_jsonl(str(FIXTURES / "corpus.jsonl")))


def random_corpus(rng: random.Random, max_docs: int = 200, vocab_size: int = 50) -> dict[str, str]:
    """Random doc_id -> text map over the generated vocabulary."""
    vocab = GENERATED_VOCAB[:vocab_size]
    n = rng.randint(2, max_docs)
    return {
        f"doc{i:03d}": " ".join(rng.choices(vocab, k=rng.randint(1, 30))) for i in range(n)
    }


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


class ServerThread:
    def __init__(self, app, port: int):
        self.port = port
        config = uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
        self.server = uvicorn.Server(config)
        self.thread = threading.Thread(target=self.server.run, daemon=True)

    def start(self):
        self.thread.start()
        deadline = time.time() + 10
        while not self.server.started:
            if time.time() > deadline:
                raise RuntimeError("uvicorn server did not start")
            time.sleep(0.02)
        return self

    def stop(self):
        self.server.should_exit = True
        self.thread.join(timeout=5)


@pytest.fixture(scope="session")
def stub_server():
    """The bundled rewrite/rerank stub, served over real HTTP."""
    from convsearch.stub_server import create_stub_app

    server = ServerThread(create_stub_app(), free_port()).start()
    yield f"http://127.0.0.1:{server.port}"
    server.stop()
