import pytest
from fastapi.testclient import TestClient

from snknock.config import ServiceConfig
from snknock.gateway import create_app
from snknock.notify import FileOutboxTransport
from snknock.store import Store


@pytest.fixture
def store(tmp_path):
    s = Store(tmp_path / "data")
    yield s
    s.close()


@pytest.fixture
def outbox(tmp_path):
    return FileOutboxTransport(tmp_path / "outbox")


@pytest.fixture
def make_app(tmp_path):
    """Factory for a wired-up app on a throwaway directory.

    Returns (client, store, outbox, config); keyword overrides go into the
    ServiceConfig. public_base_url matches the test client's host so URLs
    from responses and emails can be fetched directly.
    """
    opened = []

    def factory(transport=None, **overrides):
        base = tmp_path / f"svc{len(opened)}"
        overrides.setdefault("public_base_url", "http://testserver")
        config = ServiceConfig(data_dir=base, **overrides)
        store = Store(base, blob_cap=config.max_upload_bytes)
        if transport is None:
            transport = FileOutboxTransport(base / "outbox")
        app = create_app(config, store=store, transport=transport)
        client = TestClient(app)
        opened.append((client, store, transport, config))
        return opened[-1]

    yield factory
    for _, store, _, _ in opened:
        store.close()
