"""Access to the service endpoints, in process by default.

With no server URL the app runs inside the calling process and requests
never touch a socket, so one-shot commands pay no startup or network
cost.  Point ``server`` at a running ``ztopics serve`` to share a host
between many clients instead.
"""

from __future__ import annotations

import json
import warnings

import httpx

from .errors import ZeroshotTopicsError


class ServiceError(ZeroshotTopicsError):
    """The service rejected a request; carries the parsed error body."""

    def __init__(self, status_code: int, body: dict):
        self.status_code = status_code
        self.body = body
        detail = body.get("detail") or body.get("error") or body
        if not isinstance(detail, str):
            detail = json.dumps(detail)
        super().__init__(detail)


class ServiceClient:
    def __init__(self, server: str = ""):
        if server:
            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            # in-process transport; imported lazily so remote use
            # does not pull in the app
            with warnings.catch_warnings():
                # starlette warns about the httpx major it was built
                # against; harmless here either way
                warnings.filterwarnings("ignore", message=r"Using `httpx` with")
                from fastapi.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app())

    def close(self) -> None:
        self._client.close()

    def __enter__(self) -> "ServiceClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def _unwrap(self, response: httpx.Response) -> dict:
        if response.status_code >= 400:
            try:
                body = response.json()
            except ValueError:
                body = {"detail": response.text}
            raise ServiceError(response.status_code, body)
        return response.json()

    def get(self, path: str) -> dict:
        return self._unwrap(self._client.get(path))

    def post(self, path: str, payload: dict) -> dict:
        return self._unwrap(self._client.post(path, json=payload))
