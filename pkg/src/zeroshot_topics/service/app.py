"""App factory.

Domain failures become HTTP 400 with a machine-readable error class name;
anything else keeps FastAPI's defaults.  The service holds no state, so
one process can serve many unrelated runs.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import MissingStoreKeysError, ZeroshotTopicsError
from .routes import router


def _bad_request(error: str, detail: str, extra: dict | None = None) -> JSONResponse:
    body = {"error": error, "detail": detail}
    if extra:
        body.update(extra)
    return JSONResponse(status_code=400, content=body)


def create_app() -> FastAPI:
    app = FastAPI(title="zeroshot-topics", version=__version__)
    app.include_router(router)

    @app.exception_handler(MissingStoreKeysError)
    async def missing_keys(_: Request, exc: MissingStoreKeysError) -> JSONResponse:
        return _bad_request(
            "MissingStoreKeysError",
            str(exc),
            {
                "missing_keys": list(exc.missing_keys)[:10],
                "missing_count": len(exc.missing_keys),
                "manifest_path": str(exc.manifest_path),
            },
        )

    @app.exception_handler(ZeroshotTopicsError)
    async def domain_error(_: Request, exc: ZeroshotTopicsError) -> JSONResponse:
        return _bad_request(type(exc).__name__, str(exc))

    @app.exception_handler(FileNotFoundError)
    async def missing_file(_: Request, exc: FileNotFoundError) -> JSONResponse:
        return _bad_request("FileNotFoundError", str(exc))

    return app
