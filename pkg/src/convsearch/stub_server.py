"""Deterministic stand-in for the external rewrite/rerank model service.

Implements the http plugin wire format so the pipeline can be exercised
end-to-end without any neural model:

  POST /rewrite  {history, current}            -> {"rewrite": current uppercased}
  POST /rerank   {query, passages:[{id,text}]} -> {"order": ids reversed}

Run standalone: python3 -m convsearch.stub_server --port 8099
"""
from fastapi import FastAPI
from pydantic import BaseModel


class RewriteIn(BaseModel):
    history: list[str]
    current: str


class PassageIn(BaseModel):
    id: str
    text: str


class RerankIn(BaseModel):
    query: str
    passages: list[PassageIn]


def create_stub_app() -> FastAPI:
    app = FastAPI(title="convsearch-stub-models")

    @app.post("/rewrite")
    def rewrite(req: RewriteIn):
        return {"rewrite": req.current.upper()}

    @app.post("/rerank")
    def rerank(req: RerankIn):
        return {"order": [p.id for p in reversed(req.passages)]}

    return app


def main():
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--port", type=int, default=8099)
    parser.add_argument("--host", default="127.0.0.1")
    args = parser.parse_args()
    uvicorn.run(create_stub_app(), host=args.host, port=args.port)


if __name__ == "__main__":
    main()
