"""Query rewriting stage. Neural rewriters stay out-of-process behind the
http plugin; the deterministic defaults keep the pipeline testable."""
import httpx

HISTORY_SEPARATOR = " ||| "


class RewriteServiceError(Exception):
    """The external rewrite service failed (timeout, non-2xx, bad payload)."""


class PassthroughRewriter:
    name = "passthrough"

    def rewrite(self, history: list[str], current: str) -> str:
        return current


class ConcatRewriter:
    """History joined with the model-server separator, current turn last."""

    name = "concat"

    def rewrite(self, history: list[str], current: str) -> str:
        return HISTORY_SEPARATOR.join([*history, current])


class HttpRewriter:
    """POSTs {history, current} to an external service, expects {rewrite}."""

    name = "http"

    def __init__(self, url: str, timeout: float = 5.0):
        self.url = url
        self.timeout = timeout

    def rewrite(self, history: list[str], current: str) -> str:
        try:
            resp = httpx.post(
                self.url,
                json={"history": history, "current": current},
                timeout=self.timeout,
            )
        except httpx.HTTPError as exc:
            raise RewriteServiceError(f"rewrite service unreachable: {exc}") from exc
        if resp.status_code // 100 != 2:
            raise RewriteServiceError(f"rewrite service returned {resp.status_code}")
        try:
            rewritten = resp.json()["rewrite"]
        except (ValueError, KeyError) as exc:
            raise RewriteServiceError(f"bad rewrite payload: {exc}") from exc
        if not isinstance(rewritten, str):
            raise RewriteServiceError("rewrite payload is not a string")
        return rewritten


def make_rewriter(name: str, url: str | None = None, timeout: float = 5.0):
    if name == "passthrough":
        return PassthroughRewriter()
    if name == "concat":
        return ConcatRewriter()
    if name == "http":
        if not url:
            raise ValueError("http rewriter requires a url")
        return HttpRewriter(url, timeout)
    raise ValueError(f"unknown rewriter plugin: {name!r}")
