"""Sliding-window passage chunking with character spans back into raw text."""
from dataclasses import dataclass

from .tokenization import token_spans


@dataclass(frozen=True)
class Passage:
    passage_id: str  # "<doc_id>#<chunk_index>"
    doc_id: str
    text: str
    char_span: tuple[int, int]
    chunk_index: int


def chunk_document(doc_id: str, text: str, window: int, stride: int) -> list[Passage]:
    """Token windows of `window` tokens every `stride` tokens.

    The final partial window is emitted so every token is covered at least
    once. Spans cover from the first to the last token of the window, so each
    passage's text is re-extractable from the raw document.
    """
    if not (window >= stride >= 1):
        raise ValueError(f"need window >= stride >= 1, got window={window} stride={stride}")
    spans = token_spans(text)
    if not spans:
        return []
    passages = []
    start = 0
    idx = 0
    while True:
        chunk = spans[start : start + window]
        char_start, char_end = chunk[0][1], chunk[-1][2]
        passages.append(
            Passage(
                passage_id=f"{doc_id}#{idx}",
                doc_id=doc_id,
                text=text[char_start:char_end],
                char_span=(char_start, char_end),
                chunk_index=idx,
            )
        )
        if start + window >= len(spans):
            break
        start += stride
        idx += 1
    return passages
