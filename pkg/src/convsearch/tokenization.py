"""Tokenizer shared by every stage: lowercase, split on non-alphanumerics,
drop stopwords. Pure-digit tokens are kept here (downstream expansion stages
filter them where needed)."""
import re
from importlib import resources

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+")


def _load_wordlist(filename: str) -> frozenset[str]:
    text = resources.files("convsearch.data").joinpath(filename).read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


STOPWORDS = _load_wordlist("stopwords.txt")
PRONOUNS = _load_wordlist("pronouns.txt")


def raw_tokens(text: str) -> list[str]:
    """Lowercased alphanumeric runs, no stopword removal."""
    return [m.group(0).lower() for m in _TOKEN_RE.finditer(text)]


def tokenize(text: str) -> list[str]:
    """Lowercase + split on non-alphanumerics + drop stopwords."""
    return [t for t in raw_tokens(text) if t not in STOPWORDS]


def token_spans(text: str) -> list[tuple[str, int, int]]:
    """Raw tokens with their (start, end) character spans in the original text.

    Spans are over the untouched input so passage chunks can be re-extracted
    from the stored raw document.
    """
    return [(m.group(0).lower(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]
