"""Short-text normalization: URLs, mentions, hashtags, cleaning, tokenization.

The pipeline is deliberately order-sensitive: URLs go first (so their
fragments never look like words), then mentions, then hashtags are split
into constituent words, then everything except letters, spaces, and
letter-flanked hyphens is dropped.
"""

import re

TokenList = list[str]

URL_RE = re.compile(r"(?:https?://|www\.)\S+")
MENTION_RE = re.compile(r"(?<!\S)@\w+")
HASHTAG_RE = re.compile(r"#(\w+)")

# camelCase and letter<->digit boundaries inside hashtag bodies
_CASE_SPLIT_RE = re.compile(r"(?<=[a-z])(?=[A-Z])")
_DIGIT_SPLIT_RE = re.compile(r"(?<=[A-Za-z])(?=[0-9])|(?<=[0-9])(?=[A-Za-z])")

# hyphens are kept only when flanked by letters on both sides
_LOOSE_HYPHEN_RE = re.compile(r"(?<![A-Za-z])-|-(?![A-Za-z])")
_NON_LETTER_RE = re.compile(r"[^A-Za-z\s-]")


def strip_urls(text: str) -> str:
    """Remove http(s)://... and www.... substrings."""
    return URL_RE.sub("", text)


def strip_mentions(text: str) -> str:
    """Remove word-initial @handles; a mid-word '@' (a@b.com) is untouched."""
    return MENTION_RE.sub("", text)


def _segment(word: str) -> str:
    word = word.replace("_", " ")
    word = _CASE_SPLIT_RE.sub(" ", word)
    return _DIGIT_SPLIT_RE.sub(" ", word)


def segment_hashtags(text: str) -> str:
    """Replace each #Tag with its constituent words.

    Splits at lower->upper case boundaries, letter<->digit boundaries, and
    underscores: #StayAtHome -> "Stay At Home", #COVID19 -> "COVID 19".
    All-lowercase tags stay whole.
    """
    return HASHTAG_RE.sub(lambda m: _segment(m.group(1)), text)


def clean(text: str) -> str:
    """Drop digits and punctuation, keeping letters and letter-flanked hyphens.

    Hyphen survival is decided on the text as given, so "2-1" loses its
    hyphen together with the digits while "brother-in-law" is preserved.
    Whitespace runs are collapsed to single spaces.
    """
    text = _LOOSE_HYPHEN_RE.sub(" ", text)
    text = _NON_LETTER_RE.sub("", text)
    return " ".join(text.split())


def tokenize(text: str) -> TokenList:
    """Full normalization pipeline: text -> lowercase token list.

    Order is fixed: strip_urls -> strip_mentions -> segment_hashtags ->
    clean -> lowercase -> whitespace split. May return an empty list.
    """
    text = strip_urls(text)
    text = strip_mentions(text)
    text = segment_hashtags(text)
    text = clean(text)
    return text.lower().split()


def load_stopwords(path: str) -> set[str]:
    """Read a stopword file: one lowercase token per line, blanks ignored."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word:
                words.add(word)
    return words
