# src/features/tokenizer.py

import os
from functools import lru_cache
from typing import FrozenSet, List, Optional

from nltk.tokenize import RegexpTokenizer

STOPWORDS_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "stopwords_en.txt")
MIN_TOKEN_LENGTH = 2

# 영숫자(유니코드 포함) 연속 구간만 토큰으로 취급, '_'는 구분자
_TOKENIZER = RegexpTokenizer(r"[^\W_]+")


@lru_cache(maxsize=None)
def load_stopwords(path: str = STOPWORDS_PATH) -> FrozenSet[str]:
    with open(path, 'r', encoding='utf-8') as f:
        return frozenset(
            line.strip().lower() for line in f if line.strip() and not line.startswith('#')
        )


def tokenize(text: str, stopwords: Optional[FrozenSet[str]] = None) -> List[str]:
    """
    Lowercase, split on non-alphanumeric runs, drop stopwords and tokens shorter than 2 characters.
    """
    if not text:
        return []
    stop = load_stopwords() if stopwords is None else stopwords
    return [
        tok for tok in _TOKENIZER.tokenize(text.lower())
        if len(tok) >= MIN_TOKEN_LENGTH and tok not in stop
    ]
