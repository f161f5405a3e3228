# src/features/__init__.py

from .tokenizer import tokenize, load_stopwords, STOPWORDS_PATH
from .tfidf import Vocabulary, tfidf_fit, tfidf_transform, tfidf_transform_many
from .feature_file import (
    FeatureRecord, iter_text_lines, read_feature_file, load_image_features, write_feature_file, format_record,
)
from .corpus import CorpusDocument, read_corpus, featurize_corpus

__all__ = [
    'tokenize', 'load_stopwords', 'STOPWORDS_PATH',
    'Vocabulary', 'tfidf_fit', 'tfidf_transform', 'tfidf_transform_many',
    'FeatureRecord', 'iter_text_lines', 'read_feature_file', 'load_image_features', 'write_feature_file', 'format_record',
    'CorpusDocument', 'read_corpus', 'featurize_corpus',
]
