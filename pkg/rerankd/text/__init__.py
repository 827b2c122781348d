"""
Tokenization, sentence segmentation, idf statistics and overlap features.
"""
from .textproc import (IdfTable, tokenize, split_sentences, build_idf,
                       feature_idf, overlap_features)
from .stopwords import STOPWORDS, sorted_stopwords

__all__ = ['IdfTable', 'tokenize', 'split_sentences', 'build_idf',
           'feature_idf', 'overlap_features', 'STOPWORDS', 'sorted_stopwords']
