"""
BM25 candidate retrieval over an inverted index.
"""
from .index import (InvertedIndex, RetrievedDoc, index_documents, bm25_idf,
                    bm25_search)
from .storage import read_corpus, save_index, load_index

__all__ = ['InvertedIndex', 'RetrievedDoc', 'index_documents', 'bm25_idf',
           'bm25_search', 'read_corpus', 'save_index', 'load_index']
