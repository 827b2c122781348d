'''
First stage candidate generation: an in-memory inverted index scored with
BM25.
'''
import math
from collections import Counter, namedtuple

from ..config import BM25_K1, BM25_B
from ..logger import get_logger
from ..text.textproc import IdfTable, tokenize

__all__ = ['InvertedIndex', 'RetrievedDoc', 'index_documents',
           'bm25_idf', 'bm25_search']

logger = get_logger(__name__)

RetrievedDoc = namedtuple('RetrievedDoc', ['doc_id', 'bm25_score', 'text'])


class InvertedIndex(object):
    '''
    Term to postings mapping plus per-document lengths and texts. Treat
    instances as read-only after construction.

    Parameters
    ----------
    postings : dict
        Maps a term to a list of ``(doc_id, term_frequency)`` tuples sorted
        by ``doc_id``.
    doc_len : dict
        Maps a ``doc_id`` to its number of tokens.
    doc_store : dict
        Maps a ``doc_id`` to its original text.
    '''
    def __init__(self, postings, doc_len, doc_store):
        if not doc_len:
            raise ValueError('An index needs at least one document')
        self.postings = {term: list(plist) for term, plist in postings.items()}
        self.doc_len = dict(doc_len)
        self.doc_store = dict(doc_store)
        self.n_docs = len(self.doc_len)
        self.avg_doc_len = sum(self.doc_len.values()) / float(self.n_docs)
        self._check()

    def _check(self):
        if set(self.doc_store) != set(self.doc_len):
            raise ValueError('Document store and document lengths cover '
                             'different documents')
        for term, plist in self.postings.items():
            if not plist:
                raise ValueError('Empty postings list for term %r' % term)
            for position, (doc_id, tf) in enumerate(plist):
                if doc_id not in self.doc_len:
                    raise ValueError('Postings of %r refer to unknown document '
                                     '%r' % (term, doc_id))
                if tf < 1:
                    raise ValueError('Term frequency of %r in %r is %r'
                                     % (term, doc_id, tf))
                if position and not plist[position - 1][0] < doc_id:
                    raise ValueError('Postings of %r are not strictly '
                                     'increasing in doc_id' % term)

    def df(self, term):
        '''Number of documents containing ``term``.'''
        return len(self.postings.get(term, ()))

    def idf_table(self):
        '''Document frequencies of all indexed terms as an `IdfTable`.'''
        return IdfTable(n_docs=self.n_docs,
                        df={term: len(plist)
                            for term, plist in self.postings.items()})

    def __eq__(self, other):
        if not isinstance(other, InvertedIndex):
            return NotImplemented
        return (self.postings == other.postings and
                self.doc_len == other.doc_len and
                self.doc_store == other.doc_store)

    def __repr__(self):
        return '<InvertedIndex: %d documents, %d terms>' % (self.n_docs,
                                                            len(self.postings))


def index_documents(docs):
    '''
    Build an `InvertedIndex` from ``(doc_id, text)`` pairs.

    Parameters
    ----------
    docs : iterable of tuple
        The documents; ids have to be unique and mutually comparable.

    Returns
    -------
    index : `InvertedIndex`
    '''
    docs = list(docs)
    if not docs:
        raise ValueError('Cannot index an empty document list')
    doc_len = {}
    doc_store = {}
    postings = {}
    for doc_id, text in docs:
        if doc_id in doc_len:
            raise ValueError('Duplicate document id %r' % (doc_id, ))
        tokens = tokenize(text)
        doc_len[doc_id] = len(tokens)
        doc_store[doc_id] = text
        for term, tf in Counter(tokens).items():
            postings.setdefault(term, []).append((doc_id, tf))
    for plist in postings.values():
        plist.sort()
    index = InvertedIndex(postings, doc_len, doc_store)
    logger.debug('Indexed %d documents with %d distinct terms'
                 % (index.n_docs, len(index.postings)))
    return index


def bm25_idf(n_docs, df):
    '''
    Non-negative BM25 idf ``ln(1 + (N - df + 0.5) / (df + 0.5))``.
    '''
    return math.log(1.0 + (n_docs - df + 0.5) / (df + 0.5))


def bm25_search(index, query, h, k1=BM25_K1, b=BM25_B):
    '''
    Retrieve the ``h`` best documents for a bag-of-words query.

    Every occurrence of a term in ``query`` contributes to the score, so a
    repeated term counts repeatedly. Documents without any query term are
    never returned.

    Parameters
    ----------
    index : `InvertedIndex`
    query : list of str
        Query tokens.
    h : int
        Maximal number of results, >= 1.
    k1, b : float, optional
        BM25 parameters, default to 0.9 and 0.4.

    Returns
    -------
    results : list of `RetrievedDoc`
        Sorted by descending score, ties by ascending ``doc_id``.
    '''
    if int(h) != h or h < 1:
        raise ValueError('h has to be a positive integer, got %r' % (h, ))
    scores = {}
    # accumulated per query occurrence, in query order
    for term in query:
        plist = index.postings.get(term)
        if not plist:
            continue
        idf = bm25_idf(index.n_docs, len(plist))
        for doc_id, tf in plist:
            norm = k1 * (1.0 - b + b * index.doc_len[doc_id] / index.avg_doc_len)
            weight = idf * tf * (k1 + 1.0) / (tf + norm)
            scores[doc_id] = scores.get(doc_id, 0.0) + weight
    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return [RetrievedDoc(doc_id, score, index.doc_store[doc_id])
            for doc_id, score in ranked[:int(h)]]
