'''
Text processing shared by retrieval and reranking: tokenization, sentence
segmentation, document frequency statistics and the four word overlap
features of the join layer.
'''
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType

__all__ = ['IdfTable', 'tokenize', 'split_sentences', 'build_idf',
           'feature_idf', 'overlap_features']

_TOKEN_RE = re.compile(r'[A-Za-z0-9]+')
# a sentence ends after ., ? or ! followed by whitespace (or the end of text)
_SENTENCE_END_RE = re.compile(r'(?<=[.?!])\s+')


@dataclass(frozen=True)
class IdfTable:
    '''
    Document frequency statistics of a collection.

    Attributes
    ----------
    n_docs : int
        Number of documents in the collection.
    df : mapping
        Maps a term to the number of documents containing it.
    '''
    n_docs: int
    df: MappingProxyType = field(default_factory=dict)

    def __post_init__(self):
        if int(self.n_docs) != self.n_docs or self.n_docs < 1:
            raise ValueError('n_docs has to be a positive integer, got %r'
                             % (self.n_docs, ))
        df = dict(self.df)
        for term, count in df.items():
            if not 1 <= count <= self.n_docs:
                raise ValueError('Document frequency of %r is %r, has to be '
                                 'in [1, %d]' % (term, count, self.n_docs))
        object.__setattr__(self, 'df', MappingProxyType(df))

    def __eq__(self, other):
        if not isinstance(other, IdfTable):
            return NotImplemented
        return self.n_docs == other.n_docs and dict(self.df) == dict(other.df)

    def __hash__(self):
        return hash((self.n_docs, frozenset(self.df.items())))


def tokenize(text):
    '''
    Split ``text`` into lowercase tokens at every maximal run of characters
    that are not ASCII letters or digits.

    Parameters
    ----------
    text : str

    Returns
    -------
    tokens : list of str
    '''
    return [token.lower() for token in _TOKEN_RE.findall(text)]


def split_sentences(text):
    '''
    Segment ``text`` into sentences. A sentence ends after ``.``, ``?`` or
    ``!`` followed by whitespace or the end of the text; the delimiter stays
    with its sentence. Surrounding whitespace is trimmed and empty segments
    are dropped.
    '''
    sentences = []
    for segment in _SENTENCE_END_RE.split(text):
        segment = segment.strip()
        if segment:
            sentences.append(segment)
    return sentences


def build_idf(corpus):
    '''
    Count document frequencies over a corpus of token sequences.

    Parameters
    ----------
    corpus : list of list of str
        One token sequence per document; term frequencies are ignored.

    Returns
    -------
    table : `IdfTable`
    '''
    corpus = list(corpus)
    if not corpus:
        raise ValueError('Cannot build document frequencies from an empty '
                         'corpus')
    df = Counter()
    for tokens in corpus:
        df.update(set(tokens))
    return IdfTable(n_docs=len(corpus), df=dict(df))


def feature_idf(table, term):
    '''
    Smoothed inverse document frequency ``ln((N + 1) / (df + 1))``, unseen
    terms have ``df = 0``. Never negative.
    '''
    return math.log((table.n_docs + 1.0) / (table.df.get(term, 0) + 1.0))


def _overlap_pair(q_set, c_set, table):
    common = q_set & c_set
    total = len(q_set) + len(c_set)
    overlap = len(common) / total if total else 0.0
    # sorted so that the sums do not depend on set iteration order
    weight_common = sum(feature_idf(table, t) for t in sorted(common))
    weight_union = sum(feature_idf(table, t) for t in sorted(q_set | c_set))
    idf_overlap = weight_common / weight_union if weight_union > 0 else 0.0
    return overlap, idf_overlap


def overlap_features(question, candidate, idf, stopwords):
    '''
    The four word overlap features between a question and a candidate
    sentence.

    Parameters
    ----------
    question : list of str
        Question tokens.
    candidate : list of str
        Candidate sentence tokens.
    idf : `IdfTable`
        Collection statistics for the idf weights.
    stopwords : collection of str
        Terms removed for the last two features.

    Returns
    -------
    features : tuple of float
        ``(overlap_all, idf_overlap_all, overlap_nonstop,
        idf_overlap_nonstop)``, each in ``[0, 1]``. Overlap is
        ``|Q ∩ C| / (|Q| + |C|)`` over the token sets, idf overlap is the idf
        mass of the intersection divided by the idf mass of the union; an
        empty denominator gives 0.
    '''
    q_set = set(question)
    c_set = set(candidate)
    stopwords = frozenset(stopwords)
    overlap_all, idf_overlap_all = _overlap_pair(q_set, c_set, idf)
    overlap_nonstop, idf_overlap_nonstop = _overlap_pair(q_set - stopwords,
                                                         c_set - stopwords,
                                                         idf)
    return (overlap_all, idf_overlap_all, overlap_nonstop,
            idf_overlap_nonstop)
