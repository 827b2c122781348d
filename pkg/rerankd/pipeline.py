'''
The end-to-end question answering pipeline: retrieve documents with BM25,
segment them into sentences and rerank the sentences with the CNN.
'''
import io

import numpy as np

from .candidates import Candidate
from .config import DEFAULT_H, DEFAULT_TOP_N, UNKNOWN_TOKEN
from .logger import get_logger
from .model.bundle import ModelConfig, ModelValidationError
from .nn.inference import rerank
from .retrieval.index import bm25_search
from .text.textproc import split_sentences, tokenize

__all__ = ['build_candidates', 'ask', 'vocabulary_from_index',
           'config_from_index', 'read_embeddings', 'apply_embeddings']

logger = get_logger(__name__)


def build_candidates(retrieved):
    '''
    Segment retrieved documents into candidate sentences, in retrieval rank
    order and then sentence order. Identical sentences of different
    documents stay separate candidates.

    Parameters
    ----------
    retrieved : list of `~rerankd.retrieval.RetrievedDoc`

    Returns
    -------
    candidates : list of `~rerankd.candidates.Candidate`
    '''
    return [Candidate(doc.doc_id, sentence_index, sentence)
            for doc in retrieved
            for sentence_index, sentence in enumerate(
                split_sentences(doc.text))]


def ask(index, bundle, question, h=DEFAULT_H, top_n=DEFAULT_TOP_N,
        conv='im2col'):
    '''
    Answer a question with the best scoring sentences of the corpus.

    Parameters
    ----------
    index : `~rerankd.retrieval.InvertedIndex`
    bundle : `~rerankd.model.ModelBundle`
    question : str
    h : int, optional
        Number of documents to retrieve, defaults to 10.
    top_n : int, optional
        Number of sentences to return, defaults to 5.
    conv : str, optional
        Convolution strategy of the reranker.

    Returns
    -------
    answers : list of `~rerankd.candidates.ScoredCandidate`
        At most ``top_n``, best first. Empty if no document matches.
    '''
    if int(top_n) != top_n or top_n < 1:
        raise ValueError('top_n has to be a positive integer, got %r'
                         % (top_n, ))
    retrieved = bm25_search(index, tokenize(question), h)
    candidates = build_candidates(retrieved)
    logger.debug('%d documents retrieved, %d candidate sentences'
                 % (len(retrieved), len(candidates)))
    if not candidates:
        return []
    return rerank(bundle, question, candidates, conv=conv)[:int(top_n)]


def vocabulary_from_index(index, max_vocab=None):
    '''
    Model vocabulary from an index: ``<unk>`` followed by the indexed terms
    by descending document frequency, ties by term.

    Parameters
    ----------
    max_vocab : int, optional
        Maximal vocabulary size including ``<unk>``.
    '''
    terms = sorted((t for t in index.postings if t != UNKNOWN_TOKEN),
                   key=lambda t: (-index.df(t), t))
    if max_vocab is not None:
        if int(max_vocab) != max_vocab or max_vocab < 1:
            raise ValueError('max_vocab has to be a positive integer, got %r'
                             % (max_vocab, ))
        if len(terms) + 1 > max_vocab:
            logger.warning('Truncating the vocabulary from %d to %d terms'
                           % (len(terms) + 1, max_vocab))
            terms = terms[:int(max_vocab) - 1]
    return (UNKNOWN_TOKEN, ) + tuple(terms)


def config_from_index(index, max_vocab=None, **dims):
    '''
    A `ModelConfig` whose vocabulary and idf statistics come from ``index``.
    Further keyword arguments set the dimensions (``embed_dim`` etc.).
    '''
    return ModelConfig(vocab=vocabulary_from_index(index, max_vocab),
                       idf=index.idf_table(), **dims)


def read_embeddings(filename):
    '''
    Read word vectors in the word2vec text format, one ``term v1 ... vd``
    per line. A leading ``count dim`` header line is skipped.

    Returns
    -------
    vectors : dict
        Maps a term to its vector.
    '''
    vectors = {}
    dim = None
    with io.open(filename, 'r', encoding='utf-8') as f:
        for line_no, line in enumerate(f, start=1):
            fields = line.split()
            if not fields or (line_no == 1 and len(fields) == 2):
                continue
            try:
                vector = np.array([float(v) for v in fields[1:]])
            except ValueError:
                raise ValueError('%s:%d: malformed vector' % (filename,
                                                              line_no))
            if dim is None:
                dim = vector.size
            if vector.size != dim or dim == 0:
                raise ValueError('%s:%d: expected %d values, got %d'
                                 % (filename, line_no, dim or 1, vector.size))
            vectors[fields[0]] = vector
    return vectors


def apply_embeddings(bundle, vectors):
    '''
    A copy of ``bundle`` with the embedding rows of the terms in
    ``vectors`` replaced. Terms outside of the vocabulary are ignored.
    '''
    embeddings = np.array(bundle.arrays['embeddings'])
    d = bundle.config.embed_dim
    vocab_index = bundle.vocab_index
    used = 0
    for term, vector in vectors.items():
        if term not in vocab_index:
            continue
        if len(vector) != d:
            raise ModelValidationError('Embedding of %r has %d dimensions, '
                                       'the model uses %d' % (term,
                                                              len(vector), d))
        embeddings[vocab_index[term]] = vector
        used += 1
    skipped = len(vectors) - used
    if skipped:
        logger.warning('%d embedding rows are not in the vocabulary' % skipped)
    logger.info('Replaced %d embedding rows' % used)
    return bundle.replace(embeddings=embeddings)
