'''
Reference interpreter of the Siamese CNN answer reranker.

Each arm embeds its sentence, applies a wide convolution, ReLU and
max-pooling. The join layer concatenates the question representation, the
answer representation and the four overlap features; a hidden ReLU layer
and a two-class softmax follow. The score is the probability of the
positive class.
'''
import numpy as np

from ..candidates import ScoredCandidate
from ..logger import get_logger
from ..text.textproc import tokenize, overlap_features
from .tensor import conv_wide, conv_wide_direct, gemm, relu, maxpool_cols

__all__ = ['CONV_STRATEGIES', 'BatchScoringError', 'embed', 'arm_forward',
           'join_vector', 'forward', 'score_batch', 'rerank', 'Scorer']

logger = get_logger(__name__)

CONV_STRATEGIES = {'im2col': conv_wide,
                   'direct': conv_wide_direct}


class BatchScoringError(RuntimeError):
    '''
    Raised by `score_batch` when scoring one of the pairs fails.

    Attributes
    ----------
    index : int
        Position of the failing pair in the batch.
    '''
    def __init__(self, index, error):
        super(BatchScoringError, self).__init__(
            'Scoring pair %d failed: %s' % (index, error))
        self.index = index
        self.error = error


def _conv_function(conv):
    try:
        return CONV_STRATEGIES[conv]
    except KeyError:
        raise ValueError('Unknown convolution strategy %r, use one of %s'
                         % (conv, ', '.join(sorted(CONV_STRATEGIES))))


def embed(tokens, bundle):
    '''
    Build the sentence matrix of a token sequence.

    Column ``i`` is the embedding of token ``i``; unknown tokens use row 0
    (``<unk>``). An empty sequence gives a single ``<unk>`` column.

    Returns
    -------
    matrix : `~numpy.ndarray`
        Shape ``(d, L)`` with ``L = max(1, len(tokens))``.
    '''
    vocab_index = bundle.vocab_index
    rows = [vocab_index.get(token, 0) for token in tokens] or [0]
    return bundle.arrays['embeddings'][rows].T


def arm_forward(x, filters, bias, conv='im2col'):
    '''
    Representation vector of one arm:
    ``maxpool_cols(relu(conv_wide(x, filters, bias)))``.
    '''
    return maxpool_cols(relu(_conv_function(conv)(x, filters, bias)))


def join_vector(bundle, question, answer, conv='im2col'):
    '''
    The join layer input ``[x_q; x_d; x_feat]`` of length ``2k + 4``.

    Parameters
    ----------
    bundle : `~rerankd.model.ModelBundle`
    question, answer : list of str
        Token sequences.
    conv : str, optional
        Convolution strategy, ``'im2col'`` (default) or ``'direct'``.
    '''
    arrays = bundle.arrays
    config = bundle.config
    x_q = arm_forward(embed(question, bundle), arrays['conv_q.filters'],
                      arrays['conv_q.bias'], conv=conv)
    x_d = arm_forward(embed(answer, bundle), arrays['conv_a.filters'],
                      arrays['conv_a.bias'], conv=conv)
    x_feat = overlap_features(question, answer, config.idf, config.stopwords)
    return np.concatenate([x_q, x_d, np.asarray(x_feat, dtype=np.float64)])


def _softmax(logits):
    shifted = np.exp(logits - np.max(logits))
    return shifted / np.sum(shifted)


def forward(bundle, question, answer, conv='im2col'):
    '''
    Relevance score of an answer sentence for a question.

    Parameters
    ----------
    bundle : `~rerankd.model.ModelBundle`
        The model; it is validated before any computation.
    question, answer : list of str
        Token sequences.
    conv : str, optional
        Convolution strategy, ``'im2col'`` (default) or ``'direct'``.

    Returns
    -------
    score : float
        Softmax probability of the positive class, in ``[0, 1]``.
    '''
    arrays = bundle.arrays
    x_join = join_vector(bundle, question, answer, conv=conv)
    hidden = relu(gemm(arrays['fc1.weight'], x_join[:, np.newaxis])[:, 0] +
                  arrays['fc1.bias'])
    logits = (gemm(arrays['fc2.weight'], hidden[:, np.newaxis])[:, 0] +
              arrays['fc2.bias'])
    return float(_softmax(logits)[1])


def score_batch(bundle, pairs, conv='im2col'):
    '''
    Score ``(question, answer)`` token sequence pairs one after the other.

    Returns
    -------
    scores : list of float
        In the order of ``pairs``.
    '''
    scores = []
    for index, (question, answer) in enumerate(pairs):
        try:
            scores.append(forward(bundle, question, answer, conv=conv))
        except Exception as ex:
            raise BatchScoringError(index, ex)
    return scores


def rerank(bundle, question, candidates, conv='im2col'):
    '''
    Score candidate sentences for a question and sort them.

    Parameters
    ----------
    bundle : `~rerankd.model.ModelBundle`
    question : str
        The question text.
    candidates : list of `~rerankd.candidates.Candidate`

    Returns
    -------
    ranked : list of `~rerankd.candidates.ScoredCandidate`
        By descending score, ties by ``(doc_id, sentence_index)``.
    '''
    q_tokens = tokenize(question)
    scored = [ScoredCandidate(c, forward(bundle, q_tokens, tokenize(c.text),
                                         conv=conv))
              for c in candidates]
    scored.sort(key=lambda s: (-s.score, s.candidate.doc_id,
                               s.candidate.sentence_index))
    return scored


class Scorer(object):
    '''
    Callable ``(question, answer) -> score`` over raw strings, backed by the
    interpreter. This is the handler the scoring service and the benchmark
    harness call.

    Parameters
    ----------
    bundle : `~rerankd.model.ModelBundle`
    conv : str, optional
        Convolution strategy.
    '''
    def __init__(self, bundle, conv='im2col'):
        _conv_function(conv)
        bundle.validate()
        self.bundle = bundle
        self.conv = conv
        # materialize the arrays so that the first call is not slower
        bundle.arrays

    def __call__(self, question, answer):
        return forward(self.bundle, tokenize(question), tokenize(answer),
                       conv=self.conv)

    def __repr__(self):
        return '<Scorer: %r, conv=%r>' % (self.bundle, self.conv)
