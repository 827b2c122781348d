'''
Answer candidates flowing from retrieval into the reranker.
'''
from dataclasses import dataclass

__all__ = ['Candidate', 'ScoredCandidate']


@dataclass(frozen=True)
class Candidate:
    '''
    A candidate answer sentence and where it comes from.

    Attributes
    ----------
    doc_id
        The id of the retrieved document.
    sentence_index : int
        0-based position of the sentence within its document.
    text : str
        The sentence, non-empty.
    '''
    doc_id: object
    sentence_index: int
    text: str

    def __post_init__(self):
        if not self.text:
            raise ValueError('A candidate needs a non-empty text')

    @property
    def provenance(self):
        return (self.doc_id, self.sentence_index)


@dataclass(frozen=True)
class ScoredCandidate:
    '''A candidate together with its reranker score in ``[0, 1]``.'''
    candidate: Candidate
    score: float
