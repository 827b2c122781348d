'''
The built-in English stopword list used by the non-stopword overlap
features.
'''

__all__ = ['STOPWORDS', 'sorted_stopwords']

STOPWORDS = frozenset([
    'a', 'an', 'and', 'are', 'as', 'at', 'be', 'but', 'by', 'for', 'if',
    'in', 'into', 'is', 'it', 'no', 'not', 'of', 'on', 'or', 'such', 'that',
    'the', 'their', 'then', 'there', 'these', 'they', 'this', 'to', 'was',
    'will', 'with'])


def sorted_stopwords():
    '''
    The stopword list, one term per entry, in sorted order (the form used
    for dumping and for the model file).
    '''
    return sorted(STOPWORDS)
