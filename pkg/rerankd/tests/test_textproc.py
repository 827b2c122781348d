import math

import numpy as np
import pytest

from rerankd.text import (STOPWORDS, sorted_stopwords, IdfTable, tokenize,
                          split_sentences, build_idf, feature_idf,
                          overlap_features)


def test_tokenize():
    assert tokenize("Hello, World! It's 2024.") == ['hello', 'world', 'it',
                                                    's', '2024']
    assert tokenize('') == []
    assert tokenize('   ,,, ') == []
    assert tokenize('Café naïve') == ['caf', 'na', 've']


def test_split_sentences():
    assert split_sentences('A b. C d? E!') == ['A b.', 'C d?', 'E!']
    assert split_sentences('no delimiter') == ['no delimiter']
    assert split_sentences('') == []
    assert split_sentences('  Trailing.   ') == ['Trailing.']
    # a delimiter not followed by whitespace does not split
    assert split_sentences('3.14 is pi. Yes') == ['3.14 is pi.', 'Yes']


def test_stopwords():
    assert len(STOPWORDS) == 33
    assert 'the' in STOPWORDS
    assert sorted_stopwords() == sorted(STOPWORDS)


def test_build_idf():
    table = build_idf([['a', 'b', 'a'], ['b'], ['c']])
    assert table.n_docs == 3
    assert dict(table.df) == {'a': 1, 'b': 2, 'c': 1}
    with pytest.raises(ValueError):
        build_idf([])


def test_idf_table_validation():
    with pytest.raises(ValueError):
        IdfTable(n_docs=0)
    with pytest.raises(ValueError):
        IdfTable(n_docs=2, df={'a': 3})
    assert IdfTable(n_docs=2, df={'a': 1}) == IdfTable(n_docs=2,
                                                        df={'a': 1})
    with pytest.raises(TypeError):
        IdfTable(n_docs=2, df={'a': 1}).df['a'] = 2


def test_feature_idf():
    table = IdfTable(n_docs=3, df={'sky': 2})
    assert feature_idf(table, 'sky') == pytest.approx(math.log(4 / 3))
    assert feature_idf(table, 'unseen') == pytest.approx(math.log(4))
    full = IdfTable(n_docs=3, df={'all': 3})
    assert feature_idf(full, 'all') == 0.0


def test_overlap_features_examples():
    table = IdfTable(n_docs=10, df={'sky': 2, 'blue': 5, 'the': 10})
    features = overlap_features(['the', 'sky'], ['the', 'sky', 'blue'],
                                table, STOPWORDS)
    assert features[0] == pytest.approx(2 / 5)
    idf = lambda t: feature_idf(table, t)
    assert features[1] == pytest.approx(
        (idf('the') + idf('sky')) / (idf('the') + idf('sky') + idf('blue')))
    assert features[2] == pytest.approx(1 / 3)
    assert features[3] == pytest.approx(idf('sky') / (idf('sky') +
                                                      idf('blue')))


def test_overlap_features_edge_cases():
    table = IdfTable(n_docs=2, df={})
    assert overlap_features([], [], table, STOPWORDS) == (0.0, 0.0, 0.0, 0.0)
    # only stopwords
    features = overlap_features(['the'], ['the'], table, STOPWORDS)
    assert features[0] == pytest.approx(0.5)
    assert features[2:] == (0.0, 0.0)
    # identical sets
    features = overlap_features(['sky', 'sky'], ['sky'], table, STOPWORDS)
    assert features == (0.5, 1.0, 0.5, 1.0)


def test_overlap_features_range():
    table = build_idf([['a', 'b'], ['b', 'c'], ['c', 'the']])
    words = ['a', 'b', 'c', 'the', 'd']
    for i in range(len(words)):
        for j in range(len(words)):
            features = overlap_features(words[:i], words[j:], table,
                                        STOPWORDS)
            assert len(features) == 4
            assert all(0.0 <= f <= 1.0 for f in features)


def test_build_idf_matches_membership_count():
    rng = np.random.default_rng(21)
    vocabulary = ['w%d' % i for i in range(25)]
    for _ in range(50):
        corpus = [list(rng.choice(vocabulary, size=rng.integers(0, 12)))
                  for _ in range(rng.integers(1, 30))]
        table = build_idf(corpus)
        assert table.n_docs == len(corpus)
        expected = {}
        for term in vocabulary:
            count = sum(1 for tokens in corpus if term in tokens)
            if count:
                expected[term] = count
        assert dict(table.df) == expected


def test_feature_idf_non_increasing_in_df():
    rng = np.random.default_rng(22)
    for _ in range(50):
        n_docs = int(rng.integers(1, 200))
        table = IdfTable(n_docs=n_docs,
                         df=dict(('t%d' % df, df)
                                 for df in range(1, n_docs + 1)))
        values = [feature_idf(table, 't%d' % df)
                  for df in range(0, n_docs + 1)]
        assert values[0] == feature_idf(table, 'unseen')
        assert all(a >= b for a, b in zip(values, values[1:]))
        assert values[-1] == 0.0


def test_overlap_features_worked_example():
    table = IdfTable(n_docs=10, df={'sky': 1, 'blue': 1, 'is': 10,
                                    'what': 5})
    features = overlap_features(['what', 'is', 'sky'], ['sky', 'is', 'blue'],
                                table, {'what', 'is'})
    idf_sky = math.log(11 / 2)
    assert feature_idf(table, 'is') == 0.0
    assert features[0] == pytest.approx(2 / 6, rel=1e-15)
    assert features[1] == pytest.approx(
        idf_sky / (2 * idf_sky + math.log(11 / 6)), rel=1e-15)
    assert features[2] == pytest.approx(1 / 3, rel=1e-15)
    assert features[3] == 0.5


def test_overlap_features_symmetric():
    rng = np.random.default_rng(23)
    words = ['the', 'sky', 'is', 'blue', 'what', 'of', 'rome', 'zebra']
    table = build_idf([['the', 'sky'], ['blue', 'rome'], ['the', 'of']])
    for _ in range(200):
        q = list(rng.choice(words, size=rng.integers(0, 8)))
        c = list(rng.choice(words, size=rng.integers(0, 8)))
        assert (overlap_features(q, c, table, STOPWORDS) ==
                overlap_features(c, q, table, STOPWORDS))
