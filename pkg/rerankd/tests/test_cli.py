import json
import logging
import os
import re

import numpy as np
import pytest

from rerankd import ask
from rerankd.cli import main
from rerankd.model import load_model
from rerankd.retrieval import load_index
from rerankd.text import sorted_stopwords
from rerankd.tests.conftest import CORPUS, random_pairs


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    root = logging.getLogger('rerankd')
    for handler in list(root.handlers):
        root.removeHandler(handler)
    root.setLevel(logging.NOTSET)
    root.propagate = True


@pytest.fixture
def workspace(tmpdir):
    corpus = str(tmpdir.join('corpus.tsv'))
    with open(corpus, 'w', encoding='utf-8') as f:
        for doc_id, text in CORPUS:
            f.write('%s\t%s\n' % (doc_id, text))
    index = str(tmpdir.join('corpus.idx'))
    model = str(tmpdir.join('model.json'))
    assert main(['index', '--corpus', corpus, '--output', index]) == 0
    assert main(['init-model', '--index', index, '--output', model,
                 '--embed-dim', '4', '--filter-width', '3',
                 '--num-filters', '6', '--hidden-size', '16']) == 0
    return {'dir': tmpdir, 'corpus': corpus, 'index': index, 'model': model}


def test_unknown_command(capsys):
    assert main(['nope']) == 1
    captured = capsys.readouterr()
    assert captured.out == ''
    assert 'usage' in captured.err


def test_no_command(capsys):
    assert main([]) == 1
    assert 'usage' in capsys.readouterr().err


def test_missing_argument(capsys):
    assert main(['score', '--question', 'q']) == 1


def test_dump_stopwords(capsys):
    assert main(['dump-stopwords']) == 0
    assert capsys.readouterr().out.splitlines() == sorted_stopwords()


def test_score(workspace, capsys):
    capsys.readouterr()
    assert main(['score', '--model', workspace['model'], '--question',
                 'Why is the sky blue?', '--answer', 'The sky is blue.']) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert len(lines) == 1
    assert 0.0 <= float(lines[0]) <= 1.0


def test_runtime_error(workspace, capsys):
    assert main(['score', '--model', str(workspace['dir'].join('missing')),
                 '--question', 'q', '--answer', 'a']) == 2
    captured = capsys.readouterr()
    assert captured.out == ''


def test_init_model_from_corpus(workspace):
    model = str(workspace['dir'].join('small.json'))
    assert main(['init-model', '--corpus', workspace['corpus'], '--output',
                 model, '--embed-dim', '2', '--filter-width', '2',
                 '--num-filters', '1', '--hidden-size', '2',
                 '--max-vocab', '4', '--seed', '3']) == 0
    bundle = load_model(model)
    assert len(bundle.config.vocab) == 4
    assert bundle.config.join_size == 6


def test_ask_matches_in_process(workspace, capsys):
    capsys.readouterr()
    question = 'What is the capital of France?'
    assert main(['ask', '--index', workspace['index'], '--model',
                 workspace['model'], '--question', question, '--h', '3',
                 '--top-n', '4']) == 0
    lines = capsys.readouterr().out.splitlines()
    expected = ask(load_index(workspace['index']),
                   load_model(workspace['model']), question, h=3, top_n=4)
    assert len(lines) == len(expected)
    for rank, (line, answer) in enumerate(zip(lines, expected), start=1):
        c = answer.candidate
        assert line == '%d\t%.6f\t%s\t%d\t%s' % (rank, answer.score,
                                                 c.doc_id, c.sentence_index,
                                                 c.text)


def test_compile(workspace, capsys):
    out_dir = str(workspace['dir'].join('compiled'))
    assert main(['compile', '--model', workspace['model'], '--output-dir',
                 out_dir, '--no-service']) == 0
    assert os.path.exists(os.path.join(out_dir, 'evaluator.py'))
    assert main(['compile', '--model', workspace['model'], '--output-dir',
                 out_dir, '--no-service', '--no-batch']) == 1


def test_compile_check_needs_batch(workspace, capsys):
    out_dir = str(workspace['dir'].join('nobatch'))
    assert main(['compile', '--model', workspace['model'], '--output-dir',
                 out_dir, '--no-batch', '--check', workspace['corpus']]) == 1
    assert not os.path.exists(out_dir)


def test_compile_check(workspace, capsys):
    pairs = str(workspace['dir'].join('pairs.tsv'))
    with open(pairs, 'w', encoding='utf-8') as f:
        f.write('why is the sky blue\tthe sky is blue\n'
                'capital of france\tparis is the capital\n')
    out_dir = str(workspace['dir'].join('checked'))
    capsys.readouterr()
    assert main(['compile', '--model', workspace['model'], '--output-dir',
                 out_dir, '--check', pairs]) == 0
    out = capsys.readouterr().out
    assert 'conformance' in out


def test_bench(workspace, capsys):
    pairs = str(workspace['dir'].join('pairs.tsv'))
    with open(pairs, 'w', encoding='utf-8') as f:
        for i in range(40):
            f.write('why is the sky blue %d\tthe sky is blue %d\n' % (i, i))
    capsys.readouterr()
    assert main(['bench', '--pairs', pairs, '--model', workspace['model'],
                 '--mode', 'direct,service,compiled', '--warmup', '5',
                 '--format', 'json-lines']) == 0
    reports = [json.loads(line)
               for line in capsys.readouterr().out.splitlines()]
    assert [r['mode'] for r in reports] == ['direct', 'service', 'compiled']
    assert all(r['qps'] > 0 for r in reports)
    assert reports[1]['p50_ms'] <= reports[1]['p99_ms']

    plot = str(workspace['dir'].join('latency.png'))
    assert main(['bench', '--pairs', pairs, '--model', workspace['model'],
                 '--mode', 'direct,service', '--warmup', '5',
                 '--plot', plot]) == 0
    out = capsys.readouterr().out
    assert out.startswith('Machine')
    assert 'Service overhead' in out
    assert os.path.exists(plot)


def test_bench_service_slower_than_direct(workspace, capsys):
    pairs = str(workspace['dir'].join('pairs2000.tsv'))
    with open(pairs, 'w', encoding='utf-8') as f:
        for question, answer in random_pairs(np.random.default_rng(9), 2000):
            # a line with two empty fields would be skipped as blank
            f.write('why %s\t%s\n' % (question, answer))
    args = ['bench', '--pairs', pairs, '--model', workspace['model'],
            '--mode', 'direct,service', '--machine', 'ci']
    capsys.readouterr()

    assert main(args + ['--format', 'json-lines']) == 0
    direct, service = [json.loads(line)
                       for line in capsys.readouterr().out.splitlines()]
    assert (direct['mode'], service['mode']) == ('direct', 'service')
    assert direct['n_samples'] == service['n_samples'] == 2000
    assert service['qps'] < direct['qps']

    assert main(args) == 0
    out = capsys.readouterr().out
    match = re.search(r'^Service overhead \(ci, interpreter\): (-?[0-9.]+)%$',
                      out, re.MULTILINE)
    assert match is not None
    assert float(match.group(1)) > 0


def test_bench_usage_errors(workspace, capsys):
    pairs = str(workspace['dir'].join('pairs.tsv'))
    with open(pairs, 'w', encoding='utf-8') as f:
        f.write('q\ta\n')
    assert main(['bench', '--pairs', pairs, '--mode', 'turbo',
                 '--model', workspace['model']]) == 1
    assert main(['bench', '--pairs', pairs, '--mode', 'direct']) == 1
