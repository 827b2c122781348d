'''
The ``rerankd`` command line tool. Results go to standard output, all
diagnostics to standard error. Exit codes: 0 on success, 1 on usage errors,
2 on runtime errors.
'''
import argparse
import sys
import tempfile

from . import config
from .logger import configure_logging, get_logger

__all__ = ['UsageError', 'build_parser', 'main']

logger = get_logger(__name__)

BENCH_MODES = ('direct', 'service', 'compiled')


class UsageError(Exception):
    '''Invalid command line usage.'''
    def __init__(self, message, usage=''):
        super(UsageError, self).__init__(message)
        self.usage = usage


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, self.format_usage())


def _load_index(filename):
    from .retrieval.storage import load_index
    index = load_index(filename)
    logger.info('Loaded %r' % index)
    return index


def _load_model(filename):
    from .model.serialization import load_model
    bundle = load_model(filename)
    logger.info('Loaded %r' % bundle)
    return bundle


def cmd_index(args, out):
    from .retrieval.index import index_documents
    from .retrieval.storage import read_corpus, save_index
    index = index_documents(read_corpus(args.corpus))
    save_index(index, args.output)
    out.write('%d documents, %d terms\n' % (index.n_docs, len(index.postings)))


def cmd_ask(args, out):
    from .pipeline import ask
    answers = ask(_load_index(args.index), _load_model(args.model),
                  args.question, h=args.h, top_n=args.top_n, conv=args.conv)
    for rank, answer in enumerate(answers, start=1):
        c = answer.candidate
        out.write('%d\t%.6f\t%s\t%d\t%s\n' % (rank, answer.score, c.doc_id,
                                              c.sentence_index, c.text))


def cmd_init_model(args, out):
    from .model.bundle import init_model
    from .model.serialization import save_model
    from .pipeline import config_from_index, read_embeddings, apply_embeddings
    if args.index is not None:
        index = _load_index(args.index)
    else:
        from .retrieval.index import index_documents
        from .retrieval.storage import read_corpus
        index = index_documents(read_corpus(args.corpus))
    model_config = config_from_index(index, max_vocab=args.max_vocab,
                                     embed_dim=args.embed_dim,
                                     filter_width=args.filter_width,
                                     num_filters=args.num_filters,
                                     hidden_size=args.hidden_size)
    bundle = init_model(model_config, args.seed)
    if args.embeddings is not None:
        bundle = apply_embeddings(bundle, read_embeddings(args.embeddings))
    save_model(bundle, args.output)
    out.write('%r with %d weights\n' % (bundle, bundle.n_weights))


def cmd_score(args, out):
    from .nn.inference import Scorer
    scorer = Scorer(_load_model(args.model), conv=args.conv)
    out.write('%.17g\n' % scorer(args.question, args.answer))


def cmd_serve(args, out):
    from .nn.inference import Scorer
    from .service.server import serve
    try:
        port = config.resolve_port(args.port)
    except ValueError as ex:
        raise UsageError(str(ex))
    scorer = Scorer(_load_model(args.model), conv=args.conv)
    serve(scorer, port, host=args.host)


def cmd_compile(args, out):
    from .codegen import (GenOptions, compile_and_run_conformance,
                          generate_evaluator, write_source)
    try:
        options = GenOptions(emit_service=not args.no_service,
                             emit_batch_cli=not args.no_batch)
    except ValueError as ex:
        raise UsageError(str(ex))
    if args.check is not None and not options.emit_batch_cli:
        raise UsageError('--check needs the batch mode, drop --no-batch')
    bundle = _load_model(args.model)
    source = generate_evaluator(bundle, options)
    out.write('%s\n' % write_source(source, args.output_dir))
    if args.check is not None:
        from .bench.harness import read_pairs
        report = compile_and_run_conformance(bundle, read_pairs(args.check),
                                             source=source)
        out.write('%s\n' % report)
        if report.status == 'fail':
            if report.diagnostics:
                sys.stderr.write(report.diagnostics)
            raise RuntimeError('the generated evaluator does not conform')


def _parse_modes(value):
    modes = [m.strip() for m in value.split(',') if m.strip()]
    unknown = [m for m in modes if m not in BENCH_MODES]
    if not modes or unknown:
        raise UsageError('invalid --mode %r, use a comma separated list of %s'
                         % (value, ', '.join(BENCH_MODES)))
    return modes


def cmd_bench(args, out):
    from .bench import (emit_report, overhead_lines, read_pairs,
                        run_service_bench, run_throughput)
    from .nn.inference import Scorer
    modes = _parse_modes(args.mode)
    needs_model = ('direct' in modes or 'compiled' in modes or
                   ('service' in modes and args.endpoint is None))
    if needs_model and args.model is None:
        raise UsageError('--model is required for mode(s) %s' % args.mode)
    pairs = read_pairs(args.pairs)
    bundle = _load_model(args.model) if needs_model else None
    reports = []
    for mode in modes:
        if mode == 'direct':
            scorer = Scorer(bundle, conv=args.conv)
            reports.append(run_throughput(pairs, scorer, warmup=args.warmup,
                                          approach='interpreter',
                                          machine=args.machine))
        elif mode == 'compiled':
            reports.append(_bench_compiled(bundle, pairs, args))
        elif args.endpoint is not None:
            reports.append(run_service_bench(pairs, args.endpoint,
                                             warmup=args.warmup,
                                             approach=args.approach,
                                             machine=args.machine))
        else:
            from .service.server import start_server_thread
            server, thread = start_server_thread(Scorer(bundle,
                                                        conv=args.conv))
            try:
                reports.append(run_service_bench(pairs, server.endpoint,
                                                 warmup=args.warmup,
                                                 approach='interpreter',
                                                 machine=args.machine))
            finally:
                server.shutdown()
                server.server_close()
                thread.join()
    out.write(emit_report(reports, args.format))
    if args.format == 'table':
        for line in overhead_lines(reports):
            out.write(line + '\n')
    if args.plot is not None:
        _plot(reports, args.plot)


def _bench_compiled(bundle, pairs, args):
    from .bench import run_throughput
    from .codegen import (GenOptions, generate_evaluator, load_evaluator,
                          write_source)
    source = generate_evaluator(bundle, GenOptions(emit_service=False))
    with tempfile.TemporaryDirectory(prefix='rerankd-bench-') as tmp:
        evaluator = load_evaluator(write_source(source, tmp))
    return run_throughput(pairs, evaluator.score, warmup=args.warmup,
                          approach='compiled', machine=args.machine,
                          mode='compiled')


def _plot(reports, filename):
    with_samples = [r for r in reports if r.samples_ns]
    if not with_samples:
        logger.warning('No run recorded latencies, nothing to plot')
        return
    import matplotlib
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt
    from .bench.plotting import plot_latency
    fig, axes = plt.subplots(len(with_samples), 1, squeeze=False,
                             figsize=(6, 3 * len(with_samples)))
    for report, ax in zip(with_samples, axes[:, 0]):
        plot_latency(report, axes=ax)
    fig.tight_layout()
    fig.savefig(filename)
    plt.close(fig)
    logger.info('Wrote latency plot to "%s"' % filename)


def cmd_dump_stopwords(args, out):
    from .text.stopwords import sorted_stopwords
    for term in sorted_stopwords():
        out.write(term + '\n')


def build_parser():
    parser = ArgumentParser(prog='rerankd',
                            description='Multi-stage question answering: '
                                        'BM25 retrieval and CNN reranking.')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='count', default=0,
                           help='more log output, can be repeated')
    verbosity.add_argument('-q', '--quiet', action='store_true',
                           help='only log errors')
    sub = parser.add_subparsers(dest='command', metavar='command',
                                parser_class=ArgumentParser)

    p = sub.add_parser('index', help='index a corpus')
    p.add_argument('--corpus', required=True,
                   help='one "doc_id<TAB>text" document per line')
    p.add_argument('--output', required=True, help='index file to write')
    p.set_defaults(func=cmd_index)

    p = sub.add_parser('ask', help='answer a question')
    p.add_argument('--index', required=True)
    p.add_argument('--model', required=True)
    p.add_argument('--question', required=True)
    p.add_argument('--h', type=int, default=config.DEFAULT_H,
                   help='documents to retrieve (default: %(default)s)')
    p.add_argument('--top-n', type=int, default=config.DEFAULT_TOP_N,
                   help='sentences to print (default: %(default)s)')
    p.set_defaults(func=cmd_ask)

    p = sub.add_parser('init-model', help='create a seeded model')
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument('--index', help='take vocabulary and idf from an '
                                        'index file')
    source.add_argument('--corpus', help='take vocabulary and idf from a '
                                         'corpus file')
    p.add_argument('--output', required=True, help='model file to write')
    p.add_argument('--max-vocab', type=int, default=None)
    p.add_argument('--embeddings', default=None,
                   help='word2vec text file with initial embeddings')
    p.add_argument('--embed-dim', type=int, default=config.DEFAULT_EMBED_DIM)
    p.add_argument('--filter-width', type=int,
                   default=config.DEFAULT_FILTER_WIDTH)
    p.add_argument('--num-filters', type=int,
                   default=config.DEFAULT_NUM_FILTERS)
    p.add_argument('--hidden-size', type=int,
                   default=config.DEFAULT_HIDDEN_SIZE)
    p.add_argument('--seed', type=int, default=config.DEFAULT_SEED)
    p.set_defaults(func=cmd_init_model)

    p = sub.add_parser('score', help='score one question/answer pair')
    p.add_argument('--model', required=True)
    p.add_argument('--question', required=True)
    p.add_argument('--answer', required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser('serve', help='run the scoring service')
    p.add_argument('--model', required=True)
    p.add_argument('--port', default=None,
                   help='defaults to $%s or %d' % (config.PORT_ENV_VAR,
                                                   config.DEFAULT_PORT))
    p.add_argument('--host', default=config.DEFAULT_HOST)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser('compile', help='generate a standalone evaluator')
    p.add_argument('--model', required=True)
    p.add_argument('--output-dir', required=True)
    p.add_argument('--no-service', action='store_true',
                   help='do not emit the --serve mode')
    p.add_argument('--no-batch', action='store_true',
                   help='do not emit the --batch mode')
    p.add_argument('--check', metavar='PAIRS', default=None,
                   help='compare with the interpreter on these pairs')
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser('bench', help='measure throughput and latency')
    p.add_argument('--pairs', required=True,
                   help='one "question<TAB>answer" pair per line')
    p.add_argument('--model', default=None)
    p.add_argument('--mode', default='direct',
                   help='comma separated list of %s' % ', '.join(BENCH_MODES))
    p.add_argument('--endpoint', default=None,
                   help='host:port of a running server, by default an '
                        'in-process server is started')
    p.add_argument('--approach', default='remote',
                   help='label of a remote server (with --endpoint)')
    p.add_argument('--warmup', type=int, default=config.DEFAULT_WARMUP)
    p.add_argument('--format', choices=('table', 'json-lines'),
                   default='table')
    p.add_argument('--machine', default=None, help='machine label')
    p.add_argument('--plot', default=None, metavar='PNG',
                   help='plot the latency distributions')
    p.set_defaults(func=cmd_bench)

    for name in ('ask', 'score', 'serve', 'bench'):
        sub.choices[name].add_argument('--conv', default='im2col',
                                       choices=('im2col', 'direct'),
                                       help='convolution strategy')

    p = sub.add_parser('dump-stopwords', help='print the stopword list')
    p.set_defaults(func=cmd_dump_stopwords)
    return parser


def main(argv=None):
    '''
    Run the command line tool.

    Returns
    -------
    exit_code : int
    '''
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError('no command given', parser.format_usage())
    except UsageError as ex:
        sys.stderr.write(ex.usage or parser.format_usage())
        sys.stderr.write('rerankd: error: %s\n' % ex)
        return 1
    except SystemExit as ex:
        # --help
        return ex.code if isinstance(ex.code, int) else 0
    configure_logging(-1 if args.quiet else args.verbose)
    try:
        args.func(args, sys.stdout)
    except UsageError as ex:
        sys.stderr.write(ex.usage or parser.format_usage())
        sys.stderr.write('rerankd: error: %s\n' % ex)
        return 1
    except KeyboardInterrupt:
        return 130
    except Exception as ex:
        logger.error('%s failed: %s' % (args.command, ex),
                     exc_info=args.verbose > 1)
        return 2
    sys.stdout.flush()
    return 0
