'''
Throughput and latency measurements. The driver is single-threaded, times
with the monotonic ``perf_counter_ns`` clock and excludes a warmup phase
(model loading happens before any of these functions is called).
'''
import math
import os
import platform
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction

import numpy as np

from ..config import DEFAULT_WARMUP, THREAD_ENV_VARS
from ..logger import get_logger
from ..service.client import ScoringClient
from ..service.protocol import ProtocolError, RemoteError, TransportError

__all__ = ['BenchmarkAborted', 'LatencyReport', 'TIMED_REGION', 'read_pairs',
           'percentile', 'capture_environment', 'run_throughput',
           'run_service_bench', 'overhead_percent']

logger = get_logger(__name__)

TIMED_REGION = ('full per-pair call including tokenization and overlap '
                'feature extraction')


class BenchmarkAborted(RuntimeError):
    '''
    Raised when a service benchmark loses its connection.

    Attributes
    ----------
    n_samples : int
        Number of requests timed before the failure.
    '''
    def __init__(self, n_samples, error):
        super(BenchmarkAborted, self).__init__(
            'Benchmark aborted after %d samples: %s' % (n_samples, error))
        self.n_samples = n_samples
        self.error = error


@dataclass
class LatencyReport:
    '''
    Result of one benchmark run, a row of the report table.

    Attributes
    ----------
    approach : str
        What was measured, e.g. ``'interpreter'``.
    machine : str
        Label of the machine the run was made on.
    qps : float
        Pairs scored per second of elapsed time.
    p50_ms, p99_ms : float or None
        Latency percentiles, ``None`` for feedforward runs without
        per-request timing.
    n_samples : int
        Number of timed calls.
    warmup_excluded : bool
        Whether warmup calls ran before the timed region.
    mode : str
        ``'direct'``, ``'service'`` or ``'compiled'``.
    environment : dict
        See `capture_environment`.
    timed_region : str
        What a timed call covers.
    samples_ns : list of int
        Per-call durations; kept in memory only.
    '''
    approach: str
    machine: str
    qps: float
    p50_ms: float = None
    p99_ms: float = None
    n_samples: int = 0
    warmup_excluded: bool = True
    mode: str = 'direct'
    environment: dict = field(default_factory=dict)
    timed_region: str = TIMED_REGION
    samples_ns: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if (self.p50_ms is not None and self.p99_ms is not None and
                self.p50_ms > self.p99_ms):
            raise ValueError('p50 (%g ms) exceeds p99 (%g ms)'
                             % (self.p50_ms, self.p99_ms))
        if self.n_samples > 0 and not self.qps > 0:
            raise ValueError('qps has to be positive, got %r' % self.qps)

    @property
    def has_latency(self):
        return self.p50_ms is not None

    def to_dict(self):
        d = asdict(self)
        del d['samples_ns']
        return d

    @classmethod
    def from_dict(cls, d):
        names = set(f.name for f in fields(cls)) - {'samples_ns'}
        unknown = set(d) - names
        if unknown:
            raise ValueError('Unknown report fields: %s'
                             % ', '.join(sorted(unknown)))
        return cls(**d)


def read_pairs(filename):
    '''
    Read benchmark pairs, one ``question<TAB>answer`` per line (UTF-8).
    Blank lines are skipped.
    '''
    pairs = []
    with open(filename, 'r', encoding='utf-8', newline='\n') as f:
        for line_no, line in enumerate(f, start=1):
            line = line.rstrip('\n')
            if not line.strip():
                continue
            question, sep, answer = line.partition('\t')
            if not sep:
                raise ValueError('%s:%d: expected "question<TAB>answer"'
                                 % (filename, line_no))
            pairs.append((question, answer))
    logger.debug('Read %d pairs from "%s"' % (len(pairs), filename))
    return pairs


def percentile(samples, p):
    '''
    Nearest-rank percentile: the ``ceil(p / 100 * n)``-th smallest sample.

    Parameters
    ----------
    samples : sequence
        Non-empty.
    p : float
        Percent in ``(0, 100]``.
    '''
    if len(samples) == 0:
        raise ValueError('Cannot compute a percentile of no samples')
    if not 0 < p <= 100:
        raise ValueError('p has to be in (0, 100], got %r' % (p, ))
    ordered = sorted(samples)
    # exact arithmetic, 99 / 100 * 100 must give rank 99
    rank = math.ceil(Fraction(str(p)) * len(ordered) / 100)
    return ordered[max(rank, 1) - 1]


def _cpu_model():
    try:
        with open('/proc/cpuinfo', encoding='utf-8') as f:
            for line in f:
                if line.startswith('model name'):
                    return line.split(':', 1)[1].strip()
    except OSError:
        pass
    return platform.processor() or platform.machine()


def capture_environment():
    '''
    Describe the measurement environment: CPU, OS, Python and numpy
    versions and the thread settings of the numeric libraries.
    '''
    return {'cpu': _cpu_model(),
            'os': platform.platform(),
            'python': sys.version.split()[0],
            'numpy': np.__version__,
            'threads': dict((var, os.environ.get(var))
                            for var in THREAD_ENV_VARS)}


def _machine_label(machine):
    return machine if machine else platform.node() or 'unknown'


def _warmup(call, pairs, warmup):
    if int(warmup) != warmup or warmup < 0:
        raise ValueError('warmup has to be a non-negative integer, got %r'
                         % (warmup, ))
    for i in range(int(warmup)):
        question, answer = pairs[i % len(pairs)]
        call(question, answer)
    logger.debug('Warmup of %d calls done' % warmup)


def _latencies_ms(samples_ns):
    return percentile(samples_ns, 50) / 1e6, percentile(samples_ns, 99) / 1e6


def run_throughput(pairs, scorer, warmup=DEFAULT_WARMUP, approach='interpreter',
                   machine=None, mode='direct', record_latency=False):
    '''
    Feedforward throughput of ``scorer`` over ``pairs``.

    Parameters
    ----------
    pairs : list of tuple
        ``(question, answer)`` strings.
    scorer : callable
        ``scorer(question, answer)``, already loaded.
    warmup : int, optional
        Untimed calls before the measurement, cycling through ``pairs``.
    approach, machine, mode : str, optional
        Labels of the report.
    record_latency : bool, optional
        Additionally time every call and report p50/p99.

    Returns
    -------
    report : `LatencyReport`
    '''
    pairs = list(pairs)
    if not pairs:
        raise ValueError('Cannot benchmark an empty list of pairs')
    _warmup(scorer, pairs, warmup)
    samples = [] if record_latency else None
    clock = time.perf_counter_ns
    start = clock()
    if record_latency:
        for question, answer in pairs:
            t0 = clock()
            scorer(question, answer)
            samples.append(clock() - t0)
    else:
        for question, answer in pairs:
            scorer(question, answer)
    elapsed_ns = max(clock() - start, 1)
    p50 = p99 = None
    if record_latency:
        p50, p99 = _latencies_ms(samples)
    report = LatencyReport(approach=approach, machine=_machine_label(machine),
                           qps=len(pairs) / (elapsed_ns / 1e9), p50_ms=p50,
                           p99_ms=p99, n_samples=len(pairs),
                           warmup_excluded=warmup > 0, mode=mode,
                           environment=capture_environment(),
                           samples_ns=samples)
    logger.info('%s (%s): %.2f QPS over %d pairs' % (approach, mode,
                                                     report.qps, len(pairs)))
    return report


def run_service_bench(pairs, endpoint, warmup=DEFAULT_WARMUP,
                      approach='interpreter', machine=None, timeout=None):
    '''
    Throughput and latency through the scoring service at ``endpoint``,
    one request at a time over one connection.

    Raises
    ------
    BenchmarkAborted
        If the connection fails; carries the number of samples taken.
    '''
    pairs = list(pairs)
    if not pairs:
        raise ValueError('Cannot benchmark an empty list of pairs')
    clock = time.perf_counter_ns
    samples = []
    client = ScoringClient(endpoint, timeout=timeout)
    try:
        client.connect()
        _warmup(client.get_score, pairs, warmup)
        start = clock()
        for question, answer in pairs:
            t0 = clock()
            client.get_score(question, answer)
            samples.append(clock() - t0)
        elapsed_ns = max(clock() - start, 1)
    except (TransportError, ProtocolError, RemoteError) as ex:
        logger.error('Service benchmark aborted after %d samples'
                     % len(samples))
        raise BenchmarkAborted(len(samples), ex)
    finally:
        client.close()
    p50, p99 = _latencies_ms(samples)
    report = LatencyReport(approach=approach, machine=_machine_label(machine),
                           qps=len(pairs) / (elapsed_ns / 1e9), p50_ms=p50,
                           p99_ms=p99, n_samples=len(samples),
                           warmup_excluded=warmup > 0, mode='service',
                           environment=capture_environment(),
                           samples_ns=samples)
    logger.info('%s (service): %.2f QPS, p50 %.3f ms, p99 %.3f ms'
                % (approach, report.qps, p50, p99))
    return report


def overhead_percent(direct, service):
    '''
    Service overhead relative to direct evaluation,
    ``(t_service - t_direct) / t_direct * 100`` with ``t = 1 / qps`` the
    elapsed time per pair. Positive when the service is slower.
    '''
    if not (direct.qps > 0 and service.qps > 0):
        raise ValueError('Both reports need a positive throughput')
    return (direct.qps / service.qps - 1.0) * 100.0
