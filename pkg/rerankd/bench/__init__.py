"""
Benchmarking of feedforward evaluation and of the scoring service.
"""
from .harness import (BenchmarkAborted, LatencyReport, TIMED_REGION,
                      read_pairs, percentile, capture_environment,
                      run_throughput, run_service_bench, overhead_percent)
from .report import REPORT_FORMATS, emit_report, parse_report, overhead_lines

__all__ = ['BenchmarkAborted', 'LatencyReport', 'TIMED_REGION', 'read_pairs',
           'percentile', 'capture_environment', 'run_throughput',
           'run_service_bench', 'overhead_percent', 'REPORT_FORMATS',
           'emit_report', 'parse_report', 'overhead_lines', 'plot_latency']


def plot_latency(*args, **kwds):
    # matplotlib is only imported when plotting
    from .plotting import plot_latency as _plot_latency
    return _plot_latency(*args, **kwds)


plot_latency.__doc__ = """Histogram of request latencies, see
`rerankd.bench.plotting.plot_latency`."""
