'''
Plotting the latency distribution of a benchmark run.
'''
import numpy as np
import matplotlib.pyplot as plt

from .harness import percentile

__all__ = ['plot_latency']


def plot_latency(samples_ns, bins=50, axes=None, **kwds):
    '''
    Plot a histogram of request latencies with the p50 and p99 latencies
    marked as vertical lines.

    Parameters
    ----------
    samples_ns : sequence of int or `LatencyReport`
        Per-request durations in nanoseconds, or a report recorded with
        latencies.
    bins : int, optional
        Number of histogram bins.
    axes : `~matplotlib.axes.Axes`, optional
        The `~matplotlib.axes.Axes` instance used for plotting. Defaults to
        ``None`` which means that a new `~matplotlib.axes.Axes` will be
        created for the plot.
    kwds : dict, optional
        Any additional keywords are handed over to matplotlib's
        `~matplotlib.axes.Axes.hist` command.

    Returns
    -------
    axes : `~matplotlib.axes.Axes`
        The `~matplotlib.axes.Axes` instance that was used for plotting.
    '''
    title = None
    if hasattr(samples_ns, 'samples_ns'):
        report = samples_ns
        if not report.samples_ns:
            raise ValueError('The report carries no latency samples')
        title = '%s (%s), %s' % (report.approach, report.mode, report.machine)
        samples_ns = report.samples_ns
    if len(samples_ns) == 0:
        raise ValueError('Cannot plot an empty list of samples')
    if axes is None:
        axes = plt.gca()
    latencies_ms = np.asarray(samples_ns, dtype=np.float64) / 1e6
    kwds.setdefault('color', 'gray')
    axes.hist(latencies_ms, bins=bins, **kwds)
    for p, style in ((50, '-'), (99, '--')):
        value = percentile(latencies_ms, p)
        axes.axvline(value, color='k', linestyle=style,
                     label='p%d = %.3f ms' % (p, value))
    axes.set_xlabel('latency (ms)')
    axes.set_ylabel('requests')
    axes.legend(loc='best')
    if title is not None:
        axes.set_title(title)
    return axes
