'''
Rendering benchmark reports as a text table or as JSON lines.
'''
import json

from .harness import LatencyReport, overhead_percent

__all__ = ['REPORT_FORMATS', 'TABLE_COLUMNS', 'emit_report', 'parse_report',
           'overhead_lines']

REPORT_FORMATS = ('table', 'json-lines')
TABLE_COLUMNS = ('Machine', 'Approach', 'Throughput (QPS)', 'p50', 'p99')


def _row(report):
    if report.has_latency:
        p50, p99 = '%.3f' % report.p50_ms, '%.3f' % report.p99_ms
    else:
        p50 = p99 = ''
    approach = report.approach
    if report.mode == 'service':
        approach += ' (service)'
    return (report.machine, approach, '%.2f' % report.qps, p50, p99)


def _table(reports):
    rows = [TABLE_COLUMNS] + [_row(r) for r in reports]
    widths = [max(len(row[i]) for row in rows)
              for i in range(len(TABLE_COLUMNS))]

    def line(cells):
        return ' | '.join(cell.ljust(width)
                          for cell, width in zip(cells, widths)).rstrip()

    lines = [line(rows[0]), '-+-'.join('-' * w for w in widths)]
    lines.extend(line(row) for row in rows[1:])
    return '\n'.join(lines) + '\n'


def emit_report(reports, format='table'):
    '''
    Render ``reports``.

    Parameters
    ----------
    reports : list of `LatencyReport`
    format : str, optional
        ``'table'`` for columns Machine | Approach | Throughput (QPS) | p50
        | p99 (latencies in ms, blank for feedforward rows), or
        ``'json-lines'`` for one JSON object per report.

    Returns
    -------
    text : str
    '''
    if format == 'table':
        return _table(reports)
    if format == 'json-lines':
        return ''.join(json.dumps(r.to_dict(), allow_nan=False) + '\n'
                       for r in reports)
    raise ValueError('Unknown report format %r, use one of %s'
                     % (format, ', '.join(REPORT_FORMATS)))


def parse_report(text):
    '''
    Read reports written with ``format='json-lines'``.
    '''
    return [LatencyReport.from_dict(json.loads(line))
            for line in text.splitlines() if line.strip()]


def overhead_lines(reports):
    '''
    One line per service report that has a direct report of the same
    approach and machine, stating the service overhead in percent.
    '''
    lines = []
    for service in reports:
        if service.mode != 'service':
            continue
        for direct in reports:
            if (direct.mode == 'direct' and
                    direct.approach == service.approach and
                    direct.machine == service.machine):
                lines.append('Service overhead (%s, %s): %.2f%%'
                             % (service.machine, service.approach,
                                overhead_percent(direct, service)))
                break
    return lines
