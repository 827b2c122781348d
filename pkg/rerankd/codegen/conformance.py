'''
Checks a generated evaluator against the interpreter: generate, compile
with the host toolchain, run ``--batch`` and compare the scores.
'''
import os
import shutil
import subprocess
import sys
import tempfile
from dataclasses import dataclass, field

from ..config import CONFORMANCE_RTOL
from ..logger import get_logger
from ..nn.inference import Scorer
from .generator import generate_evaluator, write_source

__all__ = ['ConformanceReport', 'relative_error',
           'compile_and_run_conformance']

logger = get_logger(__name__)

PASS, FAIL, SKIPPED = 'pass', 'fail', 'skipped'


@dataclass
class ConformanceReport:
    '''
    Outcome of a conformance run.

    Attributes
    ----------
    status : str
        ``'pass'``, ``'fail'`` or ``'skipped'``.
    n_pairs : int
    max_rel_error : float or None
        ``None`` if no scores could be compared.
    rtol : float
    reason : str
        Why the run failed or was skipped.
    diagnostics : str
        Captured error output of the toolchain or the program.
    '''
    status: str
    n_pairs: int
    max_rel_error: float = None
    rtol: float = CONFORMANCE_RTOL
    reason: str = ''
    diagnostics: str = field(default='', repr=False)

    @property
    def passed(self):
        return self.status == PASS

    @property
    def skipped(self):
        return self.status == SKIPPED

    def __str__(self):
        text = 'conformance %s: %d pairs' % (self.status, self.n_pairs)
        if self.max_rel_error is not None:
            text += ', max relative error %.3g (rtol %g)' % (self.max_rel_error,
                                                            self.rtol)
        if self.reason:
            text += ' (%s)' % self.reason
        return text


def relative_error(compiled, interpreted):
    '''``|compiled - interpreted| / max(|interpreted|, 1e-12)``'''
    return abs(compiled - interpreted) / max(abs(interpreted), 1e-12)


def _pair_text(value):
    if isinstance(value, (list, tuple)):
        value = ' '.join(value)
    if any(c in value for c in '\t\r\n'):
        raise ValueError('Conformance pairs cannot contain tabs or line '
                         'breaks: %r' % value)
    return value


def compile_and_run_conformance(bundle, pairs, toolchain=None, workdir=None,
                                rtol=CONFORMANCE_RTOL, source=None,
                                timeout=None):
    '''
    Compare the generated evaluator of ``bundle`` with the interpreter.

    Parameters
    ----------
    bundle : `~rerankd.model.ModelBundle`
    pairs : list of tuple
        ``(question, answer)`` pairs, as strings or token sequences.
    toolchain : str, optional
        The interpreter executable compiling and running the program,
        defaults to the running one.
    workdir : str, optional
        Where to write the program, a temporary directory by default.
    rtol : float, optional
        Maximal relative error, defaults to 1e-6.
    source : `GeneratedSource`, optional
        Use this source instead of generating it from ``bundle``.
    timeout : float, optional
        Timeout in seconds for each toolchain invocation.

    Returns
    -------
    report : `ConformanceReport`
        A missing toolchain gives a ``'skipped'`` report, not an error.
    '''
    pairs = [(_pair_text(q), _pair_text(a)) for q, a in pairs]
    if source is None:
        source = generate_evaluator(bundle)
    if toolchain is None:
        toolchain = sys.executable
    executable = shutil.which(toolchain) if toolchain else None
    if executable is None:
        reason = 'toolchain %r not available' % (toolchain, )
        logger.warning('Skipping conformance check: %s' % reason)
        return ConformanceReport(SKIPPED, len(pairs), rtol=rtol, reason=reason)

    if workdir is None:
        with tempfile.TemporaryDirectory(prefix='rerankd-conformance-') as tmp:
            return _run(bundle, pairs, executable, tmp, rtol, source, timeout)
    os.makedirs(workdir, exist_ok=True)
    return _run(bundle, pairs, executable, workdir, rtol, source, timeout)


def _invoke(args, timeout):
    return subprocess.run(args, stdout=subprocess.PIPE,
                          stderr=subprocess.PIPE, universal_newlines=True,
                          encoding='utf-8', timeout=timeout)


def _run(bundle, pairs, executable, workdir, rtol, source, timeout):
    program = write_source(source, workdir)
    compiled = _invoke([executable, '-m', 'py_compile', program], timeout)
    if compiled.returncode != 0:
        logger.error('Generated evaluator does not compile')
        return ConformanceReport(FAIL, len(pairs), rtol=rtol,
                                 reason='compilation failed',
                                 diagnostics=compiled.stderr)

    pairs_file = os.path.join(workdir, 'pairs.tsv')
    with open(pairs_file, 'w', encoding='utf-8', newline='\n') as f:
        f.writelines('%s\t%s\n' % pair for pair in pairs)
    ran = _invoke([executable, program, '--batch', pairs_file], timeout)
    if ran.returncode != 0:
        logger.error('Generated evaluator failed on the batch')
        return ConformanceReport(FAIL, len(pairs), rtol=rtol,
                                 reason='batch run failed (exit code %d)'
                                        % ran.returncode,
                                 diagnostics=ran.stderr)
    try:
        compiled_scores = [float(line) for line in ran.stdout.split()]
    except ValueError as ex:
        return ConformanceReport(FAIL, len(pairs), rtol=rtol,
                                 reason='unparsable output (%s)' % ex,
                                 diagnostics=ran.stdout)
    if len(compiled_scores) != len(pairs):
        return ConformanceReport(FAIL, len(pairs), rtol=rtol,
                                 reason='%d scores for %d pairs'
                                        % (len(compiled_scores), len(pairs)),
                                 diagnostics=ran.stderr)

    scorer = Scorer(bundle)
    max_error = 0.0
    for (question, answer), compiled_score in zip(pairs, compiled_scores):
        max_error = max(max_error,
                        relative_error(compiled_score,
                                       scorer(question, answer)))
    status = PASS if max_error <= rtol else FAIL
    report = ConformanceReport(status, len(pairs), max_rel_error=max_error,
                               rtol=rtol,
                               reason='' if status == PASS else
                               'scores differ beyond rtol')
    logger.info(str(report))
    return report
