'''
A multi-stage question answering ranking engine: BM25 candidate retrieval,
a Siamese CNN answer reranker (interpreted or compiled to a standalone
evaluator), a scoring service and a benchmark harness.
'''
import os
import warnings

from .config import THREAD_ENV_VARS

# single-threaded BLAS unless the caller decides otherwise, has to happen
# before numpy is imported
for _var in THREAD_ENV_VARS:
    os.environ.setdefault(_var, '1')
del _var

from .nn import *
from .text import *
from .retrieval import *
from .model import *
from .candidates import Candidate, ScoredCandidate
from .pipeline import ask
from .tests import run as test

try:
    from importlib.metadata import version as _dist_version, PackageNotFoundError
except ImportError:  # Python < 3.8
    from importlib_metadata import version as _dist_version, PackageNotFoundError

try:
    __version__ = _dist_version(__name__)
except PackageNotFoundError:
    # Apparently we are running directly from a git clone, let
    # setuptools_scm fetch the version from git
    try:
        from setuptools_scm import get_version
        __version__ = get_version(relative_to=os.path.dirname(__file__))
    except (ImportError, LookupError):
        warnings.warn('Cannot determine rerankd version')
        __version__ = None
