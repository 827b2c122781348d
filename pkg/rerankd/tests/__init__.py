import os
import sys


def run():
    '''
    Run the test suite of the package, returns ``True`` if all tests pass.
    '''
    try:
        import pytest
    except ImportError:
        raise ImportError('Running the test suite requires the pytest package.')
    dirname = os.path.abspath(os.path.dirname(__file__))
    sys.stderr.write('Running tests in "%s"\n' % dirname)
    return pytest.main([dirname]) == 0  # errorcode 0 == all ok
