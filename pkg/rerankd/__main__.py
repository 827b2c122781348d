'''
Entry point of ``python -m rerankd`` and the ``rerankd`` script.

Importing the package sets the thread variables of the numeric libraries
to ``1`` unless they are already set, before numpy is loaded.
'''
import sys

from .cli import main


if __name__ == '__main__':
    sys.exit(main())
