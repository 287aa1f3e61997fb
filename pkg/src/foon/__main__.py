"""Allow ``python -m foon`` as an alternative to the ``foon`` script."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
