import sys

from pynd.cli import main

sys.exit(main())
