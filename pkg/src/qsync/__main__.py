import sys

from qsync.cli import main

sys.exit(main())
