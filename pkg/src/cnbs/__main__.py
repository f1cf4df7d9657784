import sys

from cnbs.cli import main

sys.exit(main())
