import sys

from lvevo.cli import main

sys.exit(main())
