import sys

from horizonlab.cli import main

sys.exit(main())
