import sys

from nlstirap.sweeps.cli import main

sys.exit(main())
