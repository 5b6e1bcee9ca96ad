import sys

from patclir.cli import main

sys.exit(main())
