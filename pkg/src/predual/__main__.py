import sys

from predual.cli import main

sys.exit(main())
