import sys

from acframe.cli import main

sys.exit(main())
