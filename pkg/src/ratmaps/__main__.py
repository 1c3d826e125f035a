import sys

from ratmaps.cli import main

sys.exit(main())
