import sys

from fdtopo.cli import main

sys.exit(main())
