import sys

from pooldesign.cli import main

sys.exit(main())
