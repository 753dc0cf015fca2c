import sys

from .workbench import main

sys.exit(main())
