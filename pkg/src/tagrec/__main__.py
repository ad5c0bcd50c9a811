import sys

from tagrec.cli import main

sys.exit(main())
