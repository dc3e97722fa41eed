import sys

from groupsense.cli import main

sys.exit(main())
