import sys

from tempus.cli import main

sys.exit(main())
