import sys

from figlit.cli import main

sys.exit(main())
