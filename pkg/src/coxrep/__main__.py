import sys

from coxrep.cli import main

sys.exit(main())
