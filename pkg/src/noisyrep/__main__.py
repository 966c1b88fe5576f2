import sys

from noisyrep.cli import main

sys.exit(main())
