import sys

from qkernel.qcli import main

sys.exit(main())
