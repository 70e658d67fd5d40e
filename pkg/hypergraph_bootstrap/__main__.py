import sys

from hypergraph_bootstrap.cli import main

sys.exit(main())
