from otss.cli import main
import sys

sys.exit(main())
