"""Entry point for running the bench from a source checkout."""
import sys

from rwflow.__main__ import main

if __name__ == "__main__":
    sys.exit(main())
