import sys
import faulthandler

from src.cli import main


if __name__ == "__main__":
    # Dump tracebacks if a worker or the solver dies hard
    if sys.stderr is not None:
        faulthandler.enable(all_threads=True)
    sys.exit(main())
