import sys
from typing import Optional, Sequence

from config.settings import check_env
from scripts.Dispatcher import Dispatcher, run as dispatch_run


def run(argv: Optional[Sequence[str]] = None, dispatcher: Optional[Dispatcher] = None) -> int:
    """Run one subcommand: report on stdout, diagnostics on stderr, exit code returned."""
    check_env()
    code, out, err = dispatch_run(sys.argv[1:] if argv is None else argv, dispatcher)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(run())
