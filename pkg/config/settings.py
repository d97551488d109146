from dotenv import load_dotenv
import os

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        print(f"Ignoring non-integer {name}={raw!r}; using {default}")
        return default


# GROEBNER SETTINGS
DEFAULT_CAP = _int_env("CYQW_CAP", 12)  # path-length cap for completion
DEFAULT_HILBERT_GRADES = 5  # grades reported when --hilbert is not given

# CYCHECK SETTINGS
DEFAULT_DEGCAP = _int_env("CYQW_DEGCAP", 4)  # graded pieces verified up to this degree

# REPRESENTATION THEORY SETTINGS
DEFAULT_RESOLUTION_CAP = _int_env("CYQW_RESOLUTION_CAP", 8)  # max length of a projective resolution
DEFAULT_SERRE_ITERATIONS = 3

# Worker pool for independent graded pieces and matching branches
MAX_WORKERS = _int_env("CYQW_MAX_WORKERS", 4)

# Randomized property checks
DEFAULT_SEED = _int_env("CYQW_SEED", 20240101)
PROPERTY_CASES = 1000

LOG_LEVEL = os.getenv("CYQW_LOG_LEVEL", "INFO").upper()

# Bundled example documents
DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")

EXAMPLE_DOCUMENTS = {
    "qp_ex1": ("qp", "qp_ex1.json"),
    "qp_ex2": ("qp", "qp_ex2.json"),
    "dimer_ex1": ("dimer", "dimer_ex1.json"),
    "dimer_hexagon": ("dimer", "dimer_hexagon.json"),
    "dimer_digon": ("dimer", "dimer_digon.json"),
    "kronecker_chain": ("algebra", "kronecker_chain.json"),
}

# Exit codes of the command line
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def check_env():
    problems = []
    for name in ("DEFAULT_CAP", "DEFAULT_DEGCAP", "DEFAULT_RESOLUTION_CAP", "MAX_WORKERS"):
        if globals()[name] < 1:
            problems.append(name)
    if problems:
        raise ValueError(f"Settings must be positive: {problems}")
    if not os.path.isdir(DATA_DIR):
        raise ValueError(f"DATA_DIR not found: {DATA_DIR}")
    return True


if __name__ == "__main__":
    check_env()
    for key, value in sorted(globals().items()):
        if key.isupper():
            print(f"{key} = {value!r}")
