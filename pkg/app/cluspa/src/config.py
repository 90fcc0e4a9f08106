import logging
import os

import dotenv

dotenv.load_dotenv()

BACKENDS = ('angles', 'snake', 'bipartite', 'qp')
BRANCHES = ('composed', 'printed', 'printed_coefficient_free')

CLUSPA_DEPTH = int(os.environ.get('CLUSPA_DEPTH', '12'))
CLUSPA_BACKEND = os.environ.get('CLUSPA_BACKEND', 'angles')
CLUSPA_TWO_NOTCHED_BRANCH = os.environ.get('CLUSPA_TWO_NOTCHED_BRANCH', 'composed')
CLUSPA_LOG_LEVEL = os.environ.get('CLUSPA_LOG_LEVEL', 'WARNING')
CLUSPA_SEED = int(os.environ.get('CLUSPA_SEED', '0'))


def check_choice(value: str, choices: tuple, name: str) -> str:
    if value not in choices:
        raise ValueError(f"{name} must be one of {', '.join(choices)}, got {value!r}")
    return value


def configure_logging(level: str = None) -> None:
    """
    Configure the root logger of the package.

    Parameters:
    -----------
    level (str): Level name such as 'INFO'; defaults to CLUSPA_LOG_LEVEL.

    Returns:
    -----------
    None
    """
    level = (level or CLUSPA_LOG_LEVEL).upper()
    numeric = getattr(logging, level, None)
    if not isinstance(numeric, int):
        raise ValueError(f"unknown log level {level!r}")
    logging.basicConfig(level=numeric, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("cluspa").setLevel(numeric)
