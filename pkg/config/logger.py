import logging
import sys

from config.settings import LOG_LEVEL

# stderr keeps stdout free for JSON reports
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.INFO),
    format='%(asctime)s %(levelname)s %(message)s',
    stream=sys.stderr,
)
logger = logging.getLogger("cyquivers")

__all__ = ["logger"]
