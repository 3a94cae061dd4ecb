import logging
import socket
from urllib.parse import urlsplit

from django.conf import settings

logger = logging.getLogger(__name__)


def check_broker_status():
    """
    Check that the Redis broker accepts connections, so that ``.delay()``
    does not block when the queue service is down.
    Returns (True, None) if reachable, (False, "error message") otherwise.
    """
    broker_url = getattr(settings, 'CELERY_BROKER_URL', '')
    if not broker_url.startswith('redis://'):
        # eager mode or another transport: nothing to probe
        return True, None
    parts = urlsplit(broker_url)
    try:
        with socket.create_connection((parts.hostname or 'localhost', parts.port or 6379), timeout=1):
            return True, None
    except OSError as e:
        logger.warning('Broker %s unreachable: %s', broker_url, e)
        return False, str(e)
