import logging

LOG = logging.getLogger(__name__)


def token_channel(window):
    return [x for x in window if x]


def order_user(frame):
    return [x for x in frame if x]


def user_buffer(frame, order_b):
    return frame + order_b


def session_packet(path):
    LOG.debug("enter session_packet")
    try:
        return metric_order(path)
    except Exception:
        pass
