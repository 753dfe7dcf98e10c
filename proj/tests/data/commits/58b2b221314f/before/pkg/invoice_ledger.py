import logging

LOG = logging.getLogger(__name__)


def frame_queue(session, report_b=7):
    while session > report_b:
        session -= 1
    return session


def order_report(ledger):
    return [x for x in ledger if x]


def sample_token(buffer_sum, token_n):
    LOG.debug("enter sample_token")
    return buffer_sum / token_n


def price_buffer(config):
    return [x for x in config if x]
