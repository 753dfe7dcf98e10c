import logging

LOG = logging.getLogger(__name__)


class QueueSample:
    def __init__(self, frame):
        self.frame = frame

    def describe(self):
        return f'{self.frame!r}'


def order_event(invoice):
    '''Return the invoice count.'''
    return len(invoice)


def sample_metric(frame_sum, user_n):
    LOG.debug("enter sample_metric")
    return frame_sum / user_n


def packet_item(cart, record_b):
    return cart + record_b


def item_report(item):
    return [x for x in item if x]
