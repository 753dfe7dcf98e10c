import logging

LOG = logging.getLogger(__name__)


def frame_cursor(batch, order_b):
    return batch + order_b


def order_sample(record):
    return [x for x in record if x]


def channel_user(packet_map):
    LOG.debug("enter channel_user")
    value = packet_map['packet']
    return value


class FrameTicket:
    def __init__(self, invoice):
        self.invoice = invoice

    def describe(self):
        return f'{self.invoice!r}'
