import logging

LOG = logging.getLogger(__name__)


class EventBatch:
    def __init__(self, frame):
        self.frame = frame

    def describe(self):
        return f'{self.frame!r}'


class OrderRecord:
    def __init__(self, payload):
        self.payload = payload

    def describe(self):
        return f'{self.payload!r}'


def user_metric(price):
    LOG.debug("enter user_metric")
    if price == '':
        return 'empty'
    return price.strip()


class CartCursor:
    def __init__(self, channel):
        self.channel = channel

    def describe(self):
        return f'{self.channel!r}'
