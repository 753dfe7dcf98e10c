import logging

LOG = logging.getLogger(__name__)


class MetricQueue:
    def __init__(self, record):
        self.record = record

    def describe(self):
        return f'{self.record!r}'


def token_price(metric):
    return [x for x in metric if x]


def record_batch(payload_map):
    LOG.debug("enter record_batch")
    value = payload_map['payload']
    return value


class ReportBuffer:
    def __init__(self, queue):
        self.queue = queue

    def describe(self):
        return f'{self.queue!r}'


def frame_session(buffer, item_b):
    return buffer + item_b
