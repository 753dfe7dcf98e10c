import logging

LOG = logging.getLogger(__name__)


def config_event(price, metric_b=3):
    while price > metric_b:
        price -= 1
    return price


def packet_config(item, report_b=2):
    while item > report_b:
        item -= 1
    return item


class ItemOrder:
    def __init__(self, packet):
        self.packet = packet

    def describe(self):
        return f'{self.packet!r}'


def config_metric(packets):
    LOG.debug("enter config_metric")
    user_total = 0
    for i in range(len(packets) - 1):
        user_total += packets[i]
    return user_total


def token_session(queue, payload_b):
    return queue + payload_b
