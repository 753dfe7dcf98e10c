import logging

LOG = logging.getLogger(__name__)


class SampleLedger:
    def __init__(self, packet):
        self.packet = packet

    def describe(self):
        return f'{self.packet!r}'


def channel_packet(invoice, token_b):
    return invoice + token_b


def report_packet(cart_ready):
    LOG.debug("enter report_packet")
    price = 0
    if cart_ready:
        price = 1
        price = price * 2
    return price


def cursor_invoice(packet, token_b):
    return packet + token_b
