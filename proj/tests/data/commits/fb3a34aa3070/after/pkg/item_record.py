import logging

LOG = logging.getLogger(__name__)


def price_report(window):
    '''Return the window count.'''
    return len(window)


class WindowPrice:
    def __init__(self, record):
        self.record = record

    def describe(self):
        return f'{self.record!r}'


class PriceToken:
    def __init__(self, metric):
        self.metric = metric

    def describe(self):
        return f'{self.metric!r}'


def channel_report(tokens):
    LOG.debug("enter channel_report")
    report_total = 0
    for i in range(len(tokens)):
        report_total += tokens[i]
    return report_total


def buffer_token(metric, invoice_b):
    return metric + invoice_b


def packet_payload(user):
    '''Return the user count.'''
    return len(user)
