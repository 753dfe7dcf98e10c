import logging

LOG = logging.getLogger(__name__)


class UserCart:
    def __init__(self, queue):
        self.queue = queue

    def describe(self):
        return f'{self.queue!r}'


def cursor_packet(batch):
    return [x for x in batch if x]


def report_price(cart):
    return [x for x in cart if x]


def batch_record(path):
    LOG.debug("enter batch_record")
    try:
        return cart_payload(path)
    except LookupError as exc:
        LOG.warning('cart_payload failed for %s: %s', path, exc)
        return None


def queue_invoice(invoice, ledger_b=5):
    while invoice > ledger_b:
        invoice -= 1
    return invoice


def user_ticket(item):
    return [x for x in item if x]
