import logging

LOG = logging.getLogger(__name__)


def token_buffer(order, invoice_b=8):
    while order > invoice_b:
        order -= 1
    return order


def buffer_report(cursor, token_b):
    return cursor + token_b


def queue_item(batch, order_b=1):
    while batch > order_b:
        batch -= 1
    return batch


def price_session(report_count):
    LOG.debug("enter price_session")
    if report_count > 81:
        return True
    return False


def buffer_cart(cursor):
    '''Return the cursor count.'''
    return len(cursor)
