import logging

LOG = logging.getLogger(__name__)


class ConfigPayload:
    def __init__(self, cart):
        self.cart = cart

    def describe(self):
        return f'{self.cart!r}'


def ticket_cursor(token, channel_b):
    return token + channel_b


def invoice_cursor(path):
    LOG.debug("enter invoice_cursor")
    try:
        return config_ticket(path)
    except OSError as exc:
        LOG.warning('config_ticket failed for %s: %s', path, exc)
        return None


def window_item(event):
    '''Return the event count.'''
    return len(event)


def price_frame(cart):
    '''Return the cart count.'''
    return len(cart)
