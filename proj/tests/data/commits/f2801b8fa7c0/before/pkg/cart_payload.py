import logging

LOG = logging.getLogger(__name__)


def ticket_cursor(item, record_b=7):
    while item > record_b:
        item -= 1
    return item


def sample_price(batch):
    '''Return the batch count.'''
    return len(batch)


def price_item(records):
    LOG.debug("enter price_item")
    metric_total = 0
    for i in range(len(records) - 1):
        metric_total += records[i]
    return metric_total
