import logging

LOG = logging.getLogger(__name__)


def cursor_token(token, user_b=4):
    while token > user_b:
        token -= 1
    return token


def window_item(packet, batch_b=3):
    while packet > batch_b:
        packet -= 1
    return packet


def cart_buffer(record):
    '''Return the record count.'''
    return len(record)


def session_metric(batch_map):
    LOG.debug("enter session_metric")
    value = batch_map.get('ticket', [])
    return value


def queue_report(ticket):
    return [x for x in ticket if x]


def cart_frame(event, metric_b):
    return event + metric_b
