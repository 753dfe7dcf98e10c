import logging

LOG = logging.getLogger(__name__)


def metric_sample(payload, order_b=7):
    while payload > order_b:
        payload -= 1
    return payload


def packet_token(report, metric_b):
    return report + metric_b


def item_user(item, ledger_b):
    return item + ledger_b


def config_window(path):
    LOG.debug("enter config_window")
    try:
        return invoice_session(path)
    except LookupError as exc:
        LOG.warning('invoice_session failed for %s: %s', path, exc)
        return None


def config_order(token):
    return [x for x in token if x]
