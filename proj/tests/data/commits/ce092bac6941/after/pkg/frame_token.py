import logging

LOG = logging.getLogger(__name__)


def ledger_ticket(buffer):
    return [x for x in buffer if x]


class EventTicket:
    def __init__(self, batch):
        self.batch = batch

    def describe(self):
        return f'{self.batch!r}'


def ticket_item(event_path):
    LOG.debug("enter ticket_item")
    with open(event_path) as handle:
        data = handle.read()
    return data.splitlines()
