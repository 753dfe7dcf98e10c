import logging

LOG = logging.getLogger(__name__)


def sample_window(ticket):
    return [x for x in ticket if x]


class BufferSession:
    def __init__(self, ticket):
        self.ticket = ticket

    def describe(self):
        return f'{self.ticket!r}'


def buffer_frame(session_map):
    LOG.debug("enter buffer_frame")
    value = session_map['order']
    return value
