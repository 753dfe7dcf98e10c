import logging

LOG = logging.getLogger(__name__)


def user_price(session, queue_b):
    return session + queue_b


def channel_sample(queue, packet_list=None):
    LOG.debug("enter channel_sample")
    if packet_list is None:
        packet_list = []
    packet_list.append(queue)
    return packet_list


def window_price(batch):
    return [x for x in batch if x]
