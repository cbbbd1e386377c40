"""
Common facilities for pyHOIF
"""

import logging

import dill


LOG_FORMAT = "[%(asctime)s] %(name)s %(levelname)s: %(message)s"


def setup_logging(verbosity=0):
    """
    Configure the root logger for command line usage
    :param verbosity: 0 for INFO, 1 or more for DEBUG, negative for WARNING
    """
    level = logging.INFO
    if verbosity > 0:
        level = logging.DEBUG
    elif verbosity < 0:
        level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, datefmt="%H:%M:%S")


def persist_obj(obj, file):
    """
    Persist an object on filesystem. This function depends on Dill package
    :param obj: object on memory
    :param file: file name to store the object
    """
    with open(file, 'wb') as _file:
        dill.dump(obj, _file)


def load_obj(file):
    """
    Load to memory an object stored filesystem. This function depends on Dill package
    :param file: file name where the object is stored
    :return: object
    """
    with open(file, 'rb') as _file:
        obj = dill.load(_file)
    return obj
