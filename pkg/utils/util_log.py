# -*- coding: utf-8 -*-
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals
import logging
import os.path
import sys

import settings

__author__ = 'Ishafizan'

LOG_FORMAT = '%(asctime)s : [%(filename)s] : %(levelname)s : %(message)s'


# init logger
def logger():
    """
    Function returns logger instance
    :return: log
    :rtype: object
    """
    program = os.path.basename(sys.argv[0])
    log = logging.getLogger(program)
    logging.basicConfig(format=LOG_FORMAT)
    logging.root.setLevel(level=getattr(logging, settings.LOG_LEVEL, logging.INFO))
    return log


def configure(level=None, log_file=None):
    """
    Re-level the root logger and optionally mirror records into a run log file.

    Called once by the CLI after flags are parsed; modules keep the handle they
    got from logger() at import time.

    Args:
        level (str): Logging level name, e.g. "DEBUG" (None keeps settings.LOG_LEVEL).
        log_file (str): Path of a log file to append to (None for console only).
    """
    if level:
        logging.root.setLevel(level=getattr(logging, level.upper(), logging.INFO))
    if log_file:
        handler = logging.FileHandler(log_file, encoding='utf-8')
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logging.root.addHandler(handler)
