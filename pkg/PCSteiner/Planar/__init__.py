# -*- coding: utf-8 -*-
# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

"""
Prize-collecting Steiner tree and forest algorithms for planar graphs.
"""

__version__ = '0.3.0'


class PCSteinerError(Exception):
    """ Base class for every error raised by this package. """
