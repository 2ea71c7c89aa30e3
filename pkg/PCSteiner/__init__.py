# -*- coding: utf-8 -*-
# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

from pkgutil import extend_path
__path__ = extend_path(__path__, __name__)
