# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

import logging

import pytest

from PCSteiner.Planar import AppLogger


@pytest.fixture
def logDir(tmp_path, monkeypatch):
    monkeypatch.setattr(AppLogger, 'logDirectory', str(tmp_path))
    return tmp_path


def _fileHandlers(logger):
    return [h for h in logger.handlers if isinstance(h, logging.FileHandler)]


def test_off_has_only_a_stream(logDir):
    logger = AppLogger.getLogger('pcsteiner.test.off')
    assert len(logger.handlers) == 1
    assert logger.level == logging.INFO


def test_error_level(logDir):
    logger = AppLogger.getLogger('pcsteiner.test.error', loggingSetup='error')
    handlers = _fileHandlers(logger)
    assert len(handlers) == 1
    assert handlers[0].level == logging.ERROR
    logger.error("Could not solve, reason: test")
    handlers[0].flush()
    assert "Could not solve" in (logDir / "error.log").read_text()


def test_full_level_with_debug(logDir):
    logger = AppLogger.getLogger('pcsteiner.test.full', True, 'full')
    assert logger.level == logging.DEBUG
    assert len(_fileHandlers(logger)) == 2
    assert (logDir / "pcsteiner.log").exists()


def test_handlers_are_replaced(logDir):
    AppLogger.getLogger('pcsteiner.test.again', loggingSetup='full')
    logger = AppLogger.getLogger('pcsteiner.test.again')
    assert len(logger.handlers) == 1


def test_set_log_directory(tmp_path, monkeypatch):
    monkeypatch.setattr(AppLogger, 'logDirectory', AppLogger.logDirectory)
    target = tmp_path / "nested" / "logs"
    AppLogger.setLogDirectory(str(target))
    assert target.is_dir()
    assert AppLogger.logDirectory == str(target)
