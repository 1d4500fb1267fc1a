import logging
import threading
import time

import pytest
from taxstop import ordered_map
from taxstop import taxstop_init_logger

logger = logging.getLogger('test_logging')


@pytest.fixture
def root_logger():
    """Restore the root logger after a test reconfigures it."""
    root = logging.getLogger()
    handlers = list(root.handlers)
    level = root.level
    yield root
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


class TestLogger:
    def test_file(self, root_logger, tmp_path):
        """Messages of every level reach the log file."""
        log_path = tmp_path / 'taxstop.log'
        assert (
            taxstop_init_logger(
                logging.WARNING, log_path=log_path, log_path_level=logging.DEBUG
            )
            == log_path
        )

        log_messages = ['debug test', 'info test', 'warning test', 'error test']
        logger.debug(log_messages[0])
        logger.info(log_messages[1])
        logger.warning(log_messages[2])
        logger.error(log_messages[3])
        for handler in root_logger.handlers:
            handler.flush()

        log = log_path.read_text()
        for m in log_messages:
            assert m in log

    def test_directory(self, root_logger, tmp_path):
        log_path = taxstop_init_logger(
            logging.INFO, log_path=tmp_path, prefix='taxstop', file_size=1000
        )
        assert log_path.parent == tmp_path
        assert log_path.name.startswith('taxstop-')
        assert log_path.suffix == '.log'

    def test_console_only(self, root_logger, capsys):
        assert taxstop_init_logger(logging.INFO) is None
        logger.info('console test')
        captured = capsys.readouterr()
        assert captured.out == ''


class TestOrderedMap:
    def test_order(self):
        def slow_square(x):
            time.sleep(0.01 * (5 - x))
            return x * x

        assert ordered_map(slow_square, range(5), workers=5) == [0, 1, 4, 9, 16]

    def test_inline(self):
        names = ordered_map(lambda _: threading.current_thread().name, [1, 2], 1)
        assert names == [threading.current_thread().name] * 2

    def test_empty(self):
        assert ordered_map(lambda x: x, []) == []

    def test_errors(self):
        def fail(x):
            raise RuntimeError(f'item {x}')

        with pytest.raises(RuntimeError):
            ordered_map(fail, [1, 2, 3], workers=2)
        with pytest.raises(ValueError):
            ordered_map(fail, [1], workers=0)
