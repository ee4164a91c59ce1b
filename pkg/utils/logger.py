import json
import logging
import sys
import threading
from typing import IO, Any, Dict, Iterable, Optional

import jsonlines
from pythonjsonlogger import jsonlogger

PLAIN_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'
JSON_FORMAT = '%(asctime)s %(levelname)s %(name)s %(message)s'


def setup_logging(level: str = "WARNING", json_format: bool = False, stream: Optional[IO] = None) -> None:
    """
    Configure the root logger once for the CLI.

    Logs go to stderr by default so stdout stays free for reports.
    """
    handler = logging.StreamHandler(stream or sys.stderr)
    if json_format:
        handler.setFormatter(jsonlogger.JsonFormatter(JSON_FORMAT))
    else:
        handler.setFormatter(logging.Formatter(PLAIN_FORMAT))
    root = logging.getLogger()
    for existing in list(root.handlers):
        root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(getattr(logging, level.upper(), logging.WARNING))


class ReportWriter:
    """
    Serialized JSON Lines sink for verification reports.

    Writes to a file when a path is given, otherwise to the given stream
    (stdout by default). Keys are sorted so equal reports serialize to
    identical bytes.
    """

    def __init__(self, path: Optional[str] = None, stream: Optional[IO] = None):
        self._lock = threading.Lock()
        self._file = open(path, 'w', encoding='utf-8') if path else None
        target = self._file or stream or sys.stdout
        self._writer = jsonlines.Writer(target, compact=True, sort_keys=True, flush=True)
        self.count = 0

    def write(self, record: Dict[str, Any]) -> None:
        with self._lock:
            self._writer.write(record)
            self.count += 1

    def write_all(self, records: Iterable[Dict[str, Any]]) -> None:
        for record in records:
            self.write(record)

    def close(self) -> None:
        self._writer.close()
        if self._file:
            self._file.close()

    def __enter__(self) -> "ReportWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def dump_json(payload: Dict[str, Any], stream: Optional[IO] = None) -> None:
    """Print one object as a sorted, compact JSON line."""
    out = stream or sys.stdout
    out.write(json.dumps(payload, sort_keys=True, separators=(',', ':')) + '\n')
    out.flush()


if __name__ == '__main__':
    setup_logging("INFO")
    logging.getLogger(__name__).info("Writing a sample report to stdout")
    with ReportWriter() as writer:
        writer.write({"identity_id": "eq2.2", "metric": 0, "passed": True})
