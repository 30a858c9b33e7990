from __future__ import annotations

import json
import sys
import time
from fractions import Fraction


def _plain(value):
    """Make engine values (Fractions, vectors, sets) JSON/text friendly."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value, key=str) if isinstance(value, (set, frozenset)) else value
        return [_plain(v) for v in items]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return value


class JsonLogger:
    """Minimal structured logger.

    Emits single-line events for engine milestones (fold steps, ratio checks,
    reducibility stamps) so runs are easy to grep and machine-parse. Events go
    to stderr; stdout is reserved for the command's artifact."""
    def __init__(self, enable_json: bool = False, verbose: bool = False, stream=None):
        """Create a logger.

        Args:
            enable_json: When True, emit one-line JSON; otherwise a human-readable text line.
            verbose: When False, events emitted through debug() are dropped.
            stream: Output stream (default: sys.stderr at emit time).
        """
        self.enable_json = enable_json
        self.verbose = verbose
        self.stream = stream

    def emit(self, event: str, **fields):
        """Emit an event with a name and optional key/value fields."""
        t = time.time()
        # ts: float seconds since epoch. ts_iso is a local timestamp with milliseconds.
        ts_iso = time.strftime('%Y-%m-%d %H:%M:%S', time.localtime(t)) + f'.{int((t - int(t))*1000):03d}'
        fields = {k: _plain(v) for k, v in fields.items()}
        out = self.stream if self.stream is not None else sys.stderr
        if self.enable_json:
            payload = {"ts": t, "ts_iso": ts_iso, "event": event, **fields}
            print(json.dumps(payload, sort_keys=True), file=out, flush=True)
        else:
            msg = f"[{ts_iso}] {event}"
            if fields:
                msg += " " + " ".join(f"{k}={v}" for k, v in fields.items())
            print(msg, file=out, flush=True)

    def debug(self, event: str, **fields):
        """Emit only when verbose (per-step breadcrumbs)."""
        if self.verbose:
            self.emit(event, **fields)


# library calls without a logger report milestones as text on stderr
DEFAULT_LOGGER = JsonLogger(enable_json=False)


def resolve_logger(logger):
    return logger if logger is not None else DEFAULT_LOGGER
