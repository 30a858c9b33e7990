import importlib.util
import sys
import builtins
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURES = REPO_ROOT / "fixtures"


def load_module():
    script = REPO_ROOT / "multicommodity-flow.py"
    spec = importlib.util.spec_from_file_location("multicommodity_flow", script)
    mod = importlib.util.module_from_spec(spec)
    sys.modules["multicommodity_flow"] = mod
    assert spec.loader is not None
    spec.loader.exec_module(mod)
    return mod


def load_fixture(name: str):
    """Parse fixtures/<name>.json into an EnhancedNetwork."""
    from mcflow.document import load_document
    return load_document(FIXTURES / f"{name}.json").to_network()


class CapturingLogger:
    """Matches the engines' .emit(event, **fields) / .debug(...) contract."""

    def __init__(self, verbose: bool = True):
        self.verbose = verbose
        self.events = []

    def emit(self, event: str, **fields):
        self.events.append((event, fields))

    def debug(self, event: str, **fields):
        if self.verbose:
            self.emit(event, **fields)

    def names(self):
        return [e for e, _ in self.events]


# Expose helpers for tests without explicit imports.
builtins.load_module = load_module
builtins.load_fixture = load_fixture
builtins.FIXTURES = FIXTURES
builtins.CapturingLogger = CapturingLogger
