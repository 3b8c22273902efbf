import io
import json
from contextlib import redirect_stderr, redirect_stdout

import pytest

from tidyscale.cli import main


@pytest.fixture
def instance_file(tmp_path):
    """Write an instance document to a temp file and return its path."""
    count = [0]

    def write(doc) -> str:
        count[0] += 1
        path = tmp_path / f"inst{count[0]}.json"
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc), encoding="utf-8")
        return str(path)

    return write


def run_cli(*argv):
    """In-process CLI call: (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main([str(a) for a in argv])
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def cli():
    return run_cli
