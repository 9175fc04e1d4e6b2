"""Atomic text-file writing shared by every artifact writer."""

from __future__ import annotations

import os
import tempfile
from contextlib import contextmanager


@contextmanager
def atomic_open(path: str, newline: str | None = None):
    """Write-to-temp-then-rename so readers never observe a partial file.

    The temp file lives in the destination directory (os.replace must not
    cross filesystems). On any error the temp file is removed and the
    destination is left untouched.
    """
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline=newline) as f:
            yield f
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except FileNotFoundError:
            pass
        raise
