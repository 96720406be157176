"""Small I/O helpers shared by the loaders and the CLI."""

import io
import os
import tempfile


def iter_text_lines(source):
    """Yield ``(line_no, text)`` pairs with line endings removed.

    ``source`` may be ``bytes``, ``str`` content, or a binary or text file
    object. Bytes are decoded as UTF-8.
    """
    if isinstance(source, bytes):
        source = io.BytesIO(source)
    elif isinstance(source, str):
        source = io.StringIO(source)
    for line_no, raw in enumerate(source, 1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        yield line_no, raw.rstrip("\r\n")


def read_text(source):
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def source_name(source, default="<stream>"):
    return getattr(source, "name", default)


def atomic_write_text(path, text):
    """Write ``text`` to ``path`` via a temp file in the same directory.

    The target is replaced only after the write fully succeeded, so a failed
    run never leaves a truncated result behind.
    """
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".semfid-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
