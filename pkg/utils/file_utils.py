"""
File utilities for SpanTag
Finds corpus files, writes outputs atomically and fingerprints inputs
"""

import hashlib
import os
import tempfile


def list_files(directory, extension=".txt"):
    """
    List the files of a directory with the given extension.

    Args:
        directory (str): Directory to search
        extension (str): File extension to filter by

    Returns:
        list: File paths sorted by name
    """
    if not os.path.isdir(directory):
        return []

    files = [
        os.path.join(directory, f) for f in os.listdir(directory)
        if os.path.isfile(os.path.join(directory, f)) and f.endswith(extension)
    ]
    files.sort()
    return files


def write_atomic(path, text):
    """
    Write text to a file through a temporary file and a rename.

    Args:
        path (str): Destination path
        text (str): Content, written as UTF-8 with no newline translation
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)

    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def read_text(path):
    """Read a UTF-8 file exactly, newlines untranslated."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        return f.read()


def file_digest(path):
    """
    SHA-256 of a file, or of every file below a directory.

    Directory digests cover relative names and contents in sorted order, so
    they change when any file is added, removed or edited.

    Args:
        path (str): File or directory

    Returns:
        str: Hex digest
    """
    sha = hashlib.sha256()
    if os.path.isdir(path):
        for root, dirs, files in os.walk(path):
            dirs.sort()
            for name in sorted(files):
                full = os.path.join(root, name)
                sha.update(os.path.relpath(full, path).encode("utf-8"))
                sha.update(b"\0")
                with open(full, "rb") as f:
                    sha.update(f.read())
    else:
        with open(path, "rb") as f:
            sha.update(f.read())
    return sha.hexdigest()
