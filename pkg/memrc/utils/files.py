import csv
import io
import os
from pathlib import Path
from typing import Iterable, Sequence, Union


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """Writes to a temporary sibling and renames it over `path`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)
    return path


def csv_text(
    header: Sequence[str], rows: Iterable[Sequence[object]], comments: Sequence[str] = ()
) -> str:
    buffer = io.StringIO()
    for comment in comments:
        buffer.write(f"# {comment}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()
