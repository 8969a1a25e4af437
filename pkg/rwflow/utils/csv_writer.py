"""CSV emission shared by every bench experiment: UTF-8, LF endings, shortest round-trip floats."""
import csv
import io
import sys
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np

STDOUT = "-"


def format_value(value) -> str:
    """Render one cell; floats use ``repr`` so they round-trip, ``None`` is an empty cell."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


class CsvTable:
    """Fixed header plus rows, rendered identically regardless of how rows were produced."""

    def __init__(self, columns: Sequence[str]):
        self.columns = list(columns)
        self.rows: List[List[str]] = []

    def add_row(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append([format_value(v) for v in values])

    def extend(self, rows: Iterable[Sequence]) -> None:
        for row in rows:
            self.add_row(*row)

    def __len__(self) -> int:
        return len(self.rows)

    def render(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows(self.rows)
        return buffer.getvalue()

    def write(self, destination: Optional[Union[str, Path]]) -> Optional[Path]:
        """Write to ``destination``; ``"-"`` or ``None`` writes to stdout."""
        text = self.render()
        if destination is None or str(destination) == STDOUT:
            sys.stdout.write(text)
            sys.stdout.flush()
            return None
        path = Path(destination)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as f:
            f.write(text)
        return path
