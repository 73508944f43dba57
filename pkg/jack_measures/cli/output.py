import csv
import json
from typing import IO, Any, Dict, Iterable, List, Sequence

from .. import __version__

Row = Sequence[Any]


def metadata(command: str, **extra: Any) -> Dict[str, Any]:
    """The metadata block of every emitted table."""
    block: Dict[str, Any] = {"version": __version__, "command": command}
    block.update({key: value for key, value in extra.items() if value is not None})
    return block


def _cell(value: Any) -> Any:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return " ".join(str(v) for v in value)
    return value


def write_csv(out: IO[str], header: Sequence[str], rows: Iterable[Row], meta: Dict[str, Any]) -> None:
    """
    Writes a '#'-prefixed metadata block, a header row and the data rows.

    Args:
        out: The output stream.
        header: The column names.
        rows: The data rows.
        meta: The metadata block.
    """
    for key, value in meta.items():
        out.write(f"# {key}: {json.dumps(value, sort_keys=True, default=str)}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(value) for value in row])


def write_json(out: IO[str], header: Sequence[str], rows: Iterable[Row], meta: Dict[str, Any]) -> None:
    records: List[Dict[str, Any]] = [dict(zip(header, row)) for row in rows]
    json.dump({"metadata": meta, "data": records}, out, indent=2, sort_keys=True, default=str)
    out.write("\n")


def emit(out: IO[str], fmt: str, header: Sequence[str], rows: Iterable[Row], meta: Dict[str, Any]) -> None:
    if fmt == "json":
        write_json(out, header, rows, meta)
    else:
        write_csv(out, header, rows, meta)
