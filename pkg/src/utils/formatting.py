import csv
import io
import json
import math
from enum import Enum
from typing import Any, Iterable, Sequence, Union

Number = Union[float, str]


def clean_number(x: float, precision: int = 9) -> Number:
    """Round to ``precision`` decimals; infinities become 'inf' / '-inf'."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    value = round(float(x), precision)
    return 0.0 if value == 0.0 else value


def format_number(x: float, precision: int = 9) -> str:
    value = clean_number(x, precision)
    if isinstance(value, str):
        return value
    return f"{value:.{precision}f}"


def clean_payload(payload: Any, precision: int = 9) -> Any:
    """Apply clean_number to every float inside nested dicts and lists."""
    if isinstance(payload, bool) or payload is None:
        return payload
    if isinstance(payload, Enum):
        return payload.value
    if isinstance(payload, float):
        return clean_number(payload, precision)
    if isinstance(payload, dict):
        return {key: clean_payload(value, precision) for key, value in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [clean_payload(value, precision) for value in payload]
    return payload


def to_json(payload: Any, precision: int = 9) -> str:
    return json.dumps(clean_payload(payload, precision), indent=2) + "\n"


def to_csv(
    header: Sequence[str], rows: Iterable[Sequence[Any]], precision: int = 9
) -> str:
    """Comma-separated, LF line endings, floats at fixed precision."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [
                format_number(cell, precision)
                if isinstance(cell, float) and not isinstance(cell, bool)
                else ("" if cell is None else cell)
                for cell in row
            ]
        )
    return buffer.getvalue()
