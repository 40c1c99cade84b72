# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
Tabular results and their CSV/JSON serialization.

CSV files start with one ``#`` comment line (invocation and version), then a
header row, then data rows. Floats are written with ``repr`` so that
read_csv() reproduces the in-memory table exactly.
"""

# stdlib
import csv
import io
import json
import logging
import math

# external
import numpy as np

# internal
from rankerg import errors
from rankerg import utils
from rankerg.version import __version__

# Module-level logger
LOG = logging.getLogger(__name__)

CSV = "csv"
JSON = "json"
FORMATS = (CSV, JSON)

_TRUE = "true"
_FALSE = "false"


class Table(object):
    """Named columns and rows of scalar values.

    Attributes:
        columns (tuple): Column names.
        rows (list): Row tuples aligned with `columns`.
        summary (dict): Scalar results that do not fit the rows.
    """

    def __init__(self, columns, rows=None, summary=None):
        self.columns = tuple(columns)
        self.rows = []
        self.summary = dict(summary or {})

        for row in rows or ():
            self.append(row)

    def append(self, row):
        row = tuple(row)

        if len(row) != len(self.columns):
            msg = "Row has {0} values for {1} columns".format(len(row), len(self.columns))
            raise errors.PreconditionError(msg, name="row", value=row)

        self.rows.append(row)

    def column(self, name):
        """Return the values of column `name` as a list."""
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def add_column(self, name, values):
        values = list(values)

        if len(values) != len(self.rows):
            msg = "Column '{0}' has {1} values for {2} rows".format(name, len(values), len(self.rows))
            raise errors.PreconditionError(msg, name=name, value=values)

        self.columns = self.columns + (name,)
        self.rows = [row + (value,) for row, value in zip(self.rows, values)]

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        try:
            return self.columns == other.columns and self.rows == other.rows
        except AttributeError:
            return False

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "{0}(columns={1}, rows={2})".format(type(self).__name__, self.columns, len(self.rows))


class DecayReport(Table):
    """Deviation against a theoretical envelope over a t-grid.

    Attributes:
        fitted_exponent (float): Least-squares slope of log(deviation) in t.
        exponent_stderr (float): Standard error of the slope.
        sup_ratio (float): Largest deviation/envelope ratio.
    """

    def __init__(self, columns, rows=None, fitted_exponent=float("nan"),
                 exponent_stderr=float("nan"), sup_ratio=float("nan"), summary=None):
        super(DecayReport, self).__init__(columns, rows, summary)
        self.fitted_exponent = fitted_exponent
        self.exponent_stderr = exponent_stderr
        self.sup_ratio = sup_ratio
        self.summary.update(
            fitted_exponent=fitted_exponent,
            exponent_stderr=exponent_stderr,
            sup_ratio=sup_ratio,
        )


def _format(value):
    if isinstance(value, (bool, np.bool_)):
        return _TRUE if value else _FALSE
    elif isinstance(value, float):
        return repr(value)
    elif isinstance(value, int):
        return str(value)
    return str(value)


def _parse(text):
    if text == _TRUE:
        return True
    elif text == _FALSE:
        return False

    with utils.ignored(ValueError):
        return int(text)

    with utils.ignored(ValueError):
        return float(text)

    return text


def comment_line(invocation):
    """The metadata comment written above every table."""
    return "rankerg {0}: {1}".format(__version__, invocation)


def write_csv(table, stream, comment=None):
    """Write `table` to the text `stream` as CSV."""
    if comment:
        stream.write("# {0}\n".format(comment))

    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(table.columns)

    for row in table.rows:
        writer.writerow([_format(value) for value in row])


def read_csv(stream):
    """Parse a CSV table written by write_csv().

    Comment lines starting with ``#`` are skipped.

    Returns:
        A Table.
    """
    lines = [line for line in stream if not line.startswith("#")]
    reader = csv.reader(lines)

    try:
        columns = next(reader)
    except StopIteration:
        raise errors.ConfigError("CSV input has no header row", path=getattr(stream, "name", None))

    return Table(columns, ([_parse(text) for text in row] for row in reader if row))


def _json_value(value):
    if isinstance(value, np.generic):
        value = value.item()

    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def write_json(table, stream, comment=None):
    """Write `table` as a JSON object with columns, rows and summary."""
    document = {
        "comment": comment,
        "columns": list(table.columns),
        "rows": [[_json_value(v) for v in row] for row in table.rows],
        "summary": dict((k, _json_value(v)) for k, v in table.summary.items()),
    }
    json.dump(document, stream, indent=2, sort_keys=True)
    stream.write("\n")


def write(table, stream, fmt=CSV, comment=None):
    """Write `table` to `stream` in the requested format."""
    if fmt == CSV:
        write_csv(table, stream, comment=comment)
    elif fmt == JSON:
        write_json(table, stream, comment=comment)
    else:
        msg = "Unknown output format '{0}'. Expected one of {1}".format(fmt, FORMATS)
        raise errors.ConfigError(msg, path=None, key="format")


def to_string(table, fmt=CSV, comment=None):
    buf = io.StringIO()
    write(table, buf, fmt=fmt, comment=comment)
    return buf.getvalue()
