"""Output rendering: the JSON envelope ``{config, result}`` and plain-text tables."""

import io
import json
from collections.abc import Sequence
from itertools import groupby
from typing import Any

from rich import box
from rich.console import Console
from rich.table import Table

from .affine import grade
from .models import JobConfig
from .rank2 import Rank2Series
from .series import LatticeSeries, QSeries

TABLE_WIDTH = 120


def to_payload(result: Any) -> Any:
    """JSON-able form of an engine result."""
    if isinstance(result, LatticeSeries | QSeries | Rank2Series):
        return result.to_json()
    if isinstance(result, dict):
        return {str(k): to_payload(v) for k, v in result.items()}
    if isinstance(result, list | tuple):
        return [to_payload(v) for v in result]
    if isinstance(result, int | float | str | bool) or result is None:
        return result
    return str(result)


def render_json(config: JobConfig, result: Any) -> str:
    envelope = {"config": config.model_dump(mode="json"), "result": to_payload(result)}
    return json.dumps(envelope, indent=2) + "\n"


def _export(tables: Sequence[Table]) -> str:
    console = Console(file=io.StringIO(), width=TABLE_WIDTH, color_system=None, force_terminal=False)
    for table in tables:
        console.print(table)
    return console.file.getvalue()


def _table(title: str, headers: Sequence[str]) -> Table:
    # titles wrap at the table width
    table = Table(title=title, box=box.SIMPLE, title_justify="left", min_width=len(title) + 4)
    for header in headers:
        table.add_column(header, justify="right" if header != "coefficient" else "left")
    return table


def lattice_tables(series: LatticeSeries) -> list[Table]:
    """One table per power of q, monomials in canonical order."""
    tables = []
    items = sorted(series.items(), key=lambda item: (item[0].central, series.canonical_key(item[0])))
    for c, layer in groupby(items, key=lambda item: item[0].central):
        table = _table(f"q^{c}", ("z", "v", "grade", "coefficient"))
        for x, coeff in layer:
            table.add_row(",".join(str(a) for a in x.finite), str(x.loop), str(grade(series.rs, x)), str(coeff))
        tables.append(table)
    if not tables:
        tables.append(_table(f"{series.rs.label}: zero series", ("z", "v", "grade", "coefficient")))
    return tables


def q_series_table(series: QSeries, variable: str = "q") -> Table:
    table = _table(f"exact through {variable}^{series.order}", ("n", "coefficient"))
    for n, c in enumerate(series.coefficients()):
        table.add_row(str(n), str(c))
    return table


def rows_table(title: str, headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> Table:
    table = _table(title, headers)
    for row in rows:
        table.add_row(*(str(v) for v in row))
    return table


def render_table(result: Any, title: str = "") -> str:
    """Plain-text rendering of a series, a rank-two stream or a list of rows."""
    if isinstance(result, LatticeSeries):
        return _export(lattice_tables(result))
    if isinstance(result, QSeries):
        return _export([q_series_table(result)])
    if isinstance(result, Rank2Series):
        rows = [(-k, c) for k, c in enumerate(result.stream())]
        return _export([rows_table(title or "rank-two series", ("a1", "coefficient"), rows)])
    if isinstance(result, Table):
        return _export([result])
    if isinstance(result, list) and all(isinstance(t, Table) for t in result):
        return _export(result)
    return f"{result}\n"


def render(config: JobConfig, result: Any, table: Any = None) -> str:
    """Render per ``config.output_format``; ``table`` overrides what the table view shows."""
    if config.output_format == "json":
        return render_json(config, result)
    return render_table(result if table is None else table, config.command)
