from pathlib import Path

import polars as pl

from tridecomp.interfaces import TriangleWeightReport
from tridecomp.scalar import format_scalar


def _column(values: list) -> list:
    """Exact values become ``"p/q"`` strings, floats stay floats."""
    return [format_scalar(value) for value in values]


def report_frames(report: TriangleWeightReport) -> tuple[pl.DataFrame, pl.DataFrame]:
    """Function to provide triangle and edge tables of a report"""

    triangles = pl.DataFrame(
        {
            "a": [record.a for record in report.triangles],
            "b": [record.b for record in report.triangles],
            "c": [record.c for record in report.triangles],
            "weight": _column([record.weight for record in report.triangles]),
        },
        schema_overrides={"a": pl.Int64, "b": pl.Int64, "c": pl.Int64},
    )
    edges = pl.DataFrame(
        {
            "u": [record.u for record in report.edge_sums],
            "v": [record.v for record in report.edge_sums],
            "total": _column([record.total for record in report.edge_sums]),
        },
        schema_overrides={"u": pl.Int64, "v": pl.Int64},
    )
    return triangles, edges


def write_report_csv(report: TriangleWeightReport, out_path: Path) -> tuple[Path, Path]:
    """Dump a report as ``<stem>.triangles.csv`` and ``<stem>.edges.csv``."""
    out_path = Path(out_path)
    triangles, edges = report_frames(report)
    triangle_file = out_path.with_name(f"{out_path.stem}.triangles.csv")
    edge_file = out_path.with_name(f"{out_path.stem}.edges.csv")
    triangles.write_csv(triangle_file)
    edges.write_csv(edge_file)
    return triangle_file, edge_file
