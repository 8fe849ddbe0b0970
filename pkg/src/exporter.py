"""
Report and file export for afkit.
Provides the Report value (JSON/text) and CSV / graph-format exports.
"""

import csv
import datetime
import json
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .graph import Graph, build_graph
from .graph_file import write_graph_file
from .resonance import FaceSet, ZGraph

logger = logging.getLogger(__name__)

REPORT_VERSION = '1.0'


def _now() -> str:
    return datetime.datetime.now().isoformat(timespec='seconds')


@dataclass
class Report:
    """Result of one CLI command, identical in JSON and text form."""
    input: str
    task: str
    values: dict = field(default_factory=dict)
    caps: dict = field(default_factory=dict)
    elapsed_seconds: float = 0.0
    generated_at: str = field(default_factory=_now)
    version: str = REPORT_VERSION

    def __post_init__(self):
        if 'spectrum' in self.values:
            self.values['spectrum'] = sorted(self.values['spectrum'])

    def to_dict(self) -> dict:
        return {
            'report_info': {
                'generated_at': self.generated_at,
                'version': self.version,
            },
            'input': self.input,
            'task': self.task,
            'values': self.values,
            'caps': self.caps,
            'elapsed_seconds': self.elapsed_seconds,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'Report':
        info = data.get('report_info', {})
        return cls(
            input=data['input'],
            task=data['task'],
            values=dict(data.get('values', {})),
            caps=dict(data.get('caps', {})),
            elapsed_seconds=float(data.get('elapsed_seconds', 0.0)),
            generated_at=info.get('generated_at', _now()),
            version=info.get('version', REPORT_VERSION),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"input: {self.input}", f"task: {self.task}"]
        for key, value in self.values.items():
            lines.append(f"{key}: {_text_value(value)}")
        if self.caps:
            lines.append("caps: " + " ".join(f"{k}={v}" for k, v in sorted(self.caps.items())))
        lines.append(f"elapsed: {self.elapsed_seconds:.3f}s")
        return "\n".join(lines)

    def render(self, output_format: str) -> str:
        return self.to_json() if output_format == 'json' else self.to_text()


def _text_value(value) -> str:
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, (list, tuple)) and all(isinstance(v, (int, str)) and not isinstance(v, bool)
                                                for v in value):
        return " ".join(str(v) for v in value) if value else "(none)"
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value, sort_keys=True)
    return str(value)


class DataExporter:
    """Writes solver results to disk.

    Every export method returns True on success. Write failures are
    logged and reported as False so the caller decides the exit code.
    """

    def __init__(self, graph: Optional[Graph] = None):
        self.graph = graph

    def export_report_json(self, filepath: str, report: Report) -> bool:
        """Write a report in its JSON form.

        Args:
            filepath: Destination file, overwritten if present.
            report: The report to write.

        Returns:
            True if the file was written.
        """
        try:
            with open(filepath, 'w', encoding='utf-8') as f:
                f.write(report.to_json())
                f.write("\n")
            return True
        except OSError as e:
            logger.error("Export error: %s", e)
            return False

    def export_per_matching_csv(self, filepath: str, table: Sequence) -> bool:
        """One row per perfect matching: index, edge ids, af(G, M).

        Args:
            filepath: Destination CSV file.
            table: (Matching, af) pairs in enumeration order.

        Returns:
            True if the file was written.
        """
        try:
            with open(filepath, 'w', newline='', encoding='utf-8') as f:
                writer = csv.writer(f)
                writer.writerow(['Matching', 'Edge IDs', 'af'])
                for idx, (matching, value) in enumerate(table):
                    writer.writerow([idx, " ".join(str(e) for e in matching.edge_ids), value])
            return True
        except OSError as e:
            logger.error("Export error: %s", e)
            return False

    def export_z_graph(self, filepath: str, z: ZGraph, af_values: Optional[List[int]] = None) -> bool:
        """Z(G) in the graph text format plus a ``.nodes.csv`` sidecar
        naming the matching behind each node.

        Args:
            filepath: Graph file; the sidecar is ``filepath + '.nodes.csv'``.
            z: The Z-transformation graph.
            af_values: Optional af(G, M) per node, added as a sidecar column.

        Returns:
            True if both files were written.
        """
        try:
            comments = [f"Z-transformation graph of a {self.graph.vertex_count}-vertex graph",
                        f"{len(z.nodes)} nodes, {len(z.links)} links"]
            write_graph_file(filepath, build_graph(len(z.nodes), z.links), comments=comments)
            with open(filepath + '.nodes.csv', 'w', newline='', encoding='utf-8') as f:
                writer = csv.writer(f)
                header = ['Node', 'Edge IDs', 'Degree']
                if af_values is not None:
                    header.append('af')
                writer.writerow(header)
                for idx, matching in enumerate(z.nodes):
                    row = [idx, " ".join(str(e) for e in matching.edge_ids), z.degree(idx)]
                    if af_values is not None:
                        row.append(af_values[idx])
                    writer.writerow(row)
            return True
        except OSError as e:
            logger.error("Export error: %s", e)
            return False

    def export_faces(self, filepath: str, faces: FaceSet, comments: Sequence[str] = ()) -> bool:
        """The graph with its interior faces and the marked exterior face."""
        try:
            write_graph_file(filepath, self.graph, faces.interior, faces.exterior, comments)
            return True
        except OSError as e:
            logger.error("Export error: %s", e)
            return False
