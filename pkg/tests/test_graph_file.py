"""
Tests for the graph text format.
"""

import os
import shutil
import sys
import tempfile
import unittest

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.errors import GraphFormatError
from src.graph import build_graph
from src.graph_file import format_graph_text, parse_graph_text, read_graph_file, write_graph_file

HEXAGON = """# benzene
graph 6
e 0 1
e 1 2
e 2 3
e 3 4
e 4 5
e 5 0
f 0 1 2 3 4 5
# exterior
f 0 5 4 3 2 1
"""


class TestParse(unittest.TestCase):

    def test_hexagon_with_exterior(self):
        """Test a face list with a marked exterior face."""
        doc = parse_graph_text(HEXAGON)
        self.assertEqual(doc.graph.vertex_count, 6)
        self.assertEqual(doc.graph.edge_count, 6)
        self.assertEqual(doc.interior_faces, [[0, 1, 2, 3, 4, 5]])
        self.assertEqual(doc.exterior_face, [0, 5, 4, 3, 2, 1])
        self.assertTrue(doc.has_faces)

    def test_plain_comment_does_not_mark_exterior(self):
        """Test that other comments leave a face interior."""
        doc = parse_graph_text("graph 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n# a square\nf 0 1 2 3\n")
        self.assertEqual(doc.interior_faces, [[0, 1, 2, 3]])
        self.assertIsNone(doc.exterior_face)

    def test_blank_lines_ignored(self):
        doc = parse_graph_text("\n\ngraph 2\n\ne 0 1\n")
        self.assertEqual(doc.graph.edges, ((0, 1),))
        self.assertFalse(doc.has_faces)

    def test_errors(self):
        """Test malformed files raise GraphFormatError."""
        bad_inputs = [
            "e 0 1\n",                      # no header
            "graph 2\ngraph 2\n",           # duplicate header
            "graph 2\ne 0\n",               # short edge
            "graph 2\ne 0 x\n",             # not an integer
            "graph 2\ne \u0660 \u0661\n",   # non-ASCII digits
            "graph \u0662\ne 0 1\n",        # non-ASCII header
            "graph 2\nq 0 1\n",             # unknown record
            "graph 2\ne 0 0\n",             # loop
            "graph 2\ne 0 1\ne 1 0\n",      # duplicate edge
            "graph 2\ne 0 5\n",             # vertex out of range
            "graph 4\nf 0 1\n",             # face too short
        ]
        for text in bad_inputs:
            with self.subTest(text=text):
                with self.assertRaises(GraphFormatError):
                    parse_graph_text(text)


class TestWrite(unittest.TestCase):

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_edges_written_sorted(self):
        """Test edges written in id order."""
        g = build_graph(3, [(2, 1), (1, 0), (0, 2)])
        text = format_graph_text(g)
        self.assertEqual(text.splitlines(), ["graph 3", "e 0 1", "e 0 2", "e 1 2"])

    def test_file_keeps_faces(self):
        """Test writing and reading back a file with faces."""
        path = os.path.join(self.temp_dir, "hexagon.txt")
        doc = parse_graph_text(HEXAGON)
        write_graph_file(path, doc.graph, doc.interior_faces, doc.exterior_face, ["benzene"])
        again = read_graph_file(path)
        self.assertEqual(again.graph, doc.graph)
        self.assertEqual(again.interior_faces, doc.interior_faces)
        self.assertEqual(again.exterior_face, doc.exterior_face)

    def test_missing_file(self):
        """Test reading a file that does not exist."""
        with self.assertRaises(GraphFormatError):
            read_graph_file(os.path.join(self.temp_dir, "nope.txt"))


if __name__ == '__main__':
    unittest.main()
