"""
Tests for the command-line front end and its exit codes.
"""

import contextlib
import io
import json
import os
import shutil
import sys
import tempfile
import unittest
from unittest import mock

import jsonschema

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src import chain, cli
from src.chain import SegmentDecomposition
from src.errors import EXIT_CAP, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE
from src.graph_file import read_graph_file

HEXAGON = "graph 6\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 0\nf 0 1 2 3 4 5\n"
K4 = "graph 4\ne 0 1\ne 0 2\ne 0 3\ne 1 2\ne 1 3\ne 2 3\n"


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def write(self, name, text):
        path = os.path.join(self.temp_dir, name)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
        return path

    def run_cli(self, *argv):
        """(exit code, stdout, stderr) with config isolated in the temp dir."""
        out, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err), \
                mock.patch.dict(os.environ, {}, clear=False):
            for var in ('AFKIT_CYCLE_CAP', 'AFKIT_PM_CAP', 'AFKIT_JOBS'):
                os.environ.pop(var, None)
            code = cli.main(['--config', self.temp_dir, *argv])
        return code, out.getvalue(), err.getvalue()

    def run_json(self, *argv):
        code, out, _ = self.run_cli('--format', 'json', *argv)
        return code, json.loads(out)

    def realized(self, spec, name='chain.txt'):
        path = os.path.join(self.temp_dir, name)
        code, _, _ = self.run_cli('chain', '--spec', spec, '--task', 'realize', '--output', path)
        self.assertEqual(code, EXIT_OK)
        return path


# ==================== exact ====================

class TestExact(CliTestCase):

    def test_hexagon_af(self):
        """Test exact af in text form."""
        code, out, _ = self.run_cli('exact', self.write('c6.txt', HEXAGON), '--task', 'af')
        self.assertEqual(code, EXIT_OK)
        self.assertIn("af: 1", out)

    def test_anthracene_spectrum(self):
        """Test the exact spectrum of anthracene."""
        code, report = self.run_json('exact', self.realized("6 6@2 6"), '--task', 'spectrum')
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report['values']['spectrum'], [1, 2])

    def test_k4_max_af(self):
        """Test the Af < r note on K4."""
        code, report = self.run_json('exact', self.write('k4.txt', K4), '--task', 'max-af')
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report['values']['max_af'], 2)
        self.assertEqual(report['values']['note'], 'Af < r')

    def test_other_tasks(self):
        """Test the remaining exact tasks."""
        path = self.realized("6 6@1 6")
        for task in ('per-matching', 'edges-anti-forcing', 'edges-forcing', 'components', 'extremal'):
            with self.subTest(task=task):
                code, report = self.run_json('exact', path, '--task', task)
                self.assertEqual(code, EXIT_OK)
                self.assertEqual(report['task'], task)
        _, report = self.run_json('exact', path, '--task', 'extremal')
        self.assertTrue(report['values']['extremal'])
        self.assertEqual(len(report['values']['ear_decomposition']['ears']), 3)

    def test_per_matching_csv(self):
        """Test --per-matching-csv."""
        csv_path = os.path.join(self.temp_dir, 'table.csv')
        code, _, _ = self.run_cli('exact', self.realized("6 6@2 6"), '--task', 'af',
                                  '--per-matching-csv', csv_path)
        self.assertEqual(code, EXIT_OK)
        with open(csv_path, encoding='utf-8') as f:
            self.assertEqual(len(f.read().splitlines()), 5)

    def test_parse_error(self):
        """Test exit code 1 on a malformed graph file."""
        code, _, err = self.run_cli('exact', self.write('bad.txt', "graph 2\ne 0 0\n"))
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("Error:", err)

    def test_cap_exceeded(self):
        """Test exit code 3 when a cap is exceeded."""
        code, _, _ = self.run_cli('--pm-cap', '1', 'exact', self.write('c6.txt', HEXAGON))
        self.assertEqual(code, EXIT_CAP)

    def test_flags_after_command(self):
        """Test global flags given after the command."""
        code, _, _ = self.run_cli('exact', self.write('c6.txt', HEXAGON), '--pm-cap', '1')
        self.assertEqual(code, EXIT_CAP)


# ==================== chain ====================

class TestChain(CliTestCase):

    def test_af(self):
        """Test chain af."""
        code, out, _ = self.run_cli('chain', '--spec', '4 4@1 4@1 4@1 4', '--task', 'af')
        self.assertEqual(code, EXIT_OK)
        self.assertIn("af: 3", out)

    def test_spectrum(self):
        code, out, _ = self.run_cli('chain', '--spec', '6 6@1 6', '--task', 'spectrum')
        self.assertEqual(code, EXIT_OK)
        self.assertIn("spectrum: 1 2 3", out)

    def test_text_and_json_agree(self):
        """Test that text and JSON carry the same values."""
        _, out, _ = self.run_cli('chain', '--spec', '6 6@1 6@2 6@1 6', '--task', 'blocks')
        _, report = self.run_json('chain', '--spec', '6 6@1 6@2 6@1 6', '--task', 'blocks')
        self.assertEqual(report['values']['max_af'], 4)
        self.assertIn("max_af: 4", out)
        self.assertIn("skipped: 4", out)

    def test_tasks(self):
        """Test every chain task on a fixed chain."""
        expected = {'segments': ('af', 2), 'kinks': ('kink_count', 2), 'k-count': ('k_count', 3)}
        for task, (key, value) in expected.items():
            with self.subTest(task=task):
                code, report = self.run_json('chain', '--spec', '6 6@1 6@2 6@1 6', '--task', task)
                self.assertEqual(code, EXIT_OK)
                self.assertEqual(report['values'][key], value)
        code, report = self.run_json('chain', '--spec', '6 6@2 6', '--task', 'witness')
        self.assertEqual(len(report['values']['edge_ids']), 1)

    def test_realize_writes_faces(self):
        """Test realize --output."""
        doc = read_graph_file(self.realized("6 6@2 6"))
        self.assertEqual(doc.graph.vertex_count, 14)
        self.assertEqual(doc.graph.edge_count, 16)
        self.assertEqual(len(doc.interior_faces), 3)
        self.assertIsNotNone(doc.exterior_face)

    def test_realize_to_stdout(self):
        """Test realize to stdout."""
        code, out, _ = self.run_cli('chain', '--spec', '6', '--task', 'realize')
        self.assertEqual(code, EXIT_OK)
        self.assertIn("graph 6", out)
        self.assertIn("# exterior", out)

    def test_bad_spec(self):
        """Test exit code 1 on a bad spec."""
        code, _, _ = self.run_cli('chain', '--spec', '6 6 6', '--task', 'af')
        self.assertEqual(code, EXIT_USAGE)


# ==================== verify ====================

class TestVerify(CliTestCase):

    def test_single_chain(self):
        """Test verify on one chain."""
        code, out, _ = self.run_cli('verify', '--spec', '6 6@2 6')
        self.assertEqual(code, EXIT_OK)
        self.assertIn("failed: 0", out)

    def test_random_batch(self):
        """Test verify on a seeded batch."""
        code, report = self.run_json('verify', '--family', 'random', '--n', '4', '--count', '8',
                                     '--seed', '3', '--skip-compatible')
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report['values']['instances'], 8)

    def test_mutation_is_reported(self):
        """Test exit code 2 on a mismatch."""
        wrong = SegmentDecomposition(((0, 0), (1, 2)))
        with mock.patch.object(chain, 'segment_decomposition', return_value=wrong):
            code, report = self.run_json('verify', '--spec', '6 6@2 6')
        self.assertEqual(code, EXIT_MISMATCH)
        self.assertEqual(report['values']['failed'], 1)
        self.assertTrue(report['values']['outcomes'][0]['mismatches'])

    def test_cap(self):
        """Test exit code 3 from verify."""
        code, _, _ = self.run_cli('verify', '--spec', '6 6@2 6', '--pm-cap', '2')
        self.assertEqual(code, EXIT_CAP)

    def test_needs_input(self):
        code, _, _ = self.run_cli('verify')
        self.assertEqual(code, EXIT_USAGE)


# ==================== gen ====================

class TestGen(CliTestCase):

    def test_straight_polyomino(self):
        """Test gen for a named family."""
        code, out, _ = self.run_cli('gen', 'straight-polyomino', '5')
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.strip(), "4 4@1 4@1 4@1 4")

    def test_pipe_into_chain(self):
        """Test gen output as chain input."""
        _, out, _ = self.run_cli('gen', 'allkink-catahex', '8')
        code, report = self.run_json('chain', '--spec', out.strip(), '--task', 'af')
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report['values']['af'], 3)

    def test_random_is_reproducible(self):
        """Test seeded gen output."""
        first = self.run_cli('gen', 'random', '6', '--seed', '7')[1]
        second = self.run_cli('gen', 'random', '6', '--seed', '7')[1]
        self.assertEqual(first, second)

    def test_random_needs_seed(self):
        """Test random gen without a seed."""
        code, _, _ = self.run_cli('gen', 'random', '6')
        self.assertEqual(code, EXIT_USAGE)

    def test_bad_modes(self):
        code, _, _ = self.run_cli('gen', 'hexchain', '4', '--modes', 'Q')
        self.assertEqual(code, EXIT_USAGE)


# ==================== ztg ====================

class TestZtg(CliTestCase):

    def test_hexagon(self):
        """Test ztg on a hexagon."""
        code, report = self.run_json('ztg', self.write('c6.txt', HEXAGON))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual((report['values']['nodes'], report['values']['links']), (2, 1))
        self.assertTrue(report['values']['connected'])

    def test_chains(self):
        """Test ztg connectivity on chains."""
        for spec, nodes in (("6 6", 3), ("6 6@2 6", 4)):
            with self.subTest(chain=spec):
                code, report = self.run_json('ztg', self.realized(spec), '--af-steps')
                self.assertEqual(code, EXIT_OK)
                self.assertEqual(report['values']['nodes'], nodes)
                self.assertTrue(report['values']['connected'])
                self.assertLessEqual(report['values']['af_step_bound'], 2)

    def test_export(self):
        """Test ztg --export."""
        target = os.path.join(self.temp_dir, 'z.txt')
        code, _, _ = self.run_cli('ztg', self.realized("6 6@2 6"), '--export', target)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(read_graph_file(target).graph.vertex_count, 4)
        self.assertTrue(os.path.exists(target + '.nodes.csv'))

    def test_missing_faces(self):
        """Test ztg on a file without faces."""
        code, _, _ = self.run_cli('ztg', self.write('k4.txt', K4))
        self.assertEqual(code, EXIT_USAGE)


# ==================== Report schema ====================

SCHEMA_PATH = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                           'docs', 'report.schema.json')


class TestReportSchema(CliTestCase):
    """Every JSON report validates against docs/report.schema.json."""

    @classmethod
    def setUpClass(cls):
        with open(SCHEMA_PATH, 'r', encoding='utf-8') as f:
            cls.schema = json.load(f)

    def assert_valid(self, *argv):
        code, report = self.run_json(*argv)
        self.assertEqual(code, EXIT_OK)
        jsonschema.validate(report, self.schema)

    def test_schema_is_well_formed(self):
        """Test the published schema itself."""
        jsonschema.Draft202012Validator.check_schema(self.schema)

    def test_exact_reports(self):
        """Test every exact task."""
        path = self.realized("6 6@1 6")
        for task in cli.EXACT_TASKS:
            with self.subTest(task=task):
                self.assert_valid('exact', path, '--task', task)

    def test_chain_reports(self):
        """Test every chain task."""
        for task in cli.CHAIN_TASKS:
            with self.subTest(task=task):
                self.assert_valid('chain', '--spec', '6 6@1 6@2 6@1 6', '--task', task)

    def test_other_commands(self):
        """Test verify, gen and ztg reports."""
        self.assert_valid('verify', '--spec', '6 6@2 6')
        self.assert_valid('verify', '--family', 'random', '--n', '3', '--count', '4', '--seed', '1')
        self.assert_valid('gen', 'random', '5', '--seed', '2')
        self.assert_valid('ztg', self.realized("6 6@2 6"), '--af-steps',
                          '--export', os.path.join(self.temp_dir, 'z.txt'))

    def test_schema_rejects_bad_report(self):
        """Test that a report missing its caps is rejected."""
        _, report = self.run_json('chain', '--spec', '6 6', '--task', 'af')
        del report['caps']
        with self.assertRaises(jsonschema.ValidationError):
            jsonschema.validate(report, self.schema)

    def test_report_file(self):
        """Test that --report writes the JSON report alongside text output."""
        path = os.path.join(self.temp_dir, 'report.json')
        code, out, _ = self.run_cli('chain', '--spec', '6 6@1 6@2 6@1 6', '--task', 'blocks',
                                    '--report', path)
        self.assertEqual(code, EXIT_OK)
        self.assertIn("max_af: 4", out)
        with open(path, 'r', encoding='utf-8') as f:
            written = json.load(f)
        jsonschema.validate(written, self.schema)
        _, report = self.run_json('chain', '--spec', '6 6@1 6@2 6@1 6', '--task', 'blocks')
        self.assertEqual(written['values'], report['values'])

    def test_report_file_not_writable(self):
        """Test the exit code when the report file cannot be written."""
        path = os.path.join(self.temp_dir, 'missing', 'report.json')
        code, _, err = self.run_cli('gen', 'hexchain', '2', '--report', path)
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("could not write", err)


# ==================== Usage errors ====================

class TestUsage(CliTestCase):

    def test_unknown_command(self):
        """Test an unknown command."""
        code, _, _ = self.run_cli('frobnicate')
        self.assertEqual(code, EXIT_USAGE)

    def test_bad_flag_value(self):
        """Test a non-integer flag value."""
        code, _, _ = self.run_cli('--jobs', 'many', 'gen', 'hexchain', '2')
        self.assertEqual(code, EXIT_USAGE)

    def test_non_positive_cap(self):
        """Test a zero cap."""
        code, _, _ = self.run_cli('--cycle-cap', '0', 'gen', 'hexchain', '2')
        self.assertEqual(code, EXIT_USAGE)

    def test_help(self):
        """Test --help."""
        code, out, _ = self.run_cli('--help')
        self.assertEqual(code, EXIT_OK)
        self.assertIn("afkit", out)


if __name__ == '__main__':
    unittest.main()
