"""
Tests for face-level computations: resonance, Z-transformation graphs and
the single-edge characterizations.
"""

import os
import sys
import unittest

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.chain import parse_chain, realize
from src.errors import BadFaceSetError, NotElementaryError
from src.graph import build_graph, enumerate_perfect_matchings
from src.resonance import (
    af_step_bound,
    common_path_length,
    face_set_from_cycles,
    has_antiforcing_edge_characterization,
    has_forcing_edge_characterization,
    resonant_faces,
    z_connected,
    z_graph,
)
from src.solver import af_of_matching, af_table, max_anti_forcing


def hexagon():
    g = build_graph(6, [(i, (i + 1) % 6) for i in range(6)])
    return g, face_set_from_cycles(g, [range(6)], range(6))


# ==================== Face sets ====================

class TestFaceSet(unittest.TestCase):

    def test_stores_edge_sets(self):
        """Test faces stored as edge sets."""
        g, faces = hexagon()
        self.assertEqual(faces.interior_edges, (tuple(range(6)),))
        self.assertEqual(faces.exterior_index, 1)
        self.assertEqual(faces.boundary(1), tuple(range(6)))

    def test_rejects_non_cycle(self):
        """Test a face that is not a cycle."""
        g, _ = hexagon()
        with self.assertRaises(BadFaceSetError):
            face_set_from_cycles(g, [[0, 1, 3]])
        with self.assertRaises(BadFaceSetError):
            face_set_from_cycles(g, [[0, 1]])

    def test_rejects_duplicate_face(self):
        """Test duplicate faces."""
        g, _ = hexagon()
        with self.assertRaises(BadFaceSetError):
            face_set_from_cycles(g, [range(6), [5, 4, 3, 2, 1, 0]])

    def test_rejects_foreign_graph(self):
        """Test faces using edges of another graph."""
        g, faces = hexagon()
        other = build_graph(6, [(i, (i + 1) % 6) for i in range(6)] + [(0, 3)])
        with self.assertRaises(BadFaceSetError):
            resonant_faces(other, faces, enumerate_perfect_matchings(other, 10)[0])


class TestResonance(unittest.TestCase):

    def test_hexagon_is_always_resonant(self):
        """Test that a hexagon is resonant for both matchings."""
        g, faces = hexagon()
        for m in enumerate_perfect_matchings(g, 10):
            self.assertEqual(resonant_faces(g, faces, m), (0,))
            self.assertEqual(resonant_faces(g, faces, m, include_exterior=True), (0, 1))

    def test_max_af_equals_resonant_count(self):
        """Test maximizers have Af resonant faces."""
        g, faces = realize(parse_chain("6 6@1 6"))
        value, best = max_anti_forcing(g)
        for m in best:
            self.assertEqual(len(resonant_faces(g, faces, m)), value)

    def test_common_path_length(self):
        """Test shared boundary path lengths."""
        g, faces = realize(parse_chain("6 6"))
        first, second = faces.interior_edges
        self.assertEqual(common_path_length(g, first, second), 1)
        self.assertEqual(common_path_length(g, first, first), 6)
        # terminal hexagon shares five edges with the periphery
        self.assertEqual(common_path_length(g, first, faces.exterior_edges), 5)


# ==================== Z-transformation graph ====================

class TestZGraph(unittest.TestCase):

    def test_hexagon(self):
        """Test Z(G) of a hexagon."""
        g, faces = hexagon()
        z = z_graph(g, faces)
        self.assertEqual(len(z.nodes), 2)
        self.assertEqual(z.links, ((0, 1),))
        self.assertTrue(z_connected(z))
        self.assertEqual(z.degree(0), 1)

    def test_naphthalene_and_anthracene(self):
        """Test Z(G) sizes of two small chains."""
        for text, count in (("6 6", 3), ("6 6@2 6", 4)):
            with self.subTest(chain=text):
                g, faces = realize(parse_chain(text))
                z = z_graph(g, faces)
                self.assertEqual(len(z.nodes), count)
                self.assertTrue(z_connected(z))

    def test_af_changes_by_at_most_two_per_twist(self):
        """Test af along Z(G) links."""
        g, faces = realize(parse_chain("6 6@1 6@2 6"))
        z = z_graph(g, faces)
        table = dict(af_table(g))
        self.assertLessEqual(af_step_bound(z, [table[m] for m in z.nodes]), 2)

    def test_disconnected_z_graph(self):
        """Test connectivity and the step bound once the links are dropped."""
        g, faces = hexagon()
        z = z_graph(g, faces)
        lonely = type(z)(nodes=z.nodes, links=())
        self.assertFalse(z_connected(lonely))
        self.assertEqual(af_step_bound(lonely, [1, 1]), 0)


# ==================== Single-edge characterizations ====================

class TestCharacterizations(unittest.TestCase):

    def test_hexagon(self):
        """Test both characterizations on a hexagon."""
        g, faces = hexagon()
        self.assertFalse(has_antiforcing_edge_characterization(g, faces))
        self.assertTrue(has_antiforcing_edge_characterization(g, faces, include_exterior=True))
        self.assertTrue(has_forcing_edge_characterization(g, faces))

    def test_naphthalene_needs_the_exterior_face(self):
        """Test naphthalene with and without the exterior face."""
        # interior faces of a chain share single edges only
        g, faces = realize(parse_chain("6 6"))
        self.assertFalse(has_antiforcing_edge_characterization(g, faces))
        self.assertTrue(has_antiforcing_edge_characterization(g, faces, include_exterior=True))

    def test_forcing_needs_exterior(self):
        """Test the forcing characterization requires an exterior face."""
        g, _ = hexagon()
        interior_only = face_set_from_cycles(g, [range(6)])
        with self.assertRaises(BadFaceSetError):
            has_forcing_edge_characterization(g, interior_only)

    def test_needs_elementary(self):
        """Test that non-elementary graphs are rejected."""
        g = build_graph(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
        faces = face_set_from_cycles(g, [[0, 1, 2]])
        with self.assertRaises(NotElementaryError):
            has_antiforcing_edge_characterization(g, faces)

    def test_witness_edge_is_single(self):
        g, faces = hexagon()
        m = enumerate_perfect_matchings(g, 10)[0]
        self.assertEqual(len(af_of_matching(g, m).witness), 1)


if __name__ == '__main__':
    unittest.main()
