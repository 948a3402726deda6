import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gof import graphs
from gof.errors import GraphParseError, InputError, UnsupportedSizeError
from gof.graphs import SimpleGraph
from gof.rng import make_generator


def rand_graph(rng, n, p):
    return SimpleGraph.from_packed(n, rng.random(n * (n - 1) // 2) < p)


class TestSimpleGraphBasics:
    def test_from_edges(self):
        g = SimpleGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        assert g.n == 4
        assert g.edge_count() == 3
        assert g.degrees().tolist() == [1, 2, 2, 1]
        assert g.mean_connectivity_hat() == pytest.approx(0.5)

    def test_packed_round_trip(self):
        g = rand_graph(make_generator(3), 9, 0.4)
        assert SimpleGraph.from_packed(9, g.packed_upper()) == g

    def test_adjacency_is_read_only(self):
        g = SimpleGraph.from_edges(3, [(0, 1)])
        with pytest.raises(ValueError):
            g.adjacency[0, 1] = False

    def test_relabel_moves_the_hub(self):
        star = SimpleGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        moved = star.relabel([3, 0, 1, 2])
        assert moved.degrees().tolist() == [1, 1, 1, 3]
        assert sorted(moved.degrees()) == sorted(star.degrees())

    def test_relabel_rejects_non_permutation(self):
        g = SimpleGraph.from_edges(3, [(0, 1)])
        with pytest.raises(InputError):
            g.relabel([0, 0, 1])

    def test_repr_mentions_size(self):
        assert repr(SimpleGraph.from_edges(5, [(0, 1)])) == "SimpleGraph(n=5, m=1)"

    def test_single_vertex_density_undefined(self):
        g = SimpleGraph.from_edges(1, [])
        with pytest.raises(InputError):
            g.mean_connectivity_hat()


class TestSimpleGraphValidation:
    def test_rejects_self_loops(self):
        adj = np.eye(3, dtype=bool)
        with pytest.raises(InputError, match="self-loop"):
            SimpleGraph(adj)

    def test_rejects_asymmetric(self):
        adj = np.zeros((3, 3), dtype=bool)
        adj[0, 1] = True
        with pytest.raises(InputError, match="symmetric"):
            SimpleGraph(adj)

    def test_rejects_non_binary_entries(self):
        adj = np.zeros((3, 3))
        adj[0, 1] = adj[1, 0] = 2.0
        with pytest.raises(InputError, match="0 or 1"):
            SimpleGraph(adj)

    def test_rejects_non_square(self):
        with pytest.raises(InputError):
            SimpleGraph(np.zeros((2, 3), dtype=bool))

    def test_rejects_empty_matrix(self):
        with pytest.raises(InputError):
            SimpleGraph(np.zeros((0, 0), dtype=bool))

    def test_rejects_oversized_graph(self):
        n = graphs.MAX_DENSE_VERTICES + 1
        with pytest.raises(UnsupportedSizeError):
            SimpleGraph(np.zeros((n, n), dtype=bool))

    def test_from_edges_range_check(self):
        with pytest.raises(InputError):
            SimpleGraph.from_edges(3, [(0, 3)])

    def test_from_packed_length_check(self):
        with pytest.raises(InputError):
            SimpleGraph.from_packed(4, np.zeros(5, dtype=bool))

    def test_integer_adjacency_accepted(self):
        adj = np.zeros((3, 3), dtype=np.int8)
        adj[0, 1] = adj[1, 0] = 1
        assert SimpleGraph(adj).edge_count() == 1


class TestEdgeListFormat:
    def test_round_trip(self, tmp_path):
        g = rand_graph(make_generator(11), 12, 0.3)
        path = tmp_path / "g.txt"
        graphs.write_edge_list(g, path)
        assert graphs.read_edge_list(path) == g

    def test_comments_and_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("# a triangle\n\nn 3\n1 2\n\n# middle\n2 3\n1 3\n")
        g = graphs.read_edge_list(path)
        assert g.edge_count() == 3

    def test_missing_header(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("1 2\n")
        with pytest.raises(GraphParseError, match="header"):
            graphs.read_edge_list(path)

    def test_vertex_out_of_range_reports_line(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("n 4\n1 2\n3 9\n")
        with pytest.raises(GraphParseError, match="line 3"):
            graphs.read_edge_list(path)

    def test_unordered_pair_rejected(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("n 4\n2 1\n")
        with pytest.raises(GraphParseError, match="1 <= i < j"):
            graphs.read_edge_list(path)

    def test_duplicate_edge_rejected(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("n 4\n1 2\n1 2\n")
        with pytest.raises(GraphParseError, match="duplicate"):
            graphs.read_edge_list(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("# nothing\n")
        with pytest.raises(GraphParseError, match="empty"):
            graphs.read_edge_list(path)


class TestMatrixCsvFormat:
    def test_reads_matrix(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("0,1,1\n1,0,0\n1,0,0\n")
        g = graphs.read_matrix_csv(path)
        assert g.degrees().tolist() == [2, 1, 1]

    def test_bad_entry_reports_line(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("0,1\n1,2\n")
        with pytest.raises(GraphParseError, match="line 2"):
            graphs.read_matrix_csv(path)

    def test_ragged_rows_rejected(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("0,1,0\n1,0\n0,0,0\n")
        with pytest.raises(GraphParseError):
            graphs.read_matrix_csv(path)

    def test_asymmetric_rejected(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("0,1\n0,0\n")
        with pytest.raises(GraphParseError, match="symmetric"):
            graphs.read_matrix_csv(path)


def test_load_graph_sniffs_both_formats(tmp_path):
    edge_path = tmp_path / "a.txt"
    edge_path.write_text("n 3\n1 2\n")
    csv_path = tmp_path / "b.csv"
    csv_path.write_text("0,1,0\n1,0,0\n0,0,0\n")
    assert graphs.load_graph(edge_path) == graphs.load_graph(csv_path)


@st.composite
def packed_graphs(draw):
    n = draw(st.integers(min_value=2, max_value=12))
    bits = draw(
        st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2)
    )
    return SimpleGraph.from_packed(n, np.array(bits, dtype=bool))


@settings(max_examples=60, deadline=None)
@given(packed_graphs())
def test_handshake_lemma(g):
    assert int(g.degrees().sum()) == 2 * g.edge_count()


@settings(max_examples=60, deadline=None)
@given(packed_graphs(), st.randoms(use_true_random=False))
def test_relabel_preserves_degree_multiset(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = g.relabel(perm)
    assert sorted(h.degrees()) == sorted(g.degrees())
    assert h.edge_count() == g.edge_count()
