import numpy as np
import pytest

from motifeval.diffusion import Cascade
from motifeval.errors import ConfigError, ParseError
from motifeval.temporal import TemporalNetwork, combine_cascades, read_temporal, write_temporal


def _casc(pairs):
    return Cascade(np.asarray(pairs, dtype=np.int64).reshape(-1, 2), frozenset())


def test_single_cascade_order_kept():
    tn = combine_cascades([_casc([(0, 1), (1, 2)])], np.random.default_rng(0))
    assert tn.edges[0][:2] == (0, 1) and tn.edges[1][:2] == (1, 2)
    assert 0 < tn.t[0] < tn.t[1]


def test_empty_inputs():
    assert len(combine_cascades([], np.random.default_rng(0))) == 0
    assert len(combine_cascades([_casc([]), _casc([])], np.random.default_rng(0))) == 0


def test_bad_rate():
    with pytest.raises(ConfigError):
        combine_cascades([_casc([(0, 1)])], np.random.default_rng(0), rate=0.0)


def test_interleaving_preserves_each_cascade():
    rng = np.random.default_rng(1)
    cascades = [[(i, 100 + j) for j in range(rng.integers(0, 12))] for i in range(7)]
    tn = combine_cascades([_casc(c) for c in cascades], rng)
    assert len(tn) == sum(len(c) for c in cascades)
    assert np.all(np.diff(tn.t) > 0) and tn.t[0] > 0
    for i, c in enumerate(cascades):
        assert [(int(s), int(d)) for s, d in zip(tn.src, tn.dst) if s == i] == c


def test_deterministic_given_stream():
    cs = [_casc([(0, 1), (1, 2)]), _casc([(3, 4)])]
    a = combine_cascades(cs, np.random.default_rng(7))
    b = combine_cascades(cs, np.random.default_rng(7))
    assert a.same_as(b)


class ZeroFirstExponential:
    def __init__(self):
        self._rng = np.random.default_rng(0)
        self.calls = 0

    def exponential(self, scale):
        self.calls += 1
        return 0.0 if self.calls == 1 else self._rng.exponential(scale)

    def integers(self, n):
        return self._rng.integers(n)


def test_zero_gap_redrawn():
    rng = ZeroFirstExponential()
    tn = combine_cascades([_casc([(0, 1), (1, 2)])], rng)
    assert tn.t[0] > 0 and rng.calls == 3


def _mc_oracle(n, seed):
    """Direct simulation of the pick-uniformly / exponential-gap process."""
    rng = np.random.default_rng(seed)
    first_from_a = 0
    first_t = np.empty(n)
    for i in range(n):
        first_from_a += rng.random() < 0.5
        first_t[i] = rng.exponential(1 / 3)
    return first_from_a / n, first_t.mean()


def test_first_edge_statistics():
    a = _casc([(0, 1), (1, 2)])
    b = _casc([(5, 6), (6, 7), (7, 8)])
    n = 20_000
    from_a = np.empty(n, dtype=bool)
    first_t = np.empty(n)
    for i in range(n):
        tn = combine_cascades([a, b], np.random.default_rng([11, i]))
        from_a[i] = tn.src[0] == 0
        first_t[i] = tn.t[0]
    frac, mean_t = _mc_oracle(n, 3)
    se_frac = np.sqrt(0.25 / n)
    se_t = (1 / 3) / np.sqrt(n)
    assert abs(from_a.mean() - 0.5) < 3 * se_frac
    assert abs(first_t.mean() - 1 / 3) < 3 * se_t
    # the oracle itself agrees with the closed forms
    assert abs(frac - 0.5) < 4 * se_frac and abs(mean_t - 1 / 3) < 4 * se_t


def test_write_read_round_trip():
    cs = [_casc([(0, 1), (1, 2), (2, 0)]), _casc([(3, 4), (4, 3)])]
    tn = combine_cascades(cs, np.random.default_rng(2))
    back = read_temporal(write_temporal(tn))
    assert back.same_as(tn)


def test_read_handcrafted():
    tn = read_temporal("0 1 0.5\n1 2 1.25\n2 0 3.0000000000000004\n")
    assert tn.edges == [(0, 1, 0.5), (1, 2, 1.25), (2, 0, 3.0000000000000004)]


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("0 1 1.0\n1 2 1.0\n", 2),
        ("0 1 2.0\n1 2 1.0\n", 2),
        ("0 1\n", 1),
        ("0 1 x\n", 1),
        ("1 1 2.0\n", 1),
    ],
)
def test_read_errors(text, lineno):
    with pytest.raises(ParseError) as exc:
        read_temporal(text)
    assert exc.value.lineno == lineno


def test_read_ties_allowed_when_not_strict():
    tn = read_temporal("0 1 1.0\n1 2 1.0\n", strict=False)
    assert len(tn) == 2


def test_from_edges_node_count():
    tn = TemporalNetwork.from_edges([(0, 5, 1.0)])
    assert tn.node_count == 6
