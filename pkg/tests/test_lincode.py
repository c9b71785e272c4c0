import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from keycast.field import GF2k
from keycast.generators import gen_fig3
from keycast.graph import make_instance
from keycast.lincode import (
    CodeError,
    EnumerationCapExceeded,
    LinearCode,
    check_decoding,
    check_pairwise_independence,
    check_secrecy,
    entropy_bits,
    exhaustive_mi_oracle,
    export_code,
    import_code,
    in_span,
    mutual_information,
    mutual_information_rank,
    rank,
    span,
    validate_local_computability,
    verify_code,
)
from keycast.nonsecure import construct

GF4 = GF2k(2)


def brute_rank(vectors, F):
    """log_q of the number of distinct combinations; no elimination involved."""
    vectors = list(vectors)
    if not vectors:
        return 0
    m = len(vectors[0])
    combos = set()
    for coeffs in itertools.product(range(F.order), repeat=len(vectors)):
        acc = [0] * m
        for c, v in zip(coeffs, vectors):
            acc = [a ^ F.mul(c, x) for a, x in zip(acc, v)]
        combos.add(tuple(acc))
    r, size = 0, 1
    while size < len(combos):
        size *= F.order
        r += 1
    assert size == len(combos)
    return r


def vectors(k, m, max_count):
    return st.lists(st.tuples(*[st.integers(0, (1 << k) - 1)] * m), min_size=0, max_size=max_count)


@st.composite
def linear_setup(draw, max_tuples=4096):
    k = draw(st.integers(1, 3))
    m = draw(st.integers(1, 3))
    while (1 << k) ** m > max_tuples:
        m -= 1
    key = draw(st.tuples(*[st.integers(0, (1 << k) - 1)] * m).filter(any))
    obs = draw(vectors(k, m, 3))
    return GF2k(k), m, key, obs


# --- local computability --------------------------------------------------------


def test_forwarding_line_is_local(line):
    code = LinearCode(("a", "b"), GF4, {0: (1, 1), 1: (1, 1)}, {1: (1, 1)})
    assert validate_local_computability(line, code).ok


def test_diamond_bad_edge(diamond):
    code = LinearCode(("a", "b"), GF4, {0: (1, 1), 1: (1, 3), 2: (1, 2), 3: (1, 3)}, {1: (1, 3)})
    res = validate_local_computability(diamond, code)
    assert not res.ok and res.edge == 2


def test_missing_edge_vector(line):
    code = LinearCode(("a", "b"), GF4, {0: (1, 1)}, {1: (1, 1)})
    with pytest.raises(CodeError):
        validate_local_computability(line, code)


# --- rank and entropy ----------------------------------------------------------


@pytest.mark.parametrize("vecs,r", [([(1, 1)], 1), ([(1, 1), (1, 2)], 2), ([(1, 1), (1, 1), (0, 0)], 1), ([], 0)])
def test_rank_examples(vecs, r):
    assert rank(vecs, GF4) == r
    assert entropy_bits(vecs, GF4) == 2 * r


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 3).flatmap(lambda k: st.tuples(st.just(k), vectors(k, 3, 4))))
def test_rank_matches_span_size(args):
    k, vecs = args
    F = GF2k(k)
    assert rank(vecs, F) == brute_rank(vecs, F)
    if vecs:
        assert len(span(vecs, F)) == F.order ** rank(vecs, F)


def test_span_of_nothing():
    assert span([], GF4, m=2) == {(0, 0)}
    with pytest.raises(CodeError):
        span([], GF4)


@pytest.mark.parametrize("k,m", [(1, 3), (2, 2), (4, 3)])
def test_full_basis_entropy(k, m):
    F = GF2k(k)
    eye = [tuple(int(i == j) for j in range(m)) for i in range(m)]
    assert entropy_bits(eye, F) == m * k


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(
    lambda k: st.tuples(st.just(k), vectors(k, 3, 3), vectors(k, 3, 3), vectors(k, 3, 3))))
def test_entropy_monotone_and_submodular(args):
    k, A, B, C = args
    F = GF2k(k)
    H = lambda vs: entropy_bits(vs, F)  # noqa: E731
    assert H(A) <= H(A + B)
    # H(A∪C) + H(B∪C) >= H(A∪B∪C) + H(C)
    assert H(A + C) + H(B + C) >= H(A + B + C) + H(C)


# --- decoding, PWI, secrecy ----------------------------------------------------


def test_decoding_examples(line):
    ok = LinearCode(("a", "b"), GF4, {0: (1, 3), 1: (1, 3)}, {1: (1, 3)})
    assert check_decoding(line, ok, "d", 1)
    bad = LinearCode(("a", "b"), GF4, {0: (1, 1), 1: (1, 1)}, {1: (1, 2)})
    assert not check_decoding(line, bad, "d", 1)
    with pytest.raises(CodeError):
        check_decoding(line, ok, "v", 1)


def test_decoding_secure_shares():
    F = GF2k(3)
    c = 5
    inst = make_instance([("s", "d"), ("s", "d")], "s", [{"d"}])
    code = LinearCode(("s", "a", "b"), F, {0: (1, c, 0), 1: (0, 1, c)}, {1: (1, c, 0)})
    assert check_decoding(inst, code, "d", 1)


def test_pairwise_independence_examples():
    code = LinearCode(("a", "b"), GF4, {}, {1: (1, 1), 2: (1, 2), 3: (2, 2)})
    verdict = check_pairwise_independence(code)
    assert verdict[(1, 2)] and verdict[(2, 3)]
    assert not verdict[(1, 3)]


def test_secrecy_examples():
    F = GF2k(3)
    inst = make_instance([("s", "v"), ("s", "v"), ("v", "x"), ("s", "d")], "s", [{"d"}])
    c, ci = 3, 6
    code = LinearCode(("s", "a", "b"), F,
                      {0: (1, c, 0), 1: (0, 1, c), 2: (1, c, 0), 3: (1, ci, 0)}, {1: (1, ci, 0)})
    assert check_secrecy(inst, code, 1, {0, 1})
    assert not check_secrecy(inst, code, 1, {3})
    assert check_secrecy(inst, code, 1, set())


# --- exhaustive oracle ----------------------------------------------------------


def test_oracle_one_time_pad():
    F = GF2k(1)
    assert mutual_information(F, [(1, 1)], [(1, 0)]) == 0
    assert mutual_information(F, [(1, 0)], [(1, 0)]) == 1


def test_oracle_fig3_keys_independent():
    res = construct(gen_fig3(3))
    code = res.code
    assert mutual_information(code.field, [code.keys[1]], [code.keys[2]]) == 0


def test_oracle_partial_information():
    # observing a+b and a over GF(2) reveals the pair (a, b); K=(a, b) has 2 bits
    F = GF2k(1)
    assert mutual_information(F, [(1, 0), (0, 1)], [(1, 1)]) == 1
    assert mutual_information(F, [(1, 0), (0, 1)], [(1, 1), (1, 0)]) == 2


def test_oracle_cap(monkeypatch, line):
    monkeypatch.setenv("KEYCAST_MAX_ENUM", "15")
    code = LinearCode(("a", "b"), GF4, {0: (1, 1), 1: (1, 1)}, {1: (1, 1)})
    with pytest.raises(EnumerationCapExceeded):
        exhaustive_mi_oracle(line, code, 1, {0})
    report = verify_code(line, code, exhaustive=True)
    assert report.ok
    assert report.counts()["SKIPPED"] > 0


@settings(max_examples=200, deadline=None)
@given(linear_setup())
def test_rank_and_oracle_agree(setup):
    F, m, key, obs = setup
    mi = mutual_information(F, [key], obs, m)
    assert mi == mutual_information_rank(F, [key], obs)
    revealed = in_span(key, obs, F)
    independent = rank(obs + [key], F) == rank(obs, F) + 1
    assert (mi == 0) == independent
    assert (mi == F.k) == revealed
    assert isinstance(mi, Fraction)


@settings(max_examples=100, deadline=None)
@given(linear_setup())
def test_pwi_matches_oracle(setup):
    F, m, key, obs = setup
    other = next((v for v in obs if any(v)), None)
    if other is None:
        return
    code = LinearCode(tuple(f"x{i}" for i in range(m)), F, {}, {1: key, 2: other})
    assert check_pairwise_independence(code)[(1, 2)] == (mutual_information(F, [key], [other], m) == 0)


# --- serialisation -------------------------------------------------------------


def test_code_round_trip(tmp_path):
    code = construct(gen_fig3(4)).code
    path = tmp_path / "code.json"
    export_code(code, path)
    assert import_code(path) == code
    data = json.loads(path.read_text())
    assert set(data) == {"field", "basis", "edges", "keys"}


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d["edges"].update({"0": [1, 2, 3]}),
        lambda d: d["field"].update({"k": 0}),
        lambda d: d.pop("keys"),
        lambda d: d["keys"].update({"1": [0, 0]}),
        lambda d: d["edges"].update({"0": [1, 99]}),
    ],
)
def test_bad_code_files(tmp_path, mutate):
    data = construct(gen_fig3(2)).code.to_json()
    mutate(data)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(CodeError):
        import_code(path)


def test_verify_reports_first_failure(line):
    code = LinearCode(("a", "b"), GF4, {0: (1, 1), 1: (1, 2)}, {1: (1, 2)})
    report = verify_code(line, code)
    assert not report.ok
    assert report.first_failure.name == "local computability"
