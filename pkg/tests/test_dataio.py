import io
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mrapriori.apriori import MiningResult
from mrapriori.core import ConfigurationError, FrequentLevel, SupportThreshold, TransactionDatabase
from mrapriori.dataio import (
    TOKEN,
    GeneratorConfig,
    ParseError,
    format_relative,
    frequent_text,
    generate_synthetic,
    read_frequent,
    read_transactions,
    write_frequent,
    write_transactions,
)


def _result(*levels):
    return MiningResult(tuple(levels), SupportThreshold(absolute=1), 1, len(levels) + 1)


def test_read_integer():
    db, tokens = read_transactions(io.BytesIO(b"1 2 3\n2 3\n"))
    assert db.rows == ((1, 2, 3), (2, 3))
    assert tokens is None


def test_read_normalizes_and_skips_blank_lines():
    db, _ = read_transactions(io.StringIO("3 1 1 2\n\n  \n4\t5\r\n"))
    assert db.rows == ((1, 2, 3), (4, 5))


def test_read_token_mode():
    db, tokens = read_transactions(io.StringIO("b a\na\n"), TOKEN)
    assert tokens.token_to_id == {"b": 0, "a": 1}
    assert db.rows == ((0, 1), (1,))
    assert tokens.decode(db.rows[0]) == ["b", "a"]
    assert tokens.next_id == 2


def test_read_empty_file():
    db, _ = read_transactions(io.BytesIO(b""))
    assert len(db) == 0


@pytest.mark.parametrize("data, line", [(b"1 2\nx 3\n", 2), (b"1\n\n-4\n", 3), (b"1.5\n", 1)])
def test_read_errors_carry_line_number(data, line):
    with pytest.raises(ParseError) as info:
        read_transactions(io.BytesIO(data))
    assert info.value.line_no == line
    assert f"line {line}" in str(info.value)


def test_read_from_path(tmp_path):
    path = tmp_path / "d.dat"
    path.write_bytes(b"5 4\r\n4\r\n")
    db, _ = read_transactions(path)
    assert db.rows == ((4, 5), (4,))


def test_write_frequent_format():
    assert frequent_text(_result(FrequentLevel(1, [((1,), 3)])), 3) == "1\t3\t1.000000\n"
    assert frequent_text(_result(), 3) == ""
    assert frequent_text(_result(FrequentLevel(1), FrequentLevel(2, [((1, 2), 2)])), 3) == \
        "1 2\t2\t0.666667\n"


def test_write_frequent_orders_levels_and_itemsets():
    result = _result(FrequentLevel(1, [((2,), 2), ((1,), 2)]), FrequentLevel(2, [((1, 2), 2)]))
    buf = io.StringIO()
    write_frequent(result, 4, buf)
    assert buf.getvalue() == "1\t2\t0.500000\n2\t2\t0.500000\n1 2\t2\t0.500000\n"


@pytest.mark.parametrize("support, n, text", [
    (2, 3, "0.666667"),
    (1, 3, "0.333333"),
    (1, 8_000_000, "0.000000"),     # 0.000000125 -> ties to even (0)
    (3, 8_000_000, "0.000000"),     # 0.000000375 -> 0.000000 (below half)
    (5, 8_000_000, "0.000001"),     # 0.000000625 -> up
    (1, 2_000_000, "0.000000"),     # exactly half: ties to even
    (3, 2_000_000, "0.000002"),     # 1.5e-6 exactly: ties to even -> 2
    (7, 7, "1.000000"),
])
def test_format_relative_half_even(support, n, text):
    # oracle: exact rational value, nearest multiple of 1e-6, ties to even
    scaled = Fraction(support, n) * 10**6
    floor = scaled.numerator // scaled.denominator
    rem = scaled - floor
    q = floor + (1 if rem > Fraction(1, 2) or (rem == Fraction(1, 2) and floor % 2) else 0)
    assert f"{q // 10**6}.{q % 10**6:06d}" == text
    assert format_relative(support, n) == text


def test_read_frequent_round_trip():
    result = _result(FrequentLevel(1, [((1,), 3), ((4,), 2)]), FrequentLevel(2, [((1, 4), 2)]))
    text = frequent_text(result, 5)
    levels = read_frequent(io.StringIO(text))
    assert levels == {1: result.levels[0], 2: result.levels[1]}


def test_read_frequent_errors():
    with pytest.raises(ParseError):
        read_frequent(io.StringIO("1 2\t3\n"))
    with pytest.raises(ParseError):
        read_frequent(io.StringIO("a\t3\t0.5\n"))


@given(st.lists(st.lists(st.integers(0, 500), min_size=1, max_size=10), max_size=30))
def test_transactions_round_trip(rows):
    db = TransactionDatabase(rows)
    buf = io.StringIO()
    write_transactions(db, buf)
    again, _ = read_transactions(io.StringIO(buf.getvalue()))
    assert again == db


@given(st.lists(st.lists(st.text("abcdefgh", min_size=1, max_size=3), min_size=1, max_size=6),
                max_size=20))
def test_token_mode_is_lossless(rows):
    text = "\n".join(" ".join(r) for r in rows) + "\n"
    db, tokens = read_transactions(io.StringIO(text), TOKEN)
    for row, items in zip(rows, db):
        assert sorted(tokens.decode(items)) == sorted(set(row))
    assert sorted(tokens.token_to_id.values()) == list(range(len(tokens)))


def test_generator_deterministic():
    cfg = GeneratorConfig(seed=3, num_transactions=100, num_items=50)
    a, b = generate_synthetic(cfg), generate_synthetic(cfg)
    assert a == b
    assert len(a) == 100
    assert a != generate_synthetic(GeneratorConfig(seed=4, num_transactions=100, num_items=50))
    buf_a, buf_b = io.StringIO(), io.StringIO()
    write_transactions(a, buf_a)
    write_transactions(b, buf_b)
    assert buf_a.getvalue() == buf_b.getvalue()


def test_generator_embeds_single_pattern():
    cfg = GeneratorConfig(seed=1, num_transactions=2000, num_items=100, avg_transaction_len=10,
                          num_patterns=1, avg_pattern_len=4, pattern_prob=1.0)
    db = generate_synthetic(cfg)
    # the pattern is the largest itemset common to the most transactions; find it by counting
    from collections import Counter
    counts = Counter(i for row in db for i in row)
    pattern = {i for i, c in counts.items() if c >= 0.99 * len(db)}
    assert pattern
    hits = sum(1 for row in db if pattern <= set(row))
    assert hits / len(db) >= 0.99
    assert all(1 <= len(r) and max(r) < 100 for r in db)


@pytest.mark.parametrize("bad", [dict(num_transactions=0), dict(num_items=5, avg_transaction_len=6),
                                 dict(pattern_prob=1.5), dict(avg_pattern_len=0)])
def test_generator_config_validation(bad):
    with pytest.raises(ConfigurationError):
        GeneratorConfig(**bad)
