import json

import numpy as np
import pytest

from textchar import io
from textchar.errors import (
    DimensionMismatch,
    EmptySequence,
    NonFiniteValue,
    ParseError,
)


def make_collection(rng, n=12, dim=4, labels=("pos", "neg"), layers=("L1", "L2")):
    records = []
    for i in range(n):
        records.append(io.Record(
            id=f"s{i}",
            label=labels[i % len(labels)],
            layer=layers[i % len(layers)],
            vector=rng.normal(size=dim),
        ))
    return io.LabeledEmbeddings(records=records, dim=dim)


# --- mean pooling -------------------------------------------------------

def test_mean_pool_hand_value():
    pooled = io.mean_pool([[1.0, 3.0], [3.0, 5.0]])
    assert np.array_equal(pooled, [2.0, 4.0])


def test_mean_pool_single_token_is_identity():
    pooled = io.mean_pool([[7.0, -1.0, 0.5]])
    assert np.array_equal(pooled, [7.0, -1.0, 0.5])


def test_mean_pool_accepts_token_sequences():
    seq = io.TokenSequence(id="a", label="x", layer="L",
                           token_vectors=np.array([[0.0, 2.0], [4.0, 6.0]]))
    assert np.array_equal(io.mean_pool(seq), [2.0, 4.0])


def test_mean_pool_names_empty_sequence():
    seq = io.TokenSequence(id="utt-3", label="x", layer="L",
                           token_vectors=np.empty((0, 0)))
    with pytest.raises(EmptySequence, match="utt-3"):
        io.mean_pool(seq)


# --- round-trips --------------------------------------------------------

@pytest.mark.parametrize("format", io.FORMATS)
def test_round_trip_is_exact(tmp_path, format):
    original = make_collection(np.random.default_rng(0))
    path = tmp_path / f"vectors.{format}"
    io.write_vectors(original, path, format)
    loaded = io.read_vectors(path, format)

    assert loaded.dim == original.dim
    assert len(loaded) == len(original)
    for got, want in zip(loaded.records, original.records):
        assert (got.id, got.label, got.layer) == (want.id, want.label, want.layer)
        assert np.array_equal(got.vector, want.vector)


def test_round_trip_extreme_magnitudes(tmp_path):
    vectors = np.array([[1e-300, -1e300, 0.0, 1.0],
                        [2.2250738585072014e-308, 1.7976931348623157e308, -0.0, 3.14]])
    original = io.LabeledEmbeddings(
        records=[io.Record(f"r{i}", "a", "L", vectors[i]) for i in range(2)],
        dim=4)
    for format in io.FORMATS:
        path = tmp_path / f"extreme.{format}"
        io.write_vectors(original, path, format)
        loaded = io.read_vectors(path, format)
        for got, want in zip(loaded.records, original.records):
            assert np.array_equal(got.vector, want.vector), format


def test_csv_quotes_awkward_labels(tmp_path):
    rec = io.Record("id,1", 'label "x", y', "layer\n2", np.array([1.5]))
    original = io.LabeledEmbeddings(records=[rec], dim=1)
    path = tmp_path / "quoted.csv"
    io.write_vectors(original, path, "csv")
    loaded = io.read_vectors(path, "csv")
    got = loaded.records[0]
    assert (got.id, got.label, got.layer) == (rec.id, rec.label, rec.layer)


def test_binary_float32_round_trips_its_own_precision(tmp_path):
    rng = np.random.default_rng(8)
    original = make_collection(rng, n=5, dim=3)
    path = tmp_path / "vectors.bin"
    io._write_binary(original, path, float_width=4)
    loaded = io.read_vectors(path, "binary")
    for got, want in zip(loaded.records, original.records):
        assert np.array_equal(got.vector,
                              want.vector.astype(np.float32).astype(np.float64))


def test_jsonl_defaults_for_missing_id_and_layer(tmp_path):
    path = tmp_path / "bare.jsonl"
    path.write_text('{"label": "a", "vector": [1.0, 2.0]}\n'
                    '\n'
                    '{"label": "b", "vector": [3.0, 4.0]}\n')
    loaded = io.read_vectors(path, "jsonl")
    assert [rec.id for rec in loaded.records] == ["row-1", "row-2"]
    assert all(rec.layer == "default" for rec in loaded.records)


def test_csv_handles_any_column_order(tmp_path):
    path = tmp_path / "cols.csv"
    path.write_text("d0,label,d1,id,layer\n"
                    "1.5,pos,2.5,a,L1\n")
    loaded = io.read_vectors(path, "csv")
    rec = loaded.records[0]
    assert rec.label == "pos" and rec.id == "a" and rec.layer == "L1"
    assert np.array_equal(rec.vector, [1.5, 2.5])


# --- parse errors ------------------------------------------------------------

def test_jsonl_parse_error_names_line(tmp_path):
    path = tmp_path / "broken.jsonl"
    path.write_text('{"label": "a", "vector": [1.0]}\n'
                    '{"label": "b", "vector": [2.0]}\n'
                    '{oops\n')
    with pytest.raises(ParseError, match="line 3"):
        io.read_vectors(path, "jsonl")


def test_jsonl_missing_keys(tmp_path):
    path = tmp_path / "nokeys.jsonl"
    path.write_text('{"vector": [1.0]}\n')
    with pytest.raises(ParseError, match="label"):
        io.read_vectors(path, "jsonl")


def test_jsonl_dimension_mismatch_names_record(tmp_path):
    path = tmp_path / "dims.jsonl"
    path.write_text('{"id": "a", "label": "x", "vector": [1.0, 2.0]}\n'
                    '{"id": "b", "label": "x", "vector": [3.0]}\n')
    with pytest.raises(DimensionMismatch, match="'b'"):
        io.read_vectors(path, "jsonl")


def test_jsonl_non_finite_value_names_axis(tmp_path):
    path = tmp_path / "nan.jsonl"
    path.write_text('{"id": "a", "label": "x", "vector": [1.0, NaN, 2.0]}\n')
    with pytest.raises(NonFiniteValue, match="axis 1"):
        io.read_vectors(path, "jsonl")


def test_duplicate_records_rejected(tmp_path):
    path = tmp_path / "dup.jsonl"
    line = '{"id": "a", "label": "x", "layer": "L", "vector": [1.0]}\n'
    path.write_text(line + line)
    with pytest.raises(ParseError, match="duplicate"):
        io.read_vectors(path, "jsonl")


def test_csv_missing_label_column(tmp_path):
    path = tmp_path / "nolabel.csv"
    path.write_text("id,d0\na,1.0\n")
    with pytest.raises(ParseError, match="label"):
        io.read_vectors(path, "csv")


def test_csv_bad_cell_count_and_value(tmp_path):
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("id,label,layer,d0\na,x,L,1.0\nb,x,L\n")
    with pytest.raises(ParseError, match="line 3"):
        io.read_vectors(ragged, "csv")

    alpha = tmp_path / "alpha.csv"
    alpha.write_text("id,label,layer,d0\na,x,L,oops\n")
    with pytest.raises(ParseError, match="non-numeric"):
        io.read_vectors(alpha, "csv")


def test_binary_header_validation(tmp_path):
    good = tmp_path / "good.bin"
    original = make_collection(np.random.default_rng(1), n=3, dim=2)
    io.write_vectors(original, good, "binary")
    raw = bytearray(good.read_bytes())

    bad_magic = tmp_path / "magic.bin"
    bad_magic.write_bytes(b"XXXX" + raw[4:])
    (tmp_path / "magic.bin.meta.jsonl").write_text("")
    with pytest.raises(ParseError, match="magic"):
        io.read_vectors(bad_magic, "binary")

    bad_version = tmp_path / "version.bin"
    corrupted = bytearray(raw)
    corrupted[4] = 9
    bad_version.write_bytes(corrupted)
    (tmp_path / "version.bin.meta.jsonl").write_text("")
    with pytest.raises(ParseError, match="version"):
        io.read_vectors(bad_version, "binary")

    bad_width = tmp_path / "width.bin"
    corrupted = bytearray(raw)
    corrupted[5] = 3
    bad_width.write_bytes(corrupted)
    with pytest.raises(ParseError, match="width"):
        io.read_vectors(bad_width, "binary")

    truncated = tmp_path / "short.bin"
    truncated.write_bytes(raw[:-4])
    with pytest.raises(ParseError, match="bytes"):
        io.read_vectors(truncated, "binary")


def test_binary_sidecar_required(tmp_path):
    path = tmp_path / "orphan.bin"
    io.write_vectors(make_collection(np.random.default_rng(2), n=2, dim=2),
                     path, "binary")
    (tmp_path / "orphan.bin.meta.jsonl").unlink()
    with pytest.raises(ParseError, match="sidecar"):
        io.read_vectors(path, "binary")


def test_binary_sidecar_row_count_must_match(tmp_path):
    path = tmp_path / "counted.bin"
    io.write_vectors(make_collection(np.random.default_rng(3), n=3, dim=2),
                     path, "binary")
    sidecar = tmp_path / "counted.bin.meta.jsonl"
    lines = sidecar.read_text().splitlines()
    sidecar.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(ParseError, match="metadata rows"):
        io.read_vectors(path, "binary")


def test_unknown_format_rejected(tmp_path):
    with pytest.raises(ValueError, match="unknown format"):
        io.read_vectors(tmp_path / "x", "parquet")
    with pytest.raises(ValueError, match="unknown format"):
        io.write_vectors(io.LabeledEmbeddings(), tmp_path / "x", "parquet")


# --- token sequences ----------------------------------------------------

def test_read_token_sequences(tmp_path):
    path = tmp_path / "tokens.jsonl"
    path.write_text(
        '{"id": "a", "label": "x", "layer": "L1", "tokens": [[1.0, 2.0], [3.0, 4.0]]}\n'
        '{"id": "b", "label": "y", "tokens": []}\n')
    seqs = io.read_token_sequences(path)
    assert np.array_equal(seqs[0].token_vectors, [[1.0, 2.0], [3.0, 4.0]])
    assert seqs[1].token_vectors.shape == (0, 0)
    assert seqs[1].layer == "default"


def test_read_token_sequences_rejects_ragged(tmp_path):
    ragged = tmp_path / "ragged.jsonl"
    ragged.write_text('{"id": "a", "label": "x", "tokens": [[1.0, 2.0], [3.0]]}\n')
    with pytest.raises(ParseError, match="line 1"):
        io.read_token_sequences(ragged)

    flat = tmp_path / "flat.jsonl"
    flat.write_text('{"id": "a", "label": "x", "tokens": [1.0, 2.0]}\n')
    with pytest.raises(ParseError, match="same length"):
        io.read_token_sequences(flat)


def test_pool_token_file(tmp_path):
    src = tmp_path / "tokens.jsonl"
    src.write_text(
        '{"id": "a", "label": "x", "layer": "L1", "tokens": [[1.0, 3.0], [3.0, 5.0]]}\n'
        '{"id": "b", "label": "y", "layer": "L2", "tokens": [[10.0, 20.0]]}\n')
    dst = tmp_path / "pooled.jsonl"
    assert io.pool_token_file(src, dst) == 2
    loaded = io.read_vectors(dst, "jsonl")
    assert np.array_equal(loaded.records[0].vector, [2.0, 4.0])
    assert np.array_equal(loaded.records[1].vector, [10.0, 20.0])
    assert loaded.records[0].layer == "L1"
    assert loaded.records[1].label == "y"


def test_pool_token_file_names_first_empty_sequence(tmp_path):
    src = tmp_path / "tokens.jsonl"
    src.write_text('{"id": "ok", "label": "x", "tokens": [[1.0]]}\n'
                   '{"id": "empty-7", "label": "x", "tokens": []}\n')
    with pytest.raises(EmptySequence, match="empty-7"):
        io.pool_token_file(src, tmp_path / "out.jsonl")


# --- grouping -----------------------------------------------------------

def test_group_by_label_shapes_and_order():
    emb = make_collection(np.random.default_rng(4), n=8, dim=3,
                          labels=("a", "b"), layers=("L1", "L2"))
    groups = io.group_by_label(emb)
    # i % 2 picks both label and layer together: (a, L1) and (b, L2)
    assert list(groups) == [("a", "L1"), ("b", "L2")]
    assert all(cluster.shape == (4, 3) for cluster in groups.values())


def test_group_by_label_preserves_row_order():
    records = [io.Record(f"r{i}", "only", "L", np.array([float(i)]))
               for i in range(5)]
    emb = io.LabeledEmbeddings(records=records, dim=1)
    groups = io.group_by_label(emb)
    assert np.array_equal(groups[("only", "L")][:, 0], np.arange(5.0))
