import io
import json
import zipfile

import numpy as np
import pytest
from xlsx_helper import write_xlsx

from causalbench.ingest import (
    ColumnSpec,
    DatasetMeta,
    HeaderMismatch,
    IngestError,
    MissingTypeAnnotation,
    PreprocessOptions,
    RaggedRow,
    RawTable,
    correlation_matrix,
    dataset_to_csv,
    load_dataset,
    load_ground_truth,
    load_table,
    meta_to_json,
    parse_column_header,
    parse_meta_json,
    preprocess,
    specs_from_headers,
)


def make_dataset(columns, rows, **opts):
    table = RawTable(tuple(c.header for c in columns), tuple(tuple(r) for r in rows))
    return preprocess(table, columns, PreprocessOptions(**opts))


class TestParseColumnHeader:
    def test_numeric(self):
        spec = parse_column_header("Elevation:numeric")
        assert (spec.name, spec.kind) == ("Elevation", "numeric")

    def test_binary(self):
        spec = parse_column_header("Soil_Type1:binary")
        assert (spec.name, spec.kind) == ("Soil_Type1", "binary")

    def test_missing_annotation(self):
        with pytest.raises(MissingTypeAnnotation):
            parse_column_header("Elevation")

    def test_unknown_kind(self):
        with pytest.raises(IngestError):
            parse_column_header("Elevation:float32")

    def test_empty_name(self):
        with pytest.raises(IngestError):
            parse_column_header(":numeric")

    def test_splits_on_last_colon(self):
        spec = parse_column_header("ratio:a:b:numeric")
        assert spec.name == "ratio:a:b"


class TestColumnSpec:
    def test_ordinal_levels_validated(self):
        with pytest.raises(IngestError):
            ColumnSpec("grade", "ordinal", ordered_levels=("low", "low"))
        with pytest.raises(IngestError):
            ColumnSpec("grade", "ordinal", ordered_levels=())

    def test_order_attached_from_meta(self):
        specs = specs_from_headers(["grade:ordinal"], {"grade": ("low", "high")})
        assert specs[0].ordered_levels == ("low", "high")


class TestLoadTable:
    def test_csv_basic(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text("a:numeric,b:binary\n1,yes\n2,no\n3,yes\n")
        t = load_table(p)
        assert t.headers == ("a:numeric", "b:binary")
        assert len(t.rows) == 3

    def test_csv_filelike(self):
        t = load_table(io.StringIO("a:numeric\n1\n"))
        assert t.rows == (("1",),)

    def test_ragged_row(self):
        with pytest.raises(RaggedRow) as err:
            load_table(io.StringIO("a:numeric,b:numeric\n1,2\n3\n"))
        assert err.value.row_index == 2

    def test_empty(self):
        with pytest.raises(IngestError):
            load_table(io.StringIO(""))
        with pytest.raises(IngestError):
            load_table(io.StringIO("a:numeric\n"))

    def test_xlsx_matches_csv_twin(self, tmp_path):
        rows = [
            ["Elevation:numeric", "Wild:binary", "Cover:categorical"],
            ["1996", "yes", "pine"],
            ["2590", "no", "fir"],
            ["2804", "yes", "aspen"],
        ]
        csv_path = tmp_path / "twin.csv"
        csv_path.write_text("\n".join(",".join(r) for r in rows) + "\n")
        xlsx_path = tmp_path / "twin.xlsx"
        write_xlsx(xlsx_path, rows)
        assert load_table(csv_path, "csv") == load_table(xlsx_path, "xlsx")

    def test_xlsx_formula_cached_value(self, tmp_path):
        # hand-build a sheet where B2 is a formula with a cached value
        import xlsx_helper

        path = tmp_path / "f.xlsx"
        write_xlsx(path, [["a:numeric", "b:numeric"], ["1", "0"]])
        with zipfile.ZipFile(path) as zf:
            names = {n: zf.read(n) for n in zf.namelist()}
        sheet = (
            '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
            '<worksheet xmlns="http://schemas.openxmlformats.org/spreadsheetml/2006/main"><sheetData>'
            '<row r="1"><c r="A1" t="s"><v>0</v></c><c r="B1" t="s"><v>1</v></c></row>'
            '<row r="2"><c r="A2"><v>1</v></c><c r="B2" t="str"><f>A2+41</f><v>42</v></c></row>'
            "</sheetData></worksheet>"
        )
        names["xl/worksheets/sheet1.xml"] = sheet.encode()
        with zipfile.ZipFile(path, "w") as zf:
            for n, data in names.items():
                zf.writestr(n, data)
        t = load_table(path, "xlsx")
        assert t.rows == (("1", "42"),)

    def test_xlsx_unreadable(self, tmp_path):
        p = tmp_path / "bad.xlsx"
        p.write_bytes(b"not a zip")
        with pytest.raises(IngestError):
            load_table(p, "xlsx")


class TestPreprocess:
    def test_numeric_standardized_sample_sd(self):
        ds = make_dataset([ColumnSpec("a", "numeric")], [["1"], ["2"], ["3"]])
        assert np.allclose(ds.matrix[:, 0], [-1.0, 0.0, 1.0])

    def test_numeric_raw_when_disabled(self):
        ds = make_dataset([ColumnSpec("a", "numeric")], [["1"], ["2"], ["3"]], standardize_numeric=False)
        assert np.array_equal(ds.matrix[:, 0], [1.0, 2.0, 3.0])

    def test_constant_column_zeros(self):
        ds = make_dataset([ColumnSpec("a", "numeric")], [["5"], ["5"], ["5"]])
        assert np.array_equal(ds.matrix[:, 0], [0.0, 0.0, 0.0])

    def test_binary_lexicographic(self):
        ds = make_dataset([ColumnSpec("b", "binary")], [["yes"], ["no"], ["yes"]])
        assert np.array_equal(ds.matrix[:, 0], [1.0, 0.0, 1.0])

    def test_binary_cardinality(self):
        with pytest.raises(IngestError):
            make_dataset([ColumnSpec("b", "binary")], [["a"], ["b"], ["c"]])

    def test_categorical_codes(self):
        ds = make_dataset([ColumnSpec("c", "categorical")], [["pine"], ["aspen"], ["fir"], ["pine"]])
        assert np.array_equal(ds.matrix[:, 0], [2.0, 0.0, 1.0, 2.0])

    def test_ordinal_rank(self):
        spec = ColumnSpec("g", "ordinal", ordered_levels=("low", "mid", "high"))
        ds = make_dataset([spec], [["high"], ["low"], ["mid"]])
        assert np.array_equal(ds.matrix[:, 0], [2.0, 0.0, 1.0])

    def test_ordinal_value_missing_from_order(self):
        spec = ColumnSpec("g", "ordinal", ordered_levels=("low", "high"))
        with pytest.raises(IngestError):
            make_dataset([spec], [["mid"]])

    def test_ordinal_without_order(self):
        with pytest.raises(IngestError):
            make_dataset([ColumnSpec("g", "ordinal")], [["a"]])

    def test_non_numeric_token(self):
        with pytest.raises(IngestError) as err:
            make_dataset([ColumnSpec("a", "numeric")], [["1"], ["x"]])
        assert "row 2" in str(err.value)

    def test_drop_rows(self):
        ds = make_dataset(
            [ColumnSpec("a", "numeric"), ColumnSpec("b", "numeric")],
            [["1", "2"], ["", "3"], ["4", "5"]],
            standardize_numeric=False,
        )
        assert ds.sample_count == 2

    def test_all_rows_dropped(self):
        with pytest.raises(IngestError):
            make_dataset([ColumnSpec("a", "numeric")], [[""], [""]])

    def test_mean_impute(self):
        ds = make_dataset(
            [ColumnSpec("a", "numeric")],
            [["1"], [""], ["3"]],
            missing_policy="meanImpute",
            standardize_numeric=False,
        )
        assert np.array_equal(ds.matrix[:, 0], [1.0, 2.0, 3.0])

    def test_deterministic(self):
        cols = [ColumnSpec("a", "numeric"), ColumnSpec("c", "categorical")]
        rows = [["1.5", "x"], ["2.5", "y"], ["0.5", "x"]]
        a = make_dataset(cols, rows).matrix
        b = make_dataset(cols, rows).matrix
        assert a.tobytes() == b.tobytes()

    def test_encoding_row_order_independent(self, rng):
        rows = [["pine"], ["aspen"], ["fir"], ["pine"], ["aspen"]]
        ds = make_dataset([ColumnSpec("c", "categorical")], rows)
        codes = dict(zip((r[0] for r in rows), ds.matrix[:, 0]))
        shuffled = [rows[i] for i in rng.permutation(len(rows))]
        ds2 = make_dataset([ColumnSpec("c", "categorical")], shuffled)
        codes2 = dict(zip((r[0] for r in shuffled), ds2.matrix[:, 0]))
        assert codes == codes2

    def test_standardized_moments(self, rng):
        vals = rng.normal(5, 3, size=200)
        ds = make_dataset([ColumnSpec("a", "numeric")], [[repr(float(v))] for v in vals])
        col = ds.matrix[:, 0]
        assert abs(col.mean()) < 1e-9
        assert abs(col.std(ddof=1) - 1.0) < 1e-9

    def test_spec_count_mismatch(self):
        table = RawTable(("a:numeric", "b:numeric"), (("1", "2"),))
        with pytest.raises(IngestError):
            preprocess(table, [ColumnSpec("a", "numeric")])


class TestMetaJson:
    def test_roundtrip(self):
        meta, order = parse_meta_json(
            '{"name": "covertype", "type": "user", "problem": "classification", "order": {"g": ["low", "high"]}}'
        )
        assert meta == DatasetMeta("covertype", "user", "classification")
        assert order == {"g": ("low", "high")}
        assert parse_meta_json(json.dumps(meta_to_json(meta, order)))[0] == meta

    def test_bad_kind(self):
        with pytest.raises(IngestError):
            parse_meta_json('{"name": "x", "type": "private"}')

    def test_bad_problem(self):
        with pytest.raises(IngestError):
            parse_meta_json('{"name": "x", "problem": "regression"}')


class TestGroundTruth:
    def _dataset(self):
        cols = [ColumnSpec(n, "numeric") for n in ("a", "b", "c")]
        return make_dataset(cols, [["1", "2", "3"], ["4", "5", "6"]])

    def test_valid(self):
        g = load_ground_truth(io.StringIO("a,b,c\n0,1,0\n0,0,0\n0,0,0\n"), self._dataset())
        assert g.has_directed("a", "b")

    def test_header_permuted(self):
        with pytest.raises(HeaderMismatch):
            load_ground_truth(io.StringIO("b,a,c\n0,1,0\n0,0,0\n0,0,0\n"), self._dataset())

    def test_undirected_pair(self):
        g = load_ground_truth(io.StringIO("a,b,c\n0,1,0\n1,0,0\n0,0,0\n"), self._dataset())
        assert g.has_undirected("a", "b")

    def test_dimension_mismatch(self):
        with pytest.raises(IngestError):
            load_ground_truth(io.StringIO("a,b\n0,1\n0,0\n"), self._dataset())


class TestCorrelation:
    def test_diagonal_one(self):
        ds = make_dataset([ColumnSpec("a", "numeric")], [["1"], ["2"], ["5"]])
        c = correlation_matrix(ds)
        assert c[0, 0] == 1.0

    def test_affine_pair(self):
        cols = [ColumnSpec("x", "numeric"), ColumnSpec("y", "numeric")]
        rows = [[str(v), str(2 * v + 1)] for v in [1, 2, 3, 7]]
        c = correlation_matrix(make_dataset(cols, rows, standardize_numeric=False))
        assert c[0, 1] == pytest.approx(1.0, abs=1e-12)

    def test_hand_fixture(self):
        cols = [ColumnSpec("x", "numeric"), ColumnSpec("y", "numeric")]
        rows = [["1", "1"], ["2", "3"], ["3", "2"], ["4", "4"]]
        c = correlation_matrix(make_dataset(cols, rows, standardize_numeric=False))
        assert c[0, 1] == pytest.approx(0.8, abs=1e-12)

    def test_constant_column_zero(self):
        cols = [ColumnSpec("x", "numeric"), ColumnSpec("k", "numeric")]
        rows = [["1", "9"], ["2", "9"], ["3", "9"]]
        c = correlation_matrix(make_dataset(cols, rows, standardize_numeric=False))
        assert c[0, 1] == 0.0 and c[1, 1] == 1.0

    def test_symmetry_and_bounds(self, rng):
        cols = [ColumnSpec(f"x{i}", "numeric") for i in range(5)]
        rows = [[repr(float(v)) for v in row] for row in rng.normal(size=(40, 5))]
        c = correlation_matrix(make_dataset(cols, rows))
        assert np.max(np.abs(c - c.T)) <= 1e-12
        assert np.all(c <= 1.0) and np.all(c >= -1.0)
        assert np.array_equal(np.diag(c), np.ones(5))

    def test_too_few_samples(self):
        ds = make_dataset([ColumnSpec("a", "numeric")], [["1"]])
        with pytest.raises(IngestError):
            correlation_matrix(ds)


class TestWireFormat:
    def test_dataset_csv_roundtrip(self):
        cols = [ColumnSpec("a", "numeric"), ColumnSpec("b", "binary")]
        ds = make_dataset(cols, [["1.5", "yes"], ["2.5", "no"]], standardize_numeric=False)
        text = dataset_to_csv(ds)
        back = load_dataset(
            io.StringIO(text),
            {"name": ds.meta.name},
            options=PreprocessOptions(standardize_numeric=False),
        )
        assert back.column_names == ds.column_names
        assert np.array_equal(back.matrix, ds.matrix)

    def test_load_dataset_end_to_end(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("a:numeric,g:ordinal\n1,low\n2,high\n")
        ds = load_dataset(p, {"name": "demo", "type": "benchmark", "order": {"g": ["low", "high"]}})
        assert ds.meta.kind == "benchmark"
        assert np.array_equal(ds.matrix[:, 1], [0.0, 1.0])
