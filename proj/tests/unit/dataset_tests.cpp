#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "pixelnorm/dataset.hpp"
#include "pixelnorm/error.hpp"
#include "pixelnorm/rng.hpp"
#include "support/oracles.hpp"

using namespace pixelnorm;
using testsupport::TempDir;

TEST_CASE("load_csv keeps numeric columns, drops text, parses the label") {
    TempDir tmp;
    const std::string path = tmp.file("mixed.csv");
    testsupport::spit(path,
                      "id,a,name,b,churn\n"
                      "x1,1.5,alice,10,True.\n"
                      "x2,2.5,bob,20,False.\n"
                      "x3,3.5,carol,30,1\n");
    Dataset d = load_csv(path, {.label_column = "churn"});
    CHECK(d.row_count() == 3);
    CHECK(d.col_count() == 2);
    CHECK(d.column_names == std::vector<std::string>{"a", "b"});
    CHECK(d.values(0, 0) == 1.5);
    CHECK(d.values(2, 1) == 30.0);
    CHECK(d.labels == std::vector<int>{1, 0, 1});
}

TEST_CASE("one-row file is the minimal dataset") {
    TempDir tmp;
    const std::string path = tmp.file("one.csv");
    testsupport::spit(path, "a,churn\n5.0,1\n");
    Dataset d = load_csv(path, {.label_column = "churn"});
    CHECK(d.row_count() == 1);
    CHECK(d.col_count() == 1);
    CHECK(d.values(0, 0) == 5.0);
    CHECK(d.labels == std::vector<int>{1});
}

TEST_CASE("label spellings: 0/1, true/false, yes/no, trailing period, any case") {
    TempDir tmp;
    const std::string path = tmp.file("labels.csv");
    testsupport::spit(path, "a,churn\n1,0\n2,1\n3,true\n4,FALSE\n5,True.\n6,false.\n7,yes\n8,No\n");
    Dataset d = load_csv(path, {.label_column = "churn"});
    CHECK(d.labels == std::vector<int>{0, 1, 1, 0, 1, 0, 1, 0});
}

TEST_CASE("a non-numeric cell later in a numeric column is an error naming the spot") {
    TempDir tmp;
    const std::string path = tmp.file("bad.csv");
    testsupport::spit(path, "a,b,churn\n1,2,0\n3,abc,1\n");
    try {
        load_csv(path, {.label_column = "churn"});
        FAIL("expected NonNumericCell");
    } catch (const NonNumericCell& e) {
        CHECK(e.row == 2);
        CHECK(e.column == "b");
        CHECK(std::string(e.what()).find("abc") != std::string::npos);
    }
}

TEST_CASE("missing label column is reported by name") {
    TempDir tmp;
    const std::string path = tmp.file("nolabel.csv");
    testsupport::spit(path, "a,b\n1,2\n");
    CHECK_THROWS_AS(load_csv(path, {.label_column = "churn"}), MissingLabelColumn);
}

TEST_CASE("empty label column name loads a label-free table") {
    TempDir tmp;
    const std::string path = tmp.file("plain.csv");
    testsupport::spit(path, "a,b\n1,2\n3,4\n");
    Dataset d = load_csv(path, {.label_column = ""});
    CHECK(d.col_count() == 2);
    CHECK(d.labels == std::vector<int>{0, 0});
}

TEST_CASE("dropping every numeric column leaves nothing to load") {
    TempDir tmp;
    const std::string path = tmp.file("drop.csv");
    testsupport::spit(path, "a,churn\n1,0\n");
    LoadOptions opts;
    opts.label_column = "churn";
    opts.drop_columns = {"a"};
    CHECK_THROWS_AS(load_csv(path, opts), EmptyAfterFilter);
}

TEST_CASE("missing file is an I/O error") {
    CHECK_THROWS_AS(load_csv("/nonexistent/nope.csv", {}), IoError);
}

TEST_CASE("empty cells reject by default, impute the column mean on request") {
    TempDir tmp;
    const std::string path = tmp.file("gaps.csv");
    testsupport::spit(path, "a,churn\n1,0\n,1\n5,0\n");
    LoadOptions opts;
    opts.label_column = "churn";
    CHECK_THROWS_AS(load_csv(path, opts), DataError);

    opts.impute_mean = true;
    Dataset d = load_csv(path, opts);
    CHECK(d.values(1, 0) == doctest::Approx(3.0));  // mean of 1 and 5
}

TEST_CASE("quoted fields, embedded commas and CRLF line ends parse") {
    TempDir tmp;
    const std::string path = tmp.file("quoted.csv");
    testsupport::spit(path, "\"name\",a,churn\r\n\"smith, john\",1.25,\"0\"\r\n\"o\"\"brien\",2,1\r\n");
    Dataset d = load_csv(path, {.label_column = "churn"});
    CHECK(d.col_count() == 1);
    CHECK(d.values(0, 0) == 1.25);
    CHECK(d.labels == std::vector<int>{0, 1});
}

TEST_CASE("write then reload round trips values and labels exactly") {
    Dataset d = synth_churn(50, 7, 99, 3.0);
    TempDir tmp;
    const std::string path = tmp.file("roundtrip.csv");
    write_csv(d, path);
    Dataset back = load_csv(path, {.label_column = d.label_name});
    CHECK(back.values == d.values);
    CHECK(back.labels == d.labels);
    CHECK(back.column_names == d.column_names);
}

TEST_CASE("compute_stats matches the worked example") {
    Dataset d;
    d.values = Matrix(2, 2);
    d.values(0, 0) = 0;
    d.values(0, 1) = 10;
    d.values(1, 0) = 4;
    d.values(1, 1) = 2;
    d.labels = {0, 1};
    ColumnStats s = compute_stats(d);
    CHECK(s.min == std::vector<double>{0, 2});
    CHECK(s.max == std::vector<double>{4, 10});
    CHECK(s.global_min == 0);
    CHECK(s.global_max == 10);
}

TEST_CASE("constant data collapses min, max and mean") {
    Dataset d;
    d.values = Matrix(3, 2, 5.5);
    d.labels = {0, 0, 0};
    ColumnStats s = compute_stats(d);
    for (std::size_t c = 0; c < 2; ++c) {
        CHECK(s.min[c] == 5.5);
        CHECK(s.max[c] == 5.5);
        CHECK(s.mean[c] == 5.5);
    }
    CHECK(s.global_min == 5.5);
    CHECK(s.global_max == 5.5);
}

TEST_CASE("single row: min = max = mean per column") {
    Dataset d;
    d.values = Matrix(1, 2);
    d.values(0, 0) = 3;
    d.values(0, 1) = 7;
    d.labels = {1};
    ColumnStats s = compute_stats(d);
    CHECK(s.min == std::vector<double>{3, 7});
    CHECK(s.max == std::vector<double>{3, 7});
    CHECK(s.mean == std::vector<double>{3, 7});
}

TEST_CASE("compute_stats rejects an empty dataset") {
    Dataset d;
    CHECK_THROWS_AS(compute_stats(d), EmptyDataset);
}

TEST_CASE("compute_stats agrees with a naive double loop on random matrices") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t rows = 1 + rng.below(100);
        const std::size_t cols = 1 + rng.below(100);
        Dataset d;
        d.values = Matrix(rows, cols);
        for (double& v : d.values.data) v = rng.uniform(-1e3, 1e3);
        d.labels.assign(rows, 0);

        ColumnStats got = compute_stats(d);
        testsupport::NaiveStats want = testsupport::naive_stats(d.values);
        CHECK(got.min == want.min);
        CHECK(got.max == want.max);
        CHECK(got.global_min == want.global_min);
        CHECK(got.global_max == want.global_max);
        for (std::size_t c = 0; c < cols; ++c)
            CHECK(got.mean[c] == doctest::Approx(want.mean[c]).epsilon(1e-12));
    }
}

TEST_CASE("synth_churn is deterministic and balanced") {
    Dataset a = synth_churn(101, 17, 42, 4.0);
    Dataset b = synth_churn(101, 17, 42, 4.0);
    CHECK(a.values == b.values);
    CHECK(a.labels == b.labels);

    long ones = 0;
    for (int l : a.labels) {
        CHECK((l == 0 || l == 1));
        ones += l;
    }
    CHECK(std::abs(2 * ones - static_cast<long>(a.row_count())) <= 1);
}

TEST_CASE("synth_churn class means differ by the separation") {
    Dataset d = synth_churn(4000, 3, 8, 6.0);
    for (std::size_t c = 0; c < 3; ++c) {
        double m0 = 0, m1 = 0;
        std::size_t n0 = 0, n1 = 0;
        for (std::size_t r = 0; r < d.row_count(); ++r) {
            if (d.labels[r] == 1) {
                m1 += d.values(r, c);
                ++n1;
            } else {
                m0 += d.values(r, c);
                ++n0;
            }
        }
        CHECK(m1 / n1 - m0 / n0 == doctest::Approx(6.0).epsilon(0.05));
    }
}

TEST_CASE("separation 0 leaves only sampling noise between class means") {
    Dataset d = synth_churn(8000, 1, 9, 0.0);
    double m0 = 0, m1 = 0;
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t r = 0; r < d.row_count(); ++r) {
        if (d.labels[r] == 1) {
            m1 += d.values(r, 0);
            ++n1;
        } else {
            m0 += d.values(r, 0);
            ++n0;
        }
    }
    CHECK(std::abs(m1 / n1 - m0 / n0) < 0.1);
}

TEST_CASE("separable synthetic data is classified by centroids at 99 percent") {
    Dataset d = synth_churn(1000, 2, 7, 6.0);
    CHECK(testsupport::centroid_accuracy(d) >= 0.99);
}
