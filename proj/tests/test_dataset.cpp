#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "surgecast/dataset.hpp"
#include "surgecast/error.hpp"
#include "surgecast/ingest.hpp"
#include "surgecast/jsonio.hpp"
#include "surgecast/rng.hpp"

using namespace surgecast;

namespace {

Date d(const char* iso) { return *Date::parse(iso); }

// Series with one column named "t" holding the given values, starting at
// start.
FeatureSeries target_series(Date start, const std::vector<double>& values) {
    FeatureSeries s;
    s.start_date = start;
    s.feature_names = {"t"};
    s.rows = Tensor2(values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) s.rows(i, 0) = values[i];
    return s;
}

// The label definition, written as directly as possible.
int oracle_label(const std::vector<double>& values, int ref, int horizon, int baseline) {
    double past = 0.0, future = 0.0;
    for (int i = ref - baseline + 1; i <= ref; ++i) past += values[static_cast<std::size_t>(i)];
    for (int i = ref + 1; i <= ref + horizon; ++i) future += values[static_cast<std::size_t>(i)];
    return future / horizon > past / baseline ? 1 : 0;
}

} // namespace

TEST_CASE("constant target labels 0 by the tie rule") {
    auto s = target_series(d("2020-05-01"), std::vector<double>(14, 42.0));
    CHECK(compute_label(s, "t", d("2020-05-07")) == 0);
}

TEST_CASE("strictly increasing target labels 1") {
    std::vector<double> v(14);
    for (int i = 0; i < 14; ++i) v[static_cast<std::size_t>(i)] = i * 3.0;
    auto s = target_series(d("2020-05-01"), v);
    CHECK(compute_label(s, "t", d("2020-05-07")) == 1);
}

TEST_CASE("random 14-day series match the brute-force oracle") {
    rng::Engine eng(101);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(14);
        for (double& x : v) x = std::floor(rng::uniform01(eng) * 100.0);
        auto s = target_series(d("2020-05-01"), v);
        CHECK(compute_label(s, "t", d("2020-05-07")) == oracle_label(v, 6, 7, 7));
    }
}

TEST_CASE("label respects custom horizon and baseline") {
    rng::Engine eng(103);
    for (int trial = 0; trial < 50; ++trial) {
        int horizon = 1 + static_cast<int>(eng() % 5);
        int baseline = 1 + static_cast<int>(eng() % 5);
        std::vector<double> v(12);
        for (double& x : v) x = rng::uniform01(eng) * 50.0;
        auto s = target_series(d("2020-05-01"), v);
        int ref = baseline - 1 + static_cast<int>(eng() % (12 - horizon - baseline + 1));
        CHECK(compute_label(s, "t", d("2020-05-01") + ref, horizon, baseline) ==
              oracle_label(v, ref, horizon, baseline));
    }
}

TEST_CASE("time-reversing a strictly monotone target flips the label") {
    std::vector<double> up(14), down(14);
    for (int i = 0; i < 14; ++i) {
        up[static_cast<std::size_t>(i)] = 5.0 + i;
        down[static_cast<std::size_t>(13 - i)] = 5.0 + i;
    }
    auto su = target_series(d("2020-05-01"), up);
    auto sd = target_series(d("2020-05-01"), down);
    CHECK(compute_label(su, "t", d("2020-05-07")) == 1);
    CHECK(compute_label(sd, "t", d("2020-05-07")) == 0);
}

TEST_CASE("adding a constant to the target never changes a label") {
    rng::Engine eng(107);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> v(14), shifted(14);
        for (int i = 0; i < 14; ++i) {
            v[static_cast<std::size_t>(i)] = rng::uniform01(eng) * 10.0;
            shifted[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] + 1000.0;
        }
        auto a = target_series(d("2020-05-01"), v);
        auto b = target_series(d("2020-05-01"), shifted);
        CHECK(compute_label(a, "t", d("2020-05-07")) == compute_label(b, "t", d("2020-05-07")));
    }
}

TEST_CASE("insufficient coverage is a range error") {
    auto s = target_series(d("2020-05-01"), std::vector<double>(10, 1.0));
    CHECK_THROWS_AS(compute_label(s, "t", d("2020-05-01")), RangeError);  // past side short
    CHECK_THROWS_AS(compute_label(s, "t", d("2020-05-09")), RangeError);  // future side short
}

TEST_CASE("window rows are the lag days ending on the reference") {
    FeatureSeries s;
    s.start_date = d("2020-06-01");
    s.feature_names = {"a", "b"};
    s.rows = Tensor2(40, 2);
    for (int i = 0; i < 40; ++i) {
        s.rows(static_cast<std::size_t>(i), 0) = i;
        s.rows(static_cast<std::size_t>(i), 1) = 100 + i;
    }
    Tensor2 w = build_window(s, d("2020-06-29"), 28);
    REQUIRE(w.rows() == 28);
    REQUIRE(w.cols() == 2);
    CHECK(w(0, 0) == 1.0);   // 2020-06-02
    CHECK(w(27, 0) == 28.0); // 2020-06-29
    CHECK(w(27, 1) == 128.0);
}

TEST_CASE("lag 1 window is the reference day alone") {
    auto s = target_series(d("2020-06-01"), {7.0, 8.0, 9.0});
    Tensor2 w = build_window(s, d("2020-06-02"), 1);
    REQUIRE(w.rows() == 1);
    CHECK(w(0, 0) == 8.0);
}

TEST_CASE("a sentinel value lands at the expected row index") {
    rng::Engine eng(109);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> v(50, 1.0);
        int day = static_cast<int>(eng() % 50);
        v[static_cast<std::size_t>(day)] = 999.0;
        auto s = target_series(d("2020-06-01"), v);
        int ref_off = 27 + static_cast<int>(eng() % (50 - 27));
        Date ref = d("2020-06-01") + ref_off;
        Tensor2 w = build_window(s, ref, 28);
        int expect_row = day - (ref_off - 27);
        for (int r = 0; r < 28; ++r) {
            double want = r == expect_row ? 999.0 : 1.0;
            CHECK(w(static_cast<std::size_t>(r), 0) == want);
        }
    }
}

TEST_CASE("window coverage errors") {
    auto s = target_series(d("2020-06-01"), std::vector<double>(30, 1.0));
    CHECK_THROWS_AS(build_window(s, d("2020-06-05"), 28), RangeError);
    CHECK_THROWS_AS(build_window(s, d("2020-08-01"), 28), RangeError);
}

namespace {

// 80-day single-column series with enough slack for lag 28 and horizon 7.
FeatureSeries wavy_series(Date start, int days) {
    std::vector<double> v(static_cast<std::size_t>(days));
    for (int i = 0; i < days; ++i)
        v[static_cast<std::size_t>(i)] = 50.0 + 30.0 * std::sin(i / 6.0);
    return target_series(start, v);
}

} // namespace

TEST_CASE("build_dataset yields one ascending sample per reference date") {
    auto s = wavy_series(d("2020-04-01"), 80);
    Date first = d("2020-04-28"), last = d("2020-06-10");
    auto samples = build_dataset(s, "t", first, last, 28, 7, 7);
    REQUIRE(static_cast<int>(samples.size()) == last - first + 1);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(samples[i].reference_date == first + static_cast<int>(i));
        CHECK(samples[i].features.rows() == 28);
        // label re-checked against the direct definition
        CHECK(samples[i].label == compute_label(s, "t", samples[i].reference_date));
        // last window row is the reference day's features
        CHECK(samples[i].features(27, 0) == s.at(samples[i].reference_date, 0));
    }
}

TEST_CASE("single-day reference range gives one sample") {
    auto s = wavy_series(d("2020-04-01"), 40);
    auto samples = build_dataset(s, "t", d("2020-04-28"), d("2020-04-28"), 28, 7, 7);
    CHECK(samples.size() == 1);
}

TEST_CASE("build_dataset names the offending date on a range error") {
    auto s = wavy_series(d("2020-04-01"), 40);
    try {
        build_dataset(s, "t", d("2020-04-28"), d("2020-05-30"), 28, 7, 7);
        FAIL("expected RangeError");
    } catch (const RangeError& e) {
        CHECK(std::string(e.what()).find("2020-05") != std::string::npos);
    }
}

namespace {

std::vector<WindowSample> numbered_samples(Date first, int count) {
    std::vector<WindowSample> out;
    for (int i = 0; i < count; ++i) {
        WindowSample ws;
        ws.reference_date = first + i;
        ws.features = Tensor2(2, 1);
        ws.features(0, 0) = i;
        ws.label = i % 2;
        out.push_back(ws);
    }
    return out;
}

} // namespace

TEST_CASE("split_by_date produces the expected counts") {
    auto samples = numbered_samples(d("2020-04-01"), 152);
    auto split = split_by_date(samples, d("2020-04-01"), d("2020-06-30"),
                               d("2020-07-01"), d("2020-08-30"), 10, 7);
    CHECK(split.train.size() == 81);
    CHECK(split.dev.size() == 10);
    CHECK(split.test.size() == 61);
    CHECK(split.seed == 7);

    std::set<int> train_dates, dev_dates, test_dates;
    for (const auto& ws : split.train) train_dates.insert(ws.reference_date.serial());
    for (const auto& ws : split.dev) dev_dates.insert(ws.reference_date.serial());
    for (const auto& ws : split.test) test_dates.insert(ws.reference_date.serial());
    CHECK(train_dates.size() == 81);
    CHECK(dev_dates.size() == 10);
    CHECK(test_dates.size() == 61);
    for (int s : dev_dates) {
        CHECK(train_dates.count(s) == 0);
        CHECK(test_dates.count(s) == 0);
        // dev drawn from the training date range
        CHECK(Date(s) >= d("2020-04-01"));
        CHECK(Date(s) <= d("2020-06-30"));
    }
    for (int s : train_dates) CHECK(test_dates.count(s) == 0);
}

TEST_CASE("dev_count 0 keeps the whole training range") {
    auto samples = numbered_samples(d("2020-04-01"), 152);
    auto split = split_by_date(samples, d("2020-04-01"), d("2020-06-30"),
                               d("2020-07-01"), d("2020-08-30"), 0, 7);
    CHECK(split.train.size() == 91);
    CHECK(split.dev.empty());
}

TEST_CASE("same seed picks the same dev days") {
    auto samples = numbered_samples(d("2020-04-01"), 152);
    auto a = split_by_date(samples, d("2020-04-01"), d("2020-06-30"),
                           d("2020-07-01"), d("2020-08-30"), 10, 99);
    auto b = split_by_date(samples, d("2020-04-01"), d("2020-06-30"),
                           d("2020-07-01"), d("2020-08-30"), 10, 99);
    REQUIRE(a.dev.size() == b.dev.size());
    for (std::size_t i = 0; i < a.dev.size(); ++i)
        CHECK(a.dev[i].reference_date == b.dev[i].reference_date);
    auto c = split_by_date(samples, d("2020-04-01"), d("2020-06-30"),
                           d("2020-07-01"), d("2020-08-30"), 10, 100);
    bool same = a.dev.size() == c.dev.size();
    if (same)
        for (std::size_t i = 0; i < a.dev.size(); ++i)
            same = same && a.dev[i].reference_date == c.dev[i].reference_date;
    CHECK_FALSE(same);
}

TEST_CASE("overlapping ranges are a config error") {
    auto samples = numbered_samples(d("2020-04-01"), 152);
    CHECK_THROWS_AS(split_by_date(samples, d("2020-04-01"), d("2020-07-01"),
                                  d("2020-07-01"), d("2020-08-30"), 10, 7),
                    ConfigError);
}

TEST_CASE("oversized dev_count is a config error") {
    auto samples = numbered_samples(d("2020-04-01"), 152);
    CHECK_THROWS_AS(split_by_date(samples, d("2020-04-01"), d("2020-06-30"),
                                  d("2020-07-01"), d("2020-08-30"), 91, 7),
                    ConfigError);
}

TEST_CASE("normalizer matches hand arithmetic on {1,2,3}") {
    // one feature, three window rows pooled
    WindowSample ws;
    ws.reference_date = d("2020-05-01");
    ws.features = Tensor2(3, 1);
    ws.features(0, 0) = 1.0;
    ws.features(1, 0) = 2.0;
    ws.features(2, 0) = 3.0;
    auto stats = fit_normalizer({ws});
    REQUIRE(stats.mean.size() == 1);
    CHECK(stats.mean[0] == doctest::Approx(2.0));
    CHECK(stats.stddev[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));
    auto norm = apply_normalizer(stats, ws);
    CHECK(norm.features(0, 0) == doctest::Approx(-1.2247).epsilon(1e-4));
    CHECK(norm.features(1, 0) == doctest::Approx(0.0));
    CHECK(norm.features(2, 0) == doctest::Approx(1.2247).epsilon(1e-4));
}

TEST_CASE("constant feature normalizes to zero") {
    WindowSample ws;
    ws.reference_date = d("2020-05-01");
    ws.features = Tensor2(4, 2);
    for (int r = 0; r < 4; ++r) {
        ws.features(static_cast<std::size_t>(r), 0) = 9.0;
        ws.features(static_cast<std::size_t>(r), 1) = r;
    }
    auto stats = fit_normalizer({ws});
    auto norm = apply_normalizer(stats, ws);
    for (int r = 0; r < 4; ++r) CHECK(norm.features(static_cast<std::size_t>(r), 0) == 0.0);
    CHECK(norm.features(3, 1) != 0.0);
}

TEST_CASE("normalization inverts for non-degenerate columns") {
    rng::Engine eng(113);
    std::vector<WindowSample> train;
    for (int i = 0; i < 5; ++i) {
        WindowSample ws;
        ws.reference_date = d("2020-05-01") + i;
        ws.features = Tensor2(6, 3);
        for (double& v : ws.features.data()) v = rng::uniform_sym(eng, 40.0);
        train.push_back(ws);
    }
    auto stats = fit_normalizer(train);
    for (const auto& ws : train) {
        auto norm = apply_normalizer(stats, ws);
        for (std::size_t r = 0; r < 6; ++r)
            for (std::size_t c = 0; c < 3; ++c) {
                double recovered = norm.features(r, c) * stats.stddev[c] + stats.mean[c];
                CHECK(recovered == doctest::Approx(ws.features(r, c)).epsilon(1e-9));
            }
    }
}

TEST_CASE("pooled statistics cover every window row") {
    // two samples; mean must pool across both, not average per-sample means
    WindowSample a, b;
    a.reference_date = d("2020-05-01");
    a.features = Tensor2(2, 1);
    a.features(0, 0) = 0.0;
    a.features(1, 0) = 0.0;
    b.reference_date = d("2020-05-02");
    b.features = Tensor2(2, 1);
    b.features(0, 0) = 4.0;
    b.features(1, 0) = 8.0;
    auto stats = fit_normalizer({a, b});
    CHECK(stats.mean[0] == doctest::Approx(3.0));
    // population stddev of {0,0,4,8}
    CHECK(stats.stddev[0] == doctest::Approx(std::sqrt((9.0 + 9.0 + 1.0 + 25.0) / 4.0)));
}

TEST_CASE("empty training set cannot be normalized") {
    CHECK_THROWS_AS(fit_normalizer({}), ConfigError);
}

#ifdef SURGECAST_FIXTURE
TEST_CASE("fixture labels around the July peak") {
    std::string text = jsonio::read_file(SURGECAST_FIXTURE);
    auto recs = parse_daily_csv(text);
    auto series = build_feature_series(recs, {"hospitalizedCurrently"}, d("2020-03-05"),
                                       d("2020-09-06"));
    CHECK(compute_label(series, "hospitalizedCurrently", d("2020-07-21")) == 1);
    CHECK(compute_label(series, "hospitalizedCurrently", d("2020-07-22")) == 0);
    CHECK(compute_label(series, "hospitalizedCurrently", d("2020-07-28")) == 0);
}
#endif
