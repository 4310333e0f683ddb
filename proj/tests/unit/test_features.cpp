#include <doctest.h>

#include <vector>

#include "ivnow/core/error.hpp"
#include "ivnow/core/rng.hpp"
#include "ivnow/features/features.hpp"

using namespace ivnow;
using namespace ivnow::features;

namespace {

std::vector<Date> dates(int n, int start_serial = 15706) {
    std::vector<Date> out;
    for (int i = 0; i < n; ++i)
        out.push_back(Date(start_serial + i));
    return out;
}

DatedSeries series(const std::vector<double>& values) {
    DatedSeries s;
    s.dates = dates(static_cast<int>(values.size()));
    s.values = values;
    return s;
}

SocialSeries social(const std::vector<double>& counts,
                    const std::vector<double>& polarity) {
    SocialSeries s;
    s.dates = dates(static_cast<int>(counts.size()));
    s.counts = counts;
    s.polarity = polarity;
    return s;
}

}  // namespace

TEST_CASE("ema of a constant series is that constant") {
    std::vector<double> c(25, 3.5);
    auto out = ema(c, 10);
    REQUIRE(out.size() == c.size());
    for (double v : out)
        CHECK(v == doctest::Approx(3.5));
}

TEST_CASE("ema one-step recursion by hand") {
    std::vector<double> in = {1.0, 2.0};
    auto out = ema(in, 10);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == doctest::Approx(13.0 / 11.0).epsilon(1e-15));
}

TEST_CASE("ema of ten zeros then eleven") {
    std::vector<double> in(11, 0.0);
    in.back() = 11.0;
    auto out = ema(in, 10);
    CHECK(out.back() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("first_diff basics") {
    CHECK(first_diff(std::vector<double>{1, 4, 2}) ==
          std::vector<double>{3, -2});
    auto constant = first_diff(std::vector<double>(8, 2.0));
    for (double v : constant)
        CHECK(v == 0.0);
    std::vector<double> arith = {1, 3, 5, 7};
    for (double v : first_diff(arith))
        CHECK(v == 2.0);
    CHECK_THROWS_AS(first_diff(std::vector<double>{1.0}), Error);
}

TEST_CASE("label_targets applies the strict-up rule with ties down") {
    std::vector<double> iv = {20, 21, 21, 19};
    CHECK(label_targets(iv) == std::vector<int>{1, 0, 0});
    std::vector<double> up = {1, 2, 3, 4, 5};
    CHECK(label_targets(up) == std::vector<int>{1, 1, 1, 1});
    std::vector<double> down = {5, 4, 3, 2, 1};
    CHECK(label_targets(down) == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("label sum equals the number of strict up-moves") {
    Rng rng(3);
    std::vector<double> iv;
    for (int i = 0; i < 200; ++i)
        iv.push_back(20.0 + rng.gauss());
    auto y = label_targets(iv);
    int ups = 0;
    for (size_t i = 0; i + 1 < iv.size(); ++i)
        ups += iv[i + 1] > iv[i] ? 1 : 0;
    int sum = 0;
    for (int v : y)
        sum += v;
    CHECK(sum == ups);
}

TEST_CASE("scenario column counts match the ablation table") {
    const std::vector<std::pair<int, int>> expected = {
        {1, 2}, {2, 8}, {3, 3}, {4, 9}, {5, 6}, {6, 5}, {7, 11}};
    for (auto [id, count] : expected)
        CHECK(scenario(id).feature_count() == count);
    CHECK_THROWS_AS(scenario(0), Error);
    CHECK_THROWS_AS(scenario(8), Error);
}

TEST_CASE("build_matrix: columns, rows and alignment") {
    const int n = 30;
    Rng rng(17);
    std::vector<double> price, iv, counts, pol;
    for (int i = 0; i < n; ++i) {
        price.push_back(100 + rng.gauss());
        iv.push_back(25 + rng.gauss());
        counts.push_back(static_cast<double>(rng.below(40)));
        pol.push_back(rng.uniform(-0.5, 0.5));
    }
    auto m = build_matrix(series(price), series(iv), social(counts, pol),
                          scenario(7));
    CHECK(m.cols() == 11);
    CHECK(m.rows() == n - 2);  // first day (diff) and last day (label) drop
    CHECK(m.columns.front() == "price_diff");
    CHECK(m.columns[2] == "iv_level");
    CHECK(m.columns.back() == "polarity_ema_dev");
    // Row 0 is calendar day 1; its diff and level line up with the inputs.
    CHECK(m.row(0)[0] == doctest::Approx(price[1] - price[0]));
    CHECK(m.row(0)[2] == doctest::Approx(iv[1]));
    CHECK(m.row(0)[3] == doctest::Approx(iv[1] - iv[0]));
    CHECK(m.targets[0] == (iv[2] > iv[1] ? 1 : 0));
    CHECK(m.targets.back() == (iv[n - 1] > iv[n - 2] ? 1 : 0));

    auto s5 = build_matrix(series(price), series(iv), social(counts, pol),
                           scenario(5));
    CHECK(s5.cols() == 6);
    CHECK(s5.columns.front() == "tweet_count");
}

TEST_CASE("build_matrix: missing social days count as quiet") {
    const int n = 10;
    std::vector<double> price(n, 100.0), iv(n, 20.0);
    for (int i = 0; i < n; ++i) {
        price[i] += i;
        iv[i] += (i % 2) * 0.5;
    }
    SocialSeries s;  // only one populated day
    s.dates = {Date(15706 + 4)};
    s.counts = {5.0};
    s.polarity = {0.4};
    auto m = build_matrix(series(price), series(iv), s, scenario(5));
    CHECK(m.row(2)[0] == 0.0);  // tweet_count on a quiet day
    CHECK(m.row(3)[0] == 5.0);  // the populated day (calendar index 4, row 3)
}

TEST_CASE("build_matrix: IV gaps on trading days are an error") {
    const int n = 10;
    std::vector<double> price(n, 100.0);
    DatedSeries iv = series(std::vector<double>(n, 20.0));
    iv.dates.erase(iv.dates.begin() + 5);
    iv.values.erase(iv.values.begin() + 5);
    try {
        build_matrix(series(price), iv, social(std::vector<double>(n, 0.0),
                                               std::vector<double>(n, 0.0)),
                     scenario(3));
        FAIL("expected CalendarMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Err::calendar_mismatch);
    }
}

TEST_CASE("build_matrix: IV on non-trading days is discarded") {
    const int n = 10;
    std::vector<double> price(n, 100.0);
    for (int i = 0; i < n; ++i)
        price[i] += i * 0.5;
    DatedSeries iv = series(std::vector<double>(n, 20.0));
    iv.dates.push_back(Date(15706 + n + 50));  // far off-calendar observation
    iv.values.push_back(99.0);
    auto m = build_matrix(series(price), iv,
                          social(std::vector<double>(n, 0.0),
                                 std::vector<double>(n, 0.0)),
                          scenario(3));
    CHECK(m.rows() == static_cast<size_t>(n - 2));
}

TEST_CASE("no look-ahead: truncating the future reproduces earlier rows") {
    const int n = 60;
    Rng rng(23);
    std::vector<double> price, iv, counts, pol;
    for (int i = 0; i < n; ++i) {
        price.push_back(100 + rng.gauss());
        iv.push_back(25 + rng.gauss());
        counts.push_back(static_cast<double>(rng.below(40)));
        pol.push_back(rng.uniform(-0.5, 0.5));
    }
    auto full = build_matrix(series(price), series(iv), social(counts, pol),
                             scenario(7));
    // Row t sits on calendar day t+1 and its label needs day t+2, so a
    // truncation to t+3 calendar days must reproduce it exactly.
    for (size_t t : {size_t{5}, size_t{20}, size_t{40}}) {
        int cut = static_cast<int>(t) + 3;
        std::vector<double> p(price.begin(), price.begin() + cut);
        std::vector<double> v(iv.begin(), iv.begin() + cut);
        std::vector<double> c(counts.begin(), counts.begin() + cut);
        std::vector<double> q(pol.begin(), pol.begin() + cut);
        auto partial =
            build_matrix(series(p), series(v), social(c, q), scenario(7));
        REQUIRE(partial.rows() == t + 1);
        for (size_t col = 0; col < full.cols(); ++col)
            CHECK(partial.row(t)[col] == full.row(t)[col]);
        CHECK(partial.targets[t] == full.targets[t]);
    }
}
