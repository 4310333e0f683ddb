#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ivnow/core/error.hpp"
#include "ivnow/core/rng.hpp"
#include "ivnow/sentiment/sentiment.hpp"

using namespace ivnow;
using namespace ivnow::sentiment;

namespace {

LexiconScorer make_scorer() {
    return LexiconScorer({{"good", 1.9},
                          {"great", 3.1},
                          {"bad", -2.5},
                          {"terrible", -3.0},
                          {"bullish", 2.4},
                          {"bearish", -2.4},
                          {"moon", 3.0}});
}

TradingCalendar week_calendar() {
    // Mon 2013-01-07 .. Fri 2013-01-11, close 16:00.
    std::vector<Date> days;
    for (int d = 7; d <= 11; ++d)
        days.push_back(Date::from_ymd(2013, 1, d));
    return TradingCalendar(std::move(days));
}

TweetRecord scored(const char* sym, const char* ts, double score) {
    TweetRecord rec;
    rec.symbol = sym;
    rec.ts = Timestamp::parse(ts);
    rec.precomputed_score = score;
    return rec;
}

}  // namespace

TEST_CASE("empty text scores zero") {
    auto scorer = make_scorer();
    CHECK(scorer.score("") == 0.0);
    CHECK(scorer.score("nothing matches here") == 0.0);
}

TEST_CASE("single matched token normalizes to v/sqrt(v^2+15)") {
    auto scorer = make_scorer();
    CHECK(scorer.score("moon") ==
          doctest::Approx(3.0 / std::sqrt(9.0 + 15.0)).epsilon(1e-12));
    CHECK(scorer.score("moon") == doctest::Approx(0.6124).epsilon(1e-4));
}

TEST_CASE("negation flips valence within a 3-token window") {
    auto scorer = make_scorer();
    double expected = -1.9 / std::sqrt(1.9 * 1.9 + 15.0);
    CHECK(scorer.score("not good") == doctest::Approx(expected).epsilon(1e-12));
    CHECK(scorer.score("not good") == doctest::Approx(-0.4404).epsilon(1e-4));
    // Negator three tokens back still flips; four back does not.
    CHECK(scorer.score("not really very good") < 0.0);
    CHECK(scorer.score("not x y z good") > 0.0);
}

TEST_CASE("single-token antisymmetry under negation") {
    auto scorer = make_scorer();
    for (const char* word : {"good", "bad", "bullish", "terrible"}) {
        double plain = scorer.score(word);
        double negated = scorer.score(std::string("not ") + word);
        CHECK(negated == doctest::Approx(-plain).epsilon(1e-12));
    }
}

TEST_CASE("scores stay inside the open unit interval") {
    auto scorer = make_scorer();
    std::string pile;
    for (int i = 0; i < 200; ++i)
        pile += "great moon bullish ";
    double s = scorer.score(pile);
    CHECK(s > 0.99);
    CHECK(s < 1.0);
    std::string sink;
    for (int i = 0; i < 200; ++i)
        sink += "terrible bearish bad ";
    CHECK(scorer.score(sink) > -1.0);
    CHECK(scorer.score(sink) < -0.99);
}

TEST_CASE("tokenizer strips punctuation and lowercases, keeps cashtags") {
    auto tokens = tokenize("Huge $AAPL move!! GREAT, (really)");
    REQUIRE(tokens.size() == 5);
    CHECK(tokens[0] == "huge");
    CHECK(tokens[1] == "$aapl");
    CHECK(tokens[3] == "great");
    CHECK(tokens[4] == "really");
}

TEST_CASE("empty lexicon is rejected") {
    CHECK_THROWS_AS(LexiconScorer({}), Error);
}

TEST_CASE("daily aggregation: symmetric scores cancel") {
    auto cal = week_calendar();
    std::vector<TweetRecord> recs = {
        scored("AAPL", "2013-01-08T10:00:00", 0.5),
        scored("AAPL", "2013-01-08T11:00:00", -0.5),
        scored("AAPL", "2013-01-08T12:00:00", 0.0),
    };
    auto stats = aggregate_daily(recs, "AAPL", cal, nullptr);
    REQUIRE(stats.size() == 5);
    CHECK(stats[1].tweet_count == 3);
    CHECK(stats[1].mean_polarity == doctest::Approx(0.0));
    // Quiet days emit count 0, polarity 0.
    CHECK(stats[0].tweet_count == 0);
    CHECK(stats[0].mean_polarity == 0.0);
}

TEST_CASE("close cutoff buckets 15:59 today and 16:01 tomorrow") {
    auto cal = week_calendar();
    std::vector<TweetRecord> recs = {
        scored("AAPL", "2013-01-08T15:59:00", 0.4),
        scored("AAPL", "2013-01-08T16:01:00", 0.8),
    };
    auto stats = aggregate_daily(recs, "AAPL", cal, nullptr);
    CHECK(stats[1].tweet_count == 1);  // Tue 2013-01-08
    CHECK(stats[1].mean_polarity == doctest::Approx(0.4));
    CHECK(stats[2].tweet_count == 1);  // Wed 2013-01-09
    CHECK(stats[2].mean_polarity == doctest::Approx(0.8));
}

TEST_CASE("weekend tweets roll to the next trading day") {
    auto cal = week_calendar();
    std::vector<TweetRecord> recs = {
        scored("AAPL", "2013-01-06T10:00:00", 1.0),  // Sunday
        scored("AAPL", "2013-01-07T09:00:00", -1.0),
    };
    auto stats = aggregate_daily(recs, "AAPL", cal, nullptr);
    CHECK(stats[0].tweet_count == 2);  // both land on Monday
    CHECK(stats[0].mean_polarity == doctest::Approx(0.0));
}

TEST_CASE("records outside the calendar span are dropped") {
    auto cal = week_calendar();
    std::vector<TweetRecord> recs = {
        scored("AAPL", "2013-01-11T16:30:00", 1.0),  // after the final close
        scored("AAPL", "2013-01-09T10:00:00", 0.2),
    };
    auto stats = aggregate_daily(recs, "AAPL", cal, nullptr);
    long total = 0;
    for (const auto& s : stats)
        total += s.tweet_count;
    CHECK(total == 1);
}

TEST_CASE("record conservation within the calendar span") {
    auto cal = week_calendar();
    Rng rng(7);
    std::vector<TweetRecord> recs;
    for (int i = 0; i < 300; ++i) {
        int day = 7 + static_cast<int>(rng.below(5));
        int listen = static_cast<int>(rng.below(16 * 3600));
        TweetRecord rec;
        rec.symbol = "AAPL";
        rec.ts = Timestamp{Date::from_ymd(2013, 1, day), listen};
        rec.precomputed_score = rng.uniform(-1.0, 1.0);
        recs.push_back(rec);
    }
    auto stats = aggregate_daily(recs, "AAPL", cal, nullptr);
    long total = 0;
    for (const auto& s : stats)
        total += s.tweet_count;
    CHECK(total == 300);
}

TEST_CASE("aggregation is invariant under record permutation") {
    auto cal = week_calendar();
    Rng rng(11);
    std::vector<TweetRecord> recs;
    for (int i = 0; i < 100; ++i) {
        int day = 7 + static_cast<int>(rng.below(5));
        TweetRecord rec;
        rec.symbol = "AAPL";
        rec.ts = Timestamp{Date::from_ymd(2013, 1, day),
                           static_cast<int>(rng.below(86400))};
        rec.precomputed_score = rng.uniform(-1.0, 1.0);
        recs.push_back(rec);
    }
    auto base = aggregate_daily(recs, "AAPL", cal, nullptr);
    auto shuffled = recs;
    for (size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    auto out = aggregate_daily(shuffled, "AAPL", cal, nullptr);
    REQUIRE(base.size() == out.size());
    for (size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].tweet_count == out[i].tweet_count);
        CHECK(base[i].mean_polarity == out[i].mean_polarity);
    }
}

TEST_CASE("unknown symbols raise against a configured universe") {
    auto cal = week_calendar();
    std::vector<TweetRecord> recs = {scored("ZZZZ", "2013-01-08T10:00:00", 0.1)};
    try {
        aggregate_daily(recs, "AAPL", cal, nullptr, {"AAPL", "MSFT"});
        FAIL("expected UnknownSymbol");
    } catch (const Error& e) {
        CHECK(e.code() == Err::unknown_symbol);
    }
}

TEST_CASE("text records require a scorer") {
    auto cal = week_calendar();
    TweetRecord rec;
    rec.symbol = "AAPL";
    rec.ts = Timestamp::parse("2013-01-08T10:00:00");
    rec.text = "great";
    CHECK_THROWS_AS(aggregate_daily({rec}, "AAPL", cal, nullptr), Error);
    auto scorer = make_scorer();
    auto stats = aggregate_daily({rec}, "AAPL", cal, &scorer);
    CHECK(stats[1].tweet_count == 1);
    CHECK(stats[1].mean_polarity > 0.0);
}
