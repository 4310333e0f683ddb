#include "ivnow/sentiment/sentiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "ivnow/core/error.hpp"

namespace ivnow::sentiment {

namespace {

constexpr double kNormalizationAlpha = 15.0;
constexpr int kNegationWindow = 3;

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string strip_punct(const std::string& token) {
    size_t start = 0, end = token.size();
    while (start < end && std::ispunct(static_cast<unsigned char>(token[start])) &&
           token[start] != '$')
        ++start;
    while (end > start && std::ispunct(static_cast<unsigned char>(token[end - 1])))
        --end;
    return token.substr(start, end - start);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        if (i > start) {
            std::string tok = strip_punct(lower(text.substr(start, i - start)));
            if (!tok.empty())
                tokens.push_back(std::move(tok));
        }
    }
    return tokens;
}

LexiconScorer::LexiconScorer(std::unordered_map<std::string, double> lexicon)
    : lexicon_(std::move(lexicon)) {
    if (lexicon_.empty())
        raise(Err::empty_data, "sentiment lexicon is empty");
    for (const auto& n : default_negators())
        negators_.insert(n);
}

const std::vector<std::string>& LexiconScorer::default_negators() {
    static const std::vector<std::string> negators = {
        "not",     "no",      "never",   "none",    "nobody",  "nothing",
        "neither", "nor",     "nowhere", "cannot",  "cant",    "can't",
        "dont",    "don't",   "doesnt",  "doesn't", "didnt",   "didn't",
        "isnt",    "isn't",   "wasnt",   "wasn't",  "arent",   "aren't",
        "werent",  "weren't", "wont",    "won't",   "wouldnt", "wouldn't",
        "shouldnt", "shouldn't", "couldnt", "couldn't", "hasnt", "hasn't",
        "havent",  "haven't", "hadnt",   "hadn't",  "aint",    "ain't",
        "without", "rarely",  "seldom"};
    return negators;
}

void LexiconScorer::set_negators(std::vector<std::string> negators) {
    negators_.clear();
    for (auto& n : negators)
        negators_.insert(std::move(n));
}

double LexiconScorer::score(std::string_view text) const {
    auto tokens = tokenize(text);
    double total = 0.0;
    for (size_t i = 0; i < tokens.size(); ++i) {
        auto it = lexicon_.find(tokens[i]);
        if (it == lexicon_.end())
            continue;
        double valence = it->second;
        for (int back = 1; back <= kNegationWindow && back <= static_cast<int>(i);
             ++back) {
            if (negators_.count(tokens[i - back])) {
                valence = -valence;
                break;
            }
        }
        total += valence;
    }
    if (total == 0.0)
        return 0.0;
    return total / std::sqrt(total * total + kNormalizationAlpha);
}

TradingCalendar::TradingCalendar(std::vector<Date> trading_days,
                                 int close_seconds)
    : days_(std::move(trading_days)), close_seconds_(close_seconds) {
    std::sort(days_.begin(), days_.end());
    days_.erase(std::unique(days_.begin(), days_.end()), days_.end());
}

bool TradingCalendar::contains(Date d) const {
    return std::binary_search(days_.begin(), days_.end(), d);
}

std::optional<Date> TradingCalendar::bucket(const Timestamp& ts) const {
    if (days_.empty())
        return std::nullopt;
    // First trading day >= ts.date.
    auto it = std::lower_bound(days_.begin(), days_.end(), ts.date);
    if (it != days_.end() && *it == ts.date) {
        if (ts.seconds <= close_seconds_)
            return *it;
        ++it;
    }
    if (it == days_.end())
        return std::nullopt;
    return *it;
}

std::vector<DailySocialStats> aggregate_daily(
    const std::vector<TweetRecord>& records, const std::string& symbol,
    const TradingCalendar& calendar, const PolarityScorer* scorer,
    const std::set<std::string>& universe) {
    std::unordered_map<std::int32_t, std::vector<double>> buckets;

    for (const auto& rec : records) {
        if (!universe.empty() && !universe.count(rec.symbol))
            raise(Err::unknown_symbol,
                  "tweet symbol '" + rec.symbol + "' not in configured universe");
        if (rec.symbol != symbol)
            continue;
        double polarity = 0.0;
        if (rec.precomputed_score) {
            polarity = *rec.precomputed_score;
            if (polarity < -1.0 || polarity > 1.0)
                raise(Err::parse_error,
                      "precomputed score outside [-1, 1] for " + rec.symbol);
        } else if (rec.text) {
            if (!scorer)
                raise(Err::config_error,
                      "raw tweet text supplied but no scorer configured");
            polarity = scorer->score(*rec.text);
        } else {
            raise(Err::parse_error,
                  "tweet record carries neither text nor a score");
        }
        auto day = calendar.bucket(rec.ts);
        if (!day)
            continue;
        buckets[day->serial()].push_back(polarity);
    }

    std::vector<DailySocialStats> out;
    out.reserve(calendar.days().size());
    for (Date d : calendar.days()) {
        DailySocialStats s;
        s.symbol = symbol;
        s.date = d;
        auto it = buckets.find(d.serial());
        if (it != buckets.end() && !it->second.empty()) {
            // Summed in sorted order so the mean does not depend on record
            // order.
            auto& vals = it->second;
            std::sort(vals.begin(), vals.end());
            double sum = 0.0;
            for (double v : vals)
                sum += v;
            s.tweet_count = static_cast<long>(vals.size());
            s.mean_polarity = sum / static_cast<double>(vals.size());
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace ivnow::sentiment
