#include "ivnow/io/tables.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "ivnow/core/csv.hpp"
#include "ivnow/core/error.hpp"

namespace ivnow::io {

namespace {

std::string at_line(const std::string& path, int line_no) {
    return path + ":" + std::to_string(line_no);
}

}  // namespace

std::map<std::string, features::DatedSeries> load_series(
    const std::string& path, const std::string& value_column) {
    auto csv = read_csv(path);
    int sym = csv.require_column("symbol");
    int date = csv.require_column("date");
    int val = csv.require_column(value_column);

    std::map<std::string, std::vector<std::pair<Date, double>>> rows;
    for (const auto& [line_no, fields] : csv.rows) {
        Date d = Date::try_parse(fields[date])
                     .value_or(Date(INT32_MIN));
        if (d == Date(INT32_MIN))
            raise(Err::parse_error, at_line(path, line_no) + ": bad date '" +
                                        fields[date] + "'");
        double v = parse_double(fields[val], at_line(path, line_no));
        rows[fields[sym]].emplace_back(d, v);
    }
    std::map<std::string, features::DatedSeries> out;
    for (auto& [symbol, pairs] : rows) {
        std::sort(pairs.begin(), pairs.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (size_t i = 1; i < pairs.size(); ++i)
            if (pairs[i].first == pairs[i - 1].first)
                raise(Err::parse_error, path + ": duplicate date " +
                                            pairs[i].first.to_string() +
                                            " for symbol " + symbol);
        features::DatedSeries s;
        s.dates.reserve(pairs.size());
        s.values.reserve(pairs.size());
        for (const auto& [d, v] : pairs) {
            s.dates.push_back(d);
            s.values.push_back(v);
        }
        out.emplace(symbol, std::move(s));
    }
    return out;
}

RateProvider RateProvider::from_file(const std::string& path,
                                     double constant_rate) {
    RateProvider provider(constant_rate);
    auto csv = read_csv(path);
    int date = csv.require_column("date");
    int rate = csv.require_column("rate");
    for (const auto& [line_no, fields] : csv.rows) {
        auto d = Date::try_parse(fields[date]);
        if (!d)
            raise(Err::parse_error, at_line(path, line_no) + ": bad date '" +
                                        fields[date] + "'");
        provider.by_date_[d->serial()] =
            parse_double(fields[rate], at_line(path, line_no));
    }
    return provider;
}

double RateProvider::rate_on(Date d) const {
    auto it = by_date_.find(d.serial());
    return it == by_date_.end() ? constant_ : it->second;
}

ChainTable load_chains(const std::string& path, const RateProvider& rates) {
    auto csv = read_csv(path);
    int sym = csv.require_column("symbol");
    int asof = csv.require_column("asof_date");
    int expiry = csv.require_column("expiry_date");
    int right = csv.require_column("right");
    int strike = csv.require_column("strike");
    int bid = csv.require_column("bid");
    int ask = csv.require_column("ask");
    int volume = csv.column("volume");

    ChainTable table;
    table.has_volume = volume >= 0;
    // symbol -> date -> total dollar volume.
    std::map<std::string, std::map<Date, double>> day_dollars;

    for (const auto& [line_no, fields] : csv.rows) {
        auto asof_d = Date::try_parse(fields[asof]);
        auto exp_d = Date::try_parse(fields[expiry]);
        if (!asof_d || !exp_d)
            raise(Err::parse_error, at_line(path, line_no) + ": bad date");
        ivindex::OptionQuote q;
        q.expiry_date = *exp_d;
        q.strike = parse_double(fields[strike], at_line(path, line_no));
        q.bid = parse_double(fields[bid], at_line(path, line_no));
        q.ask = parse_double(fields[ask], at_line(path, line_no));
        if (fields[right] == "call" || fields[right] == "C")
            q.right = ivindex::Right::call;
        else if (fields[right] == "put" || fields[right] == "P")
            q.right = ivindex::Right::put;
        else
            raise(Err::parse_error, at_line(path, line_no) +
                                        ": right must be call or put, got '" +
                                        fields[right] + "'");
        if (q.strike <= 0.0)
            raise(Err::parse_error,
                  at_line(path, line_no) + ": strike must be positive");
        if (q.bid < 0.0 || q.ask < q.bid)
            raise(Err::parse_error,
                  at_line(path, line_no) + ": requires ask >= bid >= 0");
        if (*exp_d <= *asof_d)
            raise(Err::parse_error,
                  at_line(path, line_no) + ": expiry not after asof date");

        auto& snap = table.chains[fields[sym]][*asof_d];
        if (snap.quotes.empty()) {
            snap.symbol = fields[sym];
            snap.asof_date = *asof_d;
            snap.risk_free_rate = rates.rate_on(*asof_d);
        }
        snap.quotes.push_back(q);
        if (volume >= 0) {
            double v = parse_double(fields[volume], at_line(path, line_no));
            day_dollars[fields[sym]][*asof_d] += v * q.mid() * 100.0;
        }
    }
    if (table.has_volume) {
        for (const auto& [symbol, days] : day_dollars) {
            double sum = 0.0;
            for (const auto& [d, dollars] : days)
                sum += dollars;
            table.liquidity[symbol] = sum / static_cast<double>(days.size());
        }
    }
    return table;
}

std::vector<sentiment::TweetRecord> load_scored_tweets(
    const std::string& path) {
    auto csv = read_csv(path);
    int sym = csv.require_column("symbol");
    int ts = csv.require_column("ts");
    int score = csv.require_column("score");
    std::vector<sentiment::TweetRecord> out;
    out.reserve(csv.rows.size());
    for (const auto& [line_no, fields] : csv.rows) {
        sentiment::TweetRecord rec;
        rec.symbol = fields[sym];
        auto parsed = Timestamp::try_parse(fields[ts]);
        if (!parsed)
            raise(Err::parse_error, at_line(path, line_no) +
                                        ": bad timestamp '" + fields[ts] + "'");
        rec.ts = *parsed;
        double s = parse_double(fields[score], at_line(path, line_no));
        if (s < -1.0 || s > 1.0)
            raise(Err::parse_error,
                  at_line(path, line_no) + ": score outside [-1, 1]");
        rec.precomputed_score = s;
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<sentiment::TweetRecord> load_tweets_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        raise(Err::parse_error, "cannot open '" + path + "'");
    std::vector<sentiment::TweetRecord> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            raise(Err::parse_error,
                  at_line(path, line_no) + ": " + e.what());
        }
        if (!doc.contains("symbol") || !doc.contains("ts"))
            raise(Err::parse_error,
                  at_line(path, line_no) + ": needs symbol and ts fields");
        sentiment::TweetRecord rec;
        rec.symbol = doc["symbol"].get<std::string>();
        auto parsed = Timestamp::try_parse(doc["ts"].get<std::string>());
        if (!parsed)
            raise(Err::parse_error, at_line(path, line_no) + ": bad ts");
        rec.ts = *parsed;
        if (doc.contains("text"))
            rec.text = doc["text"].get<std::string>();
        if (doc.contains("score"))
            rec.precomputed_score = doc["score"].get<double>();
        if (!rec.text && !rec.precomputed_score)
            raise(Err::parse_error,
                  at_line(path, line_no) + ": needs text or score");
        out.push_back(std::move(rec));
    }
    return out;
}

std::unordered_map<std::string, double> load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        raise(Err::parse_error, "cannot open '" + path + "'");
    std::unordered_map<std::string, double> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        auto fields = split_fields(line, '\t');
        if (fields.size() < 2 || fields[0].empty())
            raise(Err::parse_error,
                  at_line(path, line_no) + ": expected token<TAB>valence");
        out[std::string(fields[0])] =
            parse_double(fields[1], at_line(path, line_no));
    }
    if (out.empty())
        raise(Err::empty_data, path + ": lexicon has no entries");
    return out;
}

std::map<std::string, double> load_liquidity(const std::string& path) {
    auto csv = read_csv(path);
    int sym = csv.require_column("symbol");
    int liq = csv.require_column("liquidity");
    std::map<std::string, double> out;
    for (const auto& [line_no, fields] : csv.rows)
        out[fields[sym]] = parse_double(fields[liq], at_line(path, line_no));
    return out;
}

std::map<std::string, hmm::RegimePath> load_regime_paths(
    const std::string& path) {
    auto csv = read_csv(path);
    int sym = csv.require_column("symbol");
    int date = csv.require_column("date");
    int regime = csv.require_column("regime");
    int in_sample = csv.require_column("in_sample");

    auto parse_regime = [&](const std::string& text, int line_no) -> int {
        if (text == "low") return 0;
        if (text == "medium") return 1;
        if (text == "high") return 2;
        if (text == "very_high") return 3;
        if (text.rfind("state", 0) == 0)
            return static_cast<int>(
                parse_long(text.substr(5), at_line(path, line_no)));
        return static_cast<int>(parse_long(text, at_line(path, line_no)));
    };

    std::map<std::string, hmm::RegimePath> out;
    for (const auto& [line_no, fields] : csv.rows) {
        auto d = Date::try_parse(fields[date]);
        if (!d)
            raise(Err::parse_error, at_line(path, line_no) + ": bad date");
        hmm::RegimePoint p;
        p.date = *d;
        p.ordinal = parse_regime(fields[regime], line_no);
        p.in_sample = fields[in_sample] == "1" || fields[in_sample] == "true";
        out[fields[sym]].points.push_back(p);
    }
    return out;
}

void write_series(const std::string& path,
                  const std::map<std::string, features::DatedSeries>& series,
                  const std::string& value_column) {
    std::ofstream out(path);
    if (!out)
        raise(Err::config_error, "cannot write '" + path + "'");
    out << "symbol,date," << value_column << "\n";
    for (const auto& [symbol, s] : series)
        for (size_t i = 0; i < s.dates.size(); ++i)
            out << symbol << "," << s.dates[i].to_string() << ","
                << fmt_double(s.values[i]) << "\n";
}

void write_feature_matrix(const std::string& path,
                          const features::FeatureMatrix& matrix) {
    std::ofstream out(path);
    if (!out)
        raise(Err::config_error, "cannot write '" + path + "'");
    out << "date";
    for (const auto& c : matrix.columns)
        out << "," << c;
    out << ",target\n";
    for (size_t r = 0; r < matrix.rows(); ++r) {
        out << matrix.dates[r].to_string();
        for (double v : matrix.row(r))
            out << "," << fmt_double(v);
        out << "," << matrix.targets[r] << "\n";
    }
}

void write_regime_paths(const std::string& path,
                        const std::map<std::string, hmm::RegimePath>& paths,
                        int n_states) {
    std::ofstream out(path);
    if (!out)
        raise(Err::config_error, "cannot write '" + path + "'");
    out << "symbol,date,regime,in_sample\n";
    for (const auto& [symbol, p] : paths)
        for (const auto& point : p.points)
            out << symbol << "," << point.date.to_string() << ","
                << hmm::regime_name(point.ordinal, n_states) << ","
                << (point.in_sample ? 1 : 0) << "\n";
}

}  // namespace ivnow::io
