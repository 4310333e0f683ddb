#include "ivnow/ivindex/ivindex.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "ivnow/core/error.hpp"

namespace ivnow::ivindex {

namespace {

bool usable(const OptionQuote& q) { return q.bid > 0.0; }

struct StrikeRow {
    double strike = 0.0;
    std::optional<OptionQuote> call;
    std::optional<OptionQuote> put;
};

std::vector<StrikeRow> strike_ladder(const ExpiryQuotes& chain) {
    std::map<double, StrikeRow> rows;
    for (const auto& q : chain.quotes) {
        auto& row = rows[q.strike];
        row.strike = q.strike;
        if (q.right == Right::call)
            row.call = q;
        else
            row.put = q;
    }
    std::vector<StrikeRow> out;
    out.reserve(rows.size());
    for (auto& [k, row] : rows)
        out.push_back(row);
    return out;
}

}  // namespace

std::vector<ExpiryQuotes> group_by_expiry(const OptionChainSnapshot& chain) {
    std::map<Date, ExpiryQuotes> groups;
    for (const auto& q : chain.quotes) {
        if (q.strike <= 0.0)
            raise(Err::parse_error, chain.symbol + ": non-positive strike");
        if (q.bid < 0.0 || q.ask < q.bid)
            raise(Err::parse_error, chain.symbol + ": invalid bid/ask pair");
        if (q.expiry_date <= chain.asof_date)
            raise(Err::parse_error,
                  chain.symbol + ": expiry " + q.expiry_date.to_string() +
                      " not after asof " + chain.asof_date.to_string());
        auto& g = groups[q.expiry_date];
        g.expiry_date = q.expiry_date;
        g.quotes.push_back(q);
    }
    std::vector<ExpiryQuotes> out;
    out.reserve(groups.size());
    for (auto& [d, g] : groups) {
        std::sort(g.quotes.begin(), g.quotes.end(),
                  [](const OptionQuote& a, const OptionQuote& b) {
                      if (a.strike != b.strike)
                          return a.strike < b.strike;
                      return a.right < b.right;
                  });
        out.push_back(std::move(g));
    }
    return out;
}

std::pair<double, double> forward_and_k0(const ExpiryQuotes& chain, double rate,
                                         double t) {
    auto ladder = strike_ladder(chain);
    double best_gap = 0.0;
    const StrikeRow* best = nullptr;
    for (const auto& row : ladder) {
        if (!row.call || !row.put)
            continue;
        if (row.call->ask <= 0.0 || row.put->ask <= 0.0)
            continue;
        double gap = std::abs(row.call->mid() - row.put->mid());
        if (!best || gap < best_gap) {
            best = &row;
            best_gap = gap;
        }
    }
    if (!best)
        raise(Err::no_paired_strike,
              "no strike quotes both a call and a put for expiry " +
                  chain.expiry_date.to_string());
    double forward = best->strike +
                     std::exp(rate * t) * (best->call->mid() - best->put->mid());
    double k0 = ladder.front().strike;
    for (const auto& row : ladder)
        if (row.strike <= forward)
            k0 = row.strike;
    return {forward, k0};
}

std::vector<StripEntry> select_term_strikes(const ExpiryQuotes& chain,
                                            double /*forward*/, double k0) {
    auto ladder = strike_ladder(chain);
    auto k0_it = std::find_if(ladder.begin(), ladder.end(),
                              [&](const StrikeRow& r) { return r.strike == k0; });
    if (k0_it == ladder.end())
        raise(Err::empty_side, "K0 not present in strike ladder");
    const size_t k0_idx = static_cast<size_t>(k0_it - ladder.begin());

    // At K0 the put and call midpoints are averaged; one side alone still
    // counts if the other right is missing or unusable.
    std::optional<double> k0_price;
    {
        const StrikeRow& row = ladder[k0_idx];
        bool call_ok = row.call && usable(*row.call);
        bool put_ok = row.put && usable(*row.put);
        if (call_ok && put_ok)
            k0_price = 0.5 * (row.call->mid() + row.put->mid());
        else if (call_ok)
            k0_price = row.call->mid();
        else if (put_ok)
            k0_price = row.put->mid();
    }

    // Walk outward, keeping OTM quotes with a non-zero bid; a side ends after
    // two consecutive zero-bid strikes.
    std::vector<std::pair<double, double>> puts;  // (strike, price), below K0
    int zero_run = 0;
    for (size_t i = k0_idx; i-- > 0;) {
        const StrikeRow& row = ladder[i];
        if (row.put && usable(*row.put)) {
            puts.emplace_back(row.strike, row.put->mid());
            zero_run = 0;
        } else if (++zero_run >= 2) {
            break;
        }
    }
    std::vector<std::pair<double, double>> calls;  // above K0
    zero_run = 0;
    for (size_t i = k0_idx + 1; i < ladder.size(); ++i) {
        const StrikeRow& row = ladder[i];
        if (row.call && usable(*row.call)) {
            calls.emplace_back(row.strike, row.call->mid());
            zero_run = 0;
        } else if (++zero_run >= 2) {
            break;
        }
    }

    if (!k0_price && puts.empty())
        raise(Err::empty_side, "no usable strike at or below K0");
    if (!k0_price && calls.empty())
        raise(Err::empty_side, "no usable strike at or above K0");

    std::vector<StripEntry> strip;
    strip.reserve(puts.size() + calls.size() + 1);
    for (auto it = puts.rbegin(); it != puts.rend(); ++it)
        strip.push_back({it->first, 0.0, it->second});
    if (k0_price)
        strip.push_back({k0, 0.0, *k0_price});
    for (const auto& [k, p] : calls)
        strip.push_back({k, 0.0, p});

    if (strip.empty())
        raise(Err::empty_side, "no usable strikes for expiry");

    // ΔK: half-distance between neighbors in the selected strip, one-sided at
    // the edges. A single-entry strip has no interval; use 0 (no contribution
    // from the summation term would be wrong, so fall back to the strike
    // spacing of the full ladder when available).
    const size_t n = strip.size();
    if (n == 1) {
        double dk = 0.0;
        if (ladder.size() >= 2) {
            // nearest listed neighbor distance
            double best = 0.0;
            for (const auto& row : ladder) {
                if (row.strike == strip[0].strike)
                    continue;
                double d = std::abs(row.strike - strip[0].strike);
                if (best == 0.0 || d < best)
                    best = d;
            }
            dk = best;
        }
        strip[0].delta_k = dk;
        return strip;
    }
    for (size_t i = 0; i < n; ++i) {
        if (i == 0)
            strip[i].delta_k = strip[1].strike - strip[0].strike;
        else if (i == n - 1)
            strip[i].delta_k = strip[n - 1].strike - strip[n - 2].strike;
        else
            strip[i].delta_k = 0.5 * (strip[i + 1].strike - strip[i - 1].strike);
    }
    return strip;
}

TermVariance term_variance(const ExpiryQuotes& chain, double rate, double t) {
    auto [forward, k0] = forward_and_k0(chain, rate, t);
    auto strip = select_term_strikes(chain, forward, k0);
    double sum = 0.0;
    const double growth = std::exp(rate * t);
    for (const auto& e : strip)
        sum += e.delta_k / (e.strike * e.strike) * growth * e.price;
    double ratio = forward / k0 - 1.0;
    double sigma_squared = (2.0 / t) * sum - (1.0 / t) * ratio * ratio;
    if (sigma_squared < 0.0)
        sigma_squared = 0.0;
    TermVariance tv;
    tv.expiry_date = chain.expiry_date;
    tv.t = t;
    tv.forward = forward;
    tv.k0 = k0;
    tv.sigma_squared = sigma_squared;
    return tv;
}

IvPoint iv30(const OptionChainSnapshot& chain) {
    auto expiries = group_by_expiry(chain);
    if (expiries.empty())
        raise(Err::no_expiries, chain.symbol + ": option chain has no expiries");

    std::vector<TermVariance> terms;
    terms.reserve(expiries.size());
    std::optional<Error> first_failure;
    for (const auto& exp : expiries) {
        double t = year_fraction(chain.asof_date, exp.expiry_date);
        try {
            terms.push_back(term_variance(exp, chain.risk_free_rate, t));
        } catch (const Error& e) {
            if (!first_failure)
                first_failure = e;
        }
    }
    if (terms.empty())
        throw *first_failure;

    const double t30 = 30.0 / 365.0;
    IvPoint point;
    point.asof_date = chain.asof_date;

    if (terms.size() == 1) {
        point.iv = 100.0 * std::sqrt(terms[0].sigma_squared);
        return point;
    }

    // Straddling pair around the 30-day point when one exists, otherwise the
    // two nearest terms (linear extrapolation, variance floored at 0).
    const TermVariance* near = nullptr;
    const TermVariance* next = nullptr;
    for (const auto& tv : terms) {
        if (tv.t <= t30 && (!near || tv.t > near->t))
            near = &tv;
        if (tv.t > t30 && (!next || tv.t < next->t))
            next = &tv;
    }
    if (!near) {
        near = &terms[0];
        next = &terms[1];
    } else if (!next) {
        next = &terms[terms.size() - 1];
        near = &terms[terms.size() - 2];
    }

    double theta_near = near->t * near->sigma_squared;
    double theta_next = next->t * next->sigma_squared;
    double theta30 = theta_near + (theta_next - theta_near) *
                                      (t30 - near->t) / (next->t - near->t);
    double variance30 = theta30 / t30;
    if (variance30 < 0.0)
        variance30 = 0.0;
    point.iv = 100.0 * std::sqrt(variance30);
    return point;
}

}  // namespace ivnow::ivindex
