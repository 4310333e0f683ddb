#pragma once

#include <map>
#include <string>
#include <vector>

#include "ivnow/core/date.hpp"

namespace ivnow::ivindex {

enum class Right { call, put };

struct OptionQuote {
    Date expiry_date;
    double strike = 0.0;
    Right right = Right::call;
    double bid = 0.0;
    double ask = 0.0;

    double mid() const { return 0.5 * (bid + ask); }
};

struct OptionChainSnapshot {
    std::string symbol;
    Date asof_date;
    std::vector<OptionQuote> quotes;
    double risk_free_rate = 0.0;  // annualized decimal rate R
};

// One selected OTM strip entry: strike K_i, its interval ΔK_i and Q(K_i).
struct StripEntry {
    double strike = 0.0;
    double delta_k = 0.0;
    double price = 0.0;  // Q(K_i): bid-ask midpoint (put/call average at K0)
};

struct TermVariance {
    Date expiry_date;
    double t = 0.0;              // year fraction, calendar days / 365
    double forward = 0.0;        // F
    double k0 = 0.0;             // largest listed strike <= F
    double sigma_squared = 0.0;  // annualized variance, floored at 0
};

struct IvPoint {
    Date asof_date;
    double iv = 0.0;  // percentage points, VIX scale
};

// Quotes for a single expiry, sorted by (strike, right).
struct ExpiryQuotes {
    Date expiry_date;
    std::vector<OptionQuote> quotes;
};

// Groups a snapshot by expiry (ascending) and validates basic invariants:
// expiry after asof, positive strikes, ask >= bid >= 0.
std::vector<ExpiryQuotes> group_by_expiry(const OptionChainSnapshot& chain);

// Forward level and K0 for one expiry. F = K* + e^{rT} (callMid - putMid) at
// the strike K* minimizing |callMid - putMid|; K0 is the largest listed
// strike <= F (lowest strike when F sits below the entire grid). Throws
// NoPairedStrike when no strike has usable quotes on both rights.
std::pair<double, double> forward_and_k0(const ExpiryQuotes& chain, double rate,
                                         double t);

// OTM strip selection around K0: puts below, calls above, both averaged at
// K0. Zero-bid strikes are skipped and a side stops after two consecutive
// zero bids. ΔK is the half-distance between neighbors in the selected strip,
// one-sided at the edges. Throws EmptySide when a side has no usable strike
// and K0 itself is unusable.
std::vector<StripEntry> select_term_strikes(const ExpiryQuotes& chain,
                                            double forward, double k0);

TermVariance term_variance(const ExpiryQuotes& chain, double rate, double t);

// 30-day index: per-expiry variances, linear interpolation of total variance
// T·σ² to the 30-day point (extrapolation when both usable expiries sit on
// one side; single expiry passes through unadjusted). Result is
// 100·sqrt(variance), floored at 0.
IvPoint iv30(const OptionChainSnapshot& chain);

inline double year_fraction(Date asof, Date expiry) {
    return static_cast<double>(expiry - asof) / 365.0;
}

}  // namespace ivnow::ivindex
