#include "ivnow/eval/universe.hpp"

#include <fstream>
#include <set>

#include "ivnow/core/csv.hpp"
#include "ivnow/core/error.hpp"

namespace ivnow::eval {

namespace {

struct SectorBlock {
    const char* etf;
    const char* tickers[15];
};

// 15 most option-liquid names per sector ETF bucket.
const SectorBlock kUniverse[] = {
    {"XLB",
     {"FCX", "X", "NEM", "CLF", "MOS", "DD", "IP", "CF", "AA", "NUE", "LYB",
      "VMC", "SHW", "BLL", "WRK"}},
    {"XLC",
     {"FB", "NFLX", "GOOG", "T", "TWTR", "VZ", "DIS", "CMCSA", "EA", "YELP",
      "ATVI", "DISH", "CHTR", "Z", "TTWO"}},
    {"XLE",
     {"XOM", "OXY", "CVX", "COP", "SLB", "HAL", "VLO", "EOG", "APA", "KMI",
      "HES", "MPC", "MRO", "RIG", "WMB"}},
    {"XLF",
     {"BAC", "JPM", "C", "GS", "WFC", "AIG", "BX", "MS", "AXP", "CME", "MET",
      "USB", "SCHW", "COF", "BLK"}},
    {"XLI",
     {"GE", "BA", "CAT", "LMT", "UPS", "UNP", "FDX", "DE", "MMM", "HON", "CSX",
      "NSC", "EMR", "NOC", "ETN"}},
    {"XLK",
     {"AAPL", "NVDA", "MSFT", "INTC", "MU", "IBM", "QCOM", "CSCO", "CRM",
      "AMD", "MA", "V", "ORCL", "ADBE", "TXN"}},
    {"XLP",
     {"PG", "WMT", "PM", "KO", "MO", "CL", "COST", "PEP", "HLF", "WBA", "GIS",
      "MNST", "TSN", "CAG", "KR"}},
    {"XLRE",
     {"SPG", "WY", "AMT", "EQIX", "IRM", "CCI", "PSA", "AVB", "VTR", "O",
      "HST", "DLR", "PLD", "MAC", "EQR"}},
    {"XLU",
     {"SO", "EXC", "AEP", "DUK", "NRG", "NEE", "FE", "D", "PPL", "ED", "ETR",
      "EIX", "CNP", "NI", "SRE"}},
    {"XLV",
     {"PFE", "JNJ", "GILD", "LLY", "MRK", "ABT", "BMY", "AMGN", "UNH", "CVS",
      "ABBV", "ISRG", "MDT", "CI", "DHR"}},
    {"XLY",
     {"AMZN", "TSLA", "MCD", "HD", "F", "CMG", "GM", "SBUX", "EBAY", "NKE",
      "TGT", "LOW", "BBY", "LULU", "MGM"}},
};

}  // namespace

SectorUniverse::SectorUniverse(std::map<std::string, std::string> mapping)
    : mapping_(std::move(mapping)) {}

const SectorUniverse& SectorUniverse::builtin() {
    static const SectorUniverse instance = [] {
        std::map<std::string, std::string> m;
        for (const auto& block : kUniverse)
            for (const char* ticker : block.tickers)
                m.emplace(ticker, block.etf);
        return SectorUniverse(std::move(m));
    }();
    return instance;
}

SectorUniverse SectorUniverse::load(const std::string& path) {
    auto csv = read_csv(path);
    int sym_col = csv.require_column("symbol");
    int sec_col = csv.require_column("sector");
    std::map<std::string, std::string> m;
    for (const auto& [line_no, row] : csv.rows) {
        if (!m.emplace(row[sym_col], row[sec_col]).second)
            raise(Err::parse_error, path + ":" + std::to_string(line_no) +
                                        ": duplicate symbol '" + row[sym_col] +
                                        "'");
    }
    return SectorUniverse(std::move(m));
}

void SectorUniverse::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out)
        raise(Err::config_error, "cannot write '" + path + "'");
    out << "symbol,sector\n";
    for (const auto& [sym, sec] : mapping_)
        out << sym << "," << sec << "\n";
}

std::optional<std::string> SectorUniverse::sector_of(
    const std::string& symbol) const {
    auto it = mapping_.find(symbol);
    if (it == mapping_.end())
        return std::nullopt;
    return it->second;
}

bool SectorUniverse::contains(const std::string& symbol) const {
    return mapping_.count(symbol) > 0;
}

std::vector<std::string> SectorUniverse::sectors() const {
    std::set<std::string> s;
    for (const auto& [sym, sec] : mapping_)
        s.insert(sec);
    return {s.begin(), s.end()};
}

}  // namespace ivnow::eval
