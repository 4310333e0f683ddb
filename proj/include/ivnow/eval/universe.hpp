#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ivnow::eval {

// Ticker -> sector-ETF-symbol mapping over the 11 traditional US market
// sectors (XLB, XLC, XLE, XLF, XLI, XLK, XLP, XLRE, XLU, XLV, XLY).
class SectorUniverse {
public:
    SectorUniverse() = default;
    explicit SectorUniverse(std::map<std::string, std::string> mapping);

    // The bundled default: 11 sectors x 15 tickers = 165 stocks.
    static const SectorUniverse& builtin();

    // CSV `symbol,sector`.
    static SectorUniverse load(const std::string& path);
    void save(const std::string& path) const;

    std::optional<std::string> sector_of(const std::string& symbol) const;
    bool contains(const std::string& symbol) const;
    std::size_t size() const { return mapping_.size(); }
    const std::map<std::string, std::string>& mapping() const { return mapping_; }
    std::vector<std::string> sectors() const;  // distinct, sorted

private:
    std::map<std::string, std::string> mapping_;
};

}  // namespace ivnow::eval
