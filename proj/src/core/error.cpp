#include "ivnow/core/error.hpp"

namespace ivnow {

const char* error_name(Err e) {
    switch (e) {
        case Err::parse_error: return "ParseError";
        case Err::config_error: return "ConfigError";
        case Err::unknown_symbol: return "UnknownSymbol";
        case Err::schema_mismatch: return "SchemaMismatch";
        case Err::series_too_short: return "SeriesTooShort";
        case Err::calendar_mismatch: return "CalendarMismatch";
        case Err::empty_side: return "EmptySide";
        case Err::no_paired_strike: return "NoPairedStrike";
        case Err::no_expiries: return "NoExpiries";
        case Err::empty_data: return "EmptyData";
        case Err::too_few_observations: return "TooFewObservations";
        case Err::not_enough_data: return "NotEnoughData";
        case Err::insufficient_stocks: return "InsufficientStocks";
        case Err::single_class: return "SingleClass";
        case Err::degenerate_model: return "DegenerateModel";
        case Err::numeric_failure: return "NumericFailure";
    }
    return "Error";
}

}  // namespace ivnow
