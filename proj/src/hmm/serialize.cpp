#include <json.hpp>

#include "ivnow/core/error.hpp"
#include "ivnow/hmm/hmm.hpp"

namespace ivnow::hmm {

namespace {

constexpr const char* kFormatTag = "ivnow.hmm.v1";

}  // namespace

std::string to_json(const GaussianHmm& model, const FitOptions& options,
                    Date train_start, Date train_end) {
    nlohmann::json doc;
    doc["format"] = kFormatTag;
    doc["n_states"] = model.n_states;
    doc["pi"] = model.pi;
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < model.n_states; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < model.n_states; ++j)
            row.push_back(model.a(i, j));
        rows.push_back(std::move(row));
    }
    doc["transition"] = std::move(rows);
    doc["means"] = model.means;
    doc["variances"] = model.variances;
    doc["seed"] = options.seed;
    doc["n_iter"] = options.n_iter;
    doc["tol"] = options.tol;
    doc["train_start"] = train_start.to_string();
    doc["train_end"] = train_end.to_string();
    return doc.dump();
}

GaussianHmm from_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        raise(Err::parse_error, std::string("hmm artifact: ") + e.what());
    }
    if (!doc.contains("format") || doc["format"] != kFormatTag)
        raise(Err::parse_error, "hmm artifact: unknown format tag");
    GaussianHmm model;
    model.n_states = doc.at("n_states").get<int>();
    model.pi = doc.at("pi").get<std::vector<double>>();
    model.means = doc.at("means").get<std::vector<double>>();
    model.variances = doc.at("variances").get<std::vector<double>>();
    for (const auto& row : doc.at("transition"))
        for (const auto& v : row)
            model.transition.push_back(v.get<double>());
    model.validate();
    return model;
}

}  // namespace ivnow::hmm
