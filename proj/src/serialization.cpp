#include "corrbc/serialization.hpp"

#include <stdexcept>

namespace corrbc {

nlohmann::json correlation_to_json(const CorrelationMatrix& r) {
    nlohmann::json doc;
    doc["m"] = r.m();
    auto lags = nlohmann::json::array();
    for (const auto& c : r.lags()) {
        lags.push_back({c.real(), c.imag()});
    }
    doc["lags"] = std::move(lags);
    return doc;
}

CorrelationMatrix correlation_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("m") || !doc.contains("lags")) {
        throw std::invalid_argument("correlation JSON: expected object with \"m\" and \"lags\"");
    }
    const int m = doc.at("m").get<int>();
    const auto& lags = doc.at("lags");
    if (!lags.is_array() || static_cast<int>(lags.size()) != m) {
        throw std::invalid_argument("correlation JSON: \"lags\" must hold m entries");
    }
    std::vector<std::complex<double>> values;
    for (const auto& pair : lags) {
        if (!pair.is_array() || pair.size() != 2) {
            throw std::invalid_argument("correlation JSON: each lag must be [re, im]");
        }
        values.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return CorrelationMatrix::from_lags(values);
}

nlohmann::json grouped_system_to_json(const GroupedSystem& gs) {
    nlohmann::json doc;
    doc["m"] = gs.m;
    doc["users_per_group"] = gs.users_per_group;
    doc["structure"] = to_string(gs.kind);
    doc["generator"] = gs.generator.kind;
    doc["truncation"] = gs.generator.truncation;
    auto groups = nlohmann::json::array();
    for (std::size_t g = 0; g < gs.groups.size(); ++g) {
        nlohmann::json entry;
        const auto& ev = gs.groups[g].eigenvalues;
        entry["eigenvalues"] = std::vector<double>(ev.data(), ev.data() + ev.size());
        if (gs.generator.kind == "one-ring") {
            const auto& geom = gs.generator.geometries[g];
            entry["geometry"] = {{"theta", geom.theta}, {"delta", geom.delta}, {"spacing", geom.spacing}};
        }
        groups.push_back(std::move(entry));
    }
    doc["groups"] = std::move(groups);
    return doc;
}

GroupedSystem grouped_system_from_json(const nlohmann::json& doc) {
    const int m = doc.at("m").get<int>();
    const int users = doc.at("users_per_group").get<int>();
    const std::string generator = doc.at("generator").get<std::string>();
    const auto& groups = doc.at("groups");
    if (generator == "dft") {
        std::vector<std::vector<double>> spectra;
        for (const auto& g : groups) {
            spectra.push_back(g.at("eigenvalues").get<std::vector<double>>());
        }
        return build_unitary_structure(m, spectra, users);
    }
    if (generator == "one-ring") {
        std::vector<OneRingGeometry> geoms;
        for (const auto& g : groups) {
            const auto& geo = g.at("geometry");
            geoms.push_back({geo.at("theta").get<double>(), geo.at("delta").get<double>(),
                             geo.at("spacing").get<double>(), m});
        }
        return one_ring_structure(geoms, users, doc.value("truncation", kDefaultTruncation));
    }
    throw std::invalid_argument("grouped system JSON: unknown generator \"" + generator + "\"");
}

}  // namespace corrbc
