#include "povmdisc/json_io.hpp"

#include <cstdio>
#include <fstream>

namespace povmdisc {

namespace {

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw IoError("expected a [re, im] pair, got " + j.dump());
    return {j[0].get<double>(), j[1].get<double>()};
}

Json ket_to_json(const Ket& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

Ket ket_from_json(const Json& j) {
    if (!j.is_array()) throw IoError("expected an array of [re, im] pairs");
    Ket v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

Json matrix_to_json(const ComplexMatrix& m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

ComplexMatrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw IoError("expected a non-empty nested array matrix");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    ComplexMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(j[r].size()) != cols)
            throw IoError("ragged matrix rows in JSON");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
    }
    return m;
}

RankOnePovm povm_from_json(int dim, const Json& vectors, const char* field) {
    if (!vectors.is_array() || vectors.empty())
        throw IoError(std::string("povm pair JSON: '") + field + "' must be a non-empty array");
    RankOnePovm povm;
    povm.dim = dim;
    for (const Json& vj : vectors) {
        Ket v = ket_from_json(vj);
        if (v.size() != dim)
            throw IoError(std::string("povm pair JSON: vector in '") + field + "' has dimension " +
                          std::to_string(v.size()) + ", expected " + std::to_string(dim));
        povm.vectors.push_back(std::move(v));
    }
    return povm;
}

}  // namespace

Json pair_to_json(const PovmPair& pair) {
    Json j;
    j["dim"] = pair.dim();
    j["m"] = pair.effect_count();
    Json first = Json::array(), second = Json::array();
    for (const Ket& v : pair.first.vectors) first.push_back(ket_to_json(v));
    for (const Ket& v : pair.second.vectors) second.push_back(ket_to_json(v));
    j["first"] = std::move(first);
    j["second"] = std::move(second);
    return j;
}

PovmPair pair_from_json(const Json& j) {
    if (!j.contains("dim") || !j.contains("m") || !j.contains("first") || !j.contains("second"))
        throw IoError("povm pair JSON: required fields are dim, m, first, second");
    const int dim = j["dim"].get<int>();
    const int m = j["m"].get<int>();
    if (dim < 1) throw IoError("povm pair JSON: dim must be positive");
    PovmPair pair;
    pair.first = povm_from_json(dim, j["first"], "first");
    pair.second = povm_from_json(dim, j["second"], "second");
    if (pair.first.effect_count() != m || pair.second.effect_count() != m)
        throw IoError("povm pair JSON: effect counts disagree with m = " + std::to_string(m));
    check_pair(pair);
    return pair;
}

Json verdict_to_json(const Verdict& v, bool include_witness) {
    Json j;
    j["category"] = to_string(v.category);
    j["identity_in_span"] = v.identity_in_span;
    j["identity_residual"] = v.identity_residual;
    j["disjoint"] = v.disjoint;
    j["positive_in_span"] = v.positive_in_span;
    if (v.witness_state) {
        j["witness_min_eigenvalue"] = v.witness_min_eigenvalue;
        j["witness_in_span_residual"] = v.witness_residual;
        if (include_witness) j["witness_state"] = matrix_to_json(*v.witness_state);
    }
    if (!v.parallel_certificates.empty()) {
        Json certs;
        for (const auto& [n, result] : v.parallel_certificates)
            certs[std::to_string(n)] = parallel_result_to_json(result, include_witness);
        j["parallel_certificates"] = std::move(certs);
    }
    return j;
}

Json parallel_result_to_json(const ParallelCheckResult& result, bool include_witness) {
    Json j;
    j["n_uses"] = result.n_uses;
    j["witness_found"] = result.witness.has_value();
    j["best_residual"] = result.best_residual;
    if (result.witness && include_witness) j["witness"] = matrix_to_json(*result.witness);
    return j;
}

Json scheme_to_json(const AdaptiveScheme& scheme) {
    Json j;
    j["dim"] = scheme.dim;
    j["convention"] = "vec=col-of-first-factor";
    j["input_state"] = ket_to_json(scheme.input_state);
    j["a_matrix"] = matrix_to_json(scheme.a_matrix);
    j["xi"] = ket_to_json(scheme.xi);
    j["eta"] = ket_to_json(scheme.eta);
    j["phases"] = scheme.phases;
    Json isometries = Json::array();
    for (const ComplexMatrix& u : scheme.isometries) isometries.push_back(matrix_to_json(u));
    j["isometries"] = std::move(isometries);
    Json measurements = Json::array();
    const int m = scheme.effect_count();
    for (int i = 0; i < m; ++i)
        for (int jj = 0; jj < m; ++jj) {
            const auto& meas = scheme.measurement(i, jj);
            Json entry;
            entry["i"] = i;
            entry["j"] = jj;
            entry["informative"] = meas.informative;
            entry["first"] = matrix_to_json(meas.first);
            entry["second"] = matrix_to_json(meas.second);
            measurements.push_back(std::move(entry));
        }
    j["final_measurements"] = std::move(measurements);
    return j;
}

AdaptiveScheme scheme_from_json(const Json& j) {
    for (const char* field : {"dim", "input_state", "a_matrix", "xi", "eta", "phases",
                              "isometries", "final_measurements"})
        if (!j.contains(field))
            throw IoError(std::string("scheme JSON: missing field '") + field + "'");
    if (j.contains("convention") && j["convention"] != "vec=col-of-first-factor")
        throw IoError("scheme JSON: unsupported vectorization convention " +
                      j["convention"].dump());
    AdaptiveScheme scheme;
    scheme.dim = j["dim"].get<int>();
    scheme.input_state = ket_from_json(j["input_state"]);
    scheme.a_matrix = matrix_from_json(j["a_matrix"]);
    scheme.xi = ket_from_json(j["xi"]);
    scheme.eta = ket_from_json(j["eta"]);
    scheme.phases = j["phases"].get<std::vector<double>>();
    for (const Json& u : j["isometries"]) scheme.isometries.push_back(matrix_from_json(u));
    const std::size_t m = scheme.isometries.size();
    scheme.final_measurements.resize(m * m);
    std::vector<bool> seen(m * m, false);
    for (const Json& entry : j["final_measurements"]) {
        const std::size_t i = entry.at("i").get<std::size_t>();
        const std::size_t jj = entry.at("j").get<std::size_t>();
        if (i >= m || jj >= m) throw IoError("scheme JSON: measurement path out of range");
        AdaptiveScheme::PathMeasurement meas;
        meas.informative = entry.at("informative").get<bool>();
        meas.first = matrix_from_json(entry.at("first"));
        meas.second = matrix_from_json(entry.at("second"));
        scheme.final_measurements[i * m + jj] = std::move(meas);
        seen[i * m + jj] = true;
    }
    for (bool s : seen)
        if (!s) throw IoError("scheme JSON: missing measurement path");
    return scheme;
}

Json report_to_json(const SimulationReport& report, bool include_paths) {
    Json j;
    j["mode"] = report.sampled ? "sampled" : "exact";
    j["success_probability"] = report.success_probability;
    if (report.sampled) {
        j["shots"] = report.shots;
        j["seed"] = report.seed;
        j["std_error"] = report.std_error;
    }
    if (include_paths) {
        Json paths = Json::array();
        for (const PathStat& p : report.per_path) {
            Json entry;
            entry["i"] = p.first_outcome;
            entry["j"] = p.second_outcome;
            entry["p_first"] = p.prob_under_first;
            entry["p_second"] = p.prob_under_second;
            entry["overlap"] = p.conditional_overlap;
            paths.push_back(std::move(entry));
        }
        j["per_path"] = std::move(paths);
    }
    return j;
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw IoError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << text;
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename " + tmp.string() + " -> " + path.string() + " failed: " +
                          ec.message());
}

void write_json_atomic(const std::filesystem::path& path, const Json& j) {
    write_text_atomic(path, j.dump(2) + "\n");
}

}  // namespace povmdisc
