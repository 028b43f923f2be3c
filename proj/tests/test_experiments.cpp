#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "povmdisc/experiments.hpp"
#include "povmdisc/json_io.hpp"

using namespace povmdisc;

namespace {

SweepConfig small_config() {
    SweepConfig cfg;
    cfg.dim = 2;
    cfg.m_values = {3};
    cfg.samples_per_point = 150;
    cfg.master_seed = 7;
    return cfg;
}

}  // namespace

TEST_CASE("run_sweep: deterministic across worker counts") {
    SweepConfig cfg = small_config();
    cfg.workers = 1;
    const std::string serial = format_csv(run_sweep(cfg));
    cfg.workers = 3;
    const std::string threaded = format_csv(run_sweep(cfg));
    CHECK(serial == threaded);
    cfg.workers = 2;
    CHECK(format_csv(run_sweep(cfg)) == serial);
}

TEST_CASE("run_sweep: counts are consistent and m = d*d is always decided") {
    SweepConfig cfg;
    cfg.dim = 2;
    cfg.m_values = {4};
    cfg.samples_per_point = 100;
    cfg.master_seed = 11;
    const std::vector<SweepRow> rows = run_sweep(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n_not_distinguishable == 100);
    CHECK(rows[0].n_adaptive_only == 0);
    CHECK(rows[0].n_undetermined == 0);
    CHECK(rows[0].p_adaptive == 0.0);
    CHECK(rows[0].n_adaptive_only + rows[0].n_not_distinguishable + rows[0].n_undetermined ==
          rows[0].n_samples);
}

TEST_CASE("run_sweep: qubit three-effect rate is in the expected band") {
    SweepConfig cfg = small_config();
    cfg.samples_per_point = 400;
    cfg.master_seed = 3;
    const std::vector<SweepRow> rows = run_sweep(cfg);
    REQUIRE(rows.size() == 1);
    // loose smoke bound; the quantitative band is pinned by the acceptance suite
    CHECK(rows[0].p_adaptive > 0.25);
    CHECK(rows[0].p_adaptive < 0.55);
    CHECK(rows[0].std_error ==
          doctest::Approx(std::sqrt(rows[0].p_adaptive * (1 - rows[0].p_adaptive) / 400.0)));
}

TEST_CASE("run_sweep: config validation") {
    SweepConfig cfg = small_config();
    cfg.m_values = {5};  // above d^2
    CHECK_THROWS_AS(run_sweep(cfg), PreconditionError);
    cfg = small_config();
    cfg.m_values = {1};
    CHECK_THROWS_AS(run_sweep(cfg), PreconditionError);
    cfg = small_config();
    cfg.samples_per_point = 0;
    CHECK_THROWS_AS(run_sweep(cfg), PreconditionError);
    cfg = small_config();
    cfg.dim = 1;
    CHECK_THROWS_AS(run_sweep(cfg), PreconditionError);
    cfg = small_config();
    cfg.m_values = {};
    CHECK_THROWS_AS(run_sweep(cfg), PreconditionError);
}

TEST_CASE("emit_csv: format, LF endings, exact numeric round trip") {
    std::vector<SweepRow> rows(1);
    rows[0].m = 3;
    rows[0].n_samples = 150;
    rows[0].n_adaptive_only = 59;
    rows[0].n_not_distinguishable = 0;
    rows[0].n_undetermined = 91;
    rows[0].p_adaptive = 59.0 / 150.0;
    rows[0].std_error = std::sqrt(rows[0].p_adaptive * (1 - rows[0].p_adaptive) / 150.0);

    const auto path = std::filesystem::temp_directory_path() / "povmdisc_emit_test.csv";
    emit_csv(rows, path);

    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content.find('\r') == std::string::npos);

    std::size_t newlines = 0;
    for (char c : content)
        if (c == '\n') ++newlines;
    CHECK(newlines == 2);

    const std::string header = content.substr(0, content.find('\n'));
    CHECK(header ==
          "m,n_samples,n_adaptive_only,n_not_distinguishable,n_undetermined,p_adaptive,stderr");

    // parse the data row back and compare bit-for-bit
    std::string row = content.substr(content.find('\n') + 1);
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (pos <= row.size()) {
        std::size_t next = row.find_first_of(",\n", pos);
        if (next == std::string::npos) break;
        fields.push_back(row.substr(pos, next - pos));
        pos = next + 1;
    }
    REQUIRE(fields.size() == 7);
    CHECK(std::stol(fields[1]) == rows[0].n_samples);
    CHECK(std::stol(fields[2]) + std::stol(fields[3]) + std::stol(fields[4]) ==
          rows[0].n_samples);
    CHECK(std::strtod(fields[5].c_str(), nullptr) == rows[0].p_adaptive);
    CHECK(std::strtod(fields[6].c_str(), nullptr) == rows[0].std_error);

    std::filesystem::remove(path);
    CHECK_THROWS_AS(emit_csv({}, path), PreconditionError);
}
