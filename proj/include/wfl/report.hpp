#ifndef WFL_REPORT_HPP
#define WFL_REPORT_HPP

#include <map>
#include <string>
#include <vector>

namespace wfl {

// Outcome of one numerical certification check.  `constants` holds the
// certified empirical constants (A_w, Q, q_m, C_N, ...), `witness` the
// location where the worst slack/ratio was attained.
struct BoundReport {
    std::string check_id;
    bool passed = false;
    double worst_ratio = 0.0; // worst LHS/RHS ratio or slack, check-dependent
    std::map<std::string, double> constants;
    std::map<std::string, double> witness;
    std::string grid_spec;
    std::string note;

    std::string to_json() const;
    // Header and one row, flattened: constants/witness become key=value lists.
    static std::string csv_header();
    std::string to_csv_row() const;
};

// 17 significant digits, round-half-even (IEEE formatting); the reproducibility
// contract for every CSV/JSON number the tool emits.
std::string format_double(double v);

std::string reports_to_json(const std::vector<BoundReport>& reports);

} // namespace wfl

#endif
