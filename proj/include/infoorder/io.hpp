#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "infoorder/counterexample.hpp"

namespace infoorder {

/// Malformed input files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix files are JSON objects keyed by matrix name; each matrix is an array
/// of rows and each entry an array [re, im].
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& name);
std::map<std::string, ComplexMatrix> read_matrix_file(const std::filesystem::path& path);

/// Serializes with 17 significant digits so values re-parse bit-identically.
std::string matrix_to_json_text(const ComplexMatrix& m, int indent = 2);
void write_matrix_file(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, ComplexMatrix>>& named);

/// Reads either {"pairs": [{"rho": M, "sigma": M}, ...]} or a file with
/// rho0, rho1, sigma0, sigma1.
std::vector<StatePair> read_state_pairs(const std::filesystem::path& path,
                                        const Tolerances& tol = {});

struct DichotomyPair {
  QuantumDichotomy source;
  QuantumDichotomy target;
};

/// rho0, rho1, sigma0, sigma1 as two quantum dichotomies.
DichotomyPair read_dichotomy_pair(const std::filesystem::path& path, const Tolerances& tol = {});

Tolerances tolerances_from_json(const nlohmann::json& j, Tolerances base = {});
nlohmann::json tolerances_to_json(const Tolerances& t);

nlohmann::json to_json(const CriterionVerdict& v);
nlohmann::json to_json(const FeasibilityReport& r);
nlohmann::json to_json(const ReproductionReport& r);

/// One header line "t,rho_norm,sigma_norm,f", then one row per sample.
std::string gap_curve_csv(const GapCurve& curve);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace infoorder
