#include "infoorder/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace infoorder {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

ComplexMatrix matrix_from_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) throw FormatError(name + ": matrix must be a non-empty array of rows");
  const auto rows = static_cast<Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw FormatError(name + ": rows must be non-empty arrays");
  const auto cols = static_cast<Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw FormatError(name + ": matrix is not rectangular");
    }
    for (Index c = 0; c < cols; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw FormatError(name + ": each entry must be a [re, im] pair of numbers");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  if (!m.allFinite()) throw FormatError(name + ": non-finite entry");
  return m;
}

namespace {

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

DensityMatrix density_from(const json& j, const std::string& name, const Tolerances& tol) {
  try {
    return DensityMatrix(matrix_from_json(j, name), tol);
  } catch (const std::invalid_argument& e) {
    throw FormatError(name + ": " + e.what());
  }
}

const json& member(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw FormatError(std::string("missing matrix '") + key + "'");
  return doc.at(key);
}

}  // namespace

std::map<std::string, ComplexMatrix> read_matrix_file(const std::filesystem::path& path) {
  const json doc = parse_file(path);
  if (!doc.is_object()) throw FormatError(path.string() + ": expected an object of named matrices");
  std::map<std::string, ComplexMatrix> out;
  for (const auto& [name, value] : doc.items()) out.emplace(name, matrix_from_json(value, name));
  return out;
}

std::string matrix_to_json_text(const ComplexMatrix& m, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  std::ostringstream os;
  os << "[\n";
  for (Index r = 0; r < m.rows(); ++r) {
    os << pad << "  [";
    for (Index c = 0; c < m.cols(); ++c) {
      os << (c ? ", " : "") << "[" << format_double(m(r, c).real()) << ", "
         << format_double(m(r, c).imag()) << "]";
    }
    os << "]" << (r + 1 < m.rows() ? "," : "") << "\n";
  }
  os << pad << "]";
  return os.str();
}

void write_matrix_file(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, ComplexMatrix>>& named) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << "{\n";
  for (std::size_t i = 0; i < named.size(); ++i) {
    out << "  " << json(named[i].first).dump() << ": " << matrix_to_json_text(named[i].second, 2)
        << (i + 1 < named.size() ? "," : "") << "\n";
  }
  out << "}\n";
}

std::vector<StatePair> read_state_pairs(const std::filesystem::path& path, const Tolerances& tol) {
  const json doc = parse_file(path);
  std::vector<StatePair> pairs;
  if (doc.is_object() && doc.contains("pairs")) {
    const json& list = doc.at("pairs");
    if (!list.is_array() || list.empty()) throw FormatError("'pairs' must be a non-empty array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string tag = "pairs[" + std::to_string(i) + "]";
      pairs.push_back({density_from(member(list[i], "rho"), tag + ".rho", tol),
                       density_from(member(list[i], "sigma"), tag + ".sigma", tol)});
    }
  } else {
    pairs.push_back({density_from(member(doc, "rho0"), "rho0", tol),
                     density_from(member(doc, "sigma0"), "sigma0", tol)});
    pairs.push_back({density_from(member(doc, "rho1"), "rho1", tol),
                     density_from(member(doc, "sigma1"), "sigma1", tol)});
  }
  const Index din = pairs.front().rho.dim();
  const Index dout = pairs.front().sigma.dim();
  for (const auto& p : pairs) {
    if (p.rho.dim() != din || p.sigma.dim() != dout) {
      throw FormatError("state dimensions are inconsistent across pairs");
    }
  }
  return pairs;
}

DichotomyPair read_dichotomy_pair(const std::filesystem::path& path, const Tolerances& tol) {
  const json doc = parse_file(path);
  DensityMatrix r0 = density_from(member(doc, "rho0"), "rho0", tol);
  DensityMatrix r1 = density_from(member(doc, "rho1"), "rho1", tol);
  DensityMatrix s0 = density_from(member(doc, "sigma0"), "sigma0", tol);
  DensityMatrix s1 = density_from(member(doc, "sigma1"), "sigma1", tol);
  if (r0.dim() != r1.dim()) throw FormatError("rho0 and rho1 differ in dimension");
  if (s0.dim() != s1.dim()) throw FormatError("sigma0 and sigma1 differ in dimension");
  return {QuantumDichotomy(std::move(r0), std::move(r1)),
          QuantumDichotomy(std::move(s0), std::move(s1))};
}

#define INFOORDER_TOLERANCE_FIELDS(X)                                                         \
  X(hermitian_reject) X(psd) X(trace) X(povm_sum) X(commute) X(probability_sum) X(column_sum) \
  X(ordering_slack) X(lp_pivot) X(lp_feasibility) X(transition_witness) X(map_feasibility)     \
  X(choi_tp) X(rank) X(overlap) X(targets_distinct) X(closed_form)

Tolerances tolerances_from_json(const json& j, Tolerances base) {
  if (!j.is_object()) throw FormatError("tolerances must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw FormatError("tolerance '" + key + "' must be a number");
    const double v = value.get<double>();
    if (!(v > 0) || !std::isfinite(v)) throw FormatError("tolerance '" + key + "' must be positive");
    bool known = false;
#define X(field)        \
  if (key == #field) {  \
    base.field = v;     \
    known = true;       \
  }
    INFOORDER_TOLERANCE_FIELDS(X)
#undef X
    if (!known) throw FormatError("unknown tolerance '" + key + "'");
  }
  return base;
}

json tolerances_to_json(const Tolerances& t) {
  json j = json::object();
#define X(field) j[#field] = t.field;
  INFOORDER_TOLERANCE_FIELDS(X)
#undef X
  return j;
}

namespace {

json t_value(double t) {
  return std::isfinite(t) ? json(t) : json("inf");
}

json complex_vector(const ComplexVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
  return arr;
}

}  // namespace

json to_json(const CriterionVerdict& v) {
  json j;
  j["outcome"] = to_string(v.outcome);
  j["witness_t"] = v.witness_t ? t_value(*v.witness_t) : json(nullptr);
  j["witness_gap"] = v.witness_gap;
  j["intervals_certified"] = v.intervals_certified;
  json iv = json::array();
  for (const auto& i : v.uncertified) iv.push_back({t_value(i.lo), t_value(i.hi)});
  j["uncertified"] = iv;
  return j;
}

json to_json(const FeasibilityReport& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["exactness"] = to_string(r.exactness);
  j["note"] = r.note;
  j["has_witness"] = r.witness.has_value();
  if (r.obstruction) {
    j["obstruction"] = {{"psi", complex_vector(r.obstruction->psi)},
                        {"pairs", {r.obstruction->first, r.obstruction->second}},
                        {"top_eigenvalue", r.obstruction->top_eigenvalue}};
  } else {
    j["obstruction"] = nullptr;
  }
  return j;
}

json to_json(const ReproductionReport& r) {
  json j;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["hypothesis_holds"] = r.hypothesis_holds;
  j["success"] = r.success;
  json stages = json::array();
  for (const auto& s : r.stages) {
    stages.push_back({{"name", s.name}, {"passed", s.passed}, {"detail", s.detail}});
  }
  j["stages"] = stages;
  j["criterion"] = r.criterion ? to_json(*r.criterion) : json(nullptr);
  j["obstruction"] = r.obstruction ? complex_vector(r.obstruction->psi) : json(nullptr);
  j["ptp"] = r.ptp ? to_json(*r.ptp) : json(nullptr);
  j["cptp"] = r.cptp ? to_json(*r.cptp) : json(nullptr);
  json viol = json::array();
  for (const auto& v : r.bounds.violations) {
    viol.push_back({{"t", v.t}, {"f", v.f}, {"bound", v.bound}, {"which", v.which}});
  }
  j["bounds"] = {{"passed", r.bounds.passed},
                 {"points_checked", r.bounds.points_checked},
                 {"violations", viol}};
  return j;
}

std::string gap_curve_csv(const GapCurve& curve) {
  std::ostringstream os;
  os << "t,rho_norm,sigma_norm,f\n";
  for (const auto& s : curve.samples) {
    os << format_double(s.t) << ',' << format_double(s.rho_norm) << ','
       << format_double(s.sigma_norm) << ',' << format_double(s.f) << '\n';
  }
  return os.str();
}

}  // namespace infoorder
