#include "qleak/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qleak/errors.hpp"

namespace qleak {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InvalidInput(where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

std::vector<std::string> labels_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of labels");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& v = j[i];
    if (v.is_string()) {
      out.push_back(v.get<std::string>());
    } else if (v.is_number_integer()) {
      out.push_back(std::to_string(v.get<long long>()));
    } else {
      fail(where + "[" + std::to_string(i) + "]", "label must be a string or integer");
    }
  }
  return out;
}

std::vector<ComplexMatrix> matrices_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of matrices");
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(matrix_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.dim(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return {{"dim", m.dim()}, {"entries", std::move(rows)}};
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  const auto& dim_j = field(j, "dim", where);
  if (!dim_j.is_number_integer() || dim_j.get<long long>() < 1) {
    fail(where + ".dim", "expected a positive integer");
  }
  const auto d = static_cast<std::size_t>(dim_j.get<long long>());
  const auto& rows = field(j, "entries", where);
  if (!rows.is_array() || rows.size() != d) {
    fail(where + ".entries", "expected " + std::to_string(d) + " rows");
  }
  std::vector<Complex> entries;
  entries.reserve(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    const std::string row_where = where + ".entries[" + std::to_string(r) + "]";
    if (!rows[r].is_array() || rows[r].size() != d) {
      fail(row_where, "expected " + std::to_string(d) + " entries");
    }
    for (std::size_t c = 0; c < d; ++c) {
      const std::string at = row_where + "[" + std::to_string(c) + "]";
      const auto& z = rows[r][c];
      if (z.is_number()) {
        entries.emplace_back(z.get<double>(), 0.0);
      } else if (z.is_array() && z.size() == 2) {
        entries.emplace_back(number_at(z[0], at + "[0]"), number_at(z[1], at + "[1]"));
      } else {
        fail(at, "expected [re, im]");
      }
      if (!std::isfinite(entries.back().real()) || !std::isfinite(entries.back().imag())) {
        fail(at, "entry must be finite");
      }
    }
  }
  return ComplexMatrix(d, std::move(entries));
}

json to_json(const CqEnsemble& e) {
  json states = json::array();
  for (const auto& rho : e.states()) states.push_back(to_json(rho.matrix()));
  return {{"labels", e.labels()}, {"probs", e.probs()}, {"states", std::move(states)}};
}

CqEnsemble ensemble_from_json(const json& j) {
  auto labels = labels_from_json(field(j, "labels", "ensemble"), "labels");
  const auto& probs_j = field(j, "probs", "ensemble");
  if (!probs_j.is_array()) fail("probs", "expected an array of numbers");
  std::vector<double> probs;
  for (std::size_t i = 0; i < probs_j.size(); ++i) {
    probs.push_back(number_at(probs_j[i], "probs[" + std::to_string(i) + "]"));
  }
  const auto matrices = matrices_from_json(field(j, "states", "ensemble"), "states");
  if (labels.size() != probs.size() || labels.size() != matrices.size()) {
    fail("ensemble", "labels, probs and states must have equal length");
  }
  std::vector<DensityOperator> states;
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    if (!(probs[i] > 0.0) || probs[i] > 1.0) {
      fail("probs[" + std::to_string(i) + "]", "probability must lie in (0, 1]");
    }
    try {
      states.emplace_back(matrices[i]);
    } catch (const InvalidInput& err) {
      fail("states[" + std::to_string(i) + "]", err.what());
    }
  }
  return CqEnsemble(std::move(labels), std::move(probs), std::move(states));
}

json to_json(const Povm& povm, const PovmImplementation* impl) {
  json elements = json::array();
  for (const auto& f : povm.elements()) elements.push_back(to_json(f.matrix()));
  json out{{"labels", povm.labels()}, {"elements", std::move(elements)}};
  if (impl != nullptr) {
    json ops = json::array();
    for (const auto& b : impl->operators()) ops.push_back(to_json(b));
    out["implementation"] = std::move(ops);
  }
  return out;
}

PovmFile povm_from_json(const json& j) {
  auto labels = labels_from_json(field(j, "labels", "povm"), "labels");
  const auto matrices = matrices_from_json(field(j, "elements", "povm"), "elements");
  if (labels.size() != matrices.size()) fail("povm", "labels and elements must have equal length");
  std::vector<HermitianMatrix> elements;
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    try {
      elements.emplace_back(matrices[i]);
    } catch (const InvalidInput& err) {
      fail("elements[" + std::to_string(i) + "]", err.what());
    }
  }
  std::optional<PovmFile> out;
  try {
    Povm povm(std::move(labels), std::move(elements));
    out.emplace(PovmFile{std::move(povm), std::nullopt});
  } catch (const InvalidInput& err) {
    fail("elements", err.what());
  }
  if (j.contains("implementation") && !j["implementation"].is_null()) {
    auto ops = matrices_from_json(j["implementation"], "implementation");
    try {
      out->implementation.emplace(out->povm, std::move(ops));
    } catch (const InvalidInput& err) {
      fail("implementation", err.what());
    }
  }
  return std::move(*out);
}

json to_json(const LeakageEstimate& est) {
  json out{{"bits", est.bits},
           {"kind", to_string(est.kind)},
           {"meta",
            {{"starts", est.meta.starts},
             {"evaluations", est.meta.evaluations},
             {"seed", est.meta.seed},
             {"best_start", est.meta.best_start},
             {"converged_starts", est.meta.converged_starts},
             {"stagnated", est.meta.stagnated},
             {"grid_resolution", est.meta.grid_resolution}}}};
  out["achieving_povm"] = est.achieving_povm ? to_json(*est.achieving_povm) : json(nullptr);
  return out;
}

json to_json(const CertificationReport& report) {
  json outcomes = json::array();
  for (const auto& o : report.outcomes) {
    json dist = json::array();
    for (double v : o.disturbance) dist.push_back(nullable(v));
    outcomes.push_back({{"label", o.label},
                        {"good", o.good},
                        {"max_disturbance", o.max_disturbance},
                        {"probability", o.probability},
                        {"disturbance", std::move(dist)}});
  }
  return {{"certified", report.certified},
          {"worst_prob", report.worst_prob},
          {"worst_disturbance", report.worst_disturbance},
          {"alpha", report.alpha},
          {"delta", report.delta},
          {"mode", to_string(report.mode)},
          {"outcomes", std::move(outcomes)}};
}

json to_json(const CloningBoundResult& r) {
  return {{"feasible", r.feasible},
          {"alpha", r.alpha},
          {"q_bits", r.q_bits},
          {"p1_cap", r.p1_cap},
          {"p1_star", r.p1_star},
          {"p2_star", r.p2_star},
          {"lower_bits", r.lower_bits},
          {"quadratic_slack", r.quadratic_slack},
          {"cap_slack", r.cap_slack},
          {"convex", r.convex}};
}

json to_json(const GentleLeakageInterval& interval) {
  json out{{"lower_bits", interval.lower_bits},
           {"upper_bits", interval.upper_bits},
           {"lower_witness", to_string(interval.lower_witness)},
           {"alpha", interval.alpha},
           {"delta", interval.delta},
           {"cloning_bits", interval.cloning_bits},
           {"search_bits", interval.search_bits},
           {"cloning", to_json(interval.cloning)}};
  out["search_povm"] = interval.search_povm ? to_json(*interval.search_povm) : json(nullptr);
  return out;
}

json to_json(const SimReport& r) {
  return {{"strategy", r.strategy},   {"epsilon", r.epsilon},
          {"rounds", r.rounds},       {"sifted", r.sifted},
          {"errors", r.errors},       {"qber", r.qber},
          {"eve_leakage_bits", r.eve_leakage_bits},
          {"mean_disturbance", r.mean_disturbance},
          {"ci95", r.ci95},           {"seed", r.seed}};
}

json to_json(const ExactRoundStatistics& s) {
  return {{"qber", s.qber},
          {"eve_leakage_bits", s.eve_leakage_bits},
          {"mean_disturbance", s.mean_disturbance},
          {"disturbance_variance", s.disturbance_variance}};
}

json to_json(const RegionDisagreement& r) {
  return {{"d", r.d},
          {"grid", r.grid},
          {"points", r.points},
          {"sqrt_defined", r.sqrt_defined},
          {"sqrt_only", r.sqrt_only},
          {"quadratic_only", r.quadratic_only},
          {"agree", r.agree}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& err) {
    throw InvalidInput(path.string() + ": " + err.what());
  }
}

CqEnsemble load_ensemble(const std::filesystem::path& path) {
  const auto j = read_json_file(path);
  try {
    return ensemble_from_json(j);
  } catch (const InvalidInput& err) {
    throw InvalidInput(path.string() + ": " + err.what());
  }
}

PovmFile load_povm(const std::filesystem::path& path) {
  const auto j = read_json_file(path);
  try {
    return povm_from_json(j);
  } catch (const InvalidInput& err) {
    throw InvalidInput(path.string() + ": " + err.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput(tmp.string() + ": cannot open for writing");
    out << content;
    if (!out) throw InvalidInput(tmp.string() + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace qleak
