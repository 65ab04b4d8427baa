#include "specbm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "specbm/errors.hpp"

namespace specbm {

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) {
      os.close();
      std::remove(tmp.c_str());
      throw IoError("write failed for " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot rename " + tmp + " to " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  if (is.bad()) throw IoError("read failed for " + path);
  return os.str();
}

std::string cluster_result_to_json(const ClusterResult& result,
                                   const SbmParams* params,
                                   std::optional<std::uint64_t> seed,
                                   std::optional<double> agreement_value,
                                   std::optional<bool> recovered) {
  nlohmann::json j;
  j["method"] = method_name(result.method);
  j["n"] = static_cast<int>(result.labeling.signs.size());
  j["lambda1"] = result.lambda1;
  j["lambda2"] = result.lambda2;
  j["lambda3"] = result.lambda3;
  j["gap_flag"] = result.gap_flag;
  j["residual"] = result.residual;
  j["zero_entries"] = result.zero_entries;
  if (params != nullptr) {
    nlohmann::json pj;
    pj["n"] = params->n;
    pj["p"] = params->p;
    pj["q"] = params->q;
    pj["self_loops"] = params->self_loops;
    if (params->alpha) pj["alpha"] = *params->alpha;
    if (params->beta) pj["beta"] = *params->beta;
    j["params"] = pj;
  }
  if (seed) j["seed"] = *seed;
  if (agreement_value) j["agreement"] = *agreement_value;
  if (recovered) j["exactly_recovered"] = *recovered;

  // Canonical orientation: first label +1, so identical partitions always
  // serialize to identical bytes.
  const int flip = result.labeling.signs.empty() || result.labeling.signs[0] >= 0
                       ? 1
                       : -1;
  nlohmann::json labels = nlohmann::json::array();
  for (int8_t s : result.labeling.signs) {
    labels.push_back(static_cast<int>(s) * flip);
  }
  j["labels"] = std::move(labels);
  return j.dump(2) + "\n";
}

std::string regime_report_to_json(const RegimeConstants& rc) {
  nlohmann::json j;
  j["alpha"] = rc.alpha;
  j["beta"] = rc.beta;

  const A1Result a1 = condition_A1(rc);
  nlohmann::json a1j;
  a1j["holds"] = a1.holds;
  if (a1.xi_star) a1j["xi_star"] = *a1.xi_star;
  j["A1"] = a1j;

  nlohmann::json a2j;
  a2j["holds"] = condition_A2(rc);
  a2j["lhs"] = std::sqrt(rc.alpha) - std::sqrt(rc.beta);
  a2j["rhs"] = std::sqrt(2.0);
  j["A2"] = a2j;

  const double mid = (rc.alpha - rc.beta) / 2.0;
  if (mid > 0.0 && mid < (rc.alpha + rc.beta) / 2.0) {
    nlohmann::json fj;
    fj["xi"] = mid;
    fj["value"] = f_exponent(mid, rc);
    j["f_midpoint"] = fj;
  }
  if (rc.beta > 0.0 && rc.alpha >= rc.beta) {
    j["tail_exponent_eps0"] = binomial_diff_tail_exponent(rc, 0.0);
  }
  return j.dump(2) + "\n";
}

std::string dump_dense_text(const SymMatrix& m) {
  std::ostringstream os;
  char buf[64];
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.10g", m.at(i, j));
      os << (j ? " " : "") << buf;
    }
    os << '\n';
  }
  return os.str();
}

std::string dump_sparse_csv(const SymMatrix& m) {
  std::ostringstream os;
  os << "i,j,value\n";
  char buf[64];
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = m.at(i, j);
      if (v != 0.0) {
        std::snprintf(buf, sizeof(buf), "%.10g", v);
        os << i + 1 << ',' << j + 1 << ',' << buf << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace specbm
