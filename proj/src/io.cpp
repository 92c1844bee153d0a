#include "zdet/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "zdet/error.hpp"

namespace zdet {

namespace {

double number(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string("field '") + key + "' must be finite");
  return x;
}

double number_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

int kernel_field(const Json& j) {
  if (!j.contains("kernel")) return 0;
  const Json& v = j.at("kernel");
  if (!v.is_number_integer() || v.get<long>() < 0) {
    throw ConfigError("field 'kernel' must be a non-negative integer");
  }
  return v.get<int>();
}

double finite(const Json& v, const char* what) {
  if (!v.is_number()) throw ConfigError(std::string(what) + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string(what) + " must be finite");
  return x;
}

template <class T>
Json pieces_json(const BasicRegScalar<T>& x, auto&& enc) {
  Json p;
  p["linear_in_r"] = {{"coefficient", enc(x.linear_in_r.coefficient)},
                      {"zeta_absB_m1", x.linear_in_r.invariant}};
  p["log_part"] = {{"coefficient", enc(x.log_part.coefficient)},
                   {"dzeta_B2_0", x.log_part.invariant}};
  p["count_part"] = {{"coefficient", enc(x.count_part.coefficient)},
                     {"zeta_B2_0", x.count_part.invariant}};
  p["kernel_part"] = enc(x.kernel_part);
  p["convergent_tail"] = enc(x.convergent_tail);
  return p;
}

std::string cache_name(double lambda, double r) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "roots_%.17g_%.17g.json", lambda, r);
  return buf;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

TangentialModel model_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("model must be an object with a string field 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  const int k = kernel_field(j);
  if (kind == "arithmetic") {
    if (!j.contains("mult") || !j.at("mult").is_array()) {
      throw ConfigError("arithmetic model needs an array field 'mult'");
    }
    std::vector<double> c;
    for (const auto& v : j.at("mult")) c.push_back(finite(v, "multiplicity coefficient"));
    return TangentialModel::make_arithmetic(number(j, "a"), number(j, "d"), c, k);
  }
  if (kind == "explicit") {
    if (!j.contains("lines") || !j.at("lines").is_array()) {
      throw ConfigError("explicit model needs an array field 'lines'");
    }
    std::vector<EigenLine> lines;
    for (const auto& l : j.at("lines")) {
      if (!l.is_array() || l.size() != 2) {
        throw ConfigError("explicit model lines must be [lambda, multiplicity] pairs");
      }
      lines.push_back({finite(l[0], "line eigenvalue"), finite(l[1], "line multiplicity")});
    }
    return TangentialModel::make_explicit(std::move(lines), k);
  }
  throw ConfigError("unknown model kind '" + kind + "'");
}

TangentialModel load_model(const std::filesystem::path& path) {
  return model_from_json(read_json_file(path));
}

CapOperator cap_from_json(const Json& j, const TangentialModel& model) {
  if (!j.is_object() || !j.contains("mu") || !j.at("mu").is_string()) {
    throw ConfigError("cap must be an object with a string field 'mu'");
  }
  const std::string mu = j.at("mu").get<std::string>();
  const double kv = number_or(j, "kernel_value", 0.0);
  if (mu == "zero") return CapOperator::make(CapOperator::Kind::Zero, 0.0, 1.0, kv, model);
  if (mu != "absB_plus") throw ConfigError("unknown cap kind '" + mu + "'");
  double c = 0.0, beta = 1.0;
  if (j.contains("pert")) {
    const Json& p = j.at("pert");
    if (!p.is_object()) throw ConfigError("cap field 'pert' must be an object");
    c = number_or(p, "c", 0.0);
    beta = number_or(p, "beta", 1.0);
  }
  return CapOperator::make(CapOperator::Kind::AbsBPlus, c, beta, kv, model);
}

CapOperator load_cap(const std::filesystem::path& path, const TangentialModel& model) {
  return cap_from_json(read_json_file(path), model);
}

Json to_json(const RegScalar& x) {
  Json j;
  j["value"] = x.value;
  j["pieces"] = pieces_json(x, [](double v) { return Json(v); });
  j["est_error"] = x.est_error;
  return j;
}

Json to_json(const ComplexRegScalar& x) {
  const auto enc = [](const cplx& v) { return Json::array({v.real(), v.imag()}); };
  Json j;
  j["value"] = enc(x.value);
  j["pieces"] = pieces_json(x, enc);
  j["est_error"] = x.est_error;
  return j;
}

Json to_json(const RootSequence& seq) {
  return Json{{"lambda", seq.lambda}, {"r", seq.r}, {"nu", seq.nu}, {"roots", seq.roots}};
}

RootSequence root_sequence_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("roots") || !j.at("roots").is_array()) {
    throw ConfigError("root sequence must be an object with 'lambda', 'r' and 'roots'");
  }
  RootSequence seq;
  seq.lambda = number(j, "lambda");
  seq.r = number(j, "r");
  const double l2 = seq.lambda * seq.lambda;
  for (const auto& v : j.at("roots")) {
    const double mu = finite(v, "root");
    if (!(mu > l2)) throw ConfigError("root below lambda^2");
    seq.roots.push_back(mu);
  }
  if (j.contains("nu")) {
    // nu is the primary quantity; roots alone lose bits for large lambda
    if (!j.at("nu").is_array() || j.at("nu").size() != seq.roots.size()) {
      throw ConfigError("root sequence 'nu' must match 'roots' in length");
    }
    for (const auto& v : j.at("nu")) {
      const double nu = finite(v, "nu");
      if (!(nu > 0.0)) throw ConfigError("nu must be positive");
      seq.nu.push_back(nu);
    }
  } else {
    for (double mu : seq.roots) seq.nu.push_back(std::sqrt(mu - l2));
  }
  return seq;
}

std::optional<RootSequence> load_cached_roots(const std::filesystem::path& dir, double lambda,
                                              double r, int count) {
  const auto path = dir / cache_name(lambda, r);
  if (!std::filesystem::exists(path)) return std::nullopt;
  RootSequence seq = root_sequence_from_json(read_json_file(path));
  if (seq.lambda != lambda || seq.r != r || seq.count() < static_cast<std::size_t>(count)) {
    return std::nullopt;
  }
  return seq;
}

void store_cached_roots(const std::filesystem::path& dir, const RootSequence& seq) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / cache_name(seq.lambda, seq.r));
  if (!out) throw ConfigError("cannot write root cache in '" + dir.string() + "'");
  out << to_json(seq).dump(1) << '\n';
}

}  // namespace zdet
