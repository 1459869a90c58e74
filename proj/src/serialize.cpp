#include "zetares/serialize.hpp"

#include "zetares/error.hpp"

namespace zr {

namespace {

std::string q34(quad x) { return to_string_q(x, 34); }

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw InvalidArgument(std::string("construction: missing field '") + key + "'");
  return doc.at(key);
}

double parse_double(const json& v, const char* what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      std::size_t pos = 0;
      const std::string s = v.get<std::string>();
      const double d = std::stod(s, &pos);
      if (pos == s.size()) return d;
    } catch (const std::exception&) {
    }
  }
  throw InvalidArgument(std::string("construction: field '") + what + "' is not a number");
}

}  // namespace

json construction_to_json(const MultiplicativeSet& B, const RepresentativeSet* D, std::optional<double> alpha) {
  json doc;
  if (alpha) doc["alpha"] = fmt17(*alpha);
  doc["M"] = B.M;
  if (D) doc["T"] = fmt17(D->T);
  json primes = json::array();
  for (const auto p : B.primes) primes.push_back(p);
  doc["primes"] = primes;
  json elements = json::array();
  for (const auto& b : B.elements) {
    json e;
    e["bits"] = b.exponents.to_string();
    e["log_value"] = q34(b.log_value);
    e["exact_value"] = b.exact().get_str();
    elements.push_back(std::move(e));
  }
  doc["elements"] = elements;
  if (D) {
    json buckets = json::array();
    for (std::size_t k = 0; k < D->K(); ++k) {
      json b;
      b["j"] = to_string_u128(D->buckets[k]);
      b["representative_index"] = D->source_index[k];
      buckets.push_back(std::move(b));
    }
    doc["buckets"] = buckets;
  }
  return doc;
}

Construction construction_from_json(const json& doc) {
  Construction c;
  if (doc.contains("alpha")) c.alpha = parse_double(doc.at("alpha"), "alpha");
  const json& jm = field(doc, "M");
  if (!jm.is_number_integer()) throw InvalidArgument("construction: M must be an integer");
  const int M = jm.get<int>();
  c.B = build_B(M);
  const json& primes = field(doc, "primes");
  if (!primes.is_array() || primes.size() != c.B.primes.size()) {
    throw InvalidArgument("construction: primes list does not match M");
  }
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (primes[i].get<std::uint64_t>() != c.B.primes[i]) throw InvalidArgument("construction: prime mismatch");
  }
  const json& elements = field(doc, "elements");
  if (!elements.is_array() || elements.size() != c.B.N()) {
    throw InvalidArgument("construction: element count does not match 2^M");
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& e = elements[i];
    const auto& b = c.B.elements[i];
    if (field(e, "bits").get<std::string>() != b.exponents.to_string() ||
        field(e, "exact_value").get<std::string>() != b.exact().get_str()) {
      throw InvalidArgument("construction: element " + std::to_string(i) + " does not match the recomputed set");
    }
    const quad stored = parse_q(field(e, "log_value").get<std::string>());
    if (fabs_q(stored - b.log_value) > 1e-30Q * (1 + b.log_value)) {
      throw InvalidArgument("construction: log_value of element " + std::to_string(i) + " is off");
    }
  }
  if (doc.contains("buckets")) {
    const double T = parse_double(field(doc, "T"), "T");
    RepresentativeSet D = build_D(c.B, T);
    const json& buckets = doc.at("buckets");
    if (!buckets.is_array() || buckets.size() != D.K()) {
      throw InvalidArgument("construction: bucket count does not match the recomputed D");
    }
    for (std::size_t k = 0; k < D.K(); ++k) {
      if (parse_u128(field(buckets[k], "j").get<std::string>()) != D.buckets[k] ||
          field(buckets[k], "representative_index").get<std::size_t>() != D.source_index[k]) {
        throw InvalidArgument("construction: bucket " + std::to_string(k) + " does not match the recomputed D");
      }
    }
    c.D = std::move(D);
  }
  return c;
}

json to_json(const ChainReport& c) {
  json j;
  j["M"] = c.M;
  j["R"] = c.R;
  j["effective_R"] = c.effective_R;
  j["R_clamped"] = c.R_clamped;
  j["alpha"] = fmt17(c.alpha);
  j["lhs_restricted_sum"] = c.lhs_restricted_sum ? json(fmt17(*c.lhs_restricted_sum)) : json(nullptr);
  j["log_prime_bound"] = q34(c.log_prime_bound);
  j["binomial_term"] = q34(c.binomial_term);
  j["stirling_lower"] = q34(c.stirling_lower);
  j["exp_form"] = q34(c.exp_form);
  j["exponent_margin"] = q34(c.exponent_margin);
  j["final_bound"] = q34(c.final_bound);
  json links;
  links["binomial_to_stirling"] = c.link_binomial_stirling;
  links["stirling_to_exp_form"] = c.link_stirling_exp;
  links["margin_nonnegative"] = c.margin_nonnegative;
  links["exp_form_to_final"] = c.link_final;
  links["lhs_above_binomial"] = c.lhs_above_binomial ? json(*c.lhs_above_binomial) : json(nullptr);
  j["inequalities_held"] = links;
  return j;
}

}  // namespace zr
