#include "cgk/serialize.hpp"

#include "cgk/errors.hpp"

namespace cgk {

namespace {

Json int_matrix(const IntMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

template <class T>
Json optional_json(const std::optional<T>& x) {
  return x ? Json(*x) : Json(nullptr);
}

}  // namespace

Json to_json(const Rational& x) { return to_string(x); }
Json to_json(const BigInt& x) { return x.str(); }
Json to_json(const BigRational& x) {
  return boost::multiprecision::numerator(x).str() + "/" + boost::multiprecision::denominator(x).str();
}

Json to_json(const RingMatrix& m) {
  Json j{{"ring", m.ring().describe()}, {"re", int_matrix(m.re())}};
  if (m.ring().is_quadratic()) j["im"] = int_matrix(m.im());
  return j;
}

Json to_json(const GroupFamily& f) {
  Json j{{"kind", to_string(f.kind)}, {"n", f.n}, {"name", f.describe()}};
  if (f.kind != FamilyKind::SL) j["Q"] = int_matrix(f.form);
  return j;
}

Json to_json(const JordanData& jd) {
  return {{"kind", to_string(jd.kind)},
          {"multiplicities", jd.multiplicities},
          {"zero_multiplicity", jd.zero_multiplicity},
          {"pair_multiplicities", jd.pair_multiplicities},
          {"block_counts", jd.block_counts}};
}

Json to_json(const CentralizerReport& r) {
  Json j{{"algebra_dim", r.algebra_dim},
         {"bound_rhs", r.bound_rhs},
         {"jordan", to_json(r.jordan)},
         {"closed_form_dim", optional_json(r.closed_form_dim)},
         {"group_count", optional_json(r.group_count)},
         {"branch", "enumerated"}};
  if (r.jordan.kind == JordanKind::Mixed) {
    j["jordan_semisimple_part"] = to_json(r.jordan_semisimple_part);
    j["jordan_nilpotent_part"] = to_json(r.jordan_nilpotent_part);
  }
  return j;
}

Json to_json(const ScanReport& r) {
  return {{"algebra", r.algebra},
          {"p", r.p},
          {"dim", r.dim},
          {"bound_rhs", r.bound_rhs},
          {"scanned", r.scanned},
          {"semisimple", r.semisimple},
          {"nilpotent", r.nilpotent},
          {"mixed", r.mixed},
          {"max_dim", r.max_dim},
          {"max_witness_code", r.max_witness},
          {"max_semisimple_dim", r.max_semisimple_dim},
          {"max_nilpotent_dim", r.max_nilpotent_dim},
          {"claimed_semisimple_max", r.claimed.semisimple},
          {"claimed_nilpotent_max", r.claimed.nilpotent},
          {"count_mismatches", r.count_mismatches},
          {"closed_form_mismatches", r.closed_form_mismatches},
          {"bound_violations", r.bound_violations},
          {"closed_form_examples", r.closed_form_examples},
          {"bound_examples", r.bound_examples},
          {"branch", "enumerated"}};
}

Json to_json(const GapConstants& c) {
  return {{"kind", to_string(c.kind)}, {"n", c.n},   {"rho", to_json(c.rho)}, {"dim", c.dim},
          {"e", c.e},                  {"eta", to_json(c.eta)}, {"formula_branch", c.branch},
          {"branch", "exact"}};
}

Json to_json(const OrbitResult& r) {
  Json j{{"p", r.p},
         {"r", r.r},
         {"k", r.k},
         {"branch", r.branch},
         {"min_orbit", optional_json(r.min_orbit)},
         {"orbit_count", r.orbit_count},
         {"partition_exact", r.partition_exact},
         {"sizes_divide_order", r.sizes_divide_order},
         {"group_order_k", r.group_order_k},
         {"formula_bound", to_json(r.formula_bound)},
         {"witness_group_centralizer", r.witness_group_centralizer},
         {"witness_centralizer_dim", r.witness_centralizer_dim},
         {"orbit_stabilizer_ok", r.orbit_stabilizer_ok},
         {"prime_power_target_p^(2re)", to_json(r.prime_power_target)},
         {"formula_bound_holds", r.formula_bound_holds()},
         {"prime_power_bound_holds", r.prime_power_bound_holds()}};
  j["formula_witness"] = r.formula_witness ? to_json(*r.formula_witness) : Json(nullptr);
  j["orbit_witness"] = r.orbit_witness ? to_json(*r.orbit_witness) : Json(nullptr);
  return j;
}

Json to_json(const RepBound& b) {
  Json factors = Json::array();
  for (const auto& f : b.factors)
    factors.push_back({{"p", f.p},
                       {"r", f.r},
                       {"exponent", f.exponent},
                       {"statement_exponent", to_json(f.statement_exponent)},
                       {"constant", to_json(landazuri_seitz_constant())},
                       {"analytic", to_json(f.analytic)},
                       {"orbit_bound", optional_json(f.orbit_bound)},
                       {"branch", f.branch},
                       {"value", to_json(f.value)}});
  return {{"factors", factors}, {"value", to_json(b.value)}};
}

Json to_json(const MultiplicityBound& m) {
  return {{"eta", to_json(m.eta)},         {"square_free", m.square_free},
          {"exponent", to_json(m.exponent)}, {"index", m.index},
          {"log_bound", m.log_bound},       {"branch", "analytic"}};
}

Json to_json(const CountResult& r) {
  return {{"q", r.q},
          {"radius", r.radius},
          {"index", r.index},
          {"alpha", to_json(r.alpha)},
          {"t", r.t},
          {"n", r.n},
          {"fit", r.fit.points == 0 ? Json(nullptr)
                                    : Json{{"slope", r.fit.slope}, {"intercept", r.fit.intercept},
                                           {"points", r.fit.points}, {"branch", "fitted"}}},
          {"branch", "enumerated"}};
}

Json to_json(const MainTermCheck& m) {
  return {{"q", m.q}, {"min_ratio", m.min_ratio}, {"max_ratio", m.max_ratio}, {"branch", "enumerated"}};
}

Json to_json(const DominationCheck& d) {
  return {{"constant", d.constant}, {"min_ratio", d.min_ratio}, {"max_ratio", d.max_ratio},
          {"window", d.window},     {"holds", d.holds()},        {"branch", "fitted"}};
}

Json to_json(const DecayProfile& d, bool with_samples) {
  Json j{{"n", d.n},
         {"s", d.s},
         {"imaginary", d.imaginary},
         {"min_ratio", d.min_ratio},
         {"max_ratio", d.max_ratio},
         {"band", d.imaginary ? Json(nullptr) : Json(d.band())},
         {"branch", "numerical"}};
  if (with_samples) {
    j["t"] = d.t;
    j["phi"] = d.phi;
    j["ratio"] = d.ratio;
  }
  return j;
}

Json to_json(const GapReport& g) {
  return {{"constants", to_json(g.constants)},
          {"alpha", to_json(g.alpha)},
          {"epsilon", to_json(g.epsilon)},
          {"crossing", to_json(g.crossing)},
          {"threshold", to_json(g.threshold)},
          {"excluded_interval", {to_json(g.threshold), to_json(g.constants.rho)}},
          {"excluded_nonempty", g.excluded_nonempty},
          {"exponent_at_crossing", to_json(g.exponent_at_crossing)},
          {"asymptotic_only", g.asymptotic_only},
          {"branch", "exact"}};
}

GroupFamily family_from_json(const Json& j) {
  try {
    const FamilyKind kind = parse_family_kind(j.at("kind").get<std::string>());
    const int n = j.at("n").get<int>();
    IntMatrix form;
    const char* key = j.contains("Q") ? "Q" : "form";
    if (j.contains(key) && !j[key].is_null()) {
      const auto& rows = j[key];
      form.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows.empty() ? 0 : rows[0].size()));
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < rows[i].size(); ++k) form(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k].get<Int>();
    }
    switch (kind) {
      case FamilyKind::SL:
        return GroupFamily::SL(n);
      case FamilyKind::SO:
        return GroupFamily::SO(n, form);
      case FamilyKind::SU:
        return GroupFamily::SU(n, form);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad family descriptor: ") + e.what());
  }
  throw DomainError("bad family descriptor");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cgk
