#include "rlab/serialize.hpp"

#include "rlab/errors.hpp"

namespace rlab {

Json to_json(const HomogeneousPolynomial& p) {
  Json j;
  j["n"] = p.n();
  j["d"] = p.degree();
  j["basis"] = kBasisTag;
  j["order"] = kOrderTag;
  j["coeffs"] = std::vector<double>(p.coeffs().begin(), p.coeffs().end());
  return j;
}

HomogeneousPolynomial polynomial_from_json(const Json& j) {
  try {
    if (j.at("basis").get<std::string>() != kBasisTag || j.at("order").get<std::string>() != kOrderTag) {
      throw InvalidArgument("unsupported basis or coefficient order");
    }
    const int n = j.at("n").get<int>();
    const int d = j.at("d").get<int>();
    auto coeffs = j.at("coeffs").get<std::vector<double>>();
    auto basis = make_basis(n, d);
    if (coeffs.size() != basis->dimension()) {
      throw InvalidArgument("expected " + std::to_string(basis->dimension()) + " coefficients, got " +
                            std::to_string(coeffs.size()));
    }
    return HomogeneousPolynomial(basis, std::move(coeffs));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed polynomial document: ") + e.what());
  }
}

Json to_json(const DistanceResult& r) {
  return Json{{"exact", r.exact},
              {"asymptotic", r.asymptotic},
              {"argmin_point", r.argmin_point},
              {"grid_density", r.grid_density},
              {"gram_condition", r.gram_condition},
              {"refined", r.refined},
              {"evaluations", r.evaluations}};
}

Json to_json(const ProjectionSplit& s) {
  return Json{{"ell", s.ell},
              {"s_zero", to_json(s.s_zero)},
              {"s_perp", to_json(s.s_perp)},
              {"quotient", to_json(s.quotient)},
              {"c1_perp", s.c1_perp},
              {"c1_grid_density", s.c1_grid_density}};
}

Json to_json(const ApproximationResult& r) {
  return Json{{"criterion_holds", r.criterion_holds},
              {"margin", r.margin},
              {"threshold", r.threshold},
              {"c1_perp", r.c1_perp},
              {"s_prime", to_json(r.s_prime)}};
}

Json to_json(const RootCount& r) {
  Json j{{"degree", r.degree}, {"real_roots", r.real_roots}, {"certified", r.certified}};
  j["maximal"] = r.certified ? Json(r.real_roots == r.degree) : Json(nullptr);
  return j;
}

Json to_json(const CurveTopology& t) {
  Json j{{"degree", t.degree},
         {"certified", t.certified},
         {"b0", t.b0},
         {"ovals", t.ovals},
         {"pseudolines", t.pseudolines},
         {"nest_parent", t.nest_parent},
         {"oval_depth", t.oval_depth},
         {"max_nest_depth", t.max_nest_depth},
         {"harnack_bound", t.harnack_bound},
         {"maximal", t.maximal},
         {"sphere_components", t.sphere_components},
         {"leaves", t.leaves},
         {"deepest_level", t.deepest_level}};
  if (!t.certified) j["failure"] = t.failure;
  return j;
}

Json to_json(const Interval& i) { return Json::array({i.low, i.high}); }

Json to_json(const Quartiles& q) {
  return Json{{"q1", q.q1}, {"median", q.median}, {"q3", q.q3}};
}

Json to_json(const DecayFit& f) {
  Json j{{"model", f.model}, {"points", f.points}};
  if (f.fit) {
    j["slope"] = f.fit->slope;
    j["intercept"] = f.fit->intercept;
    j["r_squared"] = f.fit->r_squared;
  } else {
    j["slope"] = nullptr;
    j["intercept"] = nullptr;
    j["r_squared"] = nullptr;
    j["reason"] = f.reason;
  }
  return j;
}

std::string dump(const Json& j) { return j.dump(); }

}  // namespace rlab
