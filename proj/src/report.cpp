#include "averkit/report.hpp"

#include <string>

namespace averkit {

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json to_json(const Matrix& M) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const Condensation& cond) {
  Json out;
  out["components"] = cond.components;
  out["sinks"] = cond.sinks;
  out["regular"] = cond.regular;
  return out;
}

Json equilibrium_json(const Vector& xbar, const InfluenceResult& influence) {
  Json out;
  out["method"] = std::string(influence.method);
  out["xbar"] = to_json(xbar);
  out["H"] = to_json(influence.H);
  out["x_star"] = to_json(Vector(influence.H * xbar));
  if (influence.standard_error) out["stderr"] = to_json(*influence.standard_error);
  return out;
}

Json to_json(const ResistanceSolution& sol) {
  Json out;
  out["resistance"] = sol.resistance;
  out["voltages"] = to_json(sol.voltages);
  out["outflow_a"] = sol.outflow_a;
  out["inflow_b"] = sol.inflow_b;
  out["primal_energy"] = sol.energy;
  return out;
}

Json to_json(const ThompsonFlow& flow) {
  Json out;
  Json arcs = Json::array();
  for (Eigen::Index i = 0; i < flow.theta.rows(); ++i) {
    for (Eigen::Index j = 0; j < flow.theta.cols(); ++j) {
      if (flow.theta(i, j) > 0.0) arcs.push_back(Json::array({i, j, flow.theta(i, j)}));
    }
  }
  out["flows"] = std::move(arcs);
  out["net_outflow"] = flow.net_outflow;
  out["dual_energy"] = flow.dual_energy;
  out["max_interior_imbalance"] = flow.max_interior_imbalance;
  return out;
}

Json to_json(const MatchedConfig& cfg) {
  Json out;
  out["family"] = "matched_er";
  out["m"] = cfg.m;
  out["omega"] = cfg.omega;
  out["beta"] = cfg.beta;
  out["gamma"] = cfg.gamma;
  out["seed"] = cfg.seed;
  out["matching"] = cfg.matching == Matching::Identity ? "identity" : "permuted";
  out["max_attempts"] = cfg.max_attempts;
  return out;
}

Json error_json(const Error& e) {
  Json out;
  out["error"] = std::string(to_string(e.kind()));
  out["message"] = e.what();
  return out;
}

}  // namespace averkit
