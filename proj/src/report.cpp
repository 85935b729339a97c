#include "gerbe/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace gerbe {

namespace {

std::string number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write(std::ostringstream& os, const Json& j, int indent) {
  const std::string pad(2 * (indent + 1), ' '), close(2 * indent, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(it.key()).dump() << ": ";
        write(os, it.value(), indent + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line so matrices remain readable.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (flat) {
        os << "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) os << ", ";
          write(os, j[k], indent + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) os << ",\n";
        os << pad;
        write(os, j[k], indent + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float:
      os << number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

Json sides_json(const std::array<Mat, 4>& sides) {
  Json j = Json::object();
  for (int s = 0; s < 4; ++s) j[boundary_side_name(s)] = matrix_json(sides[s]);
  return j;
}

}  // namespace

std::string dump_json(const Json& j) {
  std::ostringstream os;
  write(os, j, 0);
  os << "\n";
  return os.str();
}

Json matrix_json(const Mat& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ii = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["re"] = re;
  j["im"] = im;
  return j;
}

Json config_json(const TransportConfig& cfg) {
  Json j;
  j["ode_steps_per_unit"] = cfg.ode_steps_per_unit;
  j["quadrature_points"] = cfg.quadrature_points;
  j["tol_target"] = cfg.tol_target;
  j["h_fd"] = cfg.h_fd;
  j["order"] = cfg.order == HolOrder::LeftAction ? "left_action" : "right_action";
  return j;
}

Json config_json(const FDConfig& fd) {
  Json j;
  j["steps"] = fd.steps;
  j["richardson"] = fd.richardson;
  return j;
}

Json grid_json(const GridAssignment& g) {
  Json j;
  j["n"] = g.n;
  j["m"] = g.m;
  j["assign"] = g.assign;
  j["samples_per_cell"] = g.samples_per_cell;
  return j;
}

Json report_json(const AxiomReport& r) {
  Json j;
  j["instance"] = r.instance;
  j["n_samples"] = r.n_samples;
  j["tolerance"] = r.tolerance;
  Json res = Json::object();
  for (const auto& [k, v] : r.residuals) res[k] = v;
  j["residuals"] = res;
  j["pass"] = r.pass();
  return j;
}

Json report_json(const ValidationReport& r) {
  Json j;
  j["fixture"] = r.fixture;
  j["n_points"] = r.n_points;
  j["seed"] = r.seed;
  Json rel = Json::object();
  for (const auto& [k, v] : r.relations) {
    Json e;
    e["max_residual"] = v.max_residual;
    e["n_samples"] = v.n_samples;
    e["tolerance"] = v.tolerance;
    e["vacuous"] = v.vacuous;
    e["informational"] = v.informational;
    e["pass"] = v.pass();
    rel[k] = e;
  }
  j["relations"] = rel;
  j["failures"] = r.failures();
  j["pass"] = r.pass();
  return j;
}

Json report_json(const GlobalHolonomy& h) {
  Json j;
  j["value"] = matrix_json(h.value);
  j["grid"] = grid_json(h.grid);
  j["basepoint_chart"] = h.basepoint_chart;
  j["target_residual"] = h.target_residual;
  j["overline_residual"] = h.overline_residual;
  Json loc;
  loc["face_residuals"] = h.locals.face_residuals;
  loc["edge_residuals"] = h.locals.edge_residuals;
  loc["vertex_residuals"] = h.locals.vertex_residuals;
  loc["max_residual"] = h.locals.max_residual;
  loc["flagged"] = h.locals.flagged;
  j["locals"] = loc;
  return j;
}

Json report_json(const DerivativeBreakdown& d) {
  Json j;
  j["hol"] = matrix_json(d.hol);
  j["corner_term"] = matrix_json(d.corner_term);
  j["bulk_term"] = matrix_json(d.bulk_term);
  Json cells = Json::array();
  for (const Mat& m : d.bulk_per_cell) cells.push_back(matrix_json(m));
  j["bulk_per_cell"] = cells;
  j["boundary_B"] = matrix_json(d.boundary_B);
  j["boundary_B_sides"] = sides_json(d.boundary_B_sides);
  j["boundary_a"] = matrix_json(d.boundary_a);
  j["boundary_a_sides"] = sides_json(d.boundary_a_sides);
  j["total"] = matrix_json(d.total);
  j["total_printed_a_signs"] = matrix_json(d.total_printed_a_signs);
  j["loop_residual"] = d.loop_residual;
  return j;
}

Json report_json(const DerivativeCheck& d) {
  Json j;
  j["formula"] = report_json(d.formula);
  j["fd_derivative"] = matrix_json(d.fd.derivative);
  j["central_order"] = d.fd.central_order;
  j["richardson_order"] = d.fd.richardson_order;
  j["rel_err"] = d.rel_err;
  j["rel_err_printed_a"] = d.rel_err_printed_a;
  j["rel_err_finest_central"] = d.rel_err_finest_central;
  Json table = Json::array();
  for (const auto& r : d.fd.table) {
    Json row;
    row["step"] = r.step;
    row["fd_norm"] = r.fd_norm;
    row["formula_norm"] = r.formula_norm;
    row["abs_err"] = r.abs_err;
    row["rel_err"] = r.rel_err;
    row["est_order"] = r.est_order;
    table.push_back(row);
  }
  j["convergence"] = table;
  return j;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& table) {
  std::string out = "step,fd_norm,formula_norm,abs_err,rel_err,est_order\n";
  for (const auto& r : table) {
    out += number(r.step) + "," + number(r.fd_norm) + "," + number(r.formula_norm) + "," + number(r.abs_err) + "," +
           number(r.rel_err) + "," + number(r.est_order) + "\n";
  }
  return out;
}

}  // namespace gerbe
