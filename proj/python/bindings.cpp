#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polattn/polattn.hpp"

namespace py = pybind11;
using namespace polattn;

namespace {

py::dict record_dict(const EquilibriumRecord& r) {
  py::dict d;
  d["beta_policy"] = r.assignment.beta_policy;
  d["levels"] = r.triple.levels;
  d["min_gap"] = r.ic.min_gap;
  d["type_gaps"] = r.ic.type_gaps;
  d["total_information"] = r.total_information();
  py::list groups;
  for (const auto& g : r.attention) {
    py::dict gd;
    gd["type"] = g.group.type;
    gd["weight"] = g.group.weight;
    gd["attentive"] = g.attentive;
    gd["mbar"] = g.solution.mbar;
    gd["information"] = g.solution.information;
    groups.append(gd);
  }
  d["attention"] = groups;
  if (r.rationalization_verified) d["rationalization_verified"] = *r.rationalization_verified;
  return d;
}

std::vector<std::vector<double>> matrix_rows(const Matrix<double>& m) {
  std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

Matrix<double> to_matrix(const std::vector<std::vector<double>>& rows) {
  Matrix<double> m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw ValidationError("ragged matrix");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rational-inattention electoral competition";
  m.attr("__version__") = tool_version();

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<UndefinedPosteriorError>(m, "UndefinedPosteriorError", PyExc_ValueError);

  py::enum_<Regime>(m, "Regime")
      .value("CornerZero", Regime::CornerZero)
      .value("CornerOne", Regime::CornerOne)
      .value("Interior", Regime::Interior);

  py::class_<Profile>(m, "Profile")
      .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
      .def_readwrite("alpha", &Profile::alpha)
      .def_readwrite("beta", &Profile::beta)
      .def("__repr__", [](const Profile& p) {
        return "Profile(" + std::to_string(p.alpha) + ", " + std::to_string(p.beta) + ")";
      });

  py::class_<Belief>(m, "Belief")
      .def(py::init([](std::vector<double> probs, std::vector<double> values) {
             Belief b;
             for (std::size_t k = 0; k < probs.size(); ++k) b.support.push_back({-1.0 - k, 1.0 + k});
             b.probs = std::move(probs);
             b.values = std::move(values);
             b.validate();
             return b;
           }),
           py::arg("probs"), py::arg("values"))
      .def_readonly("support", &Belief::support)
      .def_readonly("probs", &Belief::probs)
      .def_readonly("values", &Belief::values);

  py::class_<AttentionSolution>(m, "AttentionSolution")
      .def_readonly("regime", &AttentionSolution::regime)
      .def_readonly("mbar", &AttentionSolution::mbar)
      .def_readonly("m", &AttentionSolution::m)
      .def_readonly("information", &AttentionSolution::information)
      .def_readonly("residual", &AttentionSolution::residual)
      .def_readonly("iterations", &AttentionSolution::iterations);

  m.def("entropy", [](std::vector<double> p) { return entropy(p); }, py::arg("probs"));
  m.def("mutual_information", [](std::vector<double> mm, std::vector<double> p) { return mutual_information(mm, p); },
        py::arg("m"), py::arg("probs"));
  m.def("solve_attention", &solve_attention, py::arg("belief"), py::arg("mu"));
  m.def("attention_membership", &attention_membership, py::arg("belief"), py::arg("mu"));
  m.def("gamma", &polattn::gamma, py::arg("x"));
  m.def("gamma_inverse", &gamma_inverse, py::arg("y"));
  m.def("attention_threshold_delta", &attention_threshold_delta, py::arg("mu"), py::arg("t"), py::arg("kappa"),
        py::arg("diag_mass"));

  py::class_<Scenario>(m, "Scenario")
      .def_readwrite("mu", &Scenario::mu)
      .def_readwrite("eta", &Scenario::eta)
      .def_property_readonly("beta_policies",
                             [](const Scenario& s) {
                               return std::vector<double>(s.beta_policies.values().begin(), s.beta_policies.values().end());
                             })
      .def_property_readonly("has_news", [](const Scenario& s) { return s.news.has_value(); })
      .def("validate", &Scenario::validate)
      .def("to_json", [](const Scenario& s) { return dump_scenario(s); })
      .def("hash", [](const Scenario& s) { return scenario_hash(s); });

  m.def("parse_scenario", [](const std::string& text) { return parse_scenario(text); }, py::arg("text"));
  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("table1_scenario", &table1_scenario);
  m.def("figure2_scenario", &figure2_scenario, py::arg("mu") = 10.0);
  m.def("figure3_scenario", &figure3_scenario, py::arg("xi"));
  m.def("example3_scenario", &example3_scenario, py::arg("eta"), py::arg("mu"));

  m.def(
      "profile_belief",
      [](const Scenario& s, std::vector<double> beta, double t) { return profile_belief(s, StrategyAssignment{beta}, t); },
      py::arg("scenario"), py::arg("beta_policy"), py::arg("t"));
  m.def(
      "news_belief",
      [](const Scenario& s, std::vector<double> beta, double t) { return news_belief(s, StrategyAssignment{beta}, t); },
      py::arg("scenario"), py::arg("beta_policy"), py::arg("t"));
  m.def(
      "enumerate_equilibria",
      [](const Scenario& s, unsigned threads, bool verify, bool rationalized) {
        EnumerationOptions opt;
        opt.threads = threads;
        opt.verify_rationalization = verify;
        opt.source = rationalized ? WinSource::Rationalized : WinSource::Downsian;
        std::vector<EquilibriumRecord> recs;
        {
          py::gil_scoped_release release;
          recs = s.news ? enumerate_equilibria_noisy(s, opt) : enumerate_equilibria(s, opt);
        }
        py::list out;
        for (const auto& r : recs) out.append(record_dict(r));
        return out;
      },
      py::arg("scenario"), py::arg("threads") = 1, py::arg("verify") = false, py::arg("rationalized") = false);
  m.def(
      "attention_set_member",
      [](const Scenario& s, std::vector<double> beta, double t) {
        const StrategyAssignment a{beta};
        return s.news ? attention_set_member_noisy(s, a, t) : attention_set_member(s, a, t);
      },
      py::arg("scenario"), py::arg("beta_policy"), py::arg("t"));
  m.def("downsian_winner", [](double aa, double ab) { return downsian_winner(UtilitySpec::absolute_loss(), aa, ab); },
        py::arg("a_alpha"), py::arg("a_beta"));

  py::class_<NewsTechnology>(m, "NewsTechnology")
      .def(py::init([](std::vector<double> signals, std::vector<double> policies, std::vector<std::vector<double>> rows) {
             return NewsTechnology(std::move(signals), std::move(policies), to_matrix(rows));
           }),
           py::arg("signals"), py::arg("policies"), py::arg("rows"))
      .def_static("slant", &NewsTechnology::slant, py::arg("xi"), py::arg("policies"),
                  py::arg("signals") = std::vector<double>{1.0 / 3.0, 2.0 / 3.0})
      .def_static("fully_revealing", &NewsTechnology::fully_revealing, py::arg("policies"))
      .def_property_readonly("rows", [](const NewsTechnology& f) { return matrix_rows(f.rows()); })
      .def_property_readonly("signals",
                             [](const NewsTechnology& f) { return std::vector<double>(f.signals().begin(), f.signals().end()); })
      .def("pmf", &NewsTechnology::pmf, py::arg("policy"))
      .def("is_log_supermodular", [](const NewsTechnology& f) { return check_log_supermodularity(f).passed(); });

  m.def(
      "garble",
      [](const NewsTechnology& f, std::vector<std::vector<double>> rho) { return garble(f, MarkovKernel(to_matrix(rho))); },
      py::arg("news"), py::arg("kernel"));
  m.def(
      "slant_garbling_kernel",
      [](double xi, double xp) { return matrix_rows(slant_garbling_kernel(xi, xp).matrix()); }, py::arg("xi"),
      py::arg("xi_prime"));

  m.def("commitment_boundary_margin", &commitment_boundary_margin, py::arg("eta"), py::arg("a1"), py::arg("a2"),
        py::arg("t_c"), py::arg("t_e"), py::arg("tau"), py::arg("mu"));
  m.def(
      "tangency_point",
      [](double t) { return tangency_point(TwoIssueUtility::weighted_exponential(), Frontier::quarter_circle(), t); },
      py::arg("t"));

  m.def(
      "reproduce",
      [](const std::string& target, double tolerance) {
        Reproduction r;
        if (target == "table1") r = reproduce_table1(tolerance);
        else if (target == "table2") r = reproduce_table2(tolerance);
        else if (target == "figure2") r = reproduce_figure2();
        else if (target == "figure3") r = reproduce_figure3();
        else throw ValidationError("unknown reproduce target '" + target + "'");
        return r.mismatches;
      },
      py::arg("target"), py::arg("tolerance") = 0.002);
}
