#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <sstream>

#include "oqhn/classical.hpp"
#include "oqhn/fixedpoint.hpp"
#include "oqhn/lindblad.hpp"
#include "oqhn/meanfield.hpp"
#include "oqhn/phasemap.hpp"
#include "oqhn/version.hpp"

namespace py = pybind11;
using namespace oqhn;

namespace {

PatternSet patterns_from_array(const Eigen::MatrixXi& xi) {
    PatternSet ps;
    ps.xi = xi;
    ps.validate();
    return ps;
}

meanfield::OverlapState state_from(const Eigen::VectorXd& mz, const Eigen::VectorXd& my) {
    meanfield::OverlapState s;
    s.m_z = mz;
    s.m_y = my;
    return s;
}

}  // namespace

PYBIND11_MODULE(oqhn, m) {
    m.doc() = "open quantum (modern) Hopfield network toolkit";
    m.attr("__version__") = version;

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](int x, int p, double beta, double omega) {
                 return ModelParams::from_beta(x, p, beta, omega);
             }),
             py::arg("x"), py::arg("p") = 1, py::arg("beta") = 1.0, py::arg("omega") = 0.0)
        .def_static("from_temperature", &ModelParams::from_temperature, py::arg("x"),
                    py::arg("p"), py::arg("temp"), py::arg("omega"))
        .def_readonly("x", &ModelParams::x)
        .def_readonly("p", &ModelParams::p)
        .def_readonly("beta", &ModelParams::beta)
        .def_readonly("omega", &ModelParams::omega)
        .def_property_readonly("temperature", &ModelParams::temperature);

    // ---- classical -----------------------------------------------------
    m.def("random_patterns", [](int p, int n, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return PatternSet::random(p, n, rng).xi;
    }, py::arg("p"), py::arg("n"), py::arg("seed"));
    m.def("hebbian_couplings",
          [](const Eigen::MatrixXi& xi) { return classical::hebbian_couplings(patterns_from_array(xi)); });
    m.def("hopfield_energy", &classical::hopfield_energy);
    m.def("modern_energy", [](const Eigen::MatrixXi& xi, const SpinConfig& s, int x) {
        return classical::modern_energy(patterns_from_array(xi), s, x);
    });
    m.def("delta_e", [](const Eigen::MatrixXi& xi, const SpinConfig& s, int i, int x) {
        return classical::delta_e(patterns_from_array(xi), s, i, x);
    });
    m.def("retrieve",
          [](const Eigen::MatrixXi& xi, const SpinConfig& s0, int x, int max_sweeps) {
              const auto r = classical::retrieve(patterns_from_array(xi), s0, x, max_sweeps);
              return py::make_tuple(r.state, r.sweeps_used, r.converged);
          },
          py::arg("patterns"), py::arg("s0"), py::arg("x"), py::arg("max_sweeps") = 20);
    m.def("capacity_experiment", [](int n, int x, std::vector<int> p_schedule,
                                    double noise, double threshold, int trials,
                                    int max_probes, int threads, std::uint64_t seed) {
        classical::CapacityConfig cfg;
        cfg.n_spins = n;
        cfg.x = x;
        cfg.p_schedule = std::move(p_schedule);
        cfg.noise_fraction = noise;
        cfg.error_threshold = threshold;
        cfg.trials = trials;
        cfg.max_probes = max_probes;
        cfg.threads = threads;
        cfg.seed = seed;
        const auto rep = classical::capacity_experiment(cfg);
        py::list curve;
        for (const auto& lp : rep.load_curve)
            curve.append(py::make_tuple(lp.p, lp.success_rate, lp.mean_final_distance));
        return py::make_tuple(rep.estimated_capacity, curve);
    }, py::arg("n"), py::arg("x"), py::arg("p_schedule"), py::arg("noise") = 0.05,
       py::arg("threshold") = 0.01, py::arg("trials") = 3, py::arg("max_probes") = 0,
       py::arg("threads") = 1, py::arg("seed") = 1);

    // ---- mean field ------------------------------------------------------
    m.def("drive_term", &meanfield::drive_term);
    m.def("meanfield_rhs",
          [](const Eigen::VectorXd& mz, const Eigen::VectorXd& my, const ModelParams& prm) {
              const auto d = meanfield::rhs(state_from(mz, my), prm);
              return py::make_tuple(d.m_z, d.m_y);
          });
    m.def("integrate",
          [](const Eigen::VectorXd& mz, const Eigen::VectorXd& my, const ModelParams& prm,
             double dt, double t_max, int stride) {
              const auto traj = meanfield::integrate(state_from(mz, my), prm, dt, t_max, stride);
              const int n = static_cast<int>(traj.times.size());
              Eigen::VectorXd t(n);
              Eigen::MatrixXd z(n, prm.p), y(n, prm.p);
              for (int i = 0; i < n; ++i) {
                  t[i] = traj.times[i];
                  z.row(i) = traj.states[i].m_z.transpose();
                  y.row(i) = traj.states[i].m_y.transpose();
              }
              return py::make_tuple(t, z, y);
          },
          py::arg("m_z"), py::arg("m_y"), py::arg("params"), py::arg("dt") = 1e-2,
          py::arg("t_max") = 500.0, py::arg("stride") = 10);
    m.def("classify_trajectory",
          [](const Eigen::VectorXd& mz, const Eigen::VectorXd& my, const ModelParams& prm,
             double dt, double t_max) {
              const auto traj = meanfield::integrate(state_from(mz, my), prm, dt, t_max, 10);
              const auto v = meanfield::classify_trajectory(traj);
              return std::string(meanfield::to_string(v.kind));
          },
          py::arg("m_z"), py::arg("m_y"), py::arg("params"), py::arg("dt") = 1e-2,
          py::arg("t_max") = 500.0);
    m.def("basin_radius", [](const ModelParams& prm) {
        const auto r = meanfield::basin_radius(prm);
        return py::make_tuple(r.radius, r.saturated);
    });

    // ---- fixed points ----------------------------------------------------
    m.def("beta_c", &fixedpoint::beta_c);
    m.def("boundary_x2_temperature", &fixedpoint::boundary_x2_temperature);
    m.def("classify_origin_x2", &fixedpoint::classify_origin_x2);
    m.def("stability_eigenvalues", [](double beta_prime, double omega) {
        const auto [lp, lm] = fixedpoint::stability_eigenvalues(beta_prime, omega);
        return py::make_tuple(lp, lm);
    });
    m.def("find_fixed_points", [](const ModelParams& prm) {
        py::list out;
        for (const auto& r : fixedpoint::find_fixed_points(prm)) {
            py::dict d;
            d["m_z"] = r.m_z;
            d["m_y"] = r.m_y;
            d["beta_prime"] = r.beta_prime;
            d["eigenvalues"] = py::make_tuple(r.lambda_plus, r.lambda_minus);
            d["class"] = fixedpoint::to_string(r.cls);
            out.append(d);
        }
        return out;
    });
    m.def("solve_tangency", [](int x, double omega) {
        const auto t = fixedpoint::solve_tangency(x, omega);
        py::dict d;
        d["found"] = t.found;
        d["beta_star"] = t.beta_star;
        d["t_star"] = t.t_star;
        d["m_star"] = t.m_star;
        d["branch"] = t.branch;
        return d;
    });

    // ---- lindblad ----------------------------------------------------------
    m.def("lindblad_evolve",
          [](const Eigen::MatrixXi& xi, const ModelParams& prm, const std::string& init,
             double dt, double t_max, int stride) {
              const auto patterns = patterns_from_array(xi);
              const auto ops = lindblad::build_operator_set(patterns, prm);
              lindblad::CMat rho0;
              if (init == "pattern")
                  rho0 = lindblad::pattern_state(patterns);
              else if (init == "mixed")
                  rho0 = lindblad::maximally_mixed(patterns.n_spins());
              else if (init == "plus")
                  rho0 = lindblad::plus_state(patterns.n_spins());
              else
                  throw std::invalid_argument("init must be pattern, mixed or plus");
              lindblad::EvolveOptions opts;
              opts.dt = dt;
              opts.t_max = t_max;
              opts.record_stride = stride;
              const auto s = lindblad::evolve(rho0, ops, opts);
              Eigen::VectorXd t(s.times.size());
              for (std::size_t i = 0; i < s.times.size(); ++i) t[i] = s.times[i];
              return py::make_tuple(t, s.m_x, s.m_y, s.m_z);
          },
          py::arg("patterns"), py::arg("params"), py::arg("init") = "pattern",
          py::arg("dt") = 1e-3, py::arg("t_max") = 5.0, py::arg("stride") = 100);
    m.def("build_delta_e_ops", [](const Eigen::MatrixXi& xi, int x) {
        return lindblad::build_delta_e_ops(patterns_from_array(xi), x);
    });
    m.def("overlap_expectation", [](const lindblad::CMat& rho, const Eigen::MatrixXi& xi) {
        const auto o = lindblad::overlap_expectation(rho, patterns_from_array(xi));
        return py::make_tuple(o.m_x, o.m_y, o.m_z);
    });

    // ---- phase map -----------------------------------------------------------
    m.def("phase_sweep",
          [](const std::string& config_json, const std::string& csv_path,
             const std::string& png_path) {
              const auto cfg = phasemap::SweepConfig::from_json_text(config_json);
              const auto map = phasemap::sweep(cfg);
              if (!csv_path.empty()) phasemap::emit_phase_csv(map, csv_path);
              if (!png_path.empty()) phasemap::emit_phase_image(map, png_path);
              py::list cells;
              for (const auto& c : map.cells) {
                  py::dict d;
                  d["T"] = c.temperature;
                  d["omega"] = c.omega;
                  d["n_fixed_points"] = c.n_fixed_points;
                  d["origin_stable"] = c.origin_stable;
                  d["phase"] = phasemap::to_string(c.phase);
                  cells.append(d);
              }
              return cells;
          },
          py::arg("config_json"), py::arg("csv_path") = "", py::arg("png_path") = "");
}
