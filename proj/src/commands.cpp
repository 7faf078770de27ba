#include "adaptctl/commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "adaptctl/bounds.hpp"
#include "adaptctl/csv.hpp"
#include "adaptctl/error.hpp"
#include "adaptctl/freqresp.hpp"
#include "adaptctl/simd/sweep.hpp"
#include "adaptctl/simulator.hpp"

namespace adaptctl::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double x) {
  if (std::isnan(x)) return "n/a";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string mat(const Matrix& m) {
  std::ostringstream os;
  os << '[';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r) os << "; ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? " " : "") << num(m(r, c));
  }
  os << ']';
  return os.str();
}

// Key/value report mirrored into a two-column CSV.
class Report {
 public:
  void add(const std::string& key, double value) { rows_.push_back({key, num(value)}); }
  void add(const std::string& key, const std::string& text) { rows_.push_back({key, text}); }
  void add(const std::string& key, bool flag) { rows_.push_back({key, flag ? "true" : "false"}); }

  std::string text() const {
    std::ostringstream os;
    for (const auto& r : rows_) os << r.key << " = " << r.text << '\n';
    return os.str();
  }

  std::string csv() const {
    std::ostringstream os;
    os << "quantity,value\n";
    for (const auto& r : rows_) {
      std::string t = r.text;
      if (t.find(',') != std::string::npos) t = '"' + t + '"';
      os << r.key << ',' << t << '\n';
    }
    return os.str();
  }

 private:
  struct Row {
    std::string key;
    std::string text;
  };
  std::vector<Row> rows_;
};

std::string table_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns) {
  std::ostringstream os;
  csv::write_table(os, header, columns);
  return os.str();
}

double eta_star_of(const config::ExperimentConfig& cfg) {
  return cfg.analysis.eta_star.value_or(cfg.uncertainty.eta.eta_star());
}

void report_verdict(Report& rep, const kyp::KypVerdict& v, const Vector& vec) {
  rep.add("spr", v.spr.spr);
  rep.add("spr_min_re_h", v.spr.min_re_h);
  rep.add("spr_omega_min_re_h", v.spr.omega_min_re_h);
  rep.add("spr_hf_limit", v.spr.hf_limit);
  rep.add("spr_hf_numeric", v.spr.hf_numeric);
  rep.add("sup_K", v.sup_K.value);
  rep.add("sup_K_omega", v.sup_K.omega);
  rep.add("kappa", v.kappa);
  rep.add("band_criterion", v.criteria.band_criterion);
  rep.add("band_criterion_min_f", v.criteria.min_f);
  rep.add("band_criterion_omega_min_f", v.criteria.omega_min_f);
  rep.add("hf_criterion_limit", v.criteria.limit);
  for (std::size_t i = 0; i < v.criteria.limit_numeric.size(); ++i)
    rep.add("hf_criterion_limit_numeric_" + std::to_string(i), v.criteria.limit_numeric[i]);
  rep.add("hf_criterion", v.criteria.hf_criterion);
  rep.add("psi_free", v.psi_free.holds);
  rep.add("psi_free_witness_omega", v.psi_free.witness.value_or(kNaN));
  rep.add("psi_free_f", v.psi_free.witness ? v.psi_free.f_at_witness : kNaN);
  rep.add("grid_points", static_cast<double>(v.criteria.grid.points));
  rep.add("grid_refinement_levels", static_cast<double>(v.criteria.grid.refinement_levels));
  rep.add("grid_refined_intervals", static_cast<double>(v.criteria.grid.refined_intervals));
  rep.add("sweep_isa", std::string(simd::isa_name(simd::active_isa())));
  rep.add("lmi_feasible", v.feasible());
  if (v.lmi) {
    rep.add("P", mat(v.lmi->P.matrix()));
    rep.add("Q", mat(v.lmi->Q.matrix()));
    const EigenDecomposition ed = sym_eig(v.lmi->residual);
    rep.add("lmi_residual_eigenvalues", mat(ed.values.transpose()));
    rep.add("lmi_lambda_max", v.lmi->lambda_max_residual);
    rep.add("lmi_evaluations", static_cast<double>(v.lmi->evaluations));
    rep.add("eigenvalue_lift", check_eigenvalue_lift(v.lmi->Q, Matrix(vec)));
  } else {
    rep.add("lmi_best_lambda_max", v.lmi_best.value_or(kNaN));
  }
}

std::string f_sweep_csv(const Matrix& a, const Vector& b, const Vector& v, double kappa,
                        const kyp::FrequencyGrid& grid) {
  const kyp::RationalResponse resp(a, b, v);
  const auto t = resp.evaluate(grid.omegas);
  const double vartheta = kappa * v.squaredNorm();
  std::vector<double> f43(t.size()), f47(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    f43[i] = t.at(i).f(kappa, vartheta);
    f47[i] = t.at(i).f(0.0, vartheta);
  }
  return table_csv({"omega", "re_h", "f_criterion", "f_psi_free", "g_norm_sq"},
                   {t.omega, t.re_h, f43, f47, t.g_norm_sq});
}

std::string g_profile_csv(const NominalCertificate& cert, double phi_max, std::size_t points) {
  std::vector<double> phis(points);
  for (std::size_t i = 0; i < points; ++i)
    phis[i] = phi_max * static_cast<double>(i) / static_cast<double>(points - 1);
  const GProfile prof = g_profile(cert.Q(), Matrix(cert.v()), phis);
  return table_csv({"phi", "g"}, {prof.phi, prof.g});
}

struct LawBound {
  double residual = kNaN;
  double c_e = kNaN;
  std::optional<bounds::StaticLawConfig> cfg;
};

// Certified residual of a static law with its own gain as K_b (alpha = 1).
LawBound static_bound(const config::ExperimentConfig& cfg, const NominalCertificate& cert,
                      const sim::UpdateLaw& law) {
  LawBound out;
  const auto* st = std::get_if<sim::StaticLaw>(&law);
  if (!st || !cfg.uncertainty.beta.certified()) return out;
  bounds::StaticLawConfig sc;
  sc.K_b = st->K;
  sc.alpha = 1.0;
  sc.gamma = cfg.analysis.gamma.value_or(0.0);
  sc.b = bounds::beta_inf_bound(cfg.uncertainty.beta, sc.K_b);
  if (!(sc.b > 0.0)) return out;
  const auto rep = bounds::ultimate_bound(cert, sc, cfg.uncertainty.W, eta_star_of(cfg));
  out.residual = rep.residual;
  out.c_e = rep.c_e;
  out.cfg = sc;
  return out;
}

std::string tag_name(const sim::UpdateLaw& law, const std::string& tag) {
  return sim::law_name(law) + "_" + tag;
}

std::string gain_tag(double k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "k%g", k);
  return buf;
}

}  // namespace

Resolved resolve(const config::ExperimentConfig& cfg, std::uint64_t seed) {
  LinearErrorSystem sys(cfg.A, cfg.B);
  const auto& cs = cfg.certificate;
  switch (cs.kind) {
    case config::CertificateSource::Kind::kP:
      return {sys, NominalCertificate::from_P(sys, cs.matrix), std::nullopt};
    case config::CertificateSource::Kind::kQ:
      return {sys, NominalCertificate::from_Q(sys, cs.matrix), std::nullopt};
    case config::CertificateSource::Kind::kKyp: {
      kyp::KypVerdict v =
          kyp::certify(cfg.A, cfg.B, cs.v, cs.varrho, cs.kappa_fraction, cs.grid, seed);
      if (!v.lmi) {
        std::ostringstream os;
        os << "no certificate: criteria " << (v.criteria.holds() ? "hold" : "fail")
           << " at kappa = " << v.kappa << " and the LMI search found no P";
        throw InfeasibleError(os.str(), v.lmi_best.value_or(kNaN));
      }
      NominalCertificate cert = NominalCertificate::from_P(sys, v.lmi->P);
      return {sys, cert, std::move(v)};
    }
  }
  throw ValidationError("unknown certificate source");
}

CommandResult cmd_analyze(const config::ExperimentConfig& cfg, std::uint64_t seed) {
  const Resolved r = resolve(cfg, seed);
  const NominalCertificate& cert = r.cert;
  const auto& an = cfg.analysis;
  const Matrix v = cert.v();
  const Eigen::Index n = r.sys.n();

  Report rep;
  rep.add("P", mat(cert.P().matrix()));
  rep.add("Q", mat(cert.Q().matrix()));
  rep.add("v", mat(cert.v().transpose()));
  rep.add("lambda_min_P", cert.lambda_min_P());
  rep.add("lambda_max_P", cert.lambda_max_P());
  rep.add("lambda_min_Q", cert.lambda_min_Q());
  rep.add("lambda_max_Q", cert.lambda_max_Q());

  const double b = bounds::beta_inf_bound(cfg.uncertainty.beta, an.K_b);
  const bool lift = check_eigenvalue_lift(cert.Q(), v);
  rep.add("b", b);
  rep.add("eigenvalue_lift", lift);
  rep.add("g_1", g_eval(1.0, cert.Q(), v));
  double phi_star = kNaN;
  if (n > 1) {
    const PhiStar ps = g_phi_star(cert.Q(), v);
    phi_star = ps.no_lift ? 0.0 : ps.value;
    rep.add("phi_star", phi_star);
  }

  double alpha_lb = kNaN;
  if (lift && b > 0.0) alpha_lb = bounds::alpha_lower_bound(cert, b);
  rep.add("alpha_lower_bound", alpha_lb);

  bounds::StaticLawConfig sc;
  sc.K_b = an.K_b;
  sc.alpha = an.alpha;
  sc.mu = an.mu;
  sc.b = b;
  sc.gamma = 0.0;
  std::optional<bounds::GammaStar> gs;
  if (b > 0.0 && lift && an.alpha > alpha_lb) gs = bounds::gamma_star(cert, sc);
  rep.add("gamma_star", gs ? gs->gamma : kNaN);
  if (an.gamma) {
    sc.gamma = *an.gamma;
  } else {
    if (!gs)
      throw HypothesisError("gamma = star needs b > 0, the eigenvalue lift and alpha above " +
                            num(alpha_lb));
    sc.gamma = gs->gamma;
  }
  rep.add("alpha", an.alpha);
  rep.add("gamma", sc.gamma);
  rep.add("mu", an.mu);
  const double eta_star = eta_star_of(cfg);
  rep.add("eta_star", eta_star);
  rep.add("c_e", bounds::convergence_rate(cert, sc));
  if (b > 0.0) {
    const auto ub = bounds::ultimate_bound(cert, sc, cfg.uncertainty.W, eta_star);
    rep.add("r_e", ub.r_e);
    rep.add("residual", ub.residual);
    double ts = kNaN;
    if (an.mu > 0.0) ts = bounds::settling_time(cert, sc, cfg.uncertainty.W, eta_star, cfg.run.e0);
    rep.add("settling_time", ts);
  } else {
    rep.add("r_e", kNaN);
    rep.add("residual", kNaN);
  }
  const auto tau = bounds::tau_growth_bound(cert, an.alpha, b);
  rep.add("tau", tau.tau);
  rep.add("tau_eps_opt", tau.eps_opt);
  rep.add("sup_E", tau.sup_E);

  CommandResult out;
  out.report = rep.text();
  out.files.push_back({"analyze.csv", rep.csv()});
  if (n > 1) {
    const double phi_max = std::isfinite(phi_star) && phi_star > 0.0 ? 2.0 * phi_star : 10.0;
    out.files.push_back({"g_profile.csv", g_profile_csv(cert, phi_max, 401)});
  }
  return out;
}

CommandResult cmd_kyp(const config::ExperimentConfig& cfg, std::uint64_t seed) {
  const auto& cs = cfg.certificate;
  Vector v;
  if (cs.kind == config::CertificateSource::Kind::kKyp) {
    v = cs.v;
  } else {
    const Resolved r = resolve(cfg, seed);
    v = r.cert.v();
  }
  const kyp::KypVerdict verdict =
      kyp::certify(cfg.A, cfg.B, v, cs.varrho, cs.kappa_fraction, cs.grid, seed);
  Report rep;
  rep.add("v", mat(v.transpose()));
  rep.add("varrho", cs.varrho);
  rep.add("kappa_fraction", cs.kappa_fraction);
  report_verdict(rep, verdict, v);

  CommandResult out;
  out.report = rep.text();
  out.files.push_back({"kyp.csv", rep.csv()});
  out.files.push_back({"kyp_f_sweep.csv", f_sweep_csv(cfg.A, cfg.B, v, verdict.kappa, cs.grid)});
  if (!verdict.feasible()) {
    out.exit_code = kInfeasible;
    out.report += "verdict = infeasible\n";
  }
  return out;
}

CommandResult cmd_simulate(const config::ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.laws.empty()) throw ValidationError("config.laws: at least one law is required");
  const Resolved r = resolve(cfg, seed);

  std::vector<sim::SimulationInput> runs;
  for (std::size_t i = 0; i < cfg.laws.size(); ++i) {
    sim::SimulationInput in;
    in.sys = &r.sys;
    in.cert = &r.cert;
    in.unc = cfg.uncertainty;
    in.unc.eta.seed = seed + i;
    in.law = cfg.laws[i].law;
    in.e0 = cfg.run.e0;
    if (std::holds_alternative<sim::PiLaw>(in.law)) in.z0 = cfg.run.z0;
    in.t_final = cfg.run.t_final;
    in.dt = cfg.run.dt;
    runs.push_back(std::move(in));
  }
  const std::vector<sim::Trajectory> trajs = sim::simulate_batch(runs);

  CommandResult out;
  std::ostringstream summary, text;
  summary << "law,tag,tail_max,residual_bound,inside,entry_time\n";
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const auto& spec = cfg.laws[i];
    const auto& tr = trajs[i];
    const std::string name = tag_name(spec.law, spec.tag);
    std::ostringstream traj_csv;
    csv::write_trajectory(traj_csv, tr);
    out.files.push_back({"trajectory_" + name + ".csv", traj_csv.str()});

    const LawBound lb = static_bound(cfg, r.cert, spec.law);
    const double bound = std::isnan(lb.residual) ? std::numeric_limits<double>::infinity() : lb.residual;
    const sim::UubReport uub = sim::verify_uub(tr, bound, cfg.run.tail_fraction);
    const double e0n = tr.e_norm(0);
    if (lb.cfg && e0n >= lb.residual) {
      std::vector<double> env(tr.samples()), en(tr.samples());
      for (std::size_t k = 0; k < tr.samples(); ++k) {
        en[k] = tr.e_norm(k);
        env[k] = bounds::transient_envelope(tr.t[k], e0n, r.cert, *lb.cfg, cfg.uncertainty.W,
                                            eta_star_of(cfg));
      }
      out.files.push_back({"envelope_" + name + ".csv",
                           table_csv({"t", "e_norm", "envelope"}, {tr.t, en, env})});
    }
    summary << sim::law_name(spec.law) << ',' << spec.tag << ',' << csv::format(uub.tail_max)
            << ',' << csv::format(lb.residual) << ','
            << (std::isnan(lb.residual) ? "n/a" : (uub.inside ? "true" : "false")) << ','
            << csv::format(uub.entry_time.value_or(kNaN)) << '\n';
    text << name << ": tail_max = " << num(uub.tail_max) << ", residual_bound = " << num(lb.residual)
         << ", uub = " << (std::isnan(lb.residual) ? "n/a" : (uub.inside ? "ok" : "violated")) << '\n';
  }
  out.files.push_back({"simulate.csv", summary.str()});
  out.report = text.str();
  return out;
}

CommandResult cmd_bode(const config::ExperimentConfig& cfg, std::uint64_t seed) {
  if (!std::holds_alternative<ConstantRegressor>(cfg.uncertainty.beta.family()))
    throw ValidationError(
        "config.uncertainty.beta: sensitivity analysis is restricted to the linear case beta = 1");
  if (cfg.laws.empty()) throw ValidationError("config.laws: at least one law is required");
  const Resolved r = resolve(cfg, seed);
  const std::vector<double> grid =
      freqresp::log_grid(cfg.bode.omega_min, cfg.bode.omega_max, cfg.bode.points);
  CommandResult out;
  std::ostringstream text;
  for (const auto& spec : cfg.laws) {
    const auto table = freqresp::bode_table(spec.law, r.sys, r.cert, grid);
    std::ostringstream os;
    csv::write_bode(os, table);
    out.files.push_back({csv::bode_file_name(sim::law_name(spec.law), spec.tag), os.str()});
    if (!table.empty())
      text << tag_name(spec.law, spec.tag) << ": |S| at omega = " << num(table.front().omega)
           << " is " << num(table.front().mag_db) << " dB\n";
  }
  out.report = text.str();
  return out;
}

config::ExperimentConfig figure_config(int figure) {
  config::ExperimentConfig cfg;
  // Second-order plant with omega0 = 1, zeta = 1/sqrt(2) in companion form.
  const LinearErrorSystem sys = LinearErrorSystem::companion(1.0, 1.0 / std::sqrt(2.0));
  cfg.A = sys.A();
  cfg.B = sys.B();
  cfg.output = "out";
  // Certificate used for the simulations and sensitivity plots.
  Matrix p(2, 2);
  p << 3.9598, 1.0, 1.0, std::sqrt(2.0);
  cfg.certificate.kind = config::CertificateSource::Kind::kP;
  cfg.certificate.matrix = SymMatrix(p);
  const SymMatrix gamma = SymMatrix::scalar(1, 2.0);
  const SymMatrix sigma = SymMatrix::scalar(1, 0.2);

  switch (figure) {
    case 1:
      cfg.certificate.kind = config::CertificateSource::Kind::kKyp;
      cfg.certificate.v = Vector(2);
      cfg.certificate.v << 1.0, std::sqrt(2.0);
      cfg.certificate.varrho = 0.75;
      cfg.certificate.kappa_fraction = 0.9;
      break;
    case 2: {
      // beta(e) = (1, -e2), W = (1, 1): constant offset plus viscous friction.
      Vector c(2);
      c << 1.0, 0.0;
      Matrix m(2, 2);
      m << 0.0, 0.0, 0.0, -1.0;
      cfg.uncertainty.beta = Regressor::affine(c, m);
      cfg.uncertainty.W = Vector::Ones(2);
      cfg.uncertainty.eta.amplitude_bound = 0.01;
      cfg.uncertainty.eta.sample_dt = 0.01;
      cfg.uncertainty.eta.sinusoids = {{0.05, 1.7179, 0.0}};
      const SymMatrix g2 = SymMatrix::scalar(2, 2.0);
      const SymMatrix s2 = SymMatrix::scalar(2, 0.2);
      for (double k : {2.5, 5.0, 10.0}) {
        cfg.laws.push_back({sim::StaticLaw{SymMatrix::scalar(2, k)}, gain_tag(k)});
        cfg.laws.push_back({sim::PiLaw{SymMatrix::scalar(2, k), g2, s2}, gain_tag(k)});
      }
      cfg.run.e0 = Vector(2);
      cfg.run.e0 << 0.0, 1.0;
      cfg.run.t_final = 60.0;
      cfg.run.dt = 1e-3;
      cfg.analysis.K_b = SymMatrix::identity(2);
      cfg.analysis.gamma = 0.0;
      break;
    }
    case 3:
      cfg.uncertainty.beta = Regressor::constant();
      cfg.uncertainty.W = Vector::Zero(1);
      cfg.uncertainty.eta.amplitude_bound = 0.0;
      for (double k : {0.0, 2.5, 5.0, 10.0})
        cfg.laws.push_back({sim::PiLaw{SymMatrix::scalar(1, k), gamma, sigma}, gain_tag(k)});
      for (double k : {2.5, 5.0, 10.0})
        cfg.laws.push_back({sim::StaticLaw{SymMatrix::scalar(1, k)}, gain_tag(k)});
      cfg.bode.omega_min = 1e-3;
      cfg.bode.omega_max = 1e2;
      cfg.bode.points = 400;
      cfg.analysis.K_b = SymMatrix::identity(1);
      break;
    default:
      throw ValidationError("reproduce: unknown figure " + std::to_string(figure) +
                            " (expected 1, 2 or 3)");
  }
  if (cfg.analysis.K_b.size() == 0) cfg.analysis.K_b = SymMatrix::identity(1);
  if (cfg.uncertainty.W.size() == 0) {
    cfg.uncertainty.W = Vector::Zero(1);
    cfg.uncertainty.eta.amplitude_bound = 0.0;
  }
  cfg.run.e0 = cfg.run.e0.size() ? cfg.run.e0 : Vector::Zero(2);
  return cfg;
}

CommandResult cmd_reproduce(int figure, std::uint64_t seed) {
  const config::ExperimentConfig cfg = figure_config(figure);
  CommandResult out;
  std::ostringstream gp;
  gp << "set datafile separator ','\nset key autotitle columnhead\nset grid\n";
  if (figure == 1) {
    CommandResult k = cmd_kyp(cfg, seed);
    if (k.exit_code != kOk) throw InfeasibleError("reproduce 1: certificate search failed", kNaN);
    const Resolved r = resolve(cfg, seed);
    out.report = k.report;
    out.files.push_back({"fig1_kyp.csv", k.files[0].content});
    out.files.push_back({"fig1_f_sweep.csv", k.files[1].content});
    out.files.push_back({"fig1_g_profile.csv", g_profile_csv(r.cert, 10.0, 401)});
    gp << "set terminal pngcairo size 800,900\nset output 'fig1.png'\nset multiplot layout 2,1\n"
          "set logscale x\nset xlabel 'omega [rad/s]'\nset ylabel 'f'\n"
          "plot 'fig1_f_sweep.csv' using 1:3 with lines title 'f(omega, kappa)', \\\n"
          "     '' using 1:4 with lines lc rgb 'red' title 'f(omega, 0)'\n"
          "unset logscale x\nset xlabel 'phi'\nset ylabel 'g(phi, Q, PB)'\n"
          "plot 'fig1_g_profile.csv' using 1:2 with lines title 'g'\nunset multiplot\n";
    out.files.push_back({"fig1.gp", gp.str()});
  } else if (figure == 2) {
    CommandResult s = cmd_simulate(cfg, seed);
    out.report = s.report;
    gp << "set terminal pngcairo size 900,500\nset output 'fig2.png'\n"
          "set xlabel 't [s]'\nset ylabel 'e1'\nplot \\\n";
    bool first = true;
    for (auto& f : s.files) {
      const std::string name = f.name.string();
      if (name.rfind("trajectory_", 0) == 0) {
        const std::string renamed = "fig2_" + name;
        const bool dashed = name.find("_static_") != std::string::npos;
        gp << (first ? "" : ", \\\n") << "  '" << renamed << "' using 1:2 with lines dt "
           << (dashed ? 2 : 1) << " title '" << name.substr(11, name.size() - 15) << "'";
        first = false;
        f.name = renamed;
      } else {
        f.name = "fig2_" + name;
      }
      out.files.push_back(std::move(f));
    }
    gp << '\n';
    out.files.push_back({"fig2.gp", gp.str()});
  } else {
    CommandResult b = cmd_bode(cfg, seed);
    out.report = b.report;
    gp << "set terminal pngcairo size 800,900\nset output 'fig3.png'\nset multiplot layout 2,1\n"
          "set logscale x\nset xlabel 'omega [rad/s]'\n";
    std::ostringstream mag, phase;
    bool first = true;
    for (const auto& f : b.files) {
      const std::string name = f.name.string();
      const bool dashed = name.find("_static_") != std::string::npos;
      const std::string title = name.substr(5, name.size() - 9);
      mag << (first ? "" : ", \\\n") << "  '" << name << "' using 1:2 with lines dt "
          << (dashed ? 2 : 1) << " title '" << title << "'";
      phase << (first ? "" : ", \\\n") << "  '" << name << "' using 1:3 with lines dt "
            << (dashed ? 2 : 1) << " title '" << title << "'";
      first = false;
    }
    gp << "set ylabel 'magnitude [dB]'\nplot \\\n" << mag.str() << "\n"
       << "set ylabel 'phase [deg]'\nplot \\\n" << phase.str() << "\nunset multiplot\n";
    out.files = std::move(b.files);
    out.files.push_back({"fig3.gp", gp.str()});
  }
  return out;
}

void write_artifacts(const CommandResult& result, const std::filesystem::path& out_dir) {
  for (const auto& f : result.files) csv::write_file(out_dir / f.name, f.content);
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certificates, bounds and simulations for adaptive control with a static update law",
               "adaptctl"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int figure = 0;
  auto add_common = [&](CLI::App* sub, bool need_config) {
    auto* c = sub->add_option("--config", config_path, "experiment config (JSON, schema 1)");
    if (need_config) c->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "base seed for noise and random starts");
  };
  CLI::App* analyze = app.add_subcommand("analyze", "bounds report");
  CLI::App* kypc = app.add_subcommand("kyp", "frequency-domain certification");
  CLI::App* simulate = app.add_subcommand("simulate", "closed-loop simulation");
  CLI::App* bode = app.add_subcommand("bode", "disturbance sensitivity");
  CLI::App* reproduce = app.add_subcommand("reproduce", "regenerate figure data");
  for (CLI::App* s : {analyze, kypc, simulate, bode}) add_common(s, true);
  add_common(reproduce, false);
  reproduce->add_option("--figure", figure, "figure number (1, 2 or 3)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    CommandResult result;
    std::filesystem::path dir = out_dir;
    const bool seed_given = [&] {
      for (CLI::App* s : {analyze, kypc, simulate, bode, reproduce})
        if (s->parsed() && s->count("--seed") > 0) return true;
      return false;
    }();
    if (reproduce->parsed()) {
      result = cmd_reproduce(figure, seed);
      if (dir.empty()) dir = "out";
    } else {
      const config::ExperimentConfig cfg = config::load(config_path);
      const std::uint64_t s = seed_given ? seed : cfg.run.seed;
      if (dir.empty()) dir = cfg.output;
      if (analyze->parsed()) result = cmd_analyze(cfg, s);
      if (kypc->parsed()) result = cmd_kyp(cfg, s);
      if (simulate->parsed()) result = cmd_simulate(cfg, s);
      if (bode->parsed()) result = cmd_bode(cfg, s);
    }
    write_artifacts(result, dir);
    out << result.report;
    return result.exit_code;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const HypothesisError& e) {
    err << "not certified: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace adaptctl::cli
