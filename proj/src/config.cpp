#include "adaptctl/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "adaptctl/error.hpp"
#include "json.hpp"

namespace adaptctl::config {

namespace {

using nlohmann::json;

class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ValidationError(path_ + ": " + msg);
  }

  const std::string& path() const { return path_; }
  const json& raw() const { return j_; }

  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }

  Node at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) throw ValidationError(path_ + "." + key + ": missing required field");
    return Node(j_.at(key), path_ + "." + key);
  }

  std::optional<Node> find(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return Node(j_.at(key), path_ + "." + key);
  }

  void only(std::initializer_list<const char*> keys) const {
    if (!j_.is_object()) fail("expected an object");
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) throw ValidationError(path_ + "." + it.key() + ": unknown field");
    }
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double x = j_.get<double>();
    if (!std::isfinite(x)) fail("must be finite");
    return x;
  }

  double positive() const {
    const double x = number();
    if (!(x > 0.0)) fail("must be positive");
    return x;
  }

  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  std::uint64_t u64() const {
    if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<long long>() >= 0))
      fail("expected a non-negative integer");
    return j_.get<std::uint64_t>();
  }

  Vector vector() const {
    if (j_.is_number()) return Vector::Constant(1, number());
    if (!j_.is_array() || j_.empty()) fail("expected a non-empty array of numbers");
    Vector v(static_cast<Eigen::Index>(j_.size()));
    for (std::size_t i = 0; i < j_.size(); ++i)
      v(static_cast<Eigen::Index>(i)) = Node(j_[i], path_ + "[" + std::to_string(i) + "]").number();
    return v;
  }

  Matrix matrix() const {
    if (j_.is_number()) return Matrix::Constant(1, 1, number());
    if (!j_.is_array() || j_.empty()) fail("expected a matrix (array of rows)");
    const std::size_t rows = j_.size();
    std::size_t cols = 0;
    Matrix m;
    for (std::size_t r = 0; r < rows; ++r) {
      const Node row(j_[r], path_ + "[" + std::to_string(r) + "]");
      if (!row.raw().is_array() || row.raw().empty()) row.fail("expected a row array");
      if (r == 0) {
        cols = row.raw().size();
        m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
      } else if (row.raw().size() != cols) {
        row.fail("rows have different lengths");
      }
      for (std::size_t c = 0; c < cols; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            Node(row.raw()[c], row.path() + "[" + std::to_string(c) + "]").number();
    }
    return m;
  }

  // A number means that multiple of the identity.
  SymMatrix sym(Eigen::Index n) const {
    if (j_.is_number()) return SymMatrix::scalar(n, number());
    const Matrix m = matrix();
    if (m.rows() != n || m.cols() != n) {
      std::ostringstream os;
      os << "expected a " << n << "x" << n << " matrix, got " << m.rows() << "x" << m.cols();
      fail(os.str());
    }
    try {
      return SymMatrix(m);
    } catch (const ValidationError& e) {
      fail(e.what());
    }
  }

 private:
  const json& j_;
  std::string path_;
};

void parse_system(const Node& root, ExperimentConfig& cfg) {
  const Node sys = root.at("system");
  sys.only({"A", "B", "omega0", "zeta"});
  const bool explicit_ab = sys.has("A") || sys.has("B");
  const bool shorthand = sys.has("omega0") || sys.has("zeta");
  if (explicit_ab == shorthand) sys.fail("give either A and B or the (omega0, zeta) shorthand");
  if (shorthand) {
    const double w0 = sys.at("omega0").positive();
    const double zeta = sys.at("zeta").positive();
    const LinearErrorSystem s = LinearErrorSystem::companion(w0, zeta);
    cfg.A = s.A();
    cfg.B = s.B();
    return;
  }
  cfg.A = sys.at("A").matrix();
  cfg.B = sys.at("B").vector();
  if (cfg.A.rows() != cfg.A.cols()) sys.at("A").fail("must be square");
  if (cfg.B.size() != cfg.A.rows()) sys.at("B").fail("length differs from dim A");
  if (cfg.A.rows() > 5) sys.at("A").fail("dimensions above 5 are not supported");
  if (!is_hurwitz(cfg.A)) sys.at("A").fail("must be Hurwitz");
}

kyp::FrequencyGrid parse_grid(const Node& n, double lo, double hi, std::size_t points) {
  if (auto x = n.find("omega_min")) lo = x->positive();
  if (auto x = n.find("omega_max")) hi = x->positive();
  if (auto x = n.find("points")) points = static_cast<std::size_t>(x->u64());
  if (!(hi > lo)) n.fail("omega_max must exceed omega_min");
  if (points < 2) n.fail("points must be at least 2");
  return kyp::FrequencyGrid::log_spaced(lo, hi, points);
}

void parse_certificate(const Node& root, ExperimentConfig& cfg) {
  const Node c = root.at("certificate");
  c.only({"P", "Q", "kyp"});
  const int sources = int(c.has("P")) + int(c.has("Q")) + int(c.has("kyp"));
  if (sources != 1) c.fail("exactly one of P, Q, kyp is required");
  const Eigen::Index n = cfg.A.rows();
  auto& cs = cfg.certificate;
  if (c.has("P")) {
    cs.kind = CertificateSource::Kind::kP;
    cs.matrix = c.at("P").sym(n);
  } else if (c.has("Q")) {
    cs.kind = CertificateSource::Kind::kQ;
    cs.matrix = c.at("Q").sym(n);
  } else {
    const Node k = c.at("kyp");
    k.only({"v", "varrho", "kappa_fraction", "omega_min", "omega_max", "points"});
    cs.kind = CertificateSource::Kind::kKyp;
    cs.v = k.at("v").vector();
    if (cs.v.size() != n) k.at("v").fail("length differs from dim A");
    if (auto x = k.find("varrho")) {
      cs.varrho = x->number();
      if (!(cs.varrho >= 0.0 && cs.varrho < 1.0)) x->fail("must lie in [0, 1)");
    }
    if (auto x = k.find("kappa_fraction")) cs.kappa_fraction = x->positive();
    cs.grid = parse_grid(k, 1e-3, 1e4, 4096);
  }
}

Regressor parse_beta(const Node& b, Eigen::Index n) {
  b.only({"family", "constant", "linear", "quadratic"});
  const std::string family = b.at("family").string();
  if (family == "constant") return Regressor::constant();
  if (family != "affine" && family != "quadratic")
    b.at("family").fail("must be constant, affine or quadratic");
  const Vector c = b.at("constant").vector();
  const Matrix m = b.at("linear").matrix();
  if (m.rows() != c.size() || m.cols() != n)
    b.at("linear").fail("must be n_beta x n with n_beta = length of constant");
  if (family == "affine") {
    try {
      return Regressor::affine(c, m);
    } catch (const ValidationError& e) {
      b.fail(e.what());
    }
  }
  QuadraticRegressor q{c, m, {}};
  if (auto h = b.find("quadratic")) {
    if (!h->raw().is_array() || static_cast<Eigen::Index>(h->raw().size()) != c.size())
      h->fail("expected one n x n matrix per regressor entry");
    for (std::size_t i = 0; i < h->raw().size(); ++i) {
      const Node hi(h->raw()[i], h->path() + "[" + std::to_string(i) + "]");
      const Matrix mi = hi.matrix();
      if (mi.rows() != n || mi.cols() != n) hi.fail("must be n x n");
      q.quadratic.push_back(mi);
    }
  }
  try {
    return Regressor(q);
  } catch (const ValidationError& e) {
    b.fail(e.what());
  }
}

sim::NoiseSpec parse_noise(const Node& n) {
  n.only({"sample_dt", "amplitude_bound", "sinusoids"});
  sim::NoiseSpec spec;
  if (auto x = n.find("sample_dt")) spec.sample_dt = x->positive();
  if (auto x = n.find("amplitude_bound")) {
    spec.amplitude_bound = x->number();
    if (spec.amplitude_bound < 0.0) x->fail("must be non-negative");
  }
  if (auto s = n.find("sinusoids")) {
    if (!s->raw().is_array()) s->fail("expected an array");
    for (std::size_t i = 0; i < s->raw().size(); ++i) {
      const Node e(s->raw()[i], s->path() + "[" + std::to_string(i) + "]");
      e.only({"amplitude", "omega", "phase"});
      sim::Sinusoid sin;
      sin.amplitude = e.at("amplitude").number();
      sin.omega = e.at("omega").number();
      if (auto p = e.find("phase")) sin.phase = p->number();
      spec.sinusoids.push_back(sin);
    }
  }
  return spec;
}

void parse_uncertainty(const Node& root, ExperimentConfig& cfg) {
  const Eigen::Index n = cfg.A.rows();
  auto& u = cfg.uncertainty;
  u.beta = Regressor::constant();
  u.eta.amplitude_bound = 0.0;
  const auto block = root.find("uncertainty");
  if (!block) {
    u.W = Vector::Zero(1);
    return;
  }
  block->only({"beta", "W", "noise"});
  if (auto b = block->find("beta")) u.beta = parse_beta(*b, n);
  if (auto w = block->find("W")) {
    u.W = w->vector();
    if (u.W.size() != u.beta.n_beta()) w->fail("length differs from n_beta");
  } else {
    u.W = Vector::Zero(u.beta.n_beta());
  }
  if (auto ns = block->find("noise")) u.eta = parse_noise(*ns);
}

sim::UpdateLaw parse_law(const Node& l, Eigen::Index nb) {
  l.only({"type", "K", "alpha", "K_b", "Gamma", "Sigma", "tag"});
  const std::string type = l.at("type").string();
  SymMatrix k;
  if (l.has("K")) {
    if (l.has("alpha") || l.has("K_b")) l.fail("give K or (alpha, K_b), not both");
    k = l.at("K").sym(nb);
  } else {
    const double alpha = l.at("alpha").positive();
    k = l.at("K_b").sym(nb) * alpha;
  }
  sim::UpdateLaw law;
  if (type == "static") {
    if (l.has("Gamma") || l.has("Sigma")) l.fail("static law takes no Gamma or Sigma");
    law = sim::StaticLaw{k};
  } else if (type == "pi") {
    law = sim::PiLaw{k, l.at("Gamma").sym(nb), l.at("Sigma").sym(nb)};
  } else {
    l.at("type").fail("must be static or pi");
  }
  try {
    sim::validate_law(law, nb);
  } catch (const ValidationError& e) {
    l.fail(e.what());
  }
  return law;
}

void parse_laws(const Node& root, ExperimentConfig& cfg) {
  const Eigen::Index nb = cfg.uncertainty.beta.n_beta();
  std::vector<Node> nodes;
  if (root.has("law") && root.has("laws")) root.fail("give law or laws, not both");
  if (auto l = root.find("law")) nodes.push_back(*l);
  if (auto ls = root.find("laws")) {
    if (!ls->raw().is_array()) ls->fail("expected an array");
    for (std::size_t i = 0; i < ls->raw().size(); ++i)
      nodes.emplace_back(ls->raw()[i], ls->path() + "[" + std::to_string(i) + "]");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    LawSpec spec{parse_law(nodes[i], nb), std::to_string(i)};
    if (auto t = nodes[i].find("tag")) {
      spec.tag = t->string();
      if (spec.tag.empty() || spec.tag.find_first_of("/\\") != std::string::npos)
        t->fail("must be a non-empty file-name fragment");
    }
    for (const LawSpec& other : cfg.laws)
      if (sim::law_name(other.law) == sim::law_name(spec.law) && other.tag == spec.tag)
        nodes[i].fail("duplicate law/tag pair " + sim::law_name(spec.law) + "/" + spec.tag);
    cfg.laws.push_back(std::move(spec));
  }
}

void parse_analysis(const Node& root, ExperimentConfig& cfg) {
  const Eigen::Index nb = cfg.uncertainty.beta.n_beta();
  auto& a = cfg.analysis;
  a.K_b = SymMatrix::identity(nb);
  a.gamma = 0.0;
  const auto block = root.find("analysis");
  if (!block) return;
  block->only({"K_b", "alpha", "gamma", "mu", "eta_star"});
  if (auto x = block->find("K_b")) {
    a.K_b = x->sym(nb);
    if (!is_pos_def(a.K_b)) x->fail("must be positive definite");
  }
  if (auto x = block->find("alpha")) a.alpha = x->positive();
  if (auto x = block->find("gamma")) {
    if (x->raw().is_string()) {
      if (x->string() != "star") x->fail("must be a number in [0, 1) or \"star\"");
      a.gamma.reset();
    } else {
      a.gamma = x->number();
      if (!(*a.gamma >= 0.0 && *a.gamma < 1.0)) x->fail("must lie in [0, 1)");
    }
  }
  if (auto x = block->find("mu")) {
    a.mu = x->number();
    if (a.mu < 0.0) x->fail("must be non-negative");
  }
  if (auto x = block->find("eta_star")) {
    a.eta_star = x->number();
    if (*a.eta_star < 0.0) x->fail("must be non-negative");
  }
}

void parse_run(const Node& root, ExperimentConfig& cfg) {
  auto& r = cfg.run;
  const Eigen::Index n = cfg.A.rows();
  r.e0 = Vector::Zero(n);
  const auto block = root.find("run");
  if (!block) return;
  block->only({"dt", "t_final", "e0", "z0", "seed", "tail_fraction"});
  if (auto x = block->find("dt")) r.dt = x->positive();
  if (auto x = block->find("t_final")) {
    r.t_final = x->number();
    if (r.t_final < 0.0) x->fail("must be non-negative");
    if (r.t_final > 1e3) x->fail("horizons above 1000 are not supported");
  }
  if (auto x = block->find("e0")) {
    r.e0 = x->vector();
    if (r.e0.size() != n) x->fail("length differs from dim A");
  }
  if (auto x = block->find("z0")) {
    r.z0 = x->vector();
    if (r.z0.size() != cfg.uncertainty.beta.n_beta()) x->fail("length differs from n_beta");
  }
  if (auto x = block->find("seed")) r.seed = x->u64();
  if (auto x = block->find("tail_fraction")) {
    r.tail_fraction = x->number();
    if (!(r.tail_fraction > 0.0 && r.tail_fraction <= 1.0)) x->fail("must lie in (0, 1]");
  }
}

void parse_bode(const Node& root, ExperimentConfig& cfg) {
  const auto block = root.find("bode");
  if (!block) return;
  block->only({"omega_min", "omega_max", "points"});
  auto& b = cfg.bode;
  if (auto x = block->find("omega_min")) b.omega_min = x->positive();
  if (auto x = block->find("omega_max")) b.omega_max = x->positive();
  if (auto x = block->find("points")) b.points = static_cast<std::size_t>(x->u64());
  if (!(b.omega_max >= b.omega_min)) block->fail("omega_max must not be below omega_min");
  if (b.points == 0) block->fail("points must be positive");
}

}  // namespace

ExperimentConfig parse(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  const Node root(doc, "config");
  root.only({"schema", "system", "certificate", "uncertainty", "law", "laws", "analysis", "run",
             "bode", "output"});
  const Node schema = root.at("schema");
  if (!schema.raw().is_number_integer() || schema.raw().get<long long>() != 1)
    schema.fail("unsupported schema version (expected 1)");

  ExperimentConfig cfg;
  parse_system(root, cfg);
  parse_certificate(root, cfg);
  parse_uncertainty(root, cfg);
  parse_laws(root, cfg);
  parse_analysis(root, cfg);
  parse_run(root, cfg);
  parse_bode(root, cfg);
  if (auto o = root.find("output")) {
    cfg.output = o->string();
    if (cfg.output.empty()) o->fail("must be non-empty");
  }
  return cfg;
}

ExperimentConfig load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("config: cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace adaptctl::config
