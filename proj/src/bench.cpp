#include "curvquad/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "curvquad/error.hpp"
#include "curvquad/vmspace.hpp"

namespace curvquad::bench {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Neumaier compensated sum
struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

std::vector<double> sine_moments(int a, int kmax) {
  std::vector<double> s(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (int k = 1; k <= kmax; ++k) s[k] = ref_S(a, k);
  return s;
}

ReferenceValue exact(double v) { return {v, Provenance::exact, 0, 0.0}; }

}  // namespace

double ref_S(int a, int l) {
  if (a < 0 || l < 1) throw DomainError("ref_S: need a >= 0 and l >= 1");
  const double lp = l * pi;
  const int half = a / 2;
  double sum = 0.0;
  double falling = 1.0;  // a! / (a - 2j)!
  double power = lp;     // (l pi)^(2j+1)
  for (int j = 0; j <= half; ++j) {
    sum += (j % 2 == 0 ? 1.0 : -1.0) * falling / power;
    falling *= static_cast<double>(a - 2 * j) * (a - 2 * j - 1);
    power *= lp * lp;
  }
  const double sign_l = l % 2 == 1 ? 1.0 : -1.0;  // (-1)^(l+1)
  double fact = 1.0;
  for (int i = 2; i <= a; ++i) fact *= i;
  const double last = (half % 2 == 0 ? 1.0 : -1.0) * fact * (a - 2 * half - 1) / std::pow(lp, a + 1);
  return sign_l * sum - last;
}

ReferencePair ref_square_bubble_pair(MultiIndex alpha, MultiIndex beta) {
  constexpr int k1 = 1000, k2 = 2000, k3 = 4000;
  const auto a1 = sine_moments(alpha.a1, k3), a2 = sine_moments(alpha.a2, k3);
  const auto b1 = sine_moments(beta.a1, k3), b2 = sine_moments(beta.a2, k3);
  std::vector<double> u(k3 + 1), v(k3 + 1);
  for (int k = 1; k <= k3; ++k) {
    u[k] = a1[k] * b1[k];
    v[k] = a2[k] * b2[k];
  }
  // partial sums over the squares [1, K]^2 for the three truncations
  Accumulator l2_lo, l2_hi, h1[3];
  for (int k = 1; k <= k3; ++k) {
    Accumulator rl2_lo, rl2_hi, rh1[3];
    for (int l = 1; l <= k3; ++l) {
      const double q = static_cast<double>(k) * k + static_cast<double>(l) * l;
      const double uv = u[k] * v[l];
      const int m = std::max(k, l);
      const double th1 = uv / q;
      if (m <= k1) {
        rh1[0].add(th1);
        rl2_lo.add(uv / (q * q));
      }
      if (m <= k2) {
        rh1[1].add(th1);
        rl2_hi.add(uv / (q * q));
      }
      rh1[2].add(th1);
    }
    l2_lo.add(rl2_lo.value());
    l2_hi.add(rl2_hi.value());
    for (int i = 0; i < 3; ++i) h1[i].add(rh1[i].value());
  }
  const double c4 = 4.0 / (pi * pi * pi * pi);
  const double c2 = 4.0 / (pi * pi);
  ReferencePair out;
  out.l2 = {c4 * l2_hi.value(), Provenance::series, k2, std::abs(c4 * (l2_hi.value() - l2_lo.value()))};
  // the H1 tail decays like K^-3 with a K^-4 correction
  const double h_1 = c2 * h1[0].value(), h_2 = c2 * h1[1].value(), h_3 = c2 * h1[2].value();
  const double r1 = (8.0 * h_2 - h_1) / 7.0;
  const double r2 = (8.0 * h_3 - h_2) / 7.0;
  const double r3 = (16.0 * r2 - r1) / 15.0;
  out.h1 = {r3, Provenance::series, k3, std::abs(r3 - r2)};
  return out;
}

ReferencePair ref_square_basis(SquarePair pair) {
  // w_1 = sum_{k odd} c_k sinh(a x)/sinh(a) sin(a y), a = k pi, c_k = 8/a^3
  constexpr int kmax = 4001;
  auto series = [](auto term) {
    Accumulator s;
    for (int k = kmax; k >= 1; k -= 2) s.add(term(k * pi));
    return ReferenceValue{s.value(), Provenance::series, kmax, 0.0};
  };
  auto coth = [](double a) { return 1.0 / std::tanh(a); };
  switch (pair) {
    case SquarePair::vv: return {exact(1.0 / 9.0), exact(2.0 / 3.0)};
    case SquarePair::v_next: return {exact(1.0 / 18.0), exact(-1.0 / 6.0)};
    case SquarePair::v_opposite: return {exact(1.0 / 36.0), exact(-1.0 / 3.0)};
    case SquarePair::v0_w1:
      return {series([](double a) { return 8.0 / (a * a * a) / a * (1.0 / (a * a) - 1.0 / (a * std::sinh(a))); }),
              exact(-1.0 / 12.0)};
    case SquarePair::v1_w1:
      return {series([&](double a) { return 8.0 / (a * a * a) / a * (coth(a) / a - 1.0 / (a * a)); }),
              exact(1.0 / 12.0)};
    case SquarePair::ww: {
      auto c2 = [](double a) { return 64.0 / std::pow(a, 6); };
      return {series([&](double a) {
                const double s = std::sinh(a);
                return 0.5 * c2(a) * (coth(a) / (2.0 * a) - 0.5 / (s * s));
              }),
              series([&](double a) { return 0.5 * c2(a) * a * coth(a); })};
    }
    case SquarePair::bubble_bubble: return ref_square_bubble_pair({0, 0}, {0, 0});
    case SquarePair::v_bubble: {
      // sum_j v_j = 1 and the symmetry of the bubble give int v_j w = int w / 4 = |w|_H1^2 / 4
      ReferenceValue r = ref_square_bubble_pair({0, 0}, {0, 0}).h1;
      r.value /= 4.0;
      r.tail_bound /= 4.0;
      return {r, exact(0.0)};
    }
    case SquarePair::w_bubble:
      // bubble = sum_{k odd} 4/(a^3) (1 - cosh(a(x - 1/2))/cosh(a/2)) sin(a y)
      return {series([](double a) { return 8.0 / std::pow(a, 6) * std::tanh(0.5 * a) * (1.0 / a - 1.0 / std::sinh(a)); }),
              exact(0.0)};
  }
  throw DomainError("ref_square_basis: unknown pair");
}

ReferencePair ref_pacman(double mu, double nu, PacmanPair pair) {
  if (!(mu > 0.0 && mu < 1.0 && nu > 0.0 && nu <= mu)) throw DomainError("ref_pacman: need 0 < nu <= mu < 1");
  const double w = pi / mu;
  // int v_nu v3 over the sector
  auto with_bubble = [w](double s) {
    return (2.0 * s * std::sin(w) * std::sin(s * w) - 4.0 * std::cos(w) * (1.0 - std::cos(s * w))) /
           (s * (s + 4.0) * (s + 6.0) * (s * s - 4.0));
  };
  switch (pair) {
    case PacmanPair::v1v1: return {exact(pi / (4.0 * mu * (mu + 1.0))), exact(pi / 2.0)};
    case PacmanPair::v1v2: {
      if (nu == mu) return ref_pacman(mu, mu, PacmanPair::v1v1);
      const double s = std::sin(nu * w);
      return {exact(mu * s / ((mu + nu + 2.0) * (mu * mu - nu * nu))), exact(mu * nu * s / (mu * mu - nu * nu))};
    }
    case PacmanPair::v1v3: return {exact(with_bubble(mu)), exact(0.0)};
    case PacmanPair::v2v3: return {exact(with_bubble(nu)), exact(0.0)};
  }
  throw DomainError("ref_pacman: unknown pair");
}

std::vector<std::string> experiment_names() { return {"area", "square-basis", "square-bubble", "pacman", "puzzle"}; }

void validate_spec(const ExperimentSpec& spec) {
  const auto names = experiment_names();
  if (std::find(names.begin(), names.end(), spec.experiment) == names.end())
    throw DomainError("unknown experiment '" + spec.experiment + "'");
  if (spec.ns.empty()) throw DomainError("no n values");
  for (std::size_t i = 0; i < spec.ns.size(); ++i) {
    if (spec.ns[i] < 2) throw DomainError("n values must be at least 2");
    if (i > 0 && spec.ns[i] <= spec.ns[i - 1]) throw DomainError("n values must be increasing");
  }
  if (spec.sigma < 2) throw DomainError("sigma must be at least 2");
  if (spec.cell_file && spec.experiment != "area") throw DomainError("--cell-file applies to the area experiment only");
  if (spec.jobs < 1) throw DomainError("jobs must be positive");
}

namespace {

struct Task {
  std::size_t cell;
  std::string pair;
  VmFunction a;
  VmFunction b;
  std::optional<ReferenceValue> l2;
  std::optional<ReferenceValue> h1;
  bool area = false;
};

struct Setup {
  std::vector<Cell> cells;
  std::vector<Task> tasks;
};

std::string mi_label(MultiIndex a, MultiIndex b) {
  std::ostringstream os;
  os << '(' << a.a1 << ',' << a.a2 << ")x(" << b.a1 << ',' << b.a2 << ')';
  return os.str();
}

Setup make_setup(const ExperimentSpec& spec) {
  Setup s;
  const std::string& e = spec.experiment;
  if (e == "area") {
    if (spec.cell_file) {
      s.cells.push_back(load_cell_file(*spec.cell_file));
    } else {
      s.cells = {build_square(), build_circle(), build_puzzle()};
    }
    const double areas[] = {1.0, pi, 1.0};
    for (std::size_t i = 0; i < s.cells.size(); ++i) {
      const Cell& c = s.cells[i];
      const VmFunction one = make_poly_trace_fn(c, Poly2::constant(c.shift_point(), 1.0), "one");
      std::optional<ReferenceValue> ref;
      if (!spec.cell_file) ref = exact(areas[i]);
      s.tasks.push_back({i, c.name(), one, one, ref, std::nullopt, true});
    }
  } else if (e == "square-basis") {
    s.cells = {build_square()};
    const Cell& c = s.cells[0];
    std::vector<VmFunction> v, w;
    for (std::size_t j = 0; j < 4; ++j) v.push_back(make_vertex_fn(c, j));
    for (std::size_t j = 0; j < 4; ++j) w.push_back(make_edge_fn_product(c, j));
    const VmFunction bub = make_bubble(c);
    auto add = [&](std::string label, const VmFunction& a, const VmFunction& b, SquarePair p) {
      const ReferencePair r = ref_square_basis(p);
      s.tasks.push_back({0, std::move(label), a, b, r.l2, r.h1});
    };
    add("v0,v0", v[0], v[0], SquarePair::vv);
    add("v0,v1", v[0], v[1], SquarePair::v_next);
    add("v0,v3", v[0], v[3], SquarePair::v_next);
    add("v0,v2", v[0], v[2], SquarePair::v_opposite);
    add("v0,w1", v[0], w[1], SquarePair::v0_w1);
    add("v1,w1", v[1], w[1], SquarePair::v1_w1);
    add("w1,w1", w[1], w[1], SquarePair::ww);
    add("wt,wt", bub, bub, SquarePair::bubble_bubble);
    add("v0,wt", v[0], bub, SquarePair::v_bubble);
    add("w1,wt", w[1], bub, SquarePair::w_bubble);
  } else if (e == "square-bubble") {
    s.cells = {build_square()};
    const Cell& c = s.cells[0];
    const std::pair<MultiIndex, MultiIndex> pairs[] = {{{0, 0}, {0, 0}}, {{1, 0}, {0, 0}}, {{1, 1}, {1, 0}},
                                                       {{2, 1}, {0, 2}}, {{4, 1}, {3, 2}}, {{5, 1}, {3, 3}},
                                                       {{4, 2}, {4, 2}}};
    auto bubble = [&](MultiIndex a) { return make_bubble(c, Poly2::monomial({0.0, 0.0}, a, -1.0)); };
    for (const auto& [a, b] : pairs) {
      const ReferencePair r = ref_square_bubble_pair(a, b);
      const VmFunction va = bubble(a);
      const VmFunction vb = a == b ? va : bubble(b);
      s.tasks.push_back({0, mi_label(a, b), va, vb, r.l2, r.h1});
    }
  } else if (e == "pacman") {
    const double mu = 4.0 / 7.0, nu = 2.0 / 7.0;
    s.cells = {build_pacman(mu)};
    const Cell& c = s.cells[0];
    const VmFunction v1 = make_pacman_singular(c, mu), v2 = make_pacman_singular(c, nu), v3 = make_pacman_bubble(c, mu);
    auto add = [&](std::string label, const VmFunction& a, const VmFunction& b, PacmanPair p) {
      const ReferencePair r = ref_pacman(mu, nu, p);
      s.tasks.push_back({0, std::move(label), a, b, r.l2, r.h1});
    };
    add("v1,v1", v1, v1, PacmanPair::v1v1);
    add("v1,v2", v1, v2, PacmanPair::v1v2);
    add("v1,v3", v1, v3, PacmanPair::v1v3);
    add("v2,v3", v2, v3, PacmanPair::v2v3);
  } else if (e == "puzzle") {
    s.cells = {build_puzzle()};
    const Cell& c = s.cells[0];
    // the reference puzzle values need the apex on the inner side of each chord
    const ApexSide side = ApexSide::inward;
    const VmFunction v0 = make_vertex_fn(c, 0, side), v1 = make_vertex_fn(c, 1, side);
    const VmFunction w0 = make_edge_fn_product(c, 0, side);
    const VmFunction u0 = make_arc_linear_fn(c, 1, side), u1 = make_arc_linear_fn(c, 4, side);
    const VmFunction u3 = make_arc_linear_fn(c, 10, side);
    const VmFunction bub = make_bubble(c);
    const std::tuple<const char*, const VmFunction&, const VmFunction&> pairs[] = {
        {"v0,v0", v0, v0}, {"v0,v1", v0, v1}, {"v0,w0", v0, w0}, {"v1,u0", v1, u0},  {"u0,u0", u0, u0},
        {"u0,u1", u0, u1}, {"wt,wt", bub, bub}, {"v0,wt", v0, bub}, {"u3,wt", u3, bub}};
    for (const auto& [label, a, b] : pairs) s.tasks.push_back({0, label, a, b, std::nullopt, std::nullopt});
  }
  return s;
}

struct Outcome {
  double value = nan;
  double ms = 0.0;
  std::string status = "ok";
  bool solver_failure = false;
};

template <class F>
Outcome timed(F f) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    o.value = f();
  } catch (const SolverError& e) {
    o.status = e.what();
    o.solver_failure = true;
  } catch (const Error& e) {
    o.status = e.what();
  }
  o.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

// outcomes[task][quantity] for one n
using Level = std::vector<std::vector<Outcome>>;

Level run_level(const Setup& s, const ExperimentSpec& spec, int n) {
  std::vector<std::unique_ptr<QuadratureContext>> ctx(s.cells.size());
  for (std::size_t i = 0; i < s.cells.size(); ++i)
    ctx[i] = std::make_unique<QuadratureContext>(build_grid(s.cells[i], n, spec.sigma), spec.solver);
  Level out;
  for (const Task& t : s.tasks) {
    const QuadratureContext& c = *ctx[t.cell];
    std::vector<Outcome> q;
    q.push_back(timed([&] { return l2_product(t.a, t.b, c); }));
    if (!t.area) q.push_back(timed([&] { return h1_product(t.a, t.b, c); }));
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  validate_spec(spec);
  const Setup s = make_setup(spec);
  std::vector<Level> levels(spec.ns.size());
  if (spec.jobs == 1) {
    for (std::size_t i = 0; i < spec.ns.size(); ++i) levels[i] = run_level(s, spec, spec.ns[i]);
  } else {
    for (std::size_t start = 0; start < spec.ns.size(); start += static_cast<std::size_t>(spec.jobs)) {
      std::vector<std::future<Level>> batch;
      const std::size_t stop = std::min(spec.ns.size(), start + static_cast<std::size_t>(spec.jobs));
      for (std::size_t i = start; i < stop; ++i)
        batch.push_back(std::async(std::launch::async, [&, i] { return run_level(s, spec, spec.ns[i]); }));
      for (std::size_t i = start; i < stop; ++i) levels[i] = batch[i - start].get();
    }
  }

  std::vector<ResultRow> rows;
  for (std::size_t ti = 0; ti < s.tasks.size(); ++ti) {
    const Task& t = s.tasks[ti];
    const std::size_t nq = t.area ? 1 : 2;
    for (std::size_t qi = 0; qi < nq; ++qi) {
      const std::optional<ReferenceValue>& ref = qi == 0 ? t.l2 : t.h1;
      for (std::size_t i = 0; i < spec.ns.size(); ++i) {
        const Outcome& o = levels[i][ti][qi];
        ResultRow r;
        r.experiment = spec.experiment;
        r.cell = s.cells[t.cell].name();
        r.pair = t.pair;
        r.quantity = t.area ? "area" : (qi == 0 ? "L2" : "H1");
        r.n = spec.ns[i];
        r.sigma = spec.sigma;
        r.computed = o.value;
        r.runtime_ms = o.ms;
        r.status = o.status;
        r.solver_failure = o.solver_failure;
        if (ref) {
          r.reference = ref->value;
          r.provenance = ref->provenance;
          r.abs_error = std::abs(o.value - ref->value);
        } else {
          r.reference = nan;
          r.provenance = Provenance::none;
          r.abs_error = i == 0 ? nan : std::abs(o.value - levels[i - 1][ti][qi].value);
        }
        rows.push_back(std::move(r));
      }
    }
  }
  return rows;
}

namespace {

std::string fmt17(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::series: return "series";
    case Provenance::none: return "none";
  }
  return "none";
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "experiment,cell,pair,quantity,n,sigma,computed,reference,provenance,abs_error,runtime_ms,status\n";
  for (const auto& r : rows) {
    std::ostringstream ms;
    ms << std::fixed << std::setprecision(3) << r.runtime_ms;
    out << csv_field(r.experiment) << ',' << csv_field(r.cell) << ',' << csv_field(r.pair) << ',' << r.quantity << ','
        << r.n << ',' << r.sigma << ',' << fmt17(r.computed) << ',' << fmt17(r.reference) << ','
        << provenance_name(r.provenance) << ',' << fmt17(r.abs_error) << ',' << ms.str() << ','
        << csv_field(r.status) << '\n';
  }
}

void write_markdown(std::ostream& out, const std::vector<ResultRow>& rows) {
  // pivot quantities into columns, keeping first-seen order of experiments, pairs and n
  std::vector<std::string> experiments;
  for (const auto& r : rows)
    if (std::find(experiments.begin(), experiments.end(), r.experiment) == experiments.end())
      experiments.push_back(r.experiment);
  for (const auto& e : experiments) {
    std::vector<std::string> quantities;
    std::vector<std::tuple<std::string, std::string, int>> keys;
    std::map<std::tuple<std::string, std::string, int, std::string>, const ResultRow*> cell;
    bool self_convergence = false;
    for (const auto& r : rows) {
      if (r.experiment != e) continue;
      if (std::find(quantities.begin(), quantities.end(), r.quantity) == quantities.end())
        quantities.push_back(r.quantity);
      const auto key = std::make_tuple(r.cell, r.pair, r.n);
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
      cell[{r.cell, r.pair, r.n, r.quantity}] = &r;
      self_convergence = self_convergence || r.provenance == Provenance::none;
    }
    out << "### " << e << "\n\n| cell | pair | n |";
    for (const auto& q : quantities) out << ' ' << q << " computed | " << q << (self_convergence ? " diff |" : " error |");
    out << "\n|---|---|---|";
    for (std::size_t i = 0; i < quantities.size(); ++i) out << "---|---|";
    out << '\n';
    for (const auto& [c, p, n] : keys) {
      out << "| " << c << " | " << p << " | " << n << " |";
      for (const auto& q : quantities) {
        auto it = cell.find({c, p, n, q});
        if (it == cell.end()) {
          out << " | |";
          continue;
        }
        const ResultRow& r = *it->second;
        std::ostringstream a, b;
        a << std::setprecision(9) << r.computed;
        if (!std::isnan(r.abs_error)) b << std::scientific << std::setprecision(4) << r.abs_error;
        if (r.status != "ok") b << " (" << r.status << ')';
        out << ' ' << a.str() << " | " << b.str() << " |";
      }
      out << '\n';
    }
    out << '\n';
  }
}

std::vector<GoldenEntry> parse_golden(std::istream& in) {
  std::vector<GoldenEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    GoldenEntry g;
    if (!(ls >> g.experiment)) continue;
    if (!(ls >> g.pair >> g.quantity >> g.n >> g.max_abs_error))
      throw DomainError("golden manifest line " + std::to_string(lineno) + ": expected 5 fields");
    out.push_back(g);
  }
  return out;
}

std::vector<GoldenEntry> load_golden(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open golden manifest " + path);
  return parse_golden(in);
}

std::vector<std::string> check_golden(const std::vector<ResultRow>& rows, const std::vector<GoldenEntry>& golden) {
  std::vector<std::string> bad;
  for (const auto& g : golden) {
    for (const auto& r : rows) {
      if (r.experiment != g.experiment || r.pair != g.pair || r.quantity != g.quantity || r.n != g.n) continue;
      if (r.status != "ok" || !(r.abs_error <= g.max_abs_error)) {
        std::ostringstream os;
        os << g.experiment << ' ' << g.pair << ' ' << g.quantity << " n=" << g.n << ": " << std::setprecision(5)
           << r.abs_error << " > " << g.max_abs_error;
        if (r.status != "ok") os << " (" << r.status << ')';
        bad.push_back(os.str());
      }
    }
  }
  return bad;
}

}  // namespace curvquad::bench
