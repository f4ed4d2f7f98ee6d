#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "dssyk/edlab.hpp"
#include "dssyk/errors.hpp"
#include "dssyk/freeconv.hpp"
#include "dssyk/mixed.hpp"
#include "dssyk/moments.hpp"
#include "dssyk/qhermite.hpp"
#include "dssyk/version.hpp"

namespace {

using dssyk::qcore::MultiPoly;
using dssyk::qcore::Rational;
using dssyk::qcore::Var;

constexpr int kExitValidation = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitGuard = 4;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

struct Output {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> notes;
  std::string body;
};

struct Globals {
  std::string out_path;
  bool deterministic = false;
};

std::string render(const Output& o, const Globals& g) {
  std::ostringstream os;
  os << "# dssyk-lab " << dssyk::kVersion << '\n';
  os << "# command: " << o.command << '\n';
  os << "# params:";
  for (const auto& [k, v] : o.params) os << ' ' << k << '=' << v;
  os << '\n';
  for (const auto& n : o.notes) os << "# " << n << '\n';
  if (!g.deterministic) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    os << "# timestamp: " << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ") << '\n';
  }
  os << o.body;
  if (!o.body.empty() && o.body.back() != '\n') os << '\n';
  return os.str();
}

void emit(const Output& o, const Globals& g) {
  const std::string text = render(o, g);
  if (g.out_path.empty() || g.out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out_path, std::ios::binary);
  if (!f) throw dssyk::DomainError("cannot open output file " + g.out_path);
  f << text;
}

// Optional (q, qt, theta) substitution, given directly or derived from (N, p, k).
struct Specialization {
  std::optional<double> q, qt, theta;
  std::optional<int> N, p, k;

  void add_options(CLI::App* app, bool with_npk) {
    app->add_option("--q", q, "q value")->check(CLI::Range(-1.0, 1.0));
    app->add_option("--qtilde", qt, "qt value")->check(CLI::Range(-1.0, 1.0));
    app->add_option("--theta", theta, "perturbation strength");
    if (with_npk) {
      app->add_option("--N", N, "Majorana count (derives q and qt)");
      app->add_option("--p", p, "interaction degree");
      app->add_option("--k", k, "D_c has 2^(N/2-k) ones");
    }
  }

  // Exact values to substitute, keyed by variable.
  std::map<Var, Rational> resolve(Output& out) const {
    const bool direct = q || qt;
    const bool derived = N || p || k;
    if (direct && derived) throw dssyk::DomainError("give either --q/--qtilde or --N/--p/--k, not both");
    std::map<Var, Rational> subs;
    if (derived) {
      if (!(N && p && k)) throw dssyk::DomainError("--N, --p and --k must be given together");
      if (*p % 2 != 0 || *p < 2 || *p > *N) throw dssyk::DomainError("p must be even and lie in [2, N]");
      if (*N % 2 != 0 || *k < 0 || *k > *N / 2) throw dssyk::DomainError("N must be even and k must lie in [0, N/2]");
      subs[Var::q] = dssyk::ed::qn_finite(*p, *N);
      subs[Var::qt] = dssyk::ed::model_qtilde(*p, *N, *k);
      out.params.emplace_back("N", std::to_string(*N));
      out.params.emplace_back("p", std::to_string(*p));
      out.params.emplace_back("k", std::to_string(*k));
    }
    if (q) subs[Var::q] = Rational(*q);
    if (qt) subs[Var::qt] = Rational(*qt);
    if (theta) {
      if (!std::isfinite(*theta)) throw dssyk::DomainError("theta must be finite");
      subs[Var::theta] = Rational(*theta);
    }
    static const char* names[] = {"q", "qtilde", "theta"};
    for (const auto& [v, val] : subs) {
      out.params.emplace_back(names[static_cast<int>(v)], fmt(val.get_d()));
      if (derived && v != Var::theta)
        out.notes.push_back(std::string("using ") + names[static_cast<int>(v)] + " = " + val.get_str() + " = " +
                            fmt(val.get_d()));
    }
    return subs;
  }
};

MultiPoly apply(MultiPoly p, const std::map<Var, Rational>& subs) {
  for (const auto& [v, val] : subs) p = p.specialize(v, val);
  return p;
}

bool is_constant(const MultiPoly& p) {
  return p.degree(Var::q) <= 0 && p.degree(Var::qt) <= 0 && p.degree(Var::theta) <= 0;
}

std::string csv_join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt(v[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moments, spectra and free-probability checks for the SYK model with a constant perturbation"};
  app.set_version_flag("--version", std::string(dssyk::kVersion));
  app.require_subcommand(1, 1);
  app.fallthrough();
  Globals g;
  app.add_option("-o,--out", g.out_path, "output file (default stdout)");
  app.add_flag("--deterministic", g.deterministic, "omit the timestamp line");

  // moments
  auto* c_mom = app.add_subcommand("moments", "reduced moment table, symbolic JSON or numeric CSV");
  int mom_n = 0;
  bool mom_symbolic = false;
  Specialization mom_spec;
  c_mom->add_option("--n", mom_n, "largest order")->required()->check(CLI::Range(1, dssyk::moments::kMaxMomentOrder));
  c_mom->add_flag("--symbolic", mom_symbolic, "keep q, qt and theta symbolic");
  mom_spec.add_options(c_mom, true);

  // mixed
  auto* c_mix = app.add_subcommand("mixed", "mixed moment of a word in x and d");
  std::string mix_word;
  Specialization mix_spec;
  c_mix->add_option("--word", mix_word, "word over {x, d}")->required();
  mix_spec.add_options(c_mix, false);

  // ed and compare share the model flags
  dssyk::ed::ModelParams model;
  auto add_model = [&](CLI::App* c) {
    c->add_option("--N", model.N, "Majorana count")->check(CLI::Range(2, dssyk::ed::kMaxMajoranas));
    c->add_option("--p", model.p, "interaction degree");
    c->add_option("--k", model.k, "D_c has 2^(N/2-k) ones");
    c->add_option("--theta", model.theta, "perturbation strength");
    c->add_option("--samples", model.samples, "number of disorder samples")->check(CLI::PositiveNumber);
    c->add_option("--seed", model.seed, "64-bit seed");
  };
  auto* c_ed = app.add_subcommand("ed", "exact diagonalization: spectra, histogram or phase scan");
  add_model(c_ed);
  std::string ed_mode = "spectra";
  int ed_bins = 100;
  std::vector<double> ed_thetas;
  std::vector<int> ed_ks;
  double ed_threshold = 10.0;
  c_ed->add_option("--mode", ed_mode, "spectra, histogram or phase")
      ->check(CLI::IsMember({"spectra", "histogram", "phase"}));
  c_ed->add_option("--bins", ed_bins, "histogram bins")->check(CLI::PositiveNumber);
  c_ed->add_option("--thetas", ed_thetas, "theta grid for the phase scan")->delimiter(',');
  c_ed->add_option("--ks", ed_ks, "k grid for the phase scan")->delimiter(',');
  c_ed->add_option("--threshold", ed_threshold, "gap / median spacing ratio that flags bimodality");

  auto* c_cmp = app.add_subcommand("compare", "empirical vs analytic reduced moments");
  add_model(c_cmp);
  int cmp_n = 6;
  c_cmp->add_option("--n", cmp_n, "largest order")->check(CLI::Range(1, dssyk::moments::kMaxMomentOrder));

  // density
  auto* c_den = app.add_subcommand("density", "q-Gaussian density on a grid");
  double den_q = 0.0;
  int den_grid = 200;
  c_den->add_option("--q", den_q, "q")->required()->check(CLI::Range(0.0, dssyk::qhermite::kMaxNumericQ));
  c_den->add_option("--grid", den_grid, "number of points")->check(CLI::Range(2, 1000000));

  // freeconv
  auto* c_fc = app.add_subcommand("freeconv", "semicircle boxplus (1-r) delta_0 + r delta_theta");
  double fc_r = 0.25, fc_theta = 0.0;
  int fc_grid = 2000, fc_resample = 0;
  c_fc->add_option("--r", fc_r, "atom weight at theta")->check(CLI::Range(0.0, 1.0));
  c_fc->add_option("--theta", fc_theta, "atom location")->required();
  c_fc->add_option("--grid", fc_grid, "points per support component")->check(CLI::Range(8, 1000000));
  c_fc->add_option("--resample", fc_resample, "resample to a uniform grid of this many points (0 keeps the parametric grid)")
      ->check(CLI::Range(0, 1000000));

  // qtilde
  auto* c_qt = app.add_subcommand("qtilde", "finite-N q and qt values");
  int qt_N = 0, qt_p = 0, qt_k = 0;
  c_qt->add_option("--N", qt_N, "Majorana count")->required();
  c_qt->add_option("--p", qt_p, "interaction degree")->required();
  c_qt->add_option("--k", qt_k, "D_c has 2^(N/2-k) ones")->required();

  // zn
  auto* c_zn = app.add_subcommand("zn", "partition function Z_n");
  int zn_n = 1;
  double zn_beta = 1.0, zn_q = 0.0, zn_qt = 0.0;
  c_zn->add_option("--n", zn_n, "replica number")->check(CLI::Range(1, 64));
  c_zn->add_option("--beta", zn_beta, "inverse temperature")->check(CLI::Range(0.0, 1e6));
  c_zn->add_option("--q", zn_q, "q")->check(CLI::Range(0.0, dssyk::qhermite::kMaxNumericQ));
  c_zn->add_option("--qtilde", zn_qt, "qt")->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    Output out;
    int status = 0;
    if (*c_mom) {
      out.command = "moments";
      out.params.emplace_back("n", std::to_string(mom_n));
      const auto subs = mom_spec.resolve(out);
      if (mom_symbolic && !subs.empty()) throw dssyk::DomainError("--symbolic excludes numeric parameters");
      dssyk::moments::MomentTable table = dssyk::moments::moment_table(mom_n);
      bool numeric = !subs.empty();
      for (auto& v : table.values) {
        v = apply(v, subs);
        numeric = numeric && is_constant(v);
      }
      if (numeric) {
        std::ostringstream os;
        os << "n,m_n\n";
        for (int n = 1; n <= mom_n; ++n) os << n << ',' << fmt(table.at(n).eval(0.0, 0.0, 0.0)) << '\n';
        out.body = os.str();
      } else {
        table.params_note = subs.empty() ? "symbolic" : "partially specialized";
        out.body = dssyk::moments::to_json(table);
      }
    } else if (*c_mix) {
      out.command = "mixed";
      out.params.emplace_back("word", mix_word);
      const auto subs = mix_spec.resolve(out);
      const auto w = dssyk::mixed::Word::parse(mix_word);
      const auto res = dssyk::mixed::mixed_moment(w);
      const MultiPoly v = apply(res.value, subs);
      nlohmann::json j;
      j["word"] = w.to_string();
      j["text"] = v.to_string();
      j["poly"] = nlohmann::json::parse(dssyk::qcore::to_json(v));
      j["pairings"] = res.partition_count;
      if (is_constant(v)) j["value"] = v.eval(0.0, 0.0, 0.0);
      out.body = j.dump(2);
    } else if (*c_ed) {
      out.command = "ed";
      model.validate();
      out.params = {{"N", std::to_string(model.N)}, {"p", std::to_string(model.p)}, {"k", std::to_string(model.k)},
                    {"theta", fmt(model.theta)}, {"samples", std::to_string(model.samples)},
                    {"seed", std::to_string(model.seed)}, {"mode", ed_mode}};
      if (ed_mode == "phase") {
        if (ed_thetas.empty()) ed_thetas = {model.theta};
        if (ed_ks.empty()) ed_ks = {model.k};
        out.params.emplace_back("thetas", csv_join(ed_thetas));
        out.params.emplace_back("threshold", fmt(ed_threshold));
        out.body = dssyk::ed::phase_csv(dssyk::ed::phase_scan(model, ed_thetas, ed_ks, ed_threshold));
      } else {
        const auto spectra = dssyk::ed::sample_spectra(model, false);
        if (ed_mode == "spectra") {
          out.body = dssyk::ed::spectra_csv(spectra);
        } else {
          out.params.emplace_back("bins", std::to_string(ed_bins));
          out.body = dssyk::ed::histogram_csv(spectra, ed_bins);
        }
      }
    } else if (*c_cmp) {
      out.command = "compare";
      model.validate();
      out.params = {{"N", std::to_string(model.N)}, {"p", std::to_string(model.p)}, {"k", std::to_string(model.k)},
                    {"theta", fmt(model.theta)}, {"samples", std::to_string(model.samples)},
                    {"seed", std::to_string(model.seed)}, {"n", std::to_string(cmp_n)}};
      const Rational q = dssyk::ed::qn_finite(model.p, model.N);
      const Rational qt = dssyk::ed::model_qtilde(model.p, model.N, model.k);
      out.notes.push_back("using q = " + q.get_str() + " = " + fmt(q.get_d()) + ", qtilde = " + qt.get_str() + " = " +
                          fmt(qt.get_d()));
      const auto rows = dssyk::ed::compare_reduced_moments(dssyk::ed::sample_spectra(model, true), cmp_n);
      out.body = dssyk::ed::comparison_csv(rows);
      for (const auto& r : rows)
        if (r.n <= 6 && model.samples > 1 && !(std::abs(r.zscore) <= 5.0)) {
          std::cerr << "regression guard: |zscore| > 5 at n = " << r.n << '\n';
          status = kExitGuard;
        }
    } else if (*c_den) {
      out.command = "density";
      out.params = {{"q", fmt(den_q)}, {"grid", std::to_string(den_grid)}};
      const dssyk::qhermite::QGaussianQuadrature quad(den_q);
      const double edge = dssyk::qhermite::support_edge(den_q);
      std::ostringstream os;
      os << "x,density\n";
      for (int i = 0; i < den_grid; ++i) {
        const double x = -edge + 2.0 * edge * (i + 0.5) / den_grid;
        os << fmt(x) << ',' << fmt(quad.density(x)) << '\n';
      }
      out.body = os.str();
    } else if (*c_fc) {
      out.command = "freeconv";
      out.params = {{"r", fmt(fc_r)}, {"theta", fmt(fc_theta)}, {"grid", std::to_string(fc_grid)},
                    {"resample", std::to_string(fc_resample)}};
      const auto res = dssyk::freeconv::semicircle_plus_atomic(fc_r, fc_theta, fc_grid);
      out.notes.push_back("summary: " + dssyk::freeconv::summary_json(res));
      if (fc_theta > 0.0) {
        const auto e = dssyk::freeconv::outlier_location(
            fc_theta, [](double x) { return dssyk::freeconv::semicircle_resolvent(x).real(); }, 2.0);
        out.notes.push_back("small-r outlier prediction: " + (e ? fmt(*e) : std::string("none")));
      }
      out.body = dssyk::freeconv::density_csv(fc_resample > 0 ? dssyk::freeconv::resample_uniform(res.measure, fc_resample)
                                                              : res.measure);
    } else if (*c_qt) {
      out.command = "qtilde";
      out.params = {{"N", std::to_string(qt_N)}, {"p", std::to_string(qt_p)}, {"k", std::to_string(qt_k)}};
      std::ostringstream os;
      os << "quantity,exact,decimal\n";
      auto row = [&](const std::string& name, const Rational& v) {
        os << name << ',' << v.get_str() << ',' << fmt(v.get_d()) << '\n';
      };
      row("q_n", dssyk::ed::qn_finite(qt_p, qt_N));
      for (int j = 0; j < std::max(qt_k, 1); ++j) row("q_" + std::to_string(j), dssyk::ed::q_j(j, qt_p, qt_N));
      row("qtilde", dssyk::ed::model_qtilde(qt_p, qt_N, qt_k));
      if (qt_k >= 1) row("qtilde_quoted", dssyk::ed::qtilde_quoted(qt_p, qt_N, qt_k));
      out.body = os.str();
    } else if (*c_zn) {
      out.command = "zn";
      out.params = {{"n", std::to_string(zn_n)}, {"beta", fmt(zn_beta)}, {"q", fmt(zn_q)}, {"qtilde", fmt(zn_qt)}};
      out.body = "n,beta,q,qtilde,z\n" + std::to_string(zn_n) + ',' + fmt(zn_beta) + ',' + fmt(zn_q) + ',' + fmt(zn_qt) +
                 ',' + fmt(dssyk::moments::z_n(zn_n, zn_beta, zn_q, zn_qt)) + '\n';
    }
    emit(out, g);
    return status;
  } catch (const dssyk::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const dssyk::NonConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
