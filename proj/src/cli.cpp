#include "felab/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "felab/acceptance.hpp"
#include "felab/errors.hpp"
#include "felab/functional.hpp"
#include "felab/io.hpp"
#include "felab/parallel.hpp"
#include "felab/perturbation.hpp"
#include "felab/radial_kernels.hpp"
#include "felab/search.hpp"
#include "felab/spectral.hpp"

namespace felab {

namespace {

struct Globals {
  double tol = 0.0;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir;
  bool quiet = false;

  QuadratureConfig quad() const {
    QuadratureConfig c;
    if (tol > 0.0) {
      c.abs_tol = tol;
      c.rel_tol = tol;
    }
    return c;
  }
};

// Data for standard output plus any extra files, keyed by file name.
struct Output {
  std::string name;  // file name used under --out-dir
  std::ostringstream data;
  std::vector<std::pair<std::string, std::string>> extra;
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size()) throw CLI::ValidationError("list", "not a number: '" + item + "'");
    v.push_back(x);
  }
  if (v.empty()) throw CLI::ValidationError("list", "empty list");
  return v;
}

KernelKind parse_kind(const std::string& s) {
  if (s == "K") return KernelKind::K;
  if (s == "L") return KernelKind::L;
  throw CLI::ValidationError("--kind", "expected K or L");
}

json result_json(const IntegralResult& r) {
  return {{"value", r.value}, {"error", r.error_estimate}, {"converged", r.converged}};
}

json report_json(const ExpansionReport& r) {
  return {{"q", r.q},
          {"d", r.d},
          {"direct", r.direct},
          {"base", r.base},
          {"term_K", r.term_K},
          {"term_LL", r.term_LL},
          {"term_Lrefl", r.term_Lrefl},
          {"residual", r.residual},
          {"residual_error", r.residual_error},
          {"symdiff", r.symdiff},
          {"remainder", to_string(r.remainder)}};
}

std::string csv_row(const std::vector<double>& row) {
  std::ostringstream os;
  write_csv_row(os, row);
  return os.str();
}

}  // namespace

int dispatch(const std::vector<std::string>& argv) {
  const auto t0 = std::chrono::steady_clock::now();
  Globals g;
  CLI::App app{"Numerical laboratory for the Fourier extension functional of indicator sets", "felab"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", FELAB_VERSION);
  app.add_option("--tol", g.tol, "Quadrature tolerance (absolute and relative)")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--threads", g.threads, "Thread budget (default: FELAB_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out-dir", g.out_dir, "Write outputs and a run manifest to this directory");
  app.add_flag("--quiet", g.quiet, "Silence diagnostics");

  Output out;
  std::function<void()> action;
  auto diag = [&]() -> std::ostream& {
    static std::ostringstream sink;
    sink.str("");
    return g.quiet ? static_cast<std::ostream&>(sink) : std::cerr;
  };

  // kernel
  std::string kind = "L";
  int d = 2;
  double q = 4.0, r = -1.0, rmax = 0.0;
  int samples = 257;
  auto* kernel = app.add_subcommand("kernel", "Radial kernel K_q or L_q: a value (--r) or a CSV profile");
  kernel->add_option("--kind", kind, "K or L")->check(CLI::IsMember({"K", "L"}));
  kernel->add_option("--d", d)->check(CLI::Range(1, 3));
  kernel->add_option("--q", q);
  kernel->add_option("--r", r, "Single radius");
  kernel->add_option("--rmax", rmax, "Profile range (default max(q, 4))");
  kernel->add_option("--samples", samples)->check(CLI::Range(2, 100000));
  kernel->callback([&] {
    action = [&] {
      const KernelKind k = parse_kind(kind);
      if (r >= 0.0) {
        out.name = "kernel.json";
        json j = result_json(kernel_value(k, d, q, r, g.quad()));
        j["r"] = r;
        out.data << j.dump(2) << "\n";
      } else {
        out.name = "kernel.csv";
        write_profile_csv(out.data, kernel_profile(k, d, q, rmax > 0.0 ? rmax : std::max(q, 4.0), samples, g.quad()));
      }
    };
  });

  // gamma
  bool as_json = false;
  auto* gamma = app.add_subcommand("gamma", "gamma_{q,d} = -K_q'(1)");
  gamma->add_option("--d", d)->check(CLI::Range(1, 3));
  gamma->add_option("--q", q);
  gamma->add_flag("--json", as_json);
  gamma->callback([&] {
    action = [&] {
      const IntegralResult res = gamma_qd(d, q, g.quad());
      if (as_json) {
        out.name = "gamma.json";
        out.data << result_json(res).dump(2) << "\n";
      } else {
        out.name = "gamma.txt";
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.6f \xC2\xB1 %.1e\n", res.value, res.error_estimate);
        out.data << buf;
      }
    };
  });

  // first-variation
  int grid = 256;
  auto* fv = app.add_subcommand("first-variation", "Check K_q >= K_q(outside) on cell-centered grids");
  fv->add_option("--d", d)->check(CLI::Range(1, 3));
  fv->add_option("--q", q);
  fv->add_option("--grid", grid)->check(CLI::Range(2, 100000));
  fv->add_option("--rmax", rmax, "Outer grid range [1, rmax] (default 4)");
  fv->callback([&] {
    action = [&] {
      const auto res = first_variation_check(d, q, cell_centered_grid(0.0, 1.0, grid),
                                             cell_centered_grid(1.0, rmax > 1.0 ? rmax : 4.0, grid), g.quad());
      out.name = "first_variation.json";
      out.data << json{{"inner_min", res.inner_min},
                       {"outer_max", res.outer_max},
                       {"margin", res.margin},
                       {"error_bound", res.error_bound},
                       {"satisfied", res.satisfied}}
                      .dump(2)
               << "\n";
    };
  });

  // phi
  std::string set_file;
  bool oracle = false;
  auto* phi = app.add_subcommand("phi", "Phi_q of a set file");
  phi->add_option("--set", set_file)->required()->check(CLI::ExistingFile);
  phi->add_option("--q", q);
  phi->add_flag("--oracle", oracle, "Use the even-q convolution oracle");
  phi->callback([&] {
    action = [&] {
      const SetModel E = read_set_file(set_file);
      PhiResult res;
      if (oracle) {
        if (q != std::round(q)) throw DomainError("--oracle needs an even integer q");
        res = phi_even_oracle(E, static_cast<int>(q));
      } else {
        res = phi_q(E, q, g.quad());
      }
      out.name = "phi.json";
      out.data << json{{"phi", res.phi},
                       {"norm_q_pow_q", res.norm_q_pow_q},
                       {"error", res.error_estimate},
                       {"method", to_string(res.method)},
                       {"converged", res.converged}}
                      .dump(2)
               << "\n";
    };
  });

  // expand
  auto* expand = app.add_subcommand("expand", "Expansion of ||1_E^||_q^q about the ball");
  expand->add_option("--set", set_file)->required()->check(CLI::ExistingFile);
  expand->add_option("--q", q);
  expand->callback([&] {
    action = [&] {
      out.name = "expand.json";
      out.data << report_json(expansion_report(read_set_file(set_file), q, g.quad())).dump(2) << "\n";
    };
  });

  // expand-sweep
  std::string family = "sliver", eps_text = "0.08,0.04,0.02,0.01";
  auto* sweep = app.add_subcommand("expand-sweep", "Expansion reports along a named family, with the remainder slope");
  sweep->add_option("--family", family, "sliver | translate | mode:k | corona:seed");
  sweep->add_option("--d", d)->check(CLI::Range(1, 2));
  sweep->add_option("--q", q);
  sweep->add_option("--eps", eps_text, "Decreasing comma-separated epsilons");
  sweep->callback([&] {
    action = [&] {
      const SlopeResult s = remainder_slope(named_family(family, d), q, parse_list(eps_text), g.quad());
      out.name = "expand_sweep.csv";
      out.data << "eps,direct,base,term_K,term_LL,term_Lrefl,residual\n";
      for (std::size_t i = 0; i < s.eps.size(); ++i) {
        const auto& rep = s.reports[i];
        write_csv_row(out.data, {s.eps[i], rep.direct, rep.base, rep.term_K, rep.term_LL, rep.term_Lrefl, rep.residual});
      }
      diag() << "remainder slope " << fmt17(s.slope) << (s.noise_limited ? " (noise-limited)" : "") << "\n";
    };
  });

  // spectrum
  int modes = 12;
  auto* spectrum = app.add_subcommand("spectrum", "Mode margins of the second variation at the ball");
  spectrum->add_option("--d", d)->check(CLI::Range(1, 3));
  spectrum->add_option("--q", q);
  spectrum->add_option("--modes", modes)->check(CLI::Range(0, 10000));
  spectrum->callback([&] {
    action = [&] {
      const ModeSpectrum s = mode_margins(d, q, modes, g.quad());
      out.name = "spectrum.csv";
      out.data << "n,ell_hat,combined,margin\n";
      for (const auto& m : s.modes) out.data << m.n << "," << csv_row({m.ell_hat, m.combined, m.margin});
      out.data << "gamma," << fmt17(s.gamma) << ",stability_constant," << fmt17(s.stability_constant) << "\n";
    };
  });

  // balance
  auto* bal = app.add_subcommand("balance", "Affine normalization killing the degree <= 2 moments");
  bal->add_option("--set", set_file)->required()->check(CLI::ExistingFile);
  bal->callback([&] {
    action = [&] {
      const BalanceResult b = balance(read_set_file(set_file));
      out.name = "balance.json";
      out.data << json{{"map", affine_to_json(b.map)},
                       {"residual", b.residual},
                       {"iterations", b.iterations},
                       {"balanced", set_to_json(b.balanced)}}
                      .dump(2)
               << "\n";
    };
  });

  // dist
  auto* dist = app.add_subcommand("dist", "Normalized distance to equal-measure ellipsoids");
  dist->add_option("--set", set_file)->required()->check(CLI::ExistingFile);
  dist->callback([&] {
    action = [&] {
      const DistResult res = dist_to_ellipsoids(read_set_file(set_file));
      out.name = "dist.json";
      out.data << json{{"distance", res.distance}, {"best", affine_to_json(res.best)}, {"converged", res.converged}}
                      .dump(2)
               << "\n";
    };
  });

  // search
  std::string family_spec = "intervals:2", start;
  int restarts = 20;
  long budget = 200;
  double anneal = 0.0;
  auto* search = app.add_subcommand("search", "Randomized probe (or local ascent with --start) of Phi_q");
  search->add_option("--d", d)->check(CLI::Range(1, 2));
  search->add_option("--q", q);
  search->add_option("--family", family_spec, "intervals:k (d = 1) or star:N (d = 2)");
  search->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
  search->add_option("--budget", budget)->check(CLI::PositiveNumber);
  search->add_option("--start", start, "'ball' or a set file: run a local ascent from it");
  search->add_option("--anneal", anneal, "Simulated annealing temperature (default off)");
  search->callback([&] {
    action = [&] {
      SearchConfig c;
      c.q = q;
      c.family = Family::parse(family_spec);
      if (c.family.dimension() != d) throw DomainError("family " + c.family.name() + " does not live in d = " + std::to_string(d));
      c.restarts = restarts;
      c.budget = std::max<long>(budget, restarts);
      c.seed = g.seed;
      c.anneal_temperature = anneal;
      c.quad = g.tol > 0.0 ? g.quad() : search_quadrature(d);
      SearchResult res;
      if (start.empty()) {
        res = random_probe(c);
      } else {
        res = local_ascent(start == "ball" ? unit_ball(d) : read_set_file(start), c);
      }
      std::ostringstream traj;
      traj << "evaluation,best_phi\n";
      json tj = json::array();
      for (const auto& [i, p] : res.trajectory) {
        traj << i << "," << fmt17(p) << "\n";
        tj.push_back({i, p});
      }
      out.name = "search.json";
      out.data << json{{"best_set", set_to_json(res.best_set)},
                       {"best_phi", res.best_phi},
                       {"phi_ball", res.phi_ball},
                       {"gap", res.gap},
                       {"dist_ellipsoids", res.dist_ellipsoids},
                       {"evaluations", res.evaluations},
                       {"trajectory", tj}}
                      .dump(2)
               << "\n";
      out.extra.emplace_back("trajectory.csv", traj.str());
    };
  });

  // q-sweep
  std::string qs = "3.8,4,4.2";
  auto* qsweep = app.add_subcommand("q-sweep", "Ball value and best probed value across exponents");
  qsweep->add_option("--qs", qs, "Comma-separated exponents");
  qsweep->add_option("--d", d)->check(CLI::Range(1, 2));
  qsweep->add_option("--family", family_spec);
  qsweep->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
  qsweep->add_option("--budget", budget)->check(CLI::PositiveNumber);
  qsweep->callback([&] {
    action = [&] {
      SearchConfig c;
      c.family = Family::parse(family_spec);
      if (c.family.dimension() != d) throw DomainError("family " + c.family.name() + " does not live in d = " + std::to_string(d));
      c.restarts = restarts;
      c.budget = std::max<long>(budget, restarts);
      c.seed = g.seed;
      c.quad = g.tol > 0.0 ? g.quad() : search_quadrature(d);
      out.name = "q_sweep.csv";
      out.data << "q,phi_ball,best_phi,gap\n";
      for (const auto& row : q_sweep(parse_list(qs), c)) write_csv_row(out.data, {row.q, row.phi_ball, row.best_phi, row.gap});
    };
  });

  // verify
  bool all_pass = true;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite; exit 0 iff every criterion passes");
  verify->callback([&] {
    action = [&] {
      out.name = "verify.txt";
      for (const auto& c : run_acceptance(out.data)) all_pass = all_pass && c.pass;
    };
  });

  // First positional token, skipping the values of global options.
  for (std::size_t i = 1; i < argv.size(); ++i) {
    const std::string& a = argv[i];
    if (a == "--tol" || a == "--seed" || a == "--threads" || a == "--out-dir") {
      ++i;
      continue;
    }
    if (a.empty() || a[0] == '-') continue;
    if (app.get_subcommand_no_throw(a) == nullptr) {
      std::cerr << "error: unknown subcommand '" << a << "'\n\n" << app.help();
      return 3;
    }
    break;
  }

  try {
    std::vector<std::string> rev(argv.rbegin(), argv.rend() - (argv.empty() ? 0 : 1));
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 3;
  }

  if (g.threads > 0) set_thread_budget(g.threads);
  try {
    action();
  } catch (const ConvergenceError& e) {
    std::cerr << "error (no convergence): " << e.what() << " [last residual " << fmt17(e.last_residual()) << "]\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::cout << out.data.str() << std::flush;
  if (!g.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(g.out_dir);
    std::vector<std::string> written;
    auto write = [&](const std::string& name, const std::string& text) {
      const fs::path p = fs::path(g.out_dir) / name;
      std::ofstream f(p);
      f << text;
      if (!f) throw std::runtime_error("cannot write " + p.string());
      written.push_back(p.string());
    };
    write(out.name, out.data.str());
    for (const auto& [name, text] : out.extra) write(name, text);
    std::string cmd;
    for (const auto& a : argv) cmd += (cmd.empty() ? "" : " ") + a;
    const json manifest = {
        {"command_line", cmd},
        {"tool_version", FELAB_VERSION},
        {"seed", g.seed},
        {"quadrature", config_to_json(g.quad())},
        {"threads", thread_budget()},
        {"wall_time_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
        {"outputs", written}};
    // Written last so its presence marks a complete run.
    std::ofstream(std::filesystem::path(g.out_dir) / "manifest.json") << manifest.dump(2) << "\n";
  } else {
    for (const auto& [name, text] : out.extra)
      diag() << "note: " << name << " is written only with --out-dir\n";
  }
  if (!all_pass) return 1;
  return 0;
}

}  // namespace felab
