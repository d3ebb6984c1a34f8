#pragma once

// The bernphase command-line front end. Everything funnels through run() so
// that tests can drive it with captured streams.
//
// Exit status: 0 success, 2 invalid input, 3 no result (no block length, no
// crossing), 4 budget exceeded.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bernphase/bernphase.hpp"

namespace bernphase::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNoResult = 3;
inline constexpr int kExitBudget = 4;

namespace detail {

struct MeasureFlag {
  std::string name;
  std::string inline_text;
  std::string file;
};

inline std::vector<double> parse_weight_list(const std::string& text) {
  std::vector<double> w;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      w.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      bernphase::detail::fail(ErrorKind::InvalidInput, "cannot parse weight '" + tok + "'");
    }
  }
  if (w.empty()) bernphase::detail::fail(ErrorKind::InvalidInput, "empty weight list");
  return w;
}

class Context {
 public:
  Context(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  void add_measure(CLI::App* app, MeasureFlag& flag, const std::string& what) {
    app->add_option("--" + flag.name, flag.inline_text, what + " as comma-separated weights");
    app->add_option("--" + flag.name + "-file", flag.file, what + " as a JSON file {\"weights\": [...]}");
  }

  DiscreteMeasure measure(const MeasureFlag& flag) {
    if (!flag.inline_text.empty() && !flag.file.empty()) {
      err_ << "warning: --" << flag.name << " given inline and as --" << flag.name
           << "-file; using the inline weights\n";
    }
    try {
      if (!flag.inline_text.empty()) return DiscreteMeasure::make(parse_weight_list(flag.inline_text));
      if (!flag.file.empty()) return load_measure(flag.file);
    } catch (const Error& e) {
      bernphase::detail::fail(e.kind(), "--" + flag.name + ": " + e.message());
    }
    bernphase::detail::fail(ErrorKind::InvalidInput, "missing required measure --" + flag.name);
  }

  bool has(const MeasureFlag& flag) const { return !flag.inline_text.empty() || !flag.file.empty(); }

  void emit(const std::string& text) {
    if (out_path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) bernphase::detail::fail(ErrorKind::InvalidInput, "--out: cannot write " + out_path);
    f << text;
  }
  void emit(const Json& j) { emit(dump(j)); }

  std::ostream& err() { return err_; }

  std::string out_path;
  std::string format = "json";

 private:
  std::ostream& out_;
  std::ostream& err_;
};

inline TreeSpec parse_tree(const std::string& text) {
  try {
    return TreeSpec::parse(text);
  } catch (const Error& e) {
    bernphase::detail::fail(e.kind(), "--tree: " + e.message());
  }
}

/// delta from --delta when given, else the Poincare exponent of --tree.
inline double resolve_delta(const std::optional<double>& delta, const std::string& tree) {
  if (delta) return *delta;
  if (tree.empty()) bernphase::detail::fail(ErrorKind::InvalidInput, "one of --delta or --tree is required");
  return poincare_exponent(parse_tree(tree));
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using detail::MeasureFlag;
  detail::Context ctx(out, err);
  CLI::App app{"Phase transitions of nonsingular Bernoulli actions on trees and free groups", "bernphase"};
  app.require_subcommand(1);
  app.add_option("--out", ctx.out_path, "write the result to this file instead of stdout");

  MeasureFlag mu{"mu", {}, {}}, nu{"nu", {}, {}}, mu0{"mu0", {}, {}}, mu1{"mu1", {}, {}};
  std::string tree;
  std::optional<double> delta, affinity_opt;
  double t = 0.5;
  int depth = 0, trials = 0, mmax = 64, grid = 1001, window = 256;
  std::optional<int> block_M, mc_trials;
  int mc_depth = 14;
  std::uint64_t seed = 0, samples = 100000;
  unsigned threads = 0;
  double bisect_tol = 1e-12, epsilon = kDefaultCauchyEpsilon;
  std::size_t atom_cap = kDefaultAtomCap;
  std::uint64_t vertex_cap = kDefaultVertexCap;
  std::vector<double> generators;
  bool full_orbit = false;
  int d = 0;

  const auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", ctx.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  };
  const auto add_mc = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "master seed (default 0)");
    sub->add_option("--threads", threads, "worker threads (default: $BERNPHASE_THREADS, else all cores)");
  };

  auto* hellinger = app.add_subcommand("hellinger", "squared Hellinger distance and affinity of two measures");
  ctx.add_measure(hellinger, mu, "first measure");
  ctx.add_measure(hellinger, nu, "second measure");

  auto* mixc = app.add_subcommand("mix", "the interpolated measure (1-t) nu + t mu");
  ctx.add_measure(mixc, nu, "base measure nu");
  ctx.add_measure(mixc, mu, "measure mu");
  mixc->add_option("--t", t, "interpolation parameter in [0,1]");

  auto* chernoff = app.add_subcommand("chernoff", "law of Z = X + Y and the minimum of its MGF on [0,1]");
  ctx.add_measure(chernoff, mu0, "mu0");
  ctx.add_measure(chernoff, mu1, "mu1");
  chernoff->add_option("--atom-cap", atom_cap, "maximum number of atoms");

  auto* range = app.add_subcommand("range-group", "closed subgroup generated by log-ratio differences");
  ctx.add_measure(range, mu0, "mu0");
  ctx.add_measure(range, mu1, "mu1");
  range->add_option("--generator", generators, "extra generators (log modular values)");

  auto* poincare = app.add_subcommand("poincare", "Poincare exponent of a tree, exact and from sphere counts");
  poincare->add_option("--tree", tree, "regular:q or cayley:d")->required();
  poincare->add_option("--depth", depth, "radius for the sphere-count estimate")->default_val(12);

  auto* classify = app.add_subcommand("classify", "dissipative / weakly mixing verdict at exp(-delta/2)");
  classify->add_option("--tree", tree, "regular:q or cayley:d (sets delta)");
  classify->add_option("--delta", delta, "Poincare exponent, overrides --tree");
  ctx.add_measure(classify, mu0, "mu0");
  ctx.add_measure(classify, mu1, "mu1");
  classify->add_option("--affinity", affinity_opt, "affinity instead of a measure pair");
  classify->add_flag("--full-orbit", full_orbit, "the group has the full vertex orbit of a regular tree");

  auto* krieger = app.add_subcommand("krieger", "Krieger type and flow of weights");
  ctx.add_measure(krieger, mu0, "mu0");
  ctx.add_measure(krieger, mu1, "mu1");
  krieger->add_option("--modular", generators, "log modular-function values generating Delta(G)");
  krieger->add_option("--tree", tree, "also classify on this tree");
  krieger->add_option("--delta", delta, "also classify at this exponent");

  auto* spectral = app.add_subcommand("spectral", "spectral radius of the Koopman average on F_d");
  spectral->add_option("--d", d, "rank of the free group");
  spectral->add_option("--tree", tree, "cayley:d instead of --d");
  ctx.add_measure(spectral, mu0, "mu0");
  ctx.add_measure(spectral, mu1, "mu1");
  spectral->add_option("--affinity", affinity_opt, "affinity instead of a measure pair");

  auto* scan = app.add_subcommand("phase-scan", "locate t1 along (1-t) nu + t mu_i");
  scan->add_option("--tree", tree, "regular:q or cayley:d (sets delta)");
  scan->add_option("--delta", delta, "Poincare exponent, overrides --tree");
  ctx.add_measure(scan, nu, "base measure nu");
  ctx.add_measure(scan, mu0, "mu0");
  ctx.add_measure(scan, mu1, "mu1");
  scan->add_option("--grid", grid, "grid points on [0,1]");
  scan->add_option("--bisect-tol", bisect_tol, "bisection tolerance on t");
  add_format(scan);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo diagnostics");
  simulate->require_subcommand(1);

  auto* mart = simulate->add_subcommand("martingale", "sphere martingale W_n over independent fields");
  mart->add_option("--tree", tree, "regular:q or cayley:d")->required();
  ctx.add_measure(mart, mu0, "mu0");
  ctx.add_measure(mart, mu1, "mu1");
  mart->add_option("--depth", depth, "largest sphere radius")->default_val(8);
  mart->add_option("--trials", trials, "independent fields")->default_val(10000);
  add_mc(mart);

  auto* rec = simulate->add_subcommand("recurrence", "growth of the orbit sums T_n");
  rec->add_option("--tree", tree, "regular:q or cayley:d")->required();
  ctx.add_measure(rec, mu0, "mu0");
  ctx.add_measure(rec, mu1, "mu1");
  rec->add_option("--depth", depth, "ball radius")->default_val(12);
  rec->add_option("--trials", trials, "independent fields")->default_val(200);
  rec->add_option("--epsilon", epsilon, "Cauchy tolerance on the last relative increment");
  rec->add_option("--vertex-cap", vertex_cap, "maximum ball size");
  add_mc(rec);
  add_format(rec);

  auto* coup = simulate->add_subcommand("coupling", "chi-square test of the coupling pushforward");
  ctx.add_measure(coup, nu, "base measure nu");
  ctx.add_measure(coup, mu, "measure mu");
  coup->add_option("--t", t, "interpolation parameter in [0,1]");
  coup->add_option("--samples", samples, "number of draws (>= 1000)");
  coup->add_option("--seed", seed, "master seed (default 0)");

  auto* shift = simulate->add_subcommand("shift", "orbit-sum growth for the Z-shift family");
  shift->add_option("--t", t, "family parameter t >= 0");
  shift->add_option("--window", window, "coordinates |n| <= window enter the product");
  shift->add_option("--trials", trials, "independent configurations")->default_val(100);
  shift->add_option("--epsilon", epsilon, "Cauchy tolerance on the last relative increment");
  add_mc(shift);
  add_format(shift);

  auto* perc = app.add_subcommand("percolation", "block percolation criterion and survival");
  perc->add_option("--tree", tree, "regular:q or cayley:d")->required();
  ctx.add_measure(perc, mu0, "mu0");
  ctx.add_measure(perc, mu1, "mu1");
  perc->add_option("--M", block_M, "block length (default: smallest admissible up to --mmax)");
  perc->add_option("--mmax", mmax, "search bound for the block length");
  perc->add_option("--mc-trials", mc_trials, "Monte Carlo trials for the survival estimate");
  perc->add_option("--mc-depth", mc_depth, "derived generations the cluster must reach");
  perc->add_option("--atom-cap", atom_cap, "maximum number of atoms");
  perc->add_option("--vertex-cap", vertex_cap, "maximum cluster size");
  add_mc(perc);

  auto* block = app.add_subcommand("block-length", "smallest M with P(R_M >= 0) > exp(-M delta)");
  ctx.add_measure(block, mu0, "mu0");
  ctx.add_measure(block, mu1, "mu1");
  block->add_option("--tree", tree, "regular:q or cayley:d (sets delta)");
  block->add_option("--delta", delta, "Poincare exponent, overrides --tree");
  block->add_option("--mmax", mmax, "search bound");
  block->add_option("--atom-cap", atom_cap, "maximum number of atoms");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  const auto pair = [&] { return MeasurePair(ctx.measure(mu0), ctx.measure(mu1)); };
  const auto affinity_input = [&] {
    if (affinity_opt) {
      if (ctx.has(mu0) || ctx.has(mu1)) ctx.err() << "warning: --affinity given; ignoring the measure pair\n";
      return *affinity_opt;
    }
    return pair().affinity();
  };

  try {
    if (*hellinger) {
      const auto a = ctx.measure(mu), b = ctx.measure(nu);
      ctx.emit(Json{{"h2", hellinger_sq(a, b)}, {"affinity", affinity(a, b)}});
    } else if (*mixc) {
      ctx.emit(Json{{"t", t}, {"weights", to_json(mix(ctx.measure(nu), ctx.measure(mu), t))["weights"]}});
    } else if (*chernoff) {
      const auto p = pair();
      const auto z = convolve(log_ratio_distribution(p, Direction::TowardRoot),
                              log_ratio_distribution(p, Direction::AwayFromRoot), atom_cap);
      const auto m = chernoff_min(z);
      ctx.emit(Json{{"t_star", m.t_star},
                    {"value", m.value},
                    {"affinity_sq", p.affinity() * p.affinity()},
                    {"distribution", to_json(z)}});
    } else if (*range) {
      ctx.emit(to_json(essential_range_group(pair(), generators)));
    } else if (*poincare) {
      const auto spec = detail::parse_tree(tree);
      if (depth < 2) bernphase::detail::fail(ErrorKind::ParameterOutOfRange, "--depth must be >= 2");
      std::vector<std::uint64_t> counts;
      for (int n = 0; n <= depth; ++n) counts.push_back(sphere_size(spec, n));
      ctx.emit(Json{{"tree", spec.to_string()},
                    {"delta", poincare_exponent(spec)},
                    {"estimate", estimate_exponent(counts, depth / 2, depth)},
                    {"sphere_sizes", counts}});
    } else if (*classify) {
      const double dl = detail::resolve_delta(delta, tree);
      bool regular = false;
      if (full_orbit) {
        if (tree.empty() || detail::parse_tree(tree).kind() != TreeKind::Regular) {
          bernphase::detail::fail(ErrorKind::InvalidInput, "--full-orbit requires --tree regular:q");
        }
        regular = true;
      }
      ctx.emit(to_json(classify_tree_action(dl, affinity_input(), regular)));
    } else if (*krieger) {
      const auto p = pair();
      Json j = to_json(krieger_type(p, generators));
      if (delta || !tree.empty()) {
        j["classification"] = to_json(classify_tree_action(detail::resolve_delta(delta, tree), p, false));
      }
      ctx.emit(j);
    } else if (*spectral) {
      int rank = d;
      if (!tree.empty()) {
        const auto spec = detail::parse_tree(tree);
        if (spec.kind() != TreeKind::Cayley) {
          bernphase::detail::fail(ErrorKind::SpecMismatch, "--tree: spectral needs cayley:d");
        }
        rank = spec.parameter();
      }
      if (rank == 0) bernphase::detail::fail(ErrorKind::InvalidInput, "one of --d or --tree is required");
      ctx.emit(to_json(spectral_radius_free(rank, affinity_input())));
    } else if (*scan) {
      const auto r = phase_scan(detail::resolve_delta(delta, tree), ctx.measure(nu), pair(), grid, bisect_tol);
      if (ctx.format == "csv") {
        ctx.emit(phase_scan_csv(r));
      } else {
        ctx.emit(to_json(r));
      }
      if (!r.t1) {
        ctx.err() << "no single crossing of the threshold (" << r.crossings << " crossings)\n";
        return kExitNoResult;
      }
    } else if (*mart) {
      const auto st = martingale_study(detail::parse_tree(tree), pair(), depth, trials, seed, threads);
      ctx.emit(to_json(st));
    } else if (*rec) {
      RecurrenceOptions opt;
      opt.epsilon = epsilon;
      opt.threads = threads;
      opt.vertex_cap = vertex_cap;
      const auto spec = detail::parse_tree(tree);
      const auto p = pair();
      const auto r = recurrence_diagnostic(spec, p, depth, trials, seed, opt);
      if (ctx.format == "csv") {
        ctx.emit(recurrence_csv(r));
      } else {
        Json j = to_json(r);
        j["theorem"] = to_json(classify_tree_action(poincare_exponent(spec), p, spec.kind() == TreeKind::Regular));
        ctx.emit(j);
      }
    } else if (*coup) {
      ctx.emit(to_json(coupling_pushforward_test(ctx.measure(nu), ctx.measure(mu), t, samples, seed)));
    } else if (*shift) {
      RecurrenceOptions opt;
      opt.epsilon = epsilon;
      opt.threads = threads;
      const auto r = shift_recurrence_diagnostic(t, window, trials, seed, opt);
      ctx.emit(ctx.format == "csv" ? recurrence_csv(r) : dump(to_json(r)));
    } else if (*perc) {
      const auto spec = detail::parse_tree(tree);
      const auto p = pair();
      int M = 0;
      if (block_M) {
        M = *block_M;
      } else {
        const auto b = find_block_length(p, poincare_exponent(spec), mmax, atom_cap);
        if (!b.M) {
          Json j = to_json(b);
          j["reason"] = to_string(b.status);
          ctx.emit(j);
          return kExitNoResult;
        }
        M = *b.M;
      }
      PercolationOptions opt;
      opt.mc_trials = mc_trials;
      opt.mc_depth = mc_depth;
      opt.seed = seed;
      opt.threads = threads;
      opt.atom_cap = atom_cap;
      opt.vertex_cap = vertex_cap;
      ctx.emit(to_json(percolation_report(spec, p, M, opt)));
    } else if (*block) {
      const auto b = find_block_length(pair(), detail::resolve_delta(delta, tree), mmax, atom_cap);
      Json j = to_json(b);
      if (!b.M) j["reason"] = to_string(b.status);
      ctx.emit(j);
      if (!b.M) return kExitNoResult;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_budget() ? kExitBudget : kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace bernphase::cli
