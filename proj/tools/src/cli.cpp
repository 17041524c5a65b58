#include "autobid_cli/cli.hpp"

#include "autobid/cover.hpp"
#include "autobid/equilibrium.hpp"
#include "autobid/errors.hpp"
#include "autobid/gadgets.hpp"
#include "autobid/io.hpp"
#include "autobid/label_cover.hpp"
#include "autobid/learning.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace autobid::cli {

namespace {

struct Flags {
  std::string input;
  std::string profile;
  std::string trace;
  std::string out;
  std::string epsilon, delta, gamma, beta, alpha, mu, lambda;
  std::string grid;
  std::string objective = "revenue";
  std::string reserves = "native";
  std::string rule = "step";
  std::string rule_param;
  std::size_t rounds = 100;
  unsigned long seed = 0;
  bool ranges = false;
  bool responsive = false;
};

std::optional<Rational> number(const std::string& flag, const std::string& text) {
  if (text.empty()) return std::nullopt;
  try {
    return parse_number(text);
  } catch (const InputError&) {
    throw ParameterError("--" + flag + ": cannot parse '" + text + "' as a number");
  }
}

Rational number_or(const std::string& flag, const std::string& text, const Rational& fallback) {
  return number(flag, text).value_or(fallback);
}

Objective objective_of(const std::string& s) {
  if (s == "revenue") return Objective::revenue;
  if (s == "welfare") return Objective::welfare;
  throw ParameterError("--objective must be revenue or welfare");
}

ReserveMode reserves_of(const std::string& s) {
  if (s == "native") return ReserveMode::native;
  if (s == "expand") return ReserveMode::expand;
  throw ParameterError("--reserves must be native or expand");
}

std::string exact(const Rational& x) { return to_string(x) + " (" + to_decimal(x) + ")"; }

std::string profile_str(const Profile& m) {
  std::string s = "(";
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? ", " : "") + to_string(m[i]);
  return s + ")";
}

/// Plain or compiled instance file.
struct Loaded {
  Instance instance;
  std::optional<CompiledInstance> compiled;
};

Loaded load_instance(const std::string& path) {
  if (path.empty()) throw InputError("an instance file is required");
  const std::string text = read_file(path);
  Loaded l;
  if (is_compiled_json(text)) {
    l.compiled = compiled_from_json(text);
    l.instance = l.compiled->instance;
  } else {
    l.instance = instance_from_json(text);
  }
  return l;
}

std::optional<Rational> compiled_param(const Loaded& l, const std::string& key) {
  if (!l.compiled) return std::nullopt;
  for (const auto& [k, v] : l.compiled->params) {
    if (k == key) {
      try {
        return parse_rational(v);
      } catch (const InputError&) {
        return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

void echo_params(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& params) {
  for (const auto& [k, v] : params) out << "# " << k << " = " << v << "\n";
}

int cmd_compile(const Flags& f, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(f.input);
  const Objective objective = objective_of(f.objective);
  const Rational eps = number_or("epsilon", f.epsilon, Rational(1, 10));
  CompiledInstance compiled;
  if (text.find("\"clauses\"") != std::string::npos) {
    const CoverCSP csp = cover_from_json(text);
    const LearningParams p = objective == Objective::revenue
                                 ? revenue_learning_params(eps, number_or("delta", f.delta, Rational(1, 10)), csp)
                                 : welfare_learning_params(eps, csp);
    compiled = compile_cover(csp, p);
  } else {
    const LabelCover lc = label_cover_from_json(text);
    ReductionParams p = derive_params(eps, number_or("delta", f.delta, Rational(1, 4)), lc.alphabet);
    p.objective = objective;
    p.reserves = reserves_of(f.reserves);
    p.gamma = number("gamma", f.gamma);
    compiled = compile(lc, p);
  }
  const std::string json = compiled_to_json(compiled);
  std::ostream& report = f.out.empty() ? err : out;
  echo_params(report, compiled.params);
  report << "bidders: " << compiled.instance.n << "\n";
  report << "items: " << compiled.instance.k << "\n";
  for (const auto& s : compiled.stages) report << "stage " << s.name << ": " << s.bidders << " bidders, " << s.items << " items\n";
  if (f.out.empty()) out << json;
  else write_file_atomic(f.out, json);
  return kAccept;
}

void print_residuals(std::ostream& out, const std::vector<Rational>& residuals) {
  for (std::size_t i = 0; i < residuals.size(); ++i) out << "residual[" << i << "] = " << exact(residuals[i]) << "\n";
}

int verify_profile(const Flags& f, const Loaded& l, std::ostream& out) {
  const Profile m = profile_from_json(read_file(f.profile));
  validate_profile(l.instance, m);
  const Rational beta = number_or("beta", f.beta, Rational(0));
  out << "# beta = " << to_string(beta) << "\n";
  out << "profile: " << profile_str(m) << "\n";
  const Verdict v = check_approx_equilibrium(l.instance, m, beta);
  out << "verdict: " << (v.accepted ? "accepted" : "rejected") << "\n";
  if (v.violated) out << "violated: " << condition_name(*v.violated) << "\n";
  if (!v.detail.empty()) out << "detail: " << v.detail << "\n";
  if (v.witness) {
    out << "welfare: " << exact(liquid_welfare(l.instance, *v.witness)) << "\n";
    out << "revenue: " << exact(revenue(*v.witness)) << "\n";
  }
  print_residuals(out, v.residuals);
  return v.accepted ? kAccept : kReject;
}

ResponsiveParams responsive_params(const Flags& f, const Loaded& l, const Rational& beta) {
  ResponsiveParams p;
  p.alpha = number("alpha", f.alpha).value_or(compiled_param(l, "alpha").value_or(Rational(0)));
  p.mu = number("mu", f.mu).value_or(compiled_param(l, "mu").value_or(Rational(0)));
  p.beta = beta;
  p.s_grid = default_s_grid();
  return p;
}

int verify_trace(const Flags& f, const Loaded& l, std::ostream& out) {
  const SequenceTrace trace = trace_from_csv(l.instance, read_file(f.trace));
  const Rational beta = number_or("beta", f.beta, Rational(0));
  out << "# beta = " << to_string(beta) << "\n# T = " << trace.T() << "\n";
  const AdmissibleVerdict v = check_admissible(l.instance, trace, beta);
  bool ok = v.accepted;
  out << "admissible: " << (v.accepted ? "accepted" : "rejected") << "\n";
  if (v.violated) out << "violated: " << condition_name(*v.violated) << "\n";
  if (!v.detail.empty()) out << "detail: " << v.detail << "\n";
  out << "required beta: " << exact(v.required_beta) << "\n";
  out << "required beta * T: " << exact(v.required_beta * Rational(static_cast<unsigned long>(trace.T()))) << "\n";
  for (std::size_t i = 0; i < v.deficit.size(); ++i) out << "deficit[" << i << "] = " << exact(v.deficit[i]) << "\n";
  if (f.responsive) {
    const ResponsiveParams p = responsive_params(f, l, beta);
    out << "# alpha = " << to_string(p.alpha) << "\n# mu = " << to_string(p.mu) << "\n";
    const auto c = largest_responsive_c(l.instance, trace, p, default_c_grid());
    out << "responsive c: " << (c ? to_string(*c) : "none") << "\n";
    ok = ok && c.has_value();
  }
  return ok ? kAccept : kReject;
}

int cmd_verify(const Flags& f, std::ostream& out) {
  const Loaded l = load_instance(f.input);
  if (f.profile.empty() == f.trace.empty()) throw ParameterError("verify needs exactly one of --profile or --trace");
  return f.profile.empty() ? verify_trace(f, l, out) : verify_profile(f, l, out);
}

std::vector<Rational> rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(*number("grid", tok));
  }
  return out;
}

GridSpec grid_of(const Flags& f, const Loaded& l, const Rational& beta) {
  std::string spec = f.grid;
  if (spec.empty()) spec = l.compiled ? "structural" : "linear:1/4";
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "structural") {
    if (!l.compiled) throw ParameterError("--grid structural needs a compiled instance");
    return structural_grid(*l.compiled, beta);
  }
  std::vector<Rational> c;
  if (kind == "linear") {
    const Rational step = number_or("grid", arg, Rational(1, 4));
    if (step <= 0) throw ParameterError("--grid linear step must be positive");
    c = linear_grid(l.instance.cap, step);
  } else if (kind == "geometric") {
    const Rational pts = number_or("grid", arg, Rational(8));
    if (pts.get_den() != 1 || sgn(pts) < 0) throw ParameterError("--grid geometric needs a point count");
    c = geometric_grid(l.instance.cap, pts.get_num().get_ui());
  } else if (kind == "values") {
    c = rational_list(arg);
    for (const auto& x : c) {
      if (x < 1 || x > l.instance.cap) throw ParameterError("--grid values must lie in [1, cap]");
    }
  } else {
    throw ParameterError("--grid must be structural, linear:STEP, geometric:N or values:a,b,...");
  }
  return uniform_grid(l.instance, c, beta);
}

int cmd_search(const Flags& f, std::ostream& out) {
  const Loaded l = load_instance(f.input);
  const Rational beta = number_or("beta", f.beta, Rational(0));
  const GridSpec grid = grid_of(f, l, beta);
  SearchOptions opts;
  opts.witness_ranges = f.ranges;
  const SearchResult res = grid_search_equilibria(l.instance, grid, opts);
  out << "# beta = " << to_string(beta) << "\n";
  out << "# grid = " << (f.grid.empty() ? (l.compiled ? "structural" : "linear:1/4") : f.grid) << "\n";
  if (l.compiled) echo_params(out, l.compiled->params);
  out << "# grid size = " << std::setprecision(12) << static_cast<double>(res.grid_size) << "\n";
  out << "# nodes = " << res.nodes << ", leaves = " << res.leaves << "\n";
  out << "row\tprofile\twelfare\trevenue";
  if (f.ranges) out << "\twelfare_range\trevenue_range";
  out << "\n";
  nlohmann::ordered_json json;
  json["rows"] = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < res.rows.size(); ++r) {
    const auto& row = res.rows[r];
    out << r << "\t" << profile_str(row.profile) << "\t" << to_decimal(row.welfare) << "\t" << to_decimal(row.revenue);
    nlohmann::ordered_json jr;
    jr["profile"] = nlohmann::ordered_json::array();
    for (const auto& x : row.profile) jr["profile"].push_back(to_string(x));
    jr["welfare"] = to_string(row.welfare);
    jr["revenue"] = to_string(row.revenue);
    if (row.welfare_min) {
      out << "\t[" << to_decimal(*row.welfare_min) << ", " << to_decimal(*row.welfare_max) << "]\t["
          << to_decimal(*row.revenue_min) << ", " << to_decimal(*row.revenue_max) << "]";
      jr["welfare_range"] = {to_string(*row.welfare_min), to_string(*row.welfare_max)};
      jr["revenue_range"] = {to_string(*row.revenue_min), to_string(*row.revenue_max)};
    }
    out << "\n";
    json["rows"].push_back(jr);
  }
  out << "accepted: " << res.rows.size() << "\n";
  if (res.rows.empty()) {
    if (!f.out.empty()) write_file_atomic(f.out, json.dump(2) + "\n");
    return kReject;
  }
  const PoaReport rep = poa_report(l.instance, res.rows);
  const auto& best_w = res.rows[*res.best_welfare];
  const auto& worst_w = res.rows[*res.worst_welfare];
  const auto& best_r = res.rows[*res.best_revenue];
  const auto& worst_r = res.rows[*res.worst_revenue];
  out << "optimal welfare: " << exact(rep.optimum) << "\n";
  out << "max welfare: " << exact(best_w.welfare) << " at " << profile_str(best_w.profile) << "\n";
  out << "min welfare: " << exact(worst_w.welfare) << " at " << profile_str(worst_w.profile) << "\n";
  out << "welfare ratio: " << rep.welfare_spread.decimal() << "\n";
  out << "max revenue: " << exact(best_r.revenue) << " at " << profile_str(best_r.profile) << "\n";
  out << "min revenue: " << exact(worst_r.revenue) << " at " << profile_str(worst_r.profile) << "\n";
  out << "revenue ratio: " << rep.revenue_spread.decimal() << "\n";
  out << "poa (sampled): " << rep.poa_sample.decimal() << "\n";
  json["summary"] = {{"optimal_welfare", to_string(rep.optimum)},
                     {"max_welfare", to_string(best_w.welfare)},
                     {"min_welfare", to_string(worst_w.welfare)},
                     {"welfare_ratio", rep.welfare_spread.str()},
                     {"max_revenue", to_string(best_r.revenue)},
                     {"min_revenue", to_string(worst_r.revenue)},
                     {"revenue_ratio", rep.revenue_spread.str()},
                     {"poa_sample", rep.poa_sample.str()}};
  if (!f.out.empty()) write_file_atomic(f.out, json.dump(2) + "\n");
  return kAccept;
}

std::vector<UpdateRule> rules_of(const Flags& f, const Instance& inst, const Rational& mu) {
  const UpdateRule::Kind kind = parse_rule_kind(f.rule);
  const Rational fallback = kind == UpdateRule::Kind::poly ? Rational(2) : Rational(1);
  return uniform_rules(inst, kind, number_or("rule-param", f.rule_param, fallback), mu);
}

void print_metrics(std::ostream& out, const Loaded& l, const SequenceTrace& trace, const Flags& f) {
  const AverageMetrics avg = average_metrics(l.instance, trace, l.compiled ? &*l.compiled : nullptr);
  out << "average welfare: " << exact(avg.welfare) << "\n";
  out << "average revenue: " << exact(avg.revenue) << "\n";
  for (std::size_t c = 0; c < avg.clause_price.size(); ++c) {
    out << "clause " << c << " average price: " << exact(avg.clause_price[c]) << "\n";
    if (!l.compiled || l.compiled->item_roles.count("incumbent:c" + std::to_string(c))) {
      out << "clause " << c << " average capture: " << exact(avg.capture[c]) << "\n";
    }
  }
  const AdmissibleVerdict adm = check_admissible(l.instance, trace, Rational(0));
  out << "required beta: " << exact(adm.required_beta) << "\n";
  out << "required beta * T: " << exact(adm.required_beta * Rational(static_cast<unsigned long>(trace.T()))) << "\n";
  if (l.compiled && !l.compiled->vertices.empty() && l.compiled->alphabet > 0) {
    const auto lambda = number("lambda", f.lambda) ? number("lambda", f.lambda) : compiled_param(l, "lambda");
    if (lambda) {
      const TGoodReport tg = tgood_fraction(*l.compiled, trace, *lambda);
      out << "# lambda = " << to_string(*lambda) << "\n";
      out << "tgood threshold: " << exact(tg.threshold) << "\n";
      for (std::size_t v = 0; v < tg.per_variable.size(); ++v) {
        out << "tgood[" << l.compiled->vertices[v] << "]: " << to_decimal(tg.per_variable[v]) << "\n";
      }
      out << "tgood global: " << to_decimal(tg.global) << "\n";
      const Rational d(static_cast<unsigned long>(l.compiled->vertices.size()));
      out << "tgood bound 1 - 2d/lambda: " << to_decimal(1 - 2 * d / *lambda) << "\n";
    }
  }
  const Profile& last = trace.rounds.back().m;
  out << "final profile: " << profile_str(last) << "\n";
}

int cmd_simulate(const Flags& f, std::ostream& out) {
  const Loaded l = load_instance(f.input);
  if (f.rounds == 0) throw ParameterError("--rounds must be at least 1");
  const Rational mu = number("mu", f.mu).value_or(compiled_param(l, "mu").value_or(Rational(0)));
  const auto rules = rules_of(f, l.instance, mu);
  const SequenceTrace trace = run_dynamics(l.instance, rules, f.rounds);
  const std::string note = "rule=" + f.rule + " param=" + to_string(rules.empty() ? Rational(1) : rules[0].param) +
                           " mu=" + to_string(mu) + " seed=" + std::to_string(f.seed);
  out << "# rule = " << f.rule << "\n# rule-param = " << (rules.empty() ? "1" : to_string(rules[0].param)) << "\n";
  out << "# mu = " << to_string(mu) << "\n# rounds = " << f.rounds << "\n# seed = " << f.seed << "\n";
  if (l.compiled) echo_params(out, l.compiled->params);
  for (std::size_t i = 0; i < rules.size(); ++i) out << "m_safe[" << i << "] = " << exact(rules[i].m_safe) << "\n";
  print_metrics(out, l, trace, f);
  if (!f.out.empty()) write_file_atomic(f.out, trace_to_csv(trace, note));
  return kAccept;
}

int cmd_analyze(const Flags& f, std::ostream& out) {
  const Loaded l = load_instance(f.input);
  if (f.trace.empty()) throw ParameterError("analyze needs --trace");
  const SequenceTrace trace = trace_from_csv(l.instance, read_file(f.trace));
  out << "# T = " << trace.T() << "\n";
  print_metrics(out, l, trace, f);
  const AdmissibleVerdict adm = check_admissible(l.instance, trace, Rational(0));
  const ResponsiveParams p = responsive_params(f, l, number_or("beta", f.beta, adm.required_beta));
  out << "# alpha = " << to_string(p.alpha) << "\n# mu = " << to_string(p.mu) << "\n# beta = " << to_string(p.beta) << "\n";
  const auto c = largest_responsive_c(l.instance, trace, p, default_c_grid());
  out << "responsive c: " << (c ? to_string(*c) : "none") << "\n";
  return kAccept;
}

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("input", f.input, "Input file (CSP or instance JSON)")->required();
  sub->add_option("--profile", f.profile, "Multiplier profile JSON");
  sub->add_option("--trace", f.trace, "Trace CSV");
  sub->add_option("--out", f.out, "Output file");
  sub->add_option("--epsilon", f.epsilon);
  sub->add_option("--delta", f.delta);
  sub->add_option("--gamma", f.gamma);
  sub->add_option("--beta", f.beta);
  sub->add_option("--alpha", f.alpha);
  sub->add_option("--mu", f.mu);
  sub->add_option("--lambda", f.lambda);
  sub->add_option("--rounds", f.rounds);
  sub->add_option("--grid", f.grid, "structural | linear:STEP | geometric:N | values:a,b,...");
  sub->add_option("--objective", f.objective, "revenue | welfare");
  sub->add_option("--reserves", f.reserves, "native | expand");
  sub->add_option("--rule", f.rule, "step | poly | exp");
  sub->add_option("--rule-param", f.rule_param, "poly degree or exp rate");
  sub->add_option("--seed", f.seed);
  sub->add_flag("--ranges", f.ranges, "Report witness welfare/revenue ranges");
  sub->add_flag("--responsive", f.responsive, "Also check responsiveness of a trace");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Autobidding equilibrium toolkit", "autobid"};
  app.require_subcommand(1);
  Flags f;
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {{"compile", "Compile a label-cover or cover CSP into an instance"},
                      {"verify", "Check a profile or trace against an instance"},
                      {"search", "Enumerate grid equilibria"},
                      {"simulate", "Run pacing dynamics"},
                      {"analyze", "Summarize an existing trace"}};
  for (const auto& s : subs) add_flags(app.add_subcommand(s.name, s.help), f);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kAccept;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kAccept;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParameterError;
  }
  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "compile") return cmd_compile(f, out, err);
    if (cmd == "verify") return cmd_verify(f, out);
    if (cmd == "search") return cmd_search(f, out);
    if (cmd == "simulate") return cmd_simulate(f, out);
    return cmd_analyze(f, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << "\n";
    return kParameterError;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudgetError;
  }
}

}  // namespace autobid::cli
