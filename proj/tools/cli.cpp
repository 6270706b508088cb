#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cleanreg/circuits.hpp"
#include "cleanreg/matpow.hpp"
#include "cleanreg/space.hpp"

namespace cleanreg {

namespace {

struct BuildOutput {
  BuiltProgram built;
  std::vector<std::pair<std::string, std::string>> meta;
};

std::string domain_tag(const InputDomain& d) {
  if (d.pair_complement) return "litpairs";
  if (d.bound == 2) return "boolean";
  if (d.bound != 0) return "below:" + to_string(d.bound);
  return "field";
}

InputDomain parse_domain_tag(const std::string& tag) {
  InputDomain d;
  if (tag == "litpairs") {
    d.bound = 2;
    d.pair_complement = true;
  } else if (tag == "boolean") {
    d.bound = 2;
  } else if (tag.rfind("below:", 0) == 0) {
    d.bound = parse_u128(tag.substr(6));
  } else if (tag != "field") {
    throw std::invalid_argument("unknown domain tag '" + tag + "'");
  }
  return d;
}

void emit_program(const BuildOutput& bo, const std::string& out_path,
                  std::ostream& out, std::ostream& err) {
  std::vector<std::pair<std::string, std::string>> meta = bo.meta;
  meta.push_back({"domain", domain_tag(bo.built.domain)});
  if (bo.built.readout_mod) meta.push_back({"readout", to_string(*bo.built.readout_mod)});
  std::string text = render_meta(meta) + serialize(bo.built.program);
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    f << text;
  }

  // profile table with paper-bound columns on stderr
  ResourceProfile prof = resources(bo.built.program);
  std::ostringstream tab;
  tab << std::left << std::setw(44) << "metric" << std::setw(16) << "value"
      << std::setw(22) << "bound" << "status\n";
  auto row = [&](const std::string& name, const std::string& value,
                 const std::string& bound, const std::string& status) {
    tab << std::left << std::setw(44) << name << std::setw(16) << value
        << std::setw(22) << bound << status << "\n";
  };
  row("basic instructions", std::to_string(prof.basic_instructions), "-", "-");
  row("payload monomials", std::to_string(prof.payload_monomials), "-", "-");
  row("registers (total)", std::to_string(prof.total_registers()), "-", "-");
  row("recursive calls (max per input)",
      std::to_string(prof.max_calls_per_input()), "-", "-");
  for (auto& b : bo.built.bounds)
    row(b.name, std::to_string(b.measured),
        std::to_string(b.expected) +
            (b.kind == BuiltBound::Exact ? " (exact)" : " (upper)"),
        b.pass() ? "PASS" : "FAIL");
  for (auto& n : bo.built.notes) tab << "note: " << n << "\n";
  err << tab.str();
}

std::string read_input_text(const std::string& path, std::istream& in) {
  if (path.empty()) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// comma-separated values; ';' is accepted as a row separator so matrix
// literals like "1,1;0,1" work directly
std::vector<u128> parse_csv(const std::string& text) {
  std::string flat = text;
  for (auto& c : flat)
    if (c == ';') c = ',';
  std::vector<u128> out;
  std::string item;
  std::istringstream is(flat);
  while (std::getline(is, item, ',')) {
    size_t a = item.find_first_not_of(" \t");
    size_t b = item.find_last_not_of(" \t");
    if (a == std::string::npos) throw std::invalid_argument("empty CSV entry");
    out.push_back(parse_u128(item.substr(a, b - a + 1)));
  }
  return out;
}

std::string meta_value(const std::vector<std::pair<std::string, std::string>>& meta,
                       const std::string& key) {
  for (auto& [k, v] : meta)
    if (k == key) return v;
  throw std::invalid_argument("program file lacks '# meta " + key + "'");
}

// Rebuild the registered oracle from the meta comments.
OracleFn oracle_from_meta(const std::vector<std::pair<std::string, std::string>>& meta,
                          const Program& prog) {
  std::string kind = meta_value(meta, "oracle");
  if (kind == "poly") {
    PrimeField base(parse_u128(meta_value(meta, "p")));
    std::vector<SparsePoly> polys;
    for (auto& [k, v] : meta)
      if (k == "poly") polys.push_back(parse_poly(v, base, prog.num_inputs));
    if (polys.empty()) throw std::invalid_argument("no '# meta poly' lines");
    return [polys](std::span<const u128> x) {
      std::vector<u128> out;
      for (auto& p : polys) out.push_back(p.eval(x));
      return out;
    };
  }
  if (kind == "symmetric") {
    std::string bits = meta_value(meta, "truth");
    std::vector<int> truth;
    for (char c : bits) truth.push_back(c == '1' ? 1 : 0);
    return [truth](std::span<const u128> x) {
      size_t s = 0;
      for (auto v : x) s += size_t(v);
      return std::vector<u128>{u128(truth.at(s))};
    };
  }
  if (kind == "boolrep") {
    IntPoly p = parse_int_poly(meta_value(meta, "intpoly"), prog.num_inputs);
    return [p](std::span<const u128> x) {
      std::vector<i128> xi(x.begin(), x.end());
      return std::vector<u128>{p.eval(xi) != 0 ? u128(1) : u128(0)};
    };
  }
  if (kind == "matpow") {
    uint32_t n = uint32_t(parse_u128(meta_value(meta, "n")));
    uint32_t d = uint32_t(parse_u128(meta_value(meta, "d")));
    PrimeField base(parse_u128(meta_value(meta, "p")));
    return [n, d, base](std::span<const u128> m) { return mat_pow_mod(m, n, d, base); };
  }
  if (kind == "circuit") {
    Circuit c = parse_netlist(meta_value(meta, "netlist"));
    return [c](std::span<const u128> lits) {
      return std::vector<u128>{u128(c.eval_literals(lits))};
    };
  }
  throw std::invalid_argument("unknown oracle kind '" + kind + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"clean register programs over prime fields"};
  app.require_subcommand(1);

  std::string out_path, poly_text, truth_bits, netlist_path, program_path;
  std::vector<std::string> poly_texts;
  std::string init_mode = "zero", input_csv;
  uint64_t p_value = 0, trials = 200, seed = 0, jobs = 1;
  uint64_t sr_t = 0, sr_s = 0, sr_n = 0, sr_field = 0;
  uint32_t mat_n = 0, mat_d = 0, mat_delta = 0, block_depth = 1;
  uint64_t budget = 200000;
  bool lift = false, exhaustive = false;

  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "write the program file here (default stdout)");
  };

  CLI::App* c_univ = app.add_subcommand("build-univariate", "Fig.-1 univariate evaluator");
  c_univ->add_option("--p", p_value)->required();
  c_univ->add_option("--poly", poly_text)->required();
  add_out(c_univ);

  CLI::App* c_set = app.add_subcommand("build-univariate-set", "shared-input set evaluator");
  c_set->add_option("--p", p_value)->required();
  c_set->add_option("--poly", poly_texts)->required();
  add_out(c_set);

  CLI::App* c_war = app.add_subcommand("build-waring", "homogeneous linear-form evaluator");
  c_war->add_option("--p", p_value)->required();
  c_war->add_option("--poly", poly_text)->required();
  add_out(c_war);

  CLI::App* c_gen = app.add_subcommand("build-general", "general polynomial evaluator");
  c_gen->add_option("--p", p_value)->required();
  c_gen->add_option("--poly", poly_text)->required();
  c_gen->add_flag("--lift", lift, "evaluate over a lifted prime field");
  add_out(c_gen);

  CLI::App* c_sym = app.add_subcommand("build-symmetric", "symmetric boolean function");
  c_sym->add_option("--p", p_value)->required();
  c_sym->add_option("--truth", truth_bits, "g(0..n) as a bit string")->required();
  add_out(c_sym);

  CLI::App* c_rep = app.add_subcommand("build-bool-rep", "represented boolean function");
  c_rep->add_option("--p", p_value)->required();
  c_rep->add_option("--poly", poly_text, "integer-coefficient representation")->required();
  add_out(c_rep);

  CLI::App* c_int = app.add_subcommand("build-interp", "shift/accumulate evaluator");
  c_int->add_option("--p", p_value)->required();
  c_int->add_option("--poly", poly_text)->required();
  add_out(c_int);

  CLI::App* c_cir = app.add_subcommand("build-circuit", "merged-layer circuit compiler");
  c_cir->add_option("--netlist", netlist_path)->required();
  c_cir->add_option("--block-depth", block_depth)->required();
  c_cir->add_option("--p", p_value, "override the block prime");
  c_cir->add_option("--budget", budget, "materialization budget (instructions)");
  add_out(c_cir);

  CLI::App* c_mat = app.add_subcommand("build-matpow", "matrix powering programs");
  c_mat->add_option("--n", mat_n)->required();
  c_mat->add_option("--p", p_value)->required();
  c_mat->add_option("--d", mat_d)->required();
  c_mat->add_option("--delta", mat_delta, "boosting base (enables boosting)");
  add_out(c_mat);

  CLI::App* c_ver = app.add_subcommand("verify", "check cleanness against the registered oracle");
  c_ver->add_option("--program", program_path, "program file (default: stdin)");
  c_ver->add_option("--trials", trials);
  c_ver->add_option("--seed", seed);
  c_ver->add_option("--jobs", jobs);
  c_ver->add_flag("--exhaustive", exhaustive, "force exhaustive enumeration");

  CLI::App* c_eval = app.add_subcommand("eval", "run a program once and print deltas");
  c_eval->add_option("--program", program_path, "program file (default: stdin)");
  c_eval->add_option("--input", input_csv, "comma-separated inputs")->required();
  c_eval->add_option("--init", init_mode, "zero|random|<csv>");
  c_eval->add_option("--seed", seed);

  CLI::App* c_space =
      app.add_subcommand("space-report", "catalytic-machine cost of a program shape");
  c_space->add_option("--t", sr_t, "instruction count")->required();
  c_space->add_option("--s", sr_s, "register count")->required();
  c_space->add_option("--n", sr_n, "input count")->required();
  c_space->add_option("--field", sr_field, "ring size |R|")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*c_space) {
      SpaceReport r{sr_t, sr_s, sr_n, u128(sr_field)};
      out << std::fixed << std::setprecision(2)
          << "pure space      = " << r.pure_space_units() << " units\n"
          << "catalytic space = " << r.catalytic_space_units() << " units\n";
      return 0;
    }

    if (*c_ver) {
      std::string text = read_input_text(program_path, in);
      Program prog = parse_program(text);
      auto meta = parse_meta(text);
      OracleFn oracle = oracle_from_meta(meta, prog);
      VerifyOptions opts;
      opts.trials = trials;
      opts.seed = seed;
      opts.jobs = int(jobs);
      for (auto& [k, v] : meta) {
        if (k == "domain") opts.domain = parse_domain_tag(v);
        if (k == "readout") opts.readout_mod = parse_u128(v);
      }
      if (exhaustive) opts.exhaustive_limit = u128(1) << 40;
      CleanReport report = verify_clean(prog, oracle, opts);
      if (report.pass) {
        out << "PASS: " << prog.name << " clean over " << report.trials_run
            << (report.exhaustive ? " exhaustive" : " sampled") << " trials\n";
        return 0;
      }
      out << "FAIL: " << prog.name;
      if (report.counterexample) {
        out << " (" << report.counterexample->what << ")\n";
        out << "counterexample input:";
        for (auto v : report.counterexample->input) out << " " << to_string(v);
        out << "\ncounterexample init:";
        for (auto& bank : report.counterexample->init.banks)
          for (auto v : bank) out << " " << to_string(v);
      }
      out << "\n";
      return 1;
    }

    if (*c_eval) {
      std::string text = read_input_text(program_path, in);
      Program prog = parse_program(text);
      auto meta = parse_meta(text);
      std::optional<u128> readout;
      for (auto& [k, v] : meta)
        if (k == "readout") readout = parse_u128(v);
      std::vector<u128> x = parse_csv(input_csv);
      RegisterState init;
      if (init_mode == "zero") {
        init = RegisterState::zeros(prog);
      } else if (init_mode == "random") {
        Rng rng(seed);
        init = random_state(prog, rng);
      } else {
        std::vector<u128> flat = parse_csv(init_mode);
        init = RegisterState::zeros(prog);
        size_t k = 0;
        for (auto& bank : init.banks)
          for (auto& cell : bank) {
            if (k >= flat.size()) throw std::invalid_argument("init CSV too short");
            cell = flat[k++];
          }
      }
      auto res = execute(prog, init, x);
      auto deltas = output_deltas(prog, init, res.state, readout);
      for (size_t i = 0; i < deltas.size(); ++i)
        out << "out[" << i << "] = " << to_string(deltas[i]) << "\n";
      return 0;
    }

    // build subcommands
    BuildOutput bo;
    if (*c_univ) {
      PrimeField field(p_value);
      SparsePoly p = parse_poly(poly_text, field, 1);
      bo.built = build_univariate(p);
      bo.meta = {{"oracle", "poly"}, {"p", to_string(field.modulus())},
                 {"poly", p.render()}};
    } else if (*c_set) {
      PrimeField field(p_value);
      std::vector<SparsePoly> ps;
      for (auto& t : poly_texts) ps.push_back(parse_poly(t, field, 1));
      bo.built = build_univariate_set(ps);
      bo.meta = {{"oracle", "poly"}, {"p", to_string(field.modulus())}};
      for (auto& p : ps) bo.meta.push_back({"poly", p.render()});
    } else if (*c_war) {
      PrimeField field(p_value);
      SparsePoly p = parse_poly(poly_text, field, 1);
      bo.built = build_waring(p);
      bo.meta = {{"oracle", "poly"}, {"p", to_string(field.modulus())},
                 {"poly", p.render()}};
    } else if (*c_gen) {
      PrimeField field(p_value);
      SparsePoly p = parse_poly(poly_text, field, 1);
      bo.built = build_general(p, lift);
      bo.meta = {{"oracle", "poly"}, {"p", to_string(field.modulus())},
                 {"poly", p.render()}};
    } else if (*c_sym) {
      PrimeField field(p_value);
      std::vector<int> truth;
      for (char c : truth_bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("truth must be bits");
        truth.push_back(c - '0');
      }
      bo.built = build_symmetric_bool(truth, field);
      bo.meta = {{"oracle", "symmetric"}, {"p", to_string(field.modulus())},
                 {"truth", truth_bits}};
    } else if (*c_rep) {
      PrimeField field(p_value);
      IntPoly p = parse_int_poly(poly_text, 1);
      bo.built = build_bool_rep(p, field);
      bo.meta = {{"oracle", "boolrep"}, {"p", to_string(field.modulus())},
                 {"intpoly", p.render()}};
    } else if (*c_int) {
      PrimeField field(p_value);
      SparsePoly p = parse_poly(poly_text, field, 1);
      bo.built = build_interpolation_eval(p);
      bo.meta = {{"oracle", "poly"}, {"p", to_string(field.modulus())},
                 {"poly", p.render()}};
    } else if (*c_cir) {
      std::ifstream f(netlist_path);
      if (!f) throw std::runtime_error("cannot read " + netlist_path);
      std::ostringstream ss;
      ss << f.rdbuf();
      Circuit circuit = parse_netlist(ss.str());
      std::optional<u128> prime;
      if (p_value != 0) prime = p_value;
      CompiledCircuit cc = compile_circuit(circuit, block_depth, prime, budget);
      if (!cc.flat)
        throw std::runtime_error(
            "compiled stack exceeds the materialization budget; raise --budget");
      std::string packed = render_netlist(circuit);
      for (auto& ch : packed)
        if (ch == '\n') ch = ';';
      bo.built.program = *cc.flat;
      bo.built.domain = {2, true};
      bo.built.bounds = cc.bounds;
      bo.meta = {{"oracle", "circuit"},
                 {"p", to_string(cc.prime)},
                 {"netlist", packed},
                 {"block-depth", std::to_string(block_depth)},
                 {"layers", std::to_string(cc.plan.num_layers())}};
    } else if (*c_mat) {
      if (c_mat->count("--delta")) {
        BoostedMatpow boosted = build_matpow_boosted(mat_n, p_value, mat_d, mat_delta);
        bo.built = std::move(boosted.built);
        bo.meta = {{"oracle", "matpow"}, {"n", std::to_string(mat_n)},
                   {"p", to_string(u128(p_value))}, {"d", std::to_string(mat_d)},
                   {"delta", std::to_string(mat_delta)}, {"q", to_string(boosted.q)}};
      } else if (u128(mat_d) < u128(p_value)) {
        bo.built = build_matpow_small(mat_n, p_value, mat_d);
        bo.meta = {{"oracle", "matpow"}, {"n", std::to_string(mat_n)},
                   {"p", to_string(u128(p_value))}, {"d", std::to_string(mat_d)}};
      } else {
        LiftedMatpow lifted = build_matpow_lifted(mat_n, p_value, mat_d);
        bo.built = std::move(lifted.built);
        bo.meta = {{"oracle", "matpow"}, {"n", std::to_string(mat_n)},
                   {"p", to_string(u128(p_value))}, {"d", std::to_string(mat_d)},
                   {"q", to_string(lifted.q)}};
      }
    } else {
      err << "error: no subcommand\n";
      return 2;
    }
    emit_program(bo, out_path, out, err);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cleanreg
