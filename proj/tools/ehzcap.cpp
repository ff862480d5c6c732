// ehzcap: command-line front end over the C interface in ehz/ehz.h.
//
// Exit codes: 0 success, 1 computation failure, 2 invalid input (parse or
// validation), 3 the cross-computed capacity quantities disagree.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ehz/ehz.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitIdentity = 3;

struct CliError {
  int code;
  std::string message;
};

int exit_code_for(ehz_status st) {
  switch (st) {
    case EHZ_ERR_NUMERICAL:
    case EHZ_ERR_INTERNAL:
    case EHZ_ERR_NOT_A_BILLIARD:
    case EHZ_ERR_GRID_TOO_COARSE:
    case EHZ_ERR_NO_VALID_SUBSELECTION:
      return kExitFailure;
    case EHZ_ERR_IDENTITY_CHECK:
      return kExitIdentity;
    default:
      return kExitInvalid;
  }
}

void check(ehz_status st, const std::string& context) {
  if (st != EHZ_OK) {
    throw CliError{exit_code_for(st), context + ": " + ehz_status_name(st) + ": " + ehz_last_error()};
  }
}

struct BodyDeleter {
  void operator()(ehz_body* b) const { ehz_body_free(b); }
};
using Body = std::unique_ptr<ehz_body, BodyDeleter>;

struct Text {
  char* ptr = nullptr;
  ~Text() { ehz_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitInvalid, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "named:<name>" selects a built-in body; anything else is a JSON file path.
Body load_body(const std::string& arg, const std::string& flag) {
  ehz_body* raw = nullptr;
  const std::string prefix = "named:";
  if (arg.rfind(prefix, 0) == 0) {
    check(ehz_body_named(arg.substr(prefix.size()).c_str(), &raw), flag);
  } else {
    check(ehz_body_from_json(read_file(arg).c_str(), &raw), flag + " '" + arg + "'");
  }
  return Body(raw);
}

// Curves come from a file, or inline when the argument starts with '{'.
std::string load_curve(const std::string& arg) { return !arg.empty() && arg[0] == '{' ? arg : read_file(arg); }

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw CliError{kExitFailure, "cannot write '" + out_path + "'"};
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CliError{kExitInvalid, "--deltas: '" + item + "' is not a number"};
    }
  }
  if (out.empty()) throw CliError{kExitInvalid, "--deltas: empty list"};
  return out;
}

std::string number_json(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EHZ capacity of Lagrangian products of convex polytopes"};
  app.require_subcommand(1);

  std::string K_arg, T_arg, q_arg, p_arg, out_path;
  double tol = 1e-8;
  std::size_t m_max = 0;
  double oracle_step = 0.0;
  unsigned threads = 0;
  std::uint64_t seed = 1;

  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", out_path, "Write output to this file"); };
  auto add_tol = [&](CLI::App* sub) { sub->add_option("--tol", tol, "Membership and cone tolerance")->check(CLI::PositiveNumber); };

  bool no_symmetric = false, no_billiard = false;
  auto* cap = app.add_subcommand("capacity", "Capacity of K x T with cross-checks (JSON report)");
  cap->add_option("--K", K_arg, "Table body (file or named:<name>)")->required();
  cap->add_option("--T", T_arg, "Length body (file or named:<name>)")->required();
  add_tol(cap);
  cap->add_option("--m-max", m_max, "Largest number of bounces (default n+1)");
  cap->add_option("--oracle-step", oracle_step, "Also run the grid oracle with this step");
  cap->add_option("--threads", threads, "Worker threads (0: all cores)");
  cap->add_flag("--no-symmetric", no_symmetric, "Skip the min over F(T) of l_K");
  cap->add_flag("--no-billiard", no_billiard, "Skip billiard certification");
  add_out(cap);

  auto* fcp = app.add_subcommand("fcp-check", "Can the curve be translated into the interior of K?");
  fcp->add_option("--K", K_arg)->required();
  fcp->add_option("--q", q_arg, "Curve JSON file or inline JSON")->required();
  add_tol(fcp);
  add_out(fcp);

  bool strong = false, weak = false;
  auto* ver = app.add_subcommand("verify", "Verify a billiard trajectory");
  ver->add_option("--K", K_arg)->required();
  ver->add_option("--T", T_arg)->required();
  ver->add_option("--q", q_arg)->required();
  ver->add_option("--p", p_arg, "Dual curve for --strong (extracted when omitted)");
  auto* strong_flag = ver->add_flag("--strong", strong, "Dual-point system check");
  auto* weak_flag = ver->add_flag("--weak", weak, "Least-action reflection rule check");
  strong_flag->excludes(weak_flag);
  add_tol(ver);
  add_out(ver);

  auto* dual = app.add_subcommand("dual", "Dual trajectory of a billiard curve");
  dual->add_option("--K", K_arg)->required();
  dual->add_option("--T", T_arg)->required();
  dual->add_option("--q", q_arg)->required();
  add_tol(dual);
  add_out(dual);

  auto* len = app.add_subcommand("length", "l_T length of a closed curve");
  len->add_option("--T", T_arg)->required();
  len->add_option("--q", q_arg)->required();
  add_out(len);

  auto* red = app.add_subcommand("reduce", "Shortest sub-curve with at most n+1 points still in F(K)");
  red->add_option("--K", K_arg)->required();
  red->add_option("--T", T_arg)->required();
  red->add_option("--q", q_arg)->required();
  add_tol(red);
  add_out(red);

  auto* ora = app.add_subcommand("oracle", "Brute-force grid upper bound");
  ora->add_option("--K", K_arg)->required();
  ora->add_option("--T", T_arg)->required();
  ora->add_option("--oracle-step", oracle_step, "Grid step on each facet")->required()->check(CLI::PositiveNumber);
  ora->add_option("--m-max", m_max);
  add_out(ora);

  auto* ids = app.add_subcommand("identities", "Capacities of K x T, T x K and the negated products");
  ids->add_option("--K", K_arg)->required();
  ids->add_option("--T", T_arg)->required();
  ids->add_option("--m-max", m_max);
  add_out(ids);

  auto* study = app.add_subcommand("study", "Plot-ready CSV studies");
  study->require_subcommand(1);
  std::vector<std::string> K_list, T_list;
  int count = 0;
  auto* sym = study->add_subcommand("symmetry", "K<->T and negation identities over pairs");
  sym->add_option("--K", K_list, "Table bodies (paired with --T)");
  sym->add_option("--T", T_list, "Length bodies");
  sym->add_option("--count", count, "Random polygon pairs (5-8 vertices) instead of --K/--T");
  sym->add_option("--seed", seed);
  add_out(sym);
  std::string deltas_arg;
  int samples = 1;
  auto* cont = study->add_subcommand("continuity", "Capacity under vertex perturbations of K");
  cont->add_option("--K", K_arg, "Base table body")->required();
  cont->add_option("--T", T_arg)->required();
  cont->add_option("--deltas", deltas_arg, "Comma-separated perturbation sizes")->required();
  cont->add_option("--seed", seed);
  cont->add_option("--samples", samples, "Perturbations per delta")->check(CLI::PositiveNumber);
  add_out(cont);

  std::string family, name;
  int k = 6, dim = 2;
  double delta = 0.0;
  auto* gen = app.add_subcommand("generate", "Emit a body as JSON");
  gen->add_option("family", family, "named | random-polygon | random-polytope | perturbed")->required();
  gen->add_option("--name", name, "Body name for the named family");
  gen->add_option("--k", k, "Number of vertices");
  gen->add_option("--dim", dim, "Dimension for random-polytope");
  gen->add_option("--K", K_arg, "Base body for perturbed");
  gen->add_option("--delta", delta, "Perturbation size");
  gen->add_option("--seed", seed);
  add_out(gen);

  std::string corpus_dir;
  auto* corpus = app.add_subcommand("corpus", "Write every named body to <dir>/<name>.json");
  corpus->add_option("dir", corpus_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*cap) {
      Body K = load_body(K_arg, "--K"), T = load_body(T_arg, "--T");
      ehz_options opt;
      ehz_options_default(&opt);
      opt.m_max = m_max;
      opt.tol = tol;
      opt.oracle_step = oracle_step;
      opt.threads = threads;
      opt.symmetric = no_symmetric ? 0 : 1;
      opt.billiard = no_billiard ? 0 : 1;
      ehz_result* res = nullptr;
      check(ehz_capacity(K.get(), T.get(), &opt, &res), "capacity");
      std::unique_ptr<ehz_result, decltype(&ehz_result_free)> guard(res, ehz_result_free);
      Text json;
      check(ehz_result_to_json(res, &json.ptr), "capacity");
      emit(json.str(), out_path);
      if (!ehz_result_identities_ok(res)) {
        std::cerr << "identity check failed: cross-computed quantities disagree beyond 1e-6\n";
        return kExitIdentity;
      }
    } else if (*fcp) {
      Body K = load_body(K_arg, "--K");
      Text json;
      check(ehz_fcp_check(K.get(), load_curve(q_arg).c_str(), tol, &json.ptr, nullptr), "fcp-check");
      emit(json.str(), out_path);
    } else if (*ver) {
      if (!strong && !weak) throw CliError{kExitInvalid, "verify: pass --strong or --weak"};
      Body K = load_body(K_arg, "--K"), T = load_body(T_arg, "--T");
      const std::string q = load_curve(q_arg);
      Text json;
      if (strong) {
        std::string p;
        if (p_arg.empty()) {
          Text extracted;
          check(ehz_extract_dual(K.get(), T.get(), q.c_str(), tol, &extracted.ptr), "verify --strong (dual extraction)");
          p = extracted.str();
        } else {
          p = load_curve(p_arg);
        }
        check(ehz_verify_strong(K.get(), T.get(), q.c_str(), p.c_str(), tol, &json.ptr, nullptr), "verify --strong");
      } else {
        check(ehz_verify_weak(K.get(), T.get(), q.c_str(), tol, &json.ptr, nullptr), "verify --weak");
      }
      emit(json.str(), out_path);
    } else if (*dual) {
      Body K = load_body(K_arg, "--K"), T = load_body(T_arg, "--T");
      Text json;
      check(ehz_extract_dual(K.get(), T.get(), load_curve(q_arg).c_str(), tol, &json.ptr), "dual");
      emit(json.str(), out_path);
    } else if (*len) {
      Body T = load_body(T_arg, "--T");
      double v = 0.0;
      check(ehz_length(T.get(), load_curve(q_arg).c_str(), &v), "length");
      emit("{\"length\": " + number_json(v) + "}", out_path);
    } else if (*red) {
      Body K = load_body(K_arg, "--K"), T = load_body(T_arg, "--T");
      Text json;
      check(ehz_reduce(K.get(), T.get(), load_curve(q_arg).c_str(), tol, &json.ptr), "reduce");
      emit(json.str(), out_path);
    } else if (*ora) {
      Body K = load_body(K_arg, "--K"), T = load_body(T_arg, "--T");
      double v = 0.0;
      check(ehz_oracle(K.get(), T.get(), oracle_step, m_max, &v), "oracle");
      emit("{\"oracle\": " + number_json(v) + ", \"grid_step\": " + number_json(oracle_step) + "}", out_path);
    } else if (*ids) {
      Body K = load_body(K_arg, "--K"), T = load_body(T_arg, "--T");
      Text json;
      check(ehz_identities(K.get(), T.get(), m_max, &json.ptr), "identities");
      emit(json.str(), out_path);
    } else if (*sym) {
      std::vector<Body> ks, ts;
      if (count > 0) {
        for (int i = 0; i < count; ++i) {
          ehz_body* a = nullptr;
          ehz_body* b = nullptr;
          const auto s = seed + static_cast<std::uint64_t>(i);
          check(ehz_body_random_polygon(5 + i % 4, s, &a), "random polygon");
          ks.emplace_back(a);
          check(ehz_body_random_polygon(5 + (i / 4) % 4, s + 1000003, &b), "random polygon");
          ts.emplace_back(b);
        }
      } else {
        if (K_list.empty() || K_list.size() != T_list.size()) {
          throw CliError{kExitInvalid, "study symmetry: give --count or equally many --K and --T"};
        }
        for (std::size_t i = 0; i < K_list.size(); ++i) {
          ks.push_back(load_body(K_list[i], "--K"));
          ts.push_back(load_body(T_list[i], "--T"));
        }
      }
      std::vector<const ehz_body*> kp, tp;
      for (auto& b : ks) kp.push_back(b.get());
      for (auto& b : ts) tp.push_back(b.get());
      Text csv;
      check(ehz_study_symmetry(kp.data(), tp.data(), kp.size(), &csv.ptr), "study symmetry");
      emit(csv.str(), out_path);
    } else if (*cont) {
      Body K = load_body(K_arg, "--K"), T = load_body(T_arg, "--T");
      const auto deltas = parse_list(deltas_arg);
      Text csv;
      check(ehz_study_continuity(K.get(), T.get(), deltas.data(), deltas.size(), seed, samples, &csv.ptr),
            "study continuity");
      emit(csv.str(), out_path);
    } else if (*gen) {
      ehz_body* raw = nullptr;
      if (family == "named") {
        check(ehz_body_named(name.c_str(), &raw), "generate named");
      } else if (family == "random-polygon") {
        check(ehz_body_random_polygon(k, seed, &raw), "generate random-polygon");
      } else if (family == "random-polytope") {
        check(ehz_body_random_polytope(dim, k, seed, &raw), "generate random-polytope");
      } else if (family == "perturbed") {
        if (K_arg.empty()) throw CliError{kExitInvalid, "generate perturbed: --K is required"};
        Body base = load_body(K_arg, "--K");
        check(ehz_body_perturbed(base.get(), delta, seed, &raw), "generate perturbed");
      } else {
        throw CliError{kExitInvalid, "generate: unknown family '" + family + "'"};
      }
      Body body(raw);
      Text json;
      check(ehz_body_to_json(body.get(), &json.ptr), "generate");
      emit(json.str(), out_path);
    } else if (*corpus) {
      for (const char* n : {"square", "cross-polytope", "triangle", "cube", "octahedron", "simplex-3d"}) {
        ehz_body* raw = nullptr;
        check(ehz_body_named(n, &raw), "corpus");
        Body body(raw);
        Text json;
        check(ehz_body_to_json(body.get(), &json.ptr), "corpus");
        emit(json.str(), corpus_dir + "/" + n + ".json");
      }
    }
  } catch (const CliError& e) {
    std::cerr << "ehzcap: " << e.message << '\n';
    return e.code;
  }
  return 0;
}
