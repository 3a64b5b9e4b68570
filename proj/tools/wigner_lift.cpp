// wigner-lift: generate symmetry fixtures, certify the symmetry condition,
// and reconstruct the unitary or antiunitary operator behind a ray map.
//
// Exit codes: 0 success, 2 invalid arguments or input, 3 I/O failure,
// 4 input certified not to be a Wigner symmetry, 5 verification failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wigner/json_io.hpp"
#include "wigner/wigner.hpp"

namespace {

using nlohmann::json;
using namespace wigner;

constexpr int kFormatVersion = 1;

enum Exit : int { kOk = 0, kUsage = 2, kIo = 3, kRejected = 4, kVerification = 5 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(const Error& e) {
  if (e.kind() == ErrorKind::VerificationFailed) return kVerification;
  if (is_rejection(e.kind())) return kRejected;
  return kUsage;
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path);
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed JSON: ") + e.what());
  }
}

struct Options {
  std::string input;
  std::string output;
  std::string method = "both";
  double tol = 1e-9;
  int samples = 100;
  int pairs = 200;
  std::uint64_t seed = 42;
  int dim = 2;
  std::string kind = "unitary";
  double p = 0.5;
  int max_dim = 64;
  bool no_timing = false;
};

RunConfig make_config(const Options& o) {
  RunConfig c;
  if (o.method == "canonical") c.method = Method::canonical;
  else if (o.method == "inductive") c.method = Method::inductive;
  else if (o.method == "both") c.method = Method::both;
  else throw Error(ErrorKind::InvalidArgument, "unknown method " + o.method);
  if (!(o.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "--tol must be positive");
  if (o.samples < 1) throw Error(ErrorKind::InvalidArgument, "--samples must be >= 1");
  if (o.pairs < 1) throw Error(ErrorKind::InvalidArgument, "--pairs must be >= 1");
  if (o.max_dim < 2) throw Error(ErrorKind::InvalidArgument, "--max-dim must be >= 2");
  c.tol = o.tol;
  c.n_verify = o.samples;
  c.n_pairs = o.pairs;
  c.seed = o.seed;
  c.max_dim = o.max_dim;
  return c;
}

json config_json(const RunConfig& c) {
  return {{"method", std::string(to_string(c.method))},
          {"tol", c.tol},
          {"n_verify", c.n_verify},
          {"n_pairs", c.n_pairs},
          {"seed", c.seed},
          {"max_dim", c.max_dim},
          {"rng", std::string(Rng::name)}};
}

json report_header(const std::string& command) {
  return {{"format_version", kFormatVersion}, {"command", command}};
}

json error_json(const std::string& command, const Error& e) {
  json j = report_header(command);
  j.update(io::to_json(e));
  return j;
}

json plain_error_json(const std::string& command, const std::string& name,
                      const std::string& message) {
  json j = report_header(command);
  j["error"] = name;
  j["message"] = message;
  j["witness"] = nullptr;
  return j;
}

RaySymmetryOracle load_oracle(const Options& o, const RunConfig& config,
                              json::object_t* input_info) {
  if (o.input.empty()) throw Error(ErrorKind::InvalidArgument, "--input is required");
  const io::OracleSpec spec = io::parse_oracle_spec(read_json_file(o.input));
  if (spec.dim > config.max_dim)
    throw Error(ErrorKind::InvalidArgument,
                "dim " + std::to_string(spec.dim) + " exceeds --max-dim " +
                    std::to_string(config.max_dim));
  if (input_info) {
    (*input_info)["dim"] = spec.dim;
    (*input_info)["kind"] = spec.kind;
  }
  // Reconstruction only sees the map through its apply().
  return opaque(io::make_oracle(spec, config.tolerances));
}

int cmd_generate(const Options& o) {
  if (o.dim < 2) throw Error(ErrorKind::InvalidArgument, "--dim must be >= 2");
  if (o.dim > o.max_dim)
    throw Error(ErrorKind::InvalidArgument, "--dim exceeds --max-dim");
  const io::OracleSpec spec = io::generate_spec(o.dim, o.kind, o.seed, o.p);
  write_text(o.output, render(io::to_json(spec)));
  return kOk;
}

int cmd_check(const Options& o) {
  const RunConfig config = make_config(o);
  json::object_t info;
  const RaySymmetryOracle oracle = load_oracle(o, config, &info);
  const SymmetryCheckReport r =
      check_symmetry_condition(oracle, config.n_pairs, config.seed, config.tol);
  json j = report_header("check");
  j["config"] = config_json(config);
  j["input"] = info;
  j.update(io::to_json(r));
  write_text(o.output, render(j));
  return r.pass ? kOk : kRejected;
}

int cmd_reconstruct(const Options& o) {
  const RunConfig config = make_config(o);
  json::object_t info;
  const RaySymmetryOracle oracle = load_oracle(o, config, &info);

  const auto start = std::chrono::steady_clock::now();
  json j = report_header("reconstruct");
  j["config"] = config_json(config);
  j["input"] = info;

  std::optional<LiftResult> canonical, inductive;
  if (config.method != Method::inductive) {
    canonical = reconstruct_canonical(oracle, config);
    j["canonical"] = io::to_json(*canonical);
  }
  if (config.method != Method::canonical) {
    inductive = reconstruct_inductive(oracle, config);
    j["inductive"] = io::to_json(*inductive);
  }

  int code = kOk;
  if (canonical && inductive) {
    const PhaseAgreement a = phase_agreement(canonical->w, inductive->w);
    const bool same_kind = canonical->kind == inductive->kind;
    const bool pass = same_kind && a.max_deviation < 1e-8;
    j["agreement"] = {{"same_kind", same_kind},
                      {"alpha", a.alpha},
                      {"max_deviation", a.max_deviation},
                      {"pass", pass}};
    if (!pass) code = kVerification;
  }
  const LiftResult& primary = canonical ? *canonical : *inductive;
  j["kind"] = std::string(to_string(primary.kind));
  j["W"] = io::from_matrix(primary.w);
  j["residual"] = primary.residual;
  j["oracle_calls"] = (canonical ? canonical->oracle_calls : 0) +
                      (inductive ? inductive->oracle_calls : 0);
  if (!o.no_timing)
    j["wall_time_ms"] = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  write_text(o.output, render(j));
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lift ray-space symmetries to unitary or antiunitary operators"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", o.output, "Output file (default: stdout)");
    sub->add_option("--max-dim", o.max_dim, "Largest accepted dimension");
    sub->add_option("--seed", o.seed, "Seed for random sampling");
  };
  auto add_run = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("-i,--input", o.input, "Oracle specification JSON")->required();
    sub->add_option("-t,--tol", o.tol, "Verification / symmetry tolerance");
    sub->add_option("--samples", o.samples, "Random rays used to verify a lift");
    sub->add_option("--pairs", o.pairs, "Random pairs for the symmetry check");
    sub->add_option("-m,--method", o.method, "canonical | inductive | both");
  };

  CLI::App* gen = app.add_subcommand("generate", "Write an oracle specification fixture");
  add_common(gen);
  gen->add_option("--dim", o.dim, "Hilbert-space dimension")->required();
  gen->add_option("--kind", o.kind, "unitary | antiunitary | transpose | depolarizing")
      ->required();
  gen->add_option("--p", o.p, "Depolarizing strength in (0, 1]");

  CLI::App* rec = app.add_subcommand("reconstruct", "Reconstruct the lift of an oracle");
  add_run(rec);
  rec->add_flag("--no-timing", o.no_timing, "Omit wall_time_ms for reproducible reports");

  CLI::App* chk = app.add_subcommand("check", "Certify the symmetry condition");
  add_run(chk);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << render(plain_error_json("usage", "UsageError", e.what()));
    return kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "generate") return cmd_generate(o);
    if (command == "check") return cmd_check(o);
    return cmd_reconstruct(o);
  } catch (const Error& e) {
    const std::string text = render(error_json(command, e));
    try {
      write_text(o.output, text);
    } catch (const IoError&) {
      std::cout << text;
    }
    return exit_code_for(e);
  } catch (const IoError& e) {
    std::cout << render(plain_error_json(command, "IoError", e.what()));
    return kIo;
  }
}
