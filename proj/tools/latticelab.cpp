#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latticelab/certify.hpp"
#include "latticelab/error.hpp"
#include "latticelab/gallery.hpp"
#include "latticelab/norms.hpp"

namespace ll = latticelab;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kExpectation = 1, kParse = 2, kValidation = 3, kDegenerate = 4 };

struct RunConfig {
  std::string subcommand;
  std::string spec_path;
  std::uint64_t seed = 0;
  std::size_t budget = 20000;
  std::size_t refine = 200;
  std::optional<std::size_t> dim;
  double tol = ll::kDefaultGaugeTol;
  std::string format = "json";
  std::string out;
  std::string profile_path;
  int jobs = 0;
  std::vector<double> point;
  std::string entry;
  bool all = false;
  bool json_out = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ll::ParseError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ll::ParseError(path + ": " + e.what());
  }
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw ll::ValidationError("cannot write '" + cfg.out + "'");
  out << text;
}

ll::NormOracle compile(const RunConfig& cfg) {
  const auto spec = ll::norm_spec_from_string(read_file(cfg.spec_path));
  ll::CompileOptions copt;
  copt.gauge_tol = cfg.tol;
  return ll::NormOracle::compile(spec, cfg.dim, copt);
}

// Everything that determines the report; jobs and the output path do not.
json resolved_config(const RunConfig& cfg, const ll::NormOracle& norm) {
  return {{"subcommand", cfg.subcommand},
          {"spec_path", cfg.spec_path},
          {"norm", *norm.spec()},
          {"dimension", norm.dim()},
          {"seed", cfg.seed},
          {"budget", cfg.budget},
          {"refine", cfg.refine},
          {"tol", cfg.tol},
          {"format", cfg.format}};
}

ll::PropertyReport run_analysis(const RunConfig& cfg, const ll::NormOracle& norm) {
  ll::CertifyOptions opt;
  opt.budget = {cfg.budget, cfg.refine};
  opt.seed = cfg.seed;
  opt.exec = {cfg.jobs};
  return ll::analyze(norm, opt, resolved_config(cfg, norm));
}

std::string render(const RunConfig& cfg, const ll::PropertyReport& report) {
  if (cfg.format == "csv") return ll::constants_csv(report);
  if (cfg.format == "text") return ll::report_text(report);
  return json(report).dump(2) + "\n";
}

std::string vec_text(const ll::Func& f) { return json(f).dump(); }

int cmd_analyze(const RunConfig& cfg) {
  const auto norm = compile(cfg);
  const auto report = run_analysis(cfg, norm);
  emit(cfg, render(cfg, report));
  return kOk;
}

struct Failure {
  std::string message;
};

std::optional<Failure> check_range(const std::string& name, const ll::ConstantEstimate& e,
                                   const json& range) {
  if (!range.is_object()) throw ll::ParseError("profile range for '" + name + "' must be an object");
  for (auto it = range.begin(); it != range.end(); ++it) {
    if (it.key() != "min" && it.key() != "max") {
      throw ll::ParseError("profile range for '" + name + "': unknown key '" + it.key() + "'");
    }
    if (!it.value().is_number()) {
      throw ll::ParseError("profile range for '" + name + "': '" + it.key() + "' must be a number");
    }
  }
  const double lo = range.value("min", -ll::kInfinity);
  const double hi = range.value("max", ll::kInfinity);
  if (e.value >= lo && e.value <= hi) return std::nullopt;
  std::ostringstream os;
  os << std::setprecision(17) << name << " = " << e.value << " outside [" << lo << ", " << hi
     << "]; witness " << json(e.witness).dump();
  return Failure{os.str()};
}

std::optional<Failure> check_profile(const json& profile, const ll::PropertyReport& report) {
  if (!profile.is_object()) throw ll::ParseError("profile must be a JSON object");
  const auto& est = report.estimates;
  auto expect_bool = [](const json& v, const std::string& key) {
    if (!v.is_boolean()) throw ll::ParseError("profile key '" + key + "' must be a boolean");
    return v.get<bool>();
  };
  std::optional<Failure> first;
  auto note = [&](std::optional<Failure> f) {
    if (!first && f) first = std::move(f);
  };
  for (auto it = profile.begin(); it != profile.end(); ++it) {
    const std::string& key = it.key();
    if (key == "strictly_rectangular") {
      const bool want = expect_bool(it.value(), key);
      if (want != report.strictly_rectangular()) {
        std::ostringstream os;
        os << std::setprecision(17) << "strictly_rectangular expected "
           << (want ? "true" : "false") << ", restriction constant " << est.restriction.value
           << "; witness " << json(est.restriction.witness).dump();
        note(Failure{os.str()});
      }
    } else if (key == "riesz") {
      const bool want = expect_bool(it.value(), key);
      if (want && est.riesz) {
        std::ostringstream os;
        os << std::setprecision(17) << "riesz expected true; witness f=" << vec_text(est.riesz->f)
           << ", g=" << vec_text(est.riesz->g) << " with |f| <= |g| and ||f||/||g|| = "
           << est.riesz->ratio;
        note(Failure{os.str()});
      } else if (!want && !est.riesz) {
        note(Failure{"riesz expected false; no violation found (ideal constant " +
                     std::to_string(est.ideal.value) + ")"});
      }
    } else if (key == "audit_passed") {
      const bool want = expect_bool(it.value(), key);
      if (want != report.audit.passed()) {
        const auto* row = report.audit.first_failure();
        note(Failure{std::string("audit_passed expected ") + (want ? "true" : "false") +
                     (row ? "; first failing relation: " + row->relation : "")});
      }
    } else if (key == "restriction") {
      note(check_range(key, est.restriction, it.value()));
    } else if (key == "monotonicity") {
      note(check_range(key, est.monotonicity, it.value()));
    } else if (key == "ideal") {
      note(check_range(key, est.ideal, it.value()));
    } else if (key == "unconditional") {
      note(check_range(key, est.unconditional, it.value()));
    } else if (key == "abs_lipschitz") {
      note(check_range(key, est.abs_lipschitz, it.value()));
    } else {
      throw ll::ParseError("unknown profile key '" + key + "'");
    }
  }
  return first;
}

int cmd_certify(const RunConfig& cfg) {
  const json profile = read_json_file(cfg.profile_path);
  const auto norm = compile(cfg);
  const auto report = run_analysis(cfg, norm);
  const auto failure = check_profile(profile, report);
  if (!cfg.out.empty()) emit(cfg, render(cfg, report));
  if (failure) {
    std::cerr << "expectation failed: " << failure->message << '\n';
    return kExpectation;
  }
  std::cout << "all expectations hold\n";
  return kOk;
}

int cmd_gauge(RunConfig cfg) {
  const auto spec = ll::norm_spec_from_string(read_file(cfg.spec_path));
  if (!cfg.dim && !ll::dimension_hint(*spec)) cfg.dim = cfg.point.size();
  const auto norm = compile(cfg);
  const auto* node = std::get_if<ll::GaugeNode>(&norm.spec()->node);
  if (!node) throw ll::ValidationError("gauge: spec root must be a gauge norm");
  if (cfg.point.size() != norm.dim()) {
    throw ll::DimensionError("gauge: point has " + std::to_string(cfg.point.size()) +
                             " coordinates, norm has dimension " + std::to_string(norm.dim()));
  }
  const double value = ll::gauge(*node->body, ll::Func(cfg.point), cfg.tol);
  std::ostringstream os;
  os << std::setprecision(17) << value << '\n';
  emit(cfg, os.str());
  return kOk;
}

int cmd_gallery(const RunConfig& cfg) {
  std::vector<std::string> names;
  if (cfg.all) {
    for (const auto& e : ll::list_entries()) names.push_back(e.name);
  } else if (!cfg.entry.empty()) {
    names.push_back(cfg.entry);
  } else {
    std::ostringstream os;
    for (const auto& e : ll::list_entries()) os << e.name << "  " << e.description << '\n';
    emit(cfg, os.str());
    return kOk;
  }
  std::vector<ll::GalleryResult> results;
  for (const auto& name : names) {
    results.push_back(ll::run_entry(name, cfg.all ? std::nullopt : cfg.dim, {cfg.jobs}));
  }
  bool ok = true;
  std::string text;
  if (cfg.json_out) {
    text = json(results).dump(2) + "\n";
  }
  for (const auto& r : results) {
    ok = ok && r.passed();
    if (!cfg.json_out) text += ll::gallery_text(r);
  }
  emit(cfg, text);
  return ok ? kOk : kExpectation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latticelab: finite-dimensional lab for norms on function spaces"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool spec_required) {
    auto* spec = sub->add_option("--spec", cfg.spec_path, "norm spec JSON file");
    if (spec_required) spec->required();
    sub->add_option("--dim", cfg.dim, "dimension (number of atoms)");
    sub->add_option("--tol", cfg.tol, "gauge tolerance")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--jobs", cfg.jobs, "worker cap (1 = serial)")->check(CLI::NonNegativeNumber);
  };
  auto add_search = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--budget", cfg.budget, "random candidates per search");
    sub->add_option("--refine", cfg.refine, "refinement polls per record");
    sub->add_option("--format", cfg.format, "json | csv | text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
  };

  auto* analyze = app.add_subcommand("analyze", "estimate all structural constants");
  add_common(analyze, true);
  add_search(analyze);

  auto* certify = app.add_subcommand("certify", "check a report against a profile");
  add_common(certify, true);
  add_search(certify);
  certify->add_option("--profile", cfg.profile_path, "expected verdicts JSON")->required();

  auto* gauge = app.add_subcommand("gauge", "evaluate a gauge norm at a point");
  add_common(gauge, true);
  gauge->add_option("--point", cfg.point, "coordinates, comma separated")
      ->required()
      ->delimiter(',');

  auto* gallery = app.add_subcommand("gallery", "run built-in examples");
  gallery->add_option("name", cfg.entry, "entry name");
  gallery->add_flag("--all", cfg.all, "run every entry");
  gallery->add_flag("--json", cfg.json_out, "JSON output");
  gallery->add_option("--dim", cfg.dim, "dimension for parameterized entries");
  gallery->add_option("--out", cfg.out, "output path (default stdout)");
  gallery->add_option("--jobs", cfg.jobs, "worker cap (1 = serial)")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (cfg.subcommand == "analyze") return cmd_analyze(cfg);
    if (cfg.subcommand == "certify") return cmd_certify(cfg);
    if (cfg.subcommand == "gauge") return cmd_gauge(cfg);
    return cmd_gallery(cfg);
  } catch (const ll::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const ll::UnknownEntryError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const ll::DegenerateNormError& e) {
    std::cerr << "degenerate norm: " << e.what() << '\n';
    return kDegenerate;
  } catch (const ll::Error& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  }
}
