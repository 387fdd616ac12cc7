// Command-line frontend for the Schur-ring / Cayley-isomorphism toolkit.
//
// Exit codes: 0 success (valid / CI / clean run), 1 semantic failure
// (invalid S-ring, not-CI, refutations), 2 input error, 3 resource bound.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sring/json_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSemantic = 1;
constexpr int kExitInput = 2;
constexpr int kExitBound = 3;

void emit(const sring::Json& j, const std::string& out_path, const std::string& format) {
  std::string text;
  if (format == "text") {
    // shallow key: value rendering; nested values stay JSON
    for (const auto& [key, value] : j.items())
      text += key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
  } else {
    text = sring::dump_deterministic(j);
  }
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw sring::input_error("cannot write " + out_path);
    out << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schur rings over finite abelian groups and Cayley-isomorphism verification"};
  app.require_subcommand(1);

  std::string out_path;
  std::string format = "json";
  app.add_option("--out", out_path, "write the report to this file instead of stdout");
  app.add_option("--format", format, "output format: json or text")
      ->check(CLI::IsMember({"json", "text"}));

  // validate FILE
  auto* cmd_validate = app.add_subcommand("validate", "check the S-ring axioms of an S-ring JSON file");
  cmd_validate->fallthrough();
  std::string validate_file;
  cmd_validate->add_option("file", validate_file, "S-ring JSON file")->required();

  // ci-check FILE
  auto* cmd_ci = app.add_subcommand("ci-check", "Babai CI check of an S-ring JSON file");
  cmd_ci->fallthrough();
  std::string ci_file;
  int ci_max_order = 64;
  cmd_ci->add_option("file", ci_file, "S-ring JSON file")->required();
  cmd_ci->add_option("--max-order", ci_max_order, "largest admissible group order");

  // decompose FILE
  auto* cmd_dec = app.add_subcommand("decompose", "P1/Q1, wreath and star certificates, trichotomy table");
  cmd_dec->fallthrough();
  std::string dec_file;
  int dec_q = 0;
  cmd_dec->add_option("file", dec_file, "S-ring JSON file")->required();
  cmd_dec->add_option("--q", dec_q, "simple prime divisor to use (default: largest)");

  // verify-theorem
  auto* cmd_verify = app.add_subcommand("verify-theorem",
                                        "sampled CI verification pipeline over Z_p^3 x Z_q");
  cmd_verify->fallthrough();
  int vp = 2, vq = 3, samples = 200, workers = 1;
  std::uint64_t seed = 1;
  int verify_max_order = 64;
  std::string artifacts_dir;
  cmd_verify->add_option("--p", vp, "prime p")->required();
  cmd_verify->add_option("--q", vq, "prime q")->required();
  cmd_verify->add_option("--samples", samples, "number of sampled colored Cayley structures");
  cmd_verify->add_option("--seed", seed, "sampler seed (reports are a pure function of it)");
  cmd_verify->add_option("--workers", workers, "worker threads");
  cmd_verify->add_option("--max-order", verify_max_order, "largest admissible group order");
  cmd_verify->add_option("--artifacts-dir", artifacts_dir,
                         "write each refutation artifact to this directory");

  // classify --group
  auto* cmd_classify = app.add_subcommand("classify", "enumerate all S-rings and match the B-catalog");
  cmd_classify->fallthrough();
  std::string classify_group;
  int classify_max_order = 16;
  bool classify_slow = false;
  bool classify_no_schurian = false;
  cmd_classify->add_option("--group", classify_group, "group spec, e.g. Z2^3 or Z5")->required();
  cmd_classify->add_option("--max-order", classify_max_order, "enumeration order bound");
  cmd_classify->add_flag("--opt-in-slow", classify_slow,
                         "allow enumeration past order 16 (e.g. Z3^3)");
  cmd_classify->add_flag("--no-schurian", classify_no_schurian, "skip Schurian checks");

  // find-non-ci --group
  auto* cmd_nonci = app.add_subcommand("find-non-ci",
                                       "search connection sets for a non-CI Cayley digraph");
  cmd_nonci->fallthrough();
  std::string nonci_group;
  cmd_nonci->add_option("--group", nonci_group, "group spec, e.g. Z8")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_validate) {
      sring::SchurPartition p = sring::sring_from_file(validate_file);
      auto report = sring::validate(p);
      emit(sring::validity_to_json(p, report), out_path, format);
      return report.ok ? kExitOk : kExitSemantic;
    }
    if (*cmd_ci) {
      sring::SchurPartition p = sring::sring_from_file(ci_file);
      sring::CiLimits limits;
      limits.max_order = ci_max_order;
      auto v = sring::babai_ci_check(p, limits);
      emit(sring::verdict_to_json(p, v), out_path, format);
      return v.ci ? kExitOk : kExitSemantic;
    }
    if (*cmd_dec) {
      sring::SchurPartition p = sring::sring_from_file(dec_file);
      auto rep = sring::validate(p);
      if (!rep.ok) {
        emit(sring::validity_to_json(p, rep), out_path, format);
        return kExitSemantic;
      }
      int q = dec_q;
      if (q == 0) {
        auto qs = sring::simple_prime_divisors(p.group());
        if (qs.empty()) throw sring::input_error("group has no simple prime divisor");
        q = qs.back();
      }
      emit(sring::decompose_to_json(p, q), out_path, format);
      return kExitOk;
    }
    if (*cmd_verify) {
      sring::VerifyConfig cfg;
      cfg.samples = samples;
      cfg.seed = seed;
      cfg.workers = workers;
      cfg.limits.max_order = verify_max_order;
      auto report = sring::verify_main_theorem(vp, vq, cfg);
      if (!artifacts_dir.empty() && !report.refutations.empty()) {
        std::filesystem::create_directories(artifacts_dir);
        int idx = 0;
        for (const auto& r : report.refutations) {
          sring::Json a;
          a["p"] = vp;
          a["q"] = vq;
          a["seed"] = seed;
          a["refutation"] = r;
          std::ofstream f(artifacts_dir + "/refutation_" + std::to_string(idx++) + ".json");
          f << sring::dump_deterministic(a);
        }
      }
      emit(sring::theorem_report_to_json(report), out_path, format);
      return report.clean() ? kExitOk : kExitSemantic;
    }
    if (*cmd_classify) {
      sring::GroupSpec h = sring::GroupSpec::parse(classify_group);
      if (h.order() > 16 && !classify_slow)
        throw sring::size_limit_error(
            "enumeration past order 16 requires --opt-in-slow (expect minutes for Z3^3)");
      sring::ClassifyOptions opts;
      opts.enum_limits.max_order = std::max(classify_max_order, classify_slow ? 27 : 0);
      opts.with_schurian = !classify_no_schurian;
      emit(sring::classify_to_json(h, opts), out_path, format);
      return kExitOk;
    }
    if (*cmd_nonci) {
      sring::GroupSpec h = sring::GroupSpec::parse(nonci_group);
      auto report = sring::find_non_ci_search(h);
      emit(sring::non_ci_report_to_json(report), out_path, format);
      return kExitOk;
    }
  } catch (const sring::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const sring::size_limit_error& e) {
    std::cerr << "resource bound: " << e.what() << "\n";
    return kExitBound;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
