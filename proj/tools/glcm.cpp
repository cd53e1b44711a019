// Batch driver: parse instance files, run the certificate pipeline or one of
// the named verification suites, and emit structured result documents.
//
//   glcm run --instance FILE [--checks a,b,c] [--out FILE]
//   glcm suite --suite {ellis,quasihom,sl2,nonstd} [--seed N] [--samples N]
//   glcm batch [--seed N] [--count N]
//   glcm sign --expr EXPR [--tower ug|ug2|ug2g]
//   glcm explain CHECK-ID | glcm explain --list
//
// Exit codes: 0 all selected checks pass, 1 a check failed, 2 usage or
// validation error. GLCM_WORKERS bounds the worker count for batches.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "glcm/suites.hpp"

namespace {

int worker_count() {
  if (char const* env = std::getenv("GLCM_WORKERS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(4u, hw));
}

void write_output(nlohmann::json const& doc, std::string const& out_path) {
  std::string text = doc.dump(2);
  text.push_back('\n');
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
    out << text;
  }
}

int run_instance(std::string const& path, std::vector<std::string> const& check_filter,
                 std::string const& out_path, bool dump_algebra) {
  glcm::InstanceFile file = glcm::load_instance(path);
  glcm::PipelineInstance inst = glcm::make_pipeline_instance(file.group, file.x, file.options);

  glcm::Certificate all;
  glcm::Certificate main = glcm::theorem_certificate(inst);
  glcm::Certificate alt = glcm::alt_error_sets(inst);
  glcm::Certificate col = glcm::collapse_certificate(inst);
  for (auto* c : {&main, &alt, &col}) {
    for (auto& r : c->checks) all.checks.push_back(std::move(r));
  }
  if (file.quasihom) {
    // a user-supplied value table, checked against the definition over this
    // instance's algebra
    glcm::CheckResult r;
    r.id = "def21-items";
    try {
      auto const& qi = *file.quasihom;
      auto base = glcm::GSubset::of(qi.target, qi.error_base);
      auto q = glcm::make_quasihom(inst.group, qi.target, qi.values, base);
      auto v = glcm::check_glcm(q, inst.x, q.error_set(), inst.algebra);
      r.pass = v.pass;
      r.details["i_bound"] = v.i_bound;
      r.details["l_min"] = v.l_min;
      if (!v.counterexample.is_null()) r.details["counterexample"] = v.counterexample;
    } catch (std::exception const& e) {
      r.pass = false;
      r.details["error"] = e.what();
    }
    all.checks.push_back(std::move(r));
  }

  std::vector<std::string> selected = check_filter.empty() ? file.checks : check_filter;
  bool ok = true;
  if (selected.empty()) {
    ok = all.all_pass();
  } else {
    glcm::Certificate filtered;
    for (auto const& id : selected) {
      auto const* r = all.find(id);
      if (!r) throw std::invalid_argument("selected check not produced by this instance: " + id);
      filtered.checks.push_back(*r);
    }
    ok = filtered.all_pass();
    all = std::move(filtered);
  }
  nlohmann::json doc = glcm::certificate_document(file, inst, all);
  if (dump_algebra) {
    doc["algebra"] = glcm::algebra_dump(inst.algebra);
    doc["algebra"]["op_table"] = glcm::dump_op_table(inst.stone);
    doc["decomposition"] = glcm::decomposition_report(inst.dec);
  }
  write_output(doc, out_path);
  return ok ? 0 : 1;
}

int run_suite(std::string const& name, uint64_t seed, long samples, std::string const& out_path) {
  glcm::SuiteReport rep;
  if (name == "ellis") {
    rep = glcm::ellis_suite(seed);
  } else if (name == "quasihom") {
    rep = glcm::quasihom_suite(seed, samples > 0 ? static_cast<int>(std::min<long>(samples, 1000)) : 50);
  } else if (name == "sl2") {
    rep = glcm::sl2_suite(seed, samples > 0 ? samples : 10000);
  } else if (name == "nonstd") {
    rep = glcm::nonstd_suite(seed, samples > 0 ? samples : 1000);
  } else {
    throw CLI::ValidationError("--suite", "unknown suite '" + name + "'");
  }
  write_output(rep.to_json(), out_path);
  return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-scale locally compact model certificates"};
  app.require_subcommand(1);

  std::string instance_path, out_path, checks_csv;
  bool dump_algebra = false;
  auto* run = app.add_subcommand("run", "run the certificate pipeline on an instance file");
  run->add_option("--instance", instance_path, "instance file (JSON)")->required();
  run->add_option("--checks", checks_csv, "comma-separated check ids (default: all)");
  run->add_option("--out", out_path, "write the certificate document here");
  run->add_flag("--dump-algebra", dump_algebra, "include atom lists, the operation table and the decomposition report");

  std::string suite_name, suite_out;
  uint64_t seed = 1;
  long samples = 0;
  auto* suite = app.add_subcommand("suite", "run a named verification suite");
  suite->add_option("--suite", suite_name, "ellis | quasihom | sl2 | nonstd")->required();
  suite->add_option("--seed", seed, "rng seed (echoed in the report)");
  suite->add_option("--samples", samples, "sample count for randomized suites");
  suite->add_option("--out", suite_out, "write the report here");

  uint64_t batch_seed = 1;
  int batch_count = 100;
  std::string batch_out;
  auto* batch = app.add_subcommand("batch", "run the full certificate stack on random instances");
  batch->add_option("--seed", batch_seed, "rng seed");
  batch->add_option("--count", batch_count, "number of instances");
  batch->add_option("--out", batch_out, "write the summary here");

  std::string expr_text, tower_kind = "ug2g";
  auto* sign = app.add_subcommand("sign", "decide the sign of a tower expression");
  sign->add_option("--expr", expr_text, "prefix-notation expression")->required();
  sign->add_option("--tower", tower_kind, "ug (one block) | ug2 (two blocks) | ug2g (two blocks + middle infinitesimal g)");

  std::string explain_id;
  bool explain_list = false;
  auto* explain = app.add_subcommand("explain", "describe a certificate check");
  explain->add_option("id", explain_id, "check id");
  explain->add_flag("--list", explain_list, "list all check ids");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      std::vector<std::string> filter;
      std::stringstream ss(checks_csv);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) filter.push_back(tok);
      }
      return run_instance(instance_path, filter, out_path, dump_algebra);
    }
    if (*suite) return run_suite(suite_name, seed, samples, suite_out);
    if (*batch) {
      auto res = glcm::run_instance_batch(batch_seed, batch_count, worker_count());
      nlohmann::json doc;
      doc["schema"] = "glcm-batch/1";
      doc["seed"] = batch_seed;
      doc["instances"] = res.instances;
      doc["failures"] = res.failures;
      doc["seconds"] = res.seconds;
      if (!res.failure_notes.empty()) doc["failure_notes"] = res.failure_notes;
      write_output(doc, batch_out);
      return res.failures == 0 ? 0 : 1;
    }
    if (*sign) {
      glcm::Tower tw;
      glcm::add_ug_block(tw);
      if (tower_kind == "ug2") {
        glcm::add_ug_block(tw, "p");
      } else if (tower_kind == "ug2g") {
        tw.add_block({}, "g");
        glcm::add_ug_block(tw, "p");
      } else if (tower_kind != "ug") {
        throw CLI::ValidationError("--tower", "unknown tower '" + tower_kind + "'");
      }
      auto rep = glcm::sign_of_expression(tw, glcm::parse_texpr(expr_text));
      nlohmann::json doc;
      doc["sign"] = rep.sign;
      doc["leading_term"] = rep.leading_term;
      doc["depth_used"] = rep.depth_used;
      write_output(doc, "");
      return 0;
    }
    if (*explain) {
      if (explain_list) {
        for (auto const& [id, info] : glcm::check_registry()) {
          std::cout << id << "  [" << info.module << "] " << info.formula << "\n";
        }
        return 0;
      }
      if (explain_id.empty()) throw std::invalid_argument("explain: check id required (or --list)");
      std::cout << explain_id << ": " << glcm::explain_check(explain_id) << "\n";
      return 0;
    }
  } catch (glcm::HorizonError const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (std::invalid_argument const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
