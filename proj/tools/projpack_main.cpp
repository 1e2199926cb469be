// projpack: command-line front end for the line-packing toolkit.
// Exit codes: 0 success/Accepted, 2 RejectedWorse, 3 validation error,
// 4 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "projpack/analysis.hpp"
#include "projpack/bounds.hpp"
#include "projpack/catalog.hpp"
#include "projpack/certificate.hpp"
#include "projpack/constructions.hpp"
#include "projpack/errors.hpp"
#include "projpack/optimizer.hpp"
#include "projpack/packing_io.hpp"

using json = nlohmann::ordered_json;
using namespace projpack;

namespace {

std::string num(double x, int sig = 17) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", sig, x);
  return buf;
}

Field parse_field(const std::string& s) { return Field::from_letter(s.at(0)); }

std::string yesno(bool b) { return b ? "yes" : "no"; }

void write_output(const std::string& bytes, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << bytes;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open file for writing: " + out_path);
  out << bytes;
  out.flush();
  if (!out) throw IoError("cannot write file: " + out_path);
}

json certificate_json(const Certificate& cert) {
  json j;
  j["field"] = std::string(1, cert.field.letter());
  j["d"] = cert.d;
  j["n"] = cert.n;
  j["coherence_defined"] = cert.coherence_defined;
  j["coherence"] = cert.coherence;
  j["tight"] = cert.tight;
  j["tightness_residual"] = cert.tightness_residual;
  j["equiangular"] = cert.equiangular;
  j["spans"] = cert.spans;
  j["saturated"] = saturated_bound_str(cert.saturated);
  j["contradiction"] = cert.contradiction;
  j["angle_profile"] = json::array();
  for (std::size_t i = 0; i < cert.profile.values.size(); ++i)
    j["angle_profile"].push_back(
        {{"value", cert.profile.values[i]}, {"count", cert.profile.counts[i]}});
  return j;
}

void print_certificate(const Certificate& cert) {
  std::cout << "field " << cert.field.letter() << "  d " << cert.d << "  n " << cert.n
            << "\n";
  if (cert.coherence_defined)
    std::cout << "coherence    " << num(cert.coherence) << "\n";
  else
    std::cout << "coherence    undefined (n < 2)\n";
  std::cout << "tight        " << yesno(cert.tight) << " (residual "
            << num(cert.tightness_residual, 3) << ")\n";
  std::cout << "equiangular  " << yesno(cert.equiangular) << "\n";
  std::cout << "spans        " << yesno(cert.spans) << "\n";
  std::cout << "profile     ";
  for (std::size_t i = 0; i < cert.profile.values.size(); ++i)
    std::cout << " " << num(cert.profile.values[i], 12) << " x"
              << cert.profile.counts[i];
  std::cout << "\n";
  std::cout << "saturates    " << saturated_bound_str(cert.saturated) << "\n";
  if (!cert.contradiction.empty())
    std::cout << "warning      " << cert.contradiction << "\n";
}

int submit_exit_code(catalog::SubmitDecision d) {
  switch (d) {
    case catalog::SubmitDecision::Accepted: return 0;
    case catalog::SubmitDecision::RejectedWorse: return 2;
    case catalog::SubmitDecision::RejectedInvalid: return 3;
  }
  return 3;
}

void print_submit_result(const std::string& label, const catalog::SubmitResult& res) {
  std::cout << label << ": " << catalog::submit_decision_str(res.decision);
  if (res.decision != catalog::SubmitDecision::RejectedInvalid)
    std::cout << " (coherence " << num(res.coherence) << ")";
  std::cout << "\n";
  if (!res.diagnostics.empty()) std::cout << "  " << res.diagnostics << "\n";
  for (const auto& key : res.auto_updated)
    std::cout << "  AUTO " << catalog::key_str(key) << "\n";
}

struct SolveArgs {
  int d = 0, n = 0, restarts = 0, beta_rounds = 0, max_iters = 0, phase_q = 0;
  std::uint64_t seed = 0;
  double beta_init = 0, beta_growth = 0, step_init = 0, ap_shrink = 0;
  std::string field = "C", config, warm, out, catalog_dir, note = "cli",
              format = "text";
  bool require_tight = false, no_ap = false, perturb = false;
};

int run_solve(CLI::App* cmd, const SolveArgs& a) {
  optimizer::SolverConfig cfg;
  if (cmd->count("--config")) cfg = optimizer::load_config_file(a.config);
  if (cmd->count("--d")) cfg.d = a.d;
  if (cmd->count("--n")) cfg.n = a.n;
  if (cmd->count("--field")) cfg.field = parse_field(a.field);
  if (cmd->count("--restarts")) cfg.restarts = a.restarts;
  if (cmd->count("--seed")) cfg.seed = a.seed;
  if (cmd->count("--beta-init")) cfg.beta_init = a.beta_init;
  if (cmd->count("--beta-growth")) cfg.beta_growth = a.beta_growth;
  if (cmd->count("--beta-rounds")) cfg.beta_rounds = a.beta_rounds;
  if (cmd->count("--max-iters")) cfg.max_iters_per_round = a.max_iters;
  if (cmd->count("--step-init")) cfg.step_init = a.step_init;
  if (cmd->count("--ap-shrink")) cfg.ap_shrink = a.ap_shrink;
  if (a.no_ap) cfg.ap_enabled = false;
  if (a.require_tight) cfg.require_tight = true;
  if (a.perturb) cfg.perturb_escape_enabled = true;
  if (cmd->count("--phase-q")) cfg.phase_quantize_q = a.phase_q;

  std::optional<UnitFrame> warm;
  if (!a.warm.empty()) warm = io::load_packing_file(a.warm);

  const optimizer::SolveResult res = optimizer::anneal(cfg, warm);

  const bool have_bound = cfg.d >= 2 && cfg.n >= 2;
  bounds::BoundReport report;
  if (have_bound) report = bounds::best_lower_bound(cfg.d, cfg.n, cfg.field);

  if (a.format == "json") {
    json j;
    j["d"] = cfg.d;
    j["n"] = cfg.n;
    j["field"] = std::string(1, cfg.field.letter());
    j["best_coherence"] = res.best_coherence;
    j["lower_bound"] = have_bound ? report.best : 0.0;
    j["lower_bound_name"] = bounds::bound_name_str(have_bound ? report.best_name
                                                              : bounds::BoundName::None);
    j["gap_to_bound"] = res.gap_to_bound;
    j["iterations_used"] = res.iterations_used;
    j["per_restart_coherences"] = res.per_restart_coherences;
    j["certificate"] = certificate_json(res.certificate);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "d=" << cfg.d << " n=" << cfg.n << " field=" << cfg.field.letter()
              << " restarts=" << cfg.restarts << " seed=" << cfg.seed << "\n";
    std::cout << "best coherence  " << num(res.best_coherence) << "\n";
    if (have_bound)
      std::cout << "lower bound     " << num(report.best) << " ("
                << bounds::bound_name_str(report.best_name) << ")\n";
    std::cout << "gap             " << num(res.gap_to_bound, 6) << "\n";
    std::cout << "iterations      " << res.iterations_used << "\n";
    print_certificate(res.certificate);
  }

  if (!a.out.empty()) io::save_packing_file(res.best_frame, a.out);

  if (!a.catalog_dir.empty()) {
    catalog::Catalog cat = catalog::Catalog::open(a.catalog_dir);
    const auto sub = cat.submit(res.best_frame, a.note);
    print_submit_result("submit", sub);
    return submit_exit_code(sub.decision);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projective line packings: solver, bounds, constructions, catalog"};
  app.require_subcommand(1);

  // solve
  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "minimize coherence at (d, n)");
  solve->add_option("--d", sa.d, "ambient dimension");
  solve->add_option("--n", sa.n, "number of vectors");
  solve->add_option("--field", sa.field, "scalar field")->check(CLI::IsMember({"C", "R"}));
  solve->add_option("--restarts", sa.restarts, "independent random restarts");
  solve->add_option("--seed", sa.seed, "RNG seed");
  solve->add_option("--config", sa.config, "key = value solver config file");
  solve->add_option("--beta-init", sa.beta_init, "initial smoothing parameter");
  solve->add_option("--beta-growth", sa.beta_growth, "per-round beta multiplier");
  solve->add_option("--beta-rounds", sa.beta_rounds, "continuation rounds");
  solve->add_option("--max-iters", sa.max_iters, "descent iterations per round");
  solve->add_option("--step-init", sa.step_init, "initial line-search step");
  solve->add_option("--ap-shrink", sa.ap_shrink, "alternating-projection target factor");
  solve->add_flag("--no-ap", sa.no_ap, "disable alternating-projection polish");
  solve->add_flag("--require-tight", sa.require_tight, "constrain to tight frames");
  solve->add_flag("--perturb-escape", sa.perturb, "run perturbation escape after descent");
  solve->add_option("--phase-q", sa.phase_q, "snap Gram phases to q-th roots of unity")
      ->check(CLI::PositiveNumber);
  solve->add_option("--warm-start", sa.warm, "packing file used as restart 0 init");
  solve->add_option("--out", sa.out, "write the best packing here");
  solve->add_option("--catalog", sa.catalog_dir, "submit the result to this catalog");
  solve->add_option("--note", sa.note, "creator note for the submission");
  solve->add_option("--format", sa.format, "report format")
      ->check(CLI::IsMember({"text", "json"}));

  // certify
  std::string cert_file, cert_format = "text", cert_profile = "numerical";
  CLI::App* certify_cmd = app.add_subcommand("certify", "certify a packing file");
  certify_cmd->add_option("file", cert_file, "packing file")->required();
  certify_cmd->add_option("--format", cert_format, "report format")
      ->check(CLI::IsMember({"text", "json"}));
  certify_cmd->add_option("--profile", cert_profile, "tolerance profile")
      ->check(CLI::IsMember({"exact", "numerical"}));

  // bounds
  int b_d = 0, b_n = 0, b_nmax = 0, b_dmax = 0;
  std::string b_field = "C", b_format = "text", b_out;
  bool b_cross = false;
  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "lower bounds at one (d, n) or a CSV sweep");
  bounds_cmd->add_option("--d", b_d, "dimension (or sweep start)")->required();
  bounds_cmd->add_option("--n", b_n, "number of vectors (single report)");
  bounds_cmd->add_option("--d-max", b_dmax, "sweep end dimension (table mode)");
  bounds_cmd->add_option("--n-max", b_nmax, "sweep end n (table mode)");
  bounds_cmd->add_option("--field", b_field, "scalar field")
      ->check(CLI::IsMember({"C", "R"}));
  bounds_cmd->add_flag("--crossovers", b_cross, "report bound dominance crossovers");
  bounds_cmd->add_option("--out", b_out, "write output here instead of stdout");
  bounds_cmd->add_option("--format", b_format, "single-report format")
      ->check(CLI::IsMember({"text", "json"}));

  // construct
  std::string c_kind, c_in, c_out, c_field = "C";
  int c_d = 0, c_index = 0;
  CLI::App* construct =
      app.add_subcommand("construct", "closed-form packings and derived frames");
  construct->add_option("kind", c_kind, "simplex | mub | c3n5 | naimark | remove")
      ->required()
      ->check(CLI::IsMember({"simplex", "mub", "c3n5", "naimark", "remove"}));
  construct->add_option("--d", c_d, "dimension (simplex, mub)");
  construct->add_option("--field", c_field, "scalar field (simplex)")
      ->check(CLI::IsMember({"C", "R"}));
  construct->add_option("--in", c_in, "input packing file (naimark, remove)");
  construct->add_option("--index", c_index, "1-based vector to remove (remove)");
  construct->add_option("--out", c_out, "write the packing here instead of stdout");

  // submit
  std::string s_file, s_catalog, s_note = "cli";
  CLI::App* submit = app.add_subcommand("submit", "submit a packing file to a catalog");
  submit->add_option("file", s_file, "packing file")->required();
  submit->add_option("--catalog", s_catalog, "catalog root directory")->required();
  submit->add_option("--note", s_note, "creator note");

  // auto
  int a_d = 0, a_n = 0;
  std::string a_field = "C", a_catalog;
  CLI::App* auto_cmd =
      app.add_subcommand("auto", "propagate an entry downward by vector removal");
  auto_cmd->add_option("--catalog", a_catalog, "catalog root directory")->required();
  auto_cmd->add_option("--d", a_d, "dimension")->required();
  auto_cmd->add_option("--n", a_n, "source entry size")->required();
  auto_cmd->add_option("--field", a_field, "scalar field")
      ->check(CLI::IsMember({"C", "R"}));

  // table
  std::string t_catalog, t_format = "text", t_out;
  CLI::App* table = app.add_subcommand("table", "render the catalog leaderboard");
  table->add_option("--catalog", t_catalog, "catalog root directory")->required();
  table->add_option("--format", t_format, "output format")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  table->add_option("--out", t_out, "write output here instead of stdout");

  // fsck
  std::string f_catalog;
  CLI::App* fsck = app.add_subcommand("fsck", "verify catalog integrity");
  fsck->add_option("--catalog", f_catalog, "catalog root directory")->required();

  // import
  std::vector<std::string> i_files;
  std::string i_catalog, i_note = "import";
  CLI::App* import_cmd =
      app.add_subcommand("import", "submit a batch of packing files");
  import_cmd->add_option("files", i_files, "packing files")->required();
  import_cmd->add_option("--catalog", i_catalog, "catalog root directory")->required();
  import_cmd->add_option("--note", i_note, "creator note for accepted files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;  // bad usage counts as a validation error
  }

  try {
    if (solve->parsed()) return run_solve(solve, sa);

    if (certify_cmd->parsed()) {
      const UnitFrame frame = io::load_packing_file(cert_file);
      const CertifyProfile profile = cert_profile == "exact"
                                         ? CertifyProfile::exact()
                                         : CertifyProfile::numerical();
      const Certificate cert = certify(frame, profile);
      if (cert_format == "json")
        std::cout << certificate_json(cert).dump(2) << "\n";
      else
        print_certificate(cert);
      return 0;
    }

    if (bounds_cmd->parsed()) {
      const Field field = parse_field(b_field);
      if (b_cross) {
        const int nmax = bounds_cmd->count("--n-max") ? b_nmax : 49;
        const auto cross = bounds::dominance_crossovers(b_d, field, nmax);
        std::cout << "bukh_cox = welch at n =";
        for (const double x : cross.bukh_cox_welch) std::cout << " " << num(x, 8);
        std::cout << "\n";
        if (cross.levenstein_exceeds_orthoplex_at)
          std::cout << "levenstein exceeds orthoplex from n = "
                    << *cross.levenstein_exceeds_orthoplex_at << "\n";
        else
          std::cout << "levenstein never exceeds orthoplex up to n = " << nmax << "\n";
        return 0;
      }
      if (bounds_cmd->count("--n-max")) {
        const int dmax = bounds_cmd->count("--d-max") ? b_dmax : b_d;
        write_output(bounds::bounds_table_csv(b_d, dmax, b_nmax, field), b_out);
        return 0;
      }
      if (!bounds_cmd->count("--n"))
        throw ValidationError("bounds needs --n (single report) or --n-max (sweep)");
      const auto report = bounds::best_lower_bound(b_d, b_n, field);
      if (b_format == "json") {
        json j;
        j["d"] = report.d;
        j["n"] = report.n;
        j["field"] = std::string(1, field.letter());
        const auto put = [&](const char* name, const bounds::BoundValue& v) {
          json e;
          if (v.value) e["value"] = *v.value;
          e["applicable"] = v.applicable;
          if (v.boundary) e["boundary"] = true;
          if (!v.reason.empty()) e["reason"] = v.reason;
          j[name] = std::move(e);
        };
        put("bukh_cox", report.bukh_cox);
        put("welch", report.welch);
        put("orthoplex", report.orthoplex);
        put("levenstein", report.levenstein);
        j["best"] = report.best;
        j["best_name"] = bounds::bound_name_str(report.best_name);
        std::cout << j.dump(2) << "\n";
      } else {
        const auto show = [&](const char* name, const bounds::BoundValue& v) {
          std::cout << name << "  ";
          if (v.value)
            std::cout << num(*v.value) << (v.applicable ? "" : "  (outside gating)");
          else
            std::cout << "-  (" << v.reason << ")";
          std::cout << "\n";
        };
        std::cout << "d=" << report.d << " n=" << report.n << " field=" << field.letter()
                  << "\n";
        show("bukh_cox  ", report.bukh_cox);
        show("welch     ", report.welch);
        show("orthoplex ", report.orthoplex);
        show("levenstein", report.levenstein);
        std::cout << "best        " << num(report.best) << " ("
                  << bounds::bound_name_str(report.best_name) << ")\n";
      }
      return 0;
    }

    if (construct->parsed()) {
      std::optional<UnitFrame> frame;
      if (c_kind == "simplex") {
        if (!construct->count("--d")) throw ValidationError("simplex needs --d");
        frame = constructions::simplex(c_d, parse_field(c_field));
      } else if (c_kind == "mub") {
        if (!construct->count("--d")) throw ValidationError("mub needs --d");
        frame = constructions::mub_maximal(c_d);
      } else if (c_kind == "c3n5") {
        frame = constructions::conjecture_c3n5();
      } else if (c_kind == "naimark") {
        if (c_in.empty()) throw ValidationError("naimark needs --in <packing file>");
        frame = constructions::naimark_complement(io::load_packing_file(c_in));
      } else {
        if (c_in.empty()) throw ValidationError("remove needs --in <packing file>");
        const UnitFrame input = io::load_packing_file(c_in);
        if (construct->count("--index")) {
          frame = constructions::remove_vector(input, c_index);
        } else {
          auto [removed, index] = constructions::best_removal(input);
          std::cerr << "removed vector " << index << "\n";
          frame = std::move(removed);
        }
      }
      write_output(io::serialize_packing(*frame), c_out);
      if (!c_out.empty())
        std::cout << "wrote " << c_out << " (d=" << frame->d() << " n=" << frame->n()
                  << " coherence " << num(coherence(*frame)) << ")\n";
      return 0;
    }

    if (submit->parsed()) {
      catalog::Catalog cat = catalog::Catalog::open(s_catalog);
      const UnitFrame frame = io::load_packing_file(s_file);
      const auto res = cat.submit(frame, s_note);
      print_submit_result(s_file, res);
      return submit_exit_code(res.decision);
    }

    if (auto_cmd->parsed()) {
      catalog::Catalog cat = catalog::Catalog::open(a_catalog);
      const auto updated = cat.auto_propagate(parse_field(a_field), a_d, a_n);
      for (const auto& key : updated) std::cout << "AUTO " << catalog::key_str(key) << "\n";
      if (updated.empty()) std::cout << "no improvement\n";
      return 0;
    }

    if (table->parsed()) {
      catalog::Catalog cat = catalog::Catalog::open(t_catalog);
      const auto fmt = t_format == "csv"    ? catalog::TableFormat::Csv
                       : t_format == "json" ? catalog::TableFormat::Json
                                            : catalog::TableFormat::Text;
      write_output(cat.render_table(fmt), t_out);
      return 0;
    }

    if (fsck->parsed()) {
      catalog::Catalog cat = catalog::Catalog::open(f_catalog);
      const auto problems = cat.fsck();
      for (const auto& p : problems) std::cout << p << "\n";
      if (problems.empty()) {
        std::cout << "ok: " << cat.entries().size() << " entries\n";
        return 0;
      }
      return 3;
    }

    if (import_cmd->parsed()) {
      catalog::Catalog cat = catalog::Catalog::open(i_catalog);
      bool any_invalid = false, any_io = false, any_accepted = false, any_worse = false;
      for (const auto& file : i_files) {
        try {
          const UnitFrame frame = io::load_packing_file(file);
          const auto res = cat.submit(frame, i_note);
          print_submit_result(file, res);
          if (res.decision == catalog::SubmitDecision::RejectedInvalid)
            any_invalid = true;
          else if (res.decision == catalog::SubmitDecision::RejectedWorse)
            any_worse = true;
          else
            any_accepted = true;
        } catch (const ValidationError& e) {
          std::cout << file << ": invalid (" << e.what() << ")\n";
          any_invalid = true;
        } catch (const IoError& e) {
          std::cout << file << ": unreadable (" << e.what() << ")\n";
          any_io = true;
        }
      }
      if (any_invalid) return 3;
      if (any_io) return 4;
      if (any_worse && !any_accepted) return 2;
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
