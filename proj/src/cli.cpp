#include "cheaptalk/cli.hpp"

#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "cheaptalk/audit.hpp"
#include "cheaptalk/errors.hpp"
#include "cheaptalk/report.hpp"
#include "cheaptalk/verify.hpp"

namespace cheaptalk {

namespace {

Json header(const char* command) {
  Json j;
  j["version"] = kReportVersion;
  j["command"] = command;
  return j;
}

Json target_json(const Game& game, const Target& target) {
  Json out = Json::array();
  for (std::size_t q = 0; q < target.dist.size(); ++q) {
    Json profile = Json::array();
    for (std::size_t i = 0; i < target.dist.support[q].size(); ++i) {
      profile.push_back(game.action_label(static_cast<int>(i), target.dist.support[q][i]));
    }
    Json entry{{"profile", profile}, {"probability", real_json(target.dist.probs[q])}};
    if (target.exact) entry["exact"] = target.exact->at(q).to_string();
    out.push_back(entry);
  }
  return out;
}

TypeConditionalPolicy dists_of(const std::map<std::size_t, Target>& policy) {
  TypeConditionalPolicy out;
  for (const auto& [t, target] : policy) out.emplace(t, target.dist);
  return out;
}

Json instance_json(const ProtocolInstance& inst, bool debug) {
  Json out;
  out["cells"] = inst.cells();
  out["index"] = index_summary_json(inst.index, debug);
  Json groups = Json::array();
  for (const auto& g : inst.groups) {
    Json j;
    j["components"] = g.decomposition.flat.size();
    j["partition_cells"] = g.partition.size();
    if (inst.bayesian()) j["type_profiles"] = g.type_profiles;
    if (debug) {
      j["decomposition"] = decomposition_json(g.decomposition, g.target.dist.probs);
      j["partition"] = partition_json(g.partition);
    }
    groups.push_back(j);
  }
  out["groups"] = groups;
  return out;
}

CommandResult finish_simulation(const char* command, const GameFile& file,
                                const ProtocolInstance& inst, const SimulateOptions& options,
                                Json verification) {
  ProtocolRun run = run_protocol(inst, options.trials, options.sample);
  RunArtifact artifact = make_artifact(inst, run);
  AuditReport audit = audit_artifact(artifact, options.alpha);

  CommandResult result;
  result.report = header(command);
  result.report["config"] = config_json(inst.config);
  result.report["trials"] = options.trials;
  result.report["verification"] = std::move(verification);
  result.report["instance"] = instance_json(inst, options.debug_dump);
  result.report["run"] = run_summary_json(inst, run);
  result.report["audit"] = audit_json(audit);
  result.exit_code = audit.pass() ? kExitPass : kExitFail;
  if (options.artifact) {
    if (!options.debug_dump) {
      artifact.codebooks_dumped = false;
      artifact.codebooks.clear();
    }
    result.artifact = artifact_to_json(artifact, file.source, config_json(inst.config));
  }
  return result;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

std::string summary_line(const std::string& command, const CommandResult& r) {
  std::string line = command + ": " + (r.exit_code == kExitPass ? "pass" : "FAIL");
  const Json& rep = r.report;
  if (rep.contains("result") && rep["result"].contains("constraints_checked")) {
    line += " (" + std::to_string(rep["result"]["constraints_checked"].get<std::size_t>()) +
            " constraints)";
  }
  if (rep.contains("run")) {
    line += " (" + std::to_string(rep["run"]["delivered"].get<std::uint64_t>()) + " delivered, " +
            std::to_string(rep["run"]["dummy_attempts"].get<std::uint64_t>()) + " dummy draws)";
  }
  return line;
}

}  // namespace

CommandResult cmd_verify(const std::string& game_path, int precision) {
  GameFile f = load_game_file(game_path, precision);
  CommandResult r;
  r.report = header("verify");
  r.report["precision"] = precision;
  VerificationReport v;
  if (f.bayes && !f.policy.empty()) {
    v = verify_communication_equilibrium(*f.bayes, dists_of(f.policy), default_tolerance(precision));
    r.report["mode"] = "communication-equilibrium";
    r.report["result"] = verification_json(v, f.game, &*f.bayes);
  } else if (f.target) {
    v = verify_correlated_equilibrium(f.game, f.target->dist, default_tolerance(precision));
    r.report["mode"] = "correlated-equilibrium";
    r.report["result"] = verification_json(v, f.game);
  } else {
    throw UsageError("game file has neither a target nor a policy");
  }
  r.exit_code = v.pass ? kExitPass : kExitFail;
  return r;
}

CommandResult cmd_decompose(const std::string& game_path, const DecomposeOptions& options) {
  GameFile f = load_game_file(game_path, options.precision);
  if (!f.target) throw UsageError("game file has no target");
  for (const auto& p : f.target->dist.probs) {
    if (p.sign() <= 0) throw UsageError("decomposition needs a full-support target");
  }
  DecompositionOptions d;
  d.seed = options.seed;
  d.refinements = options.refinements;
  d.max_denominator = options.max_denominator;
  d.vertices = f.vertices;
  Decomposition dec = decompose(f.target->dist.probs, f.target->exact, d);
  CommandResult r;
  r.report = header("decompose");
  r.report["precision"] = options.precision;
  r.report["seed"] = options.seed;
  r.report["target"] = target_json(f.game, *f.target);
  r.report["decomposition"] = decomposition_json(dec, f.target->dist.probs);
  return r;
}

CommandResult cmd_simulate(const std::string& game_path, const SimulateOptions& options) {
  GameFile f = load_game_file(game_path, options.config.precision);
  if (!f.target) throw UsageError("game file has no target");
  ProtocolConfig config = options.config;
  config.players = f.game.num_players();
  config.decomposition.vertices = f.vertices;
  config.validate();
  Json verification = nullptr;
  if (!options.skip_verify) {
    VerificationReport v = verify_correlated_equilibrium(f.game, f.target->dist,
                                                         default_tolerance(config.precision));
    verification = verification_json(v, f.game);
    if (!v.pass) {
      CommandResult r;
      r.report = header("simulate");
      r.report["verification"] = verification;
      r.exit_code = kExitFail;
      return r;
    }
  }
  ProtocolInstance inst = setup_protocol(config, f.game, *f.target);
  CommandResult r = finish_simulation("simulate", f, inst, options, std::move(verification));
  r.report["target"] = target_json(f.game, *f.target);
  return r;
}

CommandResult cmd_simulate_bayes(const std::string& game_path, const SimulateOptions& options) {
  GameFile f = load_game_file(game_path, options.config.precision);
  BayesianGame bayes = f.as_bayesian();
  std::map<std::size_t, Target> policy = f.policy;
  if (policy.empty()) {
    if (f.bayes || !f.target) throw UsageError("game file has no policy");
    policy.emplace(0, *f.target);
  }
  ProtocolConfig config = options.config;
  config.players = f.game.num_players();
  config.validate();
  Json verification = nullptr;
  if (!options.skip_verify) {
    VerificationReport v = verify_communication_equilibrium(bayes, dists_of(policy),
                                                            default_tolerance(config.precision));
    verification = verification_json(v, f.game, &bayes);
    if (!v.pass) {
      CommandResult r;
      r.report = header("simulate-bayes");
      r.report["verification"] = verification;
      r.exit_code = kExitFail;
      return r;
    }
  }
  ProtocolInstance inst = setup_bayesian_protocol(config, bayes, policy);
  return finish_simulation("simulate-bayes", f, inst, options, std::move(verification));
}

CommandResult cmd_audit(const std::string& artifact_path, double alpha) {
  RunArtifact artifact = artifact_from_json(read_json_file(artifact_path));
  AuditReport audit = audit_artifact(artifact, alpha);
  CommandResult r;
  r.report = header("audit");
  r.report["audit"] = audit_json(audit);
  r.exit_code = audit.pass() ? kExitPass : kExitFail;
  return r;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mediator-free cheap-talk protocol simulator and equilibrium toolkit", "cheaptalk"};
  app.require_subcommand(1);

  std::string game_path;
  std::string report_path;
  int precision = kDefaultPrecision;
  std::uint64_t seed = 0;

  auto* verify = app.add_subcommand("verify", "Check the target against the equilibrium inequalities");
  verify->add_option("game", game_path, "Game file")->required();
  verify->add_option("--precision", precision, "Fraction bits of fixed-point reals")->check(CLI::Range(64, 4096));
  verify->add_option("--report", report_path, "Write the JSON report here");

  DecomposeOptions dec;
  auto* decompose_cmd = app.add_subcommand("decompose", "Decompose the target into rational components");
  decompose_cmd->add_option("game", game_path, "Game file")->required();
  decompose_cmd->add_option("--precision", precision)->check(CLI::Range(64, 4096));
  decompose_cmd->add_option("--seed", seed);
  decompose_cmd->add_option("--refinements", dec.refinements, "Pieces per vertex (0: Q+1)")->check(CLI::NonNegativeNumber);
  decompose_cmd->add_option("--max-denominator", dec.max_denominator)->check(CLI::PositiveNumber);
  decompose_cmd->add_option("--report", report_path);

  SimulateOptions sim;
  std::optional<std::uint64_t> b;
  std::string artifact_path;
  std::uint64_t max_denominator = 64;
  auto add_sim_flags = [&](CLI::App* cmd) {
    cmd->add_option("game", game_path, "Game file")->required();
    cmd->add_option("--precision", precision)->check(CLI::Range(64, 4096));
    cmd->add_option("--seed", seed);
    cmd->add_option("--trials", sim.trials)->check(CLI::PositiveNumber);
    cmd->add_option("--b", b, "Dummy index count (default ceil(X/10), at most X/5)");
    cmd->add_option("--multiplier", sim.config.multiplier)->check(CLI::PositiveNumber);
    cmd->add_option("--fragmentation", sim.config.fragmentation)->check(CLI::PositiveNumber);
    cmd->add_option("--redundancy", sim.config.redundancy)->check(CLI::NonNegativeNumber);
    cmd->add_option("--max-retries", sim.config.max_retries)->check(CLI::NonNegativeNumber);
    cmd->add_option("--alpha", sim.alpha)->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--refinements", sim.config.decomposition.refinements)->check(CLI::NonNegativeNumber);
    cmd->add_option("--max-denominator", max_denominator)->check(CLI::PositiveNumber);
    cmd->add_option("--sample", sim.sample, "Plays kept with full transcripts");
    cmd->add_flag("--debug-dump", sim.debug_dump, "Include secret setup material");
    cmd->add_flag("--majority-decode", sim.config.majority_decode);
    cmd->add_flag("--skip-verify", sim.skip_verify);
    cmd->add_option("--report", report_path);
    cmd->add_option("--artifact", artifact_path, "Write the run artifact here");
  };
  auto* simulate = app.add_subcommand("simulate", "Run the complete-information protocol");
  add_sim_flags(simulate);
  auto* simulate_bayes = app.add_subcommand("simulate-bayes", "Run the protocol with private types");
  add_sim_flags(simulate_bayes);

  std::string artifact_in;
  double alpha = 0.001;
  auto* audit = app.add_subcommand("audit", "Audit a run artifact");
  audit->add_option("artifact", artifact_in)->required();
  audit->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
  audit->add_option("--report", report_path);

  std::string fault;
  std::string fault_out;
  auto* inject = app.add_subcommand("inject-fault", "Corrupt a run artifact for audit testing");
  inject->group("");
  inject->add_option("artifact", artifact_in)->required();
  inject->add_option("--fault", fault)->required();
  inject->add_option("--out", fault_out)->required();
  inject->add_option("--seed", seed);

  std::vector<std::string> argv_store = args;
  argv_store.insert(argv_store.begin(), "cheaptalk");
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    CommandResult result;
    std::string name;
    if (*verify) {
      name = "verify";
      result = cmd_verify(game_path, precision);
    } else if (*decompose_cmd) {
      name = "decompose";
      dec.precision = precision;
      dec.seed = seed;
      result = cmd_decompose(game_path, dec);
    } else if (*simulate || *simulate_bayes) {
      name = *simulate ? "simulate" : "simulate-bayes";
      sim.config.precision = precision;
      sim.config.seed = seed;
      sim.config.dummy_count = b;
      sim.config.decomposition.max_denominator = max_denominator;
      sim.artifact = !artifact_path.empty();
      result = *simulate ? cmd_simulate(game_path, sim) : cmd_simulate_bayes(game_path, sim);
      if (result.artifact) write_file(artifact_path, render(*result.artifact));
    } else if (*audit) {
      name = "audit";
      result = cmd_audit(artifact_in, alpha);
    } else if (*inject) {
      Json doc = read_json_file(artifact_in);
      RunArtifact artifact = artifact_from_json(doc);
      inject_fault(artifact, parse_fault_kind(fault), seed);
      write_file(fault_out, render(artifact_to_json(artifact, doc["game"], doc["config"])));
      out << "inject-fault: wrote " << fault_out << "\n";
      return kExitPass;
    }
    if (report_path.empty()) {
      out << render(result.report);
    } else {
      write_file(report_path, render(result.report));
      out << summary_line(name, result) << "\n";
    }
    return result.exit_code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const ProtocolError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

}  // namespace cheaptalk
