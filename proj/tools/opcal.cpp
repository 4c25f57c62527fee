// Command-line front end: load a JSON workspace, run one command (or the
// workspace's command list), print a deterministic JSON report.
//
// Usage:
//   opcal <workspace.json>                     run the file's "commands" list
//   opcal <workspace.json> <command> [args...] run a single command
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or load error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "opcal/workspace.hpp"

namespace {

int usage() {
  std::cerr << "usage: opcal <workspace.json> [command args...]\n"
            << "commands:\n"
            << "  compose L R [--m-bound N] [--arity-bound N]\n"
            << "  check operad O --bound N\n"
            << "  check algebra A --bound N\n"
            << "  free-algebra O M --degree N\n"
            << "  endo M --bound N\n"
            << "  maps O P --bound N\n"
            << "  universal-property O M --bound N\n"
            << "  adjunction O M A --bound N\n"
            << "  change-colors f X [--direction pullback|pushforward]\n"
            << "  cartesian M --bound N\n";
  return 2;
}

} // namespace

int main(int argc, char** argv) {
  if (argc < 2) return usage();
  try {
    opcal::Workspace w = opcal::parse_spec(argv[1]);
    bool all_pass = true;
    if (argc == 2) {
      if (w.commands.empty()) {
        std::cerr << "error: no command given and the workspace has no \"commands\" list\n";
        return 2;
      }
      opcal::Json reports = opcal::Json::array();
      for (const auto& cmd : w.commands) {
        auto [rep, pass] = opcal::run_command(w, cmd);
        reports.push_back(std::move(rep));
        all_pass = all_pass && pass;
      }
      std::cout << reports.dump(2) << "\n";
    } else {
      std::vector<std::string> cmd(argv + 2, argv + argc);
      auto [rep, pass] = opcal::run_command(w, cmd);
      all_pass = pass;
      std::cout << rep.dump(2) << "\n";
    }
    return all_pass ? 0 : 1;
  } catch (const opcal::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
