// Acceptance suite: one PASS/FAIL line per criterion, verdicts in
// <out>/acceptance.json. Exit status is nonzero when any criterion fails.
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gradflow/acceptance.hpp"
#include "gradflow/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gradflow acceptance suite"};
  std::vector<int> only;
  std::string out = "acceptance_out";
  app.add_option("--only", only, "Criteria to run (default: all)")->delimiter(',');
  app.add_option("--out", out, "Directory for acceptance.json");
  CLI11_PARSE(app, argc, argv);

  nlohmann::json doc = nlohmann::json::array();
  int failed = 0;
  gradflow::acceptance::run(only, [&](const gradflow::acceptance::Verdict& v) {
    std::cout << gradflow::acceptance::summary_line(v) << "  (" << v.seconds << " s)" << std::endl;
    doc.push_back(gradflow::acceptance::to_json(v));
    if (!v.pass()) ++failed;
  });
  gradflow::io::write_json(std::filesystem::path(out) / "acceptance.json", {{"criteria", doc}});
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << '\n';
  return failed ? 1 : 0;
}
