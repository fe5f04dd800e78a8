// Synthetic audience driver: runs one session against a target and checks
// the server's tabulation against its own ledger.

#include "ars/sim/audience_sim.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"arssim: simulated audience"};
  ars::sim::SimConfig config;
  std::string arrival = "uniform";
  std::string config_file;
  std::string visibility = "protected";
  std::string data_dir;
  std::int64_t duration_s = config.duration.count();
  app.add_option("--participants", config.participants, "number of simulated participants");
  app.add_option("--seed", config.seed, "random seed");
  app.add_option("--arrival", arrival, "uniform | burst-open | burst-deadline");
  app.add_option("--late", config.late_fraction, "fraction of participants who submit after the deadline");
  app.add_option("--resubmit", config.resubmit_probability, "probability of resubmitting a question");
  app.add_option("--target", config.target, "base URL, or loopback for an in-process server");
  app.add_option("--duration", duration_s, "answering window length in seconds");
  app.add_option("--concurrency", config.concurrency, "concurrent client threads");
  app.add_option("--password", config.teacher_password, "teacher password for a URL target");
  app.add_option("--visibility", visibility, "protected | public");
  app.add_option("--config", config_file, "JSON file with a \"questions\" array");
  app.add_option("--data-dir", data_dir, "keep the loopback event log in this directory");
  CLI11_PARSE(app, argc, argv);

  try {
    config.arrival = ars::sim::parse_arrival(arrival);
    config.duration = std::chrono::seconds{duration_s};
    config.visibility = ars::parse_visibility(visibility);
    if (!data_dir.empty()) {
      config.data_dir = data_dir;
    }
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) {
        std::cerr << "arssim: cannot read " << config_file << "\n";
        return 2;
      }
      const auto j = nlohmann::json::parse(in);
      config.questions = ars::sim::questions_from_json(j.at("questions"));
    }
    const auto report = ars::sim::run_sim(config);
    std::cout << report.to_json().dump(2) << "\n";
    if (!report.equal) {
      std::cerr << "arssim: mismatch: " << report.mismatch << "\n";
    }
    return report.equal ? 0 : 1;
  } catch (const ars::Error& e) {
    std::cerr << "arssim: " << ars::to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "arssim: " << e.what() << "\n";
    return 2;
  }
}
