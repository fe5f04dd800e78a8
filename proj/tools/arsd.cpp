// Response service daemon.

#include "ars/engine.hpp"
#include "ars/http/api.hpp"
#include "ars/http/auth.hpp"
#include "ars/http/config.hpp"
#include "ars/http/server.hpp"
#include "ars/persistence.hpp"

#include "CLI11.hpp"

#include <csignal>
#include <iostream>
#include <thread>

namespace {

struct Restored {
  ars::EngineState state;
  std::string source;
};

Restored restore(const std::filesystem::path& data_dir, const ars::FileEventLog& log) {
  const auto snap_path = data_dir / "snapshot";
  const auto& events = log.recovered();
  if (std::filesystem::exists(snap_path)) {
    const auto blob = ars::read_file(snap_path);
    const auto covered = ars::decode_snapshot(blob).offset;
    std::vector<ars::Event> tail;
    for (const auto& e : events) {
      if (e.offset > covered) tail.push_back(e);
    }
    return {ars::load(blob, tail), "snapshot at offset " + std::to_string(covered) + " + " +
                                       std::to_string(tail.size()) + " events"};
  }
  return {ars::replay(events), std::to_string(events.size()) + " events replayed"};
}

int serve(const std::optional<std::filesystem::path>& config_file) {
  const auto config = ars::http::load_config(config_file, ars::http::process_env());
  std::filesystem::create_directories(config.data_dir);

  // Signals are collected by a dedicated thread so shutdown runs outside a handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ars::FileEventLog log(config.data_dir / "events.log",
                        config.fsync ? ars::Durability::Sync : ars::Durability::Flush);
  for (const auto& w : log.warnings()) {
    std::cerr << "arsd: " << w << "\n";
  }
  auto [state, source] = restore(config.data_dir, log);
  std::cerr << "arsd: restored " << source << "\n";

  ars::SystemClock clock;
  ars::UlidSource ids(clock);
  ars::Engine engine(std::move(state), log, clock, ids);
  if (config.teacher_password_hash.empty()) {
    std::cerr << "arsd: TEACHER_PASSWORD_HASH is not set; teacher login is disabled\n";
  }
  ars::http::TeacherAuth auth(config.teacher_password_hash, config.session_ttl, clock);
  ars::http::ParticipantRegistry participants(clock, config.submit_cap);
  ars::http::ApiOptions options;
  options.web_root = config.web_root;
  options.refresh_interval = config.refresh_interval;
  ars::http::Api api(engine, auth, participants, options);
  ars::http::HttpServer server(api);
  const int port = server.bind(config.bind_host, config.bind_port);
  std::cerr << "arsd: listening on " << config.bind_host << ":" << port << "\n";

  std::atomic<bool> running{true};
  std::thread sweeper([&] {
    while (running) {
      std::this_thread::sleep_for(std::chrono::milliseconds{250});
      try {
        engine.sweep_expired();
      } catch (const std::exception& e) {
        std::cerr << "arsd: sweep: " << e.what() << "\n";
      }
    }
  });
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    running = false;
    server.stop();
  });

  server.listen();
  running = false;
  sweeper.join();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();

  ars::write_file_atomic(config.data_dir / "snapshot", engine.snapshot_blob());
  std::cerr << "arsd: snapshot written at offset " << log.last_offset() << "\n";
  return 0;
}

int take_snapshot(const std::filesystem::path& data_dir) {
  const auto log = ars::read_log_file(data_dir / "events.log");
  for (const auto& w : log.warnings) {
    std::cerr << "arsd: " << w << "\n";
  }
  const auto outcome = ars::replay_log(log);
  if (outcome.corrupt_offset) {
    std::cerr << "arsd: corrupt record at offset " << *outcome.corrupt_offset << "\n";
    return 1;
  }
  ars::write_file_atomic(data_dir / "snapshot", ars::snapshot(outcome.state));
  std::cout << "snapshot at offset " << outcome.state.offset << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"arsd: audience response service"};
  app.require_subcommand(1);

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  std::string config_file;
  serve_cmd->add_option("--config", config_file, "KEY = value configuration file");

  auto* hash_cmd = app.add_subcommand("hash-password", "print an Argon2id hash for TEACHER_PASSWORD_HASH");
  std::string password;
  hash_cmd->add_option("password", password)->required();

  auto* snap_cmd = app.add_subcommand("snapshot", "replay the event log and write a snapshot");
  std::string data_dir = "data";
  snap_cmd->add_option("--data-dir", data_dir);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*serve_cmd) {
      return serve(config_file.empty() ? std::nullopt
                                       : std::optional<std::filesystem::path>(config_file));
    }
    if (*hash_cmd) {
      std::cout << ars::http::hash_password(password, ars::http::HashStrength::Interactive) << "\n";
      return 0;
    }
    return take_snapshot(data_dir);
  } catch (const ars::Error& e) {
    std::cerr << "arsd: " << ars::to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "arsd: " << e.what() << "\n";
    return 1;
  }
}
