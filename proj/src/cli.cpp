#include "multivision/cli.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "multivision/codec.hpp"
#include "multivision/oracle.hpp"
#include "multivision/service.hpp"
#include "multivision/sim.hpp"
#include "multivision/strategy.hpp"

namespace multivision {
namespace {

struct CliConfig {
  std::uint64_t power = 2;
  std::uint64_t cap = 1;
  std::string r = "100";
  std::uint64_t seed = 0;
  std::string file;
  std::string pos;
  std::string format = "text";
  int port = 8080;
  std::uint64_t max_moves = 10'000;

  // solve
  std::string primes;
  std::size_t max_piles = 1;
  std::uint64_t max_exp = 2;
  // simulate
  std::string agent_i = "random";
  std::string agent_ii = "optimal";
  std::uint64_t games = 1;
  // play
  bool engine_first = false;
  // serve
  std::string host = "127.0.0.1";
  std::string snapshots;
  std::string static_dir;
};

bool wire(const CliConfig& c) { return c.format == "wire"; }

std::string read_position_source(const CliConfig& c, std::istream& in) {
  if (!c.pos.empty()) {
    std::string text = c.pos;
    for (char& ch : text) {
      if (ch == ';') ch = '\n';
    }
    return text;
  }
  if (!c.file.empty()) {
    std::ifstream f(c.file);
    if (!f) throw GameError("io-error", "cannot open " + c.file);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Position load_position(const CliConfig& c, std::istream& in) {
  return new_game(parse_position_text(read_position_source(c, in)), GameConfig{c.power});
}

Exponent parse_r(const CliConfig& c) {
  Exponent r;
  if (!parse_decimal(c.r, r) || r < 1) throw GameError("bad-delay", "--r must be a positive integer");
  return r;
}

std::string vector_text(const ExponentVec& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += to_decimal(v[i]);
  }
  return out + "]";
}

int cmd_classify(const CliConfig& c, std::istream& in, std::ostream& out) {
  const Position pos = load_position(c, in);
  const auto cls = classify(pos, c.power);
  const auto totals = total_exponents(pos);
  if (wire(c)) {
    Json t = Json::array();
    for (const auto& e : totals) t.push_back(integer_json(e));
    out << make_envelope("classification",
                         Json{{"classification", std::string(1, classification_letter(cls))},
                              {"primes", position_to_json(pos)["primes"]},
                              {"totals", std::move(t)},
                              {"can_delay", can_delay(pos)}})
               .dump()
        << '\n';
  } else {
    out << classification_letter(cls) << '\n' << "totals " << vector_text(totals) << '\n';
  }
  return 0;
}

int cmd_hint(const CliConfig& c, std::istream& in, std::ostream& out) {
  const Position pos = load_position(c, in);
  const auto mv = winning_move(pos, c.power);
  if (wire(c)) {
    HintView h{classify(pos, c.power), mv, can_delay(pos)};
    GameSession s;
    s.position = pos;
    out << make_envelope("hint", hint_json(s, h)).dump() << '\n';
  } else {
    out << (mv ? format_move_text(pos, *mv) : "none: P-position") << '\n';
  }
  return 0;
}

int cmd_delay(const CliConfig& c, std::istream& in, std::ostream& out) {
  const Position pos = load_position(c, in);
  const Move mv = delay_move(pos, parse_r(c));
  if (wire(c)) {
    out << encode_wire(mv) << '\n';
  } else {
    out << format_move_text(pos, mv) << '\n';
  }
  return 0;
}

std::string ordinal(std::uint64_t k) {
  const char* suffix = "th";
  if (k % 100 < 11 || k % 100 > 13) {
    if (k % 10 == 1) suffix = "st";
    if (k % 10 == 2) suffix = "nd";
    if (k % 10 == 3) suffix = "rd";
  }
  return std::to_string(k) + suffix;
}

void print_board(const GameSession& s, std::ostream& out) {
  std::istringstream lines(format_position_text(s.position));
  std::string line;
  for (std::size_t i = 1; std::getline(lines, line); ++i) out << "  pile " << i << ": " << line << '\n';
  out << "  M is " << (classify(s.position, s.power) == Classification::kP ? "" : "not ")
      << "a " << ordinal(s.power) << " power\n";
}

int cmd_play(const CliConfig& c, std::istream& in, std::ostream& out) {
  std::string text;
  if (!c.pos.empty() || !c.file.empty()) {
    text = read_position_source(c, in);
  } else {
    // Position and moves share stdin: read pile lines up to a blank line.
    std::string line;
    while (std::getline(in, line) && !line.empty()) text += line + '\n';
  }
  GameService service;
  const Player engine = c.engine_first ? Player::kI : Player::kII;
  const std::string id = service.create_game(parse_position_text(text), c.power, engine).id;

  auto session = service.get(id);
  out << "K = " << c.power << ", you are player " << player_name(other_player(engine))
      << ". Enter moves like 'pile 1: /2 *3^1', or 'hint' / 'quit'.\n";
  while (true) {
    print_board(session, out);
    if (is_terminal(session.position)) {
      if (!session.history.winner) {
        out << "All piles are already 1; nothing to play.\n";
      } else {
        out << (*session.history.winner == engine ? "Engine wins.\n" : "You win.\n");
      }
      return 0;
    }
    if (session.whose_turn == engine) {
      const auto reply = service.engine_reply(id, std::nullopt);
      out << "engine: " << format_move_text(session.position, reply.move) << '\n';
      session = reply.session;
      continue;
    }
    out << "move> " << std::flush;
    std::string line;
    if (!std::getline(in, line)) return 0;
    if (line == "quit") return 0;
    if (line == "hint") {
      const auto h = service.hint(id);
      out << (h.move ? "hint: " + format_move_text(session.position, *h.move)
                     : std::string("no winning move: P-position"))
          << '\n';
      continue;
    }
    try {
      session = service.submit_move(id, parse_move_text(session.position, line));
    } catch (const GameError& e) {
      out << "illegal: " << e.code() << ": " << e.what() << '\n';
    }
  }
}

std::vector<std::uint64_t> parse_prime_list(const std::string& text) {
  std::vector<std::uint64_t> primes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    Exponent v;
    if (!parse_decimal(item, v) || v < 2 || v > std::numeric_limits<std::uint64_t>::max()) {
      throw GameError("bad-integer", "bad prime '" + item + "' in --primes");
    }
    primes.push_back(v.convert_to<std::uint64_t>());
  }
  return primes;
}

int cmd_solve(const CliConfig& c, std::ostream& out) {
  std::vector<OracleGrid> grids;
  if (c.primes.empty()) {
    grids = default_oracle_grids();
  } else {
    grids.push_back(OracleGrid{parse_prime_list(c.primes), c.max_piles, c.max_exp, c.power, c.cap});
  }
  bool all_hold = true;
  for (const auto& grid : grids) {
    if (grid.cap + 1 < grid.power) {
      throw GameError("bad-config", "--cap must be at least K-1 for the oracle");
    }
    const auto report = verify_characterization(grid);
    all_hold = all_hold && report.holds();
    if (wire(c)) {
      out << encode_wire(report) << '\n';
      continue;
    }
    out << "window {";
    for (std::size_t i = 0; i < grid.primes.size(); ++i) out << (i ? "," : "") << grid.primes[i];
    out << "} piles<=" << grid.max_piles << " exponents<=" << grid.max_exponent << " K=" << grid.power
        << " cap=" << grid.cap << ": " << report.positions_labeled << " positions labeled, "
        << report.mismatches.size() << " mismatches, "
        << static_cast<double>(report.elapsed.count()) / 1000.0 << " ms\n";
    for (const auto& m : report.mismatches) {
      out << "  mismatch: oracle " << classification_letter(m.oracle) << ", closed form "
          << classification_letter(m.closed_form) << "\n" << format_position_text(m.position) << '\n';
    }
  }
  return all_hold ? 0 : 1;
}

int cmd_simulate(const CliConfig& c, std::istream& in, std::ostream& out) {
  BatchConfig batch;
  batch.power = c.power;
  batch.max_moves = c.max_moves;
  batch.starts.push_back(load_position(c, in));
  batch.pairings.emplace_back(parse_agent(c.agent_i, c.seed), parse_agent(c.agent_ii, c.seed + 1));
  for (std::uint64_t g = 0; g < c.games; ++g) batch.seeds.push_back(c.seed + g);
  const auto summary = run_batch(batch);
  if (wire(c)) {
    out << encode_wire(summary) << '\n';
  } else {
    out << "games " << summary.games << ", wins I " << summary.wins_i << ", wins II "
        << summary.wins_ii << ", truncated " << summary.truncations << ", mean length "
        << summary.mean_length() << ", max length " << summary.max_length << '\n';
    for (const auto& v : summary.violations) out << "violation: " << v << '\n';
  }
  return summary.violations.empty() ? 0 : 1;
}

int cmd_serve(const CliConfig& c, std::ostream& out) {
  std::optional<std::filesystem::path> dir;
  if (!c.snapshots.empty()) dir = c.snapshots;
  GameService service(dir);
  const std::size_t recovered = service.recover();
  httplib::Server server;
  mount_routes(server, service);
  if (!c.static_dir.empty() && !server.set_mount_point("/", c.static_dir)) {
    throw GameError("io-error", "cannot serve " + c.static_dir);
  }
  out << "listening on http://" << c.host << ':' << c.port;
  if (recovered) out << " (" << recovered << " sessions recovered)";
  out << std::endl;
  if (!server.listen(c.host, c.port)) throw GameError("io-error", "cannot bind port " + std::to_string(c.port));
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"play and analyze (K-)multivision positions", "multivision"};
  app.require_subcommand(1);
  CliConfig c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-K", c.power, "power K (2 = multivision)")->check(CLI::Range(2ULL, 1ULL << 62));
    sub->add_option("--file", c.file, "read the position from a file");
    sub->add_option("--pos", c.pos, "inline position, ';' separates piles");
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "wire"}));
  };

  auto* classify_cmd = app.add_subcommand("classify", "print P or N and the total exponents");
  add_common(classify_cmd);
  auto* hint_cmd = app.add_subcommand("hint", "print a winning move");
  add_common(hint_cmd);
  auto* delay_cmd = app.add_subcommand("delay", "print a move guaranteeing r further moves");
  add_common(delay_cmd);
  delay_cmd->add_option("--r", c.r, "delay length");
  auto* play_cmd = app.add_subcommand("play", "play against the engine on stdin/stdout");
  add_common(play_cmd);
  play_cmd->add_flag("--engine-first", c.engine_first, "the engine is player I");
  auto* solve_cmd = app.add_subcommand("solve", "brute-force oracle check of the P-positions");
  solve_cmd->add_option("-K", c.power, "power K")->check(CLI::Range(2ULL, 64ULL));
  solve_cmd->add_option("--cap", c.cap, "increment cap (>= K-1)");
  solve_cmd->add_option("--primes", c.primes, "comma-separated window; default grids if omitted");
  solve_cmd->add_option("--piles", c.max_piles, "max number of piles");
  solve_cmd->add_option("--max-exp", c.max_exp, "max start exponent");
  solve_cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "wire"}));
  auto* sim_cmd = app.add_subcommand("simulate", "self-play batch");
  add_common(sim_cmd);
  sim_cmd->add_option("--agent-i", c.agent_i, "optimal | random[:cap] | delayer[:r[:cap]] | top");
  sim_cmd->add_option("--agent-ii", c.agent_ii, "agent for player II");
  sim_cmd->add_option("--games", c.games, "number of seeds");
  sim_cmd->add_option("--seed", c.seed, "first seed");
  sim_cmd->add_option("--max-moves", c.max_moves, "truncate plays after this many moves")
      ->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP game service");
  serve_cmd->add_option("--port", c.port, "TCP port")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--host", c.host, "bind address");
  serve_cmd->add_option("--snapshots", c.snapshots, "directory for session snapshots");
  serve_cmd->add_option("--static", c.static_dir, "directory of static UI files");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*classify_cmd) return cmd_classify(c, in, out);
    if (*hint_cmd) return cmd_hint(c, in, out);
    if (*delay_cmd) return cmd_delay(c, in, out);
    if (*play_cmd) return cmd_play(c, in, out);
    if (*solve_cmd) return cmd_solve(c, out);
    if (*sim_cmd) return cmd_simulate(c, in, out);
    if (*serve_cmd) return cmd_serve(c, out);
  } catch (const GameError& e) {
    err << "error: " << e.code() << ": " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace multivision
