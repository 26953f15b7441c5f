#include "multivision/oracle.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace multivision {

CappedSolver::CappedSolver(PrimeWindow window, GameConfig config, std::uint64_t cap,
                           SolverOptions options)
    : window_(std::move(window)), config_(config), cap_(cap), options_(options) {
  validate_config(config_);
}

PileMatrix CappedSolver::key(const Position& pos) const {
  PileMatrix k = pos.piles;
  if (options_.canonicalize_piles) std::sort(k.begin(), k.end());
  return k;
}

std::optional<Classification> CappedSolver::lookup(const Position& pos) const {
  auto it = labels_.find(key(pos));
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

Classification CappedSolver::solve(const Position& start) {
  if (start.window != window_) throw std::invalid_argument("start position uses another window");
  if (auto known = lookup(start)) return *known;

  // Explicit stack: plays can be long even on small grids.
  struct Frame {
    PileMatrix key;
    Position pos;
    std::vector<Move> moves;
    std::size_t next = 0;
    bool has_p_follower = false;
  };
  auto make_frame = [&](PileMatrix k, Position p) {
    auto moves = enumerate_moves_capped(p, config_, cap_);
    return Frame{std::move(k), std::move(p), std::move(moves), 0, false};
  };

  std::vector<Frame> stack;
  stack.push_back(make_frame(key(start), start));
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next == top.moves.size()) {
      const auto label = top.has_p_follower ? Classification::kN : Classification::kP;
      labels_.emplace(std::move(top.key), label);
      stack.pop_back();
      if (!stack.empty() && label == Classification::kP) stack.back().has_p_follower = true;
      if (labels_.size() > options_.max_positions) {
        throw std::runtime_error("oracle memo exceeded " +
                                 std::to_string(options_.max_positions) +
                                 " positions; frontier depth " + std::to_string(stack.size()));
      }
      continue;
    }
    Position follower = apply_move(top.pos, top.moves[top.next++], config_);
    PileMatrix follower_key = key(follower);
    auto it = labels_.find(follower_key);
    if (it != labels_.end()) {
      if (it->second == Classification::kP) top.has_p_follower = true;
      continue;
    }
    stack.push_back(make_frame(std::move(follower_key), std::move(follower)));
  }
  return *lookup(start);
}

OracleLabels solve_capped(const Position& start, std::uint64_t modulus, std::uint64_t cap) {
  CappedSolver solver(start.window, GameConfig{modulus}, cap);
  solver.solve(start);
  return solver.labels();
}

namespace {

void for_each_start(const PrimeWindow& window, const OracleGrid& grid,
                    const std::function<void(const Position&)>& fn) {
  const std::size_t width = window.size();
  for (std::size_t m = 1; m <= grid.max_piles; ++m) {
    std::vector<std::uint64_t> odo(m * width, 0);
    while (true) {
      std::vector<ExponentVec> piles(m, ExponentVec(width));
      for (std::size_t d = 0; d < odo.size(); ++d) piles[d / width][d % width] = odo[d];
      fn(Position{window, std::move(piles)});
      std::size_t d = odo.size();
      while (d > 0 && odo[d - 1] == grid.max_exponent) odo[--d] = 0;
      if (d == 0) break;
      ++odo[d - 1];
    }
  }
}

}  // namespace

OracleReport verify_characterization(const OracleGrid& grid, SolverOptions options) {
  const auto started = std::chrono::steady_clock::now();
  PrimeWindow window = PrimeWindow::make(grid.primes);
  CappedSolver solver(window, GameConfig{grid.power}, grid.cap, options);
  for_each_start(window, grid, [&](const Position& start) { solver.solve(start); });

  OracleReport report;
  report.grid = grid;
  report.positions_labeled = solver.labels().size();
  for (const auto& [piles, label] : solver.labels()) {
    Position pos{window, piles};
    const auto closed = classify(pos, grid.power);
    if (closed != label) report.mismatches.push_back({std::move(pos), label, closed});
  }
  report.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - started);
  return report;
}

std::vector<OracleGrid> default_oracle_grids() {
  return {
      OracleGrid{{2, 3}, 2, 2, 2, 1},
      OracleGrid{{2, 3, 5}, 1, 2, 2, 1},
      OracleGrid{{2, 3}, 2, 3, 3, 2},
  };
}

}  // namespace multivision
