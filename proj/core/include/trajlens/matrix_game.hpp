#pragma once

#include <vector>

namespace trajlens {

// Two-player zero-sum matrix game; the row player maximizes. Entries must
// be finite and the matrix rectangular. Sizes are capped at 8x8: the
// support-enumeration solver is exact at desk scale and everything this
// library builds stays 2x2 apart from one selector row.
struct MatrixGame {
  std::vector<std::vector<double>> a;

  static MatrixGame from_rows(std::vector<std::vector<double>> rows);

  int rows() const { return static_cast<int>(a.size()); }
  int cols() const { return a.empty() ? 0 : static_cast<int>(a[0].size()); }
};

struct GameSolution {
  double value = 0.0;
  std::vector<double> x;  // optimal row mix
  std::vector<double> y;  // optimal column mix
};

// Support enumeration: support pairs of equal size are visited smallest
// first, row and column subsets each in lexicographic order, and the
// first pair whose equalizing system yields probability vectors passing
// the duality certificate (within 1e-9) wins. Degenerate games therefore
// return a deterministic representative solution. Throws
// SingularGameError when no pair certifies, std::invalid_argument beyond
// 8x8.
GameSolution solve_matrix_game(const MatrixGame& A);

// min over columns of x^T A: the payoff x guarantees against a
// best-responding column player.
double best_response_value(const MatrixGame& A, const std::vector<double>& x);

}  // namespace trajlens
