#include "trajlens/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "trajlens/errors.hpp"

namespace trajlens {

namespace {

constexpr double kCertTol = 1e-9;
constexpr double kProbTol = 1e-12;
constexpr double kPivotTol = 1e-14;
constexpr int kMaxSide = 8;

// Gaussian elimination with partial pivoting on an n x (n+1) augmented
// system. Returns false when the matrix is numerically singular.
bool solve_linear(std::vector<std::vector<double>>& m, std::vector<double>& out) {
  const int n = static_cast<int>(m.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[static_cast<size_t>(r)][static_cast<size_t>(col)]) >
          std::abs(m[static_cast<size_t>(piv)][static_cast<size_t>(col)]))
        piv = r;
    if (std::abs(m[static_cast<size_t>(piv)][static_cast<size_t>(col)]) < kPivotTol)
      return false;
    std::swap(m[static_cast<size_t>(col)], m[static_cast<size_t>(piv)]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double factor = m[static_cast<size_t>(r)][static_cast<size_t>(col)] /
                      m[static_cast<size_t>(col)][static_cast<size_t>(col)];
      if (factor == 0.0) continue;
      for (int c = col; c <= n; ++c)
        m[static_cast<size_t>(r)][static_cast<size_t>(c)] -=
            factor * m[static_cast<size_t>(col)][static_cast<size_t>(c)];
    }
  }
  out.resize(static_cast<size_t>(n));
  for (int r = 0; r < n; ++r)
    out[static_cast<size_t>(r)] = m[static_cast<size_t>(r)][static_cast<size_t>(n)] /
                                  m[static_cast<size_t>(r)][static_cast<size_t>(r)];
  return true;
}

// First k-subset of {0..n-1} in lexicographic order, then advance.
bool first_subset(std::vector<int>& idx, int k) {
  idx.resize(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
  return true;
}

bool next_subset(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[static_cast<size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[static_cast<size_t>(i)];
  for (int j = i + 1; j < k; ++j)
    idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j) - 1] + 1;
  return true;
}

bool clamp_probability(std::vector<double>& p) {
  double sum = 0.0;
  for (double v : p) {
    if (v < -kProbTol) return false;
    sum += std::max(v, 0.0);
  }
  if (!(sum > 0.0)) return false;
  for (double& v : p) v = std::max(v, 0.0) / sum;
  return true;
}

}  // namespace

MatrixGame MatrixGame::from_rows(std::vector<std::vector<double>> rows) {
  if (rows.empty() || rows[0].empty())
    throw ModelError("matrix game needs at least one row and one column");
  const size_t n = rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != n) throw ModelError("matrix game rows have unequal lengths");
    for (double v : r)
      if (!std::isfinite(v)) throw ModelError("matrix game entry is not finite");
  }
  MatrixGame g;
  g.a = std::move(rows);
  return g;
}

GameSolution solve_matrix_game(const MatrixGame& A) {
  const int m = A.rows();
  const int n = A.cols();
  if (m < 1 || n < 1 || A.a[0].empty())
    throw ModelError("matrix game needs at least one row and one column");
  if (m > kMaxSide || n > kMaxSide)
    throw std::invalid_argument("matrix games larger than 8x8 are not supported");

  std::vector<int> R, C;
  for (int k = 1; k <= std::min(m, n); ++k) {
    first_subset(R, k);
    do {
      first_subset(C, k);
      do {
        // Column mix on C equalizing the rows in R:
        // sum_j A[i][j] y_j - v = 0 for i in R, sum_j y_j = 1.
        std::vector<std::vector<double>> sys(
            static_cast<size_t>(k) + 1, std::vector<double>(static_cast<size_t>(k) + 2, 0.0));
        for (int r = 0; r < k; ++r) {
          for (int c = 0; c < k; ++c)
            sys[static_cast<size_t>(r)][static_cast<size_t>(c)] =
                A.a[static_cast<size_t>(R[static_cast<size_t>(r)])]
                   [static_cast<size_t>(C[static_cast<size_t>(c)])];
          sys[static_cast<size_t>(r)][static_cast<size_t>(k)] = -1.0;
        }
        for (int c = 0; c < k; ++c)
          sys[static_cast<size_t>(k)][static_cast<size_t>(c)] = 1.0;
        sys[static_cast<size_t>(k)][static_cast<size_t>(k) + 1] = 1.0;
        std::vector<double> sol_y;
        if (!solve_linear(sys, sol_y)) continue;
        double vy = sol_y[static_cast<size_t>(k)];

        // Row mix on R equalizing the columns in C.
        for (auto& row : sys) std::fill(row.begin(), row.end(), 0.0);
        for (int c = 0; c < k; ++c) {
          for (int r = 0; r < k; ++r)
            sys[static_cast<size_t>(c)][static_cast<size_t>(r)] =
                A.a[static_cast<size_t>(R[static_cast<size_t>(r)])]
                   [static_cast<size_t>(C[static_cast<size_t>(c)])];
          sys[static_cast<size_t>(c)][static_cast<size_t>(k)] = -1.0;
        }
        for (int r = 0; r < k; ++r)
          sys[static_cast<size_t>(k)][static_cast<size_t>(r)] = 1.0;
        sys[static_cast<size_t>(k)][static_cast<size_t>(k) + 1] = 1.0;
        std::vector<double> sol_x;
        if (!solve_linear(sys, sol_x)) continue;
        double vx = sol_x[static_cast<size_t>(k)];

        if (std::abs(vx - vy) > kCertTol) continue;

        std::vector<double> ys(sol_y.begin(), sol_y.begin() + k);
        std::vector<double> xs(sol_x.begin(), sol_x.begin() + k);
        if (!clamp_probability(ys) || !clamp_probability(xs)) continue;

        GameSolution sol;
        sol.value = 0.5 * (vx + vy);
        sol.x.assign(static_cast<size_t>(m), 0.0);
        sol.y.assign(static_cast<size_t>(n), 0.0);
        for (int r = 0; r < k; ++r)
          sol.x[static_cast<size_t>(R[static_cast<size_t>(r)])] =
              xs[static_cast<size_t>(r)];
        for (int c = 0; c < k; ++c)
          sol.y[static_cast<size_t>(C[static_cast<size_t>(c)])] =
              ys[static_cast<size_t>(c)];

        // Duality certificate over the full matrix, not just the support.
        double lo = best_response_value(A, sol.x);
        double hi = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
          double acc = 0.0;
          for (int j = 0; j < n; ++j)
            acc += A.a[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                   sol.y[static_cast<size_t>(j)];
          hi = std::max(hi, acc);
        }
        if (lo < sol.value - kCertTol || hi > sol.value + kCertTol) continue;
        return sol;
      } while (next_subset(C, n));
    } while (next_subset(R, m));
  }
  throw SingularGameError("no support pair yields a certified solution");
}

double best_response_value(const MatrixGame& A, const std::vector<double>& x) {
  const int m = A.rows();
  const int n = A.cols();
  if (static_cast<int>(x.size()) != m)
    throw ModelError("strategy length does not match row count");
  double sum = 0.0;
  for (double v : x) {
    if (v < -kProbTol) throw ModelError("strategy has a negative weight");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ModelError("strategy does not sum to 1");
  double lo = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
      acc += x[static_cast<size_t>(i)] *
             A.a[static_cast<size_t>(i)][static_cast<size_t>(j)];
    lo = std::min(lo, acc);
  }
  return lo;
}

}  // namespace trajlens
