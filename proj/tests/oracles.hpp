#pragma once

#include <random>
#include <vector>

#include "trajlens/dp_model.hpp"
#include "trajlens/matrix_game.hpp"

// Independent slow references the fast library code is tested against.
namespace oracles {

// Best n-stage total from start over every feasible play, by exhaustive
// depth-first search with the same right-nested accumulation the solver
// uses, so dyadic payoffs compare bit for bit.
double best_total(const trajlens::DpModel& model, int start, int n);

// Every feasible n-stage play whose total is >= threshold, in
// lexicographic order of successor choices.
std::vector<trajlens::Play> plays_above(const trajlens::DpModel& model, int start,
                                        int n, double threshold);

// Random model with payoffs on the 1/64 grid (so short-horizon totals are
// exact in binary) and 1..max_branch distinct successors per state.
trajlens::DpModel random_model(std::mt19937& rng, int num_states, int max_branch);

// Random matrix with entries on the 1/256 grid in [-2, 2].
trajlens::MatrixGame random_matrix(std::mt19937& rng, int rows, int cols);

// Exact matrix game value by support enumeration over rationals
// (GMP-backed; no floating point anywhere), rounded to double on return.
double exact_game_value(const std::vector<std::vector<double>>& a);

}  // namespace oracles
