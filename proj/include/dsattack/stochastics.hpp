#pragma once

#include <cstddef>
#include <string>

#include "dsattack/attack_spec.hpp"
#include "dsattack/special_functions.hpp"

namespace dsattack {

/// Exact nonnegative count. 128 bits hold every ballot number with 2n + m <= 130.
__extension__ typedef unsigned __int128 BallotCount;

/// C_{n,m} = (m+1)/(n+m+1) * binom(2n+m, n) for n, m >= 0, and 0 otherwise.
/// Throws ArithmeticOverflowError if binom(2n+m, n) does not fit in 128 bits.
BallotCount ballot_number(long long n, long long m);

/// Exact binomial coefficient; throws ArithmeticOverflowError on overflow.
BallotCount binomial_exact(unsigned long long n, unsigned long long k);

std::string to_string(BallotCount value);

/// ln C_{n,m}; -inf outside n, m >= 0.
double log_ballot_number(long long n, long long m);

/// The two contributions to p_DSA,i: the ballot-number term (nonzero only at
/// odd i > 2 N_BC) and the negative-binomial term (confirmation reached after
/// the attacker already leads, nonzero at every i > 2 N_BC).
struct StateMass {
  double ballot_part = 0.0;
  double binomial_part = 0.0;
  double total() const noexcept { return ballot_part + binomial_part; }
};

StateMass state_mass_parts(const AttackSpec& spec, std::size_t i);

/// Probability that both attack conditions are first met together at state i.
/// Throws DomainError for i = 0.
double p_dsa_at_state(const AttackSpec& spec, std::size_t i);

/// Probability that the attack ever succeeds (no deadline). Exactly 1 for p_A >= 0.5.
double p_dsa(const AttackSpec& spec);

/// The same probability through the catch-up decomposition: honest chain
/// reaches N_BC with the attacker k blocks in, then a gambler's-ruin catch-up.
/// The infinite tail is truncated with a certified geometric bound.
double rosenfeld_p_dsa(const AttackSpec& spec, double tol = 1e-12,
                       std::size_t max_terms = kDefaultSeriesCap);

/// Success probability when the attacker must lead by N_BC + 1 blocks:
/// (p_A / p_H)^(N_BC + 1), or 1 when p_A >= 0.5.
double premine_success_prob(const AttackSpec& spec);
/// Same formula without building an AttackSpec, so N_BC = 0 is allowed.
double premine_success_prob(double p_a, unsigned n_bc);

}  // namespace dsattack
