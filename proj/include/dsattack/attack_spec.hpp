#pragma once

#include <vector>

namespace dsattack {

/// Attacker's deadline. Either a finite number of seconds or the
/// distinguished "never give up" state.
class CutTime {
 public:
  static CutTime infinite() noexcept { return CutTime{}; }
  /// Throws DomainError unless 0 < seconds < inf.
  static CutTime after(double seconds);
  /// t_cut = multiplier * n_bc / lambda_h, the scaling used for resource tables.
  static CutTime confirmation_multiple(double multiplier, unsigned n_bc, double lambda_h);

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }
  /// Throws DomainError for the infinite state.
  double seconds() const;

  friend bool operator==(const CutTime&, const CutTime&) = default;

 private:
  CutTime() = default;
  bool infinite_ = true;
  double seconds_ = 0.0;
};

/// Stochastic parameters of one double-spending experiment.
///
/// Only p_A is stored; p_H is always derived as 1 - p_A. The attacker rate is
/// derived from the honest rate so that p_A = lambda_A / lambda_T.
class AttackSpec {
 public:
  static constexpr double kDefaultLambdaH = 1.0 / 600.0;

  AttackSpec(double p_a, unsigned n_bc, CutTime cut = CutTime::infinite(),
             double lambda_h = kDefaultLambdaH);

  double p_a() const noexcept { return p_a_; }
  double p_h() const noexcept { return 1.0 - p_a_; }
  unsigned n_bc() const noexcept { return n_bc_; }
  const CutTime& cut() const noexcept { return cut_; }
  double lambda_h() const noexcept { return lambda_h_; }
  double lambda_a() const noexcept { return lambda_h_ * p_a_ / p_h(); }
  double lambda_t() const noexcept { return lambda_a() + lambda_h_; }
  double p_max() const noexcept { return p_a_ > p_h() ? p_a_ : p_h(); }
  double p_min() const noexcept { return p_a_ > p_h() ? p_h() : p_a_; }

  AttackSpec with_cut(CutTime cut) const { return AttackSpec(p_a_, n_bc_, cut, lambda_h_); }

 private:
  double p_a_;
  unsigned n_bc_;
  CutTime cut_;
  double lambda_h_;
};

/// One finite prefix of a sample path: (T_i, Delta_i) pairs, Delta = +1 for an
/// honest block and -1 for an attacker block.
struct WalkStep {
  double time;
  int delta;
};

class WalkPath {
 public:
  WalkPath() = default;
  /// Throws DomainError if times are not strictly increasing or a delta is not +-1.
  explicit WalkPath(std::vector<WalkStep> steps);

  void push_back(WalkStep step);
  const std::vector<WalkStep>& steps() const noexcept { return steps_; }
  std::size_t size() const noexcept { return steps_.size(); }

  /// S_i = sum of the first i deltas (S_0 = 0).
  long position(std::size_t i) const;
  /// H and A chain lengths after i states.
  long honest_blocks(std::size_t i) const;
  long attacker_blocks(std::size_t i) const;

 private:
  std::vector<WalkStep> steps_;
};

}  // namespace dsattack
