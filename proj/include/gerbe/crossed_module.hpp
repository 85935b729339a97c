#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gerbe/types.hpp"

namespace gerbe {

// Matrix realization of a crossed module (H -> G, t, alpha) and its Lie algebras.
// The raw-matrix interface is used in hot loops; the typed free functions below
// check group/algebra tags.
class CrossedModule {
 public:
  virtual ~CrossedModule() = default;

  virtual std::string name() const = 0;
  virtual int mat_size(Side s) const = 0;
  virtual const std::vector<Mat>& basis(Side s) const = 0;
  int dim(Side s) const { return static_cast<int>(basis(s).size()); }

  virtual Mat t_group(const Mat& h) const = 0;
  virtual Mat t_alg(const Mat& Y) const = 0;
  virtual Mat alpha(const Mat& g, const Mat& h) const = 0;
  // (alpha_g)_* on the algebra of H.
  virtual Mat alpha_gstar(const Mat& g, const Mat& Y) const = 0;
  // Lie algebra action alpha_X(Y), X in g, Y in h.
  virtual Mat alg_act(const Mat& X, const Mat& Y) const = 0;
  // d/de alpha_{exp(eX)}(h) at e = 0, an ambient tangent at h.
  virtual Mat alpha_hstar(const Mat& X, const Mat& h) const = 0;

  virtual Mat exp(Side s, const Mat& X) const = 0;
  virtual Mat log(Side s, const Mat& g) const = 0;
  virtual Mat inverse(Side, const Mat& g) const { return g.inverse(); }
  // Nearest group element (polar factor, pattern enforcement, ...).
  virtual Mat project(Side s, const Mat& g) const = 0;
  // Distance of a matrix from the group manifold.
  virtual double group_residual(Side s, const Mat& g) const = 0;
  // Distance of a matrix from the Lie algebra subspace.
  double algebra_residual(Side s, const Mat& X) const;

  // Elements of ker t used by the centrality check; may be empty.
  virtual std::vector<Mat> kernel_samples(std::uint64_t seed, int n) const = 0;
  // A nonzero central element of the algebra of H, used by negative controls.
  // Returns an empty matrix if none exists.
  virtual Mat central_h() const = 0;

  Mat identity(Side s) const { return Mat::Identity(mat_size(s), mat_size(s)); }
  Mat zero(Side s) const { return Mat::Zero(mat_size(s), mat_size(s)); }
  Mat bracket(const Mat& X, const Mat& Y) const { return X * Y - Y * X; }
  // Coordinates of X in basis(s), assuming an orthogonal basis.
  std::vector<double> coords(Side s, const Mat& X) const;
  Mat from_coords(Side s, const std::vector<double>& c) const;
};

using CrossedModulePtr = std::shared_ptr<const CrossedModule>;

CrossedModulePtr make_bs1();
CrossedModulePtr make_heisenberg();
CrossedModulePtr make_su2_ad();
// Registry: "bs1", "heisenberg", "su2_ad".  Throws ConfigError on unknown names.
CrossedModulePtr make_crossed_module(const std::string& name);
std::vector<std::string> crossed_module_names();

// Wraps an instance and perturbs its target map; a negative control for check_axioms.
CrossedModulePtr make_corrupted_target(CrossedModulePtr base, double amount = 0.1);

// Typed operations.
GroupElement target_group(const CrossedModule& cm, const GroupElement& h);
AlgebraElement target_alg(const CrossedModule& cm, const AlgebraElement& Y);
GroupElement act(const CrossedModule& cm, const GroupElement& g, const GroupElement& h);
AlgebraElement act_pushforward_g(const CrossedModule& cm, const GroupElement& g,
                                 const AlgebraElement& Y);
Mat act_pushforward_h(const CrossedModule& cm, const AlgebraElement& X, const GroupElement& h);
AlgebraElement alg_act(const CrossedModule& cm, const AlgebraElement& X, const AlgebraElement& Y);
GroupElement exp(const CrossedModule& cm, const AlgebraElement& X);
AlgebraElement log(const CrossedModule& cm, const GroupElement& g);
AlgebraElement bracket(const CrossedModule& cm, const AlgebraElement& X, const AlgebraElement& Y);
GroupElement mul(const CrossedModule& cm, const GroupElement& a, const GroupElement& b);
GroupElement inv(const CrossedModule& cm, const GroupElement& a);
GroupElement conj(const CrossedModule& cm, const GroupElement& a, const GroupElement& b);

// Multiplies group elements on the right and re-projects every kReprojectEvery steps.
class ChainAccumulator {
 public:
  ChainAccumulator(const CrossedModule& cm, Side s);
  void right_multiply(const Mat& x);
  void left_multiply(const Mat& x);
  const Mat& value() const { return value_; }

 private:
  void tick();
  const CrossedModule* cm_;
  Side side_;
  Mat value_;
  int count_ = 0;
};

struct AxiomReport {
  std::string instance;
  int n_samples = 0;
  std::map<std::string, double> residuals;
  double tolerance = 1e-10;
  bool pass() const;
};

// Max residuals over seeded samples: equivariance of t, Peiffer identity, both
// Lie algebra conditions, homomorphism of t, action composition, centrality of
// ker t, and the finite-difference check of alpha_gstar.
AxiomReport check_axioms(const CrossedModule& cm, int n_samples, std::uint64_t seed);

}  // namespace gerbe
