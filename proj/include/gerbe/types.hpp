#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gerbe {

using cd = std::complex<double>;
// Every realization used here fits in 3x3, so the storage stays on the stack.
using Mat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using Vec3 = Eigen::Vector3d;

enum class Side { G, H };

inline const char* side_name(Side s) { return s == Side::G ? "G" : "H"; }

struct GroupElement {
  Mat matrix;
  Side group;
};

struct AlgebraElement {
  Mat matrix;
  Side algebra;
};

inline double norm(const Mat& m) { return m.norm(); }

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TagMismatch : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct ContainmentError : Error {
  using Error::Error;
};
struct GridNotFound : Error {
  using Error::Error;
};
struct GridDrift : Error {
  using Error::Error;
};
struct EdgeMismatch : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct ConstructionError : Error {
  using Error::Error;
};

}  // namespace gerbe
