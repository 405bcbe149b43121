#include "tnnflow/chevalley.hpp"

#include <cmath>
#include <string>

#include "tnnflow/error.hpp"

namespace tnnflow {

Pinning build_pinning(std::size_t n) {
  if (n < 2) throw DomainError("build_pinning: n must be at least 2, got " + std::to_string(n));
  Pinning p;
  p.n = n;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    RatMatrix e(n, n);
    e(i, i + 1) = 1;
    RatMatrix h(n, n);
    h(i, i) = 1;
    h(i + 1, i + 1) = -1;
    p.f.push_back(e.transpose());
    p.e.push_back(std::move(e));
    p.h.push_back(std::move(h));
  }
  return p;
}

RatMatrix Pinning::tau() const {
  RatMatrix t(n, n);
  for (std::size_t i = 0; i < rank(); ++i) t += e[i] + f[i];
  return t;
}

namespace {

constexpr double kFloatDetTol = 1e-12;

void check_unimodular(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("group element must be square");
  if (determinant(m) != 1) throw DomainError("group element must have determinant 1");
}

void check_unimodular(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DomainError("group element must be square");
  const double d = determinant(m);
  // Hadamard's bound is the natural scale for the rounding error in det.
  double hadamard = 1.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) hadamard *= std::max(1.0, m.col(c).norm());
  if (!std::isfinite(d) || std::abs(d - 1.0) > kFloatDetTol * hadamard) {
    throw DomainError("group element determinant " + std::to_string(d) + " is not 1");
  }
}

}  // namespace

GroupElement::GroupElement(RatMatrix m) : m_(std::move(m)) { check_unimodular(std::get<RatMatrix>(m_)); }

GroupElement::GroupElement(Eigen::MatrixXd m) : m_(std::move(m)) {
  check_unimodular(std::get<Eigen::MatrixXd>(m_));
}

GroupElement GroupElement::identity(std::size_t n) { return GroupElement(RatMatrix::identity(n)); }

std::size_t GroupElement::size() const {
  if (const auto* r = std::get_if<RatMatrix>(&m_)) return r->rows();
  return static_cast<std::size_t>(std::get<Eigen::MatrixXd>(m_).rows());
}

const RatMatrix& GroupElement::exact() const {
  if (const auto* r = std::get_if<RatMatrix>(&m_)) return *r;
  throw DomainError("exact entries requested from a float-mode group element");
}

Eigen::MatrixXd GroupElement::to_float() const {
  if (const auto* r = std::get_if<RatMatrix>(&m_)) return r->to_double();
  return std::get<Eigen::MatrixXd>(m_);
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  if (a.size() != b.size()) throw DomainError("group elements of different size");
  if (a.field() == Field::Rational && b.field() == Field::Rational) {
    return GroupElement(a.exact() * b.exact());
  }
  return GroupElement(Eigen::MatrixXd(a.to_float() * b.to_float()));
}

GroupElement one_param(const Pinning& p, OneParamKind kind, std::size_t i, const Rational& t) {
  if (i < 1 || i > p.rank()) {
    throw DomainError("one_param: index " + std::to_string(i) + " outside 1.." + std::to_string(p.rank()));
  }
  const std::size_t k = i - 1;
  switch (kind) {
    case OneParamKind::X:
      return GroupElement(RatMatrix::identity(p.n) + t * p.e[k]);
    case OneParamKind::Y:
      return GroupElement(RatMatrix::identity(p.n) + t * p.f[k]);
    case OneParamKind::Coweight: {
      if (sgn(t) == 0) throw DomainError("one_param: coweight parameter must be nonzero");
      RatMatrix m = RatMatrix::identity(p.n);
      m(k, k) = t;
      m(k + 1, k + 1) = 1 / t;
      return GroupElement(std::move(m));
    }
  }
  throw DomainError("one_param: unknown kind");
}

Eigen::MatrixXd exp_tau_matrix(const Pinning& p, double t) {
  const Eigen::MatrixXd tau = p.tau().to_double();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tau);
  const Eigen::VectorXd scaled = (t * es.eigenvalues().array()).exp().matrix();
  return es.eigenvectors() * scaled.asDiagonal() * es.eigenvectors().transpose();
}

GroupElement exp_tau(const Pinning& p, double t) { return GroupElement(exp_tau_matrix(p, t)); }

GroupElement rationalize_unimodular(const Eigen::MatrixXd& m) {
  RatMatrix r = RatMatrix::from_double(m);
  const Rational d = determinant(r);
  if (abs(d - 1) > Rational(1, 100000000)) throw DomainError("rationalize_unimodular: determinant far from 1");
  for (std::size_t j = 0; j < r.cols(); ++j) r(r.rows() - 1, j) /= d;
  return GroupElement(std::move(r));
}

}  // namespace tnnflow
