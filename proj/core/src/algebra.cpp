#include "lpctrl/algebra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace lpctrl {

namespace {

Vec cross3(const Vec& a, const Vec& b) {
  Vec r(3);
  r << a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2),
      a(0) * b(1) - a(1) * b(0);
  return r;
}

}  // namespace

AlgebraPtr AlgebraDescriptor::so3() {
  auto a = std::shared_ptr<AlgebraDescriptor>(new AlgebraDescriptor());
  a->dim_ = 3;
  a->name_ = "so3";
  // [e_j, e_k] = sum_i c^i_jk e_i with the cross product bracket
  a->c_.assign(3, Mat::Zero(3, 3));
  a->c_[0](1, 2) = 1.0;
  a->c_[0](2, 1) = -1.0;
  a->c_[1](2, 0) = 1.0;
  a->c_[1](0, 2) = -1.0;
  a->c_[2](0, 1) = 1.0;
  a->c_[2](1, 0) = -1.0;
  a->casimirs_.push_back(Casimir{
      "spin_sq_half", [](const Vec& nu) { return 0.5 * nu.squaredNorm(); },
      [](const Vec& nu) { return Vec(nu); }});
  return a;
}

AlgebraPtr AlgebraDescriptor::abelian(int dim, std::string name) {
  if (dim <= 0) throw DimensionError("abelian: dim must be positive");
  auto a = std::shared_ptr<AlgebraDescriptor>(new AlgebraDescriptor());
  a->dim_ = dim;
  a->name_ = std::move(name);
  a->c_.assign(dim, Mat::Zero(dim, dim));
  return a;
}

AlgebraPtr AlgebraDescriptor::from_structure_constants(std::vector<Mat> c,
                                                       std::string name,
                                                       bool validate,
                                                       std::vector<Casimir> casimirs) {
  const int n = static_cast<int>(c.size());
  if (n <= 0) throw DimensionError("from_structure_constants: empty tensor");
  for (const Mat& m : c) {
    if (m.rows() != n || m.cols() != n)
      throw DimensionError("from_structure_constants: tensor slice shape");
  }
  auto a = std::shared_ptr<AlgebraDescriptor>(new AlgebraDescriptor());
  a->dim_ = n;
  a->name_ = std::move(name);
  a->c_ = std::move(c);
  a->casimirs_ = std::move(casimirs);
  if (validate) {
    if (a->antisymmetry_residual() > 1e-12)
      throw Error(a->name_ + ": bracket is not antisymmetric");
    if (a->jacobi_residual() > 1e-12)
      throw Error(a->name_ + ": Jacobi identity violated");
  }
  return a;
}

AlgebraPtr AlgebraDescriptor::from_callables(int dim, std::string name,
                                             Bilinear bracket, Bilinear coad,
                                             PairingFn pairing,
                                             Vec pairing_weights,
                                             bool exact_jacobi,
                                             std::vector<Casimir> casimirs) {
  if (dim <= 0) throw DimensionError("from_callables: dim must be positive");
  auto a = std::shared_ptr<AlgebraDescriptor>(new AlgebraDescriptor());
  a->dim_ = dim;
  a->name_ = std::move(name);
  a->bracket_fn_ = std::move(bracket);
  a->coad_fn_ = std::move(coad);
  a->pairing_ = std::move(pairing);
  a->pairing_weights_ = std::move(pairing_weights);
  a->exact_jacobi_ = exact_jacobi;
  a->casimirs_ = std::move(casimirs);
  return a;
}

void AlgebraDescriptor::require_element(const Vec& v, const char* what) const {
  if (v.size() != dim_)
    throw DimensionError(std::string(what) + ": expected dim " +
                         std::to_string(dim_) + " on " + name_ + ", got " +
                         std::to_string(v.size()));
}

Vec AlgebraDescriptor::bracket(const Vec& u, const Vec& v) const {
  require_element(u, "bracket lhs");
  require_element(v, "bracket rhs");
  if (bracket_fn_) return bracket_fn_(u, v);
  if (dim_ == 3 && name_ == "so3") return cross3(u, v);
  Vec r(dim_);
  for (int i = 0; i < dim_; ++i) r(i) = u.dot(c_[i] * v);
  return r;
}

Vec AlgebraDescriptor::coad(const Vec& u, const Vec& nu) const {
  require_element(u, "coad argument");
  require_element(nu, "coad dual");
  if (coad_fn_) return coad_fn_(u, nu);
  if (dim_ == 3 && name_ == "so3") return cross3(nu, u);  // = -u x nu
  // <coad(u,nu), e_k> = <nu, [u, e_k]> = sum_i nu_i u_j c^i_jk
  Vec r = Vec::Zero(dim_);
  for (int i = 0; i < dim_; ++i) r += nu(i) * (c_[i].transpose() * u);
  return r;
}

double AlgebraDescriptor::pairing(const Vec& nu, const Vec& u) const {
  require_element(nu, "pairing dual");
  require_element(u, "pairing argument");
  if (pairing_) return pairing_(nu, u);
  return nu.dot(u);
}

double AlgebraDescriptor::pairing_weight(int i) const {
  if (i < 0 || i >= dim_) throw DimensionError("pairing_weight: index");
  if (pairing_weights_.size() > 0) return pairing_weights_(i);
  return 1.0;
}

const Casimir& AlgebraDescriptor::casimir(const std::string& name) const {
  for (const Casimir& k : casimirs_)
    if (k.name == name) return k;
  throw Error("unknown Casimir '" + name + "' on " + name_);
}

double AlgebraDescriptor::antisymmetry_residual() const {
  if (!has_structure_constants()) return 0.0;
  double worst = 0.0;
  for (int j = 0; j < dim_; ++j) {
    Vec ej = Vec::Unit(dim_, j);
    for (int k = j; k < dim_; ++k) {
      Vec ek = Vec::Unit(dim_, k);
      worst = std::max(worst,
                       (bracket(ej, ek) + bracket(ek, ej)).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double AlgebraDescriptor::jacobi_residual() const {
  if (!has_structure_constants()) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i) {
    Vec ei = Vec::Unit(dim_, i);
    for (int j = 0; j < dim_; ++j) {
      Vec ej = Vec::Unit(dim_, j);
      for (int k = 0; k < dim_; ++k) {
        Vec ek = Vec::Unit(dim_, k);
        Vec defect = bracket(ei, bracket(ej, ek)) +
                     bracket(ej, bracket(ek, ei)) +
                     bracket(ek, bracket(ei, ej));
        worst = std::max(worst, defect.cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

Vec ad(const AlgebraDescriptor& desc, const Vec& u, const Vec& v) {
  return desc.bracket(u, v);
}

Vec coad(const AlgebraDescriptor& desc, const Vec& u, const Vec& nu) {
  return desc.coad(u, nu);
}

double pairing(const AlgebraDescriptor& desc, const Vec& nu, const Vec& u) {
  return desc.pairing(nu, u);
}

double casimir_eval(const AlgebraDescriptor& desc, const std::string& name,
                    const Vec& nu) {
  desc.require_element(nu, "casimir_eval");
  return desc.casimir(name).value(nu);
}

Vec ProductAlgebra::bracket(const Vec& u, const Vec& v) const {
  if (u.size() != dim() || v.size() != dim())
    throw DimensionError("ProductAlgebra: bracket dim mismatch");
  Vec out(dim());
  out << d->bracket(u.head(d->dim()), v.head(d->dim())),
      g->bracket(u.tail(g->dim()), v.tail(g->dim()));
  return out;
}

Vec ProductAlgebra::coad(const Vec& u, const Vec& nu) const {
  if (u.size() != dim() || nu.size() != dim())
    throw DimensionError("ProductAlgebra: coad dim mismatch");
  Vec out(dim());
  out << d->coad(u.head(d->dim()), nu.head(d->dim())),
      g->coad(u.tail(g->dim()), nu.tail(g->dim()));
  return out;
}

double ProductAlgebra::pairing(const Vec& nu, const Vec& u) const {
  if (u.size() != dim() || nu.size() != dim())
    throw DimensionError("ProductAlgebra: pairing dim mismatch");
  return d->pairing(nu.head(d->dim()), u.head(d->dim())) +
         g->pairing(nu.tail(g->dim()), u.tail(g->dim()));
}

Space dual_space(Space s) {
  switch (s) {
    case Space::D: return Space::DStar;
    case Space::G: return Space::GStar;
    case Space::DStar: return Space::D;
    case Space::GStar: return Space::G;
  }
  return Space::D;
}

const char* space_name(Space s) {
  switch (s) {
    case Space::D: return "d";
    case Space::G: return "g";
    case Space::DStar: return "d*";
    case Space::GStar: return "g*";
  }
  return "?";
}

LinearMap LinearMap::dense(Space from, Space to, Mat m) {
  LinearMap r;
  r.from_ = from;
  r.to_ = to;
  r.dense_ = std::move(m);
  return r;
}

LinearMap LinearMap::diagonal(Space from, Space to, Vec d) {
  LinearMap r;
  r.from_ = from;
  r.to_ = to;
  r.diagonal_ = std::move(d);
  return r;
}

LinearMap LinearMap::identity(Space from, Space to, int n) {
  return diagonal(from, to, Vec::Ones(n));
}

LinearMap LinearMap::zero(Space from, Space to, int rows, int cols) {
  if (rows == cols) return diagonal(from, to, Vec::Zero(rows));
  return dense(from, to, Mat::Zero(rows, cols));
}

int LinearMap::rows() const {
  return is_diagonal() ? static_cast<int>(diagonal_.size())
                       : static_cast<int>(dense_.rows());
}

int LinearMap::cols() const {
  return is_diagonal() ? static_cast<int>(diagonal_.size())
                       : static_cast<int>(dense_.cols());
}

Vec LinearMap::apply(const Vec& x) const {
  if (x.size() != cols())
    throw DimensionError(std::string("LinearMap ") + space_name(from_) + "->" +
                         space_name(to_) + ": apply dim mismatch");
  if (is_diagonal()) return diagonal_.cwiseProduct(x);
  return dense_ * x;
}

Vec LinearMap::solve(const Vec& y) const {
  if (y.size() != rows()) throw DimensionError("LinearMap: solve dim mismatch");
  if (is_diagonal()) {
    if (diagonal_.cwiseAbs().minCoeff() < 1e-300)
      throw NotInvertibleError("diagonal map has a zero entry");
    return y.cwiseQuotient(diagonal_);
  }
  if (rows() != cols()) throw NotInvertibleError("map is not square");
  Eigen::FullPivLU<Mat> lu(dense_);
  if (!lu.isInvertible()) throw NotInvertibleError("singular map");
  return lu.solve(y);
}

LinearMap LinearMap::inverse() const {
  if (is_diagonal()) {
    if (diagonal_.cwiseAbs().minCoeff() < 1e-300)
      throw NotInvertibleError("diagonal map has a zero entry");
    return diagonal(to_, from_, diagonal_.cwiseInverse());
  }
  if (rows() != cols()) throw NotInvertibleError("map is not square");
  Eigen::FullPivLU<Mat> lu(dense_);
  if (!lu.isInvertible()) throw NotInvertibleError("singular map");
  return dense(to_, from_, lu.inverse());
}

LinearMap LinearMap::adjoint() const {
  Space f = dual_space(to_);
  Space t = dual_space(from_);
  if (is_diagonal()) return diagonal(f, t, diagonal_);
  return dense(f, t, dense_.transpose());
}

LinearMap LinearMap::compose(const LinearMap& rhs) const {
  if (cols() != rhs.rows()) throw DimensionError("LinearMap: compose mismatch");
  if (is_diagonal() && rhs.is_diagonal())
    return diagonal(rhs.from_, to_, diagonal_.cwiseProduct(rhs.diagonal_));
  return dense(rhs.from_, to_, matrix() * rhs.matrix());
}

LinearMap LinearMap::add(const LinearMap& rhs) const {
  if (rows() != rhs.rows() || cols() != rhs.cols())
    throw DimensionError("LinearMap: add mismatch");
  if (is_diagonal() && rhs.is_diagonal())
    return diagonal(from_, to_, diagonal_ + rhs.diagonal_);
  return dense(from_, to_, matrix() + rhs.matrix());
}

LinearMap LinearMap::subtract(const LinearMap& rhs) const {
  return add(rhs.scale(-1.0));
}

LinearMap LinearMap::scale(double a) const {
  if (is_diagonal()) return diagonal(from_, to_, a * diagonal_);
  return dense(from_, to_, a * dense_);
}

Mat LinearMap::matrix() const {
  if (is_diagonal()) return Mat(diagonal_.asDiagonal());
  return dense_;
}

Vec LinearMap::diagonal_entries() const {
  if (is_diagonal()) return diagonal_;
  return dense_.diagonal();
}

double LinearMap::symmetry_residual() const {
  if (is_diagonal()) return 0.0;
  if (rows() != cols()) return std::numeric_limits<double>::infinity();
  return (dense_ - dense_.transpose()).cwiseAbs().maxCoeff();
}

bool LinearMap::symmetric(double tol) const {
  return symmetry_residual() <= tol;
}

double LinearMap::min_symmetric_eigenvalue() const {
  if (is_diagonal()) return diagonal_.minCoeff();
  if (rows() != cols()) throw DimensionError("min_symmetric_eigenvalue: not square");
  Mat s = 0.5 * (dense_ + dense_.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  return es.eigenvalues().minCoeff();
}

bool LinearMap::positive_definite(double tol) const {
  return min_symmetric_eigenvalue() > tol;
}

bool LinearMap::verify_declared(double sym_tol, double eig_tol) const {
  if (declared_symmetric && *declared_symmetric && !symmetric(sym_tol))
    return false;
  if (declared_positive_definite && *declared_positive_definite &&
      !(symmetric(sym_tol) && min_symmetric_eigenvalue() > eig_tol))
    return false;
  return true;
}

}  // namespace lpctrl
