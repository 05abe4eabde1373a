#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpctrl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct NotInvertibleError : Error {
  using Error::Error;
};

/// A scalar invariant of the coadjoint action together with its gradient,
/// registered on a descriptor under a name.
struct Casimir {
  std::string name;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
};

class AlgebraDescriptor;
using AlgebraPtr = std::shared_ptr<const AlgebraDescriptor>;

/// A finite-dimensional (or spectrally truncated) Lie algebra together with
/// its dual. Elements of the algebra and of the dual are coefficient vectors
/// of length dim() with respect to a fixed basis and its dual basis.
///
/// The bracket is given either by a dense structure-constant tensor or by a
/// callable (truncated fluid algebras). coad is the true dual of the bracket:
/// <coad(u,nu), w> = <nu, ad(u,w)> for all w.
class AlgebraDescriptor {
 public:
  using Bilinear = std::function<Vec(const Vec&, const Vec&)>;
  using PairingFn = std::function<double(const Vec&, const Vec&)>;

  /// so(3) with ad(u)v = u x v; registers the Casimir |nu|^2/2.
  static AlgebraPtr so3();

  /// Abelian algebra of the given dimension (zero bracket).
  static AlgebraPtr abelian(int dim, std::string name = "abelian");

  /// Dense structure constants c(i)(j,k) with [e_j,e_k] = sum_i c^i_jk e_i.
  /// With validate=true the antisymmetry and Jacobi identities are enforced
  /// at construction (tolerance 1e-12).
  static AlgebraPtr from_structure_constants(std::vector<Mat> c,
                                             std::string name,
                                             bool validate = true,
                                             std::vector<Casimir> casimirs = {});

  /// Callable bracket/coadjoint, used by the truncated fluid algebra where a
  /// dense tensor is impractical. exact_jacobi=false marks descriptors whose
  /// Jacobi identity holds only up to truncation.
  static AlgebraPtr from_callables(int dim, std::string name, Bilinear bracket,
                                   Bilinear coad, PairingFn pairing,
                                   Vec pairing_weights, bool exact_jacobi,
                                   std::vector<Casimir> casimirs = {});

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  bool exact_jacobi() const { return exact_jacobi_; }
  bool has_structure_constants() const { return !c_.empty(); }

  /// ad(u)v.
  Vec bracket(const Vec& u, const Vec& v) const;

  /// ad(u)* nu, the coadjoint action on the dual.
  Vec coad(const Vec& u, const Vec& nu) const;

  /// Dual pairing <nu, u>. Coordinate contraction for dual bases; a weighted
  /// coefficient sum realizing the L2 integral for the fluid algebra.
  double pairing(const Vec& nu, const Vec& u) const;

  /// <basis-dual_i, basis_i>; needed for positivity checks of diagonal maps
  /// on algebras whose pairing is not the coefficient dot product.
  double pairing_weight(int i) const;

  /// True when pairing(nu,u) == nu.dot(u).
  bool coefficient_pairing() const { return pairing_ == nullptr; }

  const std::vector<Casimir>& casimirs() const { return casimirs_; }
  const Casimir& casimir(const std::string& name) const;

  /// Max over basis pairs of |ad(ei)ej + ad(ej)ei| (finite dim only).
  double antisymmetry_residual() const;

  /// Max over basis triples of the Jacobi defect (finite dim only).
  double jacobi_residual() const;

  void require_element(const Vec& v, const char* what) const;

 private:
  AlgebraDescriptor() = default;

  int dim_ = 0;
  std::string name_;
  bool exact_jacobi_ = true;
  std::vector<Mat> c_;     // structure constants, c_[i](j,k)
  Bilinear bracket_fn_;    // set for callable algebras
  Bilinear coad_fn_;
  PairingFn pairing_;      // null -> coefficient dot product
  Vec pairing_weights_;    // per-basis-mode <e_i*, e_i>
  std::vector<Casimir> casimirs_;
};

/// [OP] ad: returns [u,v] after dimension checks.
Vec ad(const AlgebraDescriptor& desc, const Vec& u, const Vec& v);

/// [OP] coad: <coad(u,nu), w> = <nu, ad(u,w)>.
Vec coad(const AlgebraDescriptor& desc, const Vec& u, const Vec& nu);

/// [OP] pairing.
double pairing(const AlgebraDescriptor& desc, const Vec& nu, const Vec& u);

/// [OP] casimir_eval; throws Error for unknown names.
double casimir_eval(const AlgebraDescriptor& desc, const std::string& name,
                    const Vec& nu);

/// Element of the dual of a declared algebra.
struct DualElement {
  AlgebraPtr algebra;
  Vec coeffs;

  DualElement() = default;
  DualElement(AlgebraPtr alg, Vec c) : algebra(std::move(alg)), coeffs(std::move(c)) {
    algebra->require_element(coeffs, "DualElement");
  }
};

/// Direct product d x g; the bracket acts blockwise and cross terms vanish.
struct ProductAlgebra {
  AlgebraPtr d;
  AlgebraPtr g;

  int dim() const { return d->dim() + g->dim(); }
  Vec bracket(const Vec& u, const Vec& v) const;
  Vec coad(const Vec& u, const Vec& nu) const;
  double pairing(const Vec& nu, const Vec& u) const;
};

/// Which vector space a LinearMap acts between.
enum class Space { D, G, DStar, GStar };

Space dual_space(Space s);
const char* space_name(Space s);

/// Dense or diagonal real linear map between the coefficient spaces of the
/// algebras/duals above. Symmetry/positivity flags are declared up front and
/// verified numerically on demand.
class LinearMap {
 public:
  LinearMap() = default;

  static LinearMap dense(Space from, Space to, Mat m);
  static LinearMap diagonal(Space from, Space to, Vec d);
  static LinearMap identity(Space from, Space to, int n);
  static LinearMap zero(Space from, Space to, int rows, int cols);

  bool is_diagonal() const { return diagonal_.size() > 0; }
  int rows() const;
  int cols() const;
  Space from() const { return from_; }
  Space to() const { return to_; }

  Vec apply(const Vec& x) const;
  Vec solve(const Vec& y) const;  // throws NotInvertibleError when singular
  LinearMap inverse() const;
  LinearMap adjoint() const;      // coefficient transpose; spaces dualized
  LinearMap compose(const LinearMap& rhs) const;  // (*this) o rhs
  LinearMap add(const LinearMap& rhs) const;
  LinearMap subtract(const LinearMap& rhs) const;
  LinearMap scale(double a) const;

  Mat matrix() const;             // densified view
  Vec diagonal_entries() const;

  double symmetry_residual() const;
  bool symmetric(double tol = 1e-12) const;
  /// Smallest eigenvalue of the symmetrized matrix (dense) or smallest
  /// diagonal entry (diagonal storage).
  double min_symmetric_eigenvalue() const;
  bool positive_definite(double tol = 1e-12) const;

  /// Declared flags, verified lazily through the checks above.
  std::optional<bool> declared_symmetric;
  std::optional<bool> declared_positive_definite;
  bool verify_declared(double sym_tol = 1e-12, double eig_tol = 0.0) const;

 private:
  Space from_ = Space::D;
  Space to_ = Space::D;
  Mat dense_;
  Vec diagonal_;
};

}  // namespace lpctrl
