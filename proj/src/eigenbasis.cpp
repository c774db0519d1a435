#include "tqe/eigenbasis.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "tqe/error.hpp"
#include "tqe/rng.hpp"
#include "tqe/symbols.hpp"

namespace tqe {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kTwoPiSq = 19.739208802178717237668981999752;

double sinc(double x) {
  if (std::abs(x) < 1e-6) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}
}  // namespace

BasisKind basis_kind_from_name(const std::string& name) {
  if (name == "standard") return BasisKind::Standard;
  if (name == "haar" || name == "haar_random") return BasisKind::HaarRandom;
  if (name == "cosine" || name == "cosine_paired") return BasisKind::CosinePaired;
  throw ValidationError("unknown basis kind '" + name + "' (expected standard|haar|cosine)");
}

const char* basis_kind_name(BasisKind k) {
  switch (k) {
    case BasisKind::Standard: return "standard";
    case BasisKind::HaarRandom: return "haar";
    case BasisKind::CosinePaired: return "cosine";
  }
  return "?";
}

ShellBasis::ShellBasis(std::shared_ptr<const Shell> shell, Eigen::MatrixXcd u, BasisKind kind,
                       std::uint64_t seed)
    : shell_(std::move(shell)), u_(std::move(u)), kind_(kind), seed_(seed) {
  double res = unitarity_residual();
  if (res > 1e-10)
    throw ToleranceError("ShellBasis: unitarity residual " + std::to_string(res) +
                         " exceeds 1e-10");
}

ShellBasis ShellBasis::standard(Shell shell) {
  auto sp = std::make_shared<const Shell>(std::move(shell));
  auto r = static_cast<Eigen::Index>(sp->size());
  return ShellBasis(sp, Eigen::MatrixXcd::Identity(r, r), BasisKind::Standard, 0);
}

ShellBasis ShellBasis::haar_random(Shell shell, std::uint64_t seed) {
  auto sp = std::make_shared<const Shell>(std::move(shell));
  auto r = static_cast<Eigen::Index>(sp->size());
  Rng rng(seed);
  Eigen::MatrixXcd z(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) z(i, j) = rng.cgaussian();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd rr = qr.matrixQR();
  for (Eigen::Index j = 0; j < r; ++j) {
    Cplx d = rr(j, j);
    double mag = std::abs(d);
    Cplx phase = mag > 0.0 ? d / mag : Cplx(1.0, 0.0);
    q.col(j) *= phase;
  }
  return ShellBasis(sp, std::move(q), BasisKind::HaarRandom, seed);
}

ShellBasis ShellBasis::cosine_paired(Shell shell) {
  if (shell.n < 1) throw ValidationError("cosine_paired: shell n must be >= 1");
  auto sp = std::make_shared<const Shell>(std::move(shell));
  const std::size_t r = sp->size();
  const int dim = sp->dim;

  // representatives: lexicographically larger member of each +- pair,
  // already in canonical order because shell vectors are sorted
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (idx(k), idx(-k)), k larger
  std::vector<std::int32_t> neg(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < r; ++i) {
    const std::int32_t* k = sp->at(i);
    bool positive = false;
    for (int d = 0; d < dim; ++d) {
      if (k[d] != 0) {
        positive = k[d] > 0;
        break;
      }
    }
    if (!positive) continue;
    for (int d = 0; d < dim; ++d) neg[static_cast<std::size_t>(d)] = -k[d];
    std::size_t in = sp->find(neg.data());
    if (in == Shell::npos)
      throw ValidationError("cosine_paired: shell is not closed under negation");
    pairs.emplace_back(i, in);
  }
  if (pairs.size() * 2 != r)
    throw ValidationError("cosine_paired: shell has unpaired vectors");

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(r),
                                              static_cast<Eigen::Index>(r));
  Eigen::Index row = 0;
  for (const auto& [ik, in] : pairs) {
    u(row, static_cast<Eigen::Index>(ik)) = Cplx(inv_sqrt2, 0.0);
    u(row, static_cast<Eigen::Index>(in)) = Cplx(inv_sqrt2, 0.0);
    ++row;
    // (e_k - e_{-k}) / (i sqrt(2))
    u(row, static_cast<Eigen::Index>(ik)) = Cplx(0.0, -inv_sqrt2);
    u(row, static_cast<Eigen::Index>(in)) = Cplx(0.0, inv_sqrt2);
    ++row;
  }
  return ShellBasis(sp, std::move(u), BasisKind::CosinePaired, 0);
}

ShellBasis ShellBasis::make(BasisKind kind, Shell shell, std::uint64_t seed) {
  switch (kind) {
    case BasisKind::Standard: return standard(std::move(shell));
    case BasisKind::HaarRandom: return haar_random(std::move(shell), seed);
    case BasisKind::CosinePaired: return cosine_paired(std::move(shell));
  }
  throw ValidationError("ShellBasis::make: bad kind");
}

Eigenfunction ShellBasis::eigenfunction(std::size_t j) const {
  if (j >= size()) throw ValidationError("ShellBasis::eigenfunction: index out of range");
  Eigenfunction psi;
  psi.shell = shell_;
  psi.c = u_.row(static_cast<Eigen::Index>(j)).transpose();
  return psi;
}

double ShellBasis::unitarity_residual() const {
  if (u_.rows() == 0) return 0.0;
  Eigen::MatrixXcd g = u_.adjoint() * u_;
  g -= Eigen::MatrixXcd::Identity(u_.rows(), u_.cols());
  return g.cwiseAbs().maxCoeff();
}

std::string ShellBasis::to_json() const {
  nlohmann::json j;
  j["n"] = shell_->n;
  j["dim"] = shell_->dim;
  j["kind"] = basis_kind_name(kind_);
  j["seed"] = seed_;
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < u_.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < u_.cols(); ++k) {
      row.push_back(u_(i, k).real());
      row.push_back(u_(i, k).imag());
    }
    rows.push_back(row);
  }
  j["unitary"] = rows;
  return j.dump();
}

Cplx matrix_element(const TrigPoly& a, const Eigenfunction& psi) {
  const Shell& s = *psi.shell;
  if (a.dim() != s.dim) throw ValidationError("matrix_element: dimension mismatch");
  const std::size_t r = s.size();
  const int dim = s.dim;
  Freq diff(static_cast<std::size_t>(dim));
  Cplx acc(0.0, 0.0);
  for (std::size_t ip = 0; ip < r; ++ip) {    // k' (bra index)
    const std::int32_t* kp = s.at(ip);
    Cplx cp = std::conj(psi.c(static_cast<Eigen::Index>(ip)));
    for (std::size_t i = 0; i < r; ++i) {     // k (ket index)
      const std::int32_t* k = s.at(i);
      for (int d = 0; d < dim; ++d) diff[static_cast<std::size_t>(d)] = kp[d] - k[d];
      Cplx av = a.coeff(diff);
      if (av != Cplx(0.0, 0.0)) acc += av * psi.c(static_cast<Eigen::Index>(i)) * cp;
    }
  }
  return acc;
}

Cplx avg_operator_element(const TrigPoly& a, double hbar, double time_horizon,
                          const LatticeVector& k, const LatticeVector& k2) {
  if (!(time_horizon > 0.0)) throw ValidationError("avg_operator_element: T must be positive");
  if (!(hbar > 0.0)) throw ValidationError("avg_operator_element: hbar must be positive");
  if (k.size() != k2.size() || static_cast<int>(k.size()) != a.dim())
    throw ValidationError("avg_operator_element: dimension mismatch");
  Freq diff(k.size());
  bool same = true;
  for (std::size_t d = 0; d < k.size(); ++d) {
    diff[d] = k2[d] - k[d];
    same = same && diff[d] == 0;
  }
  if (same) return Cplx(0.0, 0.0);  // abar has no zero mode
  Cplx amp = a.coeff(diff);
  if (amp == Cplx(0.0, 0.0)) return amp;
  double omega = kTwoPiSq * hbar * static_cast<double>(norm_sq(k2) - norm_sq(k));
  double half = 0.5 * omega * time_horizon;
  // D(theta) = (e^{i theta} - 1)/(i theta) = e^{i theta/2} sinc(theta/2)
  Cplx d_factor = sinc(half) * Cplx(std::cos(half), std::sin(half));
  return amp * d_factor;
}

TrigPoly density_coeffs(const Eigenfunction& psi) {
  const Shell& s = *psi.shell;
  const std::size_t r = s.size();
  const int dim = s.dim;
  std::map<Freq, Cplx> acc;
  Freq q(static_cast<std::size_t>(dim));
  for (std::size_t ip = 0; ip < r; ++ip) {  // k + q
    const std::int32_t* kp = s.at(ip);
    for (std::size_t i = 0; i < r; ++i) {   // k
      const std::int32_t* k = s.at(i);
      for (int d = 0; d < dim; ++d) q[static_cast<std::size_t>(d)] = kp[d] - k[d];
      acc[q] += psi.c(static_cast<Eigen::Index>(ip)) *
                std::conj(psi.c(static_cast<Eigen::Index>(i)));
    }
  }
  std::vector<std::pair<Freq, Cplx>> entries(acc.begin(), acc.end());
  return TrigPoly(dim, std::move(entries));
}

double l4_norm_4(const Eigenfunction& psi) {
  TrigPoly b = density_coeffs(psi);
  Freq zero(static_cast<std::size_t>(b.dim()), 0);
  Cplx b0 = b.coeff(zero);
  if (std::abs(b0 - Cplx(1.0, 0.0)) > 1e-12)
    throw ToleranceError("l4_norm_4: |psi| is not unit-normalized (b_0 != 1)");
  return b.l2_norm_sq();
}

BallTransform::BallTransform(int dim, double r) : dim_(dim), r_(r) {
  if (dim < 2) throw ValidationError("BallTransform: dimension must be >= 2");
  if (!(r > 0.0 && r < 0.5))
    throw ValidationError("BallTransform: radius must satisfy 0 < r < 1/2");
  volume_ = unit_ball_volume(dim) * std::pow(r, dim);
}

double BallTransform::radial(std::int64_t norm_sq) const {
  auto it = cache_.find(norm_sq);
  if (it == cache_.end()) {
    double v = norm_sq == 0
                   ? volume_
                   : ball_radial_transform(dim_, r_, std::sqrt(static_cast<double>(norm_sq)));
    it = cache_.emplace(norm_sq, v).first;
  }
  return it->second;
}

double ball_mass(const TrigPoly& density, const std::vector<double>& x0,
                 const BallTransform& transform, std::int32_t cutoff) {
  if (static_cast<int>(x0.size()) != density.dim())
    throw ValidationError("ball_mass: center arity mismatch");
  const std::int64_t cutoff_sq = static_cast<std::int64_t>(cutoff) * cutoff;
  Cplx acc(0.0, 0.0);
  double scale = 0.0;
  for (std::size_t i = 0; i < density.n_modes(); ++i) {
    const std::int32_t* q = density.freq(i);
    std::int64_t nsq = 0;
    double dot = 0.0;
    for (int d = 0; d < density.dim(); ++d) {
      nsq += static_cast<std::int64_t>(q[d]) * q[d];
      dot += static_cast<double>(q[d]) * x0[static_cast<std::size_t>(d)];
    }
    if (nsq > cutoff_sq) continue;
    double rho = transform.radial(nsq);
    double a = kTwoPi * dot;  // conj of the indicator coefficient phase
    acc += density.amp(i) * rho * Cplx(std::cos(a), std::sin(a));
    scale += std::abs(density.amp(i)) * std::abs(rho);
  }
  if (std::abs(acc.imag()) > 1e-9 * std::max(1.0, scale))
    throw ToleranceError("ball_mass: non-negligible imaginary part");
  return acc.real();
}

double ball_mass(const Eigenfunction& psi, const std::vector<double>& x0, double r,
                 std::int32_t cutoff) {
  BallTransform transform(psi.shell->dim, r);
  return ball_mass(density_coeffs(psi), x0, transform, cutoff);
}

}  // namespace tqe
