#include "superqd/hilbert.hpp"

#include "superqd/units.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace superqd {

std::string_view level_name(Level l) {
  switch (l) {
    case Level::G: return "G";
    case Level::XH: return "XH";
    case Level::XV: return "XV";
    case Level::B: return "B";
  }
  return "?";
}

int excitation_count(Level l) {
  switch (l) {
    case Level::G: return 0;
    case Level::XH:
    case Level::XV: return 1;
    case Level::B: return 2;
  }
  return 0;
}

std::string_view mode_name(Mode m) { return m == Mode::H ? "H" : "V"; }

LevelScheme::LevelScheme(double exciton_meV, double fine_structure_meV, double binding_meV)
    : e_x_(exciton_meV), e_fsp_(fine_structure_meV), e_bind_(binding_meV) {
  if (!(fine_structure_meV >= 0.0)) {
    throw std::invalid_argument("LevelScheme: fine-structure splitting must be >= 0");
  }
  if (!std::isfinite(exciton_meV) || !std::isfinite(binding_meV)) {
    throw std::invalid_argument("LevelScheme: energies must be finite");
  }
}

double LevelScheme::energy(Level l) const {
  switch (l) {
    case Level::G: return e_ground();
    case Level::XH: return e_exciton_h();
    case Level::XV: return e_exciton_v();
    case Level::B: return e_biexciton();
  }
  return 0.0;
}

double CavitySpec::g_meV() const { return ueV_to_meV(g_ueV); }
double CavitySpec::g_rad_per_ps() const { return meV_to_rad_per_ps(g_meV()); }

double CavitySpec::kappa_over_g() const {
  if (g_ueV == 0.0) return 0.0;
  return rad_per_ps_to_meV(kappa_per_ps) / g_meV();
}

void CavitySpec::validate() const {
  if (!(g_ueV >= 0.0)) throw std::invalid_argument("CavitySpec: g must be >= 0");
  if (!(kappa_per_ps >= 0.0)) throw std::invalid_argument("CavitySpec: kappa must be >= 0");
  if (n_max < 1) throw std::invalid_argument("CavitySpec: n_max must be >= 1");
}

std::string to_string(const BasisLabel& b) {
  std::ostringstream os;
  os << level_name(b.level) << ',' << b.n_h << ',' << b.n_v;
  return os.str();
}

BasisLabel parse_basis_label(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 3) {
    throw std::invalid_argument("basis label must look like LEVEL,n_H,n_V: '" + std::string(text) + "'");
  }
  BasisLabel b;
  std::string lvl = parts[0];
  std::transform(lvl.begin(), lvl.end(), lvl.begin(), [](unsigned char c) { return std::toupper(c); });
  if (lvl == "G") b.level = Level::G;
  else if (lvl == "XH" || lvl == "X_H") b.level = Level::XH;
  else if (lvl == "XV" || lvl == "X_V") b.level = Level::XV;
  else if (lvl == "B") b.level = Level::B;
  else throw std::invalid_argument("unknown emitter level '" + parts[0] + "'");
  try {
    std::size_t used = 0;
    b.n_h = std::stoi(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("");
    b.n_v = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("photon numbers must be integers: '" + std::string(text) + "'");
  }
  return b;
}

CompositeSpace::CompositeSpace(int n_max, EmitterModel model, std::size_t dimension_cap)
    : n_max_(n_max), model_(model) {
  if (n_max < 1) throw std::invalid_argument("CompositeSpace: n_max must be >= 1");
  levels_ = model == EmitterModel::four_level
                ? std::vector<Level>{Level::G, Level::XH, Level::XV, Level::B}
                : std::vector<Level>{Level::G, Level::XH};
  fock_ = static_cast<Eigen::Index>(n_max + 1) * (n_max + 1);
  dim_ = static_cast<Eigen::Index>(levels_.size()) * fock_;
  if (static_cast<std::size_t>(dim_) > dimension_cap) {
    throw std::length_error("CompositeSpace: dimension " + std::to_string(dim_) +
                            " exceeds cap " + std::to_string(dimension_cap));
  }
}

bool CompositeSpace::has_level(Level l) const {
  return std::find(levels_.begin(), levels_.end(), l) != levels_.end();
}

Eigen::Index CompositeSpace::index(const BasisLabel& b) const {
  auto it = std::find(levels_.begin(), levels_.end(), b.level);
  if (it == levels_.end()) {
    throw std::out_of_range("level " + std::string(level_name(b.level)) + " not in this space");
  }
  if (b.n_h < 0 || b.n_h > n_max_ || b.n_v < 0 || b.n_v > n_max_) {
    throw std::out_of_range("photon number outside Fock cutoff: " + to_string(b));
  }
  const auto lvl = static_cast<Eigen::Index>(it - levels_.begin());
  return lvl * fock_ + static_cast<Eigen::Index>(b.n_h) * (n_max_ + 1) + b.n_v;
}

BasisLabel CompositeSpace::label(Eigen::Index i) const {
  if (i < 0 || i >= dim_) throw std::out_of_range("basis index out of range");
  BasisLabel b;
  b.level = levels_[static_cast<std::size_t>(i / fock_)];
  const auto rem = i % fock_;
  b.n_h = static_cast<int>(rem / (n_max_ + 1));
  b.n_v = static_cast<int>(rem % (n_max_ + 1));
  return b;
}

int CompositeSpace::excitation_number(Eigen::Index i) const {
  const auto b = label(i);
  return excitation_count(b.level) + b.n_h + b.n_v;
}

OperatorSet::OperatorSet(const CompositeSpace& space) : space_(space) {
  const auto d = space.dimension();
  a_h_ = Matrix::Zero(d, d);
  a_v_ = Matrix::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const auto b = space.label(col);
    if (b.n_h > 0) {
      a_h_(space.index(b.level, b.n_h - 1, b.n_v), col) = std::sqrt(static_cast<double>(b.n_h));
    }
    if (b.n_v > 0) {
      a_v_(space.index(b.level, b.n_h, b.n_v - 1), col) = std::sqrt(static_cast<double>(b.n_v));
    }
  }
  a_h_dag_ = a_h_.adjoint();
  a_v_dag_ = a_v_.adjoint();
  n_h_ = a_h_dag_ * a_h_;
  n_v_ = a_v_dag_ * a_v_;
  id_ = Matrix::Identity(d, d);
}

Matrix OperatorSet::dyad(Level i, Level j) const {
  const auto d = space_.dimension();
  Matrix m = Matrix::Zero(d, d);
  const int n = space_.n_max();
  for (int nh = 0; nh <= n; ++nh) {
    for (int nv = 0; nv <= n; ++nv) {
      m(space_.index(i, nh, nv), space_.index(j, nh, nv)) = 1.0;
    }
  }
  return m;
}

Matrix OperatorSet::basis_dyad(const BasisLabel& ket, const BasisLabel& bra) const {
  const auto d = space_.dimension();
  Matrix m = Matrix::Zero(d, d);
  m(space_.index(ket), space_.index(bra)) = 1.0;
  return m;
}

DensityMatrix initial_state(const CompositeSpace& space, const InitialState& init) {
  BasisLabel b;
  switch (init.kind) {
    case InitialKind::ground: b = {Level::G, 0, 0}; break;
    case InitialKind::excited_biexciton:
      if (!space.has_level(Level::B)) {
        throw std::invalid_argument("excited_biexciton requires the four-level emitter");
      }
      b = {Level::B, 0, 0};
      break;
    case InitialKind::custom: b = init.custom; break;
  }
  const auto i = space.index(b);
  DensityMatrix rho = DensityMatrix::Zero(space.dimension(), space.dimension());
  rho(i, i) = 1.0;
  return rho;
}

double hermiticity_error(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DensityDiagnostics diagnose(const DensityMatrix& rho, bool with_spectrum) {
  DensityDiagnostics d;
  d.hermiticity_error = hermiticity_error(rho);
  d.trace_error = std::abs(rho.trace() - 1.0);
  d.purity = (rho * rho).trace().real();
  if (with_spectrum) {
    const Matrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
  }
  return d;
}

}  // namespace superqd
