#include "superqd/metrics.hpp"

#include "superqd/units.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace superqd {

namespace {

constexpr double kEmptyIntegral = 1e-12;
constexpr double kHermitianTol = 1e-9;
constexpr double kEigenTol = 1e-9;

const char* tag(Mode m) { return m == Mode::H ? "H" : "V"; }

// Weights of f(0) and f(h) in int_0^h e^{i w s} f(s) ds for linear f,
// in units of h, as functions of theta = w h.
std::pair<Complex, Complex> linear_oscillatory_weights(double theta) {
  if (std::abs(theta) < 0.1) {
    // int_0^1 e^{i theta u} (1 - u) du and int_0^1 u e^{i theta u} du as series.
    Complex a{0.0, 0.0}, b{0.0, 0.0};
    Complex term{1.0, 0.0};
    for (int n = 0; n < 10; ++n) {
      a += term / static_cast<double>((n + 1) * (n + 2));
      b += term / static_cast<double>(n + 2);
      term *= Complex{0.0, theta} / static_cast<double>(n + 1);
    }
    return {a, b};
  }
  const Complex e = std::polar(1.0, theta);
  const Complex i_theta{0.0, theta};
  const Complex whole = (e - 1.0) / i_theta;
  const Complex b = e / i_theta + (e - 1.0) / (theta * theta);
  return {whole - b, b};
}

std::vector<double> outer_weights(const std::vector<double>& t) {
  const auto n = t.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double left = i > 0 ? t[i] - t[i - 1] : 0.0;
    w[i] = 0.5 * (left + t[i + 1] - t[i]);
  }
  return w;
}

}  // namespace

double clamp_unit(double value, const std::string& what) {
  if (!(value >= -kMetricClamp && value <= 1.0 + kMetricClamp)) {
    std::ostringstream os;
    os << what << " = " << value << " lies outside [0, 1]";
    throw MetricRangeError(os.str());
  }
  return std::clamp(value, 0.0, 1.0);
}

EmissionProbability emission_probability(const Trajectory& traj, Mode mode) {
  if (traj.photon_integral.empty()) throw std::invalid_argument("emission_probability: empty trajectory");
  EmissionProbability p;
  const auto mi = static_cast<std::size_t>(mode);
  double integral = traj.photon_integral.back()[mi];
  if (traj.photon_tail) integral += (*traj.photon_tail)[mi];
  p.value = traj.spec.jump_rate() * integral;
  p.lower_bound = traj.cap_hit && !traj.photon_tail;
  return p;
}

std::optional<double> purity(const GFunctions& gf, Mode mode) {
  const auto& mc = gf.mode(mode);
  if (mc.g2.empty()) throw std::invalid_argument(std::string("purity: G2 for mode ") + tag(mode) + " not computed");
  const double den = double_integral(mc.pop).real();
  if (!(den > kEmptyIntegral)) return std::nullopt;
  const double num = double_integral(mc.g2).real();
  return clamp_unit(1.0 - num / den, std::string("purity_") + tag(mode));
}

std::optional<double> indistinguishability(const GFunctions& gf, Mode mode) {
  const auto& mc = gf.mode(mode);
  if (mc.hom.empty()) {
    throw std::invalid_argument(std::string("indistinguishability: G_HOM for mode ") + tag(mode) + " not computed");
  }
  const double den = (2.0 * double_integral(mc.pop) - double_integral(mc.coherent)).real();
  if (!(den > kEmptyIntegral)) return std::nullopt;
  const double num = 2.0 * double_integral(mc.hom).real();
  return clamp_unit(1.0 - num / den, std::string("indist_") + tag(mode));
}

TwoPhotonDensityMatrix two_photon_matrix(const std::array<Complex, 16>& ints) {
  const Mode both[] = {Mode::H, Mode::V};
  TwoPhotonDensityMatrix out;
  Eigen::Matrix4cd m;
  for (Mode i1 : both) {
    for (Mode i2 : both) {
      for (Mode j1 : both) {
        for (Mode j2 : both) {
          const auto r = static_cast<Eigen::Index>(i1) * 2 + static_cast<Eigen::Index>(i2);
          const auto c = static_cast<Eigen::Index>(j1) * 2 + static_cast<Eigen::Index>(j2);
          m(r, c) = ints[pair_index(i1, i2, j2, j1)];
        }
      }
    }
  }
  const double scale = m.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw std::runtime_error("two_photon_matrix: zero trace");
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTol * scale) {
    std::ostringstream os;
    os << "two_photon_matrix: not Hermitian (relative asymmetry " << asym / scale << ")";
    throw std::runtime_error(os.str());
  }
  m = 0.5 * (m + m.adjoint()).eval();
  out.raw_trace = m.trace().real();
  if (!(out.raw_trace > kHermitianTol * scale)) throw std::runtime_error("two_photon_matrix: zero trace");
  out.entries = m / out.raw_trace;
  return out;
}

TwoPhotonDensityMatrix two_photon_matrix(const GFunctions& gf) {
  if (!gf.pair_integrals) throw std::invalid_argument("two_photon_matrix: pair integrals not computed");
  return two_photon_matrix(*gf.pair_integrals);
}

double concurrence(const Eigen::Matrix4cd& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw std::invalid_argument("concurrence: matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > kHermitianTol) throw std::invalid_argument("concurrence: trace is not 1");

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
  Eigen::Vector4d ev = es.eigenvalues();
  if (ev.minCoeff() < -kEigenTol) {
    std::ostringstream os;
    os << "concurrence: negative eigenvalue " << ev.minCoeff();
    throw std::runtime_error(os.str());
  }
  ev = ev.cwiseMax(0.0);
  const Eigen::Matrix4cd sqrt_rho =
      es.eigenvectors() * ev.cwiseSqrt().cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();

  Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  const Eigen::Matrix4cd rho_tilde = flip * rho.conjugate() * flip;
  Eigen::Matrix4cd r2 = sqrt_rho * rho_tilde * sqrt_rho;
  r2 = 0.5 * (r2 + r2.adjoint()).eval();

  Eigen::Vector4d lam = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(r2, Eigen::EigenvaluesOnly).eigenvalues();
  for (auto& l : lam) l = l > kEigenTol ? std::sqrt(l) : 0.0;
  std::sort(lam.begin(), lam.end());
  return clamp_unit(std::max(0.0, lam(3) - lam(2) - lam(1) - lam(0)), "concurrence");
}

std::vector<double> Spectrum::raw() const {
  std::vector<double> out(normalized.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = peak * normalized[k];
  return out;
}

double Spectrum::integral_rad_per_ps() const {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < normalized.size(); ++k) {
    s += 0.5 * (normalized[k] + normalized[k + 1]) * (omega_rel_meV[k + 1] - omega_rel_meV[k]);
  }
  return peak * meV_to_rad_per_ps(s);
}

Spectrum spectrum(const Trajectory& traj, const GFunctions& gf, Mode mode, const SpectrumGrid& grid) {
  if (grid.points < 2 || !(grid.span_meV > 0.0)) throw std::invalid_argument("spectrum: bad frequency grid");
  const auto& g1 = gf.mode(mode).g1;
  const auto n = g1.size();
  if (n != traj.size()) throw std::invalid_argument("spectrum: G1 grid does not match trajectory");

  Spectrum sp;
  sp.mode = mode;
  sp.omega_rel_meV.resize(static_cast<std::size_t>(grid.points));
  for (int k = 0; k < grid.points; ++k) {
    sp.omega_rel_meV[static_cast<std::size_t>(k)] =
        -grid.span_meV + 2.0 * grid.span_meV * k / static_cast<double>(grid.points - 1);
  }
  std::vector<double> raw(sp.omega_rel_meV.size(), 0.0);

  if (n >= 2) {
    // Row i contributes e^{i w tau_a} (alpha f_a + beta f_b) for each tau interval
    // [tau_a, tau_b]. Both ends are lattice multiples, so sum the rows into
    // buckets keyed by (interval length, start) first.
    const double delta = traj.grid_spacing_ps;
    const auto wt = outer_weights(g1.t_nodes());
    // G1 is demodulated at the cavity frequency before interpolation.
    const auto& cav = traj.spec.cavity;
    const double mode_meV = mode == Mode::H ? cav.energy_h_meV : cav.energy_v_meV;
    const double shift = meV_to_rad_per_ps(mode_meV - traj.spec.frame_meV());
    const long span = traj.lattice.back() - traj.lattice.front();
    std::map<long, std::pair<Eigen::VectorXcd, Eigen::VectorXcd>> buckets;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto row = g1.row(i);
      for (std::size_t j = 0; j + 1 < row.size(); ++j) {
        const long s = traj.lattice[i + j] - traj.lattice[i];
        const long m = traj.lattice[i + j + 1] - traj.lattice[i + j];
        auto it = buckets.find(m);
        if (it == buckets.end()) {
          it = buckets
                   .emplace(m, std::make_pair(Eigen::VectorXcd::Zero(span + 1), Eigen::VectorXcd::Zero(span + 1)))
                   .first;
        }
        it->second.first(s) += wt[i] * std::polar(1.0, shift * s * delta) * row[j];
        it->second.second(s) += wt[i] * std::polar(1.0, shift * (s + m) * delta) * row[j + 1];
      }
    }
    for (std::size_t k = 0; k < raw.size(); ++k) {
      const double w = meV_to_rad_per_ps(sp.omega_rel_meV[k]);
      Complex total{0.0, 0.0};
      for (const auto& [m, b] : buckets) {
        const double h = static_cast<double>(m) * delta;
        const auto [alpha, beta] = linear_oscillatory_weights(w * h);
        const Complex step = std::polar(1.0, w * delta);
        Complex phase{1.0, 0.0};
        Complex acc{0.0, 0.0};
        for (long s = 0; s + m <= span; ++s) {
          acc += phase * (alpha * b.first(s) + beta * b.second(s));
          phase *= step;
        }
        total += h * acc;
      }
      raw[k] = total.real();
    }
  }

  sp.peak = *std::max_element(raw.begin(), raw.end());
  sp.normalized.assign(raw.size(), 0.0);
  if (sp.peak > 0.0) {
    for (std::size_t k = 0; k < raw.size(); ++k) sp.normalized[k] = raw[k] / sp.peak;
  }
  double above = 0.0, below = 0.0;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const double lo = k > 0 ? sp.omega_rel_meV[k] - sp.omega_rel_meV[k - 1] : 0.0;
    const double hi = k + 1 < raw.size() ? sp.omega_rel_meV[k + 1] - sp.omega_rel_meV[k] : 0.0;
    const double weight = 0.5 * (lo + hi) * raw[k];
    if (sp.omega_rel_meV[k] > 0.0) {
      above += weight;
    } else if (sp.omega_rel_meV[k] < 0.0) {
      below += weight;
    }
  }
  sp.asymmetry = above + below != 0.0 ? (above - below) / (above + below) : 0.0;
  return sp;
}

const ModeMetrics& MetricsReport::mode(Mode m) const {
  for (const auto& mm : modes) {
    if (mm.mode == m) return mm;
  }
  throw std::out_of_range(std::string("MetricsReport: mode ") + tag(m) + " not evaluated");
}

bool MetricsReport::converged(double limit) const {
  return std::all_of(convergence.begin(), convergence.end(), [&](const auto& c) { return c.passed(limit); });
}

std::map<std::string, double> MetricsReport::headline() const {
  std::map<std::string, double> out;
  for (const auto& mm : modes) {
    const std::string t = tag(mm.mode);
    out["emission_prob_" + t] = mm.emission.value;
    if (mm.purity) out["purity_" + t] = *mm.purity;
    if (mm.indistinguishability) out["indist_" + t] = *mm.indistinguishability;
  }
  if (concurrence) out["concurrence"] = *concurrence;
  return out;
}

MetricsReport compute_metrics(const Trajectory& traj, const MetricsRequest& req, const QrtOptions& qrt) {
  MetricsReport rep;
  const bool single = req.photon_quality || req.spectra;
  GFunctions gf;
  if (single || req.concurrence) {
    GFunctionRequest gr;
    if (single) gr.modes = req.modes;
    else gr.modes.clear();
    gr.second_order = req.photon_quality;
    gr.pair_integrals = req.concurrence;
    gf = g_functions(traj, gr, qrt);
  }
  for (Mode m : req.modes) {
    ModeMetrics mm;
    mm.mode = m;
    mm.emission = emission_probability(traj, m);
    if (req.photon_quality) {
      mm.purity = purity(gf, m);
      mm.indistinguishability = indistinguishability(gf, m);
    }
    if (req.spectra) mm.spectrum = spectrum(traj, gf, m, req.spectrum_grid);
    rep.modes.push_back(std::move(mm));
  }
  if (req.concurrence) {
    rep.two_photon = two_photon_matrix(gf);
    rep.concurrence = concurrence(*rep.two_photon);
  }
  return rep;
}

}  // namespace superqd
