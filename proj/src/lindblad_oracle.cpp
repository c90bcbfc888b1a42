#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "eitbec/dark_state.hpp"
#include "eitbec/rk45.hpp"

namespace eitbec {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using cplx = std::complex<double>;

// Fock basis |n_A, n_C, n_p> with n_A + n_C + n_p <= n_max.
struct FockSpace {
  int n_max;
  std::vector<std::array<int, 3>> states;
  std::vector<int> index;  // packed (base n_max+1) -> state index

  explicit FockSpace(int n) : n_max(n) {
    const int base = n + 1;
    index.assign(base * base * base, -1);
    for (int na = 0; na <= n; ++na) {
      for (int nc = 0; nc + na <= n; ++nc) {
        for (int np = 0; np + nc + na <= n; ++np) {
          index[(na * base + nc) * base + np] = static_cast<int>(states.size());
          states.push_back({na, nc, np});
        }
      }
    }
  }

  int dim() const { return static_cast<int>(states.size()); }

  int find(int na, int nc, int np) const {
    const int base = n_max + 1;
    if (na < 0 || nc < 0 || np < 0 || na + nc + np > n_max) return -1;
    return index[(na * base + nc) * base + np];
  }

  // Annihilation operator for mode 0 (A), 1 (C) or 2 (a).
  MatrixXcd annihilator(int mode) const {
    MatrixXcd op = MatrixXcd::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i) {
      auto s = states[i];
      if (s[mode] == 0) continue;
      auto lowered = s;
      lowered[mode] -= 1;
      const int j = find(lowered[0], lowered[1], lowered[2]);
      op(j, i) = std::sqrt(static_cast<double>(s[mode]));
    }
    return op;
  }
};

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
  return r;
}

}  // namespace

EvolutionResult lindblad_oracle(const CouplingConfig& cfg,
                                std::span<const double> t_grid,
                                GammaAPlacement placement) {
  cfg.validate();
  const double n_real = cfg.photon_number;
  const int n = static_cast<int>(std::llround(n_real));
  if (std::abs(n_real - n) > 1e-9 || n < 0) {
    throw std::invalid_argument("lindblad_oracle: photon_number must be a small integer");
  }
  if (n > 4) {
    throw std::invalid_argument("lindblad_oracle: truncated Fock space supports n <= 4");
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw std::invalid_argument("lindblad_oracle: time grid must be increasing, >= 0");
    }
  }

  const FockSpace space(n);
  const int d = space.dim();
  const MatrixXcd A = space.annihilator(0);
  const MatrixXcd C = space.annihilator(1);
  const MatrixXcd P = space.annihilator(2);

  const MatrixXcd H = cfg.omega * (A.adjoint() * C + C.adjoint() * A) +
                      cfg.g_root_N0 * (A.adjoint() * P + P.adjoint() * A);

  struct Channel {
    double rate;
    MatrixXcd L;
    MatrixXcd LdL;
  };
  std::vector<Channel> channels;
  if (cfg.gamma_C > 0.0) channels.push_back({cfg.gamma_C, C, C.adjoint() * C});
  if (cfg.gamma_A > 0.0) {
    const MatrixXcd& X = placement == GammaAPlacement::photon ? P : A;
    channels.push_back({cfg.gamma_A, X, X.adjoint() * X});
  }

  // Beam-splitter (dark) initial state: amplitudes on |0, m, n-m>.
  VectorXcd psi = VectorXcd::Zero(d);
  const double s = std::sin(cfg.theta);
  const double c = std::cos(cfg.theta);
  for (int m = 0; m <= n; ++m) {
    const double amp = std::sqrt(binomial(n, m)) * std::pow(c, n - m) * std::pow(-s, m);
    psi(space.find(0, m, n - m)) = amp;
  }
  MatrixXcd rho = psi * psi.adjoint();

  auto rhs = [&](double, const MatrixXcd& r) -> MatrixXcd {
    MatrixXcd out = cplx(0.0, -1.0) * (H * r - r * H);
    for (const auto& ch : channels) {
      out += ch.rate * (ch.L * r * ch.L.adjoint() -
                        0.5 * (ch.LdL * r + r * ch.LdL));
    }
    return out;
  };
  auto norm = [](const MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); };

  Rk45Options opts;
  opts.rel_tol = 1e-11;
  opts.abs_tol = 1e-15;

  EvolutionResult res;
  res.times.assign(t_grid.begin(), t_grid.end());
  double t_prev = 0.0;
  for (double t : t_grid) {
    rho = rk45_integrate(rhs, rho, t_prev, t, opts, norm);
    t_prev = t;
    if (std::abs(rho.trace().real() - 1.0) > 1e-9 ||
        std::abs(rho.trace().imag()) > 1e-9) {
      throw NumericsError("lindblad_oracle: density-matrix trace drifted beyond 1e-9");
    }
    std::array<double, 3> pops{};
    for (int i = 0; i < d; ++i) {
      const double p = rho(i, i).real();
      pops[0] += space.states[i][0] * p;
      pops[1] += space.states[i][1] * p;
      pops[2] += space.states[i][2] * p;
    }
    res.populations.push_back(pops);
    res.population_sum.push_back(pops[1] + pops[2]);
  }
  return res;
}

}  // namespace eitbec
