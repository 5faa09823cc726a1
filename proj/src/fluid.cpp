#include "ibspline/fluid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ibs {

namespace {

using cplx = std::complex<double>;
using Spectrum = std::vector<cplx>;

// FFTW's planner is not reentrant; plans themselves are safe to execute
// concurrently on distinct buffers.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void validate(const Grid& g) {
  if (g.nx < 4 || g.ny < 4) throw std::invalid_argument("grid: need at least 4 cells per axis");
  if (!(g.lx > 0.0 && g.ly > 0.0)) throw std::invalid_argument("grid: domain lengths must be positive");
  const double hx = g.lx / static_cast<double>(g.nx), hy = g.ly / static_cast<double>(g.ny);
  if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy))
    throw std::invalid_argument("grid: cells must be square (Lx/Nx == Ly/Ny)");
}

FluidState::FluidState(const Grid& g, double rho_, double mu_)
    : grid(g), rho(rho_), mu(mu_), u(g.size(), 0.0), v(g.size(), 0.0), p(g.size(), 0.0),
      fx(g.size(), 0.0), fy(g.size(), 0.0) {}

struct FluidSolver::Impl {
  Grid g;
  std::size_t nxc = 0;  // complex columns of the r2c layout
  std::vector<double> kx, ky;    // derivative wavenumbers (Nyquist zeroed)
  std::vector<double> kx2, ky2;  // squared wavenumbers for the Laplacian
  std::vector<char> keep;        // 2/3 dealiasing mask
  double* rbuf = nullptr;
  fftw_complex* cbuf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  mutable bool warned_cfl = false;

  explicit Impl(const Grid& grid) : g(grid), nxc(grid.nx / 2 + 1) {
    validate(g);
    const double tx = 2.0 * std::numbers::pi / g.lx, ty = 2.0 * std::numbers::pi / g.ly;
    kx.resize(nxc);
    kx2.resize(nxc);
    for (std::size_t i = 0; i < nxc; ++i) {
      const double k = tx * static_cast<double>(i);
      kx2[i] = k * k;
      kx[i] = (g.nx % 2 == 0 && i == g.nx / 2) ? 0.0 : k;
    }
    ky.resize(g.ny);
    ky2.resize(g.ny);
    for (std::size_t j = 0; j < g.ny; ++j) {
      const double jj = j <= g.ny / 2 ? static_cast<double>(j) : -static_cast<double>(g.ny - j);
      const double k = ty * jj;
      ky2[j] = k * k;
      ky[j] = (g.ny % 2 == 0 && j == g.ny / 2) ? 0.0 : k;
    }
    keep.resize(g.ny * nxc);
    const long cx = static_cast<long>(g.nx / 3), cy = static_cast<long>(g.ny / 3);
    for (std::size_t j = 0; j < g.ny; ++j) {
      const long jj = j <= g.ny / 2 ? static_cast<long>(j) : static_cast<long>(g.ny - j);
      for (std::size_t i = 0; i < nxc; ++i)
        keep[j * nxc + i] = (static_cast<long>(i) <= cx && jj <= cy) ? 1 : 0;
    }

    std::lock_guard lock(planner_mutex());
    rbuf = fftw_alloc_real(g.size());
    cbuf = fftw_alloc_complex(g.ny * nxc);
    const int n0 = static_cast<int>(g.ny), n1 = static_cast<int>(g.nx);
    fwd = fftw_plan_dft_r2c_2d(n0, n1, rbuf, cbuf, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_2d(n0, n1, cbuf, rbuf, FFTW_ESTIMATE);
    if (!fwd || !inv) throw std::runtime_error("FluidSolver: FFTW planning failed");
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
    fftw_free(rbuf);
    fftw_free(cbuf);
  }

  std::size_t nspec() const { return g.ny * nxc; }

  Spectrum forward(const Field& f) const {
    std::copy(f.begin(), f.end(), rbuf);
    fftw_execute(fwd);
    Spectrum out(nspec());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {cbuf[k][0], cbuf[k][1]};
    return out;
  }

  Field inverse(const Spectrum& s) const {
    for (std::size_t k = 0; k < s.size(); ++k) {
      cbuf[k][0] = s[k].real();
      cbuf[k][1] = s[k].imag();
    }
    fftw_execute(inv);
    const double scale = 1.0 / static_cast<double>(g.size());
    Field out(g.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = rbuf[k] * scale;
    return out;
  }

  Spectrum ddx(const Spectrum& s) const {
    Spectrum out(s.size());
    for (std::size_t j = 0; j < g.ny; ++j)
      for (std::size_t i = 0; i < nxc; ++i) out[j * nxc + i] = cplx(0.0, kx[i]) * s[j * nxc + i];
    return out;
  }

  Spectrum ddy(const Spectrum& s) const {
    Spectrum out(s.size());
    for (std::size_t j = 0; j < g.ny; ++j)
      for (std::size_t i = 0; i < nxc; ++i) out[j * nxc + i] = cplx(0.0, ky[j]) * s[j * nxc + i];
    return out;
  }

  void project(Spectrum& uh, Spectrum& vh) const {
    for (std::size_t j = 0; j < g.ny; ++j)
      for (std::size_t i = 0; i < nxc; ++i) {
        const std::size_t k = j * nxc + i;
        const double k2 = kx[i] * kx[i] + ky[j] * ky[j];
        if (k2 == 0.0) continue;
        const cplx d = (kx[i] * uh[k] + ky[j] * vh[k]) / k2;
        uh[k] -= kx[i] * d;
        vh[k] -= ky[j] * d;
      }
  }
};

FluidSolver::FluidSolver(const Grid& g) : impl_(std::make_unique<Impl>(g)) {}
FluidSolver::~FluidSolver() = default;
FluidSolver::FluidSolver(FluidSolver&&) noexcept = default;
FluidSolver& FluidSolver::operator=(FluidSolver&&) noexcept = default;

const Grid& FluidSolver::grid() const { return impl_->g; }

StepDiagnostics FluidSolver::advance(FluidState& s, double dt) const {
  const Impl& m = *impl_;
  if (!(dt > 0.0)) throw std::invalid_argument("advance_fluid: dt must be positive");
  if (s.u.size() != m.g.size() || s.fx.size() != m.g.size())
    throw std::invalid_argument("advance_fluid: state does not match solver grid");

  StepDiagnostics diag;
  diag.cfl = max_speed(s.u, s.v) * dt / m.g.h();
  if (diag.cfl > 1.0)
    throw std::runtime_error("advance_fluid: CFL number " + std::to_string(diag.cfl) + " exceeds 1");
  if (diag.cfl > 0.5 && !m.warned_cfl) {
    m.warned_cfl = true;
    std::cerr << "warning: CFL number " << diag.cfl << " above 0.5\n";
  }

  const std::size_t n = m.g.size();
  const Spectrum uh = m.forward(s.u), vh = m.forward(s.v);

  // Skew-symmetric advection: half convective plus half conservative form.
  const Field ux = m.inverse(m.ddx(uh)), uy = m.inverse(m.ddy(uh));
  const Field vx = m.inverse(m.ddx(vh)), vy = m.inverse(m.ddy(vh));
  Field cx(n), cy(n), uu(n), uv(n), vv(n);
  for (std::size_t k = 0; k < n; ++k) {
    cx[k] = s.u[k] * ux[k] + s.v[k] * uy[k];
    cy[k] = s.u[k] * vx[k] + s.v[k] * vy[k];
    uu[k] = s.u[k] * s.u[k];
    uv[k] = s.u[k] * s.v[k];
    vv[k] = s.v[k] * s.v[k];
  }
  const Spectrum cxh = m.forward(cx), cyh = m.forward(cy);
  const Spectrum uuh = m.forward(uu), uvh = m.forward(uv), vvh = m.forward(vv);
  const Spectrum dx_uu = m.ddx(uuh), dy_uv = m.ddy(uvh), dx_uv = m.ddx(uvh), dy_vv = m.ddy(vvh);
  const Spectrum fxh = m.forward(s.fx), fyh = m.forward(s.fy);

  const double nu = s.nu();
  Spectrum wu(m.nspec()), wv(m.nspec());
  for (std::size_t j = 0; j < m.g.ny; ++j)
    for (std::size_t i = 0; i < m.nxc; ++i) {
      const std::size_t k = j * m.nxc + i;
      cplx nlu = 0.5 * (cxh[k] + dx_uu[k] + dy_uv[k]);
      cplx nlv = 0.5 * (cyh[k] + dx_uv[k] + dy_vv[k]);
      if (!m.keep[k] || k == 0) nlu = nlv = 0.0;
      wu[k] = uh[k] + dt * (fxh[k] / s.rho - nlu);
      wv[k] = vh[k] + dt * (fyh[k] / s.rho - nlv);
    }

  Spectrum ph(m.nspec(), 0.0);
  for (std::size_t j = 0; j < m.g.ny; ++j)
    for (std::size_t i = 0; i < m.nxc; ++i) {
      const std::size_t k = j * m.nxc + i;
      const double k2 = m.kx[i] * m.kx[i] + m.ky[j] * m.ky[j];
      if (k2 == 0.0) continue;
      ph[k] = cplx(0.0, -s.rho / (dt * k2)) * (m.kx[i] * wu[k] + m.ky[j] * wv[k]);
    }
  m.project(wu, wv);
  for (std::size_t j = 0; j < m.g.ny; ++j)
    for (std::size_t i = 0; i < m.nxc; ++i) {
      const std::size_t k = j * m.nxc + i;
      const double damp = 1.0 / (1.0 + nu * dt * (m.kx2[i] + m.ky2[j]));
      wu[k] *= damp;
      wv[k] *= damp;
    }

  s.u = m.inverse(wu);
  s.v = m.inverse(wv);
  s.p = m.inverse(ph);
  return diag;
}

void FluidSolver::project(Field& u, Field& v) const {
  Spectrum uh = impl_->forward(u), vh = impl_->forward(v);
  impl_->project(uh, vh);
  u = impl_->inverse(uh);
  v = impl_->inverse(vh);
}

Field FluidSolver::vorticity(const Field& u, const Field& v) const {
  const Spectrum uh = impl_->forward(u), vh = impl_->forward(v);
  const Spectrum a = impl_->ddx(vh), b = impl_->ddy(uh);
  Spectrum w(a.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = a[k] - b[k];
  return impl_->inverse(w);
}

Field FluidSolver::divergence(const Field& u, const Field& v) const {
  const Spectrum uh = impl_->forward(u), vh = impl_->forward(v);
  const Spectrum a = impl_->ddx(uh), b = impl_->ddy(vh);
  Spectrum d(a.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = a[k] + b[k];
  return impl_->inverse(d);
}

FluidState advance_fluid(FluidState s, double dt) {
  FluidSolver solver(s.grid);
  solver.advance(s, dt);
  return s;
}

Field vorticity(const FluidState& s) { return FluidSolver(s.grid).vorticity(s.u, s.v); }

double max_divergence(const FluidState& s) {
  return max_abs(FluidSolver(s.grid).divergence(s.u, s.v));
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

double max_speed(const Field& u, const Field& v) {
  double m = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) m = std::max(m, u[k] * u[k] + v[k] * v[k]);
  return std::sqrt(m);
}

}  // namespace ibs
