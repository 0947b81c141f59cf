#include "saltlab/fields.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace saltlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Plans are created once per grid shape under a lock; execution goes through
// the new-array interface, which FFTW documents as thread-safe.
struct FftPlans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    ~FftPlans() {
        if (r2c) fftw_destroy_plan(r2c);
        if (c2r) fftw_destroy_plan(c2r);
    }
};

const FftPlans& plans_for(const Grid2D& g) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<FftPlans>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{g.nx(), g.ny()}];
    if (!slot) {
        slot = std::make_unique<FftPlans>();
        double* real = fftw_alloc_real(g.size());
        fftw_complex* cplx = fftw_alloc_complex(g.spectral_size());
        const int nx = int(g.nx()), ny = int(g.ny());
        slot->r2c = fftw_plan_dft_r2c_2d(nx, ny, real, cplx, FFTW_ESTIMATE | FFTW_UNALIGNED);
        slot->c2r = fftw_plan_dft_c2r_2d(nx, ny, cplx, real, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(real);
        fftw_free(cplx);
        if (!slot->r2c || !slot->c2r) throw std::runtime_error("FFTW planning failed");
    }
    return *slot;
}

void require_same_grid(const Grid2D& a, const Grid2D& b) {
    if (!(a == b)) throw std::invalid_argument("field grids differ");
}

}  // namespace

Grid2D::Grid2D(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny) {
    if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0)
        throw std::invalid_argument("grid sizes must be even and >= 8 (got " + std::to_string(nx) +
                                    "x" + std::to_string(ny) + ")");
}

double Grid2D::hx() const { return kTwoPi / double(nx_); }
double Grid2D::hy() const { return kTwoPi / double(ny_); }

ScalarField::ScalarField(const Grid2D& grid, std::vector<double> data)
    : grid_(grid), data_(std::move(data)) {
    if (data_.size() != grid_.size()) throw std::invalid_argument("field data size does not match grid");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= o.data_[n];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (auto& x : data_) x *= s;
    return *this;
}

ScalarField& ScalarField::axpy(double s, const ScalarField& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += s * o.data_[n];
    return *this;
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid());
    ScalarField out(a.grid());
    for (std::size_t n = 0; n < a.size(); ++n) out[n] = a[n] * b[n];
    return out;
}

VectorField2D::VectorField2D(ScalarField u_, ScalarField v_) : u(std::move(u_)), v(std::move(v_)) {
    require_same_grid(u.grid(), v.grid());
}

VectorField2D& VectorField2D::operator+=(const VectorField2D& o) {
    u += o.u;
    v += o.v;
    return *this;
}

VectorField2D& VectorField2D::operator-=(const VectorField2D& o) {
    u -= o.u;
    v -= o.v;
    return *this;
}

VectorField2D& VectorField2D::operator*=(double s) {
    u *= s;
    v *= s;
    return *this;
}

VectorField2D& VectorField2D::axpy(double s, const VectorField2D& o) {
    u.axpy(s, o.u);
    v.axpy(s, o.v);
    return *this;
}

Spectrum& Spectrum::operator+=(const Spectrum& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t n = 0; n < c_.size(); ++n) c_[n] += o.c_[n];
    return *this;
}

Spectrum& Spectrum::operator*=(double s) {
    for (auto& c : c_) c *= s;
    return *this;
}

Spectrum forward(const ScalarField& f) {
    const auto& g = f.grid();
    Spectrum s(g);
    // r2c does not modify its input, the const_cast is only for the C API.
    fftw_execute_dft_r2c(plans_for(g).r2c, const_cast<double*>(f.values().data()),
                         reinterpret_cast<fftw_complex*>(s.coefficients().data()));
    return s;
}

ScalarField inverse(const Spectrum& s) {
    const auto& g = s.grid();
    std::vector<std::complex<double>> work(s.coefficients().begin(), s.coefficients().end());
    ScalarField f(g);
    fftw_execute_dft_c2r(plans_for(g).c2r, reinterpret_cast<fftw_complex*>(work.data()),
                         f.values().data());
    f *= 1.0 / double(g.size());
    return f;
}

Spectrum derivative(const Spectrum& s, Axis axis, int order) {
    if (order != 1 && order != 2) throw std::invalid_argument("derivative order must be 1 or 2");
    const auto& g = s.grid();
    Spectrum out(g);
    for (std::size_t i = 0; i < g.nx(); ++i) {
        for (std::size_t j = 0; j < g.nky(); ++j) {
            const bool x_axis = axis == Axis::X;
            const double k = x_axis ? g.kx(i) : g.ky(j);
            const bool nyquist = x_axis ? (i == g.nx() / 2) : (j == g.ny() / 2);
            if (order == 1)
                out(i, j) = nyquist ? 0.0 : std::complex<double>(0.0, k) * s(i, j);
            else
                out(i, j) = -k * k * s(i, j);
        }
    }
    return out;
}

Spectrum laplacian(const Spectrum& s) {
    const auto& g = s.grid();
    Spectrum out(g);
    for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.nky(); ++j) {
            const double kx = g.kx(i), ky = g.ky(j);
            out(i, j) = -(kx * kx + ky * ky) * s(i, j);
        }
    return out;
}

Spectrum inverse_laplacian(const Spectrum& s) {
    const auto& g = s.grid();
    Spectrum out(g);
    for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.nky(); ++j) {
            if (i == 0 && j == 0) continue;  // zero-mean gauge
            const double kx = g.kx(i), ky = g.ky(j);
            out(i, j) = -s(i, j) / (kx * kx + ky * ky);
        }
    return out;
}

Spectrum dealias(const Spectrum& s) {
    const auto& g = s.grid();
    Spectrum out = s;
    for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.nky(); ++j) {
            const auto kx = std::size_t(std::abs(g.kx(i)));
            const auto ky = std::size_t(g.ky(j));
            if (3 * kx > g.nx() || 3 * ky > g.ny()) out(i, j) = 0.0;
        }
    return out;
}

ScalarField derivative(const ScalarField& f, Axis axis, int order) {
    return inverse(derivative(forward(f), axis, order));
}

ScalarField laplacian(const ScalarField& f) { return inverse(laplacian(forward(f))); }

ScalarField inverse_laplacian(const ScalarField& f) { return inverse(inverse_laplacian(forward(f))); }

ScalarField dealias(const ScalarField& f) { return inverse(dealias(forward(f))); }

VectorField2D dealias(const VectorField2D& v) { return {dealias(v.u), dealias(v.v)}; }

VectorField2D gradient(const ScalarField& f) {
    const auto s = forward(f);
    return {inverse(derivative(s, Axis::X, 1)), inverse(derivative(s, Axis::Y, 1))};
}

ScalarField divergence(const VectorField2D& v) {
    auto s = derivative(forward(v.u), Axis::X, 1);
    s += derivative(forward(v.v), Axis::Y, 1);
    return inverse(s);
}

ScalarField curl(const VectorField2D& v) {
    auto s = derivative(forward(v.v), Axis::X, 1);
    auto t = derivative(forward(v.u), Axis::Y, 1);
    t *= -1.0;
    s += t;
    return inverse(s);
}

VectorField2D perp_gradient(const ScalarField& psi) {
    const auto s = forward(psi);
    auto u = derivative(s, Axis::Y, 1);
    u *= -1.0;
    return {inverse(u), inverse(derivative(s, Axis::X, 1))};
}

VectorField2D velocity_from_vorticity(const ScalarField& omega) {
    const auto psi = inverse_laplacian(forward(omega));
    auto u = derivative(psi, Axis::Y, 1);
    u *= -1.0;
    return {inverse(u), inverse(derivative(psi, Axis::X, 1))};
}

VectorField2D leray_project(const VectorField2D& v) {
    const auto& g = v.grid();
    const auto su = forward(v.u);
    const auto sv = forward(v.v);
    Spectrum pu(g), pv(g);
    for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.nky(); ++j) {
            // Nyquist wavenumbers are treated as zero, matching derivative().
            const double kx = (i == g.nx() / 2) ? 0.0 : double(g.kx(i));
            const double ky = (j == g.ny() / 2) ? 0.0 : double(g.ky(j));
            const double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) {
                pu(i, j) = su(i, j);
                pv(i, j) = sv(i, j);
                continue;
            }
            const auto kdotv = kx * su(i, j) + ky * sv(i, j);
            pu(i, j) = su(i, j) - kx * kdotv / k2;
            pv(i, j) = sv(i, j) - ky * kdotv / k2;
        }
    return {inverse(pu), inverse(pv)};
}

double mean(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.values()) s += x;
    return s / double(f.size());
}

double integral(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.values()) s += x;
    return s * f.grid().cell_area();
}

double rms(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.values()) s += x * x;
    return std::sqrt(s / double(f.size()));
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double x : f.values()) m = std::max(m, std::abs(x));
    return m;
}

double l2_norm(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.values()) s += x * x;
    return std::sqrt(s * f.grid().cell_area());
}

double min_value(const ScalarField& f) { return *std::min_element(f.values().begin(), f.values().end()); }

double max_value(const ScalarField& f) { return *std::max_element(f.values().begin(), f.values().end()); }

double spectral_energy(const Spectrum& s) {
    const auto& g = s.grid();
    double e = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.nky(); ++j) {
            const double w = (j == 0 || j == g.ny() / 2) ? 1.0 : 2.0;
            e += w * std::norm(s(i, j));
        }
    return e / double(g.size());
}

SpectralInterpolator::SpectralInterpolator(const ScalarField& f)
    : grid_(f.grid()), ex_buf_(f.grid().nx()), ey_buf_(f.grid().nky()) {
    const auto s = forward(f);
    coeff_.assign(s.coefficients().begin(), s.coefficients().end());
    const double norm = 1.0 / double(grid_.size());
    for (std::size_t i = 0; i < grid_.nx(); ++i)
        for (std::size_t j = 0; j < grid_.nky(); ++j) {
            const double w = (j == 0 || j == grid_.ny() / 2) ? 1.0 : 2.0;
            coeff_[i * grid_.nky() + j] *= w * norm;
        }
}

double SpectralInterpolator::operator()(double x, double y) const {
    if (!std::isfinite(x) || !std::isfinite(y))
        throw std::invalid_argument("interpolation point is not finite");
    const std::size_t nx = grid_.nx(), nky = grid_.nky();
    // Nyquist terms use the symmetric cosine so the interpolant stays real.
    for (std::size_t i = 0; i < nx; ++i) {
        const double k = grid_.kx(i);
        ex_buf_[i] = (i == nx / 2) ? std::complex<double>(std::cos(k * x), 0.0)
                                   : std::polar(1.0, k * x);
    }
    for (std::size_t j = 0; j < nky; ++j) {
        const double k = double(j);
        ey_buf_[j] = (j == grid_.ny() / 2) ? std::complex<double>(std::cos(k * y), 0.0)
                                           : std::polar(1.0, k * y);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        std::complex<double> row = 0.0;
        const auto* c = &coeff_[i * nky];
        for (std::size_t j = 0; j < nky; ++j) row += c[j] * ey_buf_[j];
        total += (row * ex_buf_[i]).real();
    }
    return total;
}

double interpolate(const ScalarField& f, double x, double y) { return SpectralInterpolator(f)(x, y); }

std::vector<double> interpolate(const ScalarField& f, std::span<const std::pair<double, double>> points) {
    SpectralInterpolator interp(f);
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& [x, y] : points) out.push_back(interp(x, y));
    return out;
}

double wrap_periodic(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

}  // namespace saltlab
