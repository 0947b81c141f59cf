#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace saltlab {

/// Uniform grid on the periodic square [0, 2pi)^2.
///
/// Storage is row-major with x as the slow index: value (i, j) sits at
/// i * ny + j and lives at (i * hx, j * hy).
class Grid2D {
public:
    Grid2D() = default;
    Grid2D(std::size_t nx, std::size_t ny);

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    std::size_t size() const { return nx_ * ny_; }
    /// Number of complex coefficients in the half spectrum.
    std::size_t spectral_size() const { return nx_ * (ny_ / 2 + 1); }
    std::size_t nky() const { return ny_ / 2 + 1; }
    double hx() const;
    double hy() const;
    double cell_area() const { return hx() * hy(); }

    /// Signed integer wavenumber for spectral row i.
    int kx(std::size_t i) const { return i <= nx_ / 2 ? int(i) : int(i) - int(nx_); }
    int ky(std::size_t j) const { return int(j); }

    double x(std::size_t i) const { return double(i) * hx(); }
    double y(std::size_t j) const { return double(j) * hy(); }

    friend bool operator==(const Grid2D&, const Grid2D&) = default;

private:
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
};

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid2D& grid, double value = 0.0)
        : grid_(grid), data_(grid.size(), value) {}
    ScalarField(const Grid2D& grid, std::vector<double> data);

    /// Samples f(x, y) at every grid node.
    template <class F>
    static ScalarField from_function(const Grid2D& grid, F&& f) {
        ScalarField out(grid);
        for (std::size_t i = 0; i < grid.nx(); ++i)
            for (std::size_t j = 0; j < grid.ny(); ++j)
                out(i, j) = f(grid.x(i), grid.y(j));
        return out;
    }

    const Grid2D& grid() const { return grid_; }
    std::size_t size() const { return data_.size(); }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * grid_.ny() + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * grid_.ny() + j]; }
    double& operator[](std::size_t n) { return data_[n]; }
    double operator[](std::size_t n) const { return data_[n]; }
    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);
    /// this += s * o
    ScalarField& axpy(double s, const ScalarField& o);

    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
    friend ScalarField operator*(ScalarField a, double s) { return a *= s; }
    friend ScalarField operator*(double s, ScalarField a) { return a *= s; }
    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    Grid2D grid_;
    std::vector<double> data_;
};

/// Pointwise product.
ScalarField multiply(const ScalarField& a, const ScalarField& b);

struct VectorField2D {
    ScalarField u;
    ScalarField v;

    VectorField2D() = default;
    explicit VectorField2D(const Grid2D& grid) : u(grid), v(grid) {}
    VectorField2D(ScalarField u_, ScalarField v_);

    const Grid2D& grid() const { return u.grid(); }

    VectorField2D& operator+=(const VectorField2D& o);
    VectorField2D& operator-=(const VectorField2D& o);
    VectorField2D& operator*=(double s);
    VectorField2D& axpy(double s, const VectorField2D& o);

    friend VectorField2D operator+(VectorField2D a, const VectorField2D& b) { return a += b; }
    friend VectorField2D operator-(VectorField2D a, const VectorField2D& b) { return a -= b; }
    friend VectorField2D operator*(VectorField2D a, double s) { return a *= s; }
    friend VectorField2D operator*(double s, VectorField2D a) { return a *= s; }
    friend bool operator==(const VectorField2D&, const VectorField2D&) = default;
};

/// Half-plane Fourier coefficients of a real field (r2c layout, unnormalised).
class Spectrum {
public:
    Spectrum() = default;
    explicit Spectrum(const Grid2D& grid) : grid_(grid), c_(grid.spectral_size()) {}

    const Grid2D& grid() const { return grid_; }
    std::complex<double>& operator()(std::size_t i, std::size_t j) { return c_[i * grid_.nky() + j]; }
    std::complex<double> operator()(std::size_t i, std::size_t j) const { return c_[i * grid_.nky() + j]; }
    std::span<std::complex<double>> coefficients() { return c_; }
    std::span<const std::complex<double>> coefficients() const { return c_; }

    Spectrum& operator+=(const Spectrum& o);
    Spectrum& operator*=(double s);

private:
    Grid2D grid_;
    std::vector<std::complex<double>> c_;
};

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

enum class Axis { X, Y };

// Spectral-space operators. Odd derivatives zero the Nyquist row/column so
// the result stays the transform of a real field.
Spectrum derivative(const Spectrum& s, Axis axis, int order);
Spectrum laplacian(const Spectrum& s);
Spectrum inverse_laplacian(const Spectrum& s);
Spectrum dealias(const Spectrum& s);

// Physical-space conveniences built on the above.
ScalarField derivative(const ScalarField& f, Axis axis, int order = 1);
ScalarField laplacian(const ScalarField& f);
/// Zero-mean solution of lap(p) = f - mean(f).
ScalarField inverse_laplacian(const ScalarField& f);
ScalarField dealias(const ScalarField& f);
VectorField2D dealias(const VectorField2D& v);
VectorField2D gradient(const ScalarField& f);
ScalarField divergence(const VectorField2D& v);
/// dv/dx - du/dy
ScalarField curl(const VectorField2D& v);
/// (-dpsi/dy, dpsi/dx)
VectorField2D perp_gradient(const ScalarField& psi);
/// Zero-mean velocity whose curl is omega - mean(omega).
VectorField2D velocity_from_vorticity(const ScalarField& omega);
/// v - grad lap^{-1} div v. Keeps the mean of v.
VectorField2D leray_project(const VectorField2D& v);

double mean(const ScalarField& f);
double integral(const ScalarField& f);
double rms(const ScalarField& f);
double max_abs(const ScalarField& f);
double l2_norm(const ScalarField& f);
double min_value(const ScalarField& f);
double max_value(const ScalarField& f);
/// Sum over the half spectrum (with conjugate weights) of |c|^2, scaled so it
/// equals the grid sum of f^2.
double spectral_energy(const Spectrum& s);

/// Evaluates the trigonometric interpolant of a field at arbitrary points.
/// The spectrum is held once; each evaluation costs O(nx * ny).
class SpectralInterpolator {
public:
    explicit SpectralInterpolator(const ScalarField& f);
    double operator()(double x, double y) const;

private:
    Grid2D grid_;
    std::vector<std::complex<double>> coeff_;  // normalised, column weights folded in
    mutable std::vector<std::complex<double>> ex_buf_;
    mutable std::vector<std::complex<double>> ey_buf_;
};

double interpolate(const ScalarField& f, double x, double y);
std::vector<double> interpolate(const ScalarField& f, std::span<const std::pair<double, double>> points);

/// Folds a coordinate into [0, 2pi).
double wrap_periodic(double x);

}  // namespace saltlab
