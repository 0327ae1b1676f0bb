#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace rgs {

using cplx = std::complex<double>;

/// A point (or vector) of the plane.
struct Point
{
    double x1{0.0};
    double x2{0.0};

    friend Point operator+(Point a, Point b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
    friend Point operator-(Point a, Point b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
    friend Point operator*(double s, Point a) { return {s * a.x1, s * a.x2}; }
    friend bool operator==(Point a, Point b) = default;

    double norm() const { return std::hypot(x1, x2); }
    /// x⊥ = (-x2, x1)
    Point perp() const { return {-x2, x1}; }
};

inline double dot(Point a, Point b) { return a.x1 * b.x1 + a.x2 * b.x2; }

/// Uniform square grid on [-L, L]^2 with n nodes per axis.
///
/// Nodes are stored row-major with x1 fastest: index(i, j) = j * n + i, and
/// node (i, j) sits at (-L + i h, -L + j h) with h = 2L / (n - 1).
class GridSpec
{
  public:
    GridSpec(double half_width, std::size_t n);

    double half_width() const { return half_width_; }
    std::size_t n() const { return n_; }
    double spacing() const { return spacing_; }
    std::size_t size() const { return n_ * n_; }
    double cell_area() const { return spacing_ * spacing_; }

    double coord(std::size_t i) const { return -half_width_ + static_cast<double>(i) * spacing_; }
    Point node(std::size_t i, std::size_t j) const { return {coord(i), coord(j)}; }
    std::size_t index(std::size_t i, std::size_t j) const { return j * n_ + i; }
    bool on_boundary(std::size_t i, std::size_t j) const
    {
        return i == 0 || j == 0 || i + 1 == n_ || j + 1 == n_;
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

  private:
    double half_width_;
    std::size_t n_;
    double spacing_;
};

/// Grid function with value semantics. Complex fields vanish on the boundary ring.
template <class T>
class Field
{
  public:
    explicit Field(GridSpec grid)
        : grid_(grid)
        , values_(grid.size(), T{})
    {
    }

    Field(GridSpec grid, std::vector<T> values)
        : grid_(grid)
        , values_(std::move(values))
    {
        if (values_.size() != grid_.size()) {
            throw std::invalid_argument("field size does not match grid");
        }
    }

    /// Samples fn(Point) at every node. The boundary ring is zeroed when `dirichlet` is set.
    template <class Fn>
    static Field sample(GridSpec grid, Fn&& fn, bool dirichlet = true)
    {
        Field f(grid);
        const auto n = grid.n();
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                if (dirichlet && grid.on_boundary(i, j)) {
                    continue;
                }
                f.values_[grid.index(i, j)] = static_cast<T>(fn(grid.node(i, j)));
            }
        }
        return f;
    }

    const GridSpec& grid() const { return grid_; }
    std::span<const T> values() const { return values_; }
    std::span<T> values() { return values_; }
    const T& operator()(std::size_t i, std::size_t j) const { return values_[grid_.index(i, j)]; }
    T& operator()(std::size_t i, std::size_t j) { return values_[grid_.index(i, j)]; }
    const T& operator[](std::size_t k) const { return values_[k]; }
    T& operator[](std::size_t k) { return values_[k]; }

    void zero_boundary()
    {
        const auto n = grid_.n();
        for (std::size_t k = 0; k < n; ++k) {
            values_[grid_.index(k, 0)] = T{};
            values_[grid_.index(k, n - 1)] = T{};
            values_[grid_.index(0, k)] = T{};
            values_[grid_.index(n - 1, k)] = T{};
        }
    }

  private:
    GridSpec grid_;
    std::vector<T> values_;
};

using ComplexField = Field<cplx>;
using RealField = Field<double>;

ComplexField to_complex(const RealField& f);
RealField real_part(const ComplexField& f);
RealField imag_part(const ComplexField& f);
RealField modulus(const ComplexField& f);

/// 5-point Laplacian with homogeneous Dirichlet data; boundary nodes are 0.
ComplexField laplacian(const ComplexField& f);
/// i Ω (x⊥ · ∇f) with centered first differences; boundary nodes are 0.
ComplexField rotation_term(const ComplexField& f, double omega);

/// Centered-difference gradient components (∂1 f, ∂2 f).
struct Gradient
{
    ComplexField d1;
    ComplexField d2;
};
Gradient gradient(const ComplexField& f);

/// Rectangle rule: h^2 Σ f.
double integrate(const RealField& f);

/// Re ∫ conj(a) b.
double inner_re(const ComplexField& a, const ComplexField& b);
/// ∫ conj(a) b.
cplx inner(const ComplexField& a, const ComplexField& b);

struct Norms
{
    double l2{0.0};
    double lq{0.0};
    double h1{0.0};
};
/// L2, Lq and H1 norms; the H1 seminorm uses the centered gradient.
Norms norms(const ComplexField& f, double q = 2.0);
double l2_norm(const ComplexField& f);
double sup_norm(const ComplexField& f);

/// f / ||f||_2; throws std::domain_error on a zero field.
ComplexField normalize(const ComplexField& f);

} // namespace rgs
