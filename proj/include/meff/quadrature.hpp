#pragma once

#include <cstdint>
#include <functional>

#include "meff/error.hpp"

namespace meff {

// Dimensionless cutoffs in units of the electron mass; lam_split is the region ratio.
struct CutoffConfig {
    double kappa_over_m = 1.0;
    double lambda_over_m = 10.0;
    double lam_split = 3.0;
};

// Throws invalid_argument unless 0 < kappa <= lambda and lam_split >= 3.
// kappa == lambda is accepted and denotes the empty range.
void validate(const CutoffConfig& cfg);

// I: 1/lam < r1/r2 < lam; II1: r1/r2 <= 1/lam; II2: r1/r2 >= lam.
enum class Region { I, II1, II2, FULL };
const char* region_name(Region r);

inline constexpr double default_rel_tol_1d = 1e-10;
inline constexpr double default_rel_tol_2d = 1e-8;
inline constexpr double abs_floor = 1e-14;

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

struct Quad1dOptions {
    double rel_tol = default_rel_tol_1d;
    double abs_tol = abs_floor;
    int max_subdivisions = 4000;
};

struct Quad2dOptions {
    double rel_tol = default_rel_tol_2d;
    double abs_tol = abs_floor;
    std::int64_t max_evals = 40'000'000;
};

// Global adaptive Gauss-Kronrod (G10/K21). a == b returns exactly 0 with no evaluations.
IntegralResult integrate_1d(const Fn1& f, double a, double b, const Quad1dOptions& opt = {});
IntegralResult integrate_1d(const Fn1& f, double a, double b, double rel_tol);

// Integral of f(r1, r2) dr1 dr2 over the region of [kappa, lambda]^2.
// Works in logarithmic coordinates; the diagonal and the region boundaries are cell edges.
IntegralResult integrate_2d(const Fn2& f, const CutoffConfig& cfg, Region region,
                            const Quad2dOptions& opt = {});
IntegralResult integrate_2d(const Fn2& f, const CutoffConfig& cfg, Region region, double rel_tol);

struct Vec3 {
    double x, y, z;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(Vec3 a);

using Fn6 = std::function<double(const Vec3&, const Vec3&)>;

// Normalization of the two-photon measure: integral dk = (1/(4 (2 pi)^6)) int d^3k1 d^3k2.
double two_photon_measure();

// Monte Carlo over the shell kappa <= |ki| <= lambda, |k| drawn with density ~ r^2.
// Includes the two_photon_measure() prefactor; abs_err is one standard error.
// The result is bit-identical for a fixed (n_samples, seed) regardless of thread count.
IntegralResult mc_integrate_6d(const Fn6& integrand, const CutoffConfig& cfg, std::int64_t n_samples,
                               std::uint64_t seed, int threads = 0);

}  // namespace meff
