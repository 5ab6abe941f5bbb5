#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace sspkit {

using cplx = std::complex<double>;

// h(z) = -2 log(1-z) + x log(1-z/2) + x log(1-2z) - (x+y) log z and its first four derivatives
struct HDerivatives {
    cplx h, d1, d2, d3, d4;
};

HDerivatives h_derivatives(double x, double y, cplx z);

class DegenerateCubic : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ContourTruncationInsufficient : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// coefficients of the numerator of h', highest degree first
std::vector<double> critical_cubic(double x, double y);

struct CriticalPoints {
    double z0 = 0;  // real root in (2, inf)
    cplx z_plus, z_minus;
    // 1: z_pm in (1/2,1); 2: complex pair; 3: z_pm in (0,1/2); 4: z_- < 0 < z_+ < 1/2; 0: none of these
    int topology = 0;
};

CriticalPoints critical_points(double x, double y);

// the explicit principal-branch formula, conjugated to Im > 0; empty when the pair is real or ill-conditioned
std::optional<cplx> z_plus_explicit(double x, double y);

// boundary ordinate y(x, z) at a double critical point z
double edge_ordinate(double x, double z);

struct LimitShape {
    double x = 0;
    double y_minus = 0, y_plus = 0;
    double z_down = 0, z_up = 0;
    nlohmann::json to_json() const;
};

LimitShape limit_shape(double x);
// the two displayed closed-form roots in their printed order (z_up formula, z_down formula)
std::pair<double, double> printed_branch_roots(double x);

bool in_liquid_region(double x, double y);
// arg(z_+)/pi inside the liquid region; throws std::domain_error outside
double density(double x, double y);
// 1 on the frozen triangle, density in the liquid region, 0 elsewhere
double limit_density(double x, double y);

struct AiryScaling {
    double z_star = 0, y = 0, d1 = 0, c1 = 0, c2 = 0;
    bool holes = false;
    nlohmann::json to_json() const;
};

AiryScaling airy_scaling(double x, bool upper_branch);

struct LimitQuadrature {
    int panels = 12;
    int nodes_per_panel = 16;
    double tol = 1e-12;
    // 0 picks the ray length from the decay of the integrand
    double ray_length = 0;
};

double sine_kernel(cplx z_plus, long tau, long a, long tau2, long a2);
double airy_kernel(double tau, double a, double tau2, double a2, const LimitQuadrature& q = {});
double gue_corners_kernel(int i, double a, int j, double a2);
// sign of the Gaussian term in the Pearcey variant: minus from the saddle-point computation, plus as displayed
enum class PearceySign { derived, as_printed };

double pearcey_variant_kernel(double tau, double a, double tau2, double a2, const LimitQuadrature& q = {},
                              PearceySign sign = PearceySign::derived);

// largest |det A_S - det B_S| over nonempty index subsets S
double principal_minor_distance(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b);

enum class LimitKind { sine, airy, gue_corners, pearcey };
std::string to_string(LimitKind k);
LimitKind limit_kind_from_string(const std::string& s);

struct ConvergenceStep {
    int n = 0;
    double distance = 0;
};

struct ConvergenceReport {
    LimitKind kind = LimitKind::sine;
    nlohmann::json setup;
    std::vector<ConvergenceStep> steps;
    bool monotone = false;
    double threshold = 0;
    bool pass = false;
    std::string note;
    nlohmann::json to_json() const;
};

// test points are (tau, alpha) pairs in the limit coordinates
ConvergenceReport sine_convergence(double x, double y, const std::vector<std::pair<long, long>>& points,
                                   const std::vector<int>& ns, double threshold = 0.02);
ConvergenceReport airy_convergence(double x, bool upper_branch, const std::vector<std::pair<double, double>>& points,
                                   const std::vector<int>& ns, double threshold = 0.05);
ConvergenceReport gue_corners_convergence(const std::vector<std::pair<int, double>>& points,
                                          const std::vector<int>& ns, double threshold = 0.05);
ConvergenceReport pearcey_convergence(const std::vector<std::pair<double, double>>& points,
                                      const std::vector<int>& ns, double threshold = 0.05,
                                      PearceySign sign = PearceySign::derived);

struct DensityWindow {
    double x = 0, y = 0;
    int half_width = 4;
};

struct WindowEstimate {
    DensityWindow window;
    double empirical = 0;
    double predicted = 0;
    long long cells = 0;
    nlohmann::json to_json() const;
};

// occupation frequency of (j, lambda^{(j)}_i - i) over each window from Berele samples with x = 1, y = 1/2
std::vector<WindowEstimate> limit_shape_probe(int n, const std::vector<DensityWindow>& windows, int samples,
                                              std::uint64_t seed, bool parallel = true);

}  // namespace sspkit
