#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sspkit/process.hpp"

namespace sspkit {

// (level, pos) for level i, (level, primed = true, pos) for level i'
struct KernelPoint {
    int level = 1;
    bool primed = false;
    long pos = 0;

    // 2i - 1 for i, 2i for i'
    int time() const { return primed ? 2 * level : 2 * level - 1; }
    bool operator==(const KernelPoint&) const = default;
    std::string to_string() const;
    nlohmann::json to_json() const;
    // {"level": 2, "primed": false, "pos": -1} or "2:-1" / "1':0"
    static KernelPoint from_json(const nlohmann::json& j);
    static KernelPoint parse(const std::string& text);
};

void check_points(const std::vector<KernelPoint>& points, int k);

enum class BereleMethod { quadrature, residues };

struct QuadratureConfig {
    int nodes_z = 512;
    int nodes_w = 512;
    // radii of the smaller and larger circle; midpoints of the admissible window when unset
    std::optional<double> inner_radius;
    std::optional<double> outer_radius;
    double tol = 1e-10;
    bool doubling_check = false;
    double berele_delta = 0.125;
    BereleMethod berele_method = BereleMethod::quadrature;

    nlohmann::json to_json() const;
    static QuadratureConfig from_json(const nlohmann::json& j);
};

class ContourInfeasible : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// which alpha range a primed level shifts: its own (default) or the other point's
enum class PrimeShift { own_level, as_printed };

struct ContourCase {
    int row_alpha_first = 1;  // alpha^{[row_alpha_first, k]} paired with w
    int col_alpha_first = 1;  // alpha^{[col_alpha_first, k]} paired with z
    bool w_inside = true;     // |w| < min(|z|, 1/|z|); otherwise |z| < |w| < 1/|z|
};

ContourCase contour_case(const KernelPoint& p, const KernelPoint& q, PrimeShift shift = PrimeShift::own_level);

struct KernelValue {
    double re = 0;
    double im = 0;
    // |K(M) - K(M/2)| when the doubling check is on
    double doubling_delta = 0;
    double inner_radius = 0;
    double outer_radius = 0;
    nlohmann::json to_json() const;
};

// admissible (inner, outer) radii for the spec tuple; throws ContourInfeasible
std::pair<double, double> default_radii(const SpecTuple& s);

KernelValue kssp_eval_detailed(const KernelPoint& p, const KernelPoint& q, const SpecTuple& s,
                               const QuadratureConfig& cfg = {}, PrimeShift shift = PrimeShift::own_level);
double kssp_eval(const KernelPoint& p, const KernelPoint& q, const SpecTuple& s, const QuadratureConfig& cfg = {});

// kernel of the x = 1, y = 1/2 oscillating process with n Laurent variables, multiplied by (-2)^(i-j)
// so that it agrees entrywise with kssp_eval
double kssp_berele(int i, long u, int j, long v, int n, const QuadratureConfig& cfg = {});
KernelValue kssp_berele_quadrature(int i, long u, int j, long v, int n, const QuadratureConfig& cfg = {});
// exact residue evaluation in multiprecision; valid for every n
double kssp_berele_residues(int i, long u, int j, long v, int n, unsigned extra_bits = 0);

using KernelFn = std::function<double(const KernelPoint&, const KernelPoint&)>;

Eigen::MatrixXd kernel_matrix(const std::vector<KernelPoint>& points, const KernelFn& kernel, bool parallel = true);
double correlation(const std::vector<KernelPoint>& points, const KernelFn& kernel, bool parallel = true);
double correlation(const std::vector<KernelPoint>& points, const SpecTuple& s, const QuadratureConfig& cfg = {});
double correlation_berele(const std::vector<KernelPoint>& points, int n, const QuadratureConfig& cfg = {});

// whether (level, pos) belongs to {lambda_i - i : i >= 1}
bool in_configuration(const Partition& lam, long pos);
bool tuple_contains(const std::vector<Partition>& lambdas, const std::vector<Partition>& mus,
                    const std::vector<KernelPoint>& points);

struct EnumeratedCorrelation {
    double value = 0;
    double tail_bound = 0;
};

EnumeratedCorrelation enumerated_correlation(const std::vector<KernelPoint>& points, const SupportEnumeration& sup);

struct McEstimate {
    double estimate = 0;
    double stderr_ = 0;
    long long samples = 0;
    nlohmann::json to_json() const;
};

struct McOptions {
    long long samples = 100000;
    std::uint64_t seed = 1;
    int chunks = 64;
    bool parallel = true;
};

// oscillating process via Berele sampling; mu^{(j)} = lambda^{(j)} for primed points
std::vector<McEstimate> mc_correlations(const std::vector<std::vector<KernelPoint>>& point_sets, int n, int k,
                                        const std::vector<double>& x, const std::vector<double>& y,
                                        const McOptions& opt);
McEstimate mc_correlation(const std::vector<KernelPoint>& points, int n, int k, const std::vector<double>& x,
                          const std::vector<double>& y, const McOptions& opt);

}  // namespace sspkit
